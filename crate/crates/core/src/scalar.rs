//! Coefficient rings for Fock vectors.
//!
//! Zhu-algebra work happens over the rationals; evaluation on `M(1, lambda)`
//! needs polynomials in the `lambda` coordinates. Operations are generic over
//! this trait and the caller picks the ring.

use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::poly::LambdaPoly;
use crate::rational::Q;

pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + Zero + One {
    fn from_q(q: &Q) -> Self;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, q: &Q) -> Self;
    fn neg(&self) -> Self;
}

impl Scalar for Q {
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Q) -> Self {
        self * q
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Scalar for LambdaPoly {
    fn from_q(q: &Q) -> Self {
        LambdaPoly::constant(q.clone())
    }
    fn add_assign(&mut self, other: &Self) {
        LambdaPoly::add_assign(self, other);
    }
    fn mul(&self, other: &Self) -> Self {
        LambdaPoly::mul(self, other)
    }
    fn scale(&self, q: &Q) -> Self {
        LambdaPoly::scale(self, q)
    }
    fn neg(&self) -> Self {
        LambdaPoly::neg(self)
    }
}
