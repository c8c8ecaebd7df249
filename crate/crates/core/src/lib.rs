//! Exact mode calculus for the rank-`l` Heisenberg vertex operator algebra,
//! its twisted module, and Zhu's algebra of the theta-fixed subalgebra.

pub mod error;
pub mod eval;
pub mod fock;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod series;
pub mod twisted;
pub mod vertex;
pub mod zhu;

pub use error::{Error, Result};
pub use fock::{FockMonomial, FockVector, Mode, Rank, Sector};
pub use poly::LambdaPoly;
pub use rational::Q;
pub use scalar::Scalar;
