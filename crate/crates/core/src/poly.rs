//! Multivariate polynomials in the highest-weight parameters `l1, ..., lN`
//! with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_q, Q};

/// Exponent vector with trailing zeros stripped, so equal monomials compare equal
/// regardless of how many variables were in scope when they were built.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn new(mut e: Vec<u32>) -> Self {
        while e.last() == Some(&0) {
            e.pop();
        }
        Exponents(e)
    }

    pub fn one() -> Self {
        Exponents(Vec::new())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Exponent of variable `var` (1-based).
    pub fn get(&self, var: usize) -> u32 {
        self.0.get(var - 1).copied().unwrap_or(0)
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let e = (0..n)
            .map(|i| self.0.get(i).copied().unwrap_or(0) + other.0.get(i).copied().unwrap_or(0))
            .collect();
        Exponents::new(e)
    }
}

/// A polynomial in `l1..lN`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LambdaPoly {
    terms: BTreeMap<Exponents, Q>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(Exponents::one(), c);
        p
    }

    /// The variable `l{var}` (1-based).
    pub fn var(var: usize) -> Self {
        let mut e = vec![0; var];
        e[var - 1] = 1;
        let mut p = Self::zero();
        p.add_term(Exponents::new(e), Q::one());
        p
    }

    pub fn monomial(exps: Exponents, c: Q) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exponents) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, e: Exponents, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LambdaPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LambdaPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                r.add_term(e1.mul(e2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Q::one()), |acc, _| acc.mul(self))
    }

    /// Largest variable index that occurs.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|e| e.0.len()).max().unwrap_or(0)
    }

    /// Terms in display order: higher total degree first, then lexicographically larger exponents.
    pub fn sorted_terms(&self) -> Vec<(&Exponents, &Q)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(a.0)));
        v
    }
}

impl std::ops::Add for LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, o: LambdaPoly) -> LambdaPoly {
        LambdaPoly::add(&self, &o)
    }
}

impl std::ops::Mul for LambdaPoly {
    type Output = LambdaPoly;
    fn mul(self, o: LambdaPoly) -> LambdaPoly {
        LambdaPoly::mul(&self, &o)
    }
}

impl Zero for LambdaPoly {
    fn zero() -> Self {
        LambdaPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LambdaPoly {
    fn one() -> Self {
        LambdaPoly::constant(Q::one())
    }
}

fn fmt_monomial(e: &Exponents) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.0.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("l{}", i + 1)),
            _ => parts.push(format!("l{}^{}", i + 1, k)),
        }
    }
    parts.join("*")
}

/// Canonical text such as `l1^4 - 1/2*l1^2` or `0`.
impl fmt::Display for LambdaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = fmt_monomial(e);
            if mono.is_empty() {
                write!(f, "{}", fmt_q(&mag))?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{}", fmt_q(&mag), mono)?;
            }
        }
        Ok(())
    }
}
