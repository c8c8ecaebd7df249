//! Dense truncated power series in two variables with exact coefficients.

use num_traits::{One, Zero};

use crate::rational::{binomial, frac, q, Q};

/// Coefficients `c[m][n]` of `x^m y^n` for `m + n <= degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bivariate {
    degree: usize,
    c: Vec<Vec<Q>>,
}

impl Bivariate {
    pub fn zero(degree: usize) -> Self {
        Bivariate { degree, c: vec![vec![Q::zero(); degree + 1]; degree + 1] }
    }

    pub fn constant(degree: usize, v: Q) -> Self {
        let mut s = Self::zero(degree);
        s.c[0][0] = v;
        s
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, m: usize, n: usize) -> &Q {
        &self.c[m][n]
    }

    pub fn set(&mut self, m: usize, n: usize, v: Q) {
        self.c[m][n] = v;
    }

    /// `(1 + x)^e` as a series in `x` alone (or `y` when `in_y`).
    pub fn binomial_series(degree: usize, e: &Q, in_y: bool) -> Self {
        let mut s = Self::zero(degree);
        for k in 0..=degree {
            let v = binomial(e, k as u32);
            if in_y {
                s.c[0][k] = v;
            } else {
                s.c[k][0] = v;
            }
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for m in 0..=self.degree {
            for n in 0..=self.degree - m {
                r.c[m][n] += &o.c[m][n];
            }
        }
        r
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut r = self.clone();
        for row in r.c.iter_mut() {
            for x in row.iter_mut() {
                *x *= s;
            }
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.degree;
        let mut r = Self::zero(d);
        for m1 in 0..=d {
            for n1 in 0..=d - m1 {
                let a = &self.c[m1][n1];
                if a.is_zero() {
                    continue;
                }
                for m2 in 0..=d - m1 - n1 {
                    for n2 in 0..=d - m1 - n1 - m2 {
                        let b = &o.c[m2][n2];
                        if !b.is_zero() {
                            r.c[m1 + m2][n1 + n2] += a * b;
                        }
                    }
                }
            }
        }
        r
    }

    /// `log(1 + u)` for a series `u` without constant term.
    pub fn log1p(u: &Self) -> Self {
        debug_assert!(u.c[0][0].is_zero());
        let d = u.degree;
        let mut out = Self::zero(d);
        let mut power = u.clone();
        for k in 1..=d {
            let sign = if k % 2 == 1 { q(1) } else { q(-1) };
            out = out.add(&power.scale(&(sign * frac(1, k as i64))));
            power = power.mul(u);
        }
        out
    }

    /// Multiplicative inverse of a series with constant term one.
    pub fn inverse(&self) -> Self {
        debug_assert!(self.c[0][0].is_one());
        let d = self.degree;
        let mut r = Self::zero(d);
        for t in 0..=d {
            for m in 0..=t {
                let n = t - m;
                let mut acc = if t == 0 { Q::one() } else { Q::zero() };
                for m1 in 0..=m {
                    for n1 in 0..=n {
                        if m1 + n1 == 0 {
                            continue;
                        }
                        acc -= &self.c[m1][n1] * &r.c[m - m1][n - n1];
                    }
                }
                r.c[m][n] = acc;
            }
        }
        r
    }

    /// Partial derivative in `x`; the result loses one degree of precision.
    pub fn d_dx(&self) -> Self {
        let d = self.degree;
        let mut r = Self::zero(d);
        for m in 1..=d {
            for n in 0..=d - m {
                r.c[m - 1][n] = &self.c[m][n] * q(m as i64);
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_squares_back() {
        let s = Bivariate::binomial_series(6, &frac(1, 2), false);
        let sq = s.mul(&s);
        assert_eq!(sq.get(0, 0), &q(1));
        assert_eq!(sq.get(1, 0), &q(1));
        for k in 2..=6 {
            assert!(sq.get(k, 0).is_zero());
        }
    }

    #[test]
    fn inverse_of_one_plus_x() {
        let s = Bivariate::binomial_series(5, &q(1), false);
        let inv = s.inverse();
        for k in 0..=5 {
            assert_eq!(inv.get(k, 0), &q(if k % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn log_of_one_plus_x() {
        let x = Bivariate::binomial_series(4, &q(1), false).add(&Bivariate::constant(4, q(-1)));
        let l = Bivariate::log1p(&x);
        assert_eq!(l.get(1, 0), &q(1));
        assert_eq!(l.get(2, 0), &frac(-1, 2));
        assert_eq!(l.get(3, 0), &frac(1, 3));
    }
}
