//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// The rational field. Every coefficient in the crate is built on this.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Generalized binomial coefficient `C(x, k)` for rational `x`.
pub fn binomial(x: &Q, k: u32) -> Q {
    let mut acc = Q::one();
    for t in 0..k {
        acc *= x - q(t as i64);
        acc /= q(t as i64 + 1);
    }
    acc
}

/// Integer binomial `C(n, k)` allowing negative `n`.
pub fn binomial_int(n: i64, k: u32) -> Q {
    binomial(&q(n), k)
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_q(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Least common multiple of the denominators.
pub fn denom_lcm<'a>(xs: impl IntoIterator<Item = &'a Q>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Divides out the content of an integer vector and makes the first entry positive.
pub fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    let flip = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if flip {
        g = -g;
    }
    if !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_int(5, 2), q(10));
        assert_eq!(binomial_int(-2, 1), q(-2));
        assert_eq!(binomial_int(-3, 2), q(6));
        assert_eq!(binomial(&frac(1, 2), 2), frac(-1, 8));
        assert_eq!(binomial_int(3, 0), q(1));
    }

    #[test]
    fn rational_text() {
        assert_eq!(fmt_q(&frac(-35, 32)), "-35/32");
        assert_eq!(fmt_q(&q(7)), "7");
        assert_eq!(parse_q("-35/32").unwrap(), frac(-35, 32));
        assert_eq!(parse_q(" 4 ").unwrap(), q(4));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn primitive_rows() {
        let mut v = vec![BigInt::from(-4), BigInt::from(6), BigInt::from(0)];
        make_primitive(&mut v);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
    }
}
