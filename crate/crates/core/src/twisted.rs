//! The theta-twisted module `H(theta)`.
//!
//! `Y_theta(v, z) = W_theta(e^{Delta_z} v, z)` where `W_theta` is the normally
//! ordered product over half-integer modes and
//! `Delta_z = sum_i sum_{m,n} c_mn h_i(m) h_i(n) z^{-m-n}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{FockMonomial, FockVector, Sector};
use crate::rational::{fmt_q, frac, parse_q, q, Q};
use crate::scalar::Scalar;
use crate::series::Bivariate;
use crate::vertex::component_into;

/// Exact `c_mn` for `m, n >= 1`, `m + n <= max_degree`.
///
/// Entries with `m = 0` or `n = 0` are not stored: `h(0)` is zero on `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaTable {
    max_degree: u32,
    entries: BTreeMap<(u32, u32), Q>,
}

impl DeltaTable {
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn get(&self, m: u32, n: u32) -> Option<&Q> {
        self.entries.get(&(m, n))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.entries.iter()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .all(|((m, n), c)| self.entries.get(&(*n, *m)) == Some(c))
    }

    /// Plain text, one `m n p/q` line per entry.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for ((m, n), c) in &self.entries {
            let _ = writeln!(s, "{m} {n} {}", fmt_q(c));
        }
        s
    }

    /// Parses [`DeltaTable::to_text`] output, rejecting asymmetric tables.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut max_degree = 0;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("line {}: expected `m n p/q`", i + 1)));
            }
            let m: u32 = parts[0].parse().map_err(|_| Error::Parse(format!("line {}: bad m", i + 1)))?;
            let n: u32 = parts[1].parse().map_err(|_| Error::Parse(format!("line {}: bad n", i + 1)))?;
            if m == 0 || n == 0 {
                return Err(Error::Parse(format!("line {}: indices start at 1", i + 1)));
            }
            entries.insert((m, n), parse_q(parts[2])?);
            max_degree = max_degree.max(m + n);
        }
        let t = DeltaTable { max_degree, entries };
        // every (m, n) below the degree must be present
        for d in 2..=max_degree {
            for m in 1..d {
                if t.get(m, d - m).is_none() {
                    return Err(Error::Cache(format!("missing entry ({m}, {})", d - m)));
                }
            }
        }
        if !t.is_symmetric() {
            return Err(Error::Cache("delta table is not symmetric".into()));
        }
        Ok(t)
    }

    /// Loads the table from `path` if it is valid and large enough, otherwise
    /// computes it and rewrites the file.
    pub fn load_or_compute(path: &Path, max_degree: u32) -> Result<Self> {
        if let Ok(text) = std::fs::read_to_string(path) {
            if let Ok(t) = Self::from_text(&text) {
                if t.max_degree >= max_degree {
                    return Ok(t);
                }
            }
        }
        let t = delta_coefficients(max_degree);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::Cache(e.to_string()))?;
        }
        std::fs::write(path, t.to_text()).map_err(|e| Error::Cache(e.to_string()))?;
        Ok(t)
    }
}

/// Full bivariate expansion of `-log((sqrt(1+x) + sqrt(1+y)) / 2)`.
pub fn delta_series(degree: usize) -> Bivariate {
    let half = frac(1, 2);
    let sx = Bivariate::binomial_series(degree, &half, false);
    let sy = Bivariate::binomial_series(degree, &half, true);
    let mut u = sx.add(&sy).scale(&half);
    u.set(0, 0, Q::zero());
    Bivariate::log1p(&u).scale(&q(-1))
}

pub fn delta_coefficients(max_degree: u32) -> DeltaTable {
    let s = delta_series(max_degree as usize);
    let mut entries = BTreeMap::new();
    for d in 2..=max_degree {
        for m in 1..d {
            entries.insert((m, d - m), s.get(m as usize, (d - m) as usize).clone());
        }
    }
    DeltaTable { max_degree, entries }
}

/// The finite expansion of `e^{Delta_z} v`, keyed by the power of `z`.
pub type LaurentBucket = BTreeMap<i64, FockVector<Q>>;

/// One application of `Delta_z` to a single bucket.
fn delta_once(v: &FockVector<Q>, table: &DeltaTable) -> Result<LaurentBucket> {
    let mut out = LaurentBucket::new();
    for (mono, c) in v.terms() {
        let modes = mono.modes();
        for p in 0..modes.len() {
            for r in 0..modes.len() {
                if p == r || modes[p].gen != modes[r].gen {
                    continue;
                }
                // h_i(m) h_i(n): n contracts position r, m contracts position p
                let m = (-modes[p].twice / 2) as u32;
                let n = (-modes[r].twice / 2) as u32;
                let cmn = table.get(m, n).ok_or(Error::DeltaTableTooSmall {
                    have: table.max_degree,
                    need: m + n,
                })?;
                if cmn.is_zero() {
                    continue;
                }
                let rest: Vec<_> = modes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != p && *i != r)
                    .map(|(_, x)| *x)
                    .collect();
                let coeff = c * cmn * q(m as i64 * n as i64);
                out.entry(-((m + n) as i64))
                    .or_insert_with(|| FockVector::zero(Sector::Untwisted))
                    .add_term(FockMonomial::from_modes(rest), coeff);
            }
        }
    }
    Ok(out)
}

/// `e^{Delta_z} v` as a finite Laurent polynomial in `z`.
pub fn apply_delta(v: &FockVector<Q>, table: &DeltaTable) -> Result<LaurentBucket> {
    if v.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch("Delta_z acts on states of H".into()));
    }
    if let Some(w2) = v.max_twice_weight() {
        let need = w2 / 2;
        if table.max_degree < need {
            return Err(Error::DeltaTableTooSmall { have: table.max_degree, need });
        }
    }
    let mut total = LaurentBucket::new();
    total.insert(0, v.clone());
    let mut layer = total.clone();
    let mut k = 1i64;
    loop {
        let mut next = LaurentBucket::new();
        for (e, w) in &layer {
            for (e2, w2) in delta_once(w, table)? {
                next.entry(e + e2)
                    .or_insert_with(|| FockVector::zero(Sector::Untwisted))
                    .add_scaled(&w2, &frac(1, k));
            }
        }
        next.retain(|_, w| !w.is_zero());
        if next.is_empty() {
            break;
        }
        for (e, w) in &next {
            total
                .entry(*e)
                .or_insert_with(|| FockVector::zero(Sector::Untwisted))
                .add_assign(w);
        }
        layer = next;
        k += 1;
    }
    total.retain(|_, w| !w.is_zero());
    Ok(total)
}

/// The component `v_m` of `Y_theta(v, z)` on a twisted `target`.
pub fn twisted_mode_operator<C: Scalar>(
    v: &FockVector<Q>,
    m: i64,
    target: &FockVector<C>,
    table: &DeltaTable,
) -> Result<FockVector<C>> {
    if !v.is_even() {
        return Err(Error::OddParity);
    }
    if target.sector() != Sector::Twisted {
        return Err(Error::SectorMismatch("twisted operator on an untwisted vector".into()));
    }
    let mut out = FockVector::zero(Sector::Twisted);
    for (e, w) in apply_delta(v, table)? {
        // z^e W(w, z) contributes W(w)_{m+e} to the coefficient of z^{-m-1}
        let j = m + e;
        for (s, cs) in w.terms() {
            for (t, ct) in target.terms() {
                component_into::<C>(s, 2 * j, t, Sector::Twisted, None, &ct.scale(cs), &mut out);
            }
        }
    }
    Ok(out)
}

/// `o_theta(v) = v_{wt v - 1}` on the twisted module, linear in `v`.
pub fn twisted_zero_mode<C: Scalar>(v: &FockVector<Q>, target: &FockVector<C>, table: &DeltaTable) -> Result<FockVector<C>> {
    let mut out = FockVector::zero(Sector::Twisted);
    for (w2, comp) in v.homogeneous_components() {
        out.add_assign(&twisted_mode_operator(&comp, w2 as i64 / 2 - 1, target, table)?);
    }
    Ok(out)
}

/// Conformal weight of the twisted vacuum, `ell / 16`.
pub fn twisted_vacuum_shift(ell: usize) -> Q {
    frac(ell as i64, 16)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::untwisted;
    use crate::vertex::omega;

    #[test]
    fn constant_and_first_coefficients() {
        let s = delta_series(4);
        assert!(s.get(0, 0).is_zero());
        let t = delta_coefficients(4);
        assert_eq!(t.get(1, 1), Some(&frac(1, 16)));
        assert!(t.is_symmetric());
        assert_eq!(t.get(0, 1), None);
    }

    #[test]
    fn delta_examples() {
        let t = delta_coefficients(6);
        let one: FockVector<Q> = FockVector::vacuum(Sector::Untwisted);
        let b = apply_delta(&one, &t).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[&0], one);

        let b = apply_delta(&omega(1), &t).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[&0], omega(1));
        assert_eq!(b[&-2], one.scale(&frac(1, 16)));

        let h = FockVector::from_monomial(Sector::Untwisted, untwisted(&[(1, 1)]));
        let b = apply_delta(&h, &t).unwrap();
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn table_too_small() {
        let t = delta_coefficients(2);
        let v = FockVector::from_monomial(Sector::Untwisted, untwisted(&[(1, 2), (1, 1)]));
        assert!(matches!(apply_delta(&v, &t), Err(Error::DeltaTableTooSmall { .. })));
    }

    #[test]
    fn text_round_trip() {
        let t = delta_coefficients(8);
        let back = DeltaTable::from_text(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert!(DeltaTable::from_text("1 2 1/3\n2 1 1/4\n1 1 0\n").is_err());
    }
}

#[cfg(test)]
mod table_values {
    use super::*;
    use crate::fock::{make_monomial, untwisted, Rank};
    use crate::vertex::omega;

    fn tw(gen: usize) -> FockVector<Q> {
        let m = make_monomial(Rank::new(3).unwrap(), Sector::Twisted, &[(gen, frac(-1, 2))]).unwrap();
        FockVector::from_monomial(Sector::Twisted, m)
    }

    fn j(a: usize) -> FockVector<Q> {
        FockVector::from_pairs(&[
            (q(1), untwisted(&[(a, 1), (a, 1), (a, 1), (a, 1)])),
            (q(-2), untwisted(&[(a, 3), (a, 1)])),
            (frac(3, 2), untwisted(&[(a, 2), (a, 2)])),
        ])
    }

    #[test]
    fn vacuum_scalars() {
        let t = delta_coefficients(8);
        let vac: FockVector<Q> = FockVector::vacuum(Sector::Twisted);
        assert_eq!(twisted_zero_mode(&omega(1), &vac, &t).unwrap(), vac.scale(&frac(1, 16)));
        assert_eq!(twisted_zero_mode(&j(1), &vac, &t).unwrap(), vac.scale(&frac(3, 128)));
    }

    #[test]
    fn minus_level() {
        let t = delta_coefficients(8);
        assert_eq!(twisted_zero_mode(&omega(1), &tw(1), &t).unwrap(), tw(1).scale(&frac(9, 16)));
        assert_eq!(twisted_zero_mode(&omega(1), &tw(2), &t).unwrap(), tw(2).scale(&frac(1, 16)));
        assert_eq!(
            twisted_zero_mode(&j(1), &tw(1), &t).unwrap(),
            tw(1).scale(&(frac(3, 128) - frac(3, 8)))
        );
        // S_12(1,4) sends h_2(-1/2) to -35/32 h_1(-1/2) and h_1(-1/2) to -5/32 h_2(-1/2)
        let s = FockVector::from_monomial(Sector::Untwisted, untwisted(&[(1, 1), (2, 4)]));
        assert_eq!(twisted_zero_mode(&s, &tw(2), &t).unwrap(), tw(1).scale(&frac(-35, 32)));
        assert_eq!(twisted_zero_mode(&s, &tw(1), &t).unwrap(), tw(2).scale(&frac(-5, 32)));
    }
}
