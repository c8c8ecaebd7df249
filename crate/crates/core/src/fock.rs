//! States of the Heisenberg VOA `M(1)`, its modules `M(1, lambda)` and the
//! twisted module, as finite combinations of creation-mode monomials.
//!
//! Mode indices are stored as twice their value, so a single integer type
//! covers both sectors: untwisted modes are even, twisted modes are odd.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, frac, q, Q};
use crate::scalar::Scalar;

/// Number of orthonormal generators `h_1, ..., h_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rank(usize);

impl Rank {
    pub fn new(ell: usize) -> Result<Self> {
        if ell == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(Rank(ell))
    }

    pub fn ell(self) -> usize {
        self.0
    }

    pub fn check_gen(self, gen: usize) -> Result<()> {
        if gen == 0 || gen > self.0 {
            return Err(Error::GeneratorOutOfRange { gen, rank: self.0 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sector {
    /// Integral modes: `M(1)` and `M(1, lambda)`.
    Untwisted,
    /// Modes in `1/2 + Z`: the theta-twisted module.
    Twisted,
}

impl Sector {
    /// Whether a twice-valued mode index belongs to this sector.
    pub fn admits(self, twice: i64) -> bool {
        match self {
            Sector::Untwisted => twice % 2 == 0,
            Sector::Twisted => twice % 2 != 0,
        }
    }
}

/// The operator `h_gen(twice / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mode {
    pub gen: u16,
    pub twice: i32,
}

impl Mode {
    pub fn index(self) -> Q {
        frac(self.twice as i64, 2)
    }

    pub fn is_creation(self) -> bool {
        self.twice < 0
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h{}({})", self.gen, fmt_q(&self.index()))
    }
}

/// Which generators occur an odd number of times. `O(V)` and the star
/// product respect this `(Z/2)^l` grading, so echelons are built per class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignClass(pub u64);

impl SignClass {
    pub fn xor(self, other: SignClass) -> SignClass {
        SignClass(self.0 ^ other.0)
    }

    pub fn is_even(self) -> bool {
        self.0.count_ones() % 2 == 0
    }

    /// All classes of a given rank with an even number of odd generators.
    pub fn all_even(rank: Rank) -> Vec<SignClass> {
        (0..1u64 << rank.ell())
            .map(SignClass)
            .filter(|s| s.is_even())
            .collect()
    }

    pub fn label(self, rank: Rank) -> String {
        (0..rank.ell())
            .map(|i| if self.0 >> i & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// A product of creation modes applied to the vacuum.
///
/// Modes are kept sorted by `(gen, twice)`, so `h1(-3)h1(-1)` and
/// `h1(-1)h1(-3)` build the same value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FockMonomial {
    modes: Vec<Mode>,
    twice_weight: u32,
}

impl FockMonomial {
    pub fn vacuum() -> Self {
        FockMonomial { modes: Vec::new(), twice_weight: 0 }
    }

    /// Builds a monomial from creation modes, sorting them into canonical order.
    pub fn from_modes(mut modes: Vec<Mode>) -> Self {
        debug_assert!(modes.iter().all(|m| m.is_creation()));
        modes.sort_unstable();
        let twice_weight = modes.iter().map(|m| (-m.twice) as u32).sum();
        FockMonomial { modes, twice_weight }
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_vacuum(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn twice_weight(&self) -> u32 {
        self.twice_weight
    }

    pub fn weight(&self) -> Q {
        frac(self.twice_weight as i64, 2)
    }

    pub fn is_even(&self) -> bool {
        self.modes.len() % 2 == 0
    }

    pub fn sign_class(&self) -> SignClass {
        SignClass(self.modes.iter().fold(0u64, |acc, m| acc ^ (1u64 << (m.gen - 1))))
    }

    /// Sector implied by the modes; `None` for the vacuum.
    pub fn sector(&self) -> Option<Sector> {
        self.modes.first().map(|m| {
            if m.twice % 2 == 0 {
                Sector::Untwisted
            } else {
                Sector::Twisted
            }
        })
    }

    pub fn multiplicity(&self, mode: Mode) -> usize {
        self.modes.iter().filter(|&&m| m == mode).count()
    }

    pub fn with_mode(&self, mode: Mode) -> Self {
        let pos = self.modes.partition_point(|&m| m <= mode);
        let mut modes = Vec::with_capacity(self.modes.len() + 1);
        modes.extend_from_slice(&self.modes[..pos]);
        modes.push(mode);
        modes.extend_from_slice(&self.modes[pos..]);
        FockMonomial { modes, twice_weight: self.twice_weight + (-mode.twice) as u32 }
    }

    /// Removes one copy of `mode`, returning the multiplicity it had.
    pub fn without_mode(&self, mode: Mode) -> Option<(Self, usize)> {
        let start = self.modes.partition_point(|&m| m < mode);
        let end = self.modes.partition_point(|&m| m <= mode);
        if start == end {
            return None;
        }
        let mut modes = self.modes.clone();
        modes.remove(start);
        Some((
            FockMonomial { modes, twice_weight: self.twice_weight - (-mode.twice) as u32 },
            end - start,
        ))
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut modes = self.modes.clone();
        modes.extend_from_slice(&other.modes);
        Self::from_modes(modes)
    }

    /// Distinct modes with multiplicities.
    pub fn distinct_modes(&self) -> Vec<(Mode, usize)> {
        let mut out: Vec<(Mode, usize)> = Vec::new();
        for &m in &self.modes {
            match out.last_mut() {
                Some((last, k)) if *last == m => *k += 1,
                _ => out.push((m, 1)),
            }
        }
        out
    }
}

/// Higher mode-weight first, then lexicographic on the sorted modes. Echelon
/// pivots follow this order, so reductions eliminate heavy terms first.
impl Ord for FockMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .twice_weight
            .cmp(&self.twice_weight)
            .then_with(|| self.modes.cmp(&other.modes))
    }
}

impl PartialOrd for FockMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modes.is_empty() {
            return write!(f, "one");
        }
        for m in &self.modes {
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Builds a canonical monomial from `(gen, n)` pairs with `n` a (half-)integer.
pub fn make_monomial(rank: Rank, sector: Sector, modes: &[(usize, Q)]) -> Result<FockMonomial> {
    let mut out = Vec::with_capacity(modes.len());
    for (gen, n) in modes {
        rank.check_gen(*gen)?;
        let twice = n * q(2);
        if !twice.is_integer() || !twice.is_negative() {
            return Err(Error::NotCreation(fmt_q(n)));
        }
        let twice: i64 = twice.to_integer().try_into().map_err(|_| Error::NotCreation(fmt_q(n)))?;
        if !sector.admits(twice) {
            return Err(Error::NotCreation(format!("{} in {sector:?} sector", fmt_q(n))));
        }
        out.push(Mode { gen: *gen as u16, twice: twice as i32 });
    }
    Ok(FockMonomial::from_modes(out))
}

/// Untwisted monomial from `(gen, m)` pairs meaning `h_gen(-m)`, `m >= 1`.
pub fn untwisted(pairs: &[(usize, u32)]) -> FockMonomial {
    FockMonomial::from_modes(
        pairs
            .iter()
            .map(|&(gen, m)| Mode { gen: gen as u16, twice: -2 * m as i32 })
            .collect(),
    )
}

/// A finite linear combination of monomials of one sector.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<C = Q> {
    sector: Sector,
    terms: BTreeMap<FockMonomial, C>,
}

impl<C: Scalar> FockVector<C> {
    pub fn zero(sector: Sector) -> Self {
        FockVector { sector, terms: BTreeMap::new() }
    }

    pub fn vacuum(sector: Sector) -> Self {
        Self::from_monomial(sector, FockMonomial::vacuum())
    }

    pub fn from_monomial(sector: Sector, m: FockMonomial) -> Self {
        Self::from_term(sector, m, C::one())
    }

    pub fn from_term(sector: Sector, m: FockMonomial, c: C) -> Self {
        let mut v = Self::zero(sector);
        v.add_term(m, c);
        v
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockMonomial, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &FockMonomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Leading term in monomial order (highest weight first).
    pub fn leading(&self) -> Option<(&FockMonomial, &C)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, m: FockMonomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                x.add_assign(&c);
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert!(self.sector == other.sector || self.is_zero() || other.is_zero());
        if self.is_zero() {
            self.sector = other.sector;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &Q) {
        if self.is_zero() {
            self.sector = other.sector;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.scale(s));
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(other);
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &-Q::one());
        r
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut r = Self::zero(self.sector);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c.scale(s));
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    /// Mode-weight of a homogeneous vector. The zero vector has no weight.
    pub fn weight(&self) -> Result<Q> {
        let mut it = self.terms.keys().map(|m| m.twice_weight());
        let first = it.next().ok_or(Error::Inhomogeneous)?;
        if it.any(|w| w != first) {
            return Err(Error::Inhomogeneous);
        }
        Ok(frac(first as i64, 2))
    }

    pub fn max_twice_weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.twice_weight()).max()
    }

    /// Splits into homogeneous pieces keyed by twice the weight.
    pub fn homogeneous_components(&self) -> BTreeMap<u32, FockVector<C>> {
        let mut out: BTreeMap<u32, FockVector<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.twice_weight())
                .or_insert_with(|| FockVector::zero(self.sector))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Every term has an even number of modes (fixed by theta).
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.is_even())
    }

    pub fn split_by_sign_class(&self) -> BTreeMap<SignClass, FockVector<C>> {
        let mut out: BTreeMap<SignClass, FockVector<C>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.sign_class())
                .or_insert_with(|| FockVector::zero(self.sector))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Keeps the terms of weight at most `twice_max / 2`.
    pub fn truncate(&self, twice_max: u32) -> Self {
        FockVector {
            sector: self.sector,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.twice_weight() <= twice_max)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl FockVector<Q> {
    /// Changes the coefficient ring.
    pub fn lift<D: Scalar>(&self) -> FockVector<D> {
        let mut r = FockVector::zero(self.sector);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), D::from_q(c));
        }
        r
    }
}

impl<C: Scalar + fmt::Display> fmt::Display for FockVector<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *c == C::one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}

/// Applies `h_a(twice / 2)` to `v`.
///
/// Creation modes multiply; annihilation modes contract using
/// `[h_a(m), h_b(k)] = m delta_ab delta_{m+k,0}` with `K = 1`; the zero mode
/// multiplies by `lambda_a` when a highest weight is supplied and by zero
/// otherwise.
pub fn apply_mode<C: Scalar>(a: usize, twice: i64, v: &FockVector<C>, hw: Option<&[C]>) -> Result<FockVector<C>> {
    if !v.sector().admits(twice) {
        return Err(Error::SectorMismatch(format!(
            "mode {}/2 applied to a {:?} vector",
            twice,
            v.sector()
        )));
    }
    if a == 0 {
        return Err(Error::GeneratorOutOfRange { gen: a, rank: 0 });
    }
    let mut out = FockVector::zero(v.sector());
    match twice.cmp(&0) {
        Ordering::Less => {
            let mode = Mode { gen: a as u16, twice: twice as i32 };
            for (m, c) in v.terms() {
                out.add_term(m.with_mode(mode), c.clone());
            }
        }
        Ordering::Greater => {
            let target = Mode { gen: a as u16, twice: -twice as i32 };
            let index = frac(twice, 2);
            for (m, c) in v.terms() {
                if let Some((rest, k)) = m.without_mode(target) {
                    out.add_term(rest, c.scale(&(&index * q(k as i64))));
                }
            }
        }
        Ordering::Equal => {
            if let Some(hw) = hw {
                let lam = hw
                    .get(a - 1)
                    .ok_or(Error::GeneratorOutOfRange { gen: a, rank: hw.len() })?;
                for (m, c) in v.terms() {
                    out.add_term(m.clone(), c.mul(lam));
                }
            }
        }
    }
    Ok(out)
}

/// Mode-weight of a homogeneous vector (conformal shifts excluded).
pub fn weight<C: Scalar>(v: &FockVector<C>) -> Result<Q> {
    v.weight()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityFilter {
    Even,
    Odd,
    All,
}

/// All monomials of mode-weight `twice_weight / 2`, in monomial order.
pub fn basis(rank: Rank, sector: Sector, twice_weight: u32, parity: ParityFilter) -> Vec<FockMonomial> {
    // candidate modes, most negative first
    let mut candidates = Vec::new();
    let step = 2;
    let start = match sector {
        Sector::Untwisted => 2,
        Sector::Twisted => 1,
    };
    for gen in 1..=rank.ell() as u16 {
        let mut c = start;
        while c <= twice_weight as i32 {
            candidates.push(Mode { gen, twice: -c });
            c += step;
        }
    }
    candidates.sort_unstable();
    let mut out = Vec::new();
    let mut stack = Vec::new();
    fill(&candidates, 0, twice_weight, &mut stack, &mut out);
    out.retain(|m| match parity {
        ParityFilter::Even => m.is_even(),
        ParityFilter::Odd => !m.is_even(),
        ParityFilter::All => true,
    });
    out.sort();
    out
}

fn fill(cands: &[Mode], from: usize, remaining: u32, stack: &mut Vec<Mode>, out: &mut Vec<FockMonomial>) {
    if remaining == 0 {
        out.push(FockMonomial::from_modes(stack.clone()));
        return;
    }
    for i in from..cands.len() {
        let w = (-cands[i].twice) as u32;
        if w <= remaining {
            stack.push(cands[i]);
            fill(cands, i, remaining - w, stack, out);
            stack.pop();
        }
    }
}

/// The involution `h(-n_1)...h(-n_k) 1 -> (-1)^k h(-n_1)...h(-n_k) 1`.
pub fn theta<C: Scalar>(v: &FockVector<C>) -> FockVector<C> {
    let mut out = FockVector::zero(v.sector());
    for (m, c) in v.terms() {
        out.add_term(m.clone(), if m.is_even() { c.clone() } else { c.neg() });
    }
    out
}

/// Parses the textual monomial syntax: `one`, `h1(-3)h1(-1)`, `h2(-1/2)`.
pub fn parse_monomial(text: &str, rank: Rank) -> Result<(Sector, FockMonomial)> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "one" || s == "1" {
        return Ok((Sector::Untwisted, FockMonomial::vacuum()));
    }
    let mut modes = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('h')
            .ok_or_else(|| Error::Parse(format!("expected `h` in `{text}`")))?;
        let open = body
            .find('(')
            .ok_or_else(|| Error::Parse(format!("expected `(` in `{text}`")))?;
        let gen: usize = body[..open]
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator index in `{text}`")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse(format!("expected `)` in `{text}`")))?;
        let n = crate::rational::parse_q(&body[open + 1..close])?;
        modes.push((gen, n));
        rest = &body[close + 1..];
    }
    let sector = if modes.iter().all(|(_, n)| n.is_integer()) {
        Sector::Untwisted
    } else {
        Sector::Twisted
    };
    Ok((sector, make_monomial(rank, sector, &modes)?))
}

/// Number of monomials of each weight, computed by the product formula
/// `prod_{n} (1 - x^n)^{-l}`; used as an independent count in tests.
pub fn colored_partition_counts(rank: Rank, max_weight: usize) -> Vec<u64> {
    let mut c = vec![0u64; max_weight + 1];
    c[0] = 1;
    for part in 1..=max_weight {
        for _ in 0..rank.ell() {
            for w in part..=max_weight {
                c[w] += c[w - part];
            }
        }
    }
    c
}

impl FockVector<Q> {
    /// Convenience constructor for untwisted rational vectors.
    pub fn from_pairs(terms: &[(Q, FockMonomial)]) -> Self {
        let mut v = FockVector::zero(Sector::Untwisted);
        for (c, m) in terms {
            v.add_term(m.clone(), c.clone());
        }
        v
    }

    pub fn is_integral_weight(&self) -> bool {
        self.terms.keys().all(|m| m.twice_weight() % 2 == 0)
    }
}

/// `Q::one()` shorthand used by constructors.
pub fn one() -> Q {
    Q::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LambdaPoly;

    fn r(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn vec_of(m: FockMonomial) -> FockVector<Q> {
        FockVector::from_monomial(Sector::Untwisted, m)
    }

    #[test]
    fn monomial_construction() {
        let vac = make_monomial(r(1), Sector::Untwisted, &[]).unwrap();
        assert!(vac.is_vacuum());
        assert_eq!(vac.twice_weight(), 0);
        let a = make_monomial(r(1), Sector::Untwisted, &[(1, q(-1)), (1, q(-3))]).unwrap();
        let b = make_monomial(r(1), Sector::Untwisted, &[(1, q(-3)), (1, q(-1))]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "h1(-3)h1(-1)");
        let t = make_monomial(r(2), Sector::Twisted, &[(2, frac(-1, 2))]).unwrap();
        assert_eq!(t.weight(), frac(1, 2));
        assert_eq!(t.to_string(), "h2(-1/2)");
    }

    #[test]
    fn monomial_errors() {
        assert!(matches!(
            make_monomial(r(1), Sector::Untwisted, &[(1, q(1))]),
            Err(Error::NotCreation(_))
        ));
        assert!(make_monomial(r(1), Sector::Untwisted, &[(1, q(0))]).is_err());
        assert!(make_monomial(r(1), Sector::Untwisted, &[(1, frac(-1, 2))]).is_err());
        assert!(make_monomial(r(1), Sector::Twisted, &[(1, q(-1))]).is_err());
        assert!(matches!(
            make_monomial(r(2), Sector::Untwisted, &[(3, q(-1))]),
            Err(Error::GeneratorOutOfRange { gen: 3, rank: 2 })
        ));
        assert!(Rank::new(0).is_err());
    }

    #[test]
    fn mode_action_examples() {
        let h1 = vec_of(untwisted(&[(1, 1)]));
        let out = apply_mode(1, 2, &h1, None).unwrap();
        assert_eq!(out, FockVector::vacuum(Sector::Untwisted));

        let vac: FockVector<LambdaPoly> = FockVector::vacuum(Sector::Untwisted);
        let hw = [LambdaPoly::var(1), LambdaPoly::var(2)];
        let out = apply_mode(1, 0, &vac, Some(&hw)).unwrap();
        assert_eq!(out, FockVector::from_term(Sector::Untwisted, FockMonomial::vacuum(), LambdaPoly::var(1)));

        let v = vec_of(untwisted(&[(1, 1), (2, 1)]));
        assert!(apply_mode(1, 4, &v, None).unwrap().is_zero());
        assert!(apply_mode(1, 0, &v, None).unwrap().is_zero());
        assert!(matches!(apply_mode(1, 1, &v, None), Err(Error::SectorMismatch(_))));
    }

    #[test]
    fn multiplicity_factor() {
        // h(2) h(-2)^2 1 = 2 * 2 h(-2) 1
        let v = vec_of(untwisted(&[(1, 2), (1, 2)]));
        let out = apply_mode(1, 4, &v, None).unwrap();
        assert_eq!(out.coeff(&untwisted(&[(1, 2)])), q(4));
    }

    #[test]
    fn weights() {
        let omega = FockVector::from_pairs(&[(frac(1, 2), untwisted(&[(1, 1), (1, 1)]))]);
        assert_eq!(weight(&omega).unwrap(), q(2));
        let j = FockVector::from_pairs(&[
            (q(1), untwisted(&[(1, 1), (1, 1), (1, 1), (1, 1)])),
            (q(-2), untwisted(&[(1, 3), (1, 1)])),
            (frac(3, 2), untwisted(&[(1, 2), (1, 2)])),
        ]);
        assert_eq!(weight(&j).unwrap(), q(4));
        let t = make_monomial(r(1), Sector::Twisted, &[(1, frac(-1, 2))]).unwrap();
        assert_eq!(weight(&FockVector::<Q>::from_monomial(Sector::Twisted, t)).unwrap(), frac(1, 2));
        let mixed = omega.add(&vec_of(untwisted(&[(1, 1)])));
        assert_eq!(weight(&mixed), Err(Error::Inhomogeneous));
    }

    #[test]
    fn basis_examples() {
        let b = basis(r(1), Sector::Untwisted, 8, ParityFilter::Even);
        let expect: Vec<_> = vec![
            untwisted(&[(1, 3), (1, 1)]),
            untwisted(&[(1, 2), (1, 2)]),
            untwisted(&[(1, 1), (1, 1), (1, 1), (1, 1)]),
        ];
        assert_eq!(b.len(), 3);
        for m in &expect {
            assert!(b.contains(m));
        }
        let b2 = basis(r(2), Sector::Untwisted, 4, ParityFilter::Even);
        assert_eq!(b2.len(), 3);
        for m in [untwisted(&[(1, 1), (1, 1)]), untwisted(&[(1, 1), (2, 1)]), untwisted(&[(2, 1), (2, 1)])] {
            assert!(b2.contains(&m));
        }
        for sector in [Sector::Untwisted, Sector::Twisted] {
            assert_eq!(basis(r(3), sector, 0, ParityFilter::Even), vec![FockMonomial::vacuum()]);
        }
    }

    #[test]
    fn theta_examples() {
        let omega = FockVector::from_pairs(&[(frac(1, 2), untwisted(&[(1, 1), (1, 1)]))]);
        assert_eq!(theta(&omega), omega);
        let h = vec_of(untwisted(&[(1, 1)]));
        assert_eq!(theta(&h), h.neg());
    }

    #[test]
    fn text_round_trip() {
        let (s, m) = parse_monomial("h1(-1)h1(-3)", r(1)).unwrap();
        assert_eq!(s, Sector::Untwisted);
        assert_eq!(m.to_string(), "h1(-3)h1(-1)");
        let (s, m) = parse_monomial("h2(-1/2)", r(2)).unwrap();
        assert_eq!(s, Sector::Twisted);
        assert_eq!(m.to_string(), "h2(-1/2)");
        assert!(parse_monomial("one", r(1)).unwrap().1.is_vacuum());
        assert!(parse_monomial("h3(-1)", r(2)).is_err());
        assert!(parse_monomial("h1(2)", r(2)).is_err());
    }
}
