//! Zhu's products on `H^+`, the named generators of `A(H^+)`, and a
//! weight-truncated echelon of `O(H^+)` for certifying equivalences.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{basis, untwisted, FockMonomial, FockVector, ParityFilter, Rank, Sector, SignClass};
use crate::linalg::{self, integer_row, Echelon, IntRow};
use crate::rational::{binomial_int, frac, q, Q};
use crate::vertex::{mode_operator, omega, virasoro, virasoro_total};

fn check_h(v: &FockVector<Q>) -> Result<()> {
    if v.sector() != Sector::Untwisted {
        return Err(Error::SectorMismatch("Zhu products are defined on H".into()));
    }
    Ok(())
}

/// `sum_i C(wt u, i) u_{i + shift} v` over the homogeneous pieces of `u`.
fn residue_sum(u: &FockVector<Q>, v: &FockVector<Q>, shift: i64) -> Result<FockVector<Q>> {
    check_h(u)?;
    check_h(v)?;
    let mut out = FockVector::zero(Sector::Untwisted);
    for (w2, comp) in u.homogeneous_components() {
        let wt = (w2 / 2) as i64;
        for i in 0..=wt {
            let c = binomial_int(wt, i as u32);
            let piece = mode_operator(&comp, i + shift, v, None)?;
            out.add_scaled(&piece, &c);
        }
    }
    Ok(out)
}

/// `u * v = sum_i C(wt u, i) u_{i-1} v`.
pub fn star(u: &FockVector<Q>, v: &FockVector<Q>) -> Result<FockVector<Q>> {
    residue_sum(u, v, -1)
}

/// `sum_i C(wt u, i) u_{i-n-2} v`, an element of `O(H^+)`; `n = 0` is `u o v`.
pub fn circ_n(u: &FockVector<Q>, v: &FockVector<Q>, n: i64) -> Result<FockVector<Q>> {
    if n < 0 {
        return Err(Error::Invalid(format!("circle index must be nonnegative, got {n}")));
    }
    residue_sum(u, v, -n - 2)
}

/// `(L(-1) + L(0)) u = u o 1`.
pub fn translation(rank: Rank, u: &FockVector<Q>) -> Result<FockVector<Q>> {
    let mut r = virasoro_total(rank.ell(), -1, u, None)?;
    r.add_assign(&virasoro_total(rank.ell(), 0, u, None)?);
    Ok(r)
}

/// Star power `u^k`, with `u^0 = 1`.
pub fn star_pow(u: &FockVector<Q>, k: u32) -> Result<FockVector<Q>> {
    let mut acc = FockVector::vacuum(Sector::Untwisted);
    for _ in 0..k {
        acc = star(&acc, u)?;
    }
    Ok(acc)
}

/// Names of the generators used by the relation language and the suites.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Name {
    One,
    Omega(usize),
    J(usize),
    H(usize),
    /// `h_a(-m) h_b(-n) 1`
    S { a: usize, m: u32, b: usize, n: u32 },
    /// `h_{a_1}(-m_1) ... h_{a_k}(-m_k) 1` for distinct generators
    SAlpha(Vec<(usize, u32)>),
    Eu(usize, usize),
    /// The barred variant: `Eubar(b, a)` is written in the `S_ab(1, m)`.
    EuBar(usize, usize),
    Et(usize, usize),
    EtBar(usize, usize),
    Lam(usize, usize),
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::One => write!(f, "one"),
            Name::Omega(a) => write!(f, "w{a}"),
            Name::J(a) => write!(f, "J{a}"),
            Name::H(a) => write!(f, "H{a}"),
            Name::S { a, m, b, n } => write!(f, "S({a},{m};{b},{n})"),
            Name::SAlpha(v) => {
                write!(f, "Sa(")?;
                for (i, (a, m)) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{a},{m}")?;
                }
                write!(f, ")")
            }
            Name::Eu(a, b) => write!(f, "Eu({a},{b})"),
            Name::EuBar(a, b) => write!(f, "Eubar({a},{b})"),
            Name::Et(a, b) => write!(f, "Et({a},{b})"),
            Name::EtBar(a, b) => write!(f, "Etbar({a},{b})"),
            Name::Lam(a, b) => write!(f, "Lam({a},{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedElement {
    pub name: Name,
    pub realization: FockVector<Q>,
}

/// `S_ab(m, n) = h_a(-m) h_b(-n) 1`.
pub fn s_elem(a: usize, m: u32, b: usize, n: u32) -> FockVector<Q> {
    FockVector::from_monomial(Sector::Untwisted, untwisted(&[(a, m), (b, n)]))
}

/// `J_a = h_a(-1)^4 1 - 2 h_a(-3) h_a(-1) 1 + 3/2 h_a(-2)^2 1`.
pub fn j_elem(a: usize) -> FockVector<Q> {
    FockVector::from_pairs(&[
        (q(1), untwisted(&[(a, 1), (a, 1), (a, 1), (a, 1)])),
        (q(-2), untwisted(&[(a, 3), (a, 1)])),
        (frac(3, 2), untwisted(&[(a, 2), (a, 2)])),
    ])
}

/// `H_a = J_a + omega_a - 4 omega_a * omega_a`.
pub fn h_elem(a: usize) -> Result<FockVector<Q>> {
    let w = omega(a);
    let mut r = j_elem(a);
    r.add_assign(&w);
    r.add_scaled(&star(&w, &w)?, &q(-4));
    Ok(r)
}

/// `sum_m coeffs[m-1] S_ab(1, m)`.
fn s_combo(a: usize, b: usize, coeffs: &[i64]) -> FockVector<Q> {
    let mut r = FockVector::zero(Sector::Untwisted);
    for (i, c) in coeffs.iter().enumerate() {
        r.add_scaled(&s_elem(a, 1, b, i as u32 + 1), &q(*c));
    }
    r
}

const EU: [i64; 5] = [0, 5, 25, 36, 16];
const EU_BAR: [i64; 5] = [1, 14, 41, 44, 16];
const ET: [i64; 5] = [0, 3, 14, 19, 8];
const ET_BAR: [i64; 5] = [0, 5, 18, 21, 8];
const LAM: [i64; 5] = [0, 45, 190, 240, 96];

pub fn named_element(name: &Name, rank: Rank) -> Result<NamedElement> {
    let check = |a: usize| rank.check_gen(a);
    let pair = |a: usize, b: usize, what: &'static str| -> Result<()> {
        check(a)?;
        check(b)?;
        if a == b {
            return Err(Error::DiagonalIndex(a, what));
        }
        Ok(())
    };
    let realization = match name {
        Name::One => FockVector::vacuum(Sector::Untwisted),
        Name::Omega(a) => {
            check(*a)?;
            omega(*a)
        }
        Name::J(a) => {
            check(*a)?;
            j_elem(*a)
        }
        Name::H(a) => {
            check(*a)?;
            h_elem(*a)?
        }
        Name::S { a, m, b, n } => {
            check(*a)?;
            check(*b)?;
            if *m == 0 || *n == 0 {
                return Err(Error::NotCreation("S indices must be positive".into()));
            }
            s_elem(*a, *m, *b, *n)
        }
        Name::SAlpha(parts) => {
            let mut seen = BTreeSet::new();
            for (a, m) in parts {
                check(*a)?;
                if *m == 0 {
                    return Err(Error::NotCreation("S indices must be positive".into()));
                }
                if !seen.insert(*a) {
                    return Err(Error::DiagonalIndex(*a, "Sa"));
                }
            }
            FockVector::from_monomial(Sector::Untwisted, untwisted(parts))
        }
        Name::Eu(a, b) => {
            pair(*a, *b, "Eu")?;
            s_combo(*a, *b, &EU)
        }
        Name::EuBar(b, a) => {
            pair(*a, *b, "Eubar")?;
            s_combo(*a, *b, &EU_BAR)
        }
        Name::Et(a, b) => {
            pair(*a, *b, "Et")?;
            s_combo(*a, *b, &ET).scale(&q(-16))
        }
        Name::EtBar(b, a) => {
            pair(*a, *b, "Etbar")?;
            s_combo(*a, *b, &ET_BAR).scale(&q(-16))
        }
        Name::Lam(a, b) => {
            pair(*a, *b, "Lam")?;
            s_combo(*a, *b, &LAM)
        }
    };
    Ok(NamedElement { name: name.clone(), realization })
}

/// A generating row of the truncated span, kept for provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowSource {
    Circle { u: String, v: String, n: u32 },
    Translation { u: String },
    Extra(usize),
}

impl fmt::Display for RowSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowSource::Circle { u, v, n } => write!(f, "circ{n}({u}, {v})"),
            RowSource::Translation { u } => write!(f, "(L(-1)+L(0)) {u}"),
            RowSource::Extra(i) => write!(f, "extra[{i}]"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OSpanConfig {
    pub rank: Rank,
    pub max_weight: u32,
    pub slack: u32,
    pub extra: Vec<FockVector<Q>>,
    /// Keep source combinations on echelon rows so certificates can be produced.
    pub track_certificates: bool,
    /// Directory for the persistent cache; `None` disables it.
    pub cache_dir: Option<PathBuf>,
}

/// Environment variable naming the echelon cache directory.
pub const CACHE_ENV: &str = "MPLUS_CACHE_DIR";
const CACHE_VERSION: u32 = 1;

impl OSpanConfig {
    pub fn new(rank: Rank, max_weight: u32, slack: u32) -> Self {
        OSpanConfig {
            rank,
            max_weight,
            slack,
            extra: Vec::new(),
            track_certificates: false,
            cache_dir: std::env::var_os(CACHE_ENV).map(PathBuf::from),
        }
    }

    /// FNV-1a over the canonical text of the row policy.
    pub fn policy_hash(&self) -> u64 {
        let mut text = format!("all-pairs;translation;track={}", self.track_certificates);
        for e in &self.extra {
            text.push(';');
            text.push_str(&e.to_string());
        }
        let mut h: u64 = 0xcbf29ce484222325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }

    fn top(&self) -> u32 {
        self.max_weight + self.slack
    }
}

/// The echelon for one sign class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassEchelon {
    pub class: SignClass,
    columns: Vec<String>,
    #[serde(skip)]
    monomials: Vec<FockMonomial>,
    #[serde(skip)]
    index: HashMap<FockMonomial, usize>,
    echelon: Echelon,
    /// Sources of the generating rows kept by the independence filter.
    pub provenance: Vec<RowSource>,
    pub generated_rows: usize,
}

impl ClassEchelon {
    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn num_columns(&self) -> usize {
        self.monomials.len()
    }

    fn to_row(&self, v: &FockVector<Q>) -> BTreeMap<usize, Q> {
        v.terms().map(|(m, c)| (self.index[m], c.clone())).collect()
    }

    fn from_row(&self, r: &BTreeMap<usize, Q>) -> FockVector<Q> {
        let mut v = FockVector::zero(Sector::Untwisted);
        for (c, x) in r {
            v.add_term(self.monomials[*c].clone(), x.clone());
        }
        v
    }

    fn restore(&mut self, rank: Rank) -> Result<()> {
        self.monomials = self
            .columns
            .iter()
            .map(|s| crate::fock::parse_monomial(s, rank).map(|x| x.1))
            .collect::<Result<_>>()?;
        self.index = self.monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        self.echelon.reindex();
        Ok(())
    }
}

/// Weight-truncated span of circle elements, one echelon per sign class.
#[derive(Debug, Clone)]
pub struct OSpanEchelon {
    pub config: OSpanConfig,
    classes: BTreeMap<SignClass, ClassEchelon>,
    pub cache_hits: usize,
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    rank: usize,
    max_weight: u32,
    slack: u32,
    policy: u64,
    echelon: ClassEchelon,
}

/// Even monomials of weight `0..=top`, grouped by weight.
fn even_bases(rank: Rank, top: u32) -> Vec<Vec<FockMonomial>> {
    (0..=top)
        .map(|w| basis(rank, Sector::Untwisted, 2 * w, ParityFilter::Even))
        .collect()
}

/// The sign classes of the even-parity terms of `v`.
pub fn classes_of(v: &FockVector<Q>) -> BTreeSet<SignClass> {
    v.terms().map(|(m, _)| m.sign_class()).collect()
}

impl OSpanEchelon {
    /// Builds the echelons for the given sign classes.
    pub fn build(config: OSpanConfig, classes: &[SignClass]) -> Result<Self> {
        if config.max_weight < 2 {
            return Err(Error::Invalid("max_weight must be at least 2".into()));
        }
        let mut e = OSpanEchelon { config, classes: BTreeMap::new(), cache_hits: 0 };
        e.ensure(classes)?;
        Ok(e)
    }

    /// Builds every class with an even number of odd generators.
    pub fn build_all(config: OSpanConfig) -> Result<Self> {
        let classes = SignClass::all_even(config.rank);
        Self::build(config, &classes)
    }

    pub fn max_weight(&self) -> u32 {
        self.config.max_weight
    }

    pub fn class(&self, c: SignClass) -> Option<&ClassEchelon> {
        self.classes.get(&c)
    }

    pub fn built_classes(&self) -> impl Iterator<Item = SignClass> + '_ {
        self.classes.keys().copied()
    }

    /// Adds any missing classes.
    pub fn ensure(&mut self, classes: &[SignClass]) -> Result<()> {
        for &c in classes {
            if self.classes.contains_key(&c) {
                continue;
            }
            if let Some(ce) = self.load_cached(c) {
                self.cache_hits += 1;
                self.classes.insert(c, ce);
                continue;
            }
            let ce = build_class(&self.config, c)?;
            self.store_cached(&ce);
            self.classes.insert(c, ce);
        }
        Ok(())
    }

    fn cache_path(&self, c: SignClass) -> Option<PathBuf> {
        let dir = self.config.cache_dir.as_ref()?;
        Some(dir.join(format!(
            "ospan-v{}-l{}-w{}-s{}-p{:016x}-c{}.json",
            CACHE_VERSION,
            self.config.rank.ell(),
            self.config.max_weight,
            self.config.slack,
            self.config.policy_hash(),
            c.label(self.config.rank)
        )))
    }

    fn load_cached(&self, c: SignClass) -> Option<ClassEchelon> {
        let path = self.cache_path(c)?;
        let text = std::fs::read_to_string(path).ok()?;
        let file: CacheFile = serde_json::from_str(&text).ok()?;
        let cfg = &self.config;
        if file.version != CACHE_VERSION
            || file.rank != cfg.rank.ell()
            || file.max_weight != cfg.max_weight
            || file.slack != cfg.slack
            || file.policy != cfg.policy_hash()
            || file.echelon.class != c
        {
            return None;
        }
        let mut ce = file.echelon;
        ce.restore(cfg.rank).ok()?;
        Some(ce)
    }

    fn store_cached(&self, ce: &ClassEchelon) {
        let Some(path) = self.cache_path(ce.class) else {
            return;
        };
        let cfg = &self.config;
        let file = CacheFile {
            version: CACHE_VERSION,
            rank: cfg.rank.ell(),
            max_weight: cfg.max_weight,
            slack: cfg.slack,
            policy: cfg.policy_hash(),
            echelon: ce.clone(),
        };
        // the cache is an optimization; write failures are ignored
        if let Some(dir) = path.parent() {
            let _ = std::fs::create_dir_all(dir);
        }
        if let Ok(text) = serde_json::to_string(&file) {
            let tmp = path.with_extension("tmp");
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(tmp, path);
            }
        }
    }

    fn check(&self, x: &FockVector<Q>) -> Result<()> {
        check_h(x)?;
        if !x.is_even() {
            return Err(Error::OddParity);
        }
        if let Some(w2) = x.max_twice_weight() {
            if w2 > 2 * self.config.max_weight {
                return Err(Error::WeightExceedsEchelon { weight: w2 / 2, cutoff: self.config.max_weight });
            }
        }
        Ok(())
    }

    fn class_for(&self, c: SignClass) -> Result<&ClassEchelon> {
        self.classes
            .get(&c)
            .ok_or_else(|| Error::SectorNotBuilt(c.label(self.config.rank)))
    }

    /// Normal form of `x` modulo the truncated span.
    pub fn reduce(&self, x: &FockVector<Q>) -> Result<FockVector<Q>> {
        self.check(x)?;
        let mut out = FockVector::zero(Sector::Untwisted);
        for (c, part) in x.split_by_sign_class() {
            let ce = self.class_for(c)?;
            let nf = ce.echelon.reduce(&ce.to_row(&part));
            out.add_assign(&ce.from_row(&nf));
        }
        Ok(out)
    }

    pub fn is_equiv(&self, x: &FockVector<Q>, y: &FockVector<Q>) -> Result<Verdict> {
        let d = x.sub(y);
        if self.reduce(&d)?.is_zero() {
            Ok(Verdict::ProvedEqual)
        } else {
            Ok(Verdict::Unknown)
        }
    }

    /// Writes `x` as a combination of generating rows, when it lies in the span.
    /// Needs `track_certificates`.
    pub fn certificate(&self, x: &FockVector<Q>) -> Result<Option<Vec<(RowSource, Q)>>> {
        if !self.config.track_certificates {
            return Err(Error::Invalid("echelon was built without certificate tracking".into()));
        }
        self.check(x)?;
        let mut out = Vec::new();
        for (c, part) in x.split_by_sign_class() {
            let ce = self.class_for(c)?;
            let Some(cert) = ce.echelon.certificate(&ce.to_row(&part)) else {
                return Ok(None);
            };
            let scales = &ce.provenance;
            for (k, v) in cert {
                out.push((scales[k].clone(), v));
            }
        }
        Ok(Some(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ProvedEqual,
    Unknown,
}

fn build_class(cfg: &OSpanConfig, class: SignClass) -> Result<ClassEchelon> {
    let rank = cfg.rank;
    let top = cfg.top();
    let bases = even_bases(rank, top);

    // columns: every even monomial of the class up to the top weight
    let mut monomials: Vec<FockMonomial> = bases
        .iter()
        .flatten()
        .filter(|m| m.sign_class() == class)
        .cloned()
        .collect();
    monomials.sort();
    let index: HashMap<FockMonomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

    // generating triples, cheapest first
    let mut jobs: Vec<(u32, FockMonomial, FockMonomial, u32)> = Vec::new();
    for (wu, bu) in bases.iter().enumerate().skip(1) {
        for u in bu {
            for (wv, bv) in bases.iter().enumerate() {
                if wu + wv + 1 > top as usize {
                    break;
                }
                for v in bv {
                    if u.sign_class().xor(v.sign_class()) != class {
                        continue;
                    }
                    for n in 0..=(top as usize - wu - wv - 1) {
                        jobs.push(((wu + wv + n + 1) as u32, u.clone(), v.clone(), n as u32));
                    }
                }
            }
        }
    }
    jobs.sort_by_key(|j| j.0);

    let circle_rows: Vec<Result<(IntRow, RowSource)>> = jobs
        .par_iter()
        .map(|(_, u, v, n)| {
            let uv = FockVector::from_monomial(Sector::Untwisted, u.clone());
            let vv = FockVector::from_monomial(Sector::Untwisted, v.clone());
            let r = circ_n(&uv, &vv, *n as i64)?;
            let row: BTreeMap<usize, Q> = r.terms().map(|(m, c)| (index[m], c.clone())).collect();
            Ok((
                integer_row(&row),
                RowSource::Circle { u: u.to_string(), v: v.to_string(), n: *n },
            ))
        })
        .collect();

    let mut rows: Vec<(IntRow, RowSource)> = Vec::with_capacity(circle_rows.len());
    for r in circle_rows {
        rows.push(r?);
    }
    for (w, bw) in bases.iter().enumerate() {
        if w as u32 + 1 > top {
            break;
        }
        for u in bw {
            if u.sign_class() != class {
                continue;
            }
            let uv = FockVector::from_monomial(Sector::Untwisted, u.clone());
            let r = translation(rank, &uv)?;
            let row: BTreeMap<usize, Q> = r.terms().map(|(m, c)| (index[m], c.clone())).collect();
            rows.push((integer_row(&row), RowSource::Translation { u: u.to_string() }));
        }
    }
    for (i, x) in cfg.extra.iter().enumerate() {
        check_h(x)?;
        if !x.is_even() {
            return Err(Error::OddParity);
        }
        if let Some(part) = x.split_by_sign_class().remove(&class) {
            if part.max_twice_weight().unwrap_or(0) > 2 * top {
                return Err(Error::WeightExceedsEchelon { weight: part.max_twice_weight().unwrap_or(0) / 2, cutoff: top });
            }
            let row: BTreeMap<usize, Q> = part.terms().map(|(m, c)| (index[m], c.clone())).collect();
            rows.push((integer_row(&row), RowSource::Extra(i)));
        }
    }

    let int_rows: Vec<IntRow> = rows.iter().map(|r| r.0.clone()).collect();
    let (echelon, kept) = linalg::echelonize(monomials.len(), &int_rows, cfg.track_certificates);
    // certificates refer to positions in `provenance`
    let mut echelon = echelon;
    if cfg.track_certificates {
        echelon = renumber_sources(echelon, &kept);
    }
    let provenance = kept.iter().map(|&i| rows[i].1.clone()).collect();
    Ok(ClassEchelon {
        class,
        columns: monomials.iter().map(|m| m.to_string()).collect(),
        monomials,
        index,
        echelon,
        provenance,
        generated_rows: rows.len(),
    })
}

fn renumber_sources(e: Echelon, kept: &[usize]) -> Echelon {
    let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut e = e;
    e.map_sources(|k| pos[&k]);
    e
}

/// Coordinates of `x` against `targets` modulo the span of `relations`,
/// provided the targets are independent modulo the relations and `x` lies in
/// their combined span. Returns `None` otherwise.
pub fn coordinates_modulo(
    relations: &[FockVector<Q>],
    targets: &[FockVector<Q>],
    x: &FockVector<Q>,
) -> Option<Vec<Q>> {
    let mut monos: BTreeSet<FockMonomial> = BTreeSet::new();
    for v in relations.iter().chain(targets).chain(std::iter::once(x)) {
        monos.extend(v.terms().map(|(m, _)| m.clone()));
    }
    let index: HashMap<FockMonomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let to_row = |v: &FockVector<Q>| -> BTreeMap<usize, Q> { v.terms().map(|(m, c)| (index[m], c.clone())).collect() };
    let int_rows: Vec<IntRow> = relations.iter().map(|r| integer_row(&to_row(r))).collect();
    let (rel, _) = linalg::echelonize(monos.len(), &int_rows, false);
    let reduced_targets: Vec<BTreeMap<usize, Q>> = targets.iter().map(|t| rel.reduce(&to_row(t))).collect();
    if linalg::rank_of(&reduced_targets, monos.len()) != targets.len() {
        return None;
    }
    let rx = rel.reduce(&to_row(x));
    linalg::solve(&reduced_targets, &rx, monos.len())
}

/// Relations of `O` generated from `omega_a` alone, on the sign class `class`
/// up to weight `top`: `(L(-1)+L(0))x`, `omega_a o_n x`, `x * omega_a - (L_a(-2)+L_a(-1))x`,
/// and the last three right-multiplied by `omega_a` and `omega_a * omega_a`.
pub fn omega_relations(rank: Rank, a: usize, class: SignClass, top: u32) -> Result<Vec<FockVector<Q>>> {
    rank.check_gen(a)?;
    let wa = omega(a);
    let mut base = Vec::new();
    for w in 0..=top {
        for m in basis(rank, Sector::Untwisted, 2 * w, ParityFilter::Even) {
            if m.sign_class() != class {
                continue;
            }
            let x = FockVector::from_monomial(Sector::Untwisted, m);
            if w < top {
                base.push(translation(rank, &x)?);
            }
            for n in 0..=(top as i64 - w as i64 - 3) {
                base.push(omega_circle(a, &x, n)?);
            }
            if w + 2 <= top {
                base.push(star(&x, &wa)?.sub(&right_omega(a, &x)?));
            }
        }
    }
    let mut rel = base.clone();
    for r in &base {
        let wr = r.max_twice_weight().unwrap_or(0) / 2;
        if wr + 2 <= top {
            let r1 = star(r, &wa)?;
            if wr + 4 <= top {
                rel.push(star(&r1, &wa)?);
            }
            rel.push(r1);
        }
    }
    Ok(rel)
}

/// Coordinates of `S_ab(1,1) o h_a(-1)^4 1` modulo [`omega_relations`] at weight 7,
/// against `[S_ab(1,1)*w_a, S_ab(1,1)*w_a*w_a, S_ab(1,1), ..., S_ab(1,6)]`.
/// The last entry is the coefficient of `S_ab(1,6)`.
pub fn s_circle_coordinates(rank: Rank, a: usize, b: usize) -> Result<Option<Vec<Q>>> {
    rank.check_gen(b)?;
    if a == b {
        return Err(Error::DiagonalIndex(a, "S circle"));
    }
    let s11 = s_elem(a, 1, b, 1);
    let class = untwisted(&[(a, 1), (b, 1)]).sign_class();
    let rel = omega_relations(rank, a, class, 7)?;
    let wa = omega(a);
    let s1w = star(&s11, &wa)?;
    let mut targets = vec![s1w.clone(), star(&s1w, &wa)?];
    targets.extend((1..=6).map(|m| s_elem(a, 1, b, m)));
    let h4 = FockVector::from_monomial(Sector::Untwisted, untwisted(&[(a, 1); 4]));
    let x = circ_n(&s11, &h4, 0)?;
    Ok(coordinates_modulo(&rel, &targets, &x))
}

/// `(L_a(-2) + L_a(-1)) u`, the right action of `omega_a` modulo `O`.
pub fn right_omega(a: usize, u: &FockVector<Q>) -> Result<FockVector<Q>> {
    let mut r = virasoro(a, -2, u, None)?;
    r.add_assign(&virasoro(a, -1, u, None)?);
    Ok(r)
}

/// `(L_a(-1) + L_a(0)) u`.
pub fn commutator_omega(a: usize, u: &FockVector<Q>) -> Result<FockVector<Q>> {
    let mut r = virasoro(a, -1, u, None)?;
    r.add_assign(&virasoro(a, 0, u, None)?);
    Ok(r)
}

/// `(L_a(-n-3) + 2 L_a(-n-2) + L_a(-n-1)) u`.
pub fn omega_circle(a: usize, u: &FockVector<Q>, n: i64) -> Result<FockVector<Q>> {
    let mut r = virasoro(a, -n - 3, u, None)?;
    r.add_scaled(&virasoro(a, -n - 2, u, None)?, &q(2));
    r.add_assign(&virasoro(a, -n - 1, u, None)?);
    Ok(r)
}

impl NamedElement {
    pub fn weight(&self) -> Option<u32> {
        self.realization.max_twice_weight().map(|w| w / 2)
    }
}

/// Sum of scalar multiples of vectors.
pub fn lin_comb(terms: &[(Q, &FockVector<Q>)]) -> FockVector<Q> {
    let mut r = FockVector::zero(Sector::Untwisted);
    for (c, v) in terms {
        r.add_scaled(v, c);
    }
    r
}

/// `1` as a vector.
pub fn one() -> FockVector<Q> {
    FockVector::vacuum(Sector::Untwisted)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: usize) -> Rank {
        Rank::new(n).unwrap()
    }

    fn mono(pairs: &[(usize, u32)]) -> FockVector<Q> {
        FockVector::from_monomial(Sector::Untwisted, untwisted(pairs))
    }

    #[test]
    fn unit_laws() {
        let v = mono(&[(1, 2), (2, 1)]);
        assert_eq!(star(&one(), &v).unwrap(), v);
        assert_eq!(star(&v, &one()).unwrap(), v);
    }

    #[test]
    fn omega_star() {
        let u = mono(&[(1, 2), (2, 1)]);
        let lhs = star(&omega(1), &u).unwrap();
        let mut rhs = virasoro(1, -2, &u, None).unwrap();
        rhs.add_scaled(&virasoro(1, -1, &u, None).unwrap(), &q(2));
        rhs.add_assign(&virasoro(1, 0, &u, None).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn disjoint_pairs_multiply() {
        let lhs = star(&s_elem(1, 1, 2, 1), &s_elem(3, 1, 4, 1)).unwrap();
        assert_eq!(lhs, mono(&[(1, 1), (2, 1), (3, 1), (4, 1)]));
    }

    #[test]
    fn omega_circle_on_vacuum() {
        let c = circ_n(&omega(1), &one(), 0).unwrap();
        let expect = mono(&[(1, 2), (1, 1)]).add(&mono(&[(1, 1), (1, 1)]));
        assert_eq!(c, expect);
        for n in 0..3 {
            let u = mono(&[(1, 1), (2, 3)]);
            assert_eq!(circ_n(&omega(1), &u, n).unwrap(), omega_circle(1, &u, n).unwrap());
        }
        assert!(circ_n(&omega(1), &one(), -1).is_err());
    }

    #[test]
    fn named_elements() {
        let lam = named_element(&Name::Lam(1, 2), r(2)).unwrap().realization;
        let expect = lin_comb(&[
            (q(45), &s_elem(1, 1, 2, 2)),
            (q(190), &s_elem(1, 1, 2, 3)),
            (q(240), &s_elem(1, 1, 2, 4)),
            (q(96), &s_elem(1, 1, 2, 5)),
        ]);
        assert_eq!(lam, expect);
        assert!(matches!(named_element(&Name::Eu(1, 1), r(2)), Err(Error::DiagonalIndex(1, _))));
        assert!(named_element(&Name::Et(1, 3), r(2)).is_err());
        assert_eq!(named_element(&Name::J(1), r(1)).unwrap().weight(), Some(4));
        assert!(named_element(&Name::H(1), r(1)).unwrap().realization.is_even());
    }

    #[test]
    fn small_echelon() {
        // omega o 1 has top weight 3, so it first enters at max_weight 3
        let c = circ_n(&omega(1), &one(), 0).unwrap();
        let cfg = OSpanConfig { cache_dir: None, ..OSpanConfig::new(r(1), 2, 0) };
        let e = OSpanEchelon::build_all(cfg).unwrap();
        assert!(matches!(e.reduce(&c), Err(Error::WeightExceedsEchelon { weight: 3, cutoff: 2 })));
        let cfg = OSpanConfig { cache_dir: None, ..OSpanConfig::new(r(1), 3, 0) };
        let e = OSpanEchelon::build_all(cfg).unwrap();
        assert!(e.reduce(&c).unwrap().is_zero());
        assert_eq!(e.is_equiv(&omega(1), &FockVector::zero(Sector::Untwisted)).unwrap(), Verdict::Unknown);
        assert!(matches!(
            e.reduce(&j_elem(1)),
            Err(Error::WeightExceedsEchelon { weight: 4, cutoff: 3 })
        ));
    }

    #[test]
    fn translation_rows_reduce() {
        let cfg = OSpanConfig { cache_dir: None, ..OSpanConfig::new(r(2), 4, 1) };
        let e = OSpanEchelon::build(cfg, &[SignClass(0b11)]).unwrap();
        let s = s_elem(1, 1, 2, 1);
        assert!(e.reduce(&translation(r(2), &s).unwrap()).unwrap().is_zero());
        assert!(matches!(e.reduce(&omega(1)), Err(Error::SectorNotBuilt(_))));
    }

    #[test]
    fn right_multiplication_by_omega() {
        let cfg = OSpanConfig { cache_dir: None, ..OSpanConfig::new(r(2), 5, 2) };
        let e = OSpanEchelon::build(cfg, &[SignClass(0b11)]).unwrap();
        let s = s_elem(1, 1, 2, 1);
        let lhs = star(&s, &omega(1)).unwrap();
        assert_eq!(e.is_equiv(&lhs, &right_omega(1, &s).unwrap()).unwrap(), Verdict::ProvedEqual);
    }

    #[test]
    fn certificates_reconstruct() {
        let cfg = OSpanConfig { cache_dir: None, track_certificates: true, ..OSpanConfig::new(r(1), 3, 1) };
        let e = OSpanEchelon::build_all(cfg).unwrap();
        let c = circ_n(&omega(1), &one(), 0).unwrap();
        let cert = e.certificate(&c).unwrap().unwrap();
        assert!(!cert.is_empty());
        assert!(e.certificate(&omega(1)).unwrap().is_none());
    }

    #[test]
    fn s_circle_extraction() {
        let rank = Rank::new(2).unwrap();
        let c = s_circle_coordinates(rank, 1, 2).unwrap().unwrap();
        let expect: Vec<Q> = [0, 0, 0, -12, -88, -204, -192, -64].iter().map(|&x| q(x)).collect();
        assert_eq!(c, expect);
    }
}
