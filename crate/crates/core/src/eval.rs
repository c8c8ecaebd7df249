//! Action of zero modes on the top levels of the five irreducible families of
//! `H^+`-modules, and evaluation-based disproofs.
//!
//! Matrices use the column convention: entry `(d, c)` is the coefficient of
//! basis vector `d` in `o(u)` applied to basis vector `c`. With it, `E_ab`
//! sends `h_b` to `h_a`, and `o(u * v)` has matrix `M(u) M(v)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{make_monomial, FockMonomial, FockVector, Rank, Sector};
use crate::linalg;
use crate::poly::{Exponents, LambdaPoly};
use crate::rational::{fmt_q, frac, Q};
use crate::twisted::{delta_coefficients, twisted_zero_mode, DeltaTable};
use crate::vertex::zero_mode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModuleFamily {
    Hplus,
    Hminus,
    Mlambda,
    Tplus,
    Tminus,
}

impl ModuleFamily {
    /// Order in which disproofs are searched.
    pub const WITNESS_ORDER: [ModuleFamily; 5] = [
        ModuleFamily::Hminus,
        ModuleFamily::Mlambda,
        ModuleFamily::Tminus,
        ModuleFamily::Hplus,
        ModuleFamily::Tplus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModuleFamily::Hplus => "Hplus",
            ModuleFamily::Hminus => "Hminus",
            ModuleFamily::Mlambda => "Mlambda",
            ModuleFamily::Tplus => "Tplus",
            ModuleFamily::Tminus => "Tminus",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "Hplus" => ModuleFamily::Hplus,
            "Hminus" => ModuleFamily::Hminus,
            "Mlambda" => ModuleFamily::Mlambda,
            "Tplus" => ModuleFamily::Tplus,
            "Tminus" => ModuleFamily::Tminus,
            _ => return None,
        })
    }

    pub fn is_matrix(self) -> bool {
        matches!(self, ModuleFamily::Hminus | ModuleFamily::Tminus)
    }

    /// Top-level basis: `{1}`, `{h_a(-1) 1}`, `{hw}`, `{1_tw}`, `{h_a(-1/2) 1_tw}`.
    pub fn top_basis(self, rank: Rank) -> Vec<FockMonomial> {
        let half = frac(-1, 2);
        match self {
            ModuleFamily::Hplus | ModuleFamily::Mlambda | ModuleFamily::Tplus => vec![FockMonomial::vacuum()],
            ModuleFamily::Hminus => (1..=rank.ell())
                .map(|a| make_monomial(rank, Sector::Untwisted, &[(a, Q::from_integer((-1).into()))]).unwrap())
                .collect(),
            ModuleFamily::Tminus => (1..=rank.ell())
                .map(|a| make_monomial(rank, Sector::Twisted, &[(a, half.clone())]).unwrap())
                .collect(),
        }
    }

    fn sector(self) -> Sector {
        match self {
            ModuleFamily::Tplus | ModuleFamily::Tminus => Sector::Twisted,
            _ => Sector::Untwisted,
        }
    }
}

impl fmt::Display for ModuleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Square rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    entries: Vec<Vec<Q>>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix { n, entries: vec![vec![Q::zero(); n]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i][i] = Q::one();
        }
        m
    }

    /// `E_ab` with 1-based indices.
    pub fn unit(n: usize, a: usize, b: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[a - 1][b - 1] = Q::one();
        m
    }

    pub fn from_rows(entries: Vec<Vec<Q>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("matrix must be square".into()));
        }
        Ok(Matrix { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.entries[r][c]
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = self.clone();
        for (r, orow) in m.entries.iter_mut().zip(&o.entries) {
            for (x, y) in r.iter_mut().zip(orow) {
                *x += y;
            }
        }
        m
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut m = self.clone();
        for x in m.entries.iter_mut().flatten() {
            *x *= s;
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    m.entries[i][j] += a * &o.entries[k][j];
                }
            }
        }
        m
    }
}

/// `[[a,b],[c,d]]` with exact rational entries.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", fmt_q(x))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// The value of `o(u)` on one top level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopLevelAction {
    Scalar(Q),
    Poly(LambdaPoly),
    Matrix(Matrix),
}

impl TopLevelAction {
    pub fn is_zero(&self) -> bool {
        match self {
            TopLevelAction::Scalar(x) => x.is_zero(),
            TopLevelAction::Poly(p) => p.is_zero(),
            TopLevelAction::Matrix(m) => m.is_zero(),
        }
    }

    /// The multiplicative identity of the same shape.
    pub fn one_like(&self) -> Self {
        match self {
            TopLevelAction::Scalar(_) => TopLevelAction::Scalar(Q::one()),
            TopLevelAction::Poly(_) => TopLevelAction::Poly(LambdaPoly::one()),
            TopLevelAction::Matrix(m) => TopLevelAction::Matrix(Matrix::identity(m.dim())),
        }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(match (self, o) {
            (TopLevelAction::Scalar(a), TopLevelAction::Scalar(b)) => TopLevelAction::Scalar(a * b),
            (TopLevelAction::Poly(a), TopLevelAction::Poly(b)) => TopLevelAction::Poly(a.mul(b)),
            (TopLevelAction::Matrix(a), TopLevelAction::Matrix(b)) if a.dim() == b.dim() => {
                TopLevelAction::Matrix(a.mul(b))
            }
            _ => return Err(Error::Invalid("top-level actions of different shapes".into())),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(match (self, o) {
            (TopLevelAction::Scalar(a), TopLevelAction::Scalar(b)) => TopLevelAction::Scalar(a + b),
            (TopLevelAction::Poly(a), TopLevelAction::Poly(b)) => TopLevelAction::Poly(a.add(b)),
            (TopLevelAction::Matrix(a), TopLevelAction::Matrix(b)) if a.dim() == b.dim() => {
                TopLevelAction::Matrix(a.add(b))
            }
            _ => return Err(Error::Invalid("top-level actions of different shapes".into())),
        })
    }

    pub fn scale(&self, s: &Q) -> Self {
        match self {
            TopLevelAction::Scalar(a) => TopLevelAction::Scalar(a * s),
            TopLevelAction::Poly(a) => TopLevelAction::Poly(a.scale(s)),
            TopLevelAction::Matrix(a) => TopLevelAction::Matrix(a.scale(s)),
        }
    }

    /// Named coordinates of the value, for flattening into linear functionals.
    pub fn coordinates(&self) -> Vec<(String, Q)> {
        match self {
            TopLevelAction::Scalar(x) => vec![(String::new(), x.clone())],
            TopLevelAction::Poly(p) => p
                .terms()
                .map(|(e, c)| (format!("{:?}", e.as_slice()), c.clone()))
                .collect(),
            TopLevelAction::Matrix(m) => {
                let mut v = Vec::new();
                for (i, r) in m.rows().iter().enumerate() {
                    for (j, x) in r.iter().enumerate() {
                        v.push((format!("({},{})", i + 1, j + 1), x.clone()));
                    }
                }
                v
            }
        }
    }
}

impl fmt::Display for TopLevelAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopLevelAction::Scalar(x) => f.write_str(&fmt_q(x)),
            TopLevelAction::Poly(p) => write!(f, "{p}"),
            TopLevelAction::Matrix(m) => write!(f, "{m}"),
        }
    }
}

/// Evaluates zero modes on top levels for a fixed rank.
///
/// The theta-twisted table grows on demand and is shared between threads.
#[derive(Debug)]
pub struct Evaluator {
    rank: Rank,
    table: RwLock<Arc<DeltaTable>>,
}

impl Evaluator {
    pub fn new(rank: Rank) -> Self {
        Evaluator { rank, table: RwLock::new(Arc::new(delta_coefficients(16))) }
    }

    pub fn with_table(rank: Rank, table: DeltaTable) -> Self {
        Evaluator { rank, table: RwLock::new(Arc::new(table)) }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    fn table_for(&self, weight: u32) -> Arc<DeltaTable> {
        {
            let t = self.table.read().expect("table lock");
            if t.max_degree() >= weight {
                return t.clone();
            }
        }
        let mut t = self.table.write().expect("table lock");
        if t.max_degree() < weight {
            *t = Arc::new(delta_coefficients(weight.max(2 * t.max_degree())));
        }
        t.clone()
    }

    fn check(&self, u: &FockVector<Q>) -> Result<()> {
        if u.sector() != Sector::Untwisted {
            return Err(Error::SectorMismatch("evaluation needs a state of H^+".into()));
        }
        if !u.is_even() {
            return Err(Error::OddParity);
        }
        for (m, _) in u.terms() {
            for mode in m.modes() {
                self.rank.check_gen(mode.gen as usize)?;
            }
        }
        Ok(())
    }

    /// The action of `o(u)` on the top level of `fam`.
    pub fn evaluate(&self, u: &FockVector<Q>, fam: ModuleFamily) -> Result<TopLevelAction> {
        self.check(u)?;
        let rank = self.rank;
        match fam {
            ModuleFamily::Mlambda => {
                let hw: Vec<LambdaPoly> = (1..=rank.ell()).map(LambdaPoly::var).collect();
                let vac: FockVector<LambdaPoly> = FockVector::vacuum(Sector::Untwisted);
                let out = zero_mode(u, &vac, Some(&hw))?;
                Ok(TopLevelAction::Poly(out.coeff(&FockMonomial::vacuum())))
            }
            _ => {
                let basis = fam.top_basis(rank);
                let n = basis.len();
                let mut m = Matrix::zero(n);
                let table = if fam.sector() == Sector::Twisted {
                    Some(self.table_for(u.max_twice_weight().unwrap_or(0) / 2))
                } else {
                    None
                };
                for (c, b) in basis.iter().enumerate() {
                    let v: FockVector<Q> = FockVector::from_monomial(fam.sector(), b.clone());
                    let out = match &table {
                        Some(t) => twisted_zero_mode(u, &v, t)?,
                        None => zero_mode::<Q>(u, &v, None)?,
                    };
                    for (d, bd) in basis.iter().enumerate() {
                        m.entries[d][c] = out.coeff(bd);
                    }
                }
                if fam.is_matrix() {
                    Ok(TopLevelAction::Matrix(m))
                } else {
                    Ok(TopLevelAction::Scalar(m.entries[0][0].clone()))
                }
            }
        }
    }

    /// Product of the evaluations of the factors, in order.
    pub fn evaluate_word(&self, factors: &[FockVector<Q>], fam: ModuleFamily) -> Result<TopLevelAction> {
        let mut acc: Option<TopLevelAction> = None;
        for f in factors {
            let e = self.evaluate(f, fam)?;
            acc = Some(match acc {
                None => e,
                Some(a) => a.mul(&e)?,
            });
        }
        match acc {
            Some(a) => Ok(a),
            None => self.evaluate(&FockVector::vacuum(Sector::Untwisted), fam),
        }
    }

    pub fn evaluate_all(&self, u: &FockVector<Q>) -> Result<BTreeMap<ModuleFamily, TopLevelAction>> {
        ModuleFamily::WITNESS_ORDER
            .iter()
            .map(|&f| self.evaluate(u, f).map(|e| (f, e)))
            .collect()
    }

    /// The first family (in witness order) where `x` and `y` act differently.
    pub fn disprove_equiv(&self, x: &FockVector<Q>, y: &FockVector<Q>) -> Result<Option<Witness>> {
        for fam in ModuleFamily::WITNESS_ORDER {
            let ex = self.evaluate(x, fam)?;
            let ey = self.evaluate(y, fam)?;
            if ex != ey {
                return Ok(Some(Witness::new(fam, &ex, &ey)));
            }
        }
        Ok(None)
    }

    /// Rank of the evaluation functionals of `elements` over all five families.
    pub fn independence_rank(&self, elements: &[FockVector<Q>]) -> Result<usize> {
        let mut coord: BTreeMap<(ModuleFamily, String), usize> = BTreeMap::new();
        let mut rows = Vec::with_capacity(elements.len());
        for u in elements {
            let mut row = BTreeMap::new();
            for (fam, e) in self.evaluate_all(u)? {
                for (k, v) in e.coordinates() {
                    if v.is_zero() {
                        continue;
                    }
                    let next = coord.len();
                    let idx = *coord.entry((fam, k)).or_insert(next);
                    row.insert(idx, v);
                }
            }
            rows.push(row);
        }
        Ok(linalg::rank_of(&rows, coord.len()))
    }
}

/// A family on which two elements act differently, with the first differing entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub family: ModuleFamily,
    /// Matrix position `(i,j)` or `lambda` monomial exponents; empty for scalars.
    pub entry: String,
    pub left: String,
    pub right: String,
}

impl Witness {
    fn new(family: ModuleFamily, x: &TopLevelAction, y: &TopLevelAction) -> Self {
        let cx: BTreeMap<String, Q> = x.coordinates().into_iter().collect();
        let cy: BTreeMap<String, Q> = y.coordinates().into_iter().collect();
        let mut keys: Vec<&String> = cx.keys().chain(cy.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let a = cx.get(k).cloned().unwrap_or_else(Q::zero);
            let b = cy.get(k).cloned().unwrap_or_else(Q::zero);
            if a != b {
                let entry = match x {
                    TopLevelAction::Poly(_) => poly_key_text(k),
                    _ => k.clone(),
                };
                return Witness { family, entry, left: fmt_q(&a), right: fmt_q(&b) };
            }
        }
        Witness { family, entry: String::new(), left: x.to_string(), right: y.to_string() }
    }
}

fn poly_key_text(k: &str) -> String {
    let exps: Vec<u32> = k
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .filter_map(|s| s.trim().parse().ok())
        .collect();
    let p = LambdaPoly::monomial(Exponents::new(exps), Q::one());
    format!("coefficient of {p}")
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entry.is_empty() {
            write!(f, "{}: {} vs {}", self.family, self.left, self.right)
        } else {
            write!(f, "{} entry {}: {} vs {}", self.family, self.entry, self.left, self.right)
        }
    }
}
