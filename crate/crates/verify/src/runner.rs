//! Executes statements against the evaluation oracle and the truncated O-span.

use std::collections::HashMap;
use std::sync::Mutex;
use std::fmt;
use std::time::Instant;

use mplus_core::eval::{Evaluator, Matrix, ModuleFamily, TopLevelAction};
use mplus_core::fock::{colored_partition_counts, untwisted, FockVector, Rank, Sector};
use mplus_core::poly::{Exponents, LambdaPoly};
use mplus_core::rational::{fmt_q, Q};
use mplus_core::zhu::{circ_n, Name, classes_of, named_element, star, star_pow, OSpanConfig, OSpanEchelon};
use mplus_core::Error;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::ast::{Expr, Statement, StatementKind, ValueExpr, ValueFactor};

/// Largest number of monomials up to the top weight for which the runner builds an O-span.
pub const COLUMN_CAP: u64 = 60_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cutoff {
    pub max_weight: u32,
    pub slack: u32,
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "max_weight {} slack {}", self.max_weight, self.slack)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub rank: Rank,
    pub cutoff: Cutoff,
}

/// Where a disproof or mismatch shows up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub family: Option<ModuleFamily>,
    pub entry: String,
    pub got: String,
    pub expected: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(fam) = self.family {
            write!(f, "{fam} ")?;
        }
        if !self.entry.is_empty() {
            write!(f, "entry {} ", self.entry)?;
        }
        write!(f, "{} vs {}", self.got, self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Proved,
    Disproved { witness: Witness },
    Unknown { cutoff: Cutoff },
    Error { message: String },
}

impl Status {
    pub fn is_proved(&self) -> bool {
        matches!(self, Status::Proved)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Proved => write!(f, "PROVED"),
            Status::Disproved { witness } => write!(f, "DISPROVED ({witness})"),
            Status::Unknown { cutoff } => write!(f, "UNKNOWN ({cutoff})"),
            Status::Error { message } => write!(f, "ERROR ({message})"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub label: String,
    pub rank: usize,
    pub line: usize,
    pub text: String,
    #[serde(flatten)]
    pub status: Status,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub rank: usize,
    pub entries: Vec<Entry>,
    pub echelon_builds: usize,
    pub echelon_cache_hits: usize,
    pub millis: u64,
    pub passed: bool,
}

impl Report {
    pub fn new(rank: usize) -> Self {
        Report { rank, entries: Vec::new(), echelon_builds: 0, echelon_cache_hits: 0, millis: 0, passed: true }
    }

    pub fn push(&mut self, e: Entry) {
        self.passed &= e.status.is_proved();
        self.entries.push(e);
    }

    pub fn extend(&mut self, other: Report) {
        for e in other.entries {
            self.push(e);
        }
        self.echelon_builds += other.echelon_builds;
        self.echelon_cache_hits += other.echelon_cache_hits;
        self.millis += other.millis;
    }

    pub fn count(&self, pred: impl Fn(&Status) -> bool) -> usize {
        self.entries.iter().filter(|e| pred(&e.status)).count()
    }

    /// Report without timing fields, for comparisons across runs.
    pub fn to_json(&self, with_timing: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if !with_timing {
            v.as_object_mut().expect("object").remove("millis");
            for e in v["entries"].as_array_mut().expect("array") {
                e.as_object_mut().expect("object").remove("millis");
            }
        }
        serde_json::to_string_pretty(&v).expect("json")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let label = if e.label.is_empty() { String::new() } else { format!("[{} l={}] ", e.label, e.rank) };
            s.push_str(&format!("{}{}: {} ... {}\n", label, e.line, e.text, e.status));
        }
        let proved = self.count(Status::is_proved);
        s.push_str(&format!(
            "{} of {} proved, {} echelon builds, {} cache hits: {}\n",
            proved,
            self.entries.len(),
            self.echelon_builds,
            self.echelon_cache_hits,
            if self.passed { "PASS" } else { "FAIL" }
        ));
        s
    }
}

/// Holds the evaluator and the O-span echelons built so far.
pub struct Runner {
    rank: Rank,
    evaluator: Evaluator,
    atoms: Mutex<HashMap<(Name, ModuleFamily), TopLevelAction>>,
    echelons: HashMap<(u32, u32), OSpanEchelon>,
    builds: usize,
    hits: usize,
}

fn top_weight(v: &FockVector<Q>) -> u32 {
    v.max_twice_weight().unwrap_or(0) / 2
}

impl Runner {
    pub fn new(rank: Rank) -> Self {
        Runner { rank, evaluator: Evaluator::new(rank), atoms: Mutex::new(HashMap::new()), echelons: HashMap::new(), builds: 0, hits: 0 }
    }

    pub fn rank(&self) -> Rank {
        self.rank
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn realize(&self, e: &Expr) -> Result<FockVector<Q>, Error> {
        Ok(match e {
            Expr::Atom(n) => named_element(n, self.rank)?.realization,
            Expr::Raw(modes) => {
                for (a, _) in modes {
                    self.rank.check_gen(*a)?;
                }
                FockVector::from_monomial(Sector::Untwisted, untwisted(modes))
            }
            Expr::Rational(x) => FockVector::vacuum(Sector::Untwisted).scale(x),
            Expr::Scale(c, x) => self.realize(x)?.scale(c),
            Expr::Neg(x) => self.realize(x)?.neg(),
            Expr::Add(x, y) => self.realize(x)?.add(&self.realize(y)?),
            Expr::Sub(x, y) => self.realize(x)?.sub(&self.realize(y)?),
            Expr::Star(x, y) => star(&self.realize(x)?, &self.realize(y)?)?,
            Expr::Pow(x, k) => star_pow(&self.realize(x)?, *k)?,
            Expr::Circ(x, y, n) => circ_n(&self.realize(x)?, &self.realize(y)?, n.unwrap_or(0))?,
        })
    }

    /// Column count guard for an echelon at the given top weight.
    fn check_size(&self, cutoff: Cutoff) -> Result<(), Error> {
        let top = (cutoff.max_weight + cutoff.slack) as usize;
        let counts = colored_partition_counts(self.rank, top);
        let total: u64 = counts.iter().sum();
        if total > COLUMN_CAP {
            return Err(Error::Invalid(format!(
                "cutoff {cutoff} exceeds the resource guard ({total} monomials at rank {})",
                self.rank.ell()
            )));
        }
        Ok(())
    }

    /// Normal form of `v` modulo the truncated span, or `None` above the cutoff.
    pub fn normal_form(&mut self, v: &FockVector<Q>, cutoff: Cutoff) -> Result<Option<FockVector<Q>>, Error> {
        if v.is_zero() {
            return Ok(Some(v.clone()));
        }
        if top_weight(v) > cutoff.max_weight {
            return Ok(None);
        }
        self.check_size(cutoff)?;
        let classes: Vec<_> = classes_of(v).into_iter().collect();
        let key = (cutoff.max_weight, cutoff.slack);
        match self.echelons.get_mut(&key) {
            Some(ech) => {
                let missing = classes.iter().filter(|c| ech.class(**c).is_none()).count();
                self.hits += classes.len() - missing;
                self.builds += missing;
                ech.ensure(&classes)?;
            }
            None => {
                let cfg = OSpanConfig::new(self.rank, cutoff.max_weight, cutoff.slack);
                self.builds += classes.len();
                self.echelons.insert(key, OSpanEchelon::build(cfg, &classes)?);
            }
        }
        Ok(Some(self.echelons[&key].reduce(v)?))
    }

    /// `Some(true)` if `d` reduces to zero modulo the truncated span.
    pub fn reduces_to_zero(&mut self, d: &FockVector<Q>, cutoff: Cutoff) -> Result<Option<bool>, Error> {
        Ok(self.normal_form(d, cutoff)?.map(|nf| nf.is_zero()))
    }

    /// The action of `e` on `fam`, multiplying evaluations of star factors
    /// instead of realizing the products.
    pub fn eval_expr(&self, e: &Expr, fam: ModuleFamily) -> Result<TopLevelAction, Error> {
        let ev = &self.evaluator;
        Ok(match e {
            Expr::Atom(n) => {
                if let Some(a) = self.atoms.lock().expect("atom cache").get(&(n.clone(), fam)) {
                    return Ok(a.clone());
                }
                let a = ev.evaluate(&self.realize(e)?, fam)?;
                self.atoms.lock().expect("atom cache").insert((n.clone(), fam), a.clone());
                a
            }
            Expr::Raw(_) | Expr::Circ(..) => ev.evaluate(&self.realize(e)?, fam)?,
            Expr::Rational(x) => ev.evaluate(&FockVector::vacuum(Sector::Untwisted), fam)?.scale(x),
            Expr::Scale(c, x) => self.eval_expr(x, fam)?.scale(c),
            Expr::Neg(x) => self.eval_expr(x, fam)?.scale(&-Q::one()),
            Expr::Add(x, y) => self.eval_expr(x, fam)?.add(&self.eval_expr(y, fam)?)?,
            Expr::Sub(x, y) => self.eval_expr(x, fam)?.add(&self.eval_expr(y, fam)?.scale(&-Q::one()))?,
            Expr::Star(x, y) => self.eval_expr(x, fam)?.mul(&self.eval_expr(y, fam)?)?,
            Expr::Pow(x, k) => {
                let b = self.eval_expr(x, fam)?;
                let mut acc = b.one_like();
                for _ in 0..*k {
                    acc = acc.mul(&b)?;
                }
                acc
            }
        })
    }

    /// Upper bound for the weight of the realization of `e`.
    pub fn weight_bound(&self, e: &Expr) -> Result<u32, Error> {
        Ok(match e {
            Expr::Atom(n) => named_element(n, self.rank)?.weight().unwrap_or(0),
            Expr::Raw(v) => v.iter().map(|p| p.1).sum(),
            Expr::Rational(_) => 0,
            Expr::Scale(_, x) | Expr::Neg(x) => self.weight_bound(x)?,
            Expr::Add(x, y) | Expr::Sub(x, y) => self.weight_bound(x)?.max(self.weight_bound(y)?),
            Expr::Star(x, y) => self.weight_bound(x)? + self.weight_bound(y)?,
            Expr::Pow(x, k) => self.weight_bound(x)? * k,
            Expr::Circ(x, y, n) => {
                let n = n.unwrap_or(0);
                if n < 0 {
                    return Err(Error::Invalid("circn needs n >= 0".into()));
                }
                self.weight_bound(x)? + self.weight_bound(y)? + n as u32 + 1
            }
        })
    }

    /// The first family, in witness order, where `x - y` acts nontrivially.
    fn disprove(&self, x: &Expr, y: &Expr) -> Result<Option<Witness>, Error> {
        for fam in ModuleFamily::WITNESS_ORDER {
            let (a, b) = (self.eval_expr(x, fam)?, self.eval_expr(y, fam)?);
            if let Status::Disproved { witness } = compare(fam, &a, &b) {
                return Ok(Some(witness));
            }
        }
        Ok(None)
    }

    fn equiv(&mut self, x: &Expr, y: &Expr, cutoff: Cutoff) -> Result<Status, Error> {
        if let Some(witness) = self.disprove(x, y)? {
            return Ok(Status::Disproved { witness });
        }
        // realizing products beyond the cutoff is wasted work
        if self.weight_bound(x)?.max(self.weight_bound(y)?) > cutoff.max_weight {
            return Ok(Status::Unknown { cutoff });
        }
        let d = self.realize(x)?.sub(&self.realize(y)?);
        Ok(match self.reduces_to_zero(&d, cutoff)? {
            Some(true) => Status::Proved,
            _ => Status::Unknown { cutoff },
        })
    }

    pub fn run_statement(&mut self, st: &Statement, cutoff: Cutoff) -> Status {
        match self.try_statement(st, cutoff) {
            Ok(s) => s,
            Err(e) => Status::Error { message: e.to_string() },
        }
    }

    fn try_statement(&mut self, st: &Statement, cutoff: Cutoff) -> Result<Status, Error> {
        match &st.kind {
            StatementKind::AssertEquiv(x, y) => self.equiv(x, y, cutoff),
            StatementKind::AssertEval(x, fam, v) => {
                let got = self.eval_expr(x, *fam)?;
                let want = value_action(v, *fam, self.rank)?;
                Ok(compare(*fam, &got, &want))
            }
            StatementKind::AssertRank(xs, r) => {
                let vs = xs.iter().map(|x| self.realize(x)).collect::<Result<Vec<_>, _>>()?;
                let got = self.evaluator.independence_rank(&vs)?;
                Ok(if got == *r {
                    Status::Proved
                } else {
                    Status::Disproved {
                        witness: Witness {
                            family: None,
                            entry: "rank".into(),
                            got: got.to_string(),
                            expected: r.to_string(),
                        },
                    }
                })
            }
            StatementKind::AssertZeroEval(x) => {
                for fam in ModuleFamily::WITNESS_ORDER {
                    let got = self.eval_expr(x, fam)?;
                    if !got.is_zero() {
                        return Ok(compare(fam, &got, &zero_like(&got)));
                    }
                }
                Ok(Status::Proved)
            }
        }
    }

    /// Runs statements in order, all at one cutoff.
    pub fn run(&mut self, stmts: &[Statement], cutoff: Cutoff, label: &str) -> Report {
        let start = Instant::now();
        let (b0, h0) = (self.builds, self.hits);
        let mut report = Report::new(self.rank.ell());
        for st in stmts {
            let t = Instant::now();
            let status = self.run_statement(st, cutoff);
            report.push(Entry {
                label: label.to_string(),
                rank: self.rank.ell(),
                line: st.location.line,
                text: st.to_string(),
                status,
                millis: t.elapsed().as_millis() as u64,
            });
        }
        report.echelon_builds = self.builds - b0;
        report.echelon_cache_hits = self.hits - h0;
        report.millis = start.elapsed().as_millis() as u64;
        report
    }
}

/// Parses, range-checks and runs a script.
pub fn run_script(stmts: &[Statement], config: RunConfig) -> Report {
    Runner::new(config.rank).run(stmts, config.cutoff, "")
}

fn zero_like(a: &TopLevelAction) -> TopLevelAction {
    a.scale(&Q::zero())
}

fn compare(fam: ModuleFamily, got: &TopLevelAction, want: &TopLevelAction) -> Status {
    if got == want {
        return Status::Proved;
    }
    let g: std::collections::BTreeMap<String, Q> = got.coordinates().into_iter().collect();
    let w: std::collections::BTreeMap<String, Q> = want.coordinates().into_iter().collect();
    let mut keys: Vec<&String> = g.keys().chain(w.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut entry = String::new();
    let (mut gs, mut ws) = (got.to_string(), want.to_string());
    for k in keys {
        let a = g.get(k).cloned().unwrap_or_else(Q::zero);
        let b = w.get(k).cloned().unwrap_or_else(Q::zero);
        if a != b {
            entry = k.clone();
            gs = fmt_q(&a);
            ws = fmt_q(&b);
            break;
        }
    }
    Status::Disproved { witness: Witness { family: Some(fam), entry, got: gs, expected: ws } }
}

/// Interprets an expected value in the shape of `fam`'s top level.
/// A constant on a matrix family means that multiple of the identity.
pub fn value_action(v: &ValueExpr, fam: ModuleFamily, rank: Rank) -> Result<TopLevelAction, Error> {
    let ell = rank.ell();
    let bad = |m: &str| Error::Invalid(format!("value `{v}` on {fam}: {m}"));
    match v {
        ValueExpr::Matrix(rows) => {
            if !fam.is_matrix() {
                return Err(bad("matrix given for a scalar family"));
            }
            if rows.len() != ell {
                return Err(bad("wrong matrix size"));
            }
            Ok(TopLevelAction::Matrix(Matrix::from_rows(rows.clone())?))
        }
        ValueExpr::Terms(terms) => {
            if fam.is_matrix() {
                let mut m = Matrix::zero(ell);
                for (c, fs) in terms {
                    let mut t = Matrix::identity(ell);
                    for f in fs {
                        let u = match f {
                            ValueFactor::Identity => Matrix::identity(ell),
                            ValueFactor::Unit(a, b) => {
                                rank.check_gen(*a)?;
                                rank.check_gen(*b)?;
                                Matrix::unit(ell, *a, *b)
                            }
                            ValueFactor::Lambda(..) => return Err(bad("lambda in a matrix value")),
                        };
                        t = t.mul(&u);
                    }
                    m = m.add(&t.scale(c));
                }
                Ok(TopLevelAction::Matrix(m))
            } else if fam == ModuleFamily::Mlambda {
                let mut p = LambdaPoly::zero();
                for (c, fs) in terms {
                    let mut e = vec![0u32; ell];
                    for f in fs {
                        match f {
                            ValueFactor::Lambda(a, k) => {
                                rank.check_gen(*a)?;
                                e[a - 1] += k;
                            }
                            ValueFactor::Identity => {}
                            ValueFactor::Unit(..) => return Err(bad("matrix unit in a polynomial value")),
                        }
                    }
                    p.add_term(Exponents::new(e), c.clone());
                }
                Ok(TopLevelAction::Poly(p))
            } else {
                let mut s = Q::zero();
                for (c, fs) in terms {
                    if fs.iter().any(|f| *f != ValueFactor::Identity) {
                        return Err(bad("a scalar is expected"));
                    }
                    s += c;
                }
                Ok(TopLevelAction::Scalar(s))
            }
        }
    }
}

/// Canonical value text for an action, parseable by `parse_value`.
pub fn action_text(a: &TopLevelAction) -> String {
    a.to_string()
}
