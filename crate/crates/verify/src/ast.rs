//! Abstract syntax of relation scripts and its canonical printer.

use std::fmt;

use mplus_core::eval::ModuleFamily;
use mplus_core::rational::{fmt_q, Q};
use mplus_core::zhu::Name;
use num_traits::Signed;

/// Line and column (1-based) of the first token of a construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Location {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom(Name),
    /// `h{a}(-n)...` applied to the vacuum, as `(a, n)` pairs in source order.
    Raw(Vec<(usize, u32)>),
    /// A rational multiple of `one`.
    Rational(Q),
    Scale(Q, Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Star(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Circ(Box<Expr>, Box<Expr>, Option<i64>),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Star(..) => 2,
            Expr::Scale(..) | Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Rational(x) if x.is_negative() => 3,
            _ => 5,
        }
    }

    /// Generator indices mentioned, with the location-free atom text, for range checks.
    pub fn generators(&self, out: &mut Vec<usize>) {
        match self {
            Expr::Atom(n) => match n {
                Name::One => {}
                Name::Omega(a) | Name::J(a) | Name::H(a) => out.push(*a),
                Name::S { a, b, .. }
                | Name::Eu(a, b)
                | Name::EuBar(a, b)
                | Name::Et(a, b)
                | Name::EtBar(a, b)
                | Name::Lam(a, b) => out.extend([*a, *b]),
                Name::SAlpha(v) => out.extend(v.iter().map(|p| p.0)),
            },
            Expr::Raw(v) => out.extend(v.iter().map(|p| p.0)),
            Expr::Rational(_) => {}
            Expr::Scale(_, e) | Expr::Neg(e) | Expr::Pow(e, _) => e.generators(out),
            Expr::Add(x, y) | Expr::Sub(x, y) | Expr::Star(x, y) | Expr::Circ(x, y, _) => {
                x.generators(out);
                y.generators(out);
            }
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.prec() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Atom(n) => write!(f, "{n}"),
            Expr::Raw(v) => {
                for (a, n) in v {
                    write!(f, "h{a}(-{n})")?;
                }
                Ok(())
            }
            Expr::Rational(x) => f.write_str(&fmt_q(x)),
            Expr::Scale(c, e) => {
                write!(f, "{} ", fmt_q(c))?;
                wrap(f, e, 4)
            }
            Expr::Neg(e) => {
                write!(f, "-")?;
                wrap(f, e, 4)
            }
            Expr::Add(x, y) => {
                wrap(f, x, 1)?;
                write!(f, " + ")?;
                wrap(f, y, 2)
            }
            Expr::Sub(x, y) => {
                wrap(f, x, 1)?;
                write!(f, " - ")?;
                wrap(f, y, 2)
            }
            Expr::Star(x, y) => {
                wrap(f, x, 2)?;
                write!(f, " * ")?;
                wrap(f, y, 3)
            }
            Expr::Pow(e, k) => {
                wrap(f, e, 5)?;
                write!(f, "^{k}")
            }
            Expr::Circ(x, y, None) => write!(f, "circ({x}, {y})"),
            Expr::Circ(x, y, Some(n)) => write!(f, "circn({x}, {y}, {n})"),
        }
    }
}

/// A factor in an expected top-level value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueFactor {
    /// `l{a}^k`
    Lambda(usize, u32),
    /// `E(a,b)`
    Unit(usize, usize),
    /// `I`
    Identity,
}

/// Expected value of an evaluation: a literal matrix or a sum of monomial terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueExpr {
    Terms(Vec<(Q, Vec<ValueFactor>)>),
    Matrix(Vec<Vec<Q>>),
}

impl fmt::Display for ValueFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueFactor::Lambda(a, 1) => write!(f, "l{a}"),
            ValueFactor::Lambda(a, k) => write!(f, "l{a}^{k}"),
            ValueFactor::Unit(a, b) => write!(f, "E({a},{b})"),
            ValueFactor::Identity => write!(f, "I"),
        }
    }
}

impl fmt::Display for ValueExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueExpr::Matrix(rows) => {
                write!(f, "[")?;
                for (i, r) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    let cells: Vec<String> = r.iter().map(fmt_q).collect();
                    write!(f, "[{}]", cells.join(", "))?;
                }
                write!(f, "]")
            }
            ValueExpr::Terms(terms) if terms.is_empty() => write!(f, "0"),
            ValueExpr::Terms(terms) => {
                for (i, (c, fs)) in terms.iter().enumerate() {
                    let neg = c.is_negative();
                    let mag = c.abs();
                    if i == 0 {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { "-" } else { "+" })?;
                    }
                    let body: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                    if body.is_empty() {
                        write!(f, "{}", fmt_q(&mag))?;
                    } else if mag == Q::from_integer(1.into()) {
                        write!(f, "{}", body.join("*"))?;
                    } else {
                        write!(f, "{}*{}", fmt_q(&mag), body.join("*"))?;
                    }
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StatementKind {
    AssertEquiv(Expr, Expr),
    AssertEval(Expr, ModuleFamily, ValueExpr),
    AssertRank(Vec<Expr>, usize),
    AssertZeroEval(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub kind: StatementKind,
    pub location: Location,
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatementKind::AssertEquiv(x, y) => write!(f, "assert_equiv {x} ~ {y}"),
            StatementKind::AssertEval(x, fam, v) => write!(f, "assert_eval {x} on {fam} = {v}"),
            StatementKind::AssertRank(xs, r) => {
                let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "assert_rank [{}] = {r}", items.join(", "))
            }
            StatementKind::AssertZeroEval(x) => write!(f, "assert_zero_eval {x}"),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)
    }
}

/// One statement per line.
pub fn pretty_print(stmts: &[Statement]) -> String {
    let mut s = String::new();
    for st in stmts {
        s.push_str(&st.to_string());
        s.push('\n');
    }
    s
}
