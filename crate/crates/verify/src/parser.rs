//! Lexer and recursive-descent parser for relation scripts.
//!
//! ```text
//! statement := "assert_equiv" expr "~" expr
//!            | "assert_eval" expr "on" FAMILY "=" value
//!            | "assert_rank" "[" expr ("," expr)* "]" "=" INT
//!            | "assert_zero_eval" expr
//! expr      := term (("+" | "-") term)*
//! term      := factor ("*" factor)*
//! factor    := "-" factor | RAT power? | power
//! power     := primary ("^" INT)?
//! primary   := atom | raw | RAT | "(" expr ")"
//!            | "circ" "(" expr "," expr ")" | "circn" "(" expr "," expr "," INT ")"
//! ```

use mplus_core::eval::ModuleFamily;
use mplus_core::rational::Q;
use mplus_core::zhu::Name;
use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::ast::{Expr, Location, Statement, StatementKind, ValueExpr, ValueFactor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{loc}: syntax error: {msg}")]
    Syntax { loc: Location, msg: String },
    #[error("{loc}: generator index {gen} out of range for rank {rank}")]
    IndexRange { loc: Location, gen: usize, rank: usize },
    #[error("{loc}: diagonal indices ({gen},{gen}) are not allowed for {what}")]
    Diagonal { loc: Location, gen: usize, what: String },
}

impl ParseError {
    pub fn location(&self) -> Location {
        match self {
            ParseError::Syntax { loc, .. } | ParseError::IndexRange { loc, .. } | ParseError::Diagonal { loc, .. } => *loc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Newline,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    loc: Location,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(n) => format!("`{n}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Newline => "end of line".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let loc = Location { line: li + 1, col: i + 1 };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), loc });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Int(s.parse().expect("digits")), loc });
            } else if "()[],;+-*^~=/".contains(c) {
                out.push(Token { tok: Tok::Sym(c), loc });
                i += 1;
            } else {
                return Err(ParseError::Syntax { loc, msg: format!("unexpected character `{c}`") });
            }
        }
        out.push(Token { tok: Tok::Newline, loc: Location { line: li + 1, col: chars.len() + 1 } });
    }
    let end = out.last().map(|t| t.loc).unwrap_or(Location { line: 1, col: 1 });
    out.push(Token { tok: Tok::End, loc: end });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

/// Splits `w12` into `("w", Some(12))`.
fn split_ident(s: &str) -> (&str, Option<usize>) {
    let k = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
    let (head, tail) = s.split_at(k);
    if tail.is_empty() {
        (head, None)
    } else {
        match tail.parse() {
            Ok(n) => (head, Some(n)),
            Err(_) => (s, None),
        }
    }
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::Syntax { loc: self.peek().loc, msg: msg.into() })
    }

    fn unexpected<T>(&self, want: &str) -> PResult<T> {
        let got = describe(&self.peek().tok);
        self.err(format!("expected {want}, found {got}"))
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.is_sym(c) {
            self.next();
            Ok(())
        } else {
            self.unexpected(&format!("`{c}`"))
        }
    }

    fn expect_ident(&mut self, word: &str) -> PResult<()> {
        if self.peek().tok == Tok::Ident(word.into()) {
            self.next();
            Ok(())
        } else {
            self.unexpected(&format!("`{word}`"))
        }
    }

    fn int(&mut self) -> PResult<BigInt> {
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            _ => self.unexpected("an integer"),
        }
    }

    fn small<T: TryFrom<BigInt>>(&mut self) -> PResult<T> {
        let loc = self.peek().loc;
        let n = self.int()?;
        T::try_from(n).map_err(|_| ParseError::Syntax { loc, msg: "integer out of range".into() })
    }

    fn signed_small(&mut self) -> PResult<i64> {
        if self.is_sym('-') {
            self.next();
            Ok(-self.small::<i64>()?)
        } else {
            self.small()
        }
    }

    /// `p` or `p/q`, unsigned.
    fn rational(&mut self) -> PResult<Q> {
        let n = self.int()?;
        if self.is_sym('/') {
            self.next();
            let loc = self.peek().loc;
            let d = self.int()?;
            if d.is_zero() {
                return Err(ParseError::Syntax { loc, msg: "zero denominator".into() });
            }
            Ok(Q::new(n, d))
        } else {
            Ok(Q::from_integer(n))
        }
    }

    fn signed_rational(&mut self) -> PResult<Q> {
        if self.is_sym('-') {
            self.next();
            Ok(-self.rational()?)
        } else {
            self.rational()
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek().tok, Tok::Ident(_) | Tok::Sym('('))
    }

    fn statement(&mut self) -> PResult<Statement> {
        let loc = self.peek().loc;
        let word = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return self.unexpected("a statement"),
        };
        self.next();
        let kind = match word.as_str() {
            "assert_equiv" => {
                let x = self.expr()?;
                self.expect_sym('~')?;
                let y = self.expr()?;
                StatementKind::AssertEquiv(x, y)
            }
            "assert_eval" => {
                let x = self.expr()?;
                self.expect_ident("on")?;
                let floc = self.peek().loc;
                let fam = match &self.peek().tok {
                    Tok::Ident(s) => ModuleFamily::parse(s),
                    _ => None,
                };
                let Some(fam) = fam else {
                    return Err(ParseError::Syntax {
                        loc: floc,
                        msg: "expected one of Hplus, Hminus, Mlambda, Tplus, Tminus".into(),
                    });
                };
                self.next();
                self.expect_sym('=')?;
                let v = self.value()?;
                StatementKind::AssertEval(x, fam, v)
            }
            "assert_rank" => {
                self.expect_sym('[')?;
                let mut xs = vec![self.expr()?];
                while self.is_sym(',') {
                    self.next();
                    xs.push(self.expr()?);
                }
                self.expect_sym(']')?;
                self.expect_sym('=')?;
                let r = self.small()?;
                StatementKind::AssertRank(xs, r)
            }
            "assert_zero_eval" => StatementKind::AssertZeroEval(self.expr()?),
            other => {
                return Err(ParseError::Syntax { loc, msg: format!("unknown statement `{other}`") });
            }
        };
        match self.peek().tok {
            Tok::Newline | Tok::End => Ok(Statement { kind, location: loc }),
            _ => self.unexpected("end of line"),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut e = self.term()?;
        loop {
            if self.is_sym('+') {
                self.next();
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.is_sym('-') {
                self.next();
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut e = self.factor()?;
        while self.is_sym('*') {
            self.next();
            e = Expr::Star(Box::new(e), Box::new(self.factor()?));
        }
        Ok(e)
    }

    fn factor(&mut self) -> PResult<Expr> {
        if self.is_sym('-') {
            self.next();
            if matches!(self.peek().tok, Tok::Int(_)) {
                let c = -self.rational()?;
                return self.after_literal(c);
            }
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        if matches!(self.peek().tok, Tok::Int(_)) {
            let c = self.rational()?;
            return self.after_literal(c);
        }
        self.power()
    }

    fn after_literal(&mut self, c: Q) -> PResult<Expr> {
        if self.starts_primary() {
            Ok(Expr::Scale(c, Box::new(self.power()?)))
        } else {
            self.power_suffix(Expr::Rational(c))
        }
    }

    fn power(&mut self) -> PResult<Expr> {
        let p = self.primary()?;
        self.power_suffix(p)
    }

    fn power_suffix(&mut self, e: Expr) -> PResult<Expr> {
        if self.is_sym('^') {
            self.next();
            let k = self.small()?;
            Ok(Expr::Pow(Box::new(e), k))
        } else {
            Ok(e)
        }
    }

    fn pair(&mut self) -> PResult<(usize, usize)> {
        self.expect_sym('(')?;
        let a = self.index()?;
        self.expect_sym(',')?;
        let b = self.index()?;
        self.expect_sym(')')?;
        Ok((a, b))
    }

    fn index(&mut self) -> PResult<usize> {
        let loc = self.peek().loc;
        let a: usize = self.small()?;
        if a == 0 {
            return Err(ParseError::Syntax { loc, msg: "generator indices start at 1".into() });
        }
        Ok(a)
    }

    fn positive(&mut self) -> PResult<u32> {
        let loc = self.peek().loc;
        let m: u32 = self.small()?;
        if m == 0 {
            return Err(ParseError::Syntax { loc, msg: "mode index must be positive".into() });
        }
        Ok(m)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Sym('(') => {
                self.next();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Int(_) => Ok(Expr::Rational(self.rational()?)),
            Tok::Ident(s) => {
                let s = s.clone();
                let (head, idx) = split_ident(&s);
                match (head, idx) {
                    ("one", None) => {
                        self.next();
                        Ok(Expr::Atom(Name::One))
                    }
                    ("w", Some(a)) | ("J", Some(a)) | ("H", Some(a)) => {
                        if a == 0 {
                            return self.err("generator indices start at 1");
                        }
                        self.next();
                        Ok(Expr::Atom(match head {
                            "w" => Name::Omega(a),
                            "J" => Name::J(a),
                            _ => Name::H(a),
                        }))
                    }
                    ("h", Some(_)) => self.raw(),
                    ("S", None) => {
                        self.next();
                        self.expect_sym('(')?;
                        let a = self.index()?;
                        self.expect_sym(',')?;
                        let m = self.positive()?;
                        self.expect_sym(';')?;
                        let b = self.index()?;
                        self.expect_sym(',')?;
                        let n = self.positive()?;
                        self.expect_sym(')')?;
                        Ok(Expr::Atom(Name::S { a, m, b, n }))
                    }
                    ("Eu" | "Et" | "Lam" | "Eubar" | "Etbar", None) => {
                        self.next();
                        let (a, b) = self.pair()?;
                        if a == b {
                            return Err(ParseError::Diagonal { loc: t.loc, gen: a, what: s });
                        }
                        Ok(Expr::Atom(match head {
                            "Eu" => Name::Eu(a, b),
                            "Et" => Name::Et(a, b),
                            "Lam" => Name::Lam(a, b),
                            "Eubar" => Name::EuBar(a, b),
                            _ => Name::EtBar(a, b),
                        }))
                    }
                    ("circ" | "circn", None) => {
                        self.next();
                        self.expect_sym('(')?;
                        let x = self.expr()?;
                        self.expect_sym(',')?;
                        let y = self.expr()?;
                        let n = if head == "circn" {
                            self.expect_sym(',')?;
                            Some(self.signed_small()?)
                        } else {
                            None
                        };
                        self.expect_sym(')')?;
                        Ok(Expr::Circ(Box::new(x), Box::new(y), n))
                    }
                    _ => self.err(format!("unknown atom `{s}`")),
                }
            }
            _ => self.unexpected("an expression"),
        }
    }

    /// `h1(-3)h2(-1)...`
    fn raw(&mut self) -> PResult<Expr> {
        let mut modes = Vec::new();
        while let Tok::Ident(s) = &self.peek().tok {
            let (head, idx) = split_ident(s);
            let (true, Some(a)) = (head == "h", idx) else { break };
            if a == 0 {
                return self.err("generator indices start at 1");
            }
            if self.peek_at(1) != &Tok::Sym('(') {
                break;
            }
            self.next();
            self.expect_sym('(')?;
            self.expect_sym('-')?;
            let n = self.positive()?;
            self.expect_sym(')')?;
            modes.push((a, n));
        }
        Ok(Expr::Raw(modes))
    }

    fn value(&mut self) -> PResult<ValueExpr> {
        if self.is_sym('[') {
            self.next();
            let mut rows = Vec::new();
            loop {
                self.expect_sym('[')?;
                let mut row = vec![self.signed_rational()?];
                while self.is_sym(',') {
                    self.next();
                    row.push(self.signed_rational()?);
                }
                self.expect_sym(']')?;
                rows.push(row);
                if self.is_sym(',') {
                    self.next();
                } else {
                    break;
                }
            }
            self.expect_sym(']')?;
            return Ok(ValueExpr::Matrix(rows));
        }
        let mut terms = Vec::new();
        let mut sign = Q::from_integer(1.into());
        if self.is_sym('-') {
            self.next();
            sign = -sign;
        }
        loop {
            let (c, fs) = self.value_term()?;
            if !(c.is_zero() && fs.is_empty()) {
                terms.push((sign.clone() * c, fs));
            }
            if self.is_sym('+') {
                sign = Q::from_integer(1.into());
            } else if self.is_sym('-') {
                sign = Q::from_integer((-1).into());
            } else {
                return Ok(ValueExpr::Terms(terms));
            }
            self.next();
        }
    }

    fn value_term(&mut self) -> PResult<(Q, Vec<ValueFactor>)> {
        let mut c = Q::from_integer(1.into());
        let mut fs = Vec::new();
        if matches!(self.peek().tok, Tok::Int(_)) {
            c = self.rational()?;
            if self.is_sym('*') {
                self.next();
            } else if !matches!(self.peek().tok, Tok::Ident(_)) {
                return Ok((c, fs));
            }
        }
        loop {
            fs.push(self.value_factor()?);
            if self.is_sym('*') {
                self.next();
            } else {
                return Ok((c, fs));
            }
        }
    }

    fn value_factor(&mut self) -> PResult<ValueFactor> {
        let s = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return self.unexpected("`l<a>`, `E(a,b)` or `I`"),
        };
        match split_ident(&s) {
            ("l", Some(a)) if a > 0 => {
                self.next();
                let k = if self.is_sym('^') {
                    self.next();
                    self.small()?
                } else {
                    1
                };
                Ok(ValueFactor::Lambda(a, k))
            }
            ("I", None) => {
                self.next();
                Ok(ValueFactor::Identity)
            }
            ("E", None) => {
                self.next();
                let (a, b) = self.pair()?;
                Ok(ValueFactor::Unit(a, b))
            }
            _ => self.err(format!("unknown value factor `{s}`")),
        }
    }
}

/// Parses a script: one statement per line, `#` starts a comment.
pub fn parse_script(text: &str) -> Result<Vec<Statement>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut out = Vec::new();
    loop {
        match p.peek().tok {
            Tok::End => return Ok(out),
            Tok::Newline => {
                p.next();
            }
            _ => out.push(p.statement()?),
        }
    }
}

/// Parses a single expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    match p.peek().tok {
        Tok::Newline | Tok::End => Ok(e),
        _ => p.unexpected("end of expression"),
    }
}

/// Parses an expected value such as `-35/32*E(1,2) - 5/32*E(2,1)` or `l1^4 - 1/2*l1^2`.
pub fn parse_value(text: &str) -> Result<ValueExpr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let v = p.value()?;
    match p.peek().tok {
        Tok::Newline | Tok::End => Ok(v),
        _ => p.unexpected("end of value"),
    }
}

/// Rejects generator indices above the rank.
pub fn check_rank(stmts: &[Statement], ell: usize) -> Result<(), ParseError> {
    for st in stmts {
        let mut gens = Vec::new();
        let mut values = Vec::new();
        match &st.kind {
            StatementKind::AssertEquiv(x, y) => {
                x.generators(&mut gens);
                y.generators(&mut gens);
            }
            StatementKind::AssertEval(x, _, v) => {
                x.generators(&mut gens);
                values.push(v);
            }
            StatementKind::AssertRank(xs, _) => xs.iter().for_each(|x| x.generators(&mut gens)),
            StatementKind::AssertZeroEval(x) => x.generators(&mut gens),
        }
        for v in values {
            match v {
                ValueExpr::Terms(ts) => {
                    for (_, fs) in ts {
                        for f in fs {
                            match f {
                                ValueFactor::Lambda(a, _) => gens.push(*a),
                                ValueFactor::Unit(a, b) => gens.extend([*a, *b]),
                                ValueFactor::Identity => {}
                            }
                        }
                    }
                }
                ValueExpr::Matrix(rows) => {
                    if rows.len() != ell || rows.iter().any(|r| r.len() != ell) {
                        return Err(ParseError::Syntax {
                            loc: st.location,
                            msg: format!("matrix value must be {ell}x{ell}"),
                        });
                    }
                }
            }
        }
        if let Some(&g) = gens.iter().find(|&&g| g > ell) {
            return Err(ParseError::IndexRange { loc: st.location, gen: g, rank: ell });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse_expr("w1 - 4 w1*w1 + 2 J1^2").unwrap();
        assert_eq!(e.to_string(), "w1 - 4 w1 * w1 + 2 J1^2");
        let Expr::Add(lhs, _) = &e else { panic!() };
        let Expr::Sub(_, t) = lhs.as_ref() else { panic!() };
        assert!(matches!(t.as_ref(), Expr::Star(x, _) if matches!(x.as_ref(), Expr::Scale(..))));
    }

    #[test]
    fn raw_monomials() {
        let e = parse_expr("h1(-3)h2(-1) * w1").unwrap();
        let Expr::Star(x, _) = &e else { panic!() };
        assert_eq!(x.as_ref(), &Expr::Raw(vec![(1, 3), (2, 1)]));
    }

    #[test]
    fn values() {
        let v = parse_value("l1^4 - 1/2*l1^2").unwrap();
        assert_eq!(v.to_string(), "l1^4 - 1/2*l1^2");
        let v = parse_value("[[0, -35/32], [-5/32, 0]]").unwrap();
        assert_eq!(v, ValueExpr::Matrix(vec![
            vec![Q::from_integer(0.into()), Q::new((-35).into(), 32.into())],
            vec![Q::new((-5).into(), 32.into()), Q::from_integer(0.into())],
        ]));
        assert_eq!(parse_value("0").unwrap(), ValueExpr::Terms(vec![]));
    }

    #[test]
    fn errors_have_locations() {
        let e = parse_script("assert_equiv w1 ~ 0\nassert_equiv w1 * (").unwrap_err();
        assert_eq!(e.location(), Location { line: 2, col: 20 });
        let e = parse_script("assert_zero_eval Eu(2,2)").unwrap_err();
        assert!(matches!(e, ParseError::Diagonal { gen: 2, .. }));
        let s = parse_script("assert_zero_eval w3").unwrap();
        assert!(matches!(check_rank(&s, 2), Err(ParseError::IndexRange { gen: 3, .. })));
    }
}
