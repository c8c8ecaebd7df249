//! Built-in suites of relations in the Zhu algebra of `H^+`.
//!
//! Sections checked by O-span reduction run at a fixed small rank with a
//! shipped cutoff; evaluation sections run at the requested rank, raised to
//! the least rank that has enough distinct indices.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::time::Instant;

use mplus_core::fock::Rank;
use mplus_core::rational::{fmt_q, q, Q};
use mplus_core::zhu::{coordinates_modulo, s_circle_coordinates, s_elem};
use mplus_core::Error;

use crate::parser::{check_rank, parse_script};
use crate::runner::{Cutoff, Entry, Report, Runner, Status, Witness};
use crate::tables::golden_script;

pub const SUITE_NAMES: [&str; 5] = ["tables", "circle_reductions", "matrix_units", "final_relations", "all"];

/// Cutoff for sections that only evaluate.
const EVAL_ONLY: Cutoff = Cutoff { max_weight: 0, slack: 0 };

struct Section {
    label: &'static str,
    rank: usize,
    cutoff: Cutoff,
    script: String,
}

/// Runners by rank, shared across sections so echelons are reused.
pub struct Session {
    runners: HashMap<usize, Runner>,
    cutoff_override: Option<Cutoff>,
}

impl Session {
    pub fn new(cutoff_override: Option<Cutoff>) -> Self {
        Session { runners: HashMap::new(), cutoff_override }
    }

    pub fn runner(&mut self, ell: usize) -> Result<&mut Runner, Error> {
        let rank = Rank::new(ell)?;
        Ok(self.runners.entry(ell).or_insert_with(|| Runner::new(rank)))
    }

    fn run_section(&mut self, s: &Section) -> Result<Report, Error> {
        let stmts = parse_script(&s.script).map_err(|e| Error::Parse(format!("suite {}: {e}", s.label)))?;
        check_rank(&stmts, s.rank).map_err(|e| Error::Parse(format!("suite {}: {e}", s.label)))?;
        let cutoff = match (s.cutoff, self.cutoff_override) {
            (c, _) if c == EVAL_ONLY => c,
            (_, Some(o)) => o,
            (c, None) => c,
        };
        Ok(self.runner(s.rank)?.run(&stmts, cutoff, s.label))
    }
}

fn eq_line(out: &mut String, lhs: &str, rhs: &str) {
    writeln!(out, "assert_equiv {lhs} ~ {rhs}").expect("string write");
}

fn zero_line(out: &mut String, lhs: &str, rhs: &str) {
    if rhs == "0" {
        writeln!(out, "assert_zero_eval {lhs}").expect("string write");
    } else {
        writeln!(out, "assert_zero_eval {lhs} - ({rhs})").expect("string write");
    }
}

fn qs(n: i64, d: i64) -> String {
    fmt_q(&Q::new(n.into(), d.into()))
}

fn pairs(ell: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::new();
    for a in 1..=ell {
        for b in 1..=ell {
            if a != b {
                v.push((a, b));
            }
        }
    }
    v
}

fn triples(ell: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for (a, b) in pairs(ell) {
        for c in 1..=ell {
            if c != a && c != b {
                v.push((a, b, c));
            }
        }
    }
    v
}

fn tables(ell: usize) -> Vec<Section> {
    vec![Section { label: "tables", rank: ell, cutoff: EVAL_ONLY, script: golden_script(Rank::new(ell).expect("rank")) }]
}

fn circle_sections() -> Vec<Section> {
    let mut out = Vec::new();

    // four distinct generators: sign rule
    let mut s = String::new();
    for (m, n, r, t) in [(2, 1, 1, 1), (1, 1, 1, 2), (3, 1, 1, 1), (2, 2, 1, 1), (1, 2, 1, 2), (1, 1, 2, 1)] {
        let sign = if (m + n + r + t) % 2 == 0 { "" } else { "-" };
        eq_line(&mut s, &format!("h1(-{m})h2(-{n})h3(-{r})h4(-{t})"), &format!("{sign}h1(-1)h2(-1)h3(-1)h4(-1)"));
    }
    out.push(Section { label: "four-generator-sign", rank: 4, cutoff: Cutoff { max_weight: 6, slack: 1 }, script: s });

    // h_a(-1)^2 S_ab(m,n) in terms of right multiplication by omega_a
    let mut s = String::new();
    for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        eq_line(
            &mut s,
            &format!("h1(-1)h1(-1)h1(-{m})h2(-{n})"),
            &format!("2 S(1,{m};2,{n}) * w1 - {} S(1,{};2,{n}) - {} S(1,{};2,{n})", 2 * m, m + 2, 2 * m, m + 1),
        );
    }
    // (S_ab(1,m+1) + S_ab(1,m)) * w_a
    for m in 1..=3i64 {
        eq_line(
            &mut s,
            &format!("(S(1,1;2,{}) + S(1,1;2,{m})) * w1", m + 1),
            &format!(
                "S(1,3;2,{}) + {} S(1,4;2,{m}) + {} S(1,3;2,{m}) + S(1,2;2,{}) + {} S(1,2;2,{m})",
                m + 1,
                qs(3, 2 * m),
                qs(m + 3, m),
                m + 1,
                qs(2 * m + 3, 2 * m)
            ),
        );
    }
    // w_a * (S_bb(1,m+1) + S_bb(1,m))
    for m in 1..=2i64 {
        eq_line(
            &mut s,
            &format!("w1 * (S(2,1;2,{}) + S(2,1;2,{m}))", m + 1),
            &format!(
                "1/2 (S(1,1;1,{}) + 2 S(1,1;1,{}) + S(1,1;1,{})) + {} (S(2,4;2,{m}) + 2 S(2,3;2,{m}) + S(2,2;2,{m}))",
                m + 3,
                m + 2,
                m + 1,
                qs(1, 2 * m)
            ),
        );
    }
    // h_a(-1)^4 S_ab(1,m)
    for m in 1..=2i64 {
        eq_line(
            &mut s,
            &format!("h1(-1)h1(-1)h1(-1)h1(-1)h1(-1)h2(-{m})"),
            &format!(
                "4 S(1,1;2,{m}) * w1^2 - (16 S(1,3;2,{m}) + 4 S(1,2;2,{m}) - {} S(1,1;2,{}) - {} S(1,1;2,{m})) * w1 \
                 + 36 S(1,5;2,{m}) + 36 S(1,4;2,{m}) - {} S(1,3;2,{}) - {} S(1,2;2,{}) - {} S(1,3;2,{m}) - {} S(1,2;2,{m})",
                4 * m,
                m + 1,
                4 * (m + 3),
                4 * m,
                m + 1,
                4 * m,
                m + 1,
                4 * (m + 3),
                4 * (m + 3)
            ),
        );
    }
    out.push(Section { label: "omega-right-action", rank: 2, cutoff: Cutoff { max_weight: 7, slack: 2 }, script: s });

    // omega_a * (S_bc(1,m+1) + S_bc(1,m)) for three distinct generators
    let mut s = String::new();
    for m in 1..=2i64 {
        eq_line(
            &mut s,
            &format!("w1 * (S(2,1;3,{}) + S(2,1;3,{m}))", m + 1),
            &format!("{} S(2,4;3,{m}) + {} S(2,3;3,{m}) + {} S(2,2;3,{m})", qs(1, 2 * m), qs(1, m), qs(1, 2 * m)),
        );
    }
    out.push(Section { label: "omega-left-disjoint", rank: 3, cutoff: Cutoff { max_weight: 6, slack: 1 }, script: s });

    let mut s = String::new();
    writeln!(s, "assert_rank [S(1,1;2,1), S(1,1;2,2), S(1,1;2,3), S(1,1;2,4), S(1,1;2,5)] = 5").expect("write");
    eq_line(&mut s, "S(1,1;2,6)", "-3/16 S(1,1;2,2) - 11/8 S(1,1;2,3) - 51/16 S(1,1;2,4) - 3 S(1,1;2,5)");
    out.push(Section { label: "s-dimension", rank: 2, cutoff: Cutoff { max_weight: 8, slack: 2 }, script: s });
    out
}

fn custom_entry(label: &str, rank: usize, text: String, status: Status, t: Instant) -> Entry {
    Entry { label: label.into(), rank, line: 0, text, status, millis: t.elapsed().as_millis() as u64 }
}

/// The `S_ab(1,6)` coefficient of `S_ab(1,1) o h_a(-1)^4 1` modulo the
/// relations generated from `omega_a`.
pub fn s_circle_check() -> Entry {
    let t = Instant::now();
    let text = "coefficient of S(1,1;2,6) in circ(S(1,1;2,1), h1(-1)h1(-1)h1(-1)h1(-1)) = -64".to_string();
    let status = match s_circle_coordinates(Rank::new(2).expect("rank"), 1, 2) {
        Ok(Some(c)) => {
            let y6 = c.last().cloned().expect("coordinates");
            if y6 == q(-64) {
                Status::Proved
            } else {
                Status::Disproved {
                    witness: Witness { family: None, entry: "coefficient".into(), got: fmt_q(&y6), expected: "-64".into() },
                }
            }
        }
        Ok(None) => Status::Unknown { cutoff: Cutoff { max_weight: 7, slack: 0 } },
        Err(e) => Status::Error { message: e.to_string() },
    };
    custom_entry("s-circle-coefficient", 2, text, status, t)
}

/// Every `S_ab(m,n)` with `m + n <= 7` lies in the span of `S_ab(1,k)`, `k <= 5`, modulo the truncated span.
pub fn s_span_check(session: &mut Session) -> Entry {
    let t = Instant::now();
    let cutoff = session.cutoff_override.unwrap_or(Cutoff { max_weight: 8, slack: 2 });
    let text = "S(1,m;2,n) in span of S(1,1;2,k), k = 1..5, for m + n <= 7".to_string();
    let run = |session: &mut Session| -> Result<Status, Error> {
        let runner = session.runner(2)?;
        let mut basis = Vec::new();
        for k in 1..=5 {
            match runner.normal_form(&s_elem(1, 1, 2, k), cutoff)? {
                Some(v) => basis.push(v),
                None => return Ok(Status::Unknown { cutoff }),
            }
        }
        for total in 2..=7u32 {
            for m in 1..total {
                let n = total - m;
                let Some(nf) = runner.normal_form(&s_elem(1, m, 2, n), cutoff)? else {
                    return Ok(Status::Unknown { cutoff });
                };
                if coordinates_modulo(&[], &basis, &nf).is_none() {
                    return Ok(Status::Unknown { cutoff });
                }
            }
        }
        Ok(Status::Proved)
    };
    let status = run(session).unwrap_or_else(|e| Status::Error { message: e.to_string() });
    custom_entry("s-span", 2, text, status, t)
}

/// `E_aa` written as a product with a fixed partner index.
fn diag(kind: &str, a: usize) -> String {
    let b = if a == 1 { 2 } else { 1 };
    format!("({kind}({a},{b})*{kind}({b},{a}))")
}

fn unit(kind: &str, a: usize, b: usize) -> String {
    if a == b {
        diag(kind, a)
    } else {
        format!("{kind}({a},{b})")
    }
}

fn matrix_sections(ell: usize) -> Vec<Section> {
    let ev = ell.max(2);
    let mut out = Vec::new();

    let mut s = String::new();
    eq_line(&mut s, "Eu(2,1)", "Eubar(2,1)");
    eq_line(&mut s, "Et(2,1)", "Etbar(2,1)");
    eq_line(&mut s, "Lam(1,2)", "Lam(2,1)");
    out.push(Section { label: "barred-forms", rank: 2, cutoff: Cutoff { max_weight: 6, slack: 2 }, script: s });

    // omega_a against E_bc
    let delta = |x: usize, y: usize| x == y;
    let omega_lines = |ell: usize, certify: bool| {
        let mut s = String::new();
        for a in 1..=ell {
            for (b, c) in pairs(ell) {
                let eu = format!("Eu({b},{c})");
                let et = format!("Et({b},{c})");
                let left_u = if delta(a, b) { eu.clone() } else { "0".into() };
                let right_u = if delta(a, c) { eu.clone() } else { "0".into() };
                let left_t = if delta(a, b) { format!("9/16 {et}") } else { format!("1/16 {et}") };
                let right_t = if delta(a, c) { format!("9/16 {et}") } else { format!("1/16 {et}") };
                let rows = [
                    (format!("w{a} * {eu}"), left_u),
                    (format!("{eu} * w{a}"), right_u),
                    (format!("w{a} * {et}"), left_t),
                    (format!("{et} * w{a}"), right_t),
                ];
                for (l, r) in rows {
                    if certify {
                        eq_line(&mut s, &l, &r);
                    } else {
                        zero_line(&mut s, &l, &r);
                    }
                }
            }
        }
        s
    };
    out.push(Section { label: "omega-on-units", rank: ev, cutoff: EVAL_ONLY, script: omega_lines(ev, false) });
    out.push(Section {
        label: "omega-on-units-certified",
        rank: 2,
        cutoff: Cutoff { max_weight: 8, slack: 2 },
        script: omega_lines(2, true),
    });

    // J_a against E_bc for distinct a, b, c
    let mut s = String::new();
    for (a, b, c) in triples(ell.max(3)) {
        zero_line(&mut s, &format!("J{a} * Eu({b},{c})"), "0");
        zero_line(&mut s, &format!("Eu({b},{c}) * J{a}"), "0");
        zero_line(&mut s, &format!("J{a} * Et({b},{c})"), &format!("3/128 Et({b},{c})"));
        zero_line(&mut s, &format!("Et({b},{c}) * J{a}"), &format!("3/128 Et({b},{c})"));
    }
    out.push(Section { label: "j-on-units", rank: ell.max(3), cutoff: EVAL_ONLY, script: s });

    // the full multiplication table of both matrix copies
    let mut s = String::new();
    let idx: Vec<(usize, usize)> = (1..=ev).flat_map(|a| (1..=ev).map(move |b| (a, b))).collect();
    for &(a, b) in &idx {
        for &(c, d) in &idx {
            for (k1, k2) in [("Eu", "Eu"), ("Et", "Et"), ("Eu", "Et"), ("Et", "Eu")] {
                let lhs = format!("{} * {}", unit(k1, a, b), unit(k2, c, d));
                let rhs = if k1 == k2 && b == c { unit(k1, a, d) } else { "0".into() };
                zero_line(&mut s, &lhs, &rhs);
            }
        }
    }
    for (a, b) in pairs(ev) {
        for &(c, d) in &idx {
            for k in ["Eu", "Et"] {
                zero_line(&mut s, &format!("Lam({a},{b}) * {}", unit(k, c, d)), "0");
                zero_line(&mut s, &format!("{} * Lam({a},{b})", unit(k, c, d)), "0");
            }
        }
    }
    for (a, b, c) in triples(ev) {
        for k in ["Eu", "Et"] {
            zero_line(&mut s, &format!("{k}({a},{b}) * {k}({b},{a})"), &format!("{k}({a},{c}) * {k}({c},{a})"));
        }
    }
    out.push(Section { label: "unit-products", rank: ev, cutoff: EVAL_ONLY, script: s });

    let mut s = String::new();
    eq_line(&mut s, "Eu(1,2) * Eu(1,2)", "0");
    eq_line(&mut s, "Et(1,2) * Et(1,2)", "0");
    eq_line(&mut s, "Eu(1,2) * Et(1,2)", "0");
    eq_line(&mut s, "Et(1,2) * Eu(1,2)", "0");
    eq_line(&mut s, "Lam(1,2) * Eu(1,2)", "0");
    eq_line(&mut s, "Et(1,2) * Lam(1,2)", "0");
    out.push(Section { label: "unit-products-certified", rank: 2, cutoff: Cutoff { max_weight: 12, slack: 0 }, script: s });
    out
}

fn final_sections(ell: usize) -> Vec<Section> {
    let ev = ell.max(2);
    let mut out = Vec::new();
    let mut s = String::new();
    for a in 1..=ev {
        zero_line(&mut s, &format!("(70 H{a} + 1188 w{a}^2 - 585 w{a} + 27) * H{a}"), "0");
        zero_line(&mut s, &format!("(w{a} - 1) * (w{a} - 1/16) * (w{a} - 9/16) * H{a}"), "0");
    }
    for (a, b) in pairs(ev) {
        let (eua, eub) = (unit("Eu", a, a), unit("Eu", b, b));
        let (eta, etb) = (unit("Et", a, a), unit("Et", b, b));
        zero_line(
            &mut s,
            &format!("-2/9 H{a} + 2/9 H{b}"),
            &format!("2 {eua} - 2 {eub} + 1/4 {eta} - 1/4 {etb}"),
        );
        zero_line(
            &mut s,
            &format!("-4/135 (2 w{a} + 13) * H{a} + 4/135 (2 w{b} + 13) * H{b}"),
            &format!("4 {eua} - 4 {eub} + 15/32 {eta} - 15/32 {etb}"),
        );
        zero_line(
            &mut s,
            &format!("w{b} * H{a}"),
            &format!("-2/15 (w{a} - 1) * H{a} + 1/15 (w{b} - 1) * H{b}"),
        );
        zero_line(
            &mut s,
            &format!("Lam({a},{b})^2"),
            &format!("4 w{a} * w{b} - 1/9 (H{a} + H{b}) - ({eua} + {eub}) - 1/4 ({eta} + {etb})"),
        );
    }
    out.push(Section { label: "final-relations", rank: ev, cutoff: EVAL_ONLY, script: s });

    let mut s = String::new();
    for (a, b, c) in triples(ell.max(3)) {
        zero_line(&mut s, &format!("Lam({a},{b}) * Lam({b},{c})"), &format!("2 w{b} * Lam({a},{c})"));
    }
    out.push(Section { label: "lambda-chain", rank: ell.max(3), cutoff: EVAL_ONLY, script: s });

    let mut s = String::new();
    eq_line(&mut s, "(70 H1 + 1188 w1^2 - 585 w1 + 27) * H1", "0");
    eq_line(&mut s, "(w1 - 1) * (w1 - 1/16) * (w1 - 9/16) * H1", "0");
    out.push(Section { label: "final-relations-certified", rank: 1, cutoff: Cutoff { max_weight: 10, slack: 2 }, script: s });
    out
}

fn run_sections(session: &mut Session, sections: &[Section], report: &mut Report) -> Result<(), Error> {
    for s in sections {
        report.extend(session.run_section(s)?);
    }
    Ok(())
}

/// Every built-in section as `(label, rank, script)`, with evaluation sections at rank `ell`.
pub fn section_scripts(ell: usize) -> Vec<(&'static str, usize, String)> {
    let mut all = tables(ell);
    all.extend(circle_sections());
    all.extend(matrix_sections(ell));
    all.extend(final_sections(ell));
    all.into_iter().map(|s| (s.label, s.rank, s.script)).collect()
}

/// Runs a built-in suite. `cutoff` overrides the shipped cutoffs of reduction sections.
pub fn builtin_suite(name: &str, rank: Rank, cutoff: Option<Cutoff>) -> Result<Report, Error> {
    let mut session = Session::new(cutoff);
    let start = Instant::now();
    let ell = rank.ell();
    let mut report = Report::new(ell);
    match name {
        "tables" => run_sections(&mut session, &tables(ell), &mut report)?,
        "circle_reductions" => circle_reductions(&mut session, &mut report)?,
        "matrix_units" => run_sections(&mut session, &matrix_sections(ell), &mut report)?,
        "final_relations" => run_sections(&mut session, &final_sections(ell), &mut report)?,
        "all" => {
            run_sections(&mut session, &tables(ell), &mut report)?;
            circle_reductions(&mut session, &mut report)?;
            run_sections(&mut session, &matrix_sections(ell), &mut report)?;
            run_sections(&mut session, &final_sections(ell), &mut report)?;
        }
        _ => {
            return Err(Error::Invalid(format!("unknown suite `{name}`; expected one of {}", SUITE_NAMES.join(", "))));
        }
    }
    report.millis = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn circle_reductions(session: &mut Session, report: &mut Report) -> Result<(), Error> {
    run_sections(session, &circle_sections(), report)?;
    report.push(s_circle_check());
    report.push(s_span_check(session));
    Ok(())
}
