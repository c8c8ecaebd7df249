//! The three action tables: golden values, export and re-import.

use mplus_core::eval::{ModuleFamily, TopLevelAction};
use mplus_core::fock::Rank;
use mplus_core::Error;
use serde::{Deserialize, Serialize};

use crate::parser::{parse_expr, parse_value};
use crate::runner::{value_action, Runner};

use ModuleFamily::*;

/// One expected table cell, as script text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenCell {
    pub table: u8,
    pub element: String,
    pub family: ModuleFamily,
    pub expected: String,
}

fn cell(table: u8, element: &str, family: ModuleFamily, expected: &str) -> GoldenCell {
    GoldenCell { table, element: element.into(), family, expected: expected.into() }
}

const TWISTED_S: [(&str, &str); 5] = [
    ("1/2", "1/2"),
    ("-3/4", "-1/4"),
    ("15/16", "3/16"),
    ("-35/32", "-5/32"),
    ("315/256", "35/256"),
];

/// Expected cells for the pair `(a, b) = (1, 2)`; only the third table at rank 1.
pub fn golden(rank: Rank) -> Vec<GoldenCell> {
    let mut out = Vec::new();
    if rank.ell() >= 2 {
        for m in 1..=5u32 {
            let el = format!("S(1,1;2,{m})");
            let hminus = if m == 1 {
                "E(1,2) + E(2,1)".to_string()
            } else {
                let c = if m % 2 == 0 { -(m as i64) } else { m as i64 };
                format!("{c}*E(1,2)")
            };
            let sign = if m % 2 == 0 { "-" } else { "" };
            let (x, y) = TWISTED_S[m as usize - 1];
            let tminus = format!("{x}*E(1,2) {} {}*E(2,1)", if y.starts_with('-') { "-" } else { "+" }, y.trim_start_matches('-'));
            out.push(cell(1, &el, Hminus, &hminus));
            out.push(cell(1, &el, Mlambda, &format!("{sign}l1*l2")));
            out.push(cell(1, &el, Tminus, &tminus));
        }
        let t2 = [
            ("Eu(1,2)", "E(1,2)", "0", "0"),
            ("Eubar(2,1)", "E(2,1)", "0", "0"),
            ("Et(1,2)", "0", "0", "E(1,2)"),
            ("Etbar(2,1)", "0", "0", "E(2,1)"),
            ("Lam(1,2)", "0", "l1*l2", "0"),
        ];
        for (el, hm, ml, tm) in t2 {
            out.push(cell(2, el, Hminus, hm));
            out.push(cell(2, el, Mlambda, ml));
            out.push(cell(2, el, Tminus, tm));
        }
    }
    let t3 = [
        ("w1", ["0", "E(1,1)", "1/2*l1^2", "1/16", "1/16*I + 1/2*E(1,1)"]),
        ("J1", ["0", "-6*E(1,1)", "l1^4 - 1/2*l1^2", "3/128", "3/128*I - 3/8*E(1,1)"]),
    ];
    for (el, vals) in t3 {
        for (fam, v) in [Hplus, Hminus, Mlambda, Tplus, Tminus].into_iter().zip(vals) {
            out.push(cell(3, el, fam, v));
        }
    }
    out
}

/// `assert_eval` lines for the golden cells.
pub fn golden_script(rank: Rank) -> String {
    golden(rank)
        .iter()
        .map(|c| format!("assert_eval {} on {} = {}\n", c.element, c.family, c.expected))
        .collect()
}

/// A computed table cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub table: u8,
    pub element: String,
    pub family: ModuleFamily,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown table format `{s}` (csv or json)")),
        }
    }
}

/// Computes every cell listed by [`golden`].
pub fn compute(rank: Rank) -> Result<Vec<TableRow>, Error> {
    let runner = Runner::new(rank);
    golden(rank)
        .into_iter()
        .map(|c| {
            let e = parse_expr(&c.element).map_err(|e| Error::Parse(e.to_string()))?;
            let v = runner.eval_expr(&e, c.family)?;
            Ok(TableRow { table: c.table, element: c.element, family: c.family, value: v.to_string() })
        })
        .collect()
}

pub fn emit_tables(rank: Rank, format: Format) -> Result<String, Error> {
    let rows = compute(rank)?;
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| Error::Invalid(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| Error::Invalid(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
        }
    }
}

/// Reads exported tables back into actions.
pub fn parse_tables(text: &str, format: Format, rank: Rank) -> Result<Vec<(TableRow, TopLevelAction)>, Error> {
    let rows: Vec<TableRow> = match format {
        Format::Json => serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?,
        Format::Csv => csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(|e| Error::Parse(e.to_string()))?,
    };
    rows.into_iter()
        .map(|r| {
            let v = parse_value(&r.value).map_err(|e| Error::Parse(e.to_string()))?;
            let a = value_action(&v, r.family, rank)?;
            Ok((r, a))
        })
        .collect()
}
