//! Relation scripts over the Zhu algebra of the fixed-point Heisenberg VOA:
//! parsing, checking by evaluation and O-span reduction, built-in suites and
//! table export.

pub mod ast;
pub mod parser;
pub mod runner;
pub mod suites;
pub mod tables;

pub use ast::{Expr, Statement, StatementKind, ValueExpr};
pub use parser::{check_rank, parse_expr, parse_script, parse_value, ParseError};
pub use runner::{run_script, Cutoff, Report, RunConfig, Runner, Status, Witness};
