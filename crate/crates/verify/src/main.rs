use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mplus_core::fock::Rank;
use mplus_core::twisted::DeltaTable;
use mplus_verify::parser::{check_rank, parse_script};
use mplus_verify::runner::{run_script, Cutoff, Report, RunConfig};
use mplus_verify::suites::builtin_suite;
use mplus_verify::tables::{emit_tables, Format};

#[derive(Parser)]
#[command(name = "mplus", version, about = "Check relations in the Zhu algebra of the fixed-point Heisenberg VOA")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a relation script.
    Verify {
        script: PathBuf,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
        #[arg(long, default_value_t = 2)]
        slack: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Run a built-in suite: tables, circle_reductions, matrix_units, final_relations or all.
    Suite {
        name: String,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        /// Overrides the shipped cutoff of every reduction section.
        #[arg(long)]
        max_weight: Option<u32>,
        #[arg(long)]
        slack: Option<u32>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Print the three action tables.
    Tables {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
    },
    /// Print the coefficient table of the twisted correction operator.
    DeltaTable {
        #[arg(long, default_value_t = 16)]
        degree: u32,
    },
}

fn print_report(r: &Report, f: ReportFormat) {
    match f {
        ReportFormat::Text => print!("{}", r.to_text()),
        ReportFormat::Json => println!("{}", r.to_json(true)),
    }
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Verify { script, rank, max_weight, slack, format } => {
            let rank = Rank::new(rank).map_err(|e| e.to_string())?;
            let text = std::fs::read_to_string(&script).map_err(|e| format!("{}: {e}", script.display()))?;
            let stmts = parse_script(&text).map_err(|e| format!("{}:{e}", script.display()))?;
            check_rank(&stmts, rank.ell()).map_err(|e| format!("{}:{e}", script.display()))?;
            let report = run_script(&stmts, RunConfig { rank, cutoff: Cutoff { max_weight, slack } });
            print_report(&report, format);
            Ok(report.passed)
        }
        Command::Suite { name, rank, max_weight, slack, format } => {
            let rank = Rank::new(rank).map_err(|e| e.to_string())?;
            let cutoff = match (max_weight, slack) {
                (None, None) => None,
                (w, s) => Some(Cutoff { max_weight: w.unwrap_or(8), slack: s.unwrap_or(2) }),
            };
            let report = builtin_suite(&name, rank, cutoff).map_err(|e| e.to_string())?;
            print_report(&report, format);
            Ok(report.passed)
        }
        Command::Tables { rank, format } => {
            let rank = Rank::new(rank).map_err(|e| e.to_string())?;
            let f = match format {
                TableFormat::Csv => Format::Csv,
                TableFormat::Json => Format::Json,
            };
            print!("{}", emit_tables(rank, f).map_err(|e| e.to_string())?);
            Ok(true)
        }
        Command::DeltaTable { degree } => {
            let t = mplus_core::twisted::delta_coefficients(degree);
            let t: DeltaTable = t;
            print!("{}", t.to_text());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
