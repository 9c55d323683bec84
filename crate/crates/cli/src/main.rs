//! `lict`: check license formulas against runs, compute permissions, and
//! decide satisfiability and validity.
//!
//! Exit codes: 0 holds/sat/valid/success, 1 fails/unsat/invalid, 2 usage or
//! parse error, 3 tableau budget exceeded, 4 internal error.

mod repl;
mod report;

use std::fs;
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lict_core::logic::{encode_run, eval, first_failure};
use lict_core::ltl::{
    implicit_restrictions, lic_sat, lic_valid, translate, SatError, SatResult, Validity,
    DEFAULT_BUDGET,
};
use lict_core::{
    build_nfa, compile_dr, compute_permissions, parse_dr, parse_formula, parse_run, Formula, Run,
};

use report::{Format, Report};

#[derive(Parser)]
#[command(name = "lict", version, about = "License logic checker")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a formula on a run, at every time or at one time.
    CheckSpec {
        run: PathBuf,
        formula: PathBuf,
        /// Evaluate only at this time.
        #[arg(long)]
        at: Option<usize>,
    },
    /// Print the permitted and obligated actions of every name.
    Permissions {
        run: PathBuf,
        /// Last time to print (default: two steps past the run horizon).
        #[arg(long)]
        horizon: Option<usize>,
        /// Print the automaton of each issued license in Graphviz format instead.
        #[arg(long)]
        dot: bool,
    },
    /// Decide whether some run satisfies the formula at time 0.
    Sat {
        formula: PathBuf,
        /// Maximum number of tableau expansions.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Decide whether the formula holds at time 0 of every run.
    Valid {
        formula: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Compile a rights expression into a regular license.
    CompileDr {
        dr: PathBuf,
        /// Largest licensed time span accepted.
        #[arg(long, default_value_t = 64)]
        cap: usize,
    },
    /// Print the formula describing a finite run.
    EncodeRun { run: PathBuf },
    /// Print the LTL translation of a formula.
    TranslateLtl {
        formula: PathBuf,
        /// Also print the implicit restrictions.
        #[arg(long)]
        implicit: bool,
    },
    /// Step through a run interactively, reading commands from stdin.
    Step { run: PathBuf },
}

fn read(path: &Path) -> Result<String, Report> {
    fs::read_to_string(path)
        .map_err(|e| Report::usage(format!("cannot read {}: {e}", path.display())))
}

fn load_run(path: &Path) -> Result<Run, Report> {
    parse_run(&read(path)?).map_err(|e| Report::usage(format!("{}: {e}", path.display())))
}

fn load_formula(path: &Path) -> Result<Formula, Report> {
    parse_formula(&read(path)?).map_err(|e| Report::usage(format!("{}: {e}", path.display())))
}

fn sat_error(e: SatError) -> Report {
    match e {
        SatError::BudgetExceeded { .. } => Report::new("budget-exceeded", 3).detail(e.to_string()),
        SatError::WitnessRejected(_) => Report::new("internal-error", 4).detail(e.to_string()),
    }
}

fn dispatch(command: Command) -> Result<Report, Report> {
    match command {
        Command::CheckSpec { run, formula, at } => {
            let (r, f) = (load_run(&run)?, load_formula(&formula)?);
            let perms = compute_permissions(&r);
            Ok(match at {
                Some(t) if eval(&r, &perms, t, &f) => {
                    Report::new("holds", 0).detail(format!("holds at time {t}"))
                }
                Some(t) => Report::new("fails", 1).detail(format!("fails at time {t}")),
                None => match first_failure(&r, &perms, &f) {
                    None => Report::new("holds", 0).detail("holds at every time"),
                    Some(t) => Report::new("fails", 1).detail(format!("first fails at time {t}")),
                },
            })
        }
        Command::Permissions { run, horizon, dot } => {
            let r = load_run(&run)?;
            if dot {
                let graphs: Vec<String> = r
                    .issuances()
                    .map(|(n, _, l)| build_nfa(l).with_bot_padding().to_dot(n.as_str()))
                    .collect();
                return Ok(Report::new("ok", 0).detail(graphs.concat()));
            }
            let perms = compute_permissions(&r);
            let upto = horizon.unwrap_or(r.horizon() + 2);
            Ok(Report::new("ok", 0).detail(
                perms
                    .dump(&r.mentioned_names(), upto)
                    .trim_end()
                    .to_string(),
            ))
        }
        Command::Sat { formula, budget } => {
            let f = load_formula(&formula)?;
            Ok(match lic_sat(&f, budget).map_err(sat_error)? {
                SatResult::Sat(r) => Report::new("sat", 0).detail("witness run:").run(r),
                SatResult::Unsat => {
                    Report::new("unsat", 1).detail("no run satisfies the formula at time 0")
                }
            })
        }
        Command::Valid { formula, budget } => {
            let f = load_formula(&formula)?;
            Ok(match lic_valid(&f, budget).map_err(sat_error)? {
                Validity::Valid => {
                    Report::new("valid", 0).detail("the formula holds at time 0 of every run")
                }
                Validity::Invalid(r) => Report::new("invalid", 1)
                    .detail("counterexample run:")
                    .run(r),
            })
        }
        Command::CompileDr { dr, cap } => {
            let text = read(&dr)?;
            let e = parse_dr(&text).map_err(|e| Report::usage(format!("{}: {e}", dr.display())))?;
            let l = compile_dr(&e, cap).map_err(|e| Report::usage(e.to_string()))?;
            Ok(Report::new("ok", 0).detail(l.to_string()))
        }
        Command::EncodeRun { run } => {
            let r = load_run(&run)?;
            let psi = encode_run(&r).map_err(|e| Report::usage(e.to_string()))?;
            Ok(Report::new("ok", 0).detail(psi.to_string()))
        }
        Command::TranslateLtl { formula, implicit } => {
            let f = load_formula(&formula)?;
            let mut out = translate(&f).to_string();
            if implicit {
                out = format!("{out}\n{}", implicit_restrictions(&f));
            }
            Ok(Report::new("ok", 0).detail(out))
        }
        Command::Step { run } => {
            let r = load_run(&run)?;
            let stdin = io::stdin();
            let mut out = BufWriter::new(io::stdout());
            repl::run_repl(r, stdin.lock(), &mut out).map_err(|e| Report::usage(e.to_string()))?;
            Ok(Report::new("ok", 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let name = match &cli.command {
        Command::CheckSpec { .. } => "check-spec",
        Command::Permissions { .. } => "permissions",
        Command::Sat { .. } => "sat",
        Command::Valid { .. } => "valid",
        Command::CompileDr { .. } => "compile-dr",
        Command::EncodeRun { .. } => "encode-run",
        Command::TranslateLtl { .. } => "translate-ltl",
        Command::Step { .. } => "step",
    };
    let interactive = matches!(cli.command, Command::Step { .. });
    let report = dispatch(cli.command).unwrap_or_else(|e| e);
    if !(interactive && report.code == 0) {
        report.print(name, format);
    }
    ExitCode::from(report.code)
}
