use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use debtclear::{oracle_max_zero_partition, solve_static, DebtState};
use debtclear_harness::bench::{run_benchmark, Algorithm, Mode};
use debtclear_harness::cases::{generate_case, CaseSpec, TEST_COUNT};
use debtclear_harness::format::{format_plan, format_static, parse_static};
use debtclear_harness::script::{parse_script, run_script};

#[derive(Parser)]
#[command(name = "debtclear", version, about = "Minimal debt-clearing plans")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a static instance file and print a minimal plan.
    Solve { file: PathBuf },
    /// Execute an operation script.
    Run { script: PathBuf },
    /// Write a benchmark case as a static instance file.
    Gen {
        id: u8,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the algorithms on benchmark cases.
    Bench {
        /// Comma-separated test ids; all fifteen when omitted.
        #[arg(long, value_delimiter = ',')]
        tests: Vec<u8>,
        #[arg(long, default_value = "once")]
        mode: Mode,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "static,dynamic")]
        algorithms: Vec<Algorithm>,
        /// Seed for the random cases; each test's own id when omitted.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve a small instance by exhaustive search.
    Oracle { file: PathBuf },
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Cmd::Solve { file } => {
            let instance = parse_static(&read(&file)?).with_context(|| file.display().to_string())?;
            let plan = solve_static(&instance.borrowings, instance.n)?;
            out.write_all(format_plan(&plan).as_bytes())?;
        }
        Cmd::Run { script } => {
            let parsed = parse_script(&read(&script)?).with_context(|| script.display().to_string())?;
            match run_script(&parsed) {
                Ok(text) => out.write_all(text.as_bytes())?,
                Err(e) => {
                    out.write_all(e.output.as_bytes())?;
                    bail!("{e}");
                }
            }
        }
        Cmd::Gen { id, seed, out: path } => {
            let spec = match seed {
                Some(seed) => CaseSpec::with_seed(id, seed)?,
                None => CaseSpec::standard(id)?,
            };
            let text = format_static(&generate_case(&spec)?);
            match path {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
        }
        Cmd::Bench { tests, mode, reps, csv, algorithms, seed } => {
            if reps == 0 {
                bail!("--reps must be at least 1");
            }
            let ids: Vec<u8> = if tests.is_empty() { (1..=TEST_COUNT).collect() } else { tests };
            let cases = ids
                .iter()
                .map(|&id| match seed {
                    Some(seed) => CaseSpec::with_seed(id, seed),
                    None => CaseSpec::standard(id),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let report = run_benchmark(&cases, &algorithms, mode, reps);
            match csv {
                Some(path) => {
                    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    report.write_csv(file)?;
                }
                None => report.write_csv(&mut out)?,
            }
            for failure in &report.failures {
                eprintln!("test {} ({}): {}", failure.test, failure.algorithm, failure.reason);
            }
            let disagreements = report.disagreements();
            if !disagreements.is_empty() {
                bail!("plan sizes disagree on tests {disagreements:?}");
            }
        }
        Cmd::Oracle { file } => {
            let instance = parse_static(&read(&file)?).with_context(|| file.display().to_string())?;
            let debts = DebtState::from_borrowings(&instance.borrowings)?;
            let result = oracle_max_zero_partition(&debts)?;
            writeln!(out, "active {}", result.nodes.len())?;
            writeln!(out, "parts {}", result.max_parts)?;
            writeln!(out, "transactions {}", result.min_transactions)?;
        }
    }
    Ok(())
}
