//! Timing runs over generated cases.

use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use debtclear::{solve_static_with, Ledger, NodeId, SolveStats, DEFAULT_CAPACITY};
use serde::Serialize;

use crate::cases::{generate_case, CaseSpec};
use crate::format::StaticInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    /// Rebuild from the borrowing list on every solve.
    Static,
    /// Feed arcs into a [`Ledger`] and query it.
    Dynamic,
}

/// When solves happen during a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Once, after all arcs.
    Once,
    /// After every arc; the static algorithm re-solves each prefix.
    PerArc,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Static, Algorithm::Dynamic];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Static => "static",
            Algorithm::Dynamic => "dynamic",
        }
    }
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Once => "once",
            Mode::PerArc => "per-arc",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static" => Ok(Algorithm::Static),
            "dynamic" | "dynamic-incremental" => Ok(Algorithm::Dynamic),
            _ => Err(format!("unknown algorithm {s:?} (expected static or dynamic)")),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "once" => Ok(Mode::Once),
            "per-arc" => Ok(Mode::PerArc),
            _ => Err(format!("unknown mode {s:?} (expected once or per-arc)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub test: u8,
    pub algorithm: &'static str,
    pub mode: &'static str,
    pub reps: usize,
    /// Mean wall time of one repetition.
    pub avg_seconds: f64,
    /// Size of the final plan.
    pub plan_size: usize,
    /// Means over every solve of one repetition.
    pub avg_vstar: f64,
    pub avg_s0: f64,
    pub avg_s0_reduced: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseFailure {
    pub test: u8,
    pub algorithm: Algorithm,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub failures: Vec<CaseFailure>,
}

impl BenchReport {
    /// Tests whose algorithms disagree on the plan size.
    pub fn disagreements(&self) -> Vec<u8> {
        let mut out: Vec<u8> = Vec::new();
        for row in &self.rows {
            let differs = self.rows.iter().any(|other| other.test == row.test && other.plan_size != row.plan_size);
            if differs && !out.contains(&row.test) {
                out.push(row.test);
            }
        }
        out
    }

    pub fn row(&self, test: u8, algorithm: Algorithm) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.test == test && r.algorithm == algorithm.as_str())
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(writer);
        if self.rows.is_empty() {
            out.write_record([
                "test",
                "algorithm",
                "mode",
                "reps",
                "avg_seconds",
                "plan_size",
                "avg_vstar",
                "avg_s0",
                "avg_s0_reduced",
            ])?;
        }
        for row in &self.rows {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    solves: usize,
    vstar: usize,
    s0: usize,
    s0_reduced: usize,
}

impl Tally {
    fn add(&mut self, stats: &SolveStats) {
        self.solves += 1;
        self.vstar += stats.active;
        self.s0 += stats.zero_sets;
        self.s0_reduced += stats.reduced_zero_sets;
    }

    fn mean(total: usize, count: usize) -> f64 {
        if count == 0 {
            0.0
        } else {
            total as f64 / count as f64
        }
    }
}

fn run_once(
    instance: &StaticInstance,
    algorithm: Algorithm,
    mode: Mode,
    tally: &mut Tally,
) -> debtclear::Result<usize> {
    let arcs = &instance.borrowings;
    match (algorithm, mode) {
        (Algorithm::Static, Mode::Once) => {
            let solution = solve_static_with(arcs, instance.n, DEFAULT_CAPACITY)?;
            tally.add(&solution.stats);
            Ok(solution.plan.len())
        }
        (Algorithm::Static, Mode::PerArc) => {
            let mut size = 0;
            for k in 1..=arcs.len() {
                let solution = solve_static_with(&arcs[..k], instance.n, DEFAULT_CAPACITY)?;
                tally.add(&solution.stats);
                size = solution.plan.len();
            }
            Ok(size)
        }
        (Algorithm::Dynamic, _) => {
            let mut ledger = Ledger::new();
            let ids: Vec<NodeId> = (0..instance.n).map(|_| ledger.insert_node()).collect();
            let mut size = 0;
            for b in arcs {
                ledger.insert_arc(ids[b.borrower.index()], ids[b.lender.index()], b.amount)?;
                if mode == Mode::PerArc {
                    let solution = ledger.query_with_stats();
                    tally.add(&solution.stats);
                    size = solution.plan.len();
                }
            }
            if mode == Mode::Once || arcs.is_empty() {
                let solution = ledger.query_with_stats();
                tally.add(&solution.stats);
                size = solution.plan.len();
            }
            Ok(size)
        }
    }
}

/// Times every algorithm on every case. A case that fails is recorded in
/// [`BenchReport::failures`] and the suite moves on.
pub fn run_benchmark(cases: &[CaseSpec], algorithms: &[Algorithm], mode: Mode, reps: usize) -> BenchReport {
    let reps = reps.max(1);
    let mut report = BenchReport::default();
    for spec in cases {
        let instance = match generate_case(spec) {
            Ok(instance) => instance,
            Err(e) => {
                for &algorithm in algorithms {
                    report.failures.push(CaseFailure { test: spec.test_id, algorithm, reason: e.to_string() });
                }
                continue;
            }
        };
        for &algorithm in algorithms {
            let mut tally = Tally::default();
            let mut elapsed = 0.0;
            let mut outcome = Ok(0);
            for _ in 0..reps {
                let mut rep_tally = Tally::default();
                let start = Instant::now();
                outcome = run_once(&instance, algorithm, mode, &mut rep_tally);
                elapsed += start.elapsed().as_secs_f64();
                if outcome.is_err() {
                    break;
                }
                tally = rep_tally;
            }
            match outcome {
                Ok(plan_size) => report.rows.push(BenchRow {
                    test: spec.test_id,
                    algorithm: algorithm.as_str(),
                    mode: mode.as_str(),
                    reps,
                    avg_seconds: elapsed / reps as f64,
                    plan_size,
                    avg_vstar: Tally::mean(tally.vstar, tally.solves),
                    avg_s0: Tally::mean(tally.s0, tally.solves),
                    avg_s0_reduced: Tally::mean(tally.s0_reduced, tally.solves),
                }),
                Err(e) => report.failures.push(CaseFailure { test: spec.test_id, algorithm, reason: e.to_string() }),
            }
        }
    }
    report
}
