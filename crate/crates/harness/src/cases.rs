//! The fifteen benchmark graph structures.
//!
//! Nodes are 0-based here; files write them 1-indexed. Random rows draw from
//! [`SplitMix64`] seeded with [`CaseSpec::seed`]: for each arc, the borrower
//! `u` uniformly from `0..n`, then an offset `k` from `0..n-1` giving the
//! lender `(u + 1 + k) % n` (never `u`), then the weight.

use debtclear::{Borrowing, Money, NodeId};

use crate::format::StaticInstance;
use crate::rng::SplitMix64;

pub const TEST_COUNT: u8 = 15;

struct Row {
    n: usize,
    m: usize,
    reference_amin: usize,
    deterministic: bool,
    description: &'static str,
}

const ROWS: [Row; 15] = [
    Row { n: 20, m: 19, reference_amin: 1, deterministic: true, description: "path with equal weights" },
    Row { n: 20, m: 20, reference_amin: 0, deterministic: true, description: "cycle with equal weights" },
    Row {
        n: 8,
        m: 7,
        reference_amin: 7,
        deterministic: true,
        description: "star whose minimal plan is the graph itself",
    },
    Row { n: 20, m: 19, reference_amin: 19, deterministic: true, description: "two connected stars" },
    Row {
        n: 20,
        m: 15,
        reference_amin: 15,
        deterministic: true,
        description: "balances 2 x10, -1 x9, -11: many zero triples",
    },
    Row {
        n: 20,
        m: 10,
        reference_amin: 10,
        deterministic: true,
        description: "balances 99 x10, -99 x10: many zero pairs",
    },
    Row { n: 20, m: 19, reference_amin: 12, deterministic: false, description: "path with weights 50 +- 10" },
    Row { n: 20, m: 20, reference_amin: 10, deterministic: false, description: "cycle with weights 50 +- 10" },
    Row { n: 10, m: 100, reference_amin: 7, deterministic: false, description: "random graph, weights <= 10" },
    Row { n: 12, m: 100, reference_amin: 9, deterministic: false, description: "random graph, weights <= 10" },
    Row { n: 15, m: 100, reference_amin: 11, deterministic: false, description: "random graph, weights <= 10" },
    Row { n: 20, m: 100, reference_amin: 14, deterministic: false, description: "random graph, weights <= 10" },
    Row { n: 20, m: 19, reference_amin: 15, deterministic: true, description: "path with consecutive weights" },
    Row { n: 20, m: 30, reference_amin: 15, deterministic: true, description: "pairs, a path, a star and triples" },
    Row { n: 20, m: 100, reference_amin: 15, deterministic: false, description: "dense random graph, weights <= 3" },
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CaseError {
    #[error("unknown test id {0} (expected 1..=15)")]
    UnknownTest(u8),
    #[error("test {test_id} has n = {n}, m = {m}; the case spec says n = {spec_n}, m = {spec_m}")]
    ShapeMismatch { test_id: u8, n: usize, m: usize, spec_n: usize, spec_m: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseSpec {
    pub test_id: u8,
    pub n: usize,
    pub m: usize,
    /// Only random rows (7-12, 15) use it.
    pub seed: u64,
    /// Known optimum; `None` for random rows, where it depends on the draw.
    pub expected_amin: Option<usize>,
}

fn row(test_id: u8) -> Result<&'static Row, CaseError> {
    if (1..=TEST_COUNT).contains(&test_id) {
        Ok(&ROWS[test_id as usize - 1])
    } else {
        Err(CaseError::UnknownTest(test_id))
    }
}

impl CaseSpec {
    /// Row `test_id` with its default seed (the test id itself).
    pub fn standard(test_id: u8) -> Result<Self, CaseError> {
        Self::with_seed(test_id, test_id as u64)
    }

    pub fn with_seed(test_id: u8, seed: u64) -> Result<Self, CaseError> {
        let r = row(test_id)?;
        Ok(Self { test_id, n: r.n, m: r.m, seed, expected_amin: r.deterministic.then_some(r.reference_amin) })
    }

    pub fn all() -> Vec<Self> {
        (1..=TEST_COUNT).map(|id| Self::standard(id).expect("ids 1..=15 exist")).collect()
    }

    pub fn description(&self) -> &'static str {
        row(self.test_id).map_or("", |r| r.description)
    }

    /// Optimum recorded for the reference data set.
    pub fn reference_amin(&self) -> Option<usize> {
        row(self.test_id).ok().map(|r| r.reference_amin)
    }
}

fn arc(u: usize, v: usize, x: Money) -> Borrowing {
    Borrowing::new(NodeId(u as u32), NodeId(v as u32), x).expect("generated arcs are valid")
}

fn random_graph(rng: &mut SplitMix64, n: usize, m: usize, max_weight: u64) -> Vec<Borrowing> {
    (0..m)
        .map(|_| {
            let u = rng.in_range(0, n as u64 - 1) as usize;
            let v = (u + 1 + rng.in_range(0, n as u64 - 2) as usize) % n;
            arc(u, v, rng.in_range(1, max_weight) as Money)
        })
        .collect()
}

pub fn generate_case(spec: &CaseSpec) -> Result<StaticInstance, CaseError> {
    let r = row(spec.test_id)?;
    if (r.n, r.m) != (spec.n, spec.m) {
        return Err(CaseError::ShapeMismatch { test_id: spec.test_id, n: r.n, m: r.m, spec_n: spec.n, spec_m: spec.m });
    }
    let mut rng = SplitMix64::new(spec.seed);
    let n = r.n;
    let borrowings: Vec<Borrowing> = match spec.test_id {
        1 => (0..n - 1).map(|i| arc(i, i + 1, 10)).collect(),
        2 => (0..n).map(|i| arc(i, (i + 1) % n, 10)).collect(),
        // one payer, seven creditors: no proper subset balances out
        3 => (1..n).map(|i| arc(0, i, 1 << (i - 1))).collect(),
        // centre 0 pays leaves 1..=9 amounts 1..=9, leaves 11..=19 pay
        // centre 10 amounts 46..=54; every leaf subset containing a second-star
        // leaf is positive, so only the whole graph sums to zero
        4 => {
            let mut arcs: Vec<_> = (1..10).map(|i| arc(0, i, i as Money)).collect();
            arcs.push(arc(0, 10, 10));
            arcs.extend((1..10).map(|j| arc(10 + j, 10, 45 + j as Money)));
            arcs
        }
        5 => {
            let mut arcs = Vec::new();
            for j in 0..4 {
                arcs.push(arc(j, 10 + 2 * j, 1));
                arcs.push(arc(j, 11 + 2 * j, 1));
            }
            arcs.push(arc(19, 18, 1));
            arcs.extend((4..10).map(|j| arc(j, 19, 2)));
            arcs
        }
        6 => (0..10).map(|i| arc(i, i + 10, 99)).collect(),
        7 => (0..n - 1).map(|i| arc(i, i + 1, rng.in_range(40, 60) as Money)).collect(),
        8 => (0..n).map(|i| arc(i, (i + 1) % n, rng.in_range(40, 60) as Money)).collect(),
        9..=12 => random_graph(&mut rng, n, r.m, 10),
        // arc i joins nodes i and i + 1 with weight i + 1, directions alternate
        13 => (0..n - 1)
            .map(|i| if i % 2 == 0 { arc(i, i + 1, i as Money + 1) } else { arc(i + 1, i, i as Money + 1) })
            .collect(),
        14 => {
            let mut arcs: Vec<_> = (0..10).map(|i| arc(i, i + 10, 10)).collect();
            arcs.extend((0..5).map(|i| arc(i, i + 1, 1)));
            arcs.extend((11..20).map(|j| arc(10, j, 1)));
            for t in 0..3 {
                arcs.push(arc(19 - t, 9 - t, 1));
                arcs.push(arc(19 - t, 15 - t, 1));
            }
            arcs
        }
        15 => random_graph(&mut rng, n, r.m, 3),
        _ => unreachable!("row() validated the id"),
    };
    debug_assert_eq!(borrowings.len(), r.m);
    Ok(StaticInstance { n, borrowings })
}
