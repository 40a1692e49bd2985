//! The dynamic borrowing graph: node and arc updates, removal with
//! settlement, and minimal-plan queries.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use crate::engine::{SubsetEngine, DEFAULT_CAPACITY};
use crate::error::{Error, Result};
use crate::heuristics::{clear_non_atomic, reduce, ClearNonAtomic, ClearPairs};
use crate::model::{Borrowing, DebtState, Money, NodeId, Transaction, TransactionPlan};
use crate::solver::{max_partition, min_removal_set, settle_part};

/// Sizes seen while answering one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// |V*|.
    pub active: usize,
    /// Zero-sum subsets of V* before any reduction.
    pub zero_sets: usize,
    /// Zero-sum subsets left after clearing pairs and non-atomic sets.
    pub reduced_zero_sets: usize,
    /// Blocks in the partition, committed pairs included.
    pub parts: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Solution {
    pub plan: TransactionPlan,
    pub stats: SolveStats,
}

/// Minimal plan for the current contents of `engine`.
pub fn solve_engine(engine: &SubsetEngine) -> Result<Solution> {
    let s0 = engine.zero_sets();
    let zero_sets = s0.len();
    let reduction = reduce(engine.live_mask(), s0, &[&ClearPairs, &ClearNonAtomic]);
    let reduced_zero_sets = reduction.sets.len();
    let partition = max_partition(reduction.live, &reduction.sets)?;

    let mut transactions = Vec::with_capacity(engine.active_count());
    let parts: Vec<_> = reduction.fixed_parts.iter().chain(&partition.parts).copied().collect();
    for &part in &parts {
        transactions.extend(settle_part(&engine.members(part))?);
    }
    let plan = TransactionPlan::from_transactions(transactions)?;
    debug_assert_eq!(plan.len(), engine.active_count() - parts.len());
    Ok(Solution {
        plan,
        stats: SolveStats { active: engine.active_count(), zero_sets, reduced_zero_sets, parts: parts.len() },
    })
}

/// Solves a whole borrowing list at once: net balances in one pass, the sums
/// table by batch recurrence, then the same reduction and partition as
/// [`Ledger::query`].
pub fn solve_static(borrowings: &[Borrowing], node_count: usize) -> Result<TransactionPlan> {
    solve_static_with(borrowings, node_count, DEFAULT_CAPACITY).map(|s| s.plan)
}

pub fn solve_static_with(borrowings: &[Borrowing], node_count: usize, capacity: usize) -> Result<Solution> {
    for b in borrowings {
        Borrowing::new(b.borrower, b.lender, b.amount)?;
        for node in [b.borrower, b.lender] {
            if node.index() >= node_count {
                return Err(Error::UnknownNode(node));
            }
        }
    }
    let debts = DebtState::from_borrowings(borrowings)?;
    let engine = SubsetEngine::from_debts(&debts, capacity)?;
    solve_engine(&engine)
}

#[derive(Clone, Debug, Default)]
pub struct Ledger {
    engine: SubsetEngine,
    live_nodes: BTreeSet<NodeId>,
    next_id: u32,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    /// A ledger whose active node set may hold at most `capacity` nodes.
    pub fn with_capacity(capacity: usize) -> Result<Self> {
        Ok(Self { engine: SubsetEngine::new(capacity)?, ..Self::default() })
    }

    pub fn engine(&self) -> &SubsetEngine {
        &self.engine
    }

    pub fn is_live(&self, node: NodeId) -> bool {
        self.live_nodes.contains(&node)
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.live_nodes.iter().copied()
    }

    pub fn debt(&self, node: NodeId) -> Money {
        self.engine.debt(node)
    }

    pub fn debts(&self) -> DebtState {
        self.engine.debts()
    }

    fn check_live(&self, node: NodeId) -> Result<()> {
        if self.is_live(node) {
            Ok(())
        } else {
            Err(Error::UnknownNode(node))
        }
    }

    /// New nodes start without debts, so the engine is not touched. Ids are
    /// never reused.
    pub fn insert_node(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        self.live_nodes.insert(id);
        id
    }

    /// `u` now owes `x` more to `v`.
    pub fn insert_arc(&mut self, u: NodeId, v: NodeId, x: Money) -> Result<()> {
        self.check_live(u)?;
        self.check_live(v)?;
        self.engine.apply_arc_delta(u, v, x)
    }

    /// Clears as much as possible between `u` and `v` by a payment in the
    /// direction that brings both balances toward zero. Nothing happens when
    /// the balances do not have strictly opposite signs.
    pub fn remove_arc(&mut self, u: NodeId, v: NodeId) -> Result<()> {
        self.check_live(u)?;
        self.check_live(v)?;
        if u == v {
            return Err(Error::Loop(u));
        }
        let (du, dv) = (self.debt(u), self.debt(v));
        if du < 0 && dv > 0 {
            self.engine.apply_arc_delta(u, v, (-du).min(dv))
        } else if du > 0 && dv < 0 {
            self.engine.apply_arc_delta(v, u, du.min(-dv))
        } else {
            Ok(())
        }
    }

    /// Removes `u` after settling its debts inside the smallest block that
    /// some optimal partition uses, and returns those payments.
    ///
    /// The other members of the block stay in the graph with zero balance.
    pub fn remove_node(&mut self, u: NodeId) -> Result<Vec<Transaction>> {
        self.check_live(u)?;
        let Some(slot) = self.engine.slots().slot_of(u) else {
            self.live_nodes.remove(&u);
            return Ok(Vec::new());
        };
        let s0 = clear_non_atomic(&self.engine.zero_sets());
        let block = min_removal_set(self.engine.live_mask(), &s0, slot)?;
        let payments = settle_part(&self.engine.members(block))?;
        self.engine.clear_zero_set(block)?;
        self.live_nodes.remove(&u);
        Ok(payments)
    }

    /// A minimal transaction plan for the current balances. Does not change
    /// the ledger.
    pub fn query(&self) -> TransactionPlan {
        self.query_with_stats().plan
    }

    pub fn query_with_stats(&self) -> Solution {
        solve_engine(&self.engine).expect("engine invariants hold between operations")
    }

    /// Hash of balances, active set, live sums entries and live node ids.
    pub fn digest(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.engine.digest().hash(&mut h);
        self.live_nodes.hash(&mut h);
        self.next_id.hash(&mut h);
        h.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE_ONE: [(u32, u32, Money); 5] = [(1, 2, 10), (2, 3, 5), (3, 1, 5), (1, 4, 5), (4, 5, 10)];

    /// Ledger holding nodes 0..=5, node 0 unused.
    fn six_nodes() -> Ledger {
        let mut ledger = Ledger::new();
        for _ in 0..6 {
            ledger.insert_node();
        }
        ledger
    }

    fn n(i: u32) -> NodeId {
        NodeId(i)
    }

    fn with_debts(debts: &[(u32, Money)]) -> Ledger {
        let mut ledger = six_nodes();
        // route every balance through node 0, which nets out to zero
        for &(i, d) in debts {
            if d > 0 {
                ledger.insert_arc(n(i), n(0), d).unwrap();
            } else {
                ledger.insert_arc(n(0), n(i), -d).unwrap();
            }
        }
        assert_eq!(ledger.debt(n(0)), 0);
        ledger
    }

    #[test]
    fn insert_node_hands_out_fresh_ids() {
        let mut ledger = Ledger::new();
        assert_eq!(ledger.insert_node(), n(0));
        assert_eq!(ledger.insert_node(), n(1));
        assert_eq!(ledger.debt(n(1)), 0);
        assert_eq!(ledger.engine().active_count(), 0);
    }

    #[test]
    fn insert_node_leaves_engine_untouched() {
        let mut ledger = six_nodes();
        ledger.insert_arc(n(1), n(2), 4).unwrap();
        let before = ledger.engine().digest();
        ledger.insert_node();
        assert_eq!(ledger.engine().digest(), before);
    }

    #[test]
    fn example_one_arcs() {
        let mut ledger = six_nodes();
        for (u, v, x) in EXAMPLE_ONE {
            ledger.insert_arc(n(u), n(v), x).unwrap();
        }
        let d: Vec<Money> = (1..=5).map(|i| ledger.debt(n(i))).collect();
        assert_eq!(d, vec![10, -5, 0, 5, -10]);
        assert_eq!(ledger.engine().active_count(), 4);
        let plan = ledger.query();
        assert_eq!(plan.len(), 2);
        assert_eq!(
            plan.as_slice(),
            &[Transaction::new(n(1), n(5), 10).unwrap(), Transaction::new(n(4), n(2), 5).unwrap()]
        );
    }

    #[test]
    fn query_after_three_arcs() {
        let mut ledger = six_nodes();
        for (u, v, x) in &EXAMPLE_ONE[..3] {
            ledger.insert_arc(n(*u), n(*v), *x).unwrap();
        }
        assert_eq!(ledger.query().as_slice(), &[Transaction::new(n(1), n(2), 5).unwrap()]);
    }

    #[test]
    fn empty_ledger_query() {
        assert!(Ledger::new().query().is_empty());
    }

    #[test]
    fn arc_errors_are_distinct() {
        let mut ledger = six_nodes();
        ledger.insert_arc(n(1), n(2), 10).unwrap();
        ledger.insert_arc(n(2), n(1), 10).unwrap();
        assert_eq!(ledger.engine().active_count(), 0);
        assert_eq!(ledger.insert_arc(n(1), n(1), 5), Err(Error::Loop(n(1))));
        assert_eq!(ledger.insert_arc(n(1), n(2), 0), Err(Error::NonPositiveAmount(0)));
        assert_eq!(ledger.insert_arc(n(1), n(9), 5), Err(Error::UnknownNode(n(9))));
        let mut small = Ledger::with_capacity(1).unwrap();
        let (a, b) = (small.insert_node(), small.insert_node());
        assert_eq!(small.insert_arc(a, b, 1), Err(Error::Capacity { capacity: 1 }));
    }

    #[test]
    fn remove_arc_opposite_signs() {
        let mut ledger = with_debts(&[(1, 10), (2, -4), (3, -6)]);
        ledger.remove_arc(n(1), n(2)).unwrap();
        assert_eq!(ledger.debt(n(1)), 6);
        assert_eq!(ledger.debt(n(2)), 0);
        ledger.remove_arc(n(3), n(1)).unwrap();
        assert_eq!(ledger.debt(n(1)), 0);
        assert_eq!(ledger.debt(n(3)), 0);
    }

    #[test]
    fn remove_arc_same_sign_or_zero_is_a_no_op() {
        let mut ledger = with_debts(&[(1, 3), (2, 7), (3, -10)]);
        let before = ledger.digest();
        ledger.remove_arc(n(1), n(2)).unwrap();
        assert_eq!(ledger.digest(), before);
        let mut ledger = with_debts(&[(1, 5), (2, -5)]);
        let before = ledger.digest();
        ledger.remove_arc(n(3), n(2)).unwrap();
        assert_eq!(ledger.digest(), before);
        assert_eq!(ledger.remove_arc(n(2), n(2)), Err(Error::Loop(n(2))));
        assert_eq!(ledger.remove_arc(n(2), n(8)), Err(Error::UnknownNode(n(8))));
    }

    #[test]
    fn remove_node_settles_smallest_block() {
        let mut ledger = with_debts(&[(1, 2), (2, 2), (3, -4), (4, 5), (5, -5)]);
        assert_eq!(ledger.query().len(), 3);
        let payments = ledger.remove_node(n(4)).unwrap();
        assert_eq!(payments, vec![Transaction::new(n(4), n(5), 5).unwrap()]);
        assert!(!ledger.is_live(n(4)));
        assert!(ledger.is_live(n(5)));
        assert_eq!(ledger.debt(n(5)), 0);
        let rest: Vec<NodeId> = ledger.debts().iter().map(|(node, _)| node).collect();
        assert_eq!(rest, vec![n(1), n(2), n(3)]);
        assert_eq!(ledger.query().len(), 2);
    }

    #[test]
    fn remove_node_without_debt() {
        let mut ledger = six_nodes();
        for (u, v, x) in EXAMPLE_ONE {
            ledger.insert_arc(n(u), n(v), x).unwrap();
        }
        let before = ledger.engine().digest();
        assert!(ledger.remove_node(n(3)).unwrap().is_empty());
        assert!(!ledger.is_live(n(3)));
        assert_eq!(ledger.engine().digest(), before);
        assert_eq!(ledger.remove_node(n(3)), Err(Error::UnknownNode(n(3))));
    }

    #[test]
    fn query_is_pure() {
        let mut ledger = six_nodes();
        for (u, v, x) in EXAMPLE_ONE {
            ledger.insert_arc(n(u), n(v), x).unwrap();
        }
        let before = ledger.digest();
        let first = ledger.query();
        assert_eq!(ledger.digest(), before);
        assert_eq!(ledger.query(), first);
    }

    #[test]
    fn static_solve_of_example_one() {
        let arcs: Vec<Borrowing> =
            EXAMPLE_ONE.iter().map(|&(u, v, x)| Borrowing::new(n(u), n(v), x).unwrap()).collect();
        let plan = solve_static(&arcs, 6).unwrap();
        assert_eq!(plan.len(), 2);
        assert!(crate::model::is_equivalent(&arcs, &plan));
        assert_eq!(solve_static(&arcs, 5), Err(Error::UnknownNode(n(5))));
        let bad = [Borrowing { borrower: n(1), lender: n(1), amount: 3 }];
        assert_eq!(solve_static(&bad, 6), Err(Error::Loop(n(1))));
    }

    #[test]
    fn static_solve_of_path_and_cycle() {
        let path: Vec<Borrowing> = (0..19).map(|i| Borrowing::new(n(i), n(i + 1), 7).unwrap()).collect();
        assert_eq!(solve_static(&path, 20).unwrap().len(), 1);
        let cycle: Vec<Borrowing> = (0..20).map(|i| Borrowing::new(n(i), n((i + 1) % 20), 7).unwrap()).collect();
        assert_eq!(solve_static(&cycle, 20).unwrap().len(), 0);
    }
}
