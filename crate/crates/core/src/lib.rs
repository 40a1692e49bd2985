//! Debt clearing over a dynamic borrowing graph.
//!
//! Only net balances matter: a set of payments clears a borrowing graph
//! exactly when every node ends up paying out its net debt. The nodes with
//! nonzero balance (V*) are split into as many zero-sum blocks as possible and
//! each block of `k` nodes is cleared with `k - 1` payments.
//!
//! [`Ledger`] keeps the subset sums of V* up to date under arc insertion so a
//! query only has to enumerate zero-sum subsets, shrink that list with the two
//! safe reductions in [`heuristics`], and run the partition dp in [`solver`].
//! [`solve_static`] does the same for a whole arc list at once.

pub mod engine;
pub mod error;
pub mod heuristics;
pub mod ledger;
pub mod mask;
pub mod model;
pub mod oracle;
pub mod solver;

pub use engine::{SubsetEngine, DEFAULT_CAPACITY, MAX_CAPACITY};
pub use error::{Error, Result};
pub use heuristics::{
    clear_non_atomic, clear_pairs, reduce, ClearNonAtomic, ClearPairs, Heuristic, PairExtraction, Reduction,
    ZeroSetList,
};
pub use ledger::{solve_engine, solve_static, solve_static_with, Ledger, Solution, SolveStats};
pub use mask::SubsetMask;
pub use model::{
    absolute_debt, is_equivalent, settles, Borrowing, DebtState, Money, NodeId, Transaction, TransactionPlan,
};
pub use oracle::{oracle_max_zero_partition, OracleResult, ORACLE_LIMIT};
pub use solver::{max_partition, min_removal_set, settle_part, DpTable, PartitionResult};
