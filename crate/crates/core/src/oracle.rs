//! Exhaustive maximum zero-sum partition, for cross-checking the solver on
//! small instances. Subset sums are recomputed directly for every block.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::model::{DebtState, Money, NodeId};

pub const ORACLE_LIMIT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub max_parts: usize,
    pub min_transactions: usize,
    /// Blocks as masks over positions in `nodes`.
    pub witness: Vec<SubsetMask>,
    /// Active nodes, ascending; position `i` is bit `i` of the witness masks.
    pub nodes: Vec<NodeId>,
}

pub fn oracle_max_zero_partition(debts: &DebtState) -> Result<OracleResult> {
    let members: Vec<(NodeId, Money)> = debts.iter().collect();
    if members.len() > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge { size: members.len(), limit: ORACLE_LIMIT });
    }
    if debts.total() != 0 {
        return Err(Error::Contract("oracle: balances do not sum to zero"));
    }
    let balances: Vec<i128> = members.iter().map(|&(_, d)| d as i128).collect();
    let mut search = Search { balances: &balances, memo: HashMap::new() };
    let all = SubsetMask::full(members.len());
    let max_parts = search.best(all);

    let mut witness = Vec::new();
    let mut rest = all;
    while !rest.is_empty() {
        let block = search.memo[&rest].1;
        witness.push(block);
        rest = rest.minus(block);
    }
    Ok(OracleResult {
        max_parts,
        min_transactions: members.len() - max_parts,
        witness,
        nodes: members.into_iter().map(|(n, _)| n).collect(),
    })
}

struct Search<'a> {
    balances: &'a [i128],
    /// remaining -> (best block count, first block of a best partition)
    memo: HashMap<SubsetMask, (usize, SubsetMask)>,
}

impl Search<'_> {
    fn block_sum(&self, block: SubsetMask) -> i128 {
        block.slots().map(|i| self.balances[i]).sum()
    }

    /// `remaining` must sum to zero. The block holding its lowest member is
    /// tried in every zero-sum shape.
    fn best(&mut self, remaining: SubsetMask) -> usize {
        let Some(first) = remaining.lowest() else { return 0 };
        if let Some(&(count, _)) = self.memo.get(&remaining) {
            return count;
        }
        let others = remaining.without(first);
        let mut best = (0, remaining);
        for extra in others.submasks() {
            let block = extra.with(first);
            if self.block_sum(block) != 0 {
                continue;
            }
            let rest = remaining.minus(block);
            let count = 1 + self.best(rest);
            if count > best.0 {
                best = (count, block);
            }
        }
        self.memo.insert(remaining, best);
        best.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn debts(values: &[Money]) -> DebtState {
        DebtState::from_pairs(values.iter().enumerate().map(|(i, &d)| (NodeId(i as u32 + 1), d))).unwrap()
    }

    #[test]
    fn example_one() {
        let r = oracle_max_zero_partition(&debts(&[10, -5, 0, 5, -10])).unwrap();
        assert_eq!((r.max_parts, r.min_transactions), (2, 2));
        assert_eq!(r.nodes, vec![NodeId(1), NodeId(2), NodeId(4), NodeId(5)]);
    }

    #[test]
    fn no_zero_pair() {
        let r = oracle_max_zero_partition(&debts(&[2, 2, -4])).unwrap();
        assert_eq!((r.max_parts, r.min_transactions), (1, 2));
        assert_eq!(r.witness, vec![SubsetMask(0b111)]);
    }

    #[test]
    fn settled_state() {
        let r = oracle_max_zero_partition(&DebtState::new()).unwrap();
        assert_eq!((r.max_parts, r.min_transactions), (0, 0));
        assert!(r.witness.is_empty());
    }

    #[test]
    fn guard() {
        let mut values = vec![1; 17];
        values.push(-17);
        assert_eq!(oracle_max_zero_partition(&debts(&values)), Err(Error::OracleTooLarge { size: 18, limit: 16 }));
    }

    #[test]
    fn witness_is_a_zero_sum_partition() {
        let values = [3, -1, -2, 4, -4, 5, -3, -2];
        let r = oracle_max_zero_partition(&debts(&values)).unwrap();
        let mut covered = SubsetMask::EMPTY;
        for block in &r.witness {
            assert!(!block.intersects(covered));
            let sum: Money = block.slots().map(|i| values[i]).sum();
            assert_eq!(sum, 0);
            covered = covered | *block;
        }
        assert_eq!(covered, SubsetMask::full(values.len()));
        assert_eq!(r.max_parts, r.witness.len());
    }
}
