//! Maximal zero-sum partition of V*, the minimal removal set, and turning a
//! partition block into concrete payments.
//!
//! Clearing a zero-sum block of `k` nodes takes `k - 1` payments, so a
//! partition of V* into the largest number of zero-sum blocks gives a plan with
//! `|V*| - blocks` payments.

use crate::error::{Error, Result};
use crate::heuristics::ZeroSetList;
use crate::mask::SubsetMask;
use crate::model::{Money, NodeId, Transaction};

/// Blocks of a maximal zero-sum partition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartitionResult {
    pub parts: Vec<SubsetMask>,
}

impl PartitionResult {
    pub fn part_count(&self) -> usize {
        self.parts.len()
    }
}

/// Best part count for every union of zero sets inside `live`.
///
/// Masks are stored compacted onto the live slots, so the table has
/// `2^|live|` entries regardless of where the live slots sit.
#[derive(Clone, Debug)]
pub struct DpTable {
    live: SubsetMask,
    sets: Vec<SubsetMask>,
    compact_sets: Vec<usize>,
    dp: Vec<Option<u8>>,
    choice: Vec<u32>,
}

const MAX_DP_WIDTH: usize = 30;

impl DpTable {
    /// Builds the table by extending every defined mask with every disjoint
    /// zero set, in ascending mask order so each mask is final before it is
    /// extended. Among maximizing last blocks the smallest mask is kept.
    pub fn build(live: SubsetMask, s0: &ZeroSetList) -> Result<Self> {
        if live.len() > MAX_DP_WIDTH {
            return Err(Error::Contract("partition table wider than 30 slots"));
        }
        if s0.iter().any(|s| s.is_empty() || !s.is_subset_of(live)) {
            return Err(Error::Contract("zero set outside the live mask"));
        }
        let live_slots: Vec<usize> = live.slots().collect();
        let compact = |m: SubsetMask| {
            live_slots.iter().enumerate().filter(|&(_, &s)| m.contains(s)).fold(0usize, |acc, (i, _)| acc | 1 << i)
        };
        let sets: Vec<SubsetMask> = s0.iter().copied().collect();
        let compact_sets: Vec<usize> = sets.iter().map(|&s| compact(s)).collect();

        let size = 1usize << live_slots.len();
        let mut dp: Vec<Option<u8>> = vec![None; size];
        let mut choice = vec![0u32; size];
        dp[0] = Some(0);
        for base in 0..size {
            let Some(count) = dp[base] else { continue };
            let next = count + 1;
            for (idx, &t) in compact_sets.iter().enumerate() {
                if t & base != 0 {
                    continue;
                }
                let target = base | t;
                match dp[target] {
                    Some(have) if have > next => {}
                    Some(have) if have == next && choice[target] as usize <= idx => {}
                    _ => {
                        dp[target] = Some(next);
                        choice[target] = idx as u32;
                    }
                }
            }
        }
        Ok(Self { live, sets, compact_sets, dp, choice })
    }

    fn compact(&self, mask: SubsetMask) -> Option<usize> {
        if !mask.is_subset_of(self.live) {
            return None;
        }
        Some(self.live.slots().enumerate().filter(|&(_, s)| mask.contains(s)).fold(0usize, |acc, (i, _)| acc | 1 << i))
    }

    /// Best part count for `mask`, or `None` if it is not a union of zero sets.
    pub fn parts_of(&self, mask: SubsetMask) -> Option<usize> {
        self.compact(mask).and_then(|c| self.dp[c]).map(usize::from)
    }

    /// Blocks of an optimal partition of `mask`, following the recorded choices.
    pub fn partition_of(&self, mask: SubsetMask) -> Option<Vec<SubsetMask>> {
        let mut rest = self.compact(mask)?;
        self.dp[rest]?;
        let mut parts = Vec::new();
        while rest != 0 {
            let idx = self.choice[rest] as usize;
            parts.push(self.sets[idx]);
            rest ^= self.compact_sets[idx];
        }
        parts.sort_unstable();
        Some(parts)
    }
}

/// Partitions `live` into the largest number of blocks drawn from `s0`.
pub fn max_partition(live: SubsetMask, s0: &ZeroSetList) -> Result<PartitionResult> {
    if live.is_empty() {
        return Ok(PartitionResult::default());
    }
    let table = DpTable::build(live, s0)?;
    let parts = table.partition_of(live).ok_or(Error::Contract("live mask is not a union of the given zero sets"))?;
    Ok(PartitionResult { parts })
}

/// Smallest zero set `P` containing `slot` that still belongs to some optimal
/// partition, i.e. `best(live) = best(live \ P) + 1`. Ties go to the smaller
/// mask.
///
/// `s0` must not have been through pair clearing; committing pairs early can
/// hide the smallest such set.
pub fn min_removal_set(live: SubsetMask, s0: &ZeroSetList, slot: usize) -> Result<SubsetMask> {
    if !live.contains(slot) {
        return Err(Error::InactiveSlot(slot));
    }
    let table = DpTable::build(live, s0)?;
    let best = table.parts_of(live).ok_or(Error::Contract("live mask is not a union of the given zero sets"))?;
    let mut candidates: Vec<SubsetMask> = s0.iter().copied().filter(|s| s.contains(slot)).collect();
    candidates.sort_unstable_by_key(|s| (s.len(), *s));
    candidates
        .into_iter()
        .find(|&p| table.parts_of(live.minus(p)) == Some(best - 1))
        .ok_or(Error::Contract("no optimal block contains the node"))
}

/// Payments clearing one zero-sum block.
///
/// Debtors and creditors are each taken in ascending id order; the first
/// debtor pays the first creditor as much as both can absorb, and whichever
/// side reaches zero drops out. At most `members.len() - 1` payments result.
pub fn settle_part(members: &[(NodeId, Money)]) -> Result<Vec<Transaction>> {
    if members.is_empty() {
        return Err(Error::Contract("settle_part: empty block"));
    }
    if members.iter().any(|&(_, d)| d == 0) {
        return Err(Error::Contract("settle_part: member without debt"));
    }
    if members.iter().map(|&(_, d)| d as i128).sum::<i128>() != 0 {
        return Err(Error::Contract("settle_part: block does not sum to zero"));
    }
    let mut sorted = members.to_vec();
    sorted.sort_unstable_by_key(|&(n, _)| n);
    let mut debtors: Vec<(NodeId, Money)> = sorted.iter().copied().filter(|&(_, d)| d > 0).collect();
    let mut creditors: Vec<(NodeId, Money)> = sorted.iter().filter(|&&(_, d)| d < 0).map(|&(n, d)| (n, -d)).collect();
    debtors.reverse();
    creditors.reverse();

    let mut out = Vec::with_capacity(members.len() - 1);
    while let (Some(debtor), Some(creditor)) = (debtors.last_mut(), creditors.last_mut()) {
        let amount = debtor.1.min(creditor.1);
        out.push(Transaction::new(debtor.0, creditor.0, amount)?);
        debtor.1 -= amount;
        creditor.1 -= amount;
        if debtor.1 == 0 {
            debtors.pop();
        }
        if creditor.1 == 0 {
            creditors.pop();
        }
    }
    debug_assert!(debtors.is_empty() && creditors.is_empty());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::SubsetEngine;
    use crate::heuristics::clear_non_atomic;
    use crate::model::DebtState;

    fn n(i: u32) -> NodeId {
        NodeId(i)
    }

    fn engine(pairs: &[(u32, Money)]) -> SubsetEngine {
        let debts = DebtState::from_pairs(pairs.iter().map(|&(i, d)| (n(i), d))).unwrap();
        SubsetEngine::from_debts(&debts, 16).unwrap()
    }

    fn nodes_of(e: &SubsetEngine, mask: SubsetMask) -> Vec<u32> {
        e.members(mask).iter().map(|(node, _)| node.0).collect()
    }

    #[test]
    fn example_one_has_two_parts() {
        let e = engine(&[(1, 10), (2, -5), (4, 5), (5, -10)]);
        let result = max_partition(e.live_mask(), &e.zero_sets()).unwrap();
        assert_eq!(result.part_count(), 2);
        let mut parts: Vec<Vec<u32>> = result.parts.iter().map(|&p| nodes_of(&e, p)).collect();
        parts.sort();
        assert_eq!(parts, vec![vec![1, 5], vec![2, 4]]);
        assert_eq!(e.active_count() - result.part_count(), 2);
    }

    #[test]
    fn single_block() {
        let e = engine(&[(1, 2), (2, 2), (3, -4)]);
        let result = max_partition(e.live_mask(), &e.zero_sets()).unwrap();
        assert_eq!(result.parts, vec![e.live_mask()]);
    }

    #[test]
    fn empty_live_mask() {
        assert_eq!(max_partition(SubsetMask::EMPTY, &ZeroSetList::default()).unwrap().part_count(), 0);
    }

    #[test]
    fn unreachable_live_mask_is_a_contract_error() {
        let s0 = ZeroSetList::new(vec![SubsetMask(0b011)]);
        assert!(matches!(max_partition(SubsetMask(0b111), &s0), Err(Error::Contract(_))));
        let outside = ZeroSetList::new(vec![SubsetMask(0b1000)]);
        assert!(matches!(max_partition(SubsetMask(0b111), &outside), Err(Error::Contract(_))));
    }

    #[test]
    fn ties_prefer_smallest_block_mask() {
        // four +1/-1 nodes: {0,1} or {0,3} both pair slot 0
        let e = engine(&[(0, 1), (1, -1), (2, 1), (3, -1)]);
        let result = max_partition(e.live_mask(), &e.zero_sets()).unwrap();
        assert_eq!(result.part_count(), 2);
        let again = max_partition(e.live_mask(), &e.zero_sets()).unwrap();
        assert_eq!(result, again);
        let table = DpTable::build(e.live_mask(), &e.zero_sets()).unwrap();
        // last block of the full mask is the smallest maximizing mask, {0,1}
        assert_eq!(table.sets[table.choice[0b1111] as usize], SubsetMask(0b0011));
    }

    #[test]
    fn removal_set_prefers_smallest_block() {
        let e = engine(&[(1, 2), (2, 2), (3, -4), (4, 5), (5, -5)]);
        let s0 = clear_non_atomic(&e.zero_sets());
        let slot = e.slots().slot_of(n(4)).unwrap();
        let p = min_removal_set(e.live_mask(), &s0, slot).unwrap();
        assert_eq!(nodes_of(&e, p), vec![4, 5]);

        let full = e.zero_sets();
        assert_eq!(min_removal_set(e.live_mask(), &full, slot).unwrap(), p);
        let table = DpTable::build(e.live_mask(), &full).unwrap();
        assert_eq!(table.parts_of(e.live_mask()), Some(2));
        assert_eq!(table.parts_of(e.live_mask().minus(p)), Some(1));
    }

    #[test]
    fn removal_set_of_lone_pair() {
        let e = engine(&[(1, 10), (5, -10)]);
        let slot = e.slots().slot_of(n(1)).unwrap();
        let p = min_removal_set(e.live_mask(), &e.zero_sets(), slot).unwrap();
        assert_eq!(nodes_of(&e, p), vec![1, 5]);
    }

    #[test]
    fn removal_set_needs_active_slot() {
        let e = engine(&[(1, 10), (5, -10)]);
        assert_eq!(min_removal_set(e.live_mask(), &e.zero_sets(), 7), Err(Error::InactiveSlot(7)));
    }

    #[test]
    fn removal_can_require_a_larger_block() {
        // node 3 is in no zero-sum pair, so its block is one of the triples
        let e = engine(&[(0, 3), (1, -3), (2, 3), (3, -1), (4, -2)]);
        let s0 = e.zero_sets();
        let table = DpTable::build(e.live_mask(), &s0).unwrap();
        let best = table.parts_of(e.live_mask()).unwrap();
        let slot = e.slots().slot_of(n(3)).unwrap();
        let p = min_removal_set(e.live_mask(), &s0, slot).unwrap();
        assert!(p.contains(slot));
        assert_eq!(p.len(), 3);
        assert_eq!(table.parts_of(e.live_mask().minus(p)), Some(best - 1));
    }

    #[test]
    fn settle_pair_and_triple() {
        assert_eq!(settle_part(&[(n(1), 10), (n(5), -10)]).unwrap(), vec![Transaction::new(n(1), n(5), 10).unwrap()]);
        assert_eq!(
            settle_part(&[(n(3), -4), (n(1), 2), (n(2), 2)]).unwrap(),
            vec![Transaction::new(n(1), n(3), 2).unwrap(), Transaction::new(n(2), n(3), 2).unwrap()]
        );
    }

    #[test]
    fn settle_rejects_bad_blocks() {
        assert!(matches!(settle_part(&[(n(1), 0)]), Err(Error::Contract(_))));
        assert!(matches!(settle_part(&[]), Err(Error::Contract(_))));
        assert!(matches!(settle_part(&[(n(1), 3), (n(2), -2)]), Err(Error::Contract(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn block() -> impl Strategy<Value = Vec<(NodeId, Money)>> {
            prop::collection::vec(prop_oneof![-30 as Money..-1, 1 as Money..30], 1..9).prop_map(|mut d| {
                let total: Money = d.iter().sum();
                if total != 0 {
                    d.push(-total);
                }
                d.into_iter().enumerate().map(|(i, x)| (n(i as u32), x)).collect()
            })
        }

        proptest! {
            #[test]
            fn settlement_zeroes_every_member(members in block()) {
                prop_assume!(members.len() >= 2);
                let txs = settle_part(&members).unwrap();
                prop_assert!(txs.len() < members.len());
                let mut state = DebtState::from_pairs(members.iter().copied()).unwrap();
                for t in &txs {
                    prop_assert!(t.amount > 0);
                    state.add(t.sender, -t.amount).unwrap();
                    state.add(t.receiver, t.amount).unwrap();
                }
                prop_assert!(state.is_settled());
            }
        }
    }
}
