//! Reductions of the zero-sum set list that keep the optimal partition
//! reachable.

use crate::mask::SubsetMask;

/// Zero-sum subsets of V*, ascending by mask, without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ZeroSetList {
    sets: Vec<SubsetMask>,
}

impl ZeroSetList {
    pub fn new(mut sets: Vec<SubsetMask>) -> Self {
        sets.sort_unstable();
        sets.dedup();
        Self { sets }
    }

    pub(crate) fn from_sorted(sets: Vec<SubsetMask>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        Self { sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn as_slice(&self) -> &[SubsetMask] {
        &self.sets
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SubsetMask> {
        self.sets.iter()
    }

    /// Keeps the members whose flag is false; order is preserved.
    fn retain_unflagged(&self, removed: &[bool]) -> Self {
        let sets = self.sets.iter().zip(removed).filter(|&(_, &gone)| !gone).map(|(&s, _)| s).collect();
        Self { sets }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairExtraction {
    /// Pairwise disjoint two-element sets committed to the partition.
    pub fixed_parts: Vec<SubsetMask>,
    /// The sets that touch no committed pair.
    pub reduced: ZeroSetList,
    /// Union of `fixed_parts`.
    pub in_pair: SubsetMask,
}

/// Commits every two-element set disjoint from the pairs already committed,
/// scanning in list order, then drops every set that meets a committed pair.
pub fn clear_pairs(s0: &ZeroSetList) -> PairExtraction {
    let mut fixed_parts = Vec::new();
    let mut in_pair = SubsetMask::EMPTY;
    for &s in s0.iter() {
        if s.len() == 2 && !s.intersects(in_pair) {
            fixed_parts.push(s);
            in_pair = in_pair | s;
        }
    }
    let removed: Vec<bool> = s0.iter().map(|s| s.intersects(in_pair)).collect();
    PairExtraction { fixed_parts, reduced: s0.retain_unflagged(&removed), in_pair }
}

/// Drops every set that strictly contains another member, leaving the
/// inclusion-minimal (atomic) sets.
pub fn clear_non_atomic(s0: &ZeroSetList) -> ZeroSetList {
    let sets = s0.as_slice();
    let mut removed = vec![false; sets.len()];
    for j in 0..sets.len() {
        // A proper subset has a smaller mask, so it sits earlier in the list.
        // Checking only surviving candidates is enough: if a removed set is
        // inside sets[j], so is the set that removed it.
        removed[j] = (0..j).any(|i| !removed[i] && sets[i].is_proper_subset_of(sets[j]));
    }
    s0.retain_unflagged(&removed)
}

/// The zero-set list together with the part of the partition already fixed
/// and the live mask still left to partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub live: SubsetMask,
    pub fixed_parts: Vec<SubsetMask>,
    pub sets: ZeroSetList,
}

impl Reduction {
    pub fn new(live: SubsetMask, sets: ZeroSetList) -> Self {
        Self { live, fixed_parts: Vec::new(), sets }
    }
}

/// A transformation of the zero-set list that never loses the optimum: the
/// best partition of `live` using `sets`, plus `fixed_parts`, must have as many
/// parts as the best partition of the original input.
pub trait Heuristic {
    fn name(&self) -> &'static str;
    fn apply(&self, input: Reduction) -> Reduction;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClearPairs;

impl Heuristic for ClearPairs {
    fn name(&self) -> &'static str {
        "clear-pairs"
    }

    fn apply(&self, mut input: Reduction) -> Reduction {
        let pairs = clear_pairs(&input.sets);
        input.fixed_parts.extend(pairs.fixed_parts);
        Reduction { live: input.live.minus(pairs.in_pair), fixed_parts: input.fixed_parts, sets: pairs.reduced }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClearNonAtomic;

impl Heuristic for ClearNonAtomic {
    fn name(&self) -> &'static str {
        "clear-non-atomic"
    }

    fn apply(&self, input: Reduction) -> Reduction {
        Reduction { sets: clear_non_atomic(&input.sets), ..input }
    }
}

pub fn reduce(live: SubsetMask, s0: ZeroSetList, heuristics: &[&dyn Heuristic]) -> Reduction {
    heuristics.iter().fold(Reduction::new(live, s0), |acc, h| h.apply(acc))
}
