//! The active node set V* and the sums table over all of its subsets.
//!
//! Every node with a nonzero balance holds a slot; a subset of V* is a
//! [`SubsetMask`] over slots and `sums[mask]` is the total balance of its
//! members. The table is dense, indexed directly by mask. Entries for masks
//! that reach outside the live mask are stale and never read: when a node
//! leaves V* its entries are abandoned, and when a node takes a slot every
//! live mask containing that slot is recomputed from smaller masks.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::heuristics::ZeroSetList;
use crate::mask::SubsetMask;
use crate::model::{Borrowing, DebtState, Money, NodeId};

/// Default number of slots: 2^24 sums entries, 128 MiB when fully grown.
pub const DEFAULT_CAPACITY: usize = 24;
pub const MAX_CAPACITY: usize = 63;

/// Node/slot assignment for V*.
#[derive(Clone, Debug, Default)]
pub struct SlotMap {
    node_of_slot: Vec<Option<NodeId>>,
    slot_of_node: HashMap<NodeId, usize>,
    live: SubsetMask,
    free: BTreeSet<usize>,
}

impl SlotMap {
    pub fn slot_of(&self, node: NodeId) -> Option<usize> {
        self.slot_of_node.get(&node).copied()
    }

    pub fn node_at(&self, slot: usize) -> Option<NodeId> {
        self.node_of_slot.get(slot).copied().flatten()
    }

    pub fn live(&self) -> SubsetMask {
        self.live
    }

    /// Slots ever handed out; the sums table spans `2^allocated` masks.
    pub fn allocated(&self) -> usize {
        self.node_of_slot.len()
    }

    /// Takes the lowest vacated slot, or a fresh one past the end.
    fn assign(&mut self, node: NodeId) -> usize {
        let slot = match self.free.pop_first() {
            Some(slot) => slot,
            None => {
                self.node_of_slot.push(None);
                self.node_of_slot.len() - 1
            }
        };
        self.node_of_slot[slot] = Some(node);
        self.slot_of_node.insert(node, slot);
        self.live = self.live.with(slot);
        slot
    }

    fn release(&mut self, node: NodeId) -> Option<usize> {
        let slot = self.slot_of_node.remove(&node)?;
        self.node_of_slot[slot] = None;
        self.live = self.live.without(slot);
        self.free.insert(slot);
        Some(slot)
    }
}

#[derive(Clone, Debug)]
pub struct SubsetEngine {
    capacity: usize,
    slots: SlotMap,
    debt_of_slot: Vec<Money>,
    sums: Vec<Money>,
    touched: usize,
}

impl Default for SubsetEngine {
    fn default() -> Self {
        Self::new(DEFAULT_CAPACITY).expect("default capacity is valid")
    }
}

impl SubsetEngine {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 || capacity > MAX_CAPACITY {
            return Err(Error::InvalidCapacity { requested: capacity, max: MAX_CAPACITY });
        }
        Ok(Self { capacity, slots: SlotMap::default(), debt_of_slot: Vec::new(), sums: vec![0], touched: 0 })
    }

    /// Batch construction from net balances.
    pub fn from_debts(debts: &DebtState, capacity: usize) -> Result<Self> {
        let mut engine = Self::new(capacity)?;
        engine.rebuild_from_debts(debts)?;
        Ok(engine)
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn slots(&self) -> &SlotMap {
        &self.slots
    }

    pub fn live_mask(&self) -> SubsetMask {
        self.slots.live
    }

    /// |V*|.
    pub fn active_count(&self) -> usize {
        self.slots.live.len()
    }

    pub fn debt(&self, node: NodeId) -> Money {
        self.slots.slot_of(node).map_or(0, |s| self.debt_of_slot[s])
    }

    pub fn debts(&self) -> DebtState {
        DebtState::from_pairs(self.members(self.live_mask())).expect("live balances fit in Money")
    }

    /// `(node, balance)` for every slot in `mask`, ascending by node id.
    /// Vacant slots are skipped.
    pub fn members(&self, mask: SubsetMask) -> Vec<(NodeId, Money)> {
        let mut out: Vec<_> =
            mask.slots().filter_map(|s| self.slots.node_at(s).map(|n| (n, self.debt_of_slot[s]))).collect();
        out.sort_unstable_by_key(|&(n, _)| n);
        out
    }

    /// Number of sums entries written by the most recent
    /// [`apply_arc_delta`](Self::apply_arc_delta).
    pub fn last_update_cost(&self) -> usize {
        self.touched
    }

    /// Gives `u` a slot ahead of its balance becoming nonzero.
    ///
    /// The sums entries containing the new slot are not valid until the
    /// caller runs the fresh-node recalculation in [`update_sums`](Self::update_sums).
    pub fn enter_vstar(&mut self, u: NodeId) -> Result<usize> {
        if self.slots.slot_of(u).is_some() {
            return Err(Error::Contract("enter_vstar: node already holds a slot"));
        }
        if self.active_count() >= self.capacity {
            return Err(Error::Capacity { capacity: self.capacity });
        }
        let slot = self.slots.assign(u);
        if slot >= self.debt_of_slot.len() {
            self.debt_of_slot.resize(slot + 1, 0);
            self.sums.resize(1usize << self.slots.allocated(), 0);
        }
        self.debt_of_slot[slot] = 0;
        Ok(slot)
    }

    fn leave_vstar(&mut self, u: NodeId) {
        if let Some(slot) = self.slots.release(u) {
            self.debt_of_slot[slot] = 0;
        }
    }

    /// Adds `x` to the sum of every live subset containing `u` but not `v`.
    ///
    /// If `u` has just entered V* (its balance equals `x`) the entries are
    /// rebuilt as `sums[S \ {u}] + x` instead, since the old values are stale.
    /// `v` may be outside V*, in which case the exclusion is vacuous. This is
    /// a step of [`apply_arc_delta`](Self::apply_arc_delta); on its own it
    /// leaves the table inconsistent.
    pub fn update_sums(&mut self, u: NodeId, v: NodeId, x: Money) -> Result<()> {
        let su = self.slots.slot_of(u).ok_or(Error::Contract("update_sums: u is not in V*"))?;
        let sv = self.slots.slot_of(v);
        self.sweep_containing(su, sv, x);
        Ok(())
    }

    fn sweep_containing(&mut self, su: usize, sv: Option<usize>, x: Money) {
        let mut rest = self.slots.live.without(su);
        if let Some(sv) = sv {
            rest = rest.without(sv);
        }
        let ubit = 1u64 << su;
        let fresh = self.debt_of_slot[su] == x;
        for sub in rest.submasks() {
            let s = (sub.0 | ubit) as usize;
            if fresh {
                self.sums[s] = self.sums[sub.0 as usize] + x;
            } else {
                self.sums[s] += x;
            }
        }
        self.touched += 1usize << rest.len();
    }

    /// Records that `u` must pay `x` to `v`, keeping V* and every live sums
    /// entry exact.
    ///
    /// On error (loop, non-positive amount, overflow, capacity) the engine is
    /// left unchanged.
    pub fn apply_arc_delta(&mut self, u: NodeId, v: NodeId, x: Money) -> Result<()> {
        Borrowing::new(u, v, x)?;
        let (du, dv) = (self.debt(u), self.debt(v));
        let nu = du.checked_add(x).ok_or(Error::Overflow)?;
        let nv = dv.checked_sub(x).ok_or(Error::Overflow)?;
        self.check_mass(&[(u, nu), (v, nv)])?;

        let leaving = usize::from(du != 0 && nu == 0) + usize::from(dv != 0 && nv == 0);
        let entering = usize::from(du == 0) + usize::from(dv == 0);
        if self.active_count() - leaving + entering > self.capacity {
            return Err(Error::Capacity { capacity: self.capacity });
        }

        // Vacate first so a node entering at full capacity can take the slot
        // just released.
        if nu == 0 {
            self.leave_vstar(u);
        }
        if nv == 0 {
            self.leave_vstar(v);
        }
        for (node, was, now) in [(u, du, nu), (v, dv, nv)] {
            if was == 0 {
                self.enter_vstar(node)?;
            }
            if let Some(slot) = self.slots.slot_of(node) {
                self.debt_of_slot[slot] = now;
            }
        }

        self.touched = 0;
        let su = self.slots.slot_of(u);
        let sv = self.slots.slot_of(v);
        if let Some(su) = su {
            self.sweep_containing(su, sv, x);
        }
        if let Some(sv) = sv {
            self.sweep_containing(sv, su, -x);
        }
        if nu == x || nv == -x {
            if let (Some(su), Some(sv)) = (su, sv) {
                let both = (1u64 << su) | (1u64 << sv);
                let rest = self.slots.live.minus(SubsetMask(both));
                for sub in rest.submasks() {
                    self.sums[(sub.0 | both) as usize] = self.sums[sub.0 as usize] + nu + nv;
                }
                self.touched += 1usize << rest.len();
            }
        }
        Ok(())
    }

    /// Rejects balances whose positive total does not fit in [`Money`]; every
    /// subset sum then fits as well.
    fn check_mass(&self, overrides: &[(NodeId, Money)]) -> Result<()> {
        let mut mass: Money = 0;
        let mut add = |d: Money| -> Result<()> {
            if d > 0 {
                mass = mass.checked_add(d).ok_or(Error::Overflow)?;
            }
            Ok(())
        };
        for slot in self.slots.live.slots() {
            let node = self.slots.node_at(slot).expect("live slot is occupied");
            if overrides.iter().all(|&(n, _)| n != node) {
                add(self.debt_of_slot[slot])?;
            }
        }
        for &(_, d) in overrides {
            add(d)?;
        }
        Ok(())
    }

    /// Discards all state and rebuilds V* and the sums table from `debts`.
    ///
    /// Slots `0..|V*|` go to the active nodes in ascending id order, and each
    /// mask's sum is its predecessor without the lowest slot plus that slot's
    /// balance.
    pub fn rebuild_from_debts(&mut self, debts: &DebtState) -> Result<()> {
        let k = debts.active_count();
        if k > self.capacity {
            return Err(Error::Capacity { capacity: self.capacity });
        }
        let mut mass: Money = 0;
        for (_, d) in debts.iter().filter(|&(_, d)| d > 0) {
            mass = mass.checked_add(d).ok_or(Error::Overflow)?;
        }

        self.slots = SlotMap::default();
        self.debt_of_slot = Vec::with_capacity(k);
        for (node, d) in debts.iter() {
            self.slots.assign(node);
            self.debt_of_slot.push(d);
        }
        let size = 1usize << k;
        let mut sums = vec![0; size];
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)] + self.debt_of_slot[low];
        }
        self.sums = sums;
        self.touched = size;
        Ok(())
    }

    /// `sums[mask]`. Masks outside the live mask are stale and refused.
    pub fn subset_sum(&self, mask: SubsetMask) -> Result<Money> {
        if !mask.is_subset_of(self.live_mask()) {
            return Err(Error::StaleRead(mask));
        }
        Ok(self.sums[mask.0 as usize])
    }

    /// Every nonempty zero-sum live subset, ascending by mask.
    pub fn zero_sets(&self) -> ZeroSetList {
        let sets = self.live_mask().submasks().skip(1).filter(|m| self.sums[m.0 as usize] == 0).collect();
        ZeroSetList::from_sorted(sets)
    }

    /// Zeroes the balances of a zero-sum live subset and frees their slots.
    /// Sums over the remaining live masks are unaffected.
    pub fn clear_zero_set(&mut self, mask: SubsetMask) -> Result<()> {
        if mask.is_empty() || self.subset_sum(mask)? != 0 {
            return Err(Error::Contract("clear_zero_set: not a nonempty zero-sum subset"));
        }
        for slot in mask.slots() {
            let node = self.slots.node_at(slot).expect("live slot is occupied");
            self.leave_vstar(node);
        }
        Ok(())
    }

    /// Hash of the observable state: balances, slot assignment and every live
    /// sums entry.
    pub fn digest(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.capacity.hash(&mut h);
        self.live_mask().hash(&mut h);
        for slot in self.live_mask().slots() {
            (slot, self.slots.node_at(slot), self.debt_of_slot[slot]).hash(&mut h);
        }
        for mask in self.live_mask().submasks() {
            self.sums[mask.0 as usize].hash(&mut h);
        }
        h.finish()
    }
}
