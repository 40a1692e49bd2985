//! Subsets of V* slots as bit sets: slot `i` is in the subset iff bit `i` is one.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor};

#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn singleton(slot: usize) -> Self {
        debug_assert!(slot < 64);
        SubsetMask(1 << slot)
    }

    /// Slots `0..count`.
    pub fn full(count: usize) -> Self {
        if count >= 64 {
            SubsetMask(u64::MAX)
        } else {
            SubsetMask((1u64 << count) - 1)
        }
    }

    pub fn from_slots<I: IntoIterator<Item = usize>>(slots: I) -> Self {
        slots.into_iter().fold(Self::EMPTY, |m, s| m.with(s))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, slot: usize) -> bool {
        slot < 64 && self.0 >> slot & 1 == 1
    }

    pub fn with(self, slot: usize) -> Self {
        self | Self::singleton(slot)
    }

    pub fn without(self, slot: usize) -> Self {
        SubsetMask(self.0 & !(1u64 << slot))
    }

    pub fn minus(self, other: Self) -> Self {
        SubsetMask(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: Self) -> bool {
        self != other && self.is_subset_of(other)
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn lowest(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize)
    }

    /// Member slots in ascending order.
    pub fn slots(self) -> Slots {
        Slots(self.0)
    }

    /// Every submask (including the empty one and `self`) in ascending
    /// numeric order.
    pub fn submasks(self) -> Submasks {
        Submasks { whole: self.0, next: Some(0) }
    }
}

impl BitOr for SubsetMask {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        SubsetMask(self.0 | rhs.0)
    }
}

impl BitAnd for SubsetMask {
    type Output = Self;
    fn bitand(self, rhs: Self) -> Self {
        SubsetMask(self.0 & rhs.0)
    }
}

impl BitXor for SubsetMask {
    type Output = Self;
    fn bitxor(self, rhs: Self) -> Self {
        SubsetMask(self.0 ^ rhs.0)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.slots().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

pub struct Slots(u64);

impl Iterator for Slots {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let slot = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(slot)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Slots {}

pub struct Submasks {
    whole: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let current = self.next?;
        // Adding one with every bit outside `whole` forced on carries into the
        // next member bit, giving the next larger submask.
        self.next =
            if current == self.whole { None } else { Some((current | !self.whole).wrapping_add(1) & self.whole) };
        Some(SubsetMask(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submasks_ascend_and_cover() {
        let whole = SubsetMask(0b1011_0100);
        let subs: Vec<u64> = whole.submasks().map(|m| m.0).collect();
        assert_eq!(subs.len(), 16);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        let brute: Vec<u64> = (0..=whole.0).filter(|m| m & !whole.0 == 0).collect();
        assert_eq!(subs, brute);
    }

    #[test]
    fn submasks_of_empty() {
        assert_eq!(SubsetMask::EMPTY.submasks().collect::<Vec<_>>(), vec![SubsetMask::EMPTY]);
    }

    #[test]
    fn submasks_of_top_bit() {
        let whole = SubsetMask::singleton(63).with(0);
        assert_eq!(whole.submasks().count(), 4);
    }

    #[test]
    fn slot_iteration_and_display() {
        let m = SubsetMask::from_slots([5, 0, 3]);
        assert_eq!(m.slots().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert_eq!(m.to_string(), "{0,3,5}");
        assert_eq!(m.len(), 3);
        assert_eq!(m.lowest(), Some(0));
        assert!(SubsetMask::from_slots([0, 5]).is_proper_subset_of(m));
        assert!(!m.is_proper_subset_of(m));
    }
}
