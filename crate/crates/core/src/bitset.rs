//! Fixed-capacity point sets backed by `u64` blocks.
//!
//! Universes of at most 64 points fit in a single block; larger spaces
//! spill into additional blocks transparently. All operations are
//! allocation-free except construction, and iteration order is always
//! ascending point index, which keeps every consumer deterministic.

/// A subset of a finite point space `{0, .., capacity-1}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet {
    blocks: Vec<u64>,
    capacity: usize,
}

impl PointSet {
    pub fn empty(capacity: usize) -> Self {
        let nblocks = capacity.div_ceil(64).max(1);
        PointSet { blocks: vec![0; nblocks], capacity }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::empty(capacity);
        for p in 0..capacity {
            s.insert(p);
        }
        s
    }

    pub fn from_indices(capacity: usize, indices: &[usize]) -> Self {
        let mut s = Self::empty(capacity);
        for &p in indices {
            s.insert(p);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn insert(&mut self, p: usize) {
        debug_assert!(p < self.capacity);
        self.blocks[p / 64] |= 1 << (p % 64);
    }

    pub fn remove(&mut self, p: usize) {
        debug_assert!(p < self.capacity);
        self.blocks[p / 64] &= !(1 << (p % 64));
    }

    pub fn contains(&self, p: usize) -> bool {
        p < self.capacity && self.blocks[p / 64] & (1 << (p % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &PointSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    /// Number of elements shared with `other`.
    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Ascending iterator over member indices.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut bits = block;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(bi * 64 + tz)
                }
            })
        })
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = PointSet::empty(70);
        a.insert(0);
        a.insert(65);
        a.insert(31);
        assert_eq!(a.len(), 3);
        assert!(a.contains(65));
        assert!(!a.contains(64));
        assert_eq!(a.to_indices(), vec![0, 31, 65]);

        let b = PointSet::from_indices(70, &[31, 65, 69]);
        assert_eq!(a.intersection_len(&b), 2);
        assert!(!a.is_subset_of(&b));
        a.remove(0);
        assert!(a.is_subset_of(&b));

        let mut u = a.clone();
        u.union_with(&b);
        assert_eq!(u.to_indices(), vec![31, 65, 69]);
        u.subtract(&b);
        assert!(u.is_empty());
    }

    #[test]
    fn full_set() {
        let f = PointSet::full(12);
        assert_eq!(f.len(), 12);
        assert_eq!(f.to_indices(), (0..12).collect::<Vec<_>>());
    }
}
