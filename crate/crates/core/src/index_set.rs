use std::fmt;

/// A subset of the coordinate indices `{0, .., dim-1}` (dim ≤ 8).
///
/// Displayed 1-based, e.g. `{1,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(u8);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn full(dim: usize) -> Self {
        debug_assert!(dim <= 8);
        IndexSet(((1u16 << dim) - 1) as u8)
    }

    pub fn from_bits(bits: u8) -> Self {
        IndexSet(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn singleton(index: usize) -> Self {
        IndexSet(1 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(IndexSet::EMPTY, |acc, i| acc.with(i))
    }

    pub fn contains(self, index: usize) -> bool {
        index < 8 && self.0 & (1 << index) != 0
    }

    pub fn with(self, index: usize) -> Self {
        IndexSet(self.0 | (1 << index))
    }

    pub fn without(self, index: usize) -> Self {
        IndexSet(self.0 & !(1 << index))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, dim: usize) -> Self {
        IndexSet(!self.0 & IndexSet::full(dim).0)
    }

    pub fn union(self, other: IndexSet) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: IndexSet) -> Self {
        IndexSet(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing order (0-based).
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..8).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `{0, .., dim-1}` ordered by cardinality, then
    /// lexicographically by their sorted members.
    pub fn all_subsets(dim: usize) -> Vec<IndexSet> {
        let mut sets: Vec<IndexSet> = (0..(1u16 << dim)).map(|b| IndexSet(b as u8)).collect();
        sets.sort_by_key(|s| (s.len(), s.to_vec()));
        sets
    }

    /// All nonempty subsets, in the same canonical order.
    pub fn nonempty_subsets(dim: usize) -> Vec<IndexSet> {
        Self::all_subsets(dim).into_iter().skip(1).collect()
    }

    /// All subsets of `self`, in canonical order.
    pub fn subsets(self) -> Vec<IndexSet> {
        let mut sets: Vec<IndexSet> = (0..=self.0)
            .filter(|b| b & !self.0 == 0)
            .map(IndexSet)
            .collect();
        sets.sort_by_key(|s| (s.len(), s.to_vec()));
        sets
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let order: Vec<String> = IndexSet::nonempty_subsets(3)
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            order,
            ["{1}", "{2}", "{3}", "{1,2}", "{1,3}", "{2,3}", "{1,2,3}"]
        );
    }

    #[test]
    fn complement_and_subsets() {
        let s = IndexSet::from_indices([0, 2]);
        assert_eq!(s.complement(3), IndexSet::singleton(1));
        assert_eq!(s.subsets().len(), 4);
        assert!(IndexSet::singleton(2).is_subset_of(s));
        assert_eq!(IndexSet::EMPTY.to_string(), "{}");
    }
}
