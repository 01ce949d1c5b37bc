use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of the states `0..n` of one automaton.
///
/// The universe size is fixed at construction; set operations between sets of
/// different universes panic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    bits: FixedBitSet,
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        StateSet { bits }
    }

    pub fn singleton(universe: usize, q: usize) -> Self {
        let mut s = Self::empty(universe);
        s.insert(q);
        s
    }

    pub fn from_states<I: IntoIterator<Item = usize>>(universe: usize, states: I) -> Self {
        let mut s = Self::empty(universe);
        for q in states {
            s.insert(q);
        }
        s
    }

    /// Size of the universe `n`, not the cardinality.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.bits.contains(q)
    }

    /// Returns `true` when `q` was not already present.
    pub fn insert(&mut self, q: usize) -> bool {
        !self.bits.put(q)
    }

    pub fn remove(&mut self, q: usize) -> bool {
        let was = self.bits.contains(q);
        self.bits.set(q, false);
        was
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union_with(&mut self, other: &StateSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &StateSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn complement(&self) -> StateSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        StateSet { bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Renders as `{0,2,5}`.
impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, q) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{q}")?;
        }
        f.write_str("}")
    }
}
