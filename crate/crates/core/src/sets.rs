//! Dense bitsets over integer ids, shared by [`VertexSet`](crate::digraph::VertexSet)
//! and [`ArcSet`](crate::digraph::ArcSet).
//!
//! Sets are cheap to clone and all set algebra is exact. Operations that mix
//! sets over different universes are programming errors and panic.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::marker::PhantomData;

/// An id type that can key an [`IdSet`].
pub trait SetId: Copy + Eq + Ord + fmt::Debug {
    fn index(self) -> usize;
    fn from_index(index: usize) -> Self;
}

/// A fixed-universe bitset keyed by a typed id.
pub struct IdSet<I> {
    universe: usize,
    words: Vec<u64>,
    _marker: PhantomData<I>,
}

impl<I: SetId> IdSet<I> {
    pub fn empty(universe: usize) -> Self {
        IdSet {
            universe,
            words: vec![0; universe.div_ceil(64)],
            _marker: PhantomData,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for w in set.words.iter_mut() {
            *w = !0;
        }
        set.clear_tail();
        set
    }

    pub fn from_ids<T: IntoIterator<Item = I>>(universe: usize, ids: T) -> Self {
        let mut set = Self::empty(universe);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, id: I) -> bool {
        let i = id.index();
        assert!(i < self.universe, "id {i} out of universe {}", self.universe);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Inserts `id`, returning whether the set changed.
    pub fn insert(&mut self, id: I) -> bool {
        let i = id.index();
        assert!(i < self.universe, "id {i} out of universe {}", self.universe);
        let had = self.words[i / 64] >> (i % 64) & 1 == 1;
        self.words[i / 64] |= 1 << (i % 64);
        !had
    }

    /// Removes `id`, returning whether the set changed.
    pub fn remove(&mut self, id: I) -> bool {
        let i = id.index();
        assert!(i < self.universe, "id {i} out of universe {}", self.universe);
        let had = self.words[i / 64] >> (i % 64) & 1 == 1;
        self.words[i / 64] &= !(1 << (i % 64));
        had
    }

    /// A copy of the set with `id` inserted.
    pub fn with(&self, id: I) -> Self {
        let mut set = self.clone();
        set.insert(id);
        set
    }

    /// A copy of the set with `id` removed.
    pub fn without(&self, id: I) -> Self {
        let mut set = self.clone();
        set.remove(id);
        set
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.zip_words(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Self {
        let mut set = self.zip_words(self, |a, _| !a);
        set.clear_tail();
        set
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Iterates the members in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = I> + '_ {
        self.indices().map(I::from_index)
    }

    fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            std::iter::successors(Some(word), |w| Some(w & w.wrapping_sub(1)))
                .take_while(|&w| w != 0)
                .map(move |w| wi * 64 + w.trailing_zeros() as usize)
        })
    }

    fn zip_words(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        self.check_universe(other);
        IdSet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            _marker: PhantomData,
        }
    }

    fn check_universe(&self, other: &Self) {
        assert_eq!(
            self.universe, other.universe,
            "set universes differ: {} vs {}",
            self.universe, other.universe
        );
    }

    fn clear_tail(&mut self) {
        if !self.universe.is_multiple_of(64) {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << (self.universe % 64)) - 1;
            }
        }
    }
}

impl<I> Clone for IdSet<I> {
    fn clone(&self) -> Self {
        IdSet {
            universe: self.universe,
            words: self.words.clone(),
            _marker: PhantomData,
        }
    }
}

impl<I> PartialEq for IdSet<I> {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.words == other.words
    }
}

impl<I> Eq for IdSet<I> {}

impl<I> Hash for IdSet<I> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.universe.hash(state);
        self.words.hash(state);
    }
}

impl<I: SetId> PartialOrd for IdSet<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the ascending id sequence, so sorting a list of
/// equal-size sets yields the canonical order of their sorted id tuples.
impl<I: SetId> Ord for IdSet<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

impl<I: SetId> fmt::Debug for IdSet<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}
