//! Extensional matroids on tiny ground sets, used to show that
//! reconfigurability of common bases is not preserved by matroid union:
//! a concrete pair `(M1, M2)` has a connected common-basis exchange graph
//! while `(2M1, 2M2)` splits into two components.
//!
//! Matroids are plain basis lists; every claim reduces to a finite set
//! computation, and the exchange axiom is checkable by brute force.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Named elements indexed `0..len`; at most 16 so subsets fit in a u16.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroundSet {
    names: Vec<String>,
}

impl GroundSet {
    pub fn new(names: &[&str]) -> Self {
        assert!(names.len() <= 16, "ground set too large for u16 masks");
        GroundSet {
            names: names.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// The eight-element ground set of the union counterexample.
    pub fn counterexample() -> Self {
        GroundSet::new(&["a", "b", "c1", "c2", "c3", "d1", "d2", "d3"])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn set_of(&self, names: &[&str]) -> ElemSet {
        let mut set = ElemSet::EMPTY;
        for name in names {
            let i = self
                .index_of(name)
                .unwrap_or_else(|| panic!("unknown element {name}"));
            set = set.with(i);
        }
        set
    }

    pub fn format_set(&self, set: ElemSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// A subset of a ground set as a bitmask.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElemSet(pub u16);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn with(self, index: usize) -> Self {
        ElemSet(self.0 | 1 << index)
    }

    pub fn without(self, index: usize) -> Self {
        ElemSet(self.0 & !(1 << index))
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElemSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..16).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A matroid given by the explicit list of its bases.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BasisFamily {
    ground: GroundSet,
    rank: usize,
    bases: Vec<ElemSet>,
}

impl BasisFamily {
    /// `bases` must be nonempty and equicardinal; they are deduplicated and
    /// stored sorted. The exchange axiom is not enforced here — see
    /// [`BasisFamily::satisfies_exchange_axiom`].
    pub fn new(ground: GroundSet, mut bases: Vec<ElemSet>) -> Result<Self> {
        bases.sort_unstable();
        bases.dedup();
        let Some(first) = bases.first() else {
            return Err(Error::InvalidInstance("a matroid needs at least one basis".into()));
        };
        let rank = first.len();
        if bases.iter().any(|b| b.len() != rank) {
            return Err(Error::InvalidInstance("bases must share one size".into()));
        }
        Ok(BasisFamily {
            ground,
            rank,
            bases,
        })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[ElemSet] {
        &self.bases
    }

    pub fn contains(&self, basis: ElemSet) -> bool {
        self.bases.binary_search(&basis).is_ok()
    }

    /// Brute-force check of the basis exchange axiom: for all bases `B`,
    /// `B'` and `x ∈ B \ B'` there is `y ∈ B' \ B` with `B - x + y` a basis.
    pub fn satisfies_exchange_axiom(&self) -> bool {
        self.bases.iter().all(|&b| {
            self.bases.iter().all(|&b2| {
                b.difference(b2).iter().all(|x| {
                    b2.difference(b)
                        .iter()
                        .any(|y| self.contains(b.without(x).with(y)))
                })
            })
        })
    }
}

/// First matroid of the counterexample: 3-subsets with at most one `c` and
/// at most one `d` element (the truncated direct sum of four rank-1 uniform
/// matroids).
pub fn build_m1() -> BasisFamily {
    let ground = GroundSet::counterexample();
    let c = ground.set_of(&["c1", "c2", "c3"]);
    let d = ground.set_of(&["d1", "d2", "d3"]);
    let bases = subsets_of_size(ground.len(), 3)
        .filter(|&b| b.intersection(c).len() <= 1 && b.intersection(d).len() <= 1)
        .collect();
    BasisFamily::new(ground, bases).expect("well-formed family")
}

/// Second matroid: 3-subsets meeting `{a, c1, d1}` exactly once (direct sum
/// of a rank-1 and a rank-2 uniform matroid).
pub fn build_m2() -> BasisFamily {
    let ground = GroundSet::counterexample();
    let acd = ground.set_of(&["a", "c1", "d1"]);
    let bases = subsets_of_size(ground.len(), 3)
        .filter(|&b| b.intersection(acd).len() == 1)
        .collect();
    BasisFamily::new(ground, bases).expect("well-formed family")
}

fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = ElemSet> {
    (0..n).combinations(size).map(|ids| {
        ids.into_iter()
            .fold(ElemSet::EMPTY, |set, i| set.with(i))
    })
}

/// Common bases of two families over the same ground set and rank.
pub fn common_bases(a: &BasisFamily, b: &BasisFamily) -> Result<Vec<ElemSet>> {
    if a.ground() != b.ground() || a.rank() != b.rank() {
        return Err(Error::MatroidMismatch);
    }
    Ok(a.bases()
        .iter()
        .copied()
        .filter(|&basis| b.contains(basis))
        .collect())
}

/// The matroid whose bases are unions of `k` pairwise disjoint bases of `m`.
pub fn k_fold_union(m: &BasisFamily, k: usize) -> Result<BasisFamily> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let mut unions = Vec::new();
    let mut stack = Vec::with_capacity(k);
    collect_disjoint_unions(m.bases(), k, 0, ElemSet::EMPTY, &mut stack, &mut unions);
    if unions.is_empty() {
        return Err(Error::NoDisjointBases(k));
    }
    BasisFamily::new(m.ground().clone(), unions)
}

fn collect_disjoint_unions(
    bases: &[ElemSet],
    k: usize,
    from: usize,
    acc: ElemSet,
    stack: &mut Vec<ElemSet>,
    out: &mut Vec<ElemSet>,
) {
    if stack.len() == k {
        out.push(acc);
        return;
    }
    for (i, &b) in bases.iter().enumerate().skip(from) {
        if acc.is_disjoint(b) {
            stack.push(b);
            collect_disjoint_unions(bases, k, i + 1, acc.union(b), stack, out);
            stack.pop();
        }
    }
}

/// Connectivity report of the common-basis exchange graph.
#[derive(Clone, Debug)]
pub struct RcbReport {
    pub connected: bool,
    /// Connected components, each listing its common bases in canonical
    /// order. A failing pair exhibits representatives of two components.
    pub components: Vec<Vec<ElemSet>>,
}

/// Builds the exchange graph on the common bases of `(a, b)` (edges between
/// bases differing in exactly one element) and reports its components.
pub fn rcb_holds(a: &BasisFamily, b: &BasisFamily) -> Result<RcbReport> {
    let nodes = common_bases(a, b)?;
    if nodes.is_empty() {
        return Err(Error::NoCommonBases);
    }
    let mut component_of = vec![usize::MAX; nodes.len()];
    let mut components: Vec<Vec<ElemSet>> = Vec::new();
    for start in 0..nodes.len() {
        if component_of[start] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut member_sets = Vec::new();
        let mut queue = vec![start];
        component_of[start] = id;
        while let Some(i) = queue.pop() {
            member_sets.push(nodes[i]);
            for (j, &other) in nodes.iter().enumerate() {
                if component_of[j] == usize::MAX && nodes[i].difference(other).len() == 1 {
                    component_of[j] = id;
                    queue.push(j);
                }
            }
        }
        member_sets.sort_unstable();
        components.push(member_sets);
    }
    Ok(RcbReport {
        connected: components.len() == 1,
        components,
    })
}
