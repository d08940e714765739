//! Multidigraph with first-class parallel arcs and the cut/degree arithmetic
//! used throughout the crate.
//!
//! Arcs are identified by dense integer ids, never by their endpoints:
//! parallel copies of the same `(tail, head)` pair are distinct objects and
//! exchange steps must be able to tell them apart. All types are immutable
//! after construction; derived sets are new values.

use std::fmt;

use crate::error::{Error, Result};
use crate::sets::{IdSet, SetId};

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub usize);

#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ArcId(pub usize);

impl SetId for VertexId {
    fn index(self) -> usize {
        self.0
    }
    fn from_index(index: usize) -> Self {
        VertexId(index)
    }
}

impl SetId for ArcId {
    fn index(self) -> usize {
        self.0
    }
    fn from_index(index: usize) -> Self {
        ArcId(index)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type VertexSet = IdSet<VertexId>;
pub type ArcSet = IdSet<ArcId>;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct Arc {
    pub id: ArcId,
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    pub fn is_self_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// `X` contains an arc if it contains both its head and its tail.
pub fn contains_arc(x: &VertexSet, arc: &Arc) -> bool {
    x.contains(arc.tail) && x.contains(arc.head)
}

/// A digraph over vertices `0..n` with arcs listed by id.
///
/// Self-loops are representable; feasibility checks reject them because a
/// loop can never belong to an arborescence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Digraph {
    n: usize,
    arcs: Vec<Arc>,
    root: Option<VertexId>,
}

impl Digraph {
    pub fn new(n: usize, arc_pairs: &[(usize, usize)], root: Option<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("graph needs at least one vertex".into()));
        }
        let mut arcs = Vec::with_capacity(arc_pairs.len());
        for (id, &(tail, head)) in arc_pairs.iter().enumerate() {
            if tail >= n {
                return Err(Error::VertexOutOfRange(tail, n));
            }
            if head >= n {
                return Err(Error::VertexOutOfRange(head, n));
            }
            arcs.push(Arc {
                id: ArcId(id),
                tail: VertexId(tail),
                head: VertexId(head),
            });
        }
        let root = match root {
            Some(r) if r >= n => return Err(Error::VertexOutOfRange(r, n)),
            Some(r) => Some(VertexId(r)),
            None => None,
        };
        Ok(Digraph { n, arcs, root })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn root(&self) -> Option<VertexId> {
        self.root
    }

    pub fn arc(&self, id: ArcId) -> &Arc {
        &self.arcs[id.0]
    }

    pub fn try_arc(&self, id: ArcId) -> Result<&Arc> {
        self.arcs
            .get(id.0)
            .ok_or(Error::ArcOutOfRange(id.0, self.arcs.len()))
    }

    pub fn arcs(&self) -> impl Iterator<Item = &Arc> {
        self.arcs.iter()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.n).map(VertexId)
    }

    pub fn empty_arcs(&self) -> ArcSet {
        ArcSet::empty(self.arcs.len())
    }

    pub fn full_arcs(&self) -> ArcSet {
        ArcSet::full(self.arcs.len())
    }

    pub fn arc_set(&self, ids: &[usize]) -> Result<ArcSet> {
        let mut set = self.empty_arcs();
        for &id in ids {
            if id >= self.arcs.len() {
                return Err(Error::ArcOutOfRange(id, self.arcs.len()));
            }
            set.insert(ArcId(id));
        }
        Ok(set)
    }

    pub fn empty_vertices(&self) -> VertexSet {
        VertexSet::empty(self.n)
    }

    pub fn full_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn vertex_set(&self, ids: &[usize]) -> Result<VertexSet> {
        let mut set = self.empty_vertices();
        for &v in ids {
            if v >= self.n {
                return Err(Error::VertexOutOfRange(v, self.n));
            }
            set.insert(VertexId(v));
        }
        Ok(set)
    }

    /// Arcs of `f` entering `x`: tail outside, head inside. Ascending by id.
    pub fn delta_in(&self, f: &ArcSet, x: &VertexSet) -> Vec<ArcId> {
        f.iter()
            .filter(|&id| {
                let a = self.arc(id);
                !x.contains(a.tail) && x.contains(a.head)
            })
            .collect()
    }

    /// `|delta_in|` without materializing the arc list.
    pub fn delta_in_count(&self, f: &ArcSet, x: &VertexSet) -> usize {
        f.iter()
            .filter(|&id| {
                let a = self.arc(id);
                !x.contains(a.tail) && x.contains(a.head)
            })
            .count()
    }

    /// Arcs of `f` from `x` to `y`. Ascending by id.
    pub fn delta_between(&self, f: &ArcSet, x: &VertexSet, y: &VertexSet) -> Vec<ArcId> {
        f.iter()
            .filter(|&id| {
                let a = self.arc(id);
                x.contains(a.tail) && y.contains(a.head)
            })
            .collect()
    }

    /// Number of arcs of `f` entering `v` from elsewhere; self-loops at `v`
    /// do not count.
    pub fn indegree(&self, f: &ArcSet, v: VertexId) -> usize {
        f.iter()
            .filter(|&id| {
                let a = self.arc(id);
                a.head == v && a.tail != v
            })
            .count()
    }

    /// Vertices reachable from `start` using only arcs in `f`.
    pub fn reachable(&self, f: &ArcSet, start: VertexId) -> VertexSet {
        let mut seen = self.empty_vertices();
        seen.insert(start);
        let mut queue = vec![start];
        while let Some(v) = queue.pop() {
            for id in f.iter() {
                let a = self.arc(id);
                if a.tail == v && !seen.contains(a.head) {
                    seen.insert(a.head);
                    queue.push(a.head);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_cycle() -> Digraph {
        Digraph::new(2, &[(0, 1), (1, 0)], Some(0)).unwrap()
    }

    #[test]
    fn delta_in_on_two_cycle() {
        let d = two_cycle();
        let f = d.full_arcs();
        let x = d.vertex_set(&[1]).unwrap();
        assert_eq!(d.delta_in(&f, &x), vec![ArcId(0)]);
        assert_eq!(d.delta_in(&d.empty_arcs(), &x), vec![]);
    }

    #[test]
    fn delta_in_on_path() {
        // r -> a -> b, F = both arcs, X = {a, b}: only (r, a) enters.
        let d = Digraph::new(3, &[(0, 1), (1, 2)], Some(0)).unwrap();
        let f = d.full_arcs();
        let x = d.vertex_set(&[1, 2]).unwrap();
        assert_eq!(d.delta_in(&f, &x), vec![ArcId(0)]);
    }

    #[test]
    fn delta_between_cases() {
        let d = two_cycle();
        let f = d.full_arcs();
        let all = d.full_vertices();
        assert_eq!(d.delta_between(&f, &all, &all).len(), 2);
        let x = d.vertex_set(&[0]).unwrap();
        let y = d.vertex_set(&[1]).unwrap();
        assert_eq!(d.delta_between(&f, &x, &y), vec![ArcId(0)]);
    }

    #[test]
    fn contains_arc_needs_both_endpoints() {
        let d = two_cycle();
        let e = d.arc(ArcId(0));
        assert!(contains_arc(&d.full_vertices(), e));
        assert!(!contains_arc(&d.vertex_set(&[1]).unwrap(), e));
        assert!(contains_arc(&d.vertex_set(&[0, 1]).unwrap(), e));
    }

    #[test]
    fn indegree_counts_parallel_arcs() {
        // Star with a doubled arc r -> a.
        let d = Digraph::new(3, &[(0, 1), (0, 1), (0, 2)], Some(0)).unwrap();
        let f = d.full_arcs();
        assert_eq!(d.indegree(&f, VertexId(1)), 2);
        assert_eq!(d.indegree(&f, VertexId(2)), 1);
        assert_eq!(d.indegree(&d.empty_arcs(), VertexId(1)), 0);
    }

    #[test]
    fn indegree_ignores_self_loops() {
        let d = Digraph::new(2, &[(1, 1), (0, 1)], Some(0)).unwrap();
        assert_eq!(d.indegree(&d.full_arcs(), VertexId(1)), 1);
        let x = d.vertex_set(&[1]).unwrap();
        assert_eq!(d.delta_in(&d.full_arcs(), &x), vec![ArcId(1)]);
    }

    #[test]
    fn constructor_rejects_bad_ids() {
        assert!(Digraph::new(2, &[(0, 2)], Some(0)).is_err());
        assert!(Digraph::new(2, &[(0, 1)], Some(5)).is_err());
        assert!(Digraph::new(0, &[], None).is_err());
    }

    proptest! {
        /// Every arc of F falls in exactly one of the four crossing classes of X.
        #[test]
        fn crossing_partition_identity(
            n in 1usize..7,
            arcs in proptest::collection::vec((0usize..7, 0usize..7), 0..14),
            xs in proptest::collection::vec(0usize..7, 0..7),
            keep in proptest::collection::vec(proptest::bool::ANY, 14),
        ) {
            let arcs: Vec<(usize, usize)> =
                arcs.into_iter().map(|(t, h)| (t % n, h % n)).collect();
            let d = Digraph::new(n, &arcs, None).unwrap();
            let f = ArcSet::from_ids(
                arcs.len(),
                (0..arcs.len()).filter(|&i| keep[i]).map(ArcId),
            );
            let x = VertexSet::from_ids(n, xs.iter().map(|&v| VertexId(v % n)));
            let xc = x.complement();
            let total = d.delta_in(&f, &x).len()
                + d.delta_between(&f, &x, &x).len()
                + d.delta_between(&f, &x, &xc).len()
                + d.delta_between(&f, &xc, &xc).len();
            prop_assert_eq!(total, f.len());

            for v in d.vertices() {
                let single = VertexSet::from_ids(n, [v]);
                prop_assert_eq!(d.delta_in(&f, &single).len(), d.indegree(&f, v));
            }
        }
    }
}
