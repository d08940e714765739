//! Feasibility testing and decomposition of arc sets into `k` arc-disjoint
//! rooted arborescences.
//!
//! An arc set is feasible when every non-root vertex has indegree exactly
//! `k`, the root has indegree zero, and every nonempty vertex set avoiding
//! the root has at least `k` entering arcs. Both directions come with
//! verifiable certificates: infeasibility yields a violated degree or cut,
//! feasibility yields an explicit decomposition checked by an independent
//! verifier.

use std::fmt;

use crate::digraph::{ArcId, ArcSet, Digraph, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::maxflow::max_flow_min_cut;

/// A digraph with a distinguished root and multiplicity `k`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PackingInstance {
    digraph: Digraph,
    k: usize,
    root: VertexId,
}

impl PackingInstance {
    /// The digraph must carry a root and `k` must be positive.
    pub fn new(digraph: Digraph, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroK);
        }
        let root = digraph.root().ok_or(Error::MissingRoot)?;
        Ok(PackingInstance { digraph, k, root })
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    /// Every feasible arc set has exactly `k * (n - 1)` arcs.
    pub fn required_size(&self) -> usize {
        self.k * (self.digraph.vertex_count() - 1)
    }
}

/// A checkable witness of infeasibility.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    /// A self-loop can never lie in an arborescence.
    SelfLoop { arc: ArcId },
    /// A vertex whose indegree differs from the required value.
    Degree {
        vertex: VertexId,
        indegree: usize,
        expected: usize,
    },
    /// Wrong total arc count (multiroot mode, where no per-vertex degree is
    /// prescribed).
    ArcCount { expected: usize, actual: usize },
    /// A vertex set with fewer than `k` entering arcs.
    Cut {
        set: VertexSet,
        cut_arcs: Vec<ArcId>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SelfLoop { arc } => write!(f, "arc {arc} is a self-loop"),
            Violation::Degree {
                vertex,
                indegree,
                expected,
            } => write!(
                f,
                "vertex {vertex} has indegree {indegree}, expected {expected}"
            ),
            Violation::ArcCount { expected, actual } => {
                write!(f, "arc set has {actual} arcs, expected {expected}")
            }
            Violation::Cut { set, cut_arcs } => write!(
                f,
                "vertex set {set:?} has only {} entering arcs",
                cut_arcs.len()
            ),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FeasibilityVerdict {
    violation: Option<Violation>,
}

impl FeasibilityVerdict {
    pub fn feasible() -> Self {
        FeasibilityVerdict { violation: None }
    }

    pub fn infeasible(violation: Violation) -> Self {
        FeasibilityVerdict {
            violation: Some(violation),
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.violation.is_none()
    }

    pub fn violation(&self) -> Option<&Violation> {
        self.violation.as_ref()
    }

    pub fn into_violation(self) -> Option<Violation> {
        self.violation
    }

    /// Converts an infeasible verdict into an error, for call sites that
    /// require feasibility.
    pub fn require(self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some(v) => Err(Error::Infeasible(v)),
        }
    }
}

/// Decides whether `s` partitions into `k` arc-disjoint arborescences rooted
/// at the instance root, returning a certificate on failure.
///
/// Checks run in a fixed order: self-loops, root indegree, per-vertex
/// indegrees, then one capped min-cut per non-root vertex.
pub fn check_feasible(inst: &PackingInstance, s: &ArcSet) -> FeasibilityVerdict {
    let d = inst.digraph();
    for id in s.iter() {
        if d.arc(id).is_self_loop() {
            return FeasibilityVerdict::infeasible(Violation::SelfLoop { arc: id });
        }
    }
    let root_in = d.indegree(s, inst.root());
    if root_in != 0 {
        return FeasibilityVerdict::infeasible(Violation::Degree {
            vertex: inst.root(),
            indegree: root_in,
            expected: 0,
        });
    }
    for v in d.vertices() {
        if v == inst.root() {
            continue;
        }
        let indegree = d.indegree(s, v);
        if indegree != inst.k() {
            return FeasibilityVerdict::infeasible(Violation::Degree {
                vertex: v,
                indegree,
                expected: inst.k(),
            });
        }
    }
    for v in d.vertices() {
        if v == inst.root() {
            continue;
        }
        let sinks = VertexSet::from_ids(d.vertex_count(), [v]);
        let cut = max_flow_min_cut(d, s, inst.root(), &sinks, inst.k())
            .expect("validated flow arguments");
        if cut.flow_value < inst.k() {
            let min_cut = cut.cut.expect("cut present when flow below cap");
            return FeasibilityVerdict::infeasible(Violation::Cut {
                set: min_cut.sink_side,
                cut_arcs: min_cut.cut_arcs,
            });
        }
    }
    FeasibilityVerdict::feasible()
}

/// Pure checker: is `part` an arborescence rooted at `root` spanning all
/// vertices? Independent of both the flow engine and `decompose`.
pub fn is_r_arborescence(d: &Digraph, root: VertexId, part: &ArcSet) -> bool {
    for id in part.iter() {
        if d.arc(id).is_self_loop() {
            return false;
        }
    }
    for v in d.vertices() {
        let expected = usize::from(v != root);
        if d.indegree(part, v) != expected {
            return false;
        }
    }
    // Indegrees are exact, so reachability from the root rules out cycles.
    d.reachable(part, root).len() == d.vertex_count()
}

/// If `part` is a spanning arborescence with some (unspecified) root,
/// returns that root.
pub fn arborescence_root(d: &Digraph, part: &ArcSet) -> Option<VertexId> {
    if part.len() + 1 != d.vertex_count() {
        return None;
    }
    let mut root = None;
    for v in d.vertices() {
        match d.indegree(part, v) {
            0 if root.is_none() => root = Some(v),
            1 => {}
            _ => return None,
        }
    }
    let root = root?;
    if is_r_arborescence(d, root, part) {
        Some(root)
    } else {
        None
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ArborescenceDecomposition {
    pub parts: Vec<ArcSet>,
}

/// True iff `parts` are `k` pairwise arc-disjoint spanning arborescences
/// rooted at the instance root.
pub fn verify_decomposition(inst: &PackingInstance, parts: &[ArcSet]) -> bool {
    if parts.len() != inst.k() {
        return false;
    }
    for (i, a) in parts.iter().enumerate() {
        if !is_r_arborescence(inst.digraph(), inst.root(), a) {
            return false;
        }
        for b in &parts[i + 1..] {
            if !a.is_disjoint(b) {
                return false;
            }
        }
    }
    true
}

/// Splits a feasible arc set into `k` arc-disjoint rooted arborescences.
///
/// Arborescences are peeled off one at a time: a partial arborescence grows
/// from the root, and an arc is committed only if the remaining arcs still
/// have `k - 1` arc-disjoint paths from the root to every vertex. A
/// committable arc always exists for feasible input, so failure to find one
/// is an internal error. Ties break on the lowest arc id.
pub fn decompose(inst: &PackingInstance, s: &ArcSet) -> Result<ArborescenceDecomposition> {
    check_feasible(inst, s).require()?;
    let mut parts = Vec::with_capacity(inst.k());
    let mut rest = s.clone();
    for k_rem in (2..=inst.k()).rev() {
        let part = extract_arborescence(inst.digraph(), inst.root(), &rest, k_rem)?;
        rest = rest.difference(&part);
        parts.push(part);
    }
    parts.push(rest);
    if !verify_decomposition(inst, &parts) {
        return Err(Error::Internal(
            "decomposition failed verification".to_string(),
        ));
    }
    Ok(ArborescenceDecomposition { parts })
}

/// One round of the peeling loop: returns an arborescence `a ⊆ rest` such
/// that `rest − a` still meets the cut condition at level `k_rem − 1`.
fn extract_arborescence(
    d: &Digraph,
    root: VertexId,
    rest: &ArcSet,
    k_rem: usize,
) -> Result<ArcSet> {
    debug_assert!(k_rem >= 2);
    let mut part = d.empty_arcs();
    let mut covered = VertexSet::from_ids(d.vertex_count(), [root]);
    while covered.len() < d.vertex_count() {
        let mut committed = None;
        for id in rest.difference(&part).iter() {
            let a = d.arc(id);
            if !covered.contains(a.tail) || covered.contains(a.head) {
                continue;
            }
            let remainder = rest.difference(&part).without(id);
            if cut_condition_holds(d, root, &remainder, k_rem - 1) {
                committed = Some(*a);
                break;
            }
        }
        let Some(arc) = committed else {
            return Err(Error::Internal(
                "no committable arc while peeling an arborescence".to_string(),
            ));
        };
        part.insert(arc.id);
        covered.insert(arc.head);
    }
    Ok(part)
}

/// Does every nonempty `X` avoiding the root have at least `level` arcs of
/// `f` entering it?
fn cut_condition_holds(d: &Digraph, root: VertexId, f: &ArcSet, level: usize) -> bool {
    debug_assert!(level >= 1);
    d.vertices().filter(|&v| v != root).all(|v| {
        let sinks = VertexSet::from_ids(d.vertex_count(), [v]);
        max_flow_min_cut(d, f, root, &sinks, level)
            .expect("validated flow arguments")
            .flow_value
            >= level
    })
}
