//! Minimal tight sets: for a feasible arc set `S` and an arc `f`, the unique
//! inclusion-minimal vertex set avoiding the root that contains both ends of
//! `f` and has exactly `k` entering `S`-arcs.
//!
//! Tight sets are closed under union and intersection, which makes the
//! minimal one unique; it falls out of a single capped min-cut with the two
//! endpoints of `f` as sinks. When no tight set contains `f` (in particular
//! whenever `f` touches the root), the result is the whole-vertex-set
//! sentinel, which by convention contains every arc.

use crate::digraph::{contains_arc, Arc, ArcId, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::maxflow::max_flow_min_cut;
use crate::packing::{check_feasible, PackingInstance};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TightSetKind {
    /// A proper tight set avoiding the root.
    Proper(VertexSet),
    /// No tight set contains the anchor arc.
    WholeVertexSet,
}

/// The minimal tight set computed for an anchor arc.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TightSet {
    kind: TightSetKind,
    anchor: ArcId,
}

impl TightSet {
    pub fn kind(&self) -> &TightSetKind {
        &self.kind
    }

    pub fn anchor(&self) -> ArcId {
        self.anchor
    }

    pub fn is_whole(&self) -> bool {
        matches!(self.kind, TightSetKind::WholeVertexSet)
    }

    pub fn as_proper(&self) -> Option<&VertexSet> {
        match &self.kind {
            TightSetKind::Proper(x) => Some(x),
            TightSetKind::WholeVertexSet => None,
        }
    }

    /// The whole-vertex-set sentinel contains every arc.
    pub fn contains_arc(&self, arc: &Arc) -> bool {
        match &self.kind {
            TightSetKind::Proper(x) => contains_arc(x, arc),
            TightSetKind::WholeVertexSet => true,
        }
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        match &self.kind {
            TightSetKind::Proper(x) => x.contains(v),
            TightSetKind::WholeVertexSet => true,
        }
    }
}

/// Is `x` tight with respect to `s`, i.e. does it have exactly `k` entering
/// arcs? `x` must be nonempty and avoid the root.
pub fn is_tight(inst: &PackingInstance, s: &crate::digraph::ArcSet, x: &VertexSet) -> Result<bool> {
    if x.is_empty() {
        return Err(Error::InvalidInstance("tight set query on empty set".into()));
    }
    if x.contains(inst.root()) {
        return Err(Error::InvalidInstance(
            "tight set query on a set containing the root".into(),
        ));
    }
    Ok(inst.digraph().delta_in_count(s, x) == inst.k())
}

/// The inclusion-minimal tight set with respect to `s` containing `f`, or
/// the whole-vertex-set sentinel if none exists. Rejects infeasible `s`.
pub fn minimal_tight_set(
    inst: &PackingInstance,
    s: &crate::digraph::ArcSet,
    f: ArcId,
) -> Result<TightSet> {
    check_feasible(inst, s).require()?;
    minimal_tight_set_trusted(inst, s, f)
}

/// Same as [`minimal_tight_set`] but trusts the caller that `s` is feasible.
pub(crate) fn minimal_tight_set_trusted(
    inst: &PackingInstance,
    s: &crate::digraph::ArcSet,
    f: ArcId,
) -> Result<TightSet> {
    let d = inst.digraph();
    let arc = *d.try_arc(f)?;
    // No subset of V \ {root} can contain an arc touching the root.
    if arc.tail == inst.root() || arc.head == inst.root() {
        return Ok(TightSet {
            kind: TightSetKind::WholeVertexSet,
            anchor: f,
        });
    }
    let sinks = VertexSet::from_ids(d.vertex_count(), [arc.tail, arc.head]);
    let cut = max_flow_min_cut(d, s, inst.root(), &sinks, inst.k())?;
    if cut.flow_value > inst.k() {
        return Ok(TightSet {
            kind: TightSetKind::WholeVertexSet,
            anchor: f,
        });
    }
    debug_assert_eq!(cut.flow_value, inst.k(), "feasible sets have min cut >= k");
    let side = cut.cut.expect("cut present when flow within cap").sink_side;
    Ok(TightSet {
        kind: TightSetKind::Proper(side),
        anchor: f,
    })
}
