//! Unit-capacity max-flow with capped augmentation and minimal min-cut
//! extraction.
//!
//! Every flow the packing algorithms need is bounded by `k + 1`, so plain
//! BFS augmenting paths are enough: each call performs at most
//! `cap_limit + 1` augmentations. Sinks are handled as a set via residual
//! reachability instead of physical contraction, which keeps arc identities
//! intact for cut certificates.

use std::collections::VecDeque;

use crate::digraph::{ArcId, ArcSet, Digraph, VertexId, VertexSet};
use crate::error::{Error, Result};

/// A minimum cut separating the sink set from the source.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinCut {
    /// The inclusion-minimal sink side: every vertex that can still reach a
    /// sink in the residual graph.
    pub sink_side: VertexSet,
    /// The arcs of `F` entering `sink_side`, ascending by id.
    pub cut_arcs: Vec<ArcId>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CutResult {
    /// Min(`max_flow`, `cap_limit + 1`).
    pub flow_value: usize,
    /// Present exactly when `flow_value <= cap_limit`.
    pub cut: Option<MinCut>,
}

/// Maximum number of arc-disjoint paths in `f` from `source` to the set
/// `sinks`, stopping early once the flow exceeds `cap_limit`.
///
/// When the flow is at most `cap_limit` the result carries the unique
/// inclusion-minimal minimum-cut sink side together with its entering arcs.
pub fn max_flow_min_cut(
    d: &Digraph,
    f: &ArcSet,
    source: VertexId,
    sinks: &VertexSet,
    cap_limit: usize,
) -> Result<CutResult> {
    if source.0 >= d.vertex_count() {
        return Err(Error::VertexOutOfRange(source.0, d.vertex_count()));
    }
    if sinks.is_empty() {
        return Err(Error::EmptySinks);
    }
    if sinks.contains(source) {
        return Err(Error::SourceInSinks(source));
    }
    if cap_limit == 0 {
        return Err(Error::ZeroCapLimit);
    }

    let n = d.vertex_count();
    // Out/in adjacency restricted to F, ascending arc ids; self-loops can
    // carry no source-to-sink flow and are left out.
    let mut out = vec![Vec::new(); n];
    let mut inc = vec![Vec::new(); n];
    for id in f.iter() {
        let a = d.arc(id);
        if !a.is_self_loop() {
            out[a.tail.0].push(id);
            inc[a.head.0].push(id);
        }
    }

    let mut used = vec![false; d.arc_count()];
    let mut flow = 0usize;

    loop {
        // BFS over the residual graph: unused arcs forward, used arcs backward.
        let mut parent: Vec<Option<(ArcId, bool)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[source.0] = true;
        let mut queue = VecDeque::from([source]);
        let mut reached: Option<VertexId> = None;
        'bfs: while let Some(v) = queue.pop_front() {
            if sinks.contains(v) {
                reached = Some(v);
                break 'bfs;
            }
            for &id in &out[v.0] {
                let w = d.arc(id).head;
                if !used[id.0] && !seen[w.0] {
                    seen[w.0] = true;
                    parent[w.0] = Some((id, true));
                    queue.push_back(w);
                }
            }
            for &id in &inc[v.0] {
                let w = d.arc(id).tail;
                if used[id.0] && !seen[w.0] {
                    seen[w.0] = true;
                    parent[w.0] = Some((id, false));
                    queue.push_back(w);
                }
            }
        }

        let Some(sink) = reached else { break };
        flow += 1;
        if flow > cap_limit {
            return Ok(CutResult {
                flow_value: cap_limit + 1,
                cut: None,
            });
        }
        let mut v = sink;
        while v != source {
            let (id, forward) = parent[v.0].expect("augmenting path is connected");
            used[id.0] = forward;
            v = if forward { d.arc(id).tail } else { d.arc(id).head };
        }
    }

    // Sink side of the minimal min cut: vertices with a residual path to a
    // sink, found by walking residual arcs backwards.
    let mut side = VertexSet::empty(n);
    let mut queue: VecDeque<VertexId> = sinks.iter().collect();
    for v in sinks.iter() {
        side.insert(v);
    }
    while let Some(w) = queue.pop_front() {
        for &id in &inc[w.0] {
            let u = d.arc(id).tail;
            if !used[id.0] && !side.contains(u) {
                side.insert(u);
                queue.push_back(u);
            }
        }
        for &id in &out[w.0] {
            let u = d.arc(id).head;
            if used[id.0] && !side.contains(u) {
                side.insert(u);
                queue.push_back(u);
            }
        }
    }
    debug_assert!(!side.contains(source), "max flow left a residual path");

    let cut_arcs = d.delta_in(f, &side);
    debug_assert_eq!(cut_arcs.len(), flow);
    Ok(CutResult {
        flow_value: flow,
        cut: Some(MinCut {
            sink_side: side,
            cut_arcs,
        }),
    })
}
