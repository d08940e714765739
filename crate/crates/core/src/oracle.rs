//! Ground-truth brute force for desk-scale instances: exhaustive feasibility
//! by decomposition search, full enumeration of the feasible family, exact
//! exchange-graph distances, and a systematic search for instances whose
//! shortest reconfiguration sequence is longer than the symmetric
//! difference.
//!
//! Everything here is deliberately independent of the flow-based engine so
//! that the two can be played against each other.

use itertools::Itertools;

use crate::digraph::{ArcId, ArcSet, Digraph, VertexId};
use crate::error::{Error, Result};
use crate::packing::{self, PackingInstance};

/// Default cap on the arc count of exhaustively enumerated instances.
pub const DEFAULT_ARC_BUDGET: usize = 12;

/// Exhaustive feasibility check: searches for an explicit partition of `s`
/// into `k` rooted arborescences, trying every assignment of arcs to parts.
///
/// Arcs entering the same vertex must land in pairwise distinct parts, so
/// the search runs over per-vertex color bijections; the first vertex is
/// pinned to cut the global color symmetry.
pub fn feasible_by_enumeration(inst: &PackingInstance, s: &ArcSet) -> bool {
    let d = inst.digraph();
    let k = inst.k();
    if s.len() != inst.required_size() {
        return false;
    }
    let mut groups: Vec<Vec<ArcId>> = vec![Vec::new(); d.vertex_count()];
    for id in s.iter() {
        let a = d.arc(id);
        if a.is_self_loop() {
            return false;
        }
        groups[a.head.0].push(id);
    }
    if !groups[inst.root().0].is_empty() {
        return false;
    }
    for v in d.vertices() {
        if v != inst.root() && groups[v.0].len() != k {
            return false;
        }
    }
    let groups: Vec<Vec<ArcId>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
    let mut classes = vec![d.empty_arcs(); k];
    assign_rooted(d, inst.root(), &groups, 0, &mut classes)
}

fn assign_rooted(
    d: &Digraph,
    root: VertexId,
    groups: &[Vec<ArcId>],
    idx: usize,
    classes: &mut Vec<ArcSet>,
) -> bool {
    if idx == groups.len() {
        return classes.iter().all(|c| packing::is_r_arborescence(d, root, c));
    }
    let k = classes.len();
    for perm in (0..k).permutations(k) {
        if idx == 0 && perm.iter().enumerate().any(|(i, &c)| i != c) {
            continue; // pin the first group to the identity
        }
        for (slot, &arc) in groups[idx].iter().enumerate() {
            classes[perm[slot]].insert(arc);
        }
        if assign_rooted(d, root, groups, idx + 1, classes) {
            return true;
        }
        for (slot, &arc) in groups[idx].iter().enumerate() {
            classes[perm[slot]].remove(arc);
        }
    }
    false
}

/// Multiroot analogue: searches for a partition of `s` into `k`
/// arborescences whose roots may differ.
pub fn feasible_by_enumeration_multiroot(d: &Digraph, k: usize, s: &ArcSet) -> bool {
    if k == 0 {
        return false;
    }
    let part_size = d.vertex_count() - 1;
    if s.len() != k * part_size {
        return false;
    }
    let mut groups: Vec<Vec<ArcId>> = vec![Vec::new(); d.vertex_count()];
    for id in s.iter() {
        let a = d.arc(id);
        if a.is_self_loop() {
            return false;
        }
        groups[a.head.0].push(id);
    }
    if groups.iter().any(|g| g.len() > k) {
        return false;
    }
    let groups: Vec<Vec<ArcId>> = groups.into_iter().filter(|g| !g.is_empty()).collect();
    let mut classes = vec![d.empty_arcs(); k];
    assign_multiroot(d, &groups, 0, &mut classes)
}

fn assign_multiroot(d: &Digraph, groups: &[Vec<ArcId>], idx: usize, classes: &mut Vec<ArcSet>) -> bool {
    if idx == groups.len() {
        return classes
            .iter()
            .all(|c| packing::arborescence_root(d, c).is_some());
    }
    let k = classes.len();
    let g = groups[idx].len();
    for colors in (0..k).permutations(g) {
        if idx == 0 && colors[0] != 0 {
            continue; // recoloring freedom: the very first arc may take color 0
        }
        for (slot, &arc) in groups[idx].iter().enumerate() {
            classes[colors[slot]].insert(arc);
        }
        if assign_multiroot(d, groups, idx + 1, classes) {
            return true;
        }
        for (slot, &arc) in groups[idx].iter().enumerate() {
            classes[colors[slot]].remove(arc);
        }
    }
    false
}

fn check_budget(d: &Digraph, budget: usize) -> Result<()> {
    if d.arc_count() > budget {
        return Err(Error::BudgetExceeded {
            arcs: d.arc_count(),
            limit: budget,
        });
    }
    Ok(())
}

/// All feasible arc sets of the instance, in canonical (sorted id tuple)
/// order. Every member is certified by the exhaustive decomposition search.
pub fn enumerate_feasible(inst: &PackingInstance, budget: usize) -> Result<Vec<ArcSet>> {
    check_budget(inst.digraph(), budget)?;
    let m = inst.digraph().arc_count();
    let size = inst.required_size();
    Ok((0..m)
        .combinations(size)
        .map(|ids| ArcSet::from_ids(m, ids.into_iter().map(ArcId)))
        .filter(|s| feasible_by_enumeration(inst, s))
        .collect())
}

/// All members of the multiroot feasible family, canonical order.
pub fn enumerate_feasible_multiroot(d: &Digraph, k: usize, budget: usize) -> Result<Vec<ArcSet>> {
    check_budget(d, budget)?;
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let m = d.arc_count();
    let size = k * (d.vertex_count() - 1);
    Ok((0..m)
        .combinations(size)
        .map(|ids| ArcSet::from_ids(m, ids.into_iter().map(ArcId)))
        .filter(|s| feasible_by_enumeration_multiroot(d, k, s))
        .collect())
}

/// Nodes are feasible arc sets; edges join sets exchanging a single arc.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    nodes: Vec<ArcSet>,
    adj: Vec<Vec<usize>>,
}

impl ExchangeGraph {
    /// `nodes` must be sorted (as produced by the enumerators).
    pub fn build(nodes: Vec<ArcSet>) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        let mut adj = vec![Vec::new(); nodes.len()];
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[i].symmetric_difference(&nodes[j]).len() == 2 {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        ExchangeGraph { nodes, adj }
    }

    pub fn nodes(&self) -> &[ArcSet] {
        &self.nodes
    }

    pub fn index_of(&self, s: &ArcSet) -> Option<usize> {
        self.nodes.binary_search(s).ok()
    }

    pub fn is_connected(&self) -> bool {
        self.nodes.len() <= 1 || self.distances(0).iter().all(Option::is_some)
    }

    /// BFS distances from `from` to every node.
    pub fn distances(&self, from: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[from] = Some(0);
        let mut queue = std::collections::VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dist[v].unwrap() + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, from: usize, to: usize) -> Option<usize> {
        self.distances(from)[to]
    }
}

/// Exact shortest reconfiguration distance between two feasible sets, by BFS
/// over the full exchange graph. `None` means the exchange graph is
/// disconnected between them, which the reconfiguration theory rules out.
pub fn exchange_distance(
    inst: &PackingInstance,
    s: &ArcSet,
    t: &ArcSet,
    budget: usize,
) -> Result<Option<usize>> {
    packing::check_feasible(inst, s).require()?;
    packing::check_feasible(inst, t).require()?;
    let graph = ExchangeGraph::build(enumerate_feasible(inst, budget)?);
    let (si, ti) = match (graph.index_of(s), graph.index_of(t)) {
        (Some(si), Some(ti)) => (si, ti),
        _ => {
            return Err(Error::Internal(
                "flow check and enumeration disagree on feasibility".to_string(),
            ))
        }
    };
    Ok(graph.distance(si, ti))
}

/// Multiroot counterpart of [`exchange_distance`].
pub fn exchange_distance_multiroot(
    d: &Digraph,
    k: usize,
    s: &ArcSet,
    t: &ArcSet,
    budget: usize,
) -> Result<Option<usize>> {
    let graph = ExchangeGraph::build(enumerate_feasible_multiroot(d, k, budget)?);
    let (si, ti) = match (graph.index_of(s), graph.index_of(t)) {
        (Some(si), Some(ti)) => (si, ti),
        _ => return Err(Error::InvalidInstance("S or T is not feasible".to_string())),
    };
    Ok(graph.distance(si, ti))
}

/// An instance whose exact exchange distance exceeds `|S \ T|`.
#[derive(Clone, Debug)]
pub struct HardWitness {
    pub digraph: Digraph,
    pub k: usize,
    pub s: ArcSet,
    pub t: ArcSet,
    pub difference: usize,
    pub distance: usize,
}

#[derive(Clone, Debug)]
pub struct HardSearchParams {
    pub k: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub max_witnesses: usize,
}

impl Default for HardSearchParams {
    fn default() -> Self {
        HardSearchParams {
            k: 2,
            min_n: 3,
            max_n: 5,
            max_witnesses: 1,
        }
    }
}

/// Systematic search for hard instances.
///
/// A witness pair can always be trimmed to the digraph `S ∪ T`, which for
/// `|S \ T| = 2` has exactly `k(n-1) + 2` arcs and indegree at least `k`
/// everywhere off the root. The scan enumerates exactly the simple digraphs
/// of that shape (ascending `n`, canonical arc order), enumerates each
/// feasible family, and compares exact exchange distances against set
/// differences. For `k = 1` the scan comes up empty: a difference-reducing
/// swap always exists there.
pub fn find_hard(params: &HardSearchParams) -> Result<Vec<HardWitness>> {
    let mut witnesses = Vec::new();
    let k = params.k;
    if k == 0 {
        return Err(Error::ZeroK);
    }
    for n in params.min_n..=params.max_n {
        let m_target = k * (n - 1) + 2;
        if m_target > DEFAULT_ARC_BUDGET {
            break;
        }
        let mut profile = vec![0usize; n];
        scan_profiles(n, k, m_target, 1, &mut profile, params, &mut witnesses)?;
        if witnesses.len() >= params.max_witnesses {
            break;
        }
    }
    Ok(witnesses)
}

fn scan_profiles(
    n: usize,
    k: usize,
    remaining: usize,
    v: usize,
    profile: &mut Vec<usize>,
    params: &HardSearchParams,
    witnesses: &mut Vec<HardWitness>,
) -> Result<()> {
    if v == n {
        if remaining == 0 {
            let choices: Vec<Vec<Vec<usize>>> = (1..n)
                .map(|u| {
                    (0..n)
                        .filter(|&t| t != u)
                        .combinations(profile[u])
                        .collect()
                })
                .collect();
            scan_tail_choices(n, k, &choices, 0, &mut Vec::new(), params, witnesses)?;
        }
        return Ok(());
    }
    for d in k..=(n - 1).min(remaining) {
        profile[v] = d;
        scan_profiles(n, k, remaining - d, v + 1, profile, params, witnesses)?;
        if witnesses.len() >= params.max_witnesses {
            return Ok(());
        }
    }
    Ok(())
}

fn scan_tail_choices(
    n: usize,
    k: usize,
    choices: &[Vec<Vec<usize>>],
    idx: usize,
    arcs: &mut Vec<(usize, usize)>,
    params: &HardSearchParams,
    witnesses: &mut Vec<HardWitness>,
) -> Result<()> {
    if idx == choices.len() {
        examine_candidate(n, k, arcs, witnesses)?;
        return Ok(());
    }
    let head = idx + 1;
    for tails in &choices[idx] {
        let before = arcs.len();
        arcs.extend(tails.iter().map(|&t| (t, head)));
        scan_tail_choices(n, k, choices, idx + 1, arcs, params, witnesses)?;
        arcs.truncate(before);
        if witnesses.len() >= params.max_witnesses {
            return Ok(());
        }
    }
    Ok(())
}

fn examine_candidate(
    n: usize,
    k: usize,
    arcs: &[(usize, usize)],
    witnesses: &mut Vec<HardWitness>,
) -> Result<()> {
    let d = Digraph::new(n, arcs, Some(0))?;
    let inst = PackingInstance::new(d, k)?;
    let nodes = enumerate_feasible(&inst, DEFAULT_ARC_BUDGET)?;
    if nodes.len() < 2 {
        return Ok(());
    }
    let graph = ExchangeGraph::build(nodes);
    for i in 0..graph.nodes().len() {
        let dist = graph.distances(i);
        for (j, &steps_to_j) in dist.iter().enumerate().skip(i + 1) {
            let p = graph.nodes()[i].difference(&graph.nodes()[j]).len();
            match steps_to_j {
                Some(steps) if steps > p => witnesses.push(HardWitness {
                    digraph: inst.digraph().clone(),
                    k,
                    s: graph.nodes()[i].clone(),
                    t: graph.nodes()[j].clone(),
                    difference: p,
                    distance: steps,
                }),
                Some(_) => {}
                None => {
                    return Err(Error::Internal(
                        "exchange graph of a feasible family is disconnected".to_string(),
                    ))
                }
            }
        }
    }
    Ok(())
}
