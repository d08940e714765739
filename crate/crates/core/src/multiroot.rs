//! Reconfiguration of arborescence unions whose roots may differ.
//!
//! A super-root with `k - indegree(v)` parallel synthetic arcs to each `v`
//! reduces the problem to the rooted one: an arc set is a union of `k`
//! arborescences iff its hat has super-root outdegree `k` and packs into
//! `k` super-root arborescences. Reconfiguration runs in two phases: swaps
//! that move per-vertex indegrees toward the target profile (each such swap
//! also shrinks the difference), then the rooted engine on the hat, whose
//! exchanges never touch synthetic arcs and therefore project back onto
//! plain arc sets.

use crate::digraph::{ArcId, ArcSet, Digraph, VertexId, VertexSet};
use crate::error::{Error, Result};
use crate::packing::{self, FeasibilityVerdict, PackingInstance, Violation};
use crate::reconfig::{
    self, length_bound, CheckCounts, ReconfigOptions, ReconfigRun, ReconfigSequence, ReconfigStep,
    StepKind,
};
use crate::tightset;

/// The hat digraph: the base vertices plus a super-root with `k` synthetic
/// parallel arcs to every base vertex. Base arcs keep their ids; synthetic
/// arc ids start at the base arc count.
#[derive(Clone, Debug)]
pub struct HatInstance {
    inst: PackingInstance,
    base_n: usize,
    base_m: usize,
    k: usize,
}

impl HatInstance {
    pub fn build(d: &Digraph, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroK);
        }
        let base_n = d.vertex_count();
        let base_m = d.arc_count();
        let mut arcs: Vec<(usize, usize)> = d.arcs().map(|a| (a.tail.0, a.head.0)).collect();
        for v in 0..base_n {
            for _ in 0..k {
                arcs.push((base_n, v));
            }
        }
        let hat = Digraph::new(base_n + 1, &arcs, Some(base_n))?;
        Ok(HatInstance {
            inst: PackingInstance::new(hat, k)?,
            base_n,
            base_m,
            k,
        })
    }

    pub fn instance(&self) -> &PackingInstance {
        &self.inst
    }

    pub fn hat_root(&self) -> VertexId {
        VertexId(self.base_n)
    }

    pub fn is_synthetic(&self, id: ArcId) -> bool {
        id.0 >= self.base_m
    }

    fn synthetic_arc(&self, v: usize, copy: usize) -> ArcId {
        debug_assert!(copy < self.k);
        ArcId(self.base_m + v * self.k + copy)
    }

    /// Lifts a base arc set: adds the first `k - indegree(v)` synthetic
    /// copies toward each vertex. Fails if some indegree exceeds `k`.
    pub fn hat_set(&self, base: &Digraph, a: &ArcSet) -> Result<ArcSet> {
        let mut lifted = self.inst.digraph().empty_arcs();
        for id in a.iter() {
            lifted.insert(id);
        }
        for v in base.vertices() {
            let indegree = base.indegree(a, v);
            if indegree > self.k {
                return Err(Error::Infeasible(Violation::Degree {
                    vertex: v,
                    indegree,
                    expected: self.k,
                }));
            }
            for copy in 0..self.k - indegree {
                lifted.insert(self.synthetic_arc(v.0, copy));
            }
        }
        Ok(lifted)
    }

    /// Strips synthetic arcs, leaving a base arc set.
    pub fn project(&self, lifted: &ArcSet) -> ArcSet {
        ArcSet::from_ids(self.base_m, lifted.iter().filter(|id| !self.is_synthetic(*id)))
    }
}

/// Number of hat arcs entering `x` for the hat of `a`: base arcs entering
/// plus the synthetic deficit of every member vertex.
pub fn hat_cut_value(d: &Digraph, k: usize, a: &ArcSet, x: &VertexSet) -> usize {
    d.delta_in_count(a, x)
        + x.iter()
            .map(|v| k - d.indegree(a, v).min(k))
            .sum::<usize>()
}

/// Is `a` a union of `k` arc-disjoint arborescences (roots unconstrained)?
///
/// Certificates come in base terms: a self-loop, an overfull vertex, a
/// wrong total arc count, or a vertex set whose hat cut is below `k`
/// (reported with its entering base arcs).
pub fn check_feasible_multiroot(d: &Digraph, k: usize, a: &ArcSet) -> Result<FeasibilityVerdict> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    for id in a.iter() {
        if d.arc(id).is_self_loop() {
            return Ok(FeasibilityVerdict::infeasible(Violation::SelfLoop { arc: id }));
        }
    }
    for v in d.vertices() {
        let indegree = d.indegree(a, v);
        if indegree > k {
            return Ok(FeasibilityVerdict::infeasible(Violation::Degree {
                vertex: v,
                indegree,
                expected: k,
            }));
        }
    }
    let expected = k * (d.vertex_count() - 1);
    if a.len() != expected {
        return Ok(FeasibilityVerdict::infeasible(Violation::ArcCount {
            expected,
            actual: a.len(),
        }));
    }
    let hat = HatInstance::build(d, k)?;
    let lifted = hat.hat_set(d, a)?;
    match packing::check_feasible(hat.instance(), &lifted).into_violation() {
        None => Ok(FeasibilityVerdict::feasible()),
        Some(Violation::Cut { set, .. }) => {
            // The sink side never contains the super-root; restate in base terms.
            let base_set = VertexSet::from_ids(
                d.vertex_count(),
                set.iter().filter(|v| v.0 < d.vertex_count()),
            );
            debug_assert_eq!(base_set.len(), set.len());
            let cut_arcs = d.delta_in(a, &base_set);
            debug_assert!(hat_cut_value(d, k, a, &base_set) < k);
            Ok(FeasibilityVerdict::infeasible(Violation::Cut {
                set: base_set,
                cut_arcs,
            }))
        }
        Some(other) => Err(Error::Internal(format!(
            "hat check produced an unexpected violation: {other}"
        ))),
    }
}

/// Swaps arcs of `S \ T` for arcs of `T \ S` until every vertex has the
/// same indegree under `S` as under `T`. Each swap keeps the set feasible
/// and shrinks the difference by one.
pub fn rebalance_roots(
    d: &Digraph,
    k: usize,
    s: &ArcSet,
    t: &ArcSet,
) -> Result<(Vec<ReconfigStep>, ArcSet)> {
    check_feasible_multiroot(d, k, s)?.require()?;
    check_feasible_multiroot(d, k, t)?.require()?;
    let hat = HatInstance::build(d, k)?;
    let mut current = s.clone();
    let mut steps = Vec::new();
    let limit = s.difference(t).len();
    loop {
        let deficit = d
            .vertices()
            .find(|&v| d.indegree(&current, v) < d.indegree(t, v));
        let Some(v) = deficit else {
            debug_assert!(d
                .vertices()
                .all(|v| d.indegree(&current, v) == d.indegree(t, v)));
            return Ok((steps, current));
        };
        if steps.len() >= limit {
            return Err(Error::Internal(
                "root rebalancing exceeded the difference budget".into(),
            ));
        }
        let add = t
            .difference(&current)
            .iter()
            .find(|&id| d.arc(id).head == v)
            .ok_or_else(|| Error::Internal("no incoming target arc at a deficit vertex".into()))?;
        let lifted = hat.hat_set(d, &current)?;
        let tight = tightset::minimal_tight_set_trusted(hat.instance(), &lifted, add)?;
        let x = tight
            .as_proper()
            .ok_or_else(|| Error::Internal("hat tight set must exist (V itself is tight)".into()))?;
        let remove = current
            .difference(t)
            .iter()
            .find(|&id| {
                let a = d.arc(id);
                x.contains(a.tail) && x.contains(a.head)
            })
            .ok_or_else(|| {
                Error::Internal("no removable difference arc inside the tight set".into())
            })?;
        let next = current.without(remove).with(add);
        if let Some(violation) = check_feasible_multiroot(d, k, &next)?.into_violation() {
            return Err(Error::Internal(format!(
                "rebalancing swap produced an infeasible set: {violation}"
            )));
        }
        steps.push(ReconfigStep {
            remove,
            add,
            kind: StepKind::RebalanceSwap,
        });
        current = next;
    }
}

/// Full multiroot reconfiguration: rebalance indegrees, then run the rooted
/// engine on the hat and project its exchanges back.
pub fn reconfigure_multiroot(
    d: &Digraph,
    k: usize,
    s: &ArcSet,
    t: &ArcSet,
) -> Result<ReconfigSequence> {
    Ok(reconfigure_multiroot_with(d, k, s, t, ReconfigOptions::default())?.sequence)
}

pub fn reconfigure_multiroot_with(
    d: &Digraph,
    k: usize,
    s: &ArcSet,
    t: &ArcSet,
    options: ReconfigOptions,
) -> Result<ReconfigRun> {
    check_feasible_multiroot(d, k, s)?.require()?;
    check_feasible_multiroot(d, k, t)?.require()?;
    let p0 = s.difference(t).len();

    let (rebalance_steps, balanced) = rebalance_roots(d, k, s, t)?;
    let hat = HatInstance::build(d, k)?;
    let lifted_start = hat.hat_set(d, &balanced)?;
    let lifted_target = hat.hat_set(d, t)?;
    // Equal indegree profiles lift to identical synthetic arc sets, so the
    // rooted phase starts and ends with the same hat arcs.
    debug_assert_eq!(
        hat.project(&lifted_start.symmetric_difference(&lifted_target)),
        balanced.symmetric_difference(t)
    );

    let rooted = reconfigure_with(hat.instance(), &lifted_start, &lifted_target, options)?;
    let mut sequence = ReconfigSequence::new(s.clone());
    let mut checks = CheckCounts::default();
    checks.merge(&rooted.checks);
    for &step in &rebalance_steps {
        sequence.push(step);
    }
    for step in rooted.sequence.steps() {
        if hat.is_synthetic(step.remove) || hat.is_synthetic(step.add) {
            return Err(Error::Internal(
                "rooted phase touched a synthetic super-root arc".into(),
            ));
        }
        sequence.push(*step);
    }
    if options.strict_checks {
        for state in sequence.states() {
            if let Some(violation) = check_feasible_multiroot(d, k, &state)?.into_violation() {
                return Err(Error::Internal(format!(
                    "projected state is infeasible: {violation}"
                )));
            }
            checks.bump("projected_state_feasible");
        }
    }
    if sequence.len() > length_bound(p0, k) {
        return Err(Error::Internal(format!(
            "multiroot sequence length {} exceeds the bound {}",
            sequence.len(),
            length_bound(p0, k)
        )));
    }
    Ok(ReconfigRun {
        sequence,
        trace: rooted.trace,
        checks,
    })
}

fn reconfigure_with(
    inst: &PackingInstance,
    s: &ArcSet,
    t: &ArcSet,
    options: ReconfigOptions,
) -> Result<ReconfigRun> {
    reconfig::reconfigure_with(inst, s, t, options)
}

/// Replay check for multiroot sequences.
pub fn verify_sequence_multiroot(
    d: &Digraph,
    k: usize,
    s: &ArcSet,
    t: &ArcSet,
    seq: &ReconfigSequence,
) -> Result<bool> {
    if seq.start() != s {
        return Ok(false);
    }
    let mut current = s.clone();
    if !check_feasible_multiroot(d, k, &current)?.is_feasible() {
        return Ok(false);
    }
    for step in seq.steps() {
        if step.remove.0 >= d.arc_count() || step.add.0 >= d.arc_count() {
            return Ok(false);
        }
        if !current.contains(step.remove) || current.contains(step.add) {
            return Ok(false);
        }
        current = current.without(step.remove).with(step.add);
        if !check_feasible_multiroot(d, k, &current)?.is_feasible() {
            return Ok(false);
        }
    }
    Ok(&current == t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn digraph(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::new(n, arcs, None).unwrap()
    }

    #[test]
    fn hat_of_single_arc() {
        // k = 1, A' = {(u, v)}: one synthetic arc toward u, none toward v.
        let d = digraph(2, &[(0, 1)]);
        let hat = HatInstance::build(&d, 1).unwrap();
        let lifted = hat.hat_set(&d, &d.full_arcs()).unwrap();
        assert_eq!(lifted.len(), 2);
        assert!(packing::is_r_arborescence(
            hat.instance().digraph(),
            hat.hat_root(),
            &lifted
        ));
        assert_eq!(hat.project(&lifted), d.full_arcs());
    }

    #[test]
    fn hat_of_empty_set_on_one_vertex() {
        let d = digraph(1, &[]);
        let hat = HatInstance::build(&d, 1).unwrap();
        let lifted = hat.hat_set(&d, &d.empty_arcs()).unwrap();
        assert_eq!(lifted.len(), 1);
        assert!(check_feasible_multiroot(&d, 1, &d.empty_arcs())
            .unwrap()
            .is_feasible());
    }

    #[test]
    fn two_cycle_is_feasible_for_k2() {
        let d = digraph(2, &[(0, 1), (1, 0)]);
        assert!(check_feasible_multiroot(&d, 2, &d.full_arcs())
            .unwrap()
            .is_feasible());
        assert!(oracle::feasible_by_enumeration_multiroot(&d, 2, &d.full_arcs()));
    }

    #[test]
    fn certificates_come_in_base_terms() {
        let d = digraph(3, &[(0, 1), (1, 0), (2, 2)]);
        // Self-loop.
        let verdict = check_feasible_multiroot(&d, 1, &d.full_arcs()).unwrap();
        assert!(matches!(
            verdict.violation(),
            Some(Violation::SelfLoop { arc: ArcId(2) })
        ));
        // Wrong arc count.
        let verdict =
            check_feasible_multiroot(&d, 1, &d.arc_set(&[0]).unwrap()).unwrap();
        assert!(matches!(
            verdict.violation(),
            Some(Violation::ArcCount {
                expected: 2,
                actual: 1
            })
        ));
        // Cut violation: a bare 2-cycle leaves no room for a root, so the
        // pair {0, 1} has zero entering hat arcs.
        let verdict =
            check_feasible_multiroot(&d, 1, &d.arc_set(&[0, 1]).unwrap()).unwrap();
        match verdict.violation() {
            Some(Violation::Cut { set, cut_arcs }) => {
                assert_eq!(set, &d.vertex_set(&[0, 1]).unwrap());
                assert!(cut_arcs.is_empty());
                assert!(hat_cut_value(&d, 1, &d.arc_set(&[0, 1]).unwrap(), set) < 1);
            }
            other => panic!("expected cut violation, got {other:?}"),
        }
    }

    #[test]
    fn feasibility_matches_hat_equivalence_exhaustively() {
        // A' is feasible iff its hat packs with super-root outdegree k.
        let pools = [
            digraph(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]),
            digraph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 0), (2, 1)]),
        ];
        for d in &pools {
            for k in 1..=2usize {
                let hat = HatInstance::build(d, k).unwrap();
                for mask in 0u32..(1 << d.arc_count()) {
                    let a = ArcSet::from_ids(
                        d.arc_count(),
                        (0..d.arc_count()).filter(|&i| mask >> i & 1 == 1).map(ArcId),
                    );
                    let by_oracle = oracle::feasible_by_enumeration_multiroot(d, k, &a);
                    let by_check = check_feasible_multiroot(d, k, &a).unwrap().is_feasible();
                    assert_eq!(by_oracle, by_check, "k={k} a={a:?}");
                    if d.vertices().all(|v| d.indegree(&a, v) <= k) {
                        let lifted = hat.hat_set(d, &a).unwrap();
                        assert_eq!(hat.project(&lifted), a);
                        let out_k = lifted
                            .iter()
                            .filter(|&id| hat.is_synthetic(id))
                            .count()
                            == k * d.vertex_count() - a.len();
                        assert!(out_k);
                    }
                }
            }
        }
    }

    #[test]
    fn two_vertex_swap_is_one_step() {
        let d = digraph(2, &[(0, 1), (1, 0)]);
        let s = d.arc_set(&[0]).unwrap();
        let t = d.arc_set(&[1]).unwrap();
        let (steps, balanced) = rebalance_roots(&d, 1, &s, &t).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!(balanced, t);
        let seq = reconfigure_multiroot(&d, 1, &s, &t).unwrap();
        assert_eq!(seq.len(), 1);
        assert!(verify_sequence_multiroot(&d, 1, &s, &t, &seq).unwrap());
        assert_eq!(
            oracle::exchange_distance_multiroot(&d, 1, &s, &t, 12).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn equal_sets_give_an_empty_sequence() {
        let d = digraph(3, &[(0, 1), (1, 2), (2, 1), (1, 0)]);
        let s = d.arc_set(&[0, 1]).unwrap();
        let seq = reconfigure_multiroot(&d, 1, &s, &s).unwrap();
        assert!(seq.is_empty());
        assert!(verify_sequence_multiroot(&d, 1, &s, &s, &seq).unwrap());
    }

    #[test]
    fn rebalance_is_empty_when_profiles_match() {
        let d = digraph(3, &[(0, 1), (1, 2), (0, 2), (2, 1)]);
        let s = d.arc_set(&[0, 1]).unwrap();
        let (steps, balanced) = rebalance_roots(&d, 1, &s, &s).unwrap();
        assert!(steps.is_empty());
        assert_eq!(balanced, s);
    }

    #[test]
    fn three_vertex_distinct_roots_reconfigure() {
        // Rooted at 0: path 0 -> 1 -> 2; rooted at 2: path 2 -> 1 -> 0.
        let d = digraph(3, &[(0, 1), (1, 2), (2, 1), (1, 0)]);
        let s = d.arc_set(&[0, 1]).unwrap();
        let t = d.arc_set(&[2, 3]).unwrap();
        assert!(check_feasible_multiroot(&d, 1, &s).unwrap().is_feasible());
        assert!(check_feasible_multiroot(&d, 1, &t).unwrap().is_feasible());
        let seq = reconfigure_multiroot(&d, 1, &s, &t).unwrap();
        assert!(verify_sequence_multiroot(&d, 1, &s, &t, &seq).unwrap());
        assert!(seq.len() <= length_bound(2, 1));
    }

    #[test]
    fn multiroot_battery_against_oracle() {
        let pools = [
            (digraph(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]), 1usize),
            (digraph(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)]), 2usize),
            (digraph(4, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2), (0, 3)]), 1usize),
        ];
        for (d, k) in &pools {
            let nodes = oracle::enumerate_feasible_multiroot(d, *k, 12).unwrap();
            let graph = oracle::ExchangeGraph::build(nodes.clone());
            assert!(graph.is_connected());
            for (i, s) in nodes.iter().enumerate() {
                let dist = graph.distances(i);
                for (j, t) in nodes.iter().enumerate() {
                    let run = reconfigure_multiroot_with(
                        d,
                        *k,
                        s,
                        t,
                        ReconfigOptions::default(),
                    )
                    .unwrap();
                    assert!(verify_sequence_multiroot(d, *k, s, t, &run.sequence).unwrap());
                    let p = s.difference(t).len();
                    assert!(run.sequence.len() <= length_bound(p, *k));
                    assert!(dist[j].unwrap() <= run.sequence.len());
                }
            }
        }
    }
}
