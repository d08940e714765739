//! Step-by-step reconfiguration between two feasible packings.
//!
//! The difference `S \ T` is paired head-to-head with `T \ S`. Each pair i
//! gets the minimal tight set `X_i` of its incoming arc `f_i`, and an
//! auxiliary digraph `H` on the pair indices records which removals each
//! `X_i` covers: arc `(i, j)` when `X_i` contains `e_j`. `H` always has a
//! dicycle; a self-loop yields an immediately valid difference-reducing
//! swap, and otherwise an arc of `S ∩ T` can be exchanged so that the
//! shortest dicycle strictly shrinks. Iterating drives `|S \ T|` to zero
//! with at most `sum_{i=1..p} min(i, k)` exchanges.
//!
//! The engine re-derives every tight set from scratch after each exchange
//! and can additionally re-check the structural facts the argument leans on
//! (`strict_checks`, on by default); any violation aborts with an internal
//! error rather than producing an unverified sequence.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::digraph::{ArcId, ArcSet, Digraph, VertexSet};
use crate::error::{Error, Result};
use crate::packing::{check_feasible, PackingInstance};
use crate::tightset::{minimal_tight_set_trusted, TightSet};

/// One matched pair: `remove` is in `S \ T`, `add` in `T \ S`, heads equal.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct DiffPair {
    pub remove: ArcId,
    pub add: ArcId,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiffPairing {
    pairs: Vec<DiffPair>,
}

impl DiffPairing {
    pub fn pairs(&self) -> &[DiffPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Pairs `S \ T` with `T \ S` head by head.
///
/// Feasible sets give every vertex equal indegree in `S` and `T`, so the
/// per-head counts match; within one head both sides are taken in ascending
/// id order, and pairs are listed by ascending `add` id.
pub fn pair_differences(d: &Digraph, s: &ArcSet, t: &ArcSet) -> Result<DiffPairing> {
    let mut by_head: BTreeMap<usize, (Vec<ArcId>, Vec<ArcId>)> = BTreeMap::new();
    for id in s.difference(t).iter() {
        by_head.entry(d.arc(id).head.0).or_default().0.push(id);
    }
    for id in t.difference(s).iter() {
        by_head.entry(d.arc(id).head.0).or_default().1.push(id);
    }
    let mut pairs = Vec::new();
    for (head, (removes, adds)) in by_head {
        if removes.len() != adds.len() {
            return Err(Error::InvalidInstance(format!(
                "indegree at vertex {head} differs between the two arc sets"
            )));
        }
        pairs.extend(
            removes
                .into_iter()
                .zip(adds)
                .map(|(remove, add)| DiffPair { remove, add }),
        );
    }
    pairs.sort_by_key(|p| p.add);
    Ok(DiffPairing { pairs })
}

/// The auxiliary digraph over pair indices: arc `(i, j)` iff the minimal
/// tight set of `add_i` contains `remove_j` (the whole-vertex-set sentinel
/// contains every arc). Self-loops are meaningful.
#[derive(Clone, Debug)]
pub struct AuxDigraph {
    tight: Vec<TightSet>,
    adj: Vec<Vec<usize>>,
}

impl AuxDigraph {
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search(&j).is_ok()
    }

    pub fn out_neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.iter().map(|&j| (i, j)));
        }
        out
    }

    pub fn tight_set(&self, i: usize) -> &TightSet {
        &self.tight[i]
    }

    #[cfg(test)]
    fn from_arcs(order: usize, arcs: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); order];
        for &(i, j) in arcs {
            adj[i].push(j);
        }
        for nbrs in adj.iter_mut() {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        AuxDigraph {
            tight: Vec::new(),
            adj,
        }
    }
}

/// Builds the auxiliary digraph for feasible `s`, `t` and a pairing from
/// [`pair_differences`].
pub fn build_aux_digraph(
    inst: &PackingInstance,
    s: &ArcSet,
    t: &ArcSet,
    pairing: &DiffPairing,
) -> Result<AuxDigraph> {
    check_feasible(inst, s).require()?;
    check_feasible(inst, t).require()?;
    validate_pairing(inst.digraph(), s, t, pairing)?;
    build_aux_trusted(inst, s, pairing)
}

fn build_aux_trusted(
    inst: &PackingInstance,
    s: &ArcSet,
    pairing: &DiffPairing,
) -> Result<AuxDigraph> {
    let d = inst.digraph();
    let tight: Vec<TightSet> = pairing
        .pairs()
        .iter()
        .map(|p| minimal_tight_set_trusted(inst, s, p.add))
        .collect::<Result<_>>()?;
    let adj: Vec<Vec<usize>> = tight
        .iter()
        .map(|x| {
            (0..pairing.len())
                .filter(|&j| x.contains_arc(d.arc(pairing.pairs()[j].remove)))
                .collect()
        })
        .collect();
    if let Some(i) = adj.iter().position(|nbrs| nbrs.is_empty()) {
        return Err(Error::Internal(format!(
            "auxiliary digraph vertex {i} has no outgoing arc"
        )));
    }
    Ok(AuxDigraph { tight, adj })
}

fn validate_pairing(d: &Digraph, s: &ArcSet, t: &ArcSet, pairing: &DiffPairing) -> Result<()> {
    let s_minus_t = s.difference(t);
    let t_minus_s = t.difference(s);
    if pairing.len() != s_minus_t.len() {
        return Err(Error::InvalidInstance(
            "pairing does not cover the difference".into(),
        ));
    }
    let mut removes = d.empty_arcs();
    let mut adds = d.empty_arcs();
    for p in pairing.pairs() {
        if !s_minus_t.contains(p.remove) || !t_minus_s.contains(p.add) {
            return Err(Error::InvalidInstance(
                "pairing references arcs outside the difference".into(),
            ));
        }
        if d.arc(p.remove).head != d.arc(p.add).head {
            return Err(Error::InvalidInstance(
                "pairing joins arcs with different heads".into(),
            ));
        }
        if !removes.insert(p.remove) || !adds.insert(p.add) {
            return Err(Error::InvalidInstance("pairing repeats an arc".into()));
        }
    }
    Ok(())
}

/// A minimum-length dicycle of `h` as the list of visited vertices.
///
/// Self-loops count as length-1 dicycles. Ties break toward the smallest
/// start index and then the lexicographically smallest vertex sequence.
pub fn shortest_dicycle(h: &AuxDigraph) -> Result<Vec<usize>> {
    let p = h.order();
    if p == 0 {
        return Err(Error::InvalidInstance(
            "auxiliary digraph has no vertices".into(),
        ));
    }
    let mut reverse = vec![Vec::new(); p];
    for i in 0..p {
        for &j in h.out_neighbors(i) {
            reverse[j].push(i);
        }
    }
    let forward_from = |start: usize| bfs(p, start, |v| h.out_neighbors(v));
    let backward_from = |start: usize| bfs(p, start, |v| &reverse[v]);

    let mut best: Option<(usize, usize)> = None;
    for (start, into_start) in reverse.iter().enumerate() {
        let dist = forward_from(start);
        let via = into_start
            .iter()
            .filter_map(|&u| dist[u].map(|d| d + 1))
            .min();
        if let Some(len) = via {
            if best.is_none_or(|(l, _)| len < l) {
                best = Some((len, start));
            }
        }
    }
    let Some((len, start)) = best else {
        return Err(Error::Internal("auxiliary digraph has no dicycle".into()));
    };

    // Walk the layered shortest-path structure greedily; minimality of `len`
    // guarantees every valid choice extends to a full cycle.
    let dist = forward_from(start);
    let rdist = backward_from(start);
    let mut cycle = vec![start];
    let mut cur = start;
    for i in 1..len {
        let next = h
            .out_neighbors(cur)
            .iter()
            .copied()
            .find(|&v| dist[v] == Some(i) && rdist[v] == Some(len - i))
            .ok_or_else(|| Error::Internal("dicycle reconstruction stalled".into()))?;
        cycle.push(next);
        cur = next;
    }
    debug_assert!(h.has_arc(cur, start));
    Ok(cycle)
}

fn bfs<'a>(p: usize, start: usize, neighbors: impl Fn(usize) -> &'a [usize]) -> Vec<Option<usize>> {
    let mut dist = vec![None; p];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(dist[v].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum StepKind {
    /// The dicycle was a self-loop: exchange within one pair.
    SelfLoopSwap,
    /// The removed arc was itself in `S \ T`, so the difference shrank.
    CaseOneSwap,
    /// An `S ∩ T` arc made way; the difference is unchanged but the
    /// shortest dicycle strictly shrinks.
    CaseTwoSwap,
    /// Multiroot preprocessing: moves indegree toward the target profile.
    RebalanceSwap,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::SelfLoopSwap => "SelfLoopSwap",
            StepKind::CaseOneSwap => "CaseOneSwap",
            StepKind::CaseTwoSwap => "CaseTwoSwap",
            StepKind::RebalanceSwap => "RebalanceSwap",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for StepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SelfLoopSwap" => Ok(StepKind::SelfLoopSwap),
            "CaseOneSwap" => Ok(StepKind::CaseOneSwap),
            "CaseTwoSwap" => Ok(StepKind::CaseTwoSwap),
            "RebalanceSwap" => Ok(StepKind::RebalanceSwap),
            other => Err(Error::InvalidSequence(format!("unknown step kind {other:?}"))),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct ReconfigStep {
    pub remove: ArcId,
    pub add: ArcId,
    pub kind: StepKind,
}

/// An exchange walk: a start set and the arcs swapped at each step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReconfigSequence {
    start: ArcSet,
    steps: Vec<ReconfigStep>,
}

impl ReconfigSequence {
    pub fn new(start: ArcSet) -> Self {
        ReconfigSequence {
            start,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(start: ArcSet, steps: Vec<ReconfigStep>) -> Self {
        ReconfigSequence { start, steps }
    }

    pub fn start(&self) -> &ArcSet {
        &self.start
    }

    pub fn steps(&self) -> &[ReconfigStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub(crate) fn push(&mut self, step: ReconfigStep) {
        self.steps.push(step);
    }

    /// All visited arc sets, the start included.
    pub fn states(&self) -> Vec<ArcSet> {
        let mut states = vec![self.start.clone()];
        for step in &self.steps {
            let prev = states.last().unwrap();
            states.push(prev.without(step.remove).with(step.add));
        }
        states
    }

    pub fn end(&self) -> ArcSet {
        self.states().pop().unwrap()
    }
}

/// Counters for the structural re-checks performed during a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckCounts(BTreeMap<&'static str, u64>);

impl CheckCounts {
    pub(crate) fn bump(&mut self, key: &'static str) {
        *self.0.entry(key).or_insert(0) += 1;
    }

    pub fn get(&self, key: &str) -> u64 {
        self.0.get(key).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &CheckCounts) {
        for (&key, &count) in &other.0 {
            *self.0.entry(key).or_insert(0) += count;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static str, u64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }
}

#[derive(Copy, Clone, Debug)]
pub struct ReconfigOptions {
    /// Re-verify the structural facts behind every exchange (tight-set
    /// lattice, dicycle bounds, crossing locations, stability, trichotomy).
    pub strict_checks: bool,
    /// Record per-step tight sets, auxiliary arcs and the chosen dicycle.
    pub capture_trace: bool,
}

impl Default for ReconfigOptions {
    fn default() -> Self {
        ReconfigOptions {
            strict_checks: true,
            capture_trace: false,
        }
    }
}

/// Per-step diagnostics captured when `capture_trace` is set.
#[derive(Clone, Debug)]
pub struct StepTrace {
    pub pairs: Vec<DiffPair>,
    pub tight_sets: Vec<TightSet>,
    pub aux_arcs: Vec<(usize, usize)>,
    pub dicycle: Vec<usize>,
    pub step: ReconfigStep,
}

#[derive(Clone, Debug)]
pub struct ReconfigRun {
    pub sequence: ReconfigSequence,
    pub trace: Vec<StepTrace>,
    pub checks: CheckCounts,
}

/// `sum_{i=1..p} min(i, k)`: the worst-case number of exchanges needed to
/// connect two feasible sets with difference `p`.
pub fn length_bound(p: usize, k: usize) -> usize {
    if p <= k {
        p * (p + 1) / 2
    } else {
        k * (k + 1) / 2 + (p - k) * k
    }
}

/// Executes one exchange of the main loop on `s`, using the given pairing.
pub fn one_exchange(
    inst: &PackingInstance,
    s: &ArcSet,
    t: &ArcSet,
    pairing: &DiffPairing,
) -> Result<(ReconfigStep, ArcSet)> {
    check_feasible(inst, s).require()?;
    check_feasible(inst, t).require()?;
    validate_pairing(inst.digraph(), s, t, pairing)?;
    if pairing.is_empty() {
        return Err(Error::InvalidInstance(
            "nothing to exchange: the arc sets are equal".into(),
        ));
    }
    let mut engine = Engine::new(inst, t, s.clone(), pairing.clone(), ReconfigOptions::default());
    let step = engine.exchange_once()?;
    Ok((step, engine.current))
}

/// Runs exchanges until `|S \ T|` drops by one; returns the fragment and the
/// new arc set. The fragment has at most `min(|S \ T|, k)` steps.
pub fn reduce_difference(
    inst: &PackingInstance,
    s: &ArcSet,
    t: &ArcSet,
) -> Result<(Vec<ReconfigStep>, ArcSet)> {
    check_feasible(inst, s).require()?;
    check_feasible(inst, t).require()?;
    if s == t {
        return Err(Error::InvalidInstance(
            "the arc sets are already equal".into(),
        ));
    }
    let pairing = pair_differences(inst.digraph(), s, t)?;
    let mut engine = Engine::new(inst, t, s.clone(), pairing, ReconfigOptions::default());
    let steps = engine.reduce_difference()?;
    Ok((steps, engine.current))
}

/// Full reconfiguration from `s` to `t` with default options.
pub fn reconfigure(inst: &PackingInstance, s: &ArcSet, t: &ArcSet) -> Result<ReconfigSequence> {
    Ok(reconfigure_with(inst, s, t, ReconfigOptions::default())?.sequence)
}

/// Full reconfiguration with explicit options and diagnostics.
pub fn reconfigure_with(
    inst: &PackingInstance,
    s: &ArcSet,
    t: &ArcSet,
    options: ReconfigOptions,
) -> Result<ReconfigRun> {
    check_feasible(inst, s).require()?;
    check_feasible(inst, t).require()?;
    let p0 = s.difference(t).len();
    let mut sequence = ReconfigSequence::new(s.clone());
    let mut trace = Vec::new();
    let mut checks = CheckCounts::default();
    let mut current = s.clone();
    let mut remaining = p0;
    while &current != t {
        let pairing = pair_differences(inst.digraph(), &current, t)?;
        debug_assert_eq!(pairing.len(), remaining);
        let mut engine = Engine::new(inst, t, current, pairing, options);
        let steps = engine.reduce_difference()?;
        for step in steps {
            sequence.push(step);
        }
        trace.append(&mut engine.trace);
        checks.merge(&engine.checks);
        current = engine.current;
        let now = current.difference(t).len();
        if now + 1 != remaining {
            return Err(Error::Internal(format!(
                "difference went from {remaining} to {now} in one round"
            )));
        }
        remaining = now;
    }
    if sequence.len() > length_bound(p0, inst.k()) {
        return Err(Error::Internal(format!(
            "sequence length {} exceeds the bound {}",
            sequence.len(),
            length_bound(p0, inst.k())
        )));
    }
    if inst.k() == 1 && sequence.len() != p0 {
        return Err(Error::Internal(
            "k = 1 sequences must have one step per differing arc".into(),
        ));
    }
    Ok(ReconfigRun {
        sequence,
        trace,
        checks,
    })
}

/// Independent replay check: the sequence starts at `s`, ends at `t`,
/// exchanges exactly one arc per step and keeps every state feasible.
pub fn verify_sequence(
    inst: &PackingInstance,
    s: &ArcSet,
    t: &ArcSet,
    seq: &ReconfigSequence,
) -> bool {
    if seq.start() != s {
        return false;
    }
    let mut current = s.clone();
    if !check_feasible(inst, &current).is_feasible() {
        return false;
    }
    for step in seq.steps() {
        if step.remove.0 >= inst.digraph().arc_count() || step.add.0 >= inst.digraph().arc_count()
        {
            return false;
        }
        if !current.contains(step.remove) || current.contains(step.add) {
            return false;
        }
        current = current.without(step.remove).with(step.add);
        if !check_feasible(inst, &current).is_feasible() {
            return false;
        }
    }
    &current == t
}

struct Engine<'a> {
    inst: &'a PackingInstance,
    target: &'a ArcSet,
    current: ArcSet,
    pairing: DiffPairing,
    options: ReconfigOptions,
    trace: Vec<StepTrace>,
    checks: CheckCounts,
    /// Shortest dicycle length of the previous exchange, set after a
    /// CaseTwoSwap; the next dicycle must be strictly shorter.
    prev_cycle_len: Option<usize>,
}

impl<'a> Engine<'a> {
    fn new(
        inst: &'a PackingInstance,
        target: &'a ArcSet,
        current: ArcSet,
        pairing: DiffPairing,
        options: ReconfigOptions,
    ) -> Self {
        Engine {
            inst,
            target,
            current,
            pairing,
            options,
            trace: Vec::new(),
            checks: CheckCounts::default(),
            prev_cycle_len: None,
        }
    }

    fn reduce_difference(&mut self) -> Result<Vec<ReconfigStep>> {
        let p0 = self.pairing.len();
        let cap = p0.min(self.inst.k());
        let mut steps = Vec::new();
        loop {
            if steps.len() >= cap {
                return Err(Error::Internal(format!(
                    "difference not reduced within {cap} exchanges"
                )));
            }
            let step = self.exchange_once()?;
            steps.push(step);
            if step.kind != StepKind::CaseTwoSwap {
                let now = self.current.difference(self.target).len();
                if now + 1 != p0 {
                    return Err(Error::Internal(
                        "swap did not reduce the difference".into(),
                    ));
                }
                return Ok(steps);
            }
        }
    }

    fn exchange_once(&mut self) -> Result<ReconfigStep> {
        let d = self.inst.digraph();
        let p = self.pairing.len();
        let aux = build_aux_trusted(self.inst, &self.current, &self.pairing)?;
        self.checks.bump("aux_outdegree");
        let cycle = shortest_dicycle(&aux)?;
        let q = cycle.len();
        if q > p.min(self.inst.k()) {
            return Err(Error::Internal(format!(
                "dicycle length {q} exceeds min(p, k) = {}",
                p.min(self.inst.k())
            )));
        }
        self.checks.bump("dicycle_bound");
        if let Some(prev) = self.prev_cycle_len {
            if q >= prev {
                return Err(Error::Internal(format!(
                    "shortest dicycle failed to shrink: {prev} -> {q}"
                )));
            }
            self.checks.bump("dicycle_shrinks");
        }
        if self.options.strict_checks {
            self.check_aux_invariants(&aux, &cycle)?;
        }

        let step = if q == 1 {
            let pair = self.pairing.pairs()[cycle[0]];
            ReconfigStep {
                remove: pair.remove,
                add: pair.add,
                kind: StepKind::SelfLoopSwap,
            }
        } else {
            let proper = |i: usize| -> Result<&VertexSet> {
                aux.tight_set(i).as_proper().ok_or_else(|| {
                    Error::Internal("whole-set sentinel on a dicycle of length >= 2".into())
                })
            };
            let x1 = proper(cycle[0])?.clone();
            let mut y = proper(cycle[1])?.clone();
            for &i in &cycle[2..] {
                y = y.union(proper(i)?);
            }
            let pair1 = self.pairing.pairs()[cycle[0]];
            let e2 = self.pairing.pairs()[cycle[1]].remove;
            let f1_head = d.arc(pair1.add).head;
            if self.options.strict_checks {
                self.check_crossing_invariants(&x1, &y, e2, pair1.add)?;
            }
            let remove = if d.arc(e2).head == f1_head {
                e2
            } else {
                let x1_cap_y = x1.intersection(&y);
                let candidates: Vec<ArcId> = self
                    .current
                    .iter()
                    .filter(|&id| {
                        let a = d.arc(id);
                        a.head == f1_head
                            && a.tail != f1_head
                            && x1_cap_y.contains(a.tail)
                            && x1_cap_y.contains(a.head)
                    })
                    .collect();
                *candidates
                    .iter()
                    .find(|&&id| !self.target.contains(id))
                    .or_else(|| candidates.first())
                    .ok_or_else(|| {
                        Error::Internal(
                            "no replacement arc into head(f_1) inside X_1 ∩ Y".into(),
                        )
                    })?
            };
            let kind = if self.target.contains(remove) {
                StepKind::CaseTwoSwap
            } else {
                StepKind::CaseOneSwap
            };
            ReconfigStep {
                remove,
                add: pair1.add,
                kind,
            }
        };

        self.apply(step)?;
        if self.options.capture_trace {
            self.trace.push(StepTrace {
                pairs: self.pairing.pairs.clone(),
                tight_sets: aux.tight.clone(),
                aux_arcs: aux.arcs(),
                dicycle: cycle.clone(),
                step,
            });
        }

        match step.kind {
            StepKind::SelfLoopSwap => {
                self.pairing.pairs.remove(cycle[0]);
                self.prev_cycle_len = None;
            }
            StepKind::CaseOneSwap => {
                let c1 = cycle[0];
                if self.pairing.pairs[c1].remove == step.remove {
                    self.pairing.pairs.remove(c1);
                } else {
                    let j = self
                        .pairing
                        .pairs
                        .iter()
                        .position(|p| p.remove == step.remove)
                        .ok_or_else(|| {
                            Error::Internal("removed difference arc is unpaired".into())
                        })?;
                    self.pairing.pairs[c1].add = self.pairing.pairs[j].add;
                    self.pairing.pairs.remove(j);
                }
                self.prev_cycle_len = None;
            }
            StepKind::CaseTwoSwap => {
                let c1 = cycle[0];
                let old_tight = aux.tight_set(c1).clone();
                self.pairing.pairs[c1].add = step.remove;
                if self.options.strict_checks {
                    self.check_post_case_two(&aux, &old_tight, step.remove)?;
                }
                self.prev_cycle_len = Some(q);
            }
            StepKind::RebalanceSwap => unreachable!("engine never emits rebalance steps"),
        }
        Ok(step)
    }

    fn apply(&mut self, step: ReconfigStep) -> Result<()> {
        if !self.current.contains(step.remove) || self.current.contains(step.add) {
            return Err(Error::Internal("exchange references wrong arcs".into()));
        }
        let next = self.current.without(step.remove).with(step.add);
        let verdict = check_feasible(self.inst, &next);
        if let Some(violation) = verdict.violation() {
            return Err(Error::Internal(format!(
                "exchange produced an infeasible set: {violation}"
            )));
        }
        self.checks.bump("swap_feasibility");
        self.current = next;
        Ok(())
    }

    /// Pairwise intersection of adjacent tight sets plus dipath containment
    /// along the chosen dicycle's segments.
    fn check_aux_invariants(&mut self, aux: &AuxDigraph, cycle: &[usize]) -> Result<()> {
        let d = self.inst.digraph();
        for (i, j) in aux.arcs() {
            let (Some(xi), Some(xj)) = (aux.tight_set(i).as_proper(), aux.tight_set(j).as_proper())
            else {
                continue;
            };
            if xi.intersection(xj).is_empty() {
                return Err(Error::Internal(format!(
                    "adjacent tight sets X_{i} and X_{j} are disjoint"
                )));
            }
            self.checks.bump("aux_arc_intersection");
        }
        self.check_tight_lattice(aux)?;
        // Dipath containment along contiguous dicycle segments: an arc of S
        // covered by the union of a segment's tight sets is covered by one
        // of them alone.
        let q = cycle.len();
        if q >= 2 && cycle.iter().all(|&i| !aux.tight_set(i).is_whole()) {
            for lo in 0..q {
                for seg_len in 2..=q {
                    let segment: Vec<usize> =
                        (0..seg_len).map(|o| cycle[(lo + o) % q]).collect();
                    let mut union = aux.tight_set(segment[0]).as_proper().unwrap().clone();
                    for &i in &segment[1..] {
                        union = union.union(aux.tight_set(i).as_proper().unwrap());
                    }
                    for id in self.current.iter() {
                        let arc = d.arc(id);
                        if crate::digraph::contains_arc(&union, arc)
                            && !segment.iter().any(|&i| aux.tight_set(i).contains_arc(arc))
                        {
                            return Err(Error::Internal(format!(
                                "arc {id} lies in a segment union but in no single tight set"
                            )));
                        }
                    }
                    self.checks.bump("dipath_containment");
                }
            }
        }
        Ok(())
    }

    /// Lattice closure over the tight sets currently in play.
    fn check_tight_lattice(&mut self, aux: &AuxDigraph) -> Result<()> {
        let d = self.inst.digraph();
        let k = self.inst.k();
        let proper: Vec<&VertexSet> = aux
            .tight
            .iter()
            .filter_map(|t| t.as_proper())
            .collect();
        for (idx, a) in proper.iter().enumerate() {
            for b in &proper[idx + 1..] {
                if a.intersection(b).is_empty() {
                    continue;
                }
                let inter_ok = d.delta_in_count(&self.current, &a.intersection(b)) == k;
                let union_ok = d.delta_in_count(&self.current, &a.union(b)) == k;
                let no_crossing = d
                    .delta_between(&self.current, &a.difference(b), &b.difference(a))
                    .is_empty()
                    && d.delta_between(&self.current, &b.difference(a), &a.difference(b))
                        .is_empty();
                if !(inter_ok && union_ok && no_crossing) {
                    return Err(Error::Internal(
                        "tight-set lattice closure failed".into(),
                    ));
                }
                self.checks.bump("tight_lattice");
            }
        }
        Ok(())
    }

    /// `e_2` leaves `Y`; both `e_2` and `f_1` run from `X_1 \ Y` into
    /// `X_1 ∩ Y`; `Y` and `X_1 ∩ Y` are tight.
    fn check_crossing_invariants(
        &mut self,
        x1: &VertexSet,
        y: &VertexSet,
        e2: ArcId,
        f1: ArcId,
    ) -> Result<()> {
        let d = self.inst.digraph();
        let k = self.inst.k();
        let x1_cap_y = x1.intersection(y);
        if d.delta_in_count(&self.current, y) != k
            || d.delta_in_count(&self.current, &x1_cap_y) != k
        {
            return Err(Error::Internal("Y or X_1 ∩ Y is not tight".into()));
        }
        self.checks.bump("segment_tightness");
        for id in [e2, f1] {
            let a = d.arc(id);
            let from_outside = x1.difference(y);
            if !(from_outside.contains(a.tail) && x1_cap_y.contains(a.head)) {
                return Err(Error::Internal(format!(
                    "arc {id} does not run from X_1 \\ Y into X_1 ∩ Y"
                )));
            }
        }
        self.checks.bump("crossing_location");
        Ok(())
    }

    /// After a CaseTwoSwap: the minimal tight set anchored at the removed
    /// arc is unchanged, and every covered arc obeys the trichotomy
    /// (set unchanged, or covered before, or covered after).
    fn check_post_case_two(
        &mut self,
        aux: &AuxDigraph,
        old_x1: &TightSet,
        removed: ArcId,
    ) -> Result<()> {
        let d = self.inst.digraph();
        let new_x1 = minimal_tight_set_trusted(self.inst, &self.current, removed)?;
        if new_x1.kind() != old_x1.kind() {
            return Err(Error::Internal(
                "minimal tight set changed across an anchored swap".into(),
            ));
        }
        self.checks.bump("tight_set_stability");
        for (i, pair) in self.pairing.pairs().iter().enumerate() {
            let old = aux.tight_set(i);
            let new = minimal_tight_set_trusted(self.inst, &self.current, pair.add)?;
            for id in self.current.iter() {
                let arc = d.arc(id);
                if !old_x1.contains_arc(arc) {
                    continue;
                }
                if old.kind() == new.kind() || old.contains_arc(arc) || new.contains_arc(arc) {
                    self.checks.bump("trichotomy");
                } else {
                    return Err(Error::Internal(format!(
                        "trichotomy failed for pair {i} and arc {id}"
                    )));
                }
            }
        }
        Ok(())
    }
}
