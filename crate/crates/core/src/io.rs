//! File formats: JSON instance and sequence schemas, instance digests, and
//! Graphviz DOT rendering of intermediate states.
//!
//! Instance files carry the digraph, `k`, an optional root (`null` selects
//! multiroot mode) and optional arc-id lists `S` and `T`. Sequence files
//! are replayable: they reference the instance by digest and list the
//! exchanged arc ids step by step.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::digraph::{ArcId, ArcSet, Digraph};
use crate::error::{Error, Result};
use crate::reconfig::{ReconfigSequence, ReconfigStep};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub root: Option<usize>,
    pub k: usize,
    /// `[tail, head]` pairs; the position is the arc id.
    pub arcs: Vec<[usize; 2]>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<usize>>,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<usize>>,
}

/// A parsed and validated instance.
#[derive(Clone, Debug)]
pub struct LoadedInstance {
    pub digraph: Digraph,
    pub k: usize,
    pub s: Option<ArcSet>,
    pub t: Option<ArcSet>,
}

impl LoadedInstance {
    pub fn is_multiroot(&self) -> bool {
        self.digraph.root().is_none()
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    Ok(serde_json::from_str(text)?)
}

/// Schema validation: ids in range, no duplicate S/T entries, and in rooted
/// mode the S/T sizes must equal `k * (n - 1)`.
pub fn validate_instance(file: &InstanceFile) -> Result<LoadedInstance> {
    if file.k == 0 {
        return Err(Error::InvalidInstance("k must be at least 1".into()));
    }
    let pairs: Vec<(usize, usize)> = file.arcs.iter().map(|&[t, h]| (t, h)).collect();
    let digraph = Digraph::new(file.n, &pairs, file.root)?;
    let arc_list = |ids: &Option<Vec<usize>>, name: &str| -> Result<Option<ArcSet>> {
        let Some(ids) = ids else { return Ok(None) };
        let set = digraph.arc_set(ids)?;
        if set.len() != ids.len() {
            return Err(Error::InvalidInstance(format!("{name} repeats an arc id")));
        }
        if file.root.is_some() && set.len() != file.k * (file.n - 1) {
            return Err(Error::InvalidInstance(format!(
                "{name} has {} arcs, expected k*(n-1) = {}",
                set.len(),
                file.k * (file.n - 1)
            )));
        }
        Ok(Some(set))
    };
    let s = arc_list(&file.s, "S")?;
    let t = arc_list(&file.t, "T")?;
    Ok(LoadedInstance {
        digraph,
        k: file.k,
        s,
        t,
    })
}

pub fn load_instance(text: &str) -> Result<LoadedInstance> {
    validate_instance(&parse_instance(text)?)
}

pub fn instance_to_file(
    d: &Digraph,
    k: usize,
    s: Option<&ArcSet>,
    t: Option<&ArcSet>,
) -> InstanceFile {
    InstanceFile {
        n: d.vertex_count(),
        root: d.root().map(|r| r.0),
        k,
        arcs: d.arcs().map(|a| [a.tail.0, a.head.0]).collect(),
        s: s.map(|set| set.iter().map(|id| id.0).collect()),
        t: t.map(|set| set.iter().map(|id| id.0).collect()),
    }
}

pub fn emit_instance(file: &InstanceFile) -> String {
    serde_json::to_string_pretty(file).expect("instance files serialize")
}

/// Hex SHA-256 of the compact canonical serialization.
pub fn instance_digest(file: &InstanceFile) -> String {
    let canonical = serde_json::to_string(file).expect("instance files serialize");
    let hash = Sha256::digest(canonical.as_bytes());
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SequenceStepFile {
    pub remove: usize,
    pub add: usize,
    pub kind: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TraceStepFile {
    /// `[remove, add]` pairs in pairing order at this step.
    pub pairs: Vec<[usize; 2]>,
    /// Minimal tight set per pair: a vertex list, or `null` for the
    /// whole-vertex-set sentinel.
    pub tight_sets: Vec<Option<Vec<usize>>>,
    pub aux_arcs: Vec<[usize; 2]>,
    pub dicycle: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SequenceFile {
    pub instance_digest: String,
    pub length: usize,
    /// Worst-case length guarantee for the instance's initial difference.
    pub bound: usize,
    pub steps: Vec<SequenceStepFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStepFile>>,
}

pub fn parse_sequence(text: &str) -> Result<SequenceFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn emit_sequence(file: &SequenceFile) -> String {
    serde_json::to_string_pretty(file).expect("sequence files serialize")
}

/// Rebuilds a replayable sequence from a file against a known start set.
pub fn sequence_from_file(
    d: &Digraph,
    start: &ArcSet,
    file: &SequenceFile,
) -> Result<ReconfigSequence> {
    let mut steps = Vec::with_capacity(file.steps.len());
    for step in &file.steps {
        if step.remove >= d.arc_count() || step.add >= d.arc_count() {
            return Err(Error::InvalidSequence(format!(
                "step references arc {} outside the instance",
                step.remove.max(step.add)
            )));
        }
        steps.push(ReconfigStep {
            remove: ArcId(step.remove),
            add: ArcId(step.add),
            kind: step.kind.parse()?,
        });
    }
    Ok(ReconfigSequence::from_steps(start.clone(), steps))
}

pub fn sequence_to_file(
    digest: String,
    bound: usize,
    seq: &ReconfigSequence,
    trace: Option<Vec<TraceStepFile>>,
) -> SequenceFile {
    SequenceFile {
        instance_digest: digest,
        length: seq.len(),
        bound,
        steps: seq
            .steps()
            .iter()
            .map(|s| SequenceStepFile {
                remove: s.remove.0,
                add: s.add.0,
                kind: s.kind.as_str().to_string(),
            })
            .collect(),
        trace,
    }
}

pub fn trace_step_file(trace: &crate::reconfig::StepTrace) -> TraceStepFile {
    TraceStepFile {
        pairs: trace.pairs.iter().map(|p| [p.remove.0, p.add.0]).collect(),
        tight_sets: trace
            .tight_sets
            .iter()
            .map(|t| t.as_proper().map(|x| x.iter().map(|v| v.0).collect()))
            .collect(),
        aux_arcs: trace.aux_arcs.iter().map(|&(i, j)| [i, j]).collect(),
        dicycle: trace.dicycle.clone(),
    }
}

/// Renders one intermediate state as DOT. The three difference classes of
/// the current set against the target get distinct styles (kept arcs thick
/// black, arcs still to remove thick gray, arcs still to add dashed); other
/// pool arcs are dotted.
pub fn state_dot(d: &Digraph, state: &ArcSet, target: &ArcSet, title: &str) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph \"{title}\" {{\n"));
    out.push_str("  rankdir=LR;\n");
    for v in d.vertices() {
        let shape = if d.root() == Some(v) {
            " [shape=doublecircle]"
        } else {
            " [shape=circle]"
        };
        out.push_str(&format!("  v{}{};\n", v.0, shape));
    }
    for arc in d.arcs() {
        let style = match (state.contains(arc.id), target.contains(arc.id)) {
            (true, true) => "color=black penwidth=2",
            (true, false) => "color=gray50 penwidth=2",
            (false, true) => "color=black style=dashed",
            (false, false) => "color=gray80 style=dotted",
        };
        out.push_str(&format!(
            "  v{} -> v{} [label=\"{}\" {}];\n",
            arc.tail.0, arc.head.0, arc.id.0, style
        ));
    }
    out.push_str("}\n");
    out
}
