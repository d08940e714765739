//! Arborescence packing toolkit: decide whether an arc set of a multidigraph
//! splits into `k` arc-disjoint arborescences, produce such decompositions,
//! and transform one packing into another by single-arc exchanges so that
//! every intermediate arc set is itself a valid packing.
//!
//! The crate also ships a brute-force oracle for desk-scale verification and
//! a small extensional-matroid module demonstrating that common-basis
//! reconfigurability is not preserved under matroid union.

pub mod digraph;
pub mod error;
pub mod gen;
pub mod io;
pub mod matroid;
pub mod maxflow;
pub mod multiroot;
pub mod oracle;
pub mod packing;
pub mod reconfig;
pub mod sets;
pub mod tightset;

pub use digraph::{contains_arc, Arc, ArcId, ArcSet, Digraph, VertexId, VertexSet};
pub use error::{Error, Result};
pub use packing::{
    check_feasible, decompose, verify_decomposition, ArborescenceDecomposition,
    FeasibilityVerdict, PackingInstance, Violation,
};
pub use reconfig::{
    length_bound, pair_differences, reconfigure, reconfigure_with, verify_sequence,
    ReconfigOptions, ReconfigRun, ReconfigSequence, ReconfigStep, StepKind,
};
