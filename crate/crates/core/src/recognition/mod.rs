//! Recognition of directional interval graphs.
//!
//! The pipeline builds an MPQ-tree of the underlying graph, rotates it to
//! agree with the arcs, reads off a clique order, builds the auxiliary poset
//! of that order and turns a two-dimensional realizer of it into intervals.
//! The result is checked against the input before it is returned.

pub mod chordal;
pub mod mpq;
pub mod poset;
pub mod pq;

pub use mpq::{build_mpq_tree, frontier_cliques, rotate_directional, CliqueOrder, MpqTree};
pub use poset::{
    build_auxiliary_poset, realize_intervals, realizer_of, two_dim_realizer, AuxiliaryPoset, Poset, Realizer,
};

use crate::graph::{check_arc_acyclic, MixedGraph};
use crate::intersection::build_directional_graph;
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RecognitionError {
    #[error("arcs contain a directed circuit")]
    ArcCycle,
    #[error("underlying graph is not chordal")]
    NotChordal,
    #[error("maximal cliques admit no consecutive arrangement")]
    NotIntervalGraph,
    #[error("Q-node orientation is decided by `{u}`-`{v}`, which are joined by an edge")]
    QNodeEdge { u: String, v: String },
    #[error("P-node: arcs {first:?} and {second:?} both put their subtree first")]
    PNodeTwoFirst { first: (String, String), second: (String, String) },
    #[error("P-node: arcs {first:?} and {second:?} both put their subtree last")]
    PNodeTwoLast { first: (String, String), second: (String, String) },
    #[error("P-node: arcs {into:?} and {out_of:?} put one subtree both first and last")]
    PNodeFirstAndLast { into: (String, String), out_of: (String, String) },
    #[error("auxiliary relation has a circuit through `{0}`")]
    NotPoset(String),
    #[error("auxiliary poset is not two-dimensional; forcing chain {0:?}")]
    NotTwoDimensional(Vec<(String, String)>),
    #[error("vertex `{0}` is outside its realizer block")]
    BlockMismatch(String),
    #[error("reconstructed graph differs from the input")]
    VerificationFailed,
}

impl RecognitionError {
    /// Pipeline stage that rejected the input.
    pub fn stage(&self) -> &'static str {
        use RecognitionError::*;
        match self {
            ArcCycle => "arc_acyclicity",
            NotChordal | NotIntervalGraph => "build_mpq_tree",
            QNodeEdge { .. } | PNodeTwoFirst { .. } | PNodeTwoLast { .. } | PNodeFirstAndLast { .. } => {
                "rotate_directional"
            }
            NotPoset(_) => "build_auxiliary_poset",
            NotTwoDimensional(_) => "two_dim_realizer",
            BlockMismatch(_) => "realize_intervals",
            VerificationFailed => "verify_representation",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    Accepted(Vec<Interval>),
    Rejected(RecognitionError),
}

impl Recognition {
    pub fn accepted(&self) -> bool {
        matches!(self, Recognition::Accepted(_))
    }

    pub fn representation(&self) -> Option<&[Interval]> {
        match self {
            Recognition::Accepted(ivs) => Some(ivs),
            Recognition::Rejected(_) => None,
        }
    }
}

/// Whether the directional graph of `intervals` is exactly `g`.
pub fn verify_representation(g: &MixedGraph, intervals: &[Interval]) -> bool {
    match build_directional_graph(intervals) {
        Ok(h) => h == *g,
        Err(_) => false,
    }
}

pub fn recognize(g: &MixedGraph) -> Recognition {
    match representation(g) {
        Ok(ivs) => Recognition::Accepted(ivs),
        Err(e) => Recognition::Rejected(e),
    }
}

/// Runs the pipeline up to the realized intervals without the final check.
pub fn representation_unverified(g: &MixedGraph) -> Result<Vec<Interval>, RecognitionError> {
    if !check_arc_acyclic(g) {
        return Err(RecognitionError::ArcCycle);
    }
    if g.vertex_count() == 0 {
        return Ok(vec![]);
    }
    let t = rotate_directional(build_mpq_tree(g)?, g)?;
    realize_tree(&t, g)
}

/// Clique order, auxiliary poset, realizer and intervals for a rotated tree.
pub fn realize_tree(t: &MpqTree, g: &MixedGraph) -> Result<Vec<Interval>, RecognitionError> {
    let order = frontier_cliques(t);
    let d = build_auxiliary_poset(&order, g)?;
    let r = two_dim_realizer(&d)?;
    realize_intervals(&order, &d, &r, g)
}

fn representation(g: &MixedGraph) -> Result<Vec<Interval>, RecognitionError> {
    let ivs = representation_unverified(g)?;
    if verify_representation(g, &ivs) {
        Ok(ivs)
    } else {
        Err(RecognitionError::VerificationFailed)
    }
}
