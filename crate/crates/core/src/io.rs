//! JSON documents for intervals, graphs, colorings, reduction instances and
//! layer matchings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cnf::Cnf;
use crate::graph::{Coloring, GraphError, MixedGraph};
use crate::intersection::{build_bidirectional_graph, build_directional_graph};
use crate::interval::{Interval, IntervalError};
use crate::reduction::{ReductionInstance, Role, Variant};
use crate::routing::LayerMatching;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("document holds neither a graph nor intervals")]
    UnknownDocument,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalsDoc {
    pub intervals: Vec<Interval>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub arcs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringDoc {
    pub colors: BTreeMap<String, u32>,
    #[serde(default)]
    pub num_colors: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub variant: Variant,
    pub cnf: Cnf,
    pub k: u32,
    pub intervals: Vec<Interval>,
    pub graph: GraphDoc,
    pub labels: BTreeMap<String, Role>,
}

impl From<&MixedGraph> for GraphDoc {
    fn from(g: &MixedGraph) -> Self {
        let pair = |(u, v): (&str, &str)| (u.to_string(), v.to_string());
        GraphDoc {
            vertices: g.ids().to_vec(),
            edges: g.edges().map(pair).collect(),
            arcs: g.arcs().map(pair).collect(),
        }
    }
}

impl TryFrom<&GraphDoc> for MixedGraph {
    type Error = GraphError;

    fn try_from(d: &GraphDoc) -> Result<Self, GraphError> {
        MixedGraph::from_parts(&d.vertices, &d.edges, &d.arcs)
    }
}

pub fn intervals_to_json(intervals: &[Interval]) -> String {
    serde_json::to_string_pretty(&IntervalsDoc { intervals: intervals.to_vec() }).expect("serializable")
}

/// Accepts `{"intervals": [...]}` or a bare array.
pub fn parse_intervals(text: &str) -> Result<Vec<Interval>, IoError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Either {
        Doc(IntervalsDoc),
        Bare(Vec<Interval>),
    }
    Ok(match serde_json::from_str(text)? {
        Either::Doc(d) => d.intervals,
        Either::Bare(v) => v,
    })
}

pub fn graph_to_json(g: &MixedGraph) -> String {
    serde_json::to_string_pretty(&GraphDoc::from(g)).expect("serializable")
}

pub fn parse_graph(text: &str) -> Result<MixedGraph, IoError> {
    let d: GraphDoc = serde_json::from_str(text)?;
    Ok(MixedGraph::try_from(&d)?)
}

pub fn coloring_to_json(c: &Coloring) -> String {
    let doc = ColoringDoc { colors: c.iter().map(|(k, v)| (k.to_string(), v)).collect(), num_colors: c.num_colors() };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn parse_coloring(text: &str) -> Result<Coloring, IoError> {
    let d: ColoringDoc = serde_json::from_str(text)?;
    Ok(Coloring::from_pairs(d.colors))
}

pub fn instance_to_json(inst: &ReductionInstance) -> String {
    let doc = InstanceDoc {
        variant: inst.variant,
        cnf: inst.cnf.clone(),
        k: inst.k,
        intervals: inst.intervals.clone(),
        graph: GraphDoc::from(&inst.graph),
        labels: inst.labels.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn parse_instance(text: &str) -> Result<ReductionInstance, IoError> {
    let d: InstanceDoc = serde_json::from_str(text)?;
    Ok(ReductionInstance {
        variant: d.variant,
        cnf: d.cnf,
        k: d.k,
        graph: MixedGraph::try_from(&d.graph)?,
        intervals: d.intervals,
        labels: d.labels,
    })
}

pub fn layers_to_json(m: &LayerMatching) -> String {
    serde_json::to_string_pretty(m).expect("serializable")
}

pub fn parse_layers(text: &str) -> Result<LayerMatching, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// A mixed graph from any document: a graph, a reduction instance, or
/// intervals. Intervals that all carry a direction give the bidirectional
/// graph, otherwise the directional one.
pub fn load_graph(text: &str) -> Result<MixedGraph, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("vertices").is_some() {
        let d: GraphDoc = serde_json::from_value(value)?;
        return Ok(MixedGraph::try_from(&d)?);
    }
    if let Some(g) = value.get("graph") {
        let d: GraphDoc = serde_json::from_value(g.clone())?;
        return Ok(MixedGraph::try_from(&d)?);
    }
    if value.get("intervals").is_some() || value.is_array() {
        let ivs = parse_intervals(text)?;
        if !ivs.is_empty() && ivs.iter().all(|iv| iv.direction.is_some()) {
            return Ok(build_bidirectional_graph(&ivs)?);
        }
        return Ok(build_directional_graph(&ivs)?);
    }
    Err(IoError::UnknownDocument)
}
