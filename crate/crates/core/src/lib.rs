//! Coloring, recognition and hardness gadgets for directional and mixed
//! interval graphs.

pub mod cnf;
pub mod exact;
pub mod gen;
pub mod graph;
pub mod greedy;
pub mod intersection;
pub mod interval;
pub mod io;
pub mod rational;
pub mod recognition;
pub mod reduction;
pub mod routing;

pub use graph::{
    check_arc_acyclic, transitive_closure, underlying_graph, validate_coloring, Coloring,
    ColoringReport, GraphError, Link, MixedGraph, Violation,
};
pub use intersection::{build_bidirectional_graph, build_directional_graph, build_directional_graph_with};
pub use interval::{Direction, Interval, IntervalError, TieMode};
pub use rational::Rational;
