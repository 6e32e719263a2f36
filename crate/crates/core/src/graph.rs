//! Mixed graphs `G = (V, E, A)` and proper colorings.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("pair `{0}`-`{1}` is connected more than once")]
    ParallelConnection(String, String),
    #[error("arcs contain a directed circuit")]
    ArcCycle,
    #[error("coloring does not assign a color to `{0}`")]
    PartialColoring(String),
    #[error("color of `{0}` must be a positive integer")]
    NonPositiveColor(String),
}

/// How two vertices are joined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Link {
    None,
    Edge,
    /// Arc from the first queried vertex to the second.
    Forward,
    /// Arc from the second queried vertex to the first.
    Backward,
}

/// A mixed graph over string-identified vertices. Edge pairs are stored with
/// the smaller index first; arcs are ordered `(tail, head)`.
#[derive(Clone, Debug, Default)]
pub struct MixedGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
    arcs: BTreeSet<(usize, usize)>,
}

impl MixedGraph {
    pub fn new<I, S>(vertices: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut g = MixedGraph::default();
        for v in vertices {
            g.add_vertex(v)?;
        }
        Ok(g)
    }

    /// Builds a graph from id-level edge and arc lists, enforcing every invariant.
    pub fn from_parts<S: AsRef<str>>(
        vertices: &[S],
        edges: &[(S, S)],
        arcs: &[(S, S)],
    ) -> Result<Self, GraphError> {
        let mut g = MixedGraph::new(vertices.iter().map(|v| v.as_ref().to_string()))?;
        for (u, v) in edges {
            g.add_edge(u.as_ref(), v.as_ref())?;
        }
        for (u, v) in arcs {
            g.add_arc(u.as_ref(), v.as_ref())?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, id: impl Into<String>) -> Result<usize, GraphError> {
        let id = id.into();
        if self.index.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        let i = self.ids.len();
        self.index.insert(id.clone(), i);
        self.ids.push(id);
        Ok(i)
    }

    fn lookup(&self, id: &str) -> Result<usize, GraphError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    fn check_free(&self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(self.ids[u].clone()));
        }
        if self.link(u, v) != Link::None {
            return Err(GraphError::ParallelConnection(self.ids[u].clone(), self.ids[v].clone()));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<(), GraphError> {
        let (u, v) = (self.lookup(u)?, self.lookup(v)?);
        self.add_edge_idx(u, v)
    }

    pub fn add_arc(&mut self, u: &str, v: &str) -> Result<(), GraphError> {
        let (u, v) = (self.lookup(u)?, self.lookup(v)?);
        self.add_arc_idx(u, v)
    }

    pub fn add_edge_idx(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_free(u, v)?;
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn add_arc_idx(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_free(u, v)?;
        self.arcs.insert((u, v));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn arc_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arcs.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges.iter().map(|&(u, v)| (self.id(u), self.id(v)))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.arcs.iter().map(|&(u, v)| (self.id(u), self.id(v)))
    }

    pub fn link(&self, u: usize, v: usize) -> Link {
        if self.edges.contains(&(u.min(v), u.max(v))) {
            Link::Edge
        } else if self.arcs.contains(&(u, v)) {
            Link::Forward
        } else if self.arcs.contains(&(v, u)) {
            Link::Backward
        } else {
            Link::None
        }
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(&(u, v))
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.link(u, v) != Link::None
    }

    /// Dense symmetric adjacency of `U(G)`.
    pub fn adjacency_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.vertex_count();
        let mut m = vec![vec![false; n]; n];
        for &(u, v) in self.edges.iter().chain(self.arcs.iter()) {
            m[u][v] = true;
            m[v][u] = true;
        }
        m
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in self.edges.iter().chain(self.arcs.iter()) {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn out_arcs(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in &self.arcs {
            out[u].push(v);
        }
        out
    }

    pub fn in_arcs(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in &self.arcs {
            inc[v].push(u);
        }
        inc
    }

    /// Copy with the arc `(u, v)` reversed. Panics if the arc is absent.
    pub fn with_arc_flipped(&self, u: usize, v: usize) -> MixedGraph {
        let mut g = self.clone();
        assert!(g.arcs.remove(&(u, v)), "arc not present");
        g.arcs.insert((v, u));
        g
    }

    /// Topological order of the arc digraph, or `None` on a directed circuit.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let out = self.out_arcs();
        let mut indeg = vec![0usize; n];
        for &(_, v) in &self.arcs {
            indeg[v] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &out[u] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

impl PartialEq for MixedGraph {
    /// Equality on identifiers: same vertex ids, edges and arcs, regardless of
    /// insertion order.
    fn eq(&self, other: &Self) -> bool {
        if self.vertex_count() != other.vertex_count()
            || self.edges.len() != other.edges.len()
            || self.arcs.len() != other.arcs.len()
        {
            return false;
        }
        let map: Option<Vec<usize>> = self.ids.iter().map(|id| other.index_of(id)).collect();
        let Some(map) = map else { return false };
        self.edges.iter().all(|&(u, v)| other.link(map[u], map[v]) == Link::Edge)
            && self.arcs.iter().all(|&(u, v)| other.has_arc(map[u], map[v]))
    }
}

impl Eq for MixedGraph {}

/// `U(G)`: every arc replaced by an edge.
pub fn underlying_graph(g: &MixedGraph) -> MixedGraph {
    let mut u = MixedGraph {
        ids: g.ids.clone(),
        index: g.index.clone(),
        edges: g.edges.clone(),
        arcs: BTreeSet::new(),
    };
    for &(a, b) in &g.arcs {
        u.edges.insert((a.min(b), a.max(b)));
    }
    u
}

/// True iff the arcs induce no directed circuit.
pub fn check_arc_acyclic(g: &MixedGraph) -> bool {
    g.topological_order().is_some()
}

/// `G⁺`: the arc set closed under transitivity (BFS from every vertex).
///
/// A new transitive arc `u -> w` replaces an edge `u - w` if one was present,
/// so the result stays a valid mixed graph.
pub fn transitive_closure(g: &MixedGraph) -> Result<MixedGraph, GraphError> {
    if !check_arc_acyclic(g) {
        return Err(GraphError::ArcCycle);
    }
    let n = g.vertex_count();
    let out = g.out_arcs();
    let mut closed = g.clone();
    let mut seen = vec![usize::MAX; n];
    for s in 0..n {
        let mut queue = VecDeque::from([s]);
        seen[s] = s;
        while let Some(u) = queue.pop_front() {
            for &w in &out[u] {
                if seen[w] != s {
                    seen[w] = s;
                    queue.push_back(w);
                    if u != s {
                        closed.edges.remove(&(s.min(w), s.max(w)));
                        closed.arcs.insert((s, w));
                    }
                }
            }
        }
    }
    Ok(closed)
}

/// A color per vertex id. Colors are positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: BTreeMap<String, u32>,
}

impl Coloring {
    pub fn new() -> Self {
        Coloring::default()
    }

    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        Coloring { colors: pairs.into_iter().map(|(k, c)| (k.into(), c)).collect() }
    }

    pub fn set(&mut self, id: impl Into<String>, color: u32) {
        self.colors.insert(id.into(), color);
    }

    pub fn get(&self, id: &str) -> Option<u32> {
        self.colors.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> + '_ {
        self.colors.iter().map(|(k, &c)| (k.as_str(), c))
    }

    /// Largest color used, 0 for the empty coloring.
    pub fn num_colors(&self) -> u32 {
        self.colors.values().copied().max().unwrap_or(0)
    }

    /// Colors aligned with the graph's vertex indices.
    pub fn to_indexed(&self, g: &MixedGraph) -> Result<Vec<u32>, GraphError> {
        g.ids()
            .iter()
            .map(|id| {
                let c = self.get(id).ok_or_else(|| GraphError::PartialColoring(id.clone()))?;
                if c == 0 {
                    Err(GraphError::NonPositiveColor(id.clone()))
                } else {
                    Ok(c)
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Edge endpoints share a color.
    Edge { u: String, v: String, color: u32 },
    /// Arc `u -> v` with `c(u) >= c(v)`.
    Arc { u: String, v: String, cu: u32, cv: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColoringReport {
    pub proper: bool,
    pub violations: Vec<Violation>,
}

pub fn validate_coloring(g: &MixedGraph, c: &Coloring) -> Result<ColoringReport, GraphError> {
    let colors = c.to_indexed(g)?;
    let mut violations = Vec::new();
    for (u, v) in g.edge_indices() {
        if colors[u] == colors[v] {
            violations.push(Violation::Edge {
                u: g.id(u).to_string(),
                v: g.id(v).to_string(),
                color: colors[u],
            });
        }
    }
    for (u, v) in g.arc_indices() {
        if colors[u] >= colors[v] {
            violations.push(Violation::Arc {
                u: g.id(u).to_string(),
                v: g.id(v).to_string(),
                cu: colors[u],
                cv: colors[v],
            });
        }
    }
    Ok(ColoringReport { proper: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: &[&str], e: &[(&str, &str)], a: &[(&str, &str)]) -> MixedGraph {
        MixedGraph::from_parts(v, e, a).unwrap()
    }

    #[test]
    fn rejects_parallel_and_loops() {
        let mut m = MixedGraph::new(["a", "b"]).unwrap();
        m.add_arc("a", "b").unwrap();
        assert!(matches!(m.add_arc("b", "a"), Err(GraphError::ParallelConnection(..))));
        assert!(matches!(m.add_edge("a", "b"), Err(GraphError::ParallelConnection(..))));
        assert!(matches!(m.add_edge("a", "a"), Err(GraphError::SelfLoop(_))));
        assert!(matches!(m.add_edge("a", "z"), Err(GraphError::UnknownVertex(_))));
    }

    #[test]
    fn underlying_examples() {
        let m = g(&["a", "b", "c"], &[("a", "b")], &[("a", "c"), ("b", "c")]);
        let u = underlying_graph(&m);
        assert_eq!(u, g(&["a", "b", "c"], &[("a", "b"), ("a", "c"), ("b", "c")], &[]));
        let e = g(&["a", "b"], &[("a", "b")], &[]);
        assert_eq!(underlying_graph(&e), e);
        let empty = MixedGraph::default();
        assert_eq!(underlying_graph(&empty), empty);
    }

    #[test]
    fn closure_examples() {
        let m = g(&["a", "b", "c"], &[], &[("a", "b"), ("b", "c")]);
        let c = transitive_closure(&m).unwrap();
        assert_eq!(c, g(&["a", "b", "c"], &[], &[("a", "b"), ("b", "c"), ("a", "c")]));
        let e = g(&["a", "b"], &[("a", "b")], &[]);
        assert_eq!(transitive_closure(&e).unwrap(), e);
        let cyc = g(&["a", "b", "c"], &[], &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(transitive_closure(&cyc), Err(GraphError::ArcCycle));
    }

    #[test]
    fn closure_of_path_matches_floyd_warshall() {
        let names = ["p0", "p1", "p2", "p3", "p4"];
        let arcs: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
        let m = g(&names, &[], &arcs);
        let c = transitive_closure(&m).unwrap();
        // reachability by Floyd-Warshall
        let n = names.len();
        let mut r = vec![vec![false; n]; n];
        for (u, v) in m.arc_indices() {
            r[u][v] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if r[i][k] && r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
        let expected = r.iter().flatten().filter(|&&x| x).count();
        assert_eq!(expected, 10);
        assert_eq!(c.arc_count(), expected);
        for (u, v) in c.arc_indices() {
            assert!(r[u][v]);
        }
    }

    #[test]
    fn validation_examples() {
        let m = g(&["a", "b"], &[("a", "b")], &[]);
        let r = validate_coloring(&m, &Coloring::from_pairs([("a", 1), ("b", 1)])).unwrap();
        assert!(!r.proper);
        assert_eq!(r.violations.len(), 1);

        let m = g(&["a", "b"], &[], &[("a", "b")]);
        let r = validate_coloring(&m, &Coloring::from_pairs([("a", 2), ("b", 1)])).unwrap();
        assert!(!r.proper);

        let r = validate_coloring(&m, &Coloring::from_pairs([("a", 1)]));
        assert_eq!(r, Err(GraphError::PartialColoring("b".into())));
    }

    #[test]
    fn acyclicity() {
        // opposite arcs on one pair are unrepresentable, so the shortest circuit has three arcs
        assert!(!check_arc_acyclic(&g(&["a", "b", "c"], &[], &[("a", "b"), ("b", "c"), ("c", "a")])));
        assert!(check_arc_acyclic(&MixedGraph::default()));
        assert!(check_arc_acyclic(&g(&["a", "b"], &[("a", "b")], &[])));
    }
}
