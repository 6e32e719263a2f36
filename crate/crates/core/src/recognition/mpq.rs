//! MPQ-trees: PQ-trees over the maximal cliques with every vertex stored on
//! the highest node or Q-node segment that spans exactly its cliques.

use fixedbitset::FixedBitSet;

use super::chordal::{maximal_cliques, perfect_elimination_order};
use super::pq::{PqNode, PqTree};
use super::RecognitionError;
use crate::graph::{Link, MixedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    P,
    Q,
    /// Index into the tree's clique list.
    Leaf(usize),
}

/// A vertex stored on the Q-node links `first..=last` (child positions).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub vertex: usize,
    pub first: usize,
    pub last: usize,
}

#[derive(Clone, Debug)]
pub struct MpqNode {
    pub kind: NodeKind,
    pub children: Vec<usize>,
    /// On P-nodes and leaves: vertices stored at the node. On Q-nodes:
    /// vertices stored on the link above it.
    pub vertices: Vec<usize>,
    pub segments: Vec<Segment>,
}

#[derive(Clone, Debug)]
pub struct MpqTree {
    nodes: Vec<MpqNode>,
    root: Option<usize>,
    /// Vertex sets of the maximal cliques.
    cliques: Vec<FixedBitSet>,
    /// Clique sets of the vertices.
    vertex_cliques: Vec<FixedBitSet>,
    leafsets: Vec<FixedBitSet>,
    n: usize,
}

/// Cliques in frontier order with each vertex's first and last clique
/// (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueOrder {
    pub cliques: Vec<Vec<usize>>,
    pub leftc: Vec<usize>,
    pub rightc: Vec<usize>,
}

impl CliqueOrder {
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn ids(&self, g: &MixedGraph) -> Vec<Vec<String>> {
        self.cliques.iter().map(|c| c.iter().map(|&v| g.id(v).to_string()).collect()).collect()
    }
}

fn bitset(n: usize, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    items.into_iter().for_each(|x| s.insert(x));
    s
}

fn intersects(a: &FixedBitSet, b: &FixedBitSet) -> bool {
    !a.is_disjoint(b)
}

pub fn build_mpq_tree(g: &MixedGraph) -> Result<MpqTree, RecognitionError> {
    let n = g.vertex_count();
    let adj: Vec<FixedBitSet> = g.neighbors().into_iter().map(|ns| bitset(n, ns)).collect();
    let peo = perfect_elimination_order(&adj).ok_or(RecognitionError::NotChordal)?;
    let cliques = maximal_cliques(&adj, &peo);
    let k = cliques.len();
    let vertex_cliques: Vec<FixedBitSet> =
        (0..n).map(|v| bitset(k, (0..k).filter(|&i| cliques[i].contains(v)))).collect();
    let mut pq = PqTree::new(k);
    for s in &vertex_cliques {
        if !pq.reduce(s) {
            return Err(RecognitionError::NotIntervalGraph);
        }
    }
    let mut t = MpqTree { nodes: vec![], root: None, cliques, vertex_cliques, leafsets: vec![], n };
    if let Some(r) = pq.root() {
        let root = t.convert(r);
        t.root = Some(root);
        for v in 0..n {
            t.place(v);
        }
    }
    Ok(t)
}

impl MpqTree {
    fn convert(&mut self, node: &PqNode) -> usize {
        let k = self.cliques.len();
        let (kind, kids) = match node {
            PqNode::Leaf(c) => (NodeKind::Leaf(*c), vec![]),
            PqNode::P(ch) => (NodeKind::P, ch.iter().map(|c| self.convert(c)).collect()),
            PqNode::Q(ch) => (NodeKind::Q, ch.iter().map(|c| self.convert(c)).collect()),
        };
        let mut leaves = FixedBitSet::with_capacity(k);
        if let NodeKind::Leaf(c) = kind {
            leaves.insert(c);
        }
        for &c in &kids {
            leaves.union_with(&self.leafsets[c]);
        }
        self.nodes.push(MpqNode { kind, children: kids, vertices: vec![], segments: vec![] });
        self.leafsets.push(leaves);
        self.nodes.len() - 1
    }

    fn place(&mut self, v: usize) {
        let cs = &self.vertex_cliques[v];
        let mut x = self.root.expect("placing into an empty tree");
        loop {
            if self.leafsets[x] == *cs {
                self.nodes[x].vertices.push(v);
                return;
            }
            let node = &self.nodes[x];
            if let Some(&c) = node.children.iter().find(|&&c| cs.is_subset(&self.leafsets[c])) {
                x = c;
                continue;
            }
            assert_eq!(node.kind, NodeKind::Q, "clique run of a vertex splits a P-node");
            let hits: Vec<usize> =
                (0..node.children.len()).filter(|&i| intersects(cs, &self.leafsets[node.children[i]])).collect();
            let (first, last) = (hits[0], hits[hits.len() - 1]);
            debug_assert_eq!(hits.len(), last - first + 1);
            self.nodes[x].segments.push(Segment { vertex: v, first, last });
            return;
        }
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn node(&self, x: usize) -> &MpqNode {
        &self.nodes[x]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn clique_count(&self) -> usize {
        self.cliques.len()
    }

    /// Vertices whose cliques include every leaf below `x`.
    pub fn above_set(&self, x: usize) -> FixedBitSet {
        bitset(self.n, (0..self.n).filter(|&v| self.leafsets[x].is_subset(&self.vertex_cliques[v])))
    }

    /// Vertices all of whose cliques lie below `x`.
    pub fn below_set(&self, x: usize) -> FixedBitSet {
        bitset(self.n, (0..self.n).filter(|&v| self.vertex_cliques[v].is_subset(&self.leafsets[x])))
    }

    /// Per child position, the vertices whose segment covers it.
    pub fn segment_sets(&self, x: usize) -> Vec<FixedBitSet> {
        let node = &self.nodes[x];
        let mut sets = vec![FixedBitSet::with_capacity(self.n); node.children.len()];
        for s in &node.segments {
            for set in &mut sets[s.first..=s.last] {
                set.insert(s.vertex);
            }
        }
        sets
    }

    pub fn q_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&x| self.nodes[x].kind == NodeKind::Q).collect()
    }

    pub fn reverse_q(&mut self, x: usize) {
        let node = &mut self.nodes[x];
        assert_eq!(node.kind, NodeKind::Q);
        let c = node.children.len();
        node.children.reverse();
        for s in &mut node.segments {
            (s.first, s.last) = (c - 1 - s.last, c - 1 - s.first);
        }
    }

    /// The pair `(u, v)` whose arc decides the orientation of Q-node `x`:
    /// `u` spans the first child up to position `l`, `v` starts after the
    /// first child and covers `l` and `l + 1`.
    pub fn q_witness(&self, x: usize) -> (usize, usize) {
        let sets = self.segment_sets(x);
        let l = (0..sets.len()).rev().find(|&i| intersects(&sets[0], &sets[i])).expect("Q-node without first segment");
        let mut both = sets[0].clone();
        both.intersect_with(&sets[l]);
        let u = both.ones().next().unwrap();
        let mut right = sets[l].clone();
        right.intersect_with(&sets[l + 1]);
        right.difference_with(&sets[0]);
        let v = right.ones().next().expect("Q-node without a crossing segment");
        (u, v)
    }

    /// Orients every node so that the frontier is consistent with the arcs
    /// of `g`.
    pub fn rotate(&mut self, g: &MixedGraph) -> Result<(), RecognitionError> {
        let id = |v: usize| g.id(v).to_string();
        for x in 0..self.nodes.len() {
            match self.nodes[x].kind {
                NodeKind::Leaf(_) => {}
                NodeKind::Q => {
                    let (u, v) = self.q_witness(x);
                    match g.link(u, v) {
                        Link::Forward => {}
                        Link::Backward => self.reverse_q(x),
                        Link::Edge => return Err(RecognitionError::QNodeEdge { u: id(u), v: id(v) }),
                        Link::None => unreachable!("segment vertices share a clique"),
                    }
                }
                NodeKind::P => self.rotate_p(x, g)?,
            }
        }
        Ok(())
    }

    fn rotate_p(&mut self, x: usize, g: &MixedGraph) -> Result<(), RecognitionError> {
        let above = self.above_set(x);
        let below: Vec<FixedBitSet> = self.nodes[x].children.iter().map(|&c| self.below_set(c)).collect();
        let child_of = |v: usize| below.iter().position(|b| b.contains(v));
        let mut first: Option<(usize, (usize, usize))> = None;
        let mut last: Option<(usize, (usize, usize))> = None;
        let id = |v: usize| g.id(v).to_string();
        let pair = |(a, b): (usize, usize)| (id(a), id(b));
        for (t, h) in g.arc_indices() {
            let (slot, child) = if above.contains(h) {
                match child_of(t) {
                    Some(i) => (&mut first, i),
                    None => continue,
                }
            } else if above.contains(t) {
                match child_of(h) {
                    Some(i) => (&mut last, i),
                    None => continue,
                }
            } else {
                continue;
            };
            match *slot {
                None => *slot = Some((child, (t, h))),
                Some((c, arc)) if c != child => {
                    let is_first = above.contains(h);
                    let (a, b) = (pair(arc), pair((t, h)));
                    return Err(if is_first {
                        RecognitionError::PNodeTwoFirst { first: a, second: b }
                    } else {
                        RecognitionError::PNodeTwoLast { first: a, second: b }
                    });
                }
                Some(_) => {}
            }
        }
        if let (Some((f, fa)), Some((l, la))) = (first, last) {
            if f == l {
                return Err(RecognitionError::PNodeFirstAndLast { into: pair(fa), out_of: pair(la) });
            }
        }
        let kids = self.nodes[x].children.clone();
        let mut order = Vec::with_capacity(kids.len());
        if let Some((f, _)) = first {
            order.push(kids[f]);
        }
        for (i, &c) in kids.iter().enumerate() {
            if Some(i) != first.map(|p| p.0) && Some(i) != last.map(|p| p.0) {
                order.push(c);
            }
        }
        if let Some((l, _)) = last {
            order.push(kids[l]);
        }
        self.nodes[x].children = order;
        Ok(())
    }

    pub fn frontier_leaves(&self) -> Vec<usize> {
        let mut out = vec![];
        let mut stack: Vec<usize> = self.root.into_iter().collect();
        while let Some(x) = stack.pop() {
            if let NodeKind::Leaf(c) = self.nodes[x].kind {
                out.push(c);
            }
            stack.extend(self.nodes[x].children.iter().rev());
        }
        out
    }

    pub fn frontier_cliques(&self) -> CliqueOrder {
        let order = self.frontier_leaves();
        let cliques: Vec<Vec<usize>> = order.iter().map(|&c| self.cliques[c].ones().collect()).collect();
        let mut leftc = vec![usize::MAX; self.n];
        let mut rightc = vec![0; self.n];
        for (i, c) in cliques.iter().enumerate() {
            for &v in c {
                leftc[v] = leftc[v].min(i + 1);
                rightc[v] = i + 1;
            }
        }
        CliqueOrder { cliques, leftc, rightc }
    }

    /// Checks the structural MPQ invariants; returns a description of the
    /// first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        for x in 0..self.nodes.len() {
            let node = &self.nodes[x];
            match node.kind {
                NodeKind::Leaf(c) => {
                    if self.above_set(x) != self.cliques[c] {
                        return Err(format!("leaf {x}: above-set is not its clique"));
                    }
                }
                NodeKind::P => {
                    if node.children.len() < 2 {
                        return Err(format!("P-node {x} has fewer than two children"));
                    }
                    for &c in &node.children {
                        let mut slot = self.below_set(c);
                        slot.extend(self.nodes[c].vertices.iter().copied());
                        if slot.is_clear() {
                            return Err(format!("P-node {x}: empty child slot"));
                        }
                    }
                }
                NodeKind::Q => {
                    let k = node.children.len();
                    if k < 3 {
                        return Err(format!("Q-node {x} has {k} children"));
                    }
                    let s = self.segment_sets(x);
                    if intersects(&s[0], &s[k - 1]) {
                        return Err(format!("Q-node {x}: S_1 meets S_k"));
                    }
                    let proper = |a: &FixedBitSet, b: &FixedBitSet| a.is_subset(b) && a != b;
                    if !proper(&s[0], &s[1]) || !proper(&s[k - 1], &s[k - 2]) {
                        return Err(format!("Q-node {x}: end segments not strictly nested"));
                    }
                    let b_first = self.below_set(node.children[0]);
                    let b_last = self.below_set(node.children[k - 1]);
                    if b_first.is_clear() || b_last.is_clear() {
                        return Err(format!("Q-node {x}: empty end child"));
                    }
                    for i in 1..k - 1 {
                        let mut fwd = s[i].clone();
                        fwd.intersect_with(&s[i + 1]);
                        fwd.difference_with(&s[0]);
                        let mut back = s[i - 1].clone();
                        back.intersect_with(&s[i]);
                        back.difference_with(&s[k - 1]);
                        if fwd.is_clear() || back.is_clear() {
                            return Err(format!("Q-node {x}: interior position {i} not linked"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn rotate_directional(mut t: MpqTree, g: &MixedGraph) -> Result<MpqTree, RecognitionError> {
    t.rotate(g)?;
    Ok(t)
}

pub fn frontier_cliques(t: &MpqTree) -> CliqueOrder {
    t.frontier_cliques()
}
