//! Finite posets, the auxiliary poset of a clique order, dimension-two
//! realizers and the interval realization read off a realizer.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use super::mpq::CliqueOrder;
use super::RecognitionError;
use crate::graph::{Link, MixedGraph};
use crate::interval::Interval;
use crate::rational::Rational;

/// Strict partial order on `0..len`; `less[u]` holds every `v` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    less: Vec<FixedBitSet>,
}

impl Poset {
    /// Transitive closure of `arcs`, or `NotPoset` if they contain a circuit.
    pub fn from_arcs(labels: Vec<String>, arcs: &[(usize, usize)]) -> Result<Self, RecognitionError> {
        let n = labels.len();
        let mut out = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(u, v) in arcs {
            out[u].push(v);
            indeg[v] += 1;
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            topo.push(u);
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        if topo.len() < n {
            let culprit = (0..n).find(|&v| indeg[v] > 0).unwrap();
            return Err(RecognitionError::NotPoset(labels[culprit].clone()));
        }
        let mut less = vec![FixedBitSet::with_capacity(n); n];
        for &u in topo.iter().rev() {
            for &v in &out[u] {
                less[u].insert(v);
                let below = less[v].clone();
                less[u].union_with(&below);
            }
        }
        Ok(Poset { labels, less })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn less(&self, u: usize, v: usize) -> bool {
        self.less[u].contains(v)
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        u == v || self.less(u, v) || self.less(v, u)
    }

    pub fn relation_count(&self) -> usize {
        self.less.iter().map(|s| s.count_ones(..)).sum()
    }
}

/// Poset over the graph vertices `0..n` followed by the chains
/// `a_1..a_{k+1}` and `b_1..b_{k+1}`.
#[derive(Clone, Debug)]
pub struct AuxiliaryPoset {
    pub poset: Poset,
    pub graph_vertices: usize,
    pub cliques: usize,
}

impl AuxiliaryPoset {
    /// Index of `a_i`, `1 <= i <= k + 1`.
    pub fn a(&self, i: usize) -> usize {
        self.graph_vertices + i - 1
    }

    pub fn b(&self, i: usize) -> usize {
        self.graph_vertices + self.cliques + 1 + i - 1
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }
}

pub fn build_auxiliary_poset(order: &CliqueOrder, g: &MixedGraph) -> Result<AuxiliaryPoset, RecognitionError> {
    let n = g.vertex_count();
    let k = order.len();
    let a = |i: usize| n + i - 1;
    let b = |i: usize| n + k + 1 + i - 1;
    let mut labels: Vec<String> = g.ids().to_vec();
    labels.extend((1..=k + 1).map(|i| format!("a_{i}")));
    labels.extend((1..=k + 1).map(|i| format!("b_{i}")));
    let mut arcs = Vec::new();
    for i in 1..=k {
        arcs.push((a(i), a(i + 1)));
        arcs.push((b(i), b(i + 1)));
    }
    for v in 0..n {
        for i in 1..=order.leftc[v] {
            arcs.push((a(i), v));
        }
        for i in 1..=order.rightc[v] {
            arcs.push((b(i), v));
        }
    }
    arcs.extend(g.arc_indices());
    for u in 0..n {
        for v in 0..n {
            if u != v && g.link(u, v) == Link::None && order.rightc[u] < order.leftc[v] {
                arcs.push((u, v));
            }
        }
    }
    Ok(AuxiliaryPoset { poset: Poset::from_arcs(labels, &arcs)?, graph_vertices: n, cliques: k })
}

/// Two linear extensions whose intersection is the poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realizer {
    pub order_l: Vec<usize>,
    pub order_r: Vec<usize>,
}

impl Realizer {
    pub fn positions(order: &[usize]) -> Vec<usize> {
        let mut pos = vec![0; order.len()];
        for (i, &x) in order.iter().enumerate() {
            pos[x] = i;
        }
        pos
    }

    /// Whether `u < v` in the poset exactly when `u` precedes `v` in both.
    pub fn realizes(&self, p: &Poset) -> bool {
        let n = p.len();
        if self.order_l.len() != n || self.order_r.len() != n {
            return false;
        }
        let (pl, pr) = (Self::positions(&self.order_l), Self::positions(&self.order_r));
        (0..n).all(|u| (0..n).all(|v| u == v || p.less(u, v) == (pl[u] < pl[v] && pr[u] < pr[v])))
    }
}

/// Transitive orientation of the incomparability graph, built one implication
/// class at a time on the edges not yet oriented.
fn orient_incomparability(p: &Poset) -> Result<Vec<FixedBitSet>, RecognitionError> {
    let n = p.len();
    let mut rem = vec![FixedBitSet::with_capacity(n); n];
    for u in 0..n {
        for v in 0..n {
            if !p.comparable(u, v) {
                rem[u].insert(v);
            }
        }
    }
    let mut orient = vec![FixedBitSet::with_capacity(n); n];
    loop {
        let Some(start) = (0..n).find_map(|u| rem[u].ones().next().map(|v| (u, v))) else {
            break;
        };
        let mut class: Vec<(usize, usize)> = vec![start];
        let mut seen = vec![FixedBitSet::with_capacity(n); n];
        seen[start.0].insert(start.1);
        let mut parent: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        while let Some((x, y)) = queue.pop_front() {
            let mut next = Vec::new();
            // (x, y) forces (x, z) when y and z are not adjacent
            for z in rem[x].ones() {
                if z != y && !rem[y].contains(z) {
                    next.push((x, z));
                }
            }
            // and (w, y) when x and w are not adjacent
            for w in rem[y].ones() {
                if w != x && !rem[x].contains(w) {
                    next.push((w, y));
                }
            }
            for e in next {
                if seen[e.0].contains(e.1) {
                    continue;
                }
                seen[e.0].insert(e.1);
                parent.insert(e, (x, y));
                if seen[e.1].contains(e.0) {
                    let path = forcing_path(&parent, start, e, (e.1, e.0));
                    let names = path.into_iter().map(|(a, b)| (p.label(a).to_string(), p.label(b).to_string()));
                    return Err(RecognitionError::NotTwoDimensional(names.collect()));
                }
                class.push(e);
                queue.push_back(e);
            }
        }
        for (x, y) in class {
            orient[x].insert(y);
            rem[x].set(y, false);
            rem[y].set(x, false);
        }
    }
    Ok(orient)
}

/// Forcing chain from `start` to `e`, then from `rev` back to `start`.
fn forcing_path(
    parent: &HashMap<(usize, usize), (usize, usize)>,
    start: (usize, usize),
    e: (usize, usize),
    rev: (usize, usize),
) -> Vec<(usize, usize)> {
    let trace = |mut cur: (usize, usize)| {
        let mut out = vec![cur];
        while cur != start {
            cur = parent[&cur];
            out.push(cur);
        }
        out
    };
    let mut path = trace(e);
    path.reverse();
    path.extend(trace(rev));
    path
}

fn linear_order(p: &Poset, extra: &[FixedBitSet], flipped: bool) -> Vec<usize> {
    let n = p.len();
    let mut preds = vec![0usize; n];
    for u in 0..n {
        for v in 0..n {
            let forced = if flipped { extra[v].contains(u) } else { extra[u].contains(v) };
            if p.less(u, v) || forced {
                preds[v] += 1;
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| preds[v]);
    order
}

/// A realizer of any poset of dimension at most two.
pub fn realizer_of(p: &Poset) -> Result<Realizer, RecognitionError> {
    let f = orient_incomparability(p)?;
    let r = Realizer { order_l: linear_order(p, &f, false), order_r: linear_order(p, &f, true) };
    if !r.realizes(p) {
        return Err(RecognitionError::NotTwoDimensional(vec![]));
    }
    Ok(r)
}

/// Realizer of the auxiliary poset with the `b` chain placed before the `a`
/// chain in `L`.
pub fn two_dim_realizer(d: &AuxiliaryPoset) -> Result<Realizer, RecognitionError> {
    let mut r = realizer_of(&d.poset)?;
    let pl = Realizer::positions(&r.order_l);
    if pl[d.b(d.cliques + 1)] > pl[d.a(1)] {
        std::mem::swap(&mut r.order_l, &mut r.order_r);
    }
    Ok(r)
}

/// Vertices of `0..n` grouped by the number of chain elements before them.
fn blocks(order: &[usize], n: usize, chain: impl Fn(usize) -> usize, k: usize) -> Vec<Vec<usize>> {
    let pos = Realizer::positions(order);
    let mut out = vec![Vec::new(); k + 2];
    for &x in order {
        if x < n {
            let c = (1..=k + 1).filter(|&i| pos[chain(i)] < pos[x]).count();
            out[c].push(x);
        }
    }
    out
}

pub fn realize_intervals(
    order: &CliqueOrder,
    d: &AuxiliaryPoset,
    r: &Realizer,
    g: &MixedGraph,
) -> Result<Vec<Interval>, RecognitionError> {
    let n = d.graph_vertices;
    let k = d.cliques;
    let lb = blocks(&r.order_l, n, |i| d.a(i), k);
    let rb = blocks(&r.order_r, n, |i| d.b(i), k);
    let half = Rational::new(1, 2);
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        let (lc, rc) = (order.leftc[v], order.rightc[v]);
        let (Some(i), Some(j)) = (lb[lc].iter().position(|&x| x == v), rb[rc].iter().position(|&x| x == v)) else {
            return Err(RecognitionError::BlockMismatch(g.id(v).to_string()));
        };
        let (i, j) = (i as i64 + 1, j as i64 + 1);
        let left = Rational::integer(lc as i64) - half + Rational::new(i, 2 * (lb[lc].len() as i64 + 1));
        let right = Rational::integer(rc as i64) + Rational::new(j, 2 * (rb[rc].len() as i64 + 1));
        out.push(Interval::new(g.id(v), left, right));
    }
    Ok(out)
}
