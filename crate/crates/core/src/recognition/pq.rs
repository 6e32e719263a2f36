//! PQ-trees over a universe `0..n`, reduced by the classical templates.
//!
//! Each reduction annotates the tree with per-subtree counts of leaves in
//! the constraint set, locates the pertinent root and rebuilds the pertinent
//! subtree. Partial children below the root are flattened into sequences
//! ordered from their empty part to their full part.

use fixedbitset::FixedBitSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PqNode {
    Leaf(usize),
    P(Vec<PqNode>),
    Q(Vec<PqNode>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqTree {
    root: Option<PqNode>,
}

#[derive(Clone, Copy)]
struct Ann {
    full: usize,
    leaves: usize,
    size: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Label {
    Empty,
    Full,
    Partial,
}

impl Ann {
    fn label(&self) -> Label {
        if self.full == 0 {
            Label::Empty
        } else if self.full == self.leaves {
            Label::Full
        } else {
            Label::Partial
        }
    }
}

fn annotate(node: &PqNode, s: &FixedBitSet, out: &mut Vec<Ann>) -> usize {
    let idx = out.len();
    out.push(Ann { full: 0, leaves: 0, size: 0 });
    let (mut full, mut leaves) = (0, 0);
    match node {
        PqNode::Leaf(x) => {
            full = s.contains(*x) as usize;
            leaves = 1;
        }
        PqNode::P(ch) | PqNode::Q(ch) => {
            for c in ch {
                let ci = annotate(c, s, out);
                full += out[ci].full;
                leaves += out[ci].leaves;
            }
        }
    }
    out[idx] = Ann { full, leaves, size: out.len() - idx };
    idx
}

fn children_of(node: PqNode) -> Vec<PqNode> {
    match node {
        PqNode::P(ch) | PqNode::Q(ch) => ch,
        PqNode::Leaf(_) => vec![],
    }
}

fn child_indices(idx: usize, count: usize, ann: &[Ann]) -> Vec<usize> {
    let mut out = Vec::with_capacity(count);
    let mut i = idx + 1;
    for _ in 0..count {
        out.push(i);
        i += ann[i].size;
    }
    out
}

fn make_p(mut items: Vec<PqNode>) -> PqNode {
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        PqNode::P(items)
    }
}

fn make_q(items: Vec<PqNode>) -> PqNode {
    if items.len() <= 2 {
        make_p(items)
    } else {
        PqNode::Q(items)
    }
}

/// Children of a partial non-root node as a sequence running from its empty
/// part to its full part.
fn partial_seq(node: PqNode, idx: usize, ann: &[Ann]) -> Option<Vec<PqNode>> {
    match node {
        PqNode::Leaf(_) => unreachable!("a leaf is never partial"),
        PqNode::P(ch) => {
            let ids = child_indices(idx, ch.len(), ann);
            let (mut empty, mut full, mut partial) = (vec![], vec![], None);
            for (c, i) in ch.into_iter().zip(ids) {
                match ann[i].label() {
                    Label::Empty => empty.push(c),
                    Label::Full => full.push(c),
                    Label::Partial if partial.is_none() => partial = Some((c, i)),
                    Label::Partial => return None,
                }
            }
            let mut out = vec![];
            if !empty.is_empty() {
                out.push(make_p(empty));
            }
            if let Some((c, i)) = partial {
                out.extend(partial_seq(c, i, ann)?);
            }
            if !full.is_empty() {
                out.push(make_p(full));
            }
            Some(out)
        }
        PqNode::Q(ch) => {
            let ids = child_indices(idx, ch.len(), ann);
            let labels: Vec<Label> = ids.iter().map(|&i| ann[i].label()).collect();
            let mut pairs: Vec<(PqNode, usize)> = ch.into_iter().zip(ids).collect();
            if !empty_to_full(&labels) {
                let rev: Vec<Label> = labels.iter().rev().copied().collect();
                if !empty_to_full(&rev) {
                    return None;
                }
                pairs.reverse();
            }
            let mut out = vec![];
            for (c, i) in pairs {
                if ann[i].label() == Label::Partial {
                    out.extend(partial_seq(c, i, ann)?);
                } else {
                    out.push(c);
                }
            }
            Some(out)
        }
    }
}

/// Matches `E* P? F*`.
fn empty_to_full(labels: &[Label]) -> bool {
    let mut i = 0;
    while i < labels.len() && labels[i] == Label::Empty {
        i += 1;
    }
    if i < labels.len() && labels[i] == Label::Partial {
        i += 1;
    }
    labels[i..].iter().all(|&l| l == Label::Full)
}

fn reduce_root(node: PqNode, idx: usize, ann: &[Ann]) -> Option<PqNode> {
    if ann[idx].label() == Label::Full {
        return Some(node);
    }
    match node {
        PqNode::Leaf(_) => Some(node),
        PqNode::P(ch) => {
            let ids = child_indices(idx, ch.len(), ann);
            let (mut empty, mut full, mut partial) = (vec![], vec![], vec![]);
            for (c, i) in ch.into_iter().zip(ids) {
                match ann[i].label() {
                    Label::Empty => empty.push(c),
                    Label::Full => full.push(c),
                    Label::Partial => partial.push((c, i)),
                }
            }
            if partial.len() > 2 {
                return None;
            }
            let full_part = if full.is_empty() { None } else { Some(make_p(full)) };
            let mut seq = vec![];
            let mut parts = partial.into_iter();
            if let Some((c, i)) = parts.next() {
                seq.extend(partial_seq(c, i, ann)?);
            }
            seq.extend(full_part);
            if let Some((c, i)) = parts.next() {
                let mut tail = partial_seq(c, i, ann)?;
                tail.reverse();
                seq.extend(tail);
            }
            let merged = make_q(seq);
            if empty.is_empty() {
                Some(merged)
            } else {
                empty.push(merged);
                Some(PqNode::P(empty))
            }
        }
        PqNode::Q(ch) => {
            let ids = child_indices(idx, ch.len(), ann);
            let labels: Vec<Label> = ids.iter().map(|&i| ann[i].label()).collect();
            let a = labels.iter().position(|&l| l != Label::Empty)?;
            let b = labels.iter().rposition(|&l| l != Label::Empty)?;
            if labels[a + 1..b].iter().any(|&l| l != Label::Full) {
                return None;
            }
            let mut out = vec![];
            for (p, (c, i)) in ch.into_iter().zip(ids).enumerate() {
                if labels[p] != Label::Partial {
                    out.push(c);
                } else if p == a && p != b {
                    out.extend(partial_seq(c, i, ann)?);
                } else if p == b && p != a {
                    let mut tail = partial_seq(c, i, ann)?;
                    tail.reverse();
                    out.extend(tail);
                } else {
                    // a lone partial child would itself hold every leaf of the set
                    unreachable!("pertinent root has a single partial child");
                }
            }
            Some(PqNode::Q(out))
        }
    }
}

fn reduce_node(node: PqNode, idx: usize, ann: &[Ann], total: usize) -> Option<PqNode> {
    let deeper = match &node {
        PqNode::Leaf(_) => None,
        PqNode::P(ch) | PqNode::Q(ch) => child_indices(idx, ch.len(), ann)
            .into_iter()
            .position(|i| ann[i].full == total)
            .map(|p| (p, child_indices(idx, ch.len(), ann)[p])),
    };
    match deeper {
        None => reduce_root(node, idx, ann),
        Some((p, ci)) => {
            let is_q = matches!(node, PqNode::Q(_));
            let mut ch = children_of(node);
            let c = std::mem::replace(&mut ch[p], PqNode::Leaf(usize::MAX));
            ch[p] = reduce_node(c, ci, ann, total)?;
            Some(if is_q { PqNode::Q(ch) } else { PqNode::P(ch) })
        }
    }
}

impl PqTree {
    /// The universal tree over `0..n`.
    pub fn new(n: usize) -> Self {
        let root = match n {
            0 => None,
            1 => Some(PqNode::Leaf(0)),
            _ => Some(PqNode::P((0..n).map(PqNode::Leaf).collect())),
        };
        PqTree { root }
    }

    pub fn root(&self) -> Option<&PqNode> {
        self.root.as_ref()
    }

    /// Restricts the tree to orders in which `set` is consecutive. Returns
    /// false, leaving the tree untouched, if no such order exists.
    pub fn reduce(&mut self, set: &FixedBitSet) -> bool {
        let Some(root) = self.root.take() else {
            return true;
        };
        let mut ann = Vec::new();
        annotate(&root, set, &mut ann);
        let total = ann[0].full;
        if total <= 1 || total == ann[0].leaves {
            self.root = Some(root);
            return true;
        }
        let backup = root.clone();
        match reduce_node(root, 0, &ann, total) {
            Some(r) => {
                self.root = Some(r);
                true
            }
            None => {
                self.root = Some(backup);
                false
            }
        }
    }

    pub fn frontier(&self) -> Vec<usize> {
        fn walk(n: &PqNode, out: &mut Vec<usize>) {
            match n {
                PqNode::Leaf(x) => out.push(*x),
                PqNode::P(ch) | PqNode::Q(ch) => ch.iter().for_each(|c| walk(c, out)),
            }
        }
        let mut out = vec![];
        if let Some(r) = &self.root {
            walk(r, &mut out);
        }
        out
    }

    /// Every frontier obtainable by permuting P-nodes and reversing Q-nodes.
    pub fn all_frontiers(&self) -> Vec<Vec<usize>> {
        fn perms(items: &[Vec<Vec<usize>>]) -> Vec<Vec<Vec<Vec<usize>>>> {
            // all orderings of the child option lists
            if items.is_empty() {
                return vec![vec![]];
            }
            let mut out = vec![];
            for i in 0..items.len() {
                let mut rest = items.to_vec();
                let head = rest.remove(i);
                for mut tail in perms(&rest) {
                    tail.insert(0, head.clone());
                    out.push(tail);
                }
            }
            out
        }
        fn product(lists: &[Vec<Vec<usize>>]) -> Vec<Vec<usize>> {
            let mut acc = vec![vec![]];
            for opts in lists {
                let mut next = vec![];
                for a in &acc {
                    for o in opts {
                        let mut v = a.clone();
                        v.extend(o);
                        next.push(v);
                    }
                }
                acc = next;
            }
            acc
        }
        fn walk(n: &PqNode) -> Vec<Vec<usize>> {
            match n {
                PqNode::Leaf(x) => vec![vec![*x]],
                PqNode::P(ch) => {
                    let opts: Vec<Vec<Vec<usize>>> = ch.iter().map(walk).collect();
                    perms(&opts).iter().flat_map(|order| product(order)).collect()
                }
                PqNode::Q(ch) => {
                    let mut opts: Vec<Vec<Vec<usize>>> = ch.iter().map(walk).collect();
                    let mut out = product(&opts);
                    opts.reverse();
                    out.extend(product(&opts));
                    out
                }
            }
        }
        match &self.root {
            None => vec![vec![]],
            Some(r) => {
                let mut all = walk(r);
                all.sort();
                all.dedup();
                all
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(n: usize, xs: &[usize]) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for &x in xs {
            s.insert(x);
        }
        s
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        let mut all = vec![];
        let mut p: Vec<usize> = (0..n).collect();
        fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k <= 1 {
                out.push(p.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, p, out);
                let j = if k % 2 == 0 { i } else { 0 };
                p.swap(j, k - 1);
            }
        }
        heap(n, &mut p, &mut all);
        all.sort();
        all.dedup();
        all
    }

    fn consecutive(order: &[usize], s: &FixedBitSet) -> bool {
        let pos: Vec<usize> = order.iter().enumerate().filter(|(_, x)| s.contains(**x)).map(|(i, _)| i).collect();
        pos.is_empty() || pos[pos.len() - 1] - pos[0] + 1 == pos.len()
    }

    #[test]
    fn path_constraints_give_q() {
        let mut t = PqTree::new(4);
        assert!(t.reduce(&set(4, &[0, 1])));
        assert!(t.reduce(&set(4, &[1, 2])));
        assert!(t.reduce(&set(4, &[2, 3])));
        assert_eq!(t.all_frontiers(), vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0]]);
    }

    #[test]
    fn impossible_constraints_fail() {
        let mut t = PqTree::new(4);
        for s in [[0, 1], [1, 2], [2, 3]] {
            assert!(t.reduce(&set(4, &s)));
        }
        let before = t.clone();
        assert!(!t.reduce(&set(4, &[0, 3])));
        assert_eq!(t, before);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn matches_brute_force(n in 1usize..7, raw in prop::collection::vec(prop::collection::vec(any::<bool>(), 7), 0..6)) {
            let sets: Vec<FixedBitSet> = raw.iter().map(|bits| {
                let xs: Vec<usize> = (0..n).filter(|&i| bits[i]).collect();
                set(n, &xs)
            }).collect();
            let want: Vec<Vec<usize>> = permutations(n).into_iter().filter(|p| sets.iter().all(|s| consecutive(p, s))).collect();
            let mut t = PqTree::new(n);
            let mut ok = true;
            for s in &sets {
                if !t.reduce(s) {
                    ok = false;
                    break;
                }
            }
            if want.is_empty() {
                prop_assert!(!ok);
            } else {
                prop_assert!(ok);
                prop_assert_eq!(t.all_frontiers(), want);
            }
        }
    }
}
