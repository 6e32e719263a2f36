//! LexBFS, chordality and maximal cliques of an undirected graph given as
//! adjacency bitsets.

use fixedbitset::FixedBitSet;

/// Lexicographic breadth-first search. Returns vertices in visit order.
pub fn lex_bfs(adj: &[FixedBitSet]) -> Vec<usize> {
    let n = adj.len();
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for step in 0..n {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            match best {
                None => best = Some(v),
                Some(b) if labels[v] > labels[b] => best = Some(v),
                _ => {}
            }
        }
        let v = best.unwrap();
        done[v] = true;
        order.push(v);
        for u in adj[v].ones() {
            if !done[u] {
                labels[u].push(n - step);
            }
        }
    }
    order
}

/// A perfect elimination ordering if the graph is chordal.
pub fn perfect_elimination_order(adj: &[FixedBitSet]) -> Option<Vec<usize>> {
    let mut peo = lex_bfs(adj);
    peo.reverse();
    let n = adj.len();
    let mut pos = vec![0; n];
    for (i, &v) in peo.iter().enumerate() {
        pos[v] = i;
    }
    for &v in &peo {
        let later: Vec<usize> = adj[v].ones().filter(|&u| pos[u] > pos[v]).collect();
        let Some(&p) = later.iter().min_by_key(|&&u| pos[u]) else {
            continue;
        };
        if later.iter().any(|&u| u != p && !adj[p].contains(u)) {
            return None;
        }
    }
    Some(peo)
}

/// Maximal cliques of a chordal graph, one per candidate `{v} ∪ N⁺(v)` that
/// is not contained in another.
pub fn maximal_cliques(adj: &[FixedBitSet], peo: &[usize]) -> Vec<FixedBitSet> {
    let n = adj.len();
    let mut pos = vec![0; n];
    for (i, &v) in peo.iter().enumerate() {
        pos[v] = i;
    }
    let mut cands: Vec<FixedBitSet> = peo
        .iter()
        .map(|&v| {
            let mut c = FixedBitSet::with_capacity(n);
            c.insert(v);
            for u in adj[v].ones().filter(|&u| pos[u] > pos[v]) {
                c.insert(u);
            }
            c
        })
        .collect();
    cands.sort_by_key(|c| std::cmp::Reverse(c.count_ones(..)));
    let mut out: Vec<FixedBitSet> = Vec::new();
    for c in cands {
        if !out.iter().any(|m| c.is_subset(m)) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<FixedBitSet> {
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for &(u, v) in edges {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        adj
    }

    #[test]
    fn cycle_is_not_chordal() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(perfect_elimination_order(&g).is_none());
        let g = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        assert!(perfect_elimination_order(&g).is_some());
    }

    #[test]
    fn cliques_of_path_and_triangle() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let peo = perfect_elimination_order(&g).unwrap();
        let mut cl: Vec<Vec<usize>> = maximal_cliques(&g, &peo).iter().map(|c| c.ones().collect()).collect();
        cl.sort();
        assert_eq!(cl, vec![vec![0, 1], vec![1, 2]]);
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let peo = perfect_elimination_order(&g).unwrap();
        assert_eq!(maximal_cliques(&g, &peo).len(), 1);
    }

    #[test]
    fn isolated_vertices_are_cliques() {
        let g = graph(3, &[]);
        let peo = perfect_elimination_order(&g).unwrap();
        assert_eq!(maximal_cliques(&g, &peo).len(), 3);
    }
}
