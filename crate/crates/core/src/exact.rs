//! Exact oracles: chromatic number of mixed graphs and truth-table SAT.
//!
//! The coloring search is a backtracking CSP over color domains held as
//! bitmasks. Edges prune the assigned color from neighbours, arcs keep the
//! lower and upper domain bounds of their endpoints consistent, and both are
//! propagated to a fixpoint after every decision.

use serde::Serialize;

use crate::cnf::Cnf;
use crate::graph::{Coloring, MixedGraph};

/// Widest color range the bitmask domains hold.
pub const MAX_DOMAIN: usize = 128;

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ExactResult {
    Colorable { chromatic_number: u32, witness: Coloring },
    Infeasible,
}

impl ExactResult {
    pub fn chromatic_number(&self) -> Option<u32> {
        match self {
            ExactResult::Colorable { chromatic_number, .. } => Some(*chromatic_number),
            ExactResult::Infeasible => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
    #[error("{needed} colors exceed the supported {MAX_DOMAIN}")]
    TooLarge { needed: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    pub max_colors: u32,
    pub node_budget: u64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { max_colors: u32::MAX, node_budget: DEFAULT_NODE_BUDGET }
    }
}

pub fn exact_chromatic(g: &MixedGraph, max_colors: u32) -> Result<ExactResult, ExactError> {
    exact_chromatic_with(g, ExactOptions { max_colors, ..Default::default() })
}

/// Smallest `k <= max_colors` admitting a proper coloring, with a witness.
pub fn exact_chromatic_with(g: &MixedGraph, opts: ExactOptions) -> Result<ExactResult, ExactError> {
    let n = g.vertex_count();
    let Some(topo) = g.topological_order() else {
        return Ok(ExactResult::Infeasible);
    };
    if n == 0 {
        return Ok(ExactResult::Colorable { chromatic_number: 0, witness: Coloring::new() });
    }
    let cap = (opts.max_colors as usize).min(n);
    let out = g.out_arcs();
    let mut depth = vec![1usize; n];
    for &v in &topo {
        for &w in &out[v] {
            depth[w] = depth[w].max(depth[v] + 1);
        }
    }
    let lb = *depth.iter().max().unwrap();
    if lb > cap {
        return Ok(ExactResult::Infeasible);
    }
    if cap > MAX_DOMAIN {
        return Err(ExactError::TooLarge { needed: cap });
    }
    let mut solver = Solver::new(g, opts.node_budget);
    for k in lb..=cap {
        if let Some(colors) = solver.solve(k)? {
            let witness = Coloring::from_pairs((0..n).map(|v| (g.id(v).to_string(), colors[v])));
            return Ok(ExactResult::Colorable { chromatic_number: k as u32, witness });
        }
    }
    Ok(ExactResult::Infeasible)
}

/// Decides whether `g` has a proper coloring with colors `1..=k`.
pub fn is_k_colorable(g: &MixedGraph, k: u32, node_budget: u64) -> Result<Option<Coloring>, ExactError> {
    if g.topological_order().is_none() {
        return Ok(None);
    }
    if k as usize > MAX_DOMAIN {
        return Err(ExactError::TooLarge { needed: k as usize });
    }
    let mut solver = Solver::new(g, node_budget);
    Ok(solver
        .solve(k as usize)?
        .map(|c| Coloring::from_pairs((0..g.vertex_count()).map(|v| (g.id(v).to_string(), c[v])))))
}

struct Solver {
    n: usize,
    edges: Vec<Vec<usize>>,
    outs: Vec<Vec<usize>>,
    degree: Vec<usize>,
    nodes: u64,
    budget: u64,
}

fn lowest(d: u128) -> u32 {
    d.trailing_zeros()
}

fn highest(d: u128) -> u32 {
    127 - d.leading_zeros()
}

/// Bits strictly above bit `b`.
fn above(b: u32) -> u128 {
    if b >= 127 {
        0
    } else {
        !0u128 << (b + 1)
    }
}

/// Bits strictly below bit `b`.
fn below(b: u32) -> u128 {
    (1u128 << b) - 1
}

impl Solver {
    fn new(g: &MixedGraph, budget: u64) -> Self {
        let n = g.vertex_count();
        let mut edges = vec![Vec::new(); n];
        for (u, v) in g.edge_indices() {
            edges[u].push(v);
            edges[v].push(u);
        }
        let outs = g.out_arcs();
        let ins = g.in_arcs();
        let degree = (0..n).map(|v| edges[v].len() + outs[v].len() + ins[v].len()).collect();
        Solver { n, edges, outs, degree, nodes: 0, budget }
    }

    fn solve(&mut self, k: usize) -> Result<Option<Vec<u32>>, ExactError> {
        let full: u128 = if k == 128 { !0 } else { (1u128 << k) - 1 };
        let mut dom = vec![full; self.n];
        let mut done = vec![false; self.n];
        if !self.propagate(&mut dom, &mut done) {
            return Ok(None);
        }
        Ok(self.search(dom, done)?.map(|d| d.iter().map(|&x| lowest(x) + 1).collect()))
    }

    /// Runs arc-bound and edge propagation to a fixpoint; false on a wipe-out.
    fn propagate(&self, dom: &mut [u128], done: &mut [bool]) -> bool {
        loop {
            let mut changed = false;
            for u in 0..self.n {
                if dom[u] == 0 {
                    return false;
                }
                for &w in &self.outs[u] {
                    let nd = dom[w] & above(lowest(dom[u]));
                    if nd != dom[w] {
                        dom[w] = nd;
                        changed = true;
                    }
                    if nd == 0 {
                        return false;
                    }
                    let nu = dom[u] & below(highest(dom[w]));
                    if nu != dom[u] {
                        dom[u] = nu;
                        changed = true;
                    }
                    if nu == 0 {
                        return false;
                    }
                }
                if !done[u] && dom[u].count_ones() == 1 {
                    done[u] = true;
                    changed = true;
                    for &w in &self.edges[u] {
                        dom[w] &= !dom[u];
                        if dom[w] == 0 {
                            return false;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn search(&mut self, dom: Vec<u128>, done: Vec<bool>) -> Result<Option<Vec<u128>>, ExactError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ExactError::BudgetExceeded(self.budget));
        }
        let pick = (0..self.n)
            .filter(|&v| !done[v])
            .min_by_key(|&v| (dom[v].count_ones(), std::cmp::Reverse(self.degree[v])));
        let Some(v) = pick else {
            return Ok(Some(dom));
        };
        let mut rest = dom[v];
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= !bit;
            let mut d = dom.clone();
            let mut f = done.clone();
            d[v] = bit;
            if self.propagate(&mut d, &mut f) {
                if let Some(sol) = self.search(d, f)? {
                    return Ok(Some(sol));
                }
            }
        }
        Ok(None)
    }
}

pub const MAX_SAT_VARS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SatResult {
    pub satisfiable: bool,
    pub assignment: Option<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SatError {
    #[error("{0} variables exceed the truth-table limit of {MAX_SAT_VARS}")]
    TooManyVariables(usize),
}

/// Exhaustive truth-table check.
pub fn brute_force_sat(cnf: &Cnf) -> Result<SatResult, SatError> {
    let n = cnf.num_vars;
    if n > MAX_SAT_VARS {
        return Err(SatError::TooManyVariables(n));
    }
    let masks: Vec<(u32, u32)> = cnf
        .clauses
        .iter()
        .map(|cl| {
            cl.iter().fold((0u32, 0u32), |(p, q), &l| {
                let bit = 1u32 << (l.unsigned_abs() - 1);
                if l > 0 {
                    (p | bit, q)
                } else {
                    (p, q | bit)
                }
            })
        })
        .collect();
    for x in 0u32..(1u32 << n) {
        if masks.iter().all(|&(p, q)| x & p != 0 || !x & q != 0) {
            let assignment = (0..n).map(|i| x >> i & 1 == 1).collect();
            return Ok(SatResult { satisfiable: true, assignment: Some(assignment) });
        }
    }
    Ok(SatResult { satisfiable: false, assignment: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_coloring;
    use crate::greedy::greedy_color;
    use crate::intersection::build_directional_graph;
    use crate::interval::Interval;
    use proptest::prelude::*;

    fn g(v: &[&str], e: &[(&str, &str)], a: &[(&str, &str)]) -> MixedGraph {
        MixedGraph::from_parts(v, e, a).unwrap()
    }

    #[test]
    fn circuit_is_infeasible() {
        let c = g(&["a", "b", "c"], &[], &[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(exact_chromatic(&c, u32::MAX).unwrap(), ExactResult::Infeasible);
    }

    #[test]
    fn small_examples() {
        let ivs = [Interval::new("a", 0, 10), Interval::new("b", 1, 5), Interval::new("c", 4, 12)];
        let d = build_directional_graph(&ivs).unwrap();
        assert_eq!(exact_chromatic(&d, 10).unwrap().chromatic_number(), Some(3));
        let tri = g(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")], &[]);
        assert_eq!(exact_chromatic(&tri, 10).unwrap().chromatic_number(), Some(3));
        assert_eq!(exact_chromatic(&tri, 2).unwrap(), ExactResult::Infeasible);
        let path = g(&["a", "b", "c", "d"], &[], &[("a", "b"), ("b", "c"), ("c", "d")]);
        assert_eq!(exact_chromatic(&path, 10).unwrap().chromatic_number(), Some(4));
    }

    #[test]
    fn budget_is_enforced() {
        // K_6 minus nothing, asked for 5 colors, cannot finish in one node
        let names: Vec<String> = (0..6).map(|i| i.to_string()).collect();
        let mut k6 = MixedGraph::new(names).unwrap();
        for i in 0..6 {
            for j in i + 1..6 {
                k6.add_edge_idx(i, j).unwrap();
            }
        }
        let r = exact_chromatic_with(&k6, ExactOptions { max_colors: 6, node_budget: 1 });
        assert_eq!(r, Err(ExactError::BudgetExceeded(1)));
    }

    #[test]
    fn sat_examples() {
        let r = brute_force_sat(&Cnf::new(1, vec![vec![1]])).unwrap();
        assert_eq!(r.assignment, Some(vec![true]));
        assert!(!brute_force_sat(&Cnf::new(1, vec![vec![1], vec![-1]])).unwrap().satisfiable);
        assert!(brute_force_sat(&Cnf::new(25, vec![])).is_err());
    }

    /// Chromatic number by trying every assignment of colors `1..=k`.
    fn enumerate_chromatic(g: &MixedGraph) -> u32 {
        let n = g.vertex_count();
        for k in 1..=n as u32 {
            let mut c = vec![1u32; n];
            loop {
                let ok = g.edge_indices().all(|(u, v)| c[u] != c[v]) && g.arc_indices().all(|(u, v)| c[u] < c[v]);
                if ok {
                    return k;
                }
                let mut i = 0;
                while i < n && c[i] == k {
                    c[i] = 1;
                    i += 1;
                }
                if i == n {
                    break;
                }
                c[i] += 1;
            }
        }
        0
    }

    /// Independent DPLL with unit propagation.
    fn dpll(clauses: &[Vec<i32>], assign: &mut Vec<Option<bool>>) -> bool {
        loop {
            let mut unit = None;
            for cl in clauses {
                let mut open = None;
                let mut count = 0;
                let mut sat = false;
                for &l in cl {
                    match assign[l.unsigned_abs() as usize - 1] {
                        Some(v) if v == (l > 0) => sat = true,
                        Some(_) => {}
                        None => {
                            count += 1;
                            open = Some(l);
                        }
                    }
                }
                if sat {
                    continue;
                }
                match count {
                    0 => return false,
                    1 => {
                        unit = open;
                        break;
                    }
                    _ => {}
                }
            }
            match unit {
                Some(l) => assign[l.unsigned_abs() as usize - 1] = Some(l > 0),
                None => break,
            }
        }
        let Some(i) = assign.iter().position(|a| a.is_none()) else {
            return true;
        };
        for val in [true, false] {
            let mut next = assign.clone();
            next[i] = Some(val);
            if dpll(clauses, &mut next) {
                *assign = next;
                return true;
            }
        }
        false
    }

    fn arb_graph() -> impl Strategy<Value = MixedGraph> {
        (1usize..7).prop_flat_map(|n| {
            prop::collection::vec(0u8..4, n * (n - 1) / 2).prop_map(move |links| {
                let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
                let mut g = MixedGraph::new(ids).unwrap();
                let mut it = links.into_iter();
                for i in 0..n {
                    for j in i + 1..n {
                        match it.next().unwrap() {
                            1 => g.add_edge_idx(i, j).unwrap(),
                            2 => g.add_arc_idx(i, j).unwrap(),
                            3 if (i + j) % 2 == 0 => g.add_arc_idx(j, i).unwrap(),
                            _ => {}
                        }
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn matches_enumeration(g in arb_graph()) {
            match exact_chromatic(&g, u32::MAX).unwrap() {
                ExactResult::Colorable { chromatic_number, witness } => {
                    prop_assert!(validate_coloring(&g, &witness).unwrap().proper);
                    prop_assert!(witness.num_colors() <= chromatic_number);
                    prop_assert_eq!(chromatic_number, enumerate_chromatic(&g));
                }
                ExactResult::Infeasible => prop_assert!(g.topological_order().is_none()),
            }
        }

        #[test]
        fn greedy_is_optimal_on_small_instances(raw in prop::collection::vec((0i64..15, 1i64..10), 1..9)) {
            let ivs: Vec<Interval> = raw.iter().enumerate().map(|(i, &(l, d))| Interval::new(format!("i{i}"), l, l + d)).collect();
            let g = build_directional_graph(&ivs).unwrap();
            let chi = exact_chromatic(&g, u32::MAX).unwrap().chromatic_number().unwrap();
            prop_assert_eq!(greedy_color(&ivs).unwrap().num_colors(), chi);
        }

        #[test]
        fn sat_matches_dpll(clauses in prop::collection::vec(prop::collection::vec((1i32..=10, any::<bool>()), 3), 1..60)) {
            let clauses: Vec<Vec<i32>> = clauses.into_iter()
                .map(|cl| cl.into_iter().map(|(v, s)| if s { v } else { -v }).collect())
                .collect();
            let cnf = Cnf::new(10, clauses.clone());
            let r = brute_force_sat(&cnf).unwrap();
            let mut assign = vec![None; 10];
            prop_assert_eq!(r.satisfiable, dpll(&clauses, &mut assign));
            if let Some(a) = r.assignment {
                prop_assert!(cnf.evaluate(&a));
            }
        }
    }
}
