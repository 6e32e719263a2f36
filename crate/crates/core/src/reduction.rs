//! Hardness instances from CNF formulas.
//!
//! `build_reduction` produces the mixed interval graph whose `6n`-colorings
//! correspond to satisfying assignments. Variable `i` owns the six layers
//! `6(i-1)+1 ..= 6(i-1)+6`, and clause `j` lives in the strip `[4j, 4j+4]`.
//! `build_proper_reduction` produces the containment-free variant with
//! `4n + 2nm` layers, where the third and sixth layer of every variable are
//! split into one copy per clause.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cnf::Cnf;
use crate::graph::{Coloring, MixedGraph};
use crate::interval::Interval;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Base,
    Proper,
}

/// What a vertex of a reduction instance stands for. Variables and clauses
/// are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum Role {
    Frame { var: usize, layer: usize },
    FrameCopy { var: usize, layer: usize, clause: usize },
    VariableTrue { var: usize },
    VariableFalse { var: usize },
    Occurrence { var: usize, clause: usize },
    MergedOccurrence { var: usize, clause: usize },
    Clause { clause: usize },
    MergedClause { clause: usize },
    Blocker { var: usize, clause: usize },
    DummyD { var: usize, clause: usize },
    DummyE { var: usize, clause: usize },
    MergedDummy { clause: usize, copy: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionInstance {
    pub variant: Variant,
    pub cnf: Cnf,
    pub intervals: Vec<Interval>,
    pub graph: MixedGraph,
    pub k: u32,
    pub labels: BTreeMap<String, Role>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("clause {clause}: {reason}")]
    MalformedClause { clause: usize, reason: String },
    #[error("assignment leaves clause {0} unsatisfied")]
    UnsatisfiedClause(usize),
    #[error("assignment has {got} values for {want} variables")]
    AssignmentLength { got: usize, want: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStats {
    pub n: usize,
    pub m: usize,
    pub vertices: usize,
    pub edges: usize,
    pub arcs: usize,
    pub k: u32,
}

pub fn reduction_stats(inst: &ReductionInstance) -> ReductionStats {
    ReductionStats {
        n: inst.cnf.num_vars,
        m: inst.cnf.clauses.len(),
        vertices: inst.graph.vertex_count(),
        edges: inst.graph.edge_count(),
        arcs: inst.graph.arc_count(),
        k: inst.k,
    }
}

/// Literal of variable `z` in clause `cl`, if any.
fn literal_of(cl: &[i32], z: usize) -> Option<i32> {
    cl.iter().copied().find(|l| l.unsigned_abs() as usize == z)
}

fn check_cnf(cnf: &Cnf) -> Result<(), ReductionError> {
    for (j, cl) in cnf.clauses.iter().enumerate() {
        let bad = |reason: String| Err(ReductionError::MalformedClause { clause: j + 1, reason });
        if cl.len() > 3 {
            return bad(format!("{} literals, at most 3 allowed", cl.len()));
        }
        for (p, &l) in cl.iter().enumerate() {
            if l == 0 || l.unsigned_abs() as usize > cnf.num_vars {
                return bad(format!("literal {l} out of range"));
            }
            if cl[..p].iter().any(|&q| q.unsigned_abs() == l.unsigned_abs()) {
                return bad(format!("variable {} repeated", l.unsigned_abs()));
            }
        }
    }
    Ok(())
}

#[derive(Default)]
struct Builder {
    intervals: Vec<Interval>,
    labels: BTreeMap<String, Role>,
    arcs: Vec<(usize, usize)>,
}

impl Builder {
    fn add(&mut self, id: String, left: Rational, right: Rational, role: Role) -> usize {
        self.labels.insert(id.clone(), role);
        self.intervals.push(Interval::new(id, left, right));
        self.intervals.len() - 1
    }

    fn arc(&mut self, a: usize, b: usize) {
        self.arcs.push((a, b));
    }

    /// Declared arcs plus an edge for every other intersecting pair.
    fn graph(&self, intervals: &[Interval]) -> MixedGraph {
        let n = intervals.len();
        let mut g = MixedGraph::new(intervals.iter().map(|iv| iv.id.clone())).expect("unique gadget ids");
        let mut declared = vec![vec![false; n]; n];
        for &(a, b) in &self.arcs {
            assert!(intervals[a].intersects(&intervals[b]), "arc between disjoint gadget intervals");
            if !declared[a][b] {
                g.add_arc_idx(a, b).expect("gadget arcs are consistent");
                declared[a][b] = true;
                declared[b][a] = true;
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if !declared[a][b] && intervals[a].intersects(&intervals[b]) {
                    g.add_edge_idx(a, b).unwrap();
                }
            }
        }
        g
    }
}

fn r(x: usize) -> Rational {
    Rational::integer(x as i64)
}

/// The base construction with `k = 6n`.
pub fn build_reduction(cnf: &Cnf) -> Result<ReductionInstance, ReductionError> {
    check_cnf(cnf)?;
    let n = cnf.num_vars;
    let m = cnf.clauses.len();
    let xr = r(4 * (m + 1));
    let mut b = Builder::default();

    let mut f = vec![[0usize; 7]; n + 2];
    for i in 1..=n {
        let ends = [xr, r(1), r(3), r(1), xr, r(1)];
        for j in 1..=6 {
            f[i][j] = b.add(format!("f_{i}^{j}"), r(0), ends[j - 1], Role::Frame { var: i, layer: j });
        }
    }
    for i in 1..=n {
        for j in 1..6 {
            b.arc(f[i][j], f[i][j + 1]);
        }
        if i < n {
            b.arc(f[i][6], f[i + 1][1]);
        }
    }
    let mut vt = vec![0; n + 1];
    let mut vf = vec![0; n + 1];
    for i in 1..=n {
        vt[i] = b.add(format!("v_{i}^T"), r(2), xr, Role::VariableTrue { var: i });
        vf[i] = b.add(format!("v_{i}^F"), r(2), xr, Role::VariableFalse { var: i });
        for v in [vt[i], vf[i]] {
            b.arc(f[i][1], v);
            b.arc(v, f[i][5]);
        }
    }
    for (jj, cl) in cnf.clauses.iter().enumerate() {
        let j = jj + 1;
        let o = 4 * j;
        b.add(format!("s_{j}"), r(o + 1), r(o + 4), Role::Clause { clause: j });
        for z in 1..=n {
            match literal_of(cl, z) {
                Some(lit) => {
                    let occ = b.add(format!("o_{z}^{j}"), r(o + 3), r(o + 4), Role::Occurrence { var: z, clause: j });
                    b.arc(if lit > 0 { vt[z] } else { vf[z] }, occ);
                    if z < n {
                        b.arc(occ, f[z + 1][1]);
                    }
                    let blk = b.add(format!("b_{z}^{j}"), r(o + 1), r(o + 2), Role::Blocker { var: z, clause: j });
                    b.arc(f[z][1], blk);
                    b.arc(blk, f[z][5]);
                }
                None => {
                    let d = b.add(format!("d_{z}^{j}"), r(o + 1), r(o + 4), Role::DummyD { var: z, clause: j });
                    let e = b.add(format!("e_{z}^{j}"), r(o + 1), r(o + 4), Role::DummyE { var: z, clause: j });
                    for x in [d, e] {
                        b.arc(f[z][1], x);
                        if z < n {
                            b.arc(x, f[z + 1][1]);
                        }
                    }
                }
            }
        }
    }
    let graph = b.graph(&b.intervals);
    Ok(ReductionInstance {
        variant: Variant::Base,
        cnf: cnf.clone(),
        intervals: b.intervals,
        graph,
        k: 6 * n as u32,
        labels: b.labels,
    })
}

/// Layer offsets within one variable of the proper variant.
struct ProperLayers {
    m: usize,
}

impl ProperLayers {
    fn base(&self, z: usize) -> u32 {
        ((4 + 2 * self.m) * (z - 1)) as u32
    }
    fn f1(&self, z: usize) -> u32 {
        self.base(z) + 1
    }
    fn f2(&self, z: usize) -> u32 {
        self.base(z) + 2
    }
    fn f3(&self, z: usize, j: usize) -> u32 {
        self.base(z) + 2 + j as u32
    }
    fn f4(&self, z: usize) -> u32 {
        self.base(z) + 3 + self.m as u32
    }
    fn f5(&self, z: usize) -> u32 {
        self.base(z) + 4 + self.m as u32
    }
    fn f6(&self, z: usize, j: usize) -> u32 {
        self.base(z) + 4 + (self.m + j) as u32
    }
}

/// The containment-free variant with `k = 4n + 2nm`.
pub fn build_proper_reduction(cnf: &Cnf) -> Result<ReductionInstance, ReductionError> {
    check_cnf(cnf)?;
    let n = cnf.num_vars;
    let m = cnf.clauses.len();
    let xr = r(4 * (m + 1));
    let mut b = Builder::default();

    // frame in chain order F1, F2, F3^1..m, F4, F5, F6^1..m
    let mut chain: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut f1 = vec![0; n + 1];
    let mut f5 = vec![0; n + 1];
    for z in 1..=n {
        let frame = |b: &mut Builder, layer: usize, end: Rational| {
            b.add(format!("f_{z}^{layer}"), r(0), end, Role::Frame { var: z, layer })
        };
        let copy = |b: &mut Builder, layer: usize, j: usize, end: Rational| {
            b.add(format!("f_{z}^{layer},{j}"), r(0), end, Role::FrameCopy { var: z, layer, clause: j })
        };
        f1[z] = frame(&mut b, 1, xr);
        chain[z].push(f1[z]);
        chain[z].push(frame(&mut b, 2, r(1)));
        for j in 1..=m {
            let end = if literal_of(&cnf.clauses[j - 1], z).is_some() { r(4 * j + 2) } else { xr };
            chain[z].push(copy(&mut b, 3, j, end));
        }
        chain[z].push(frame(&mut b, 4, r(1)));
        f5[z] = frame(&mut b, 5, xr);
        chain[z].push(f5[z]);
        for j in 1..=m {
            let end = if literal_of(&cnf.clauses[j - 1], z).is_some() { r(4 * j) } else { xr };
            chain[z].push(copy(&mut b, 6, j, end));
        }
    }
    for z in 1..=n {
        for w in chain[z].windows(2) {
            b.arc(w[0], w[1]);
        }
        if z < n {
            b.arc(*chain[z].last().unwrap(), f1[z + 1]);
        }
        // arcs inherited from merged blockers and dummies
        for j in 1..=m {
            let f3j = chain[z][1 + j];
            let f6j = chain[z][3 + m + j];
            if literal_of(&cnf.clauses[j - 1], z).is_some() {
                b.arc(f1[z], f3j);
                b.arc(f3j, f5[z]);
            } else if z < n {
                b.arc(f3j, f1[z + 1]);
                b.arc(f6j, f1[z + 1]);
            }
        }
    }
    let mut vt = vec![0; n + 1];
    let mut vf = vec![0; n + 1];
    for z in 1..=n {
        vt[z] = b.add(format!("v_{z}^T"), r(2), xr, Role::VariableTrue { var: z });
        vf[z] = b.add(format!("v_{z}^F"), r(2), xr, Role::VariableFalse { var: z });
        for v in [vt[z], vf[z]] {
            b.arc(f1[z], v);
            b.arc(v, f5[z]);
        }
    }
    for (jj, cl) in cnf.clauses.iter().enumerate() {
        let j = jj + 1;
        let o = 4 * j;
        for z in 1..=n {
            if let Some(lit) = literal_of(cl, z) {
                let occ = b.add(format!("o'_{z}^{j}"), r(o + 3), xr, Role::MergedOccurrence { var: z, clause: j });
                b.arc(if lit > 0 { vt[z] } else { vf[z] }, occ);
                if z < n {
                    b.arc(occ, f1[z + 1]);
                }
            }
        }
        for copy in 1..cl.len() {
            b.add(format!("d'_{j}^{copy}"), r(o + 3), xr, Role::MergedDummy { clause: j, copy });
        }
        b.add(format!("s'_{j}"), r(o + 1), xr, Role::MergedClause { clause: j });
    }

    let anchored = b.intervals.clone();
    let stretched = stretch(&anchored, xr);
    for i in 0..anchored.len() {
        for j in i + 1..anchored.len() {
            assert_eq!(
                anchored[i].intersects(&anchored[j]),
                stretched[i].intersects(&stretched[j]),
                "stretch changed an intersection"
            );
        }
    }
    let graph = b.graph(&stretched);
    Ok(ReductionInstance {
        variant: Variant::Proper,
        cnf: cnf.clone(),
        intervals: stretched,
        graph,
        k: (4 * n + 2 * n * m) as u32,
        labels: b.labels,
    })
}

/// Makes every interval touching `0` or `xr` containment-free. Free
/// endpoints are first separated by tiny distinct offsets; then intervals
/// anchored at 0 are extended left by the inverse of their length and the
/// others are extended right by the inverse of theirs.
fn stretch(intervals: &[Interval], xr: Rational) -> Vec<Interval> {
    let zero = Rational::ZERO;
    let n = intervals.len().max(1) as i64;
    let eps = Rational::ONE / (xr * Rational::integer(4 * n));
    let mut left_free: Vec<usize> = Vec::new();
    let mut right_free: Vec<usize> = Vec::new();
    for (i, iv) in intervals.iter().enumerate() {
        if iv.left == zero {
            right_free.push(i);
        } else {
            assert_eq!(iv.right, xr, "interval touches neither anchor");
            left_free.push(i);
        }
    }
    let mut out = intervals.to_vec();
    // within a run of equal free endpoints, shift by rank
    let shift = |ids: &mut Vec<usize>, is_left: bool, out: &mut Vec<Interval>| {
        let key = |iv: &Interval| if is_left { iv.left } else { iv.right };
        ids.sort_by(|&a, &b| key(&intervals[a]).cmp(&key(&intervals[b])).then(a.cmp(&b)));
        let mut rank = 0;
        for p in 0..ids.len() {
            if p > 0 && key(&intervals[ids[p]]) == key(&intervals[ids[p - 1]]) {
                rank += 1;
            } else {
                rank = 0;
            }
            let d = eps * Rational::integer(rank);
            let iv = &mut out[ids[p]];
            if is_left {
                iv.left = iv.left + d;
            } else {
                iv.right = iv.right + d;
            }
        }
    };
    shift(&mut right_free, false, &mut out);
    shift(&mut left_free, true, &mut out);
    for &i in &right_free {
        out[i].left = -(out[i].length().recip());
    }
    for &i in &left_free {
        out[i].right = out[i].right + out[i].length().recip();
    }
    out
}

fn satisfied(lit: i32, assignment: &[bool]) -> bool {
    crate::cnf::literal_value(lit, assignment)
}

/// The coloring read off a satisfying assignment.
pub fn witness_coloring(inst: &ReductionInstance, assignment: &[bool]) -> Result<Coloring, ReductionError> {
    let cnf = &inst.cnf;
    if assignment.len() != cnf.num_vars {
        return Err(ReductionError::AssignmentLength { got: assignment.len(), want: cnf.num_vars });
    }
    // variable whose literal satisfies each clause
    let mut chosen = Vec::with_capacity(cnf.clauses.len());
    for (j, cl) in cnf.clauses.iter().enumerate() {
        let lit = cl
            .iter()
            .copied()
            .find(|&l| satisfied(l, assignment))
            .ok_or(ReductionError::UnsatisfiedClause(j + 1))?;
        chosen.push(lit.unsigned_abs() as usize);
    }
    let lit_true = |z: usize, j: usize| {
        literal_of(&cnf.clauses[j - 1], z).is_some_and(|l| satisfied(l, assignment))
    };
    let mut c = Coloring::new();
    match inst.variant {
        Variant::Base => {
            let layer = |z: usize, j: usize| (6 * (z - 1) + j) as u32;
            for (id, role) in &inst.labels {
                let color = match *role {
                    Role::Frame { var, layer: j } => layer(var, j),
                    Role::VariableTrue { var } => layer(var, if assignment[var - 1] { 2 } else { 4 }),
                    Role::VariableFalse { var } => layer(var, if assignment[var - 1] { 4 } else { 2 }),
                    Role::Occurrence { var, clause } => layer(var, if lit_true(var, clause) { 3 } else { 6 }),
                    Role::Clause { clause } => layer(chosen[clause - 1], 6),
                    Role::Blocker { var, .. } | Role::DummyD { var, .. } => layer(var, 3),
                    Role::DummyE { var, .. } => layer(var, 6),
                    _ => unreachable!("proper-variant role in base instance"),
                };
                c.set(id.clone(), color);
            }
        }
        Variant::Proper => {
            let p = ProperLayers { m: cnf.clauses.len() };
            // free slots per clause for the merged dummies
            let mut spare: Vec<Vec<u32>> = vec![Vec::new(); cnf.clauses.len() + 1];
            for (jj, cl) in cnf.clauses.iter().enumerate() {
                let j = jj + 1;
                for &l in cl {
                    let z = l.unsigned_abs() as usize;
                    if !lit_true(z, j) {
                        spare[j].push(p.f3(z, j));
                    } else if z != chosen[jj] {
                        spare[j].push(p.f6(z, j));
                    }
                }
            }
            for (id, role) in &inst.labels {
                let color = match *role {
                    Role::Frame { var, layer: 1 } => p.f1(var),
                    Role::Frame { var, layer: 2 } => p.f2(var),
                    Role::Frame { var, layer: 4 } => p.f4(var),
                    Role::Frame { var, layer: 5 } => p.f5(var),
                    Role::FrameCopy { var, layer: 3, clause } => p.f3(var, clause),
                    Role::FrameCopy { var, layer: 6, clause } => p.f6(var, clause),
                    Role::VariableTrue { var } => {
                        if assignment[var - 1] { p.f2(var) } else { p.f4(var) }
                    }
                    Role::VariableFalse { var } => {
                        if assignment[var - 1] { p.f4(var) } else { p.f2(var) }
                    }
                    Role::MergedOccurrence { var, clause } => {
                        if lit_true(var, clause) { p.f3(var, clause) } else { p.f6(var, clause) }
                    }
                    Role::MergedClause { clause } => p.f6(chosen[clause - 1], clause),
                    Role::MergedDummy { clause, copy } => spare[clause][copy - 1],
                    _ => unreachable!("base-variant role in proper instance"),
                };
                c.set(id.clone(), color);
            }
        }
    }
    Ok(c)
}
