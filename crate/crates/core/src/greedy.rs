//! Greedy coloring of directional interval graphs.
//!
//! Intervals are processed by increasing left endpoint; each takes the
//! smallest color that differs from every containing predecessor and exceeds
//! every overlapping one. `greedy_color` does this by scanning predecessors,
//! `greedy_color_fast` by a sweep over endpoint events.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::graph::{transitive_closure, underlying_graph, Coloring};
use crate::intersection::build_directional_graph;
use crate::interval::{Direction, EndpointOrder, Interval, IntervalError, PairRelation, TieMode};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EventKind {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepEvent {
    pub position: Rational,
    pub kind: EventKind,
    pub interval: String,
}

/// Endpoint events in canonical sweep order.
pub fn sweep_events(intervals: &[Interval]) -> Result<Vec<SweepEvent>, IntervalError> {
    let order = EndpointOrder::new(intervals, TieMode::Perturb)?;
    Ok(order
        .events
        .iter()
        .map(|e| {
            let iv = &intervals[e.interval as usize];
            SweepEvent {
                position: if e.is_left { iv.left } else { iv.right },
                kind: if e.is_left { EventKind::Left } else { EventKind::Right },
                interval: iv.id.clone(),
            }
        })
        .collect())
}

fn to_coloring(intervals: &[Interval], colors: &[u32]) -> Coloring {
    Coloring::from_pairs(intervals.iter().zip(colors).map(|(iv, &c)| (iv.id.clone(), c)))
}

/// Quadratic reference implementation.
pub fn greedy_color(intervals: &[Interval]) -> Result<Coloring, IntervalError> {
    let order = EndpointOrder::new(intervals, TieMode::Perturb)?;
    Ok(to_coloring(intervals, &greedy_naive_indexed(&order)))
}

fn greedy_naive_indexed(order: &EndpointOrder) -> Vec<u32> {
    let seq = order.by_left();
    let mut colors = vec![0u32; seq.len()];
    let mut forbidden = Vec::new();
    for (pos, &v) in seq.iter().enumerate() {
        let mut x = 0;
        forbidden.clear();
        for &u in &seq[..pos] {
            match order.classify(u, v) {
                PairRelation::Independent => {}
                PairRelation::Edge => forbidden.push(colors[u]),
                PairRelation::Arc(..) => x = x.max(colors[u]),
            }
        }
        forbidden.sort_unstable();
        let mut y = x + 1;
        for &f in &forbidden {
            if f == y {
                y += 1;
            }
        }
        colors[v] = y;
    }
    colors
}

/// Sweep implementation in `O(n log n)`.
pub fn greedy_color_fast(intervals: &[Interval]) -> Result<Coloring, IntervalError> {
    Ok(to_coloring(intervals, &greedy_color_fast_indexed(intervals)?))
}

/// Like `greedy_color_fast` but returns colors by input position.
pub fn greedy_color_fast_indexed(intervals: &[Interval]) -> Result<Vec<u32>, IntervalError> {
    let order = EndpointOrder::new(intervals, TieMode::Perturb)?;
    Ok(greedy_sweep(&order))
}

fn greedy_sweep(order: &EndpointOrder) -> Vec<u32> {
    let n = order.len();
    // position of each interval among the right endpoints
    let mut rindex = vec![0u32; n];
    let mut k = 0;
    for e in &order.events {
        if !e.is_left {
            rindex[e.interval as usize] = k;
            k += 1;
        }
    }
    // colors of started intervals, keyed by right-endpoint index
    let mut by_right = RangeMax::new(n);
    let mut free = FreeColors::new(n);
    let mut colors = vec![0u32; n];
    let mut ended = 0;
    for e in &order.events {
        if e.is_left {
            let r = rindex[e.interval as usize] as usize;
            let x = by_right.max(ended, r);
            let y = free.first_after(x).expect("n colors always suffice");
            free.set(y as usize, false);
            colors[e.interval as usize] = y;
            by_right.raise(r, y);
        } else {
            free.set(by_right.levels[0][ended] as usize, true);
            ended += 1;
        }
    }
    colors
}

const FAN: usize = 16;

/// 16-ary max tree over positions; values only grow.
struct RangeMax {
    /// `levels[0]` are the leaves; `levels[k][i]` is the max of
    /// `levels[k - 1][16 i .. 16 i + 16]`.
    levels: Vec<Vec<u32>>,
}

impl RangeMax {
    fn new(n: usize) -> Self {
        let mut len = n.max(1);
        let mut levels = vec![vec![0; len]];
        while len > 1 {
            len = len.div_ceil(FAN);
            levels.push(vec![0; len]);
        }
        RangeMax { levels }
    }

    fn raise(&mut self, mut p: usize, value: u32) {
        for level in &mut self.levels {
            if level[p] >= value {
                return;
            }
            level[p] = value;
            p /= FAN;
        }
    }

    /// Max over `[lo, hi)`, 0 when empty.
    fn max(&self, mut lo: usize, mut hi: usize) -> u32 {
        let mut m = 0;
        for level in &self.levels {
            if lo >= hi {
                break;
            }
            if lo / FAN == (hi - 1) / FAN || hi - lo <= FAN {
                return m.max(level[lo..hi].iter().copied().max().unwrap_or(0));
            }
            let a = lo.div_ceil(FAN) * FAN;
            let b = hi / FAN * FAN;
            m = m.max(level[lo..a].iter().copied().max().unwrap_or(0));
            m = m.max(level[b..hi].iter().copied().max().unwrap_or(0));
            lo = a / FAN;
            hi = b / FAN;
        }
        m
    }
}

/// Hierarchical bitset over colors `1..=n`: a bit of `levels[k]` is set when
/// the corresponding word of `levels[k - 1]` is nonzero.
struct FreeColors {
    levels: Vec<Vec<u64>>,
}

impl FreeColors {
    fn new(n: usize) -> Self {
        let mut bits = n + 1;
        let mut levels = vec![];
        loop {
            let words = bits.div_ceil(64);
            let mut level = vec![u64::MAX; words];
            if bits % 64 != 0 {
                level[words - 1] = (1u64 << (bits % 64)) - 1;
            }
            levels.push(level);
            if words == 1 {
                break;
            }
            bits = words;
        }
        let mut f = FreeColors { levels };
        f.set(0, false);
        f
    }

    fn set(&mut self, mut i: usize, is_free: bool) {
        for level in &mut self.levels {
            let (w, b) = (i / 64, i % 64);
            let was = level[w] != 0;
            if is_free {
                level[w] |= 1 << b;
            } else {
                level[w] &= !(1 << b);
            }
            if (level[w] != 0) == was {
                return;
            }
            i = w;
        }
    }

    /// Smallest free color above `x`.
    fn first_after(&self, x: u32) -> Option<u32> {
        // climb until a word holds a set bit past the current position
        let mut i = x as usize + 1;
        let mut k = 0;
        loop {
            let level = self.levels.get(k)?;
            let (w, b) = (i / 64, i % 64);
            let word = if w < level.len() { level[w] & (u64::MAX << b) } else { 0 };
            if word != 0 {
                i = w * 64 + word.trailing_zeros() as usize;
                break;
            }
            i = w + 1;
            k += 1;
        }
        while k > 0 {
            k -= 1;
            i = i * 64 + self.levels[k][i].trailing_zeros() as usize;
        }
        Some(i as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StaircaseCertificate {
    pub steps: Vec<String>,
    pub per_step_sets: Vec<BTreeSet<String>>,
    pub witness_clique: BTreeSet<String>,
    pub max_color: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("interval `{0}` has no color")]
    Uncolored(String),
    #[error("step {step} at `{id}` collects {found} intervals, expected {expected}: not a greedy coloring")]
    NotGreedyColoring { step: usize, id: String, found: usize, expected: u32 },
    #[error("`{0}` and `{1}` are not adjacent in the closure")]
    NotAClique(String, String),
}

/// Builds the staircase `v_0, v_1, ...` and the clique it certifies.
pub fn staircase_certificate(
    intervals: &[Interval],
    coloring: &Coloring,
) -> Result<StaircaseCertificate, CertificateError> {
    let order = EndpointOrder::new(intervals, TieMode::Perturb)?;
    let n = intervals.len();
    let mut c = Vec::with_capacity(n);
    for iv in intervals {
        c.push(coloring.get(&iv.id).ok_or_else(|| CertificateError::Uncolored(iv.id.clone()))?);
    }
    if n == 0 {
        return Ok(StaircaseCertificate {
            steps: vec![],
            per_step_sets: vec![],
            witness_clique: BTreeSet::new(),
            max_color: 0,
        });
    }
    let by_left = order.by_left();
    let max_color = *c.iter().max().unwrap();
    let mut cur = *by_left.iter().find(|&&v| c[v] == max_color).unwrap();
    let mut steps = Vec::new();
    let mut sets = Vec::new();
    let mut clique = Vec::new();
    loop {
        let next = by_left
            .iter()
            .copied()
            .filter(|&u| u != cur && order.classify(u, cur) == PairRelation::Arc(u, cur))
            .fold(None, |best: Option<usize>, u| match best {
                Some(b) if c[b] >= c[u] => Some(b),
                _ => Some(u),
            });
        let floor = next.map_or(0, |u| c[u]);
        let point = order.left[cur];
        let members: Vec<usize> = (0..n)
            .filter(|&u| order.left[u] <= point && point < order.right[u])
            .filter(|&u| c[u] > floor && c[u] <= c[cur])
            .collect();
        let expected = c[cur] - floor;
        if members.len() != expected as usize {
            return Err(CertificateError::NotGreedyColoring {
                step: steps.len(),
                id: intervals[cur].id.clone(),
                found: members.len(),
                expected,
            });
        }
        steps.push(intervals[cur].id.clone());
        sets.push(members.iter().map(|&u| intervals[u].id.clone()).collect());
        clique.extend(members);
        match next {
            Some(u) => cur = u,
            None => break,
        }
    }

    let g = build_directional_graph(intervals)?;
    let closure = underlying_graph(&transitive_closure(&g).expect("directional arcs are acyclic"));
    for (i, &u) in clique.iter().enumerate() {
        for &v in &clique[i + 1..] {
            if !closure.adjacent(u, v) {
                return Err(CertificateError::NotAClique(
                    intervals[u].id.clone(),
                    intervals[v].id.clone(),
                ));
            }
        }
    }
    Ok(StaircaseCertificate {
        steps,
        per_step_sets: sets,
        witness_clique: clique.iter().map(|&u| intervals[u].id.clone()).collect(),
        max_color,
    })
}

/// Colors left-going intervals greedily and right-going ones greedily in the
/// mirrored instance, on disjoint color ranges.
pub fn two_approx_bidirectional(intervals: &[Interval]) -> Result<Coloring, IntervalError> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for iv in intervals {
        match iv.direction {
            Some(Direction::LeftGoing) => left.push(iv.clone()),
            Some(Direction::RightGoing) => right.push(iv.reflected()),
            None => return Err(IntervalError::MissingDirection(iv.id.clone())),
        }
    }
    let mut ids = HashSet::with_capacity(intervals.len());
    for iv in intervals {
        if !ids.insert(iv.id.as_str()) {
            return Err(IntervalError::DuplicateId(iv.id.clone()));
        }
    }
    let cl = greedy_color_fast_indexed(&left)?;
    let cr = greedy_color_fast_indexed(&right)?;
    let offset = cl.iter().copied().max().unwrap_or(0);
    let mut out = Coloring::new();
    for (iv, c) in left.iter().zip(cl) {
        out.set(iv.id.clone(), c);
    }
    for (iv, c) in right.iter().zip(cr) {
        out.set(iv.id.clone(), c + offset);
    }
    Ok(out)
}

/// Ranks of `values` (1-based ascending), read off the greedy coloring of
/// the intervals `[a - M, a + M]` with `M = max - min`.
pub fn sort_by_coloring(values: &[Rational]) -> Vec<u32> {
    if values.is_empty() {
        return vec![];
    }
    let lo = values.iter().copied().fold(values[0], Rational::min);
    let hi = values.iter().copied().fold(values[0], Rational::max);
    let m = if hi == lo { Rational::ONE } else { hi - lo };
    let intervals: Vec<Interval> = values
        .iter()
        .enumerate()
        .map(|(i, &a)| Interval::new(i.to_string(), a - m, a + m))
        .collect();
    greedy_color_fast_indexed(&intervals).expect("intervals are non-degenerate with unique ids")
}
