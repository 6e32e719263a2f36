//! Closed intervals and the canonical endpoint order.
//!
//! Every algorithm in the crate works on the rank of each endpoint in a single
//! total order of all `2n` endpoints. Coincident endpoints are resolved so
//! that the closed-interval semantics survive: at equal positions left
//! endpoints come before right endpoints (touching intervals still
//! intersect), longer intervals start first and inner intervals end first
//! (containment survives), and identical intervals nest by id.

use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::RandomState;
use std::collections::HashSet;
use std::hash::BuildHasher;

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "L")]
    LeftGoing,
    #[serde(rename = "R")]
    RightGoing,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub id: String,
    pub left: Rational,
    pub right: Rational,
    #[serde(rename = "dir", default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("interval `{id}` is degenerate: left {left} is not below right {right}")]
    Degenerate { id: String, left: Rational, right: Rational },
    #[error("duplicate interval id `{0}`")]
    DuplicateId(String),
    #[error("endpoint {position} is shared by `{first}` and `{second}`")]
    DuplicateEndpoint { position: Rational, first: String, second: String },
    #[error("interval `{0}` carries no direction tag")]
    MissingDirection(String),
}

impl Interval {
    pub fn new(id: impl Into<String>, left: impl Into<Rational>, right: impl Into<Rational>) -> Self {
        Interval { id: id.into(), left: left.into(), right: right.into(), direction: None }
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = Some(direction);
        self
    }

    pub fn contains_point(&self, p: Rational) -> bool {
        self.left <= p && p <= self.right
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.left <= other.right && other.left <= self.right
    }

    /// Mirror image under `p -> -p`.
    pub fn reflected(&self) -> Interval {
        Interval {
            id: self.id.clone(),
            left: -self.right,
            right: -self.left,
            direction: self.direction,
        }
    }

    pub fn length(&self) -> Rational {
        self.right - self.left
    }
}

/// Checks non-degeneracy and id uniqueness.
pub fn validate_intervals(intervals: &[Interval]) -> Result<(), IntervalError> {
    for iv in intervals {
        if iv.left >= iv.right {
            return Err(IntervalError::Degenerate {
                id: iv.id.clone(),
                left: iv.left,
                right: iv.right,
            });
        }
    }
    // sorting id hashes touches memory in order, unlike a hash set
    let state = RandomState::new();
    let mut hashes: Vec<(u64, u32)> =
        intervals.iter().enumerate().map(|(i, iv)| (state.hash_one(iv.id.as_str()), i as u32)).collect();
    hashes.sort_unstable();
    let mut first_dup: Option<usize> = None;
    let mut start = 0;
    while start < hashes.len() {
        let mut end = start + 1;
        while end < hashes.len() && hashes[end].0 == hashes[start].0 {
            end += 1;
        }
        if end - start > 1 {
            let mut seen = HashSet::new();
            for &(_, i) in &hashes[start..end] {
                if !seen.insert(intervals[i as usize].id.as_str()) {
                    first_dup = Some(first_dup.map_or(i as usize, |d| d.min(i as usize)));
                }
            }
        }
        start = end;
    }
    if let Some(i) = first_dup {
        return Err(IntervalError::DuplicateId(intervals[i].id.clone()));
    }
    Ok(())
}

/// How to treat coincident endpoints.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieMode {
    /// Resolve ties canonically (see module docs).
    #[default]
    Perturb,
    /// Reject inputs whose endpoints are not pairwise distinct.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EndpointEvent {
    pub interval: u32,
    pub is_left: bool,
}

/// Ranks of all endpoints in the canonical total order.
#[derive(Clone, Debug)]
pub struct EndpointOrder {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    pub events: Vec<EndpointEvent>,
}

/// Pairwise relation in a directional intersection graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRelation {
    Independent,
    Edge,
    /// Arc from the first index to the second.
    Arc(usize, usize),
}

fn event_cmp(intervals: &[Interval], a: &EndpointEvent, b: &EndpointEvent) -> Ordering {
    let pos = |e: &EndpointEvent| {
        let iv = &intervals[e.interval as usize];
        if e.is_left {
            iv.left
        } else {
            iv.right
        }
    };
    pos(a)
        .cmp(&pos(b))
        .then_with(|| b.is_left.cmp(&a.is_left))
        .then_with(|| {
            let (x, y) = (&intervals[a.interval as usize], &intervals[b.interval as usize]);
            if a.is_left {
                (Reverse(x.right), x.id.as_str()).cmp(&(Reverse(y.right), y.id.as_str()))
            } else {
                (Reverse(x.left), Reverse(x.id.as_str())).cmp(&(Reverse(y.left), Reverse(y.id.as_str())))
            }
        })
}

/// Events sorted by position, left endpoints before right ones at equal
/// positions, otherwise unordered.
fn sorted_by_position(intervals: &[Interval]) -> Vec<EndpointEvent> {
    const OFFSET: i64 = 1 << 39;
    let n = intervals.len();
    let small = n < 1 << 22
        && intervals.iter().all(|iv| {
            iv.left.is_integer() && iv.right.is_integer() && iv.left.numer().abs() < OFFSET && iv.right.numer().abs() < OFFSET
        });
    if small {
        // position, side and index packed into one word
        let pack = |x: Rational, right: bool, i: usize| ((x.numer() + OFFSET) as u64) << 23 | (right as u64) << 22 | i as u64;
        let mut keys: Vec<u64> = Vec::with_capacity(2 * n);
        for (i, iv) in intervals.iter().enumerate() {
            keys.push(pack(iv.left, false, i));
            keys.push(pack(iv.right, true, i));
        }
        keys.sort_unstable();
        return keys
            .iter()
            .map(|&k| EndpointEvent { interval: (k & ((1 << 22) - 1)) as u32, is_left: k & (1 << 22) == 0 })
            .collect();
    }
    let mut keys: Vec<(Rational, bool, u32)> = Vec::with_capacity(2 * n);
    for (i, iv) in intervals.iter().enumerate() {
        keys.push((iv.left, false, i as u32));
        keys.push((iv.right, true, i as u32));
    }
    keys.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    keys.iter().map(|&(_, right, i)| EndpointEvent { interval: i, is_left: !right }).collect()
}

impl EndpointOrder {
    pub fn new(intervals: &[Interval], mode: TieMode) -> Result<Self, IntervalError> {
        validate_intervals(intervals)?;
        let n = intervals.len();
        let mut events = sorted_by_position(intervals);
        // settle tie groups with the full rule
        let pos = |e: &EndpointEvent| {
            let iv = &intervals[e.interval as usize];
            (if e.is_left { iv.left } else { iv.right }, !e.is_left)
        };
        let mut start = 0;
        while start < events.len() {
            let mut end = start + 1;
            while end < events.len() && pos(&events[end]) == pos(&events[start]) {
                end += 1;
            }
            if end - start > 1 {
                events[start..end].sort_unstable_by(|a, b| event_cmp(intervals, a, b));
            }
            start = end;
        }
        if mode == TieMode::Strict {
            for w in events.windows(2) {
                let p = |e: &EndpointEvent| {
                    let iv = &intervals[e.interval as usize];
                    if e.is_left {
                        iv.left
                    } else {
                        iv.right
                    }
                };
                if p(&w[0]) == p(&w[1]) {
                    return Err(IntervalError::DuplicateEndpoint {
                        position: p(&w[0]),
                        first: intervals[w[0].interval as usize].id.clone(),
                        second: intervals[w[1].interval as usize].id.clone(),
                    });
                }
            }
        }
        let mut left = vec![0u32; n];
        let mut right = vec![0u32; n];
        for (rank, e) in events.iter().enumerate() {
            if e.is_left {
                left[e.interval as usize] = rank as u32;
            } else {
                right[e.interval as usize] = rank as u32;
            }
        }
        Ok(EndpointOrder { left, right, events })
    }

    pub fn len(&self) -> usize {
        self.left.len()
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty()
    }

    /// Directional classification of the pair `(u, v)`.
    pub fn classify(&self, u: usize, v: usize) -> PairRelation {
        let (a, b) = if self.left[u] < self.left[v] { (u, v) } else { (v, u) };
        if self.right[a] < self.left[b] {
            PairRelation::Independent
        } else if self.right[b] < self.right[a] {
            PairRelation::Edge
        } else {
            PairRelation::Arc(a, b)
        }
    }

    /// Interval indices sorted by left endpoint.
    pub fn by_left(&self) -> Vec<usize> {
        self.events
            .iter()
            .filter(|e| e.is_left)
            .map(|e| e.interval as usize)
            .collect()
    }
}

/// Returns a copy of `intervals` whose endpoints are pairwise distinct and
/// appear in the canonical order: each tied endpoint is shifted right by
/// `eps * k`, `k` its index within its tie group, with `eps` below the
/// smallest nonzero endpoint gap.
pub fn perturb_ties(intervals: &[Interval]) -> Result<Vec<Interval>, IntervalError> {
    let order = EndpointOrder::new(intervals, TieMode::Perturb)?;
    let pos = |e: &EndpointEvent| {
        let iv = &intervals[e.interval as usize];
        if e.is_left {
            iv.left
        } else {
            iv.right
        }
    };
    let positions: Vec<Rational> = order.events.iter().map(pos).collect();
    let mut min_gap: Option<Rational> = None;
    for w in positions.windows(2) {
        if w[0] != w[1] {
            let gap = w[1] - w[0];
            min_gap = Some(min_gap.map_or(gap, |g| g.min(gap)));
        }
    }
    let eps = min_gap.unwrap_or(Rational::ONE) / Rational::integer(2 * intervals.len().max(1) as i64);
    let mut out: Vec<Interval> = intervals.to_vec();
    let mut k = 0i64;
    for (idx, e) in order.events.iter().enumerate() {
        if idx > 0 && positions[idx] == positions[idx - 1] {
            k += 1;
        } else {
            k = 0;
        }
        if k == 0 {
            continue;
        }
        let shifted = positions[idx] + eps * Rational::integer(k);
        let iv = &mut out[e.interval as usize];
        if e.is_left {
            iv.left = shifted;
        } else {
            iv.right = shifted;
        }
    }
    Ok(out)
}
