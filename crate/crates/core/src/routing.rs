//! Track assignment for orthogonal edges between two adjacent layers.
//!
//! Each edge is drawn as a vertical piece up from its lower point, a
//! horizontal piece on its track and a vertical piece up to its upper point.
//! Left-going and right-going edges are colored separately and the
//! right-going tracks are stacked above the left-going ones.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::greedy::greedy_color_fast_indexed;
use crate::interval::{Direction, EndpointOrder, Interval, IntervalError, PairRelation, TieMode};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerMatching {
    #[serde(rename = "lower")]
    pub lower_points: Vec<Rational>,
    #[serde(rename = "upper")]
    pub upper_points: Vec<Rational>,
    /// Pairs `(lower index, upper index)`.
    pub matching: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RoutingError {
    #[error("{layer} layer repeats x-coordinate {x}")]
    DuplicateCoordinate { layer: &'static str, x: Rational },
    #[error("layers have {lower} and {upper} points")]
    SizeMismatch { lower: usize, upper: usize },
    #[error("matching is not a perfect bijection")]
    NotBijection,
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Horizontal extent of one edge. Vertical edges have no direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    pub edge: usize,
    pub left: Rational,
    pub right: Rational,
    pub direction: Option<Direction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackAssignment {
    /// Track of each edge, in matching order.
    pub tracks: Vec<u32>,
    pub num_tracks: u32,
}

impl LayerMatching {
    pub fn new(lower: Vec<Rational>, upper: Vec<Rational>, matching: Vec<(usize, usize)>) -> Self {
        LayerMatching { lower_points: lower, upper_points: upper, matching }
    }

    pub fn validate(&self) -> Result<(), RoutingError> {
        for (layer, pts) in [("lower", &self.lower_points), ("upper", &self.upper_points)] {
            let mut seen = HashSet::new();
            for &x in pts {
                if !seen.insert(x) {
                    return Err(RoutingError::DuplicateCoordinate { layer, x });
                }
            }
        }
        let (nl, nu) = (self.lower_points.len(), self.upper_points.len());
        if nl != nu {
            return Err(RoutingError::SizeMismatch { lower: nl, upper: nu });
        }
        if self.matching.len() != nl {
            return Err(RoutingError::NotBijection);
        }
        let (mut lo, mut up) = (vec![false; nl], vec![false; nu]);
        for &(i, j) in &self.matching {
            if i >= nl || j >= nu || lo[i] || up[j] {
                return Err(RoutingError::NotBijection);
            }
            lo[i] = true;
            up[j] = true;
        }
        Ok(())
    }

    /// `(lower x, upper x)` of edge `e`.
    pub fn endpoints(&self, e: usize) -> (Rational, Rational) {
        let (i, j) = self.matching[e];
        (self.lower_points[i], self.upper_points[j])
    }
}

pub fn edge_id(e: usize) -> String {
    format!("e{e}")
}

pub fn spans_of(m: &LayerMatching) -> Result<Vec<Span>, RoutingError> {
    m.validate()?;
    Ok((0..m.matching.len())
        .map(|e| {
            let (lo, up) = m.endpoints(e);
            let direction = match up.cmp(&lo) {
                std::cmp::Ordering::Less => Some(Direction::LeftGoing),
                std::cmp::Ordering::Greater => Some(Direction::RightGoing),
                std::cmp::Ordering::Equal => None,
            };
            Span { edge: e, left: lo.min(up), right: lo.max(up), direction }
        })
        .collect())
}

/// Direction-tagged intervals of the non-vertical spans.
pub fn span_intervals(spans: &[Span]) -> Vec<Interval> {
    spans
        .iter()
        .filter_map(|s| s.direction.map(|d| Interval::new(edge_id(s.edge), s.left, s.right).with_direction(d)))
        .collect()
}

pub fn route_tracks(m: &LayerMatching) -> Result<TrackAssignment, RoutingError> {
    let spans = spans_of(m)?;
    let mut tracks = vec![1u32; spans.len()];
    let mut offset = 0;
    for side in [Direction::LeftGoing, Direction::RightGoing] {
        let members: Vec<&Span> = spans.iter().filter(|s| s.direction == Some(side)).collect();
        let ivs: Vec<Interval> = members
            .iter()
            .map(|s| {
                let iv = Interval::new(edge_id(s.edge), s.left, s.right);
                if side == Direction::RightGoing {
                    iv.reflected()
                } else {
                    iv
                }
            })
            .collect();
        let colors = greedy_color_fast_indexed(&ivs)?;
        for (s, &c) in members.iter().zip(&colors) {
            tracks[s.edge] = c + offset;
        }
        offset += colors.iter().copied().max().unwrap_or(0);
    }
    Ok(TrackAssignment { tracks, num_tracks: offset.max(1) })
}

/// Checks that no two overlapping spans share a track and that overlapping
/// spans of the same direction are stacked in crossing-free order.
pub fn check_assignment(m: &LayerMatching, a: &TrackAssignment) -> Result<(), String> {
    let spans = spans_of(m).map_err(|e| e.to_string())?;
    if a.tracks.len() != spans.len() {
        return Err("track count differs from edge count".into());
    }
    if a.tracks.iter().any(|&t| t == 0 || t > a.num_tracks) {
        return Err("track out of range".into());
    }
    let moving: Vec<&Span> = spans.iter().filter(|s| s.direction.is_some()).collect();
    for (i, s) in moving.iter().enumerate() {
        for t in &moving[i + 1..] {
            let meet = s.left <= t.right && t.left <= s.right;
            if meet && a.tracks[s.edge] == a.tracks[t.edge] {
                return Err(format!("{} and {} share track {}", edge_id(s.edge), edge_id(t.edge), a.tracks[s.edge]));
            }
        }
    }
    for side in [Direction::LeftGoing, Direction::RightGoing] {
        let members: Vec<&Span> = spans.iter().filter(|s| s.direction == Some(side)).collect();
        let ivs: Vec<Interval> = members
            .iter()
            .map(|s| {
                let iv = Interval::new(edge_id(s.edge), s.left, s.right);
                if side == Direction::RightGoing {
                    iv.reflected()
                } else {
                    iv
                }
            })
            .collect();
        let order = EndpointOrder::new(&ivs, TieMode::Perturb).map_err(|e| e.to_string())?;
        for u in 0..members.len() {
            for v in 0..members.len() {
                if u == v {
                    continue;
                }
                if let PairRelation::Arc(x, y) = order.classify(u, v) {
                    if x == u && y == v && a.tracks[members[u].edge] >= a.tracks[members[v].edge] {
                        return Err(format!(
                            "{} must lie below {}",
                            edge_id(members[u].edge),
                            edge_id(members[v].edge)
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Axis-parallel segment in layout coordinates: the lower layer is at
/// `y = 0`, track `t` at `y = t` and the upper layer at `y = num_tracks + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub x1: Rational,
    pub y1: Rational,
    pub x2: Rational,
    pub y2: Rational,
}

impl Segment {
    fn new(x1: Rational, y1: Rational, x2: Rational, y2: Rational) -> Self {
        Segment { x1: x1.min(x2), y1: y1.min(y2), x2: x1.max(x2), y2: y1.max(y2) }
    }

    fn meets(&self, o: &Segment) -> bool {
        self.x1 <= o.x2 && o.x1 <= self.x2 && self.y1 <= o.y2 && o.y1 <= self.y2
    }
}

pub fn edge_paths(m: &LayerMatching, a: &TrackAssignment) -> Vec<Vec<Segment>> {
    let top = Rational::integer(a.num_tracks as i64 + 1);
    (0..m.matching.len())
        .map(|e| {
            let (lo, up) = m.endpoints(e);
            if lo == up {
                return vec![Segment::new(lo, Rational::ZERO, lo, top)];
            }
            let y = Rational::integer(a.tracks[e] as i64);
            vec![Segment::new(lo, Rational::ZERO, lo, y), Segment::new(lo, y, up, y), Segment::new(up, y, up, top)]
        })
        .collect()
}

/// Number of segment pairs of the two paths that touch, not counting the
/// joints inside a path.
pub fn pair_crossings(p: &[Segment], q: &[Segment]) -> usize {
    p.iter().flat_map(|s| q.iter().map(move |t| (s, t))).filter(|(s, t)| s.meets(t)).count()
}

/// Crossing counts for every pair of same-direction edges that overlap.
pub fn same_direction_crossings(m: &LayerMatching, a: &TrackAssignment) -> Result<Vec<(usize, usize, usize)>, RoutingError> {
    let spans = spans_of(m)?;
    let paths = edge_paths(m, a);
    let mut out = vec![];
    for (i, s) in spans.iter().enumerate() {
        for t in &spans[i + 1..] {
            if s.direction.is_some() && s.direction == t.direction && s.left <= t.right && t.left <= s.right {
                out.push((s.edge, t.edge, pair_crossings(&paths[s.edge], &paths[t.edge])));
            }
        }
    }
    Ok(out)
}

fn px(x: Rational) -> String {
    let v = x.to_f64();
    let s = format!("{v:.2}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// SVG drawing of the routed layer pair.
pub fn render_svg(m: &LayerMatching, a: &TrackAssignment) -> String {
    const UNIT_X: i64 = 40;
    const UNIT_Y: i64 = 20;
    const MARGIN: i64 = 20;
    let xs: Vec<Rational> = m.lower_points.iter().chain(&m.upper_points).copied().collect();
    let min_x = xs.iter().copied().min().unwrap_or(Rational::ZERO);
    let max_x = xs.iter().copied().max().unwrap_or(Rational::ZERO);
    let levels = a.num_tracks as i64 + 1;
    let sx = |x: Rational| (x - min_x) * Rational::integer(UNIT_X) + Rational::integer(MARGIN);
    let sy = |y: Rational| (Rational::integer(levels) - y) * Rational::integer(UNIT_Y) + Rational::integer(MARGIN);
    let width = sx(max_x) + Rational::integer(MARGIN);
    let height = sy(Rational::ZERO) + Rational::integer(MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        px(width),
        px(height),
        px(width),
        px(height)
    );
    if !m.matching.is_empty() {
        for t in 1..=a.num_tracks {
            let y = px(sy(Rational::integer(t as i64)));
            let _ = writeln!(
                out,
                r##"  <line class="track" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd" stroke-width="1"/>"##,
                MARGIN,
                px(sx(max_x))
            );
        }
    }
    for (e, path) in edge_paths(m, a).iter().enumerate() {
        let mut d = String::new();
        let (lo, up) = m.endpoints(e);
        let (y_lo, y_up) = (Rational::ZERO, Rational::integer(levels));
        let _ = write!(d, "M {} {}", px(sx(lo)), px(sy(y_lo)));
        if path.len() == 3 {
            let y = Rational::integer(a.tracks[e] as i64);
            let _ = write!(d, " V {} H {}", px(sy(y)), px(sx(up)));
        }
        let _ = write!(d, " V {}", px(sy(y_up)));
        let color = match up.cmp(&lo) {
            std::cmp::Ordering::Less => "#1f77b4",
            std::cmp::Ordering::Greater => "#d62728",
            std::cmp::Ordering::Equal => "#555",
        };
        let _ = writeln!(
            out,
            r#"  <path id="{}" d="{d}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            edge_id(e)
        );
    }
    for (layer, pts, y) in [("lower", &m.lower_points, Rational::ZERO), ("upper", &m.upper_points, Rational::integer(levels))] {
        for &x in pts {
            let _ = writeln!(out, r#"  <circle class="{layer}" cx="{}" cy="{}" r="3"/>"#, px(sx(x)), px(sy(y)));
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{exact_chromatic, ExactResult};
    use crate::intersection::build_bidirectional_graph;
    use proptest::prelude::*;

    fn r(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::integer(x)).collect()
    }

    fn matching(lower: &[i64], upper: &[i64], perm: &[usize]) -> LayerMatching {
        LayerMatching::new(r(lower), r(upper), perm.iter().enumerate().map(|(i, &j)| (i, j)).collect())
    }

    #[test]
    fn span_directions() {
        let m = LayerMatching::new(r(&[5, 1]), r(&[2, 6]), vec![(0, 0), (1, 1)]);
        let s = spans_of(&m).unwrap();
        assert_eq!((s[0].left, s[0].right, s[0].direction), (Rational::integer(2), Rational::integer(5), Some(Direction::LeftGoing)));
        assert_eq!(s[1].direction, Some(Direction::RightGoing));
    }

    #[test]
    fn identity_matching_uses_one_track() {
        let m = matching(&[1, 2, 3], &[1, 2, 3], &[0, 1, 2]);
        let a = route_tracks(&m).unwrap();
        assert_eq!(a, TrackAssignment { tracks: vec![1, 1, 1], num_tracks: 1 });
    }

    #[test]
    fn left_going_chain_ascends() {
        // spans [1,4], [3,6], [5,8] with left ends on the upper layer
        let m = matching(&[4, 6, 8], &[1, 3, 5], &[0, 1, 2]);
        let a = route_tracks(&m).unwrap();
        assert_eq!(a.tracks, vec![1, 2, 3]);
        check_assignment(&m, &a).unwrap();
    }

    #[test]
    fn disjoint_spans_share_a_track() {
        let m = matching(&[2, 5, 8], &[1, 4, 7], &[0, 1, 2]);
        assert_eq!(route_tracks(&m).unwrap().num_tracks, 1);
    }

    #[test]
    fn mirror_instance_doubles() {
        let left = matching(&[4, 6, 8], &[1, 3, 5], &[0, 1, 2]);
        let one = route_tracks(&left).unwrap().num_tracks;
        let m = LayerMatching::new(
            r(&[4, 6, 8, 101, 103, 105]),
            r(&[1, 3, 5, 104, 106, 108]),
            (0..6).map(|i| (i, i)).collect(),
        );
        let a = route_tracks(&m).unwrap();
        assert_eq!(a.num_tracks, 2 * one);
        assert!(a.tracks[..3].iter().all(|&t| t <= one) && a.tracks[3..].iter().all(|&t| t > one));
    }

    #[test]
    fn rejects_bad_matchings() {
        assert!(matches!(
            LayerMatching::new(r(&[1, 1]), r(&[1, 2]), vec![(0, 0), (1, 1)]).validate(),
            Err(RoutingError::DuplicateCoordinate { .. })
        ));
        assert_eq!(LayerMatching::new(r(&[1, 2]), r(&[1, 2]), vec![(0, 0), (1, 0)]).validate(), Err(RoutingError::NotBijection));
    }

    #[test]
    fn empty_matching_renders_blank_canvas() {
        let m = LayerMatching::new(vec![], vec![], vec![]);
        let svg = render_svg(&m, &route_tracks(&m).unwrap());
        assert!(!svg.contains("<path") && !svg.contains("<circle"));
    }

    #[test]
    fn overlapping_left_pair_does_not_cross() {
        let m = matching(&[4, 6], &[1, 3], &[0, 1]);
        let a = route_tracks(&m).unwrap();
        let paths = edge_paths(&m, &a);
        assert_eq!(pair_crossings(&paths[0], &paths[1]), 0);
        let swapped = TrackAssignment { tracks: vec![2, 1], num_tracks: 2 };
        let paths = edge_paths(&m, &swapped);
        assert_eq!(pair_crossings(&paths[0], &paths[1]), 2);
    }

    fn arb_matching(max: usize) -> impl Strategy<Value = LayerMatching> {
        (1..=max).prop_flat_map(|n| {
            (
                Just(n),
                prop::sample::subsequence((0..3 * n as i64).collect::<Vec<_>>(), n),
                prop::sample::subsequence((0..3 * n as i64).collect::<Vec<_>>(), n),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
                .prop_map(|(_, lo, up, perm)| matching(&lo, &up, &perm))
        })
    }

    proptest! {
        #[test]
        fn assignments_are_valid_and_crossing_free(m in arb_matching(40)) {
            let a = route_tracks(&m).unwrap();
            prop_assert_eq!(check_assignment(&m, &a), Ok(()));
            for (_, _, c) in same_direction_crossings(&m, &a).unwrap() {
                prop_assert!(c <= 1);
            }
            prop_assert_eq!(render_svg(&m, &a), render_svg(&m, &a));
        }

        #[test]
        fn at_most_twice_optimal(m in arb_matching(9)) {
            let a = route_tracks(&m).unwrap();
            let g = build_bidirectional_graph(&span_intervals(&spans_of(&m).unwrap())).unwrap();
            let chi = match exact_chromatic(&g, 16).unwrap() {
                ExactResult::Colorable { chromatic_number, .. } => chromatic_number,
                ExactResult::Infeasible => unreachable!(),
            };
            prop_assert!(a.num_tracks <= 2 * chi.max(1));
        }
    }
}
