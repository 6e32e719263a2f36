//! Directional and bidirectional intersection graphs of interval sets.

use crate::graph::MixedGraph;
use crate::interval::{Direction, EndpointOrder, Interval, IntervalError, PairRelation, TieMode};

/// Calls `f(u, v)` for every intersecting pair, `u` starting first in `order`.
fn for_each_intersecting(order: &EndpointOrder, mut f: impl FnMut(usize, usize)) {
    let mut active: Vec<usize> = Vec::new();
    let mut slot = vec![usize::MAX; order.len()];
    for e in &order.events {
        let v = e.interval as usize;
        if e.is_left {
            for &u in &active {
                f(u, v);
            }
            slot[v] = active.len();
            active.push(v);
        } else {
            let s = slot[v];
            let last = active.pop().expect("right event without left");
            if last != v {
                active[s] = last;
                slot[last] = s;
            }
        }
    }
}

fn empty_graph(intervals: &[Interval]) -> MixedGraph {
    // ids were validated unique by the endpoint order
    MixedGraph::new(intervals.iter().map(|iv| iv.id.clone())).expect("unique ids")
}

/// Directional intersection graph: containment gives an edge, overlap gives
/// an arc towards the interval that starts and ends further right.
pub fn build_directional_graph(intervals: &[Interval]) -> Result<MixedGraph, IntervalError> {
    build_directional_graph_with(intervals, TieMode::Perturb)
}

pub fn build_directional_graph_with(
    intervals: &[Interval],
    mode: TieMode,
) -> Result<MixedGraph, IntervalError> {
    let order = EndpointOrder::new(intervals, mode)?;
    let mut g = empty_graph(intervals);
    for_each_intersecting(&order, |u, v| {
        let r = match order.classify(u, v) {
            PairRelation::Edge => g.add_edge_idx(u, v),
            PairRelation::Arc(a, b) => g.add_arc_idx(a, b),
            PairRelation::Independent => unreachable!("active intervals intersect"),
        };
        r.expect("each pair is visited once");
    });
    Ok(g)
}

fn directions(intervals: &[Interval]) -> Result<Vec<Direction>, IntervalError> {
    intervals
        .iter()
        .map(|iv| iv.direction.ok_or_else(|| IntervalError::MissingDirection(iv.id.clone())))
        .collect()
}

/// Bidirectional intersection graph. Left-going pairs follow the directional
/// rule, right-going pairs its mirror image, and intersecting pairs of
/// opposite direction are joined by an edge.
pub fn build_bidirectional_graph(intervals: &[Interval]) -> Result<MixedGraph, IntervalError> {
    let dirs = directions(intervals)?;
    let global = EndpointOrder::new(intervals, TieMode::Perturb)?;
    let mut g = empty_graph(intervals);

    for side in [Direction::LeftGoing, Direction::RightGoing] {
        let members: Vec<usize> = (0..intervals.len()).filter(|&i| dirs[i] == side).collect();
        let sub: Vec<Interval> = members
            .iter()
            .map(|&i| match side {
                Direction::LeftGoing => intervals[i].clone(),
                Direction::RightGoing => intervals[i].reflected(),
            })
            .collect();
        let order = EndpointOrder::new(&sub, TieMode::Perturb)?;
        for_each_intersecting(&order, |u, v| {
            let (gu, gv) = (members[u], members[v]);
            let r = match order.classify(u, v) {
                PairRelation::Edge => g.add_edge_idx(gu, gv),
                // reflection preserves the arc orientation rule of the mirrored class
                PairRelation::Arc(a, b) => g.add_arc_idx(members[a], members[b]),
                PairRelation::Independent => unreachable!(),
            };
            r.expect("each pair is visited once");
        });
    }

    for_each_intersecting(&global, |u, v| {
        if dirs[u] != dirs[v] {
            g.add_edge_idx(u, v).expect("cross pairs are visited once");
        }
    });
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_arc_acyclic, underlying_graph};
    use crate::rational::Rational;
    use proptest::prelude::*;

    /// The three-case rule applied to raw closed intervals. A shared left
    /// endpoint counts as containment of the shorter one.
    fn brute_classify(u: &Interval, v: &Interval) -> Option<Result<(), bool>> {
        let u_first = u.left < v.left || (u.left == v.left && u.right >= v.right);
        let (a, b, swapped) = if u_first { (u, v, false) } else { (v, u, true) };
        if a.right < b.left {
            None
        } else if b.right <= a.right {
            Some(Ok(()))
        } else {
            // arc a -> b; report whether that is u -> v
            Some(Err(!swapped))
        }
    }

    fn brute_force(intervals: &[Interval]) -> MixedGraph {
        let mut g = MixedGraph::new(intervals.iter().map(|i| i.id.clone())).unwrap();
        for i in 0..intervals.len() {
            for j in i + 1..intervals.len() {
                match brute_classify(&intervals[i], &intervals[j]) {
                    None => {}
                    Some(Ok(())) => g.add_edge_idx(i, j).unwrap(),
                    Some(Err(true)) => g.add_arc_idx(i, j).unwrap(),
                    Some(Err(false)) => g.add_arc_idx(j, i).unwrap(),
                }
            }
        }
        g
    }

    fn iv(id: &str, l: i64, r: i64) -> Interval {
        Interval::new(id, l, r)
    }

    #[test]
    fn running_example() {
        let ivs = [iv("a", 0, 10), iv("b", 1, 5), iv("c", 4, 12)];
        let g = build_directional_graph(&ivs).unwrap();
        let expected =
            MixedGraph::from_parts(&["a", "b", "c"], &[("a", "b")], &[("a", "c"), ("b", "c")]).unwrap();
        assert_eq!(g, expected);
        assert_eq!(brute_force(&ivs), expected);
    }

    #[test]
    fn trivial_cases() {
        let g = build_directional_graph(&[iv("a", 0, 1)]).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count(), g.arc_count()), (1, 0, 0));
        let g = build_directional_graph(&[iv("a", 0, 1), iv("b", 2, 3)]).unwrap();
        assert_eq!((g.edge_count(), g.arc_count()), (0, 0));
    }

    #[test]
    fn bidirectional_examples() {
        let l = iv("L", 0, 4).with_direction(Direction::LeftGoing);
        let r = iv("R", 2, 6).with_direction(Direction::RightGoing);
        let g = build_bidirectional_graph(&[l, r]).unwrap();
        assert_eq!(g, MixedGraph::from_parts(&["L", "R"], &[("L", "R")], &[]).unwrap());

        let r1 = iv("R1", 0, 4).with_direction(Direction::RightGoing);
        let r2 = iv("R2", 2, 6).with_direction(Direction::RightGoing);
        let g = build_bidirectional_graph(&[r1, r2]).unwrap();
        assert_eq!(g, MixedGraph::from_parts(&["R1", "R2"], &[], &[("R2", "R1")]).unwrap());

        let n1 = iv("x", 0, 10).with_direction(Direction::RightGoing);
        let n2 = iv("y", 3, 4).with_direction(Direction::RightGoing);
        let g = build_bidirectional_graph(&[n1, n2]).unwrap();
        assert_eq!(g.edge_count(), 1);

        assert!(matches!(
            build_bidirectional_graph(&[iv("a", 0, 1)]),
            Err(IntervalError::MissingDirection(_))
        ));
    }

    #[test]
    fn strict_mode_reports_duplicates() {
        let ivs = [iv("a", 0, 2), iv("b", 2, 4)];
        assert!(matches!(
            build_directional_graph_with(&ivs, TieMode::Strict),
            Err(IntervalError::DuplicateEndpoint { .. })
        ));
    }

    fn arb_intervals(max: usize, range: i64) -> impl Strategy<Value = Vec<Interval>> {
        prop::collection::vec((0..range, 1..range), 0..max).prop_map(|v| {
            v.into_iter()
                .enumerate()
                .map(|(i, (l, len))| Interval::new(format!("v{i}"), l, l + len))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force_with_ties(ivs in arb_intervals(14, 8)) {
            let g = build_directional_graph(&ivs).unwrap();
            prop_assert_eq!(&g, &brute_force(&ivs));
            prop_assert!(check_arc_acyclic(&g));
            for (u, v) in g.arc_indices() {
                prop_assert!(ivs[u].left < ivs[v].left);
            }
        }

        #[test]
        fn underlying_is_intersection_graph(ivs in arb_intervals(14, 20)) {
            let u = underlying_graph(&build_directional_graph(&ivs).unwrap());
            for i in 0..ivs.len() {
                for j in i + 1..ivs.len() {
                    prop_assert_eq!(u.adjacent(i, j), ivs[i].intersects(&ivs[j]));
                }
            }
        }

        #[test]
        fn bidirectional_rule_table(ivs in arb_intervals(10, 12), dirs in prop::collection::vec(any::<bool>(), 10)) {
            let tagged: Vec<Interval> = ivs.into_iter().zip(dirs).map(|(iv, d)| {
                iv.with_direction(if d { Direction::LeftGoing } else { Direction::RightGoing })
            }).collect();
            let g = build_bidirectional_graph(&tagged).unwrap();
            for i in 0..tagged.len() {
                for j in i + 1..tagged.len() {
                    let (a, b) = (&tagged[i], &tagged[j]);
                    let link = g.link(i, j);
                    if !a.intersects(b) {
                        prop_assert_eq!(link, crate::graph::Link::None);
                    } else if a.direction != b.direction {
                        prop_assert_eq!(link, crate::graph::Link::Edge);
                    } else if a.direction == Some(Direction::LeftGoing) {
                        let want = match brute_classify(a, b).unwrap() {
                            Ok(()) => crate::graph::Link::Edge,
                            Err(true) => crate::graph::Link::Forward,
                            Err(false) => crate::graph::Link::Backward,
                        };
                        prop_assert_eq!(link, want);
                    } else {
                        // mirrored rule on reflected coordinates
                        let want = match brute_classify(&a.reflected(), &b.reflected()).unwrap() {
                            Ok(()) => crate::graph::Link::Edge,
                            Err(true) => crate::graph::Link::Forward,
                            Err(false) => crate::graph::Link::Backward,
                        };
                        prop_assert_eq!(link, want);
                        // with distinct endpoints the mirrored rule is l_v < l_u <= r_v < r_u
                        if let crate::graph::Link::Forward = link {
                            let distinct = [a.left, a.right].iter().all(|p| *p != b.left && *p != b.right);
                            if distinct {
                                prop_assert!(b.left < a.left && a.left <= b.right && b.right < a.right);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rational_endpoints() {
        let ivs = [
            Interval::new("a", Rational::new(1, 3), Rational::new(2, 3)),
            Interval::new("b", Rational::new(1, 2), Rational::ONE),
        ];
        let g = build_directional_graph(&ivs).unwrap();
        assert!(g.has_arc(0, 1));
    }
}
