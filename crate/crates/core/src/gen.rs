//! Seeded random instances: interval sets, layer matchings and CNF formulas.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cnf::Cnf;
use crate::interval::{Direction, Interval};
use crate::rational::Rational;
use crate::routing::LayerMatching;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Independent left endpoints and lengths.
    Uniform,
    /// Half of the intervals are placed inside an earlier one.
    NestedBias,
    /// Half of the intervals start inside the previous one and end after it.
    ChainBias,
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => Ok(Model::Uniform),
            "nested-bias" | "nested" => Ok(Model::NestedBias),
            "chain-bias" | "chain" => Ok(Model::ChainBias),
            _ => Err(format!("unknown model `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceGenerator {
    pub seed: u64,
    pub n: usize,
    /// Endpoints fall in `0..=coordinate_range`.
    pub coordinate_range: i64,
    pub model: Model,
    /// Tag each interval with a random direction.
    pub directions: bool,
}

impl InstanceGenerator {
    pub fn new(seed: u64, n: usize) -> Self {
        InstanceGenerator { seed, n, coordinate_range: (4 * n as i64).max(8), model: Model::Uniform, directions: false }
    }

    pub fn model(mut self, model: Model) -> Self {
        self.model = model;
        self
    }

    pub fn range(mut self, range: i64) -> Self {
        self.coordinate_range = range.max(2);
        self
    }

    pub fn directions(mut self, on: bool) -> Self {
        self.directions = on;
        self
    }

    pub fn intervals(&self) -> Vec<Interval> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let range = self.coordinate_range;
        let max_len = (range / 4).max(1);
        let mut spans: Vec<(i64, i64)> = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let fresh = |rng: &mut ChaCha8Rng| {
                let len = rng.gen_range(1..=max_len);
                let l = rng.gen_range(0..=range - len);
                (l, l + len)
            };
            let biased = i > 0 && rng.gen_bool(0.5);
            let span = match self.model {
                Model::NestedBias if biased => {
                    let (pl, pr) = spans[rng.gen_range(0..i)];
                    if pr - pl >= 2 {
                        let l = rng.gen_range(pl..pr - 1);
                        let r = rng.gen_range(l + 1..pr);
                        (l, r)
                    } else {
                        fresh(&mut rng)
                    }
                }
                Model::ChainBias if biased => {
                    let (pl, pr) = spans[i - 1];
                    let l = rng.gen_range(pl..pr);
                    let r = (pr + rng.gen_range(1..=max_len)).min(range);
                    if r > pr {
                        (l, r)
                    } else {
                        fresh(&mut rng)
                    }
                }
                _ => fresh(&mut rng),
            };
            spans.push(span);
        }
        spans
            .into_iter()
            .enumerate()
            .map(|(i, (l, r))| {
                let iv = Interval::new(format!("v{i}"), l, r);
                if self.directions {
                    let d = if rng.gen_bool(0.5) { Direction::LeftGoing } else { Direction::RightGoing };
                    iv.with_direction(d)
                } else {
                    iv
                }
            })
            .collect()
    }
}

/// `n` intervals whose `2n` endpoints are a random permutation of `0..2n`.
pub fn distinct_endpoint_intervals(n: usize, seed: u64) -> Vec<Interval> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<i64> = (0..2 * n as i64).collect();
    pts.shuffle(&mut rng);
    pts.chunks(2)
        .enumerate()
        .map(|(i, c)| Interval::new(format!("v{i}"), c[0].min(c[1]), c[0].max(c[1])))
        .collect()
}

/// Random perfect matching between two layers of `n` points each, drawn from
/// `0..3n`.
pub fn random_matching(n: usize, seed: u64) -> LayerMatching {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<i64> = (0..3 * n as i64).collect();
    let pick = |rng: &mut ChaCha8Rng| {
        let mut xs: Vec<i64> = pool.choose_multiple(rng, n).copied().collect();
        xs.sort_unstable();
        xs.into_iter().map(Rational::integer).collect::<Vec<_>>()
    };
    let lower = pick(&mut rng);
    let upper = pick(&mut rng);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    LayerMatching::new(lower, upper, perm.into_iter().enumerate().collect())
}

/// Random CNF whose clauses have `1..=width` literals over distinct variables.
pub fn random_cnf(num_vars: usize, num_clauses: usize, width: usize, seed: u64) -> Cnf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<i32> = (1..=num_vars as i32).collect();
    let clauses = (0..num_clauses)
        .map(|_| {
            let w = rng.gen_range(1..=width.min(num_vars));
            vars.choose_multiple(&mut rng, w).map(|&v| if rng.gen_bool(0.5) { v } else { -v }).collect()
        })
        .collect();
    Cnf::new(num_vars, clauses)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        for model in [Model::Uniform, Model::NestedBias, Model::ChainBias] {
            let g = InstanceGenerator::new(3, 50).model(model).directions(true);
            assert_eq!(g.intervals(), g.intervals());
            assert!(g.intervals().iter().all(|iv| iv.left < iv.right && iv.direction.is_some()));
        }
        assert_ne!(InstanceGenerator::new(1, 20).intervals(), InstanceGenerator::new(2, 20).intervals());
        assert_eq!(random_matching(10, 5), random_matching(10, 5));
        assert_eq!(random_cnf(4, 3, 3, 9), random_cnf(4, 3, 3, 9));
    }

    #[test]
    fn distinct_endpoints_are_a_permutation() {
        let ivs = distinct_endpoint_intervals(100, 1);
        let mut pts: Vec<Rational> = ivs.iter().flat_map(|iv| [iv.left, iv.right]).collect();
        pts.sort();
        assert_eq!(pts, (0..200).map(Rational::integer).collect::<Vec<_>>());
    }

    #[test]
    fn matchings_validate() {
        for seed in 0..20 {
            random_matching(seed as usize % 7, seed).validate().unwrap();
        }
    }
}
