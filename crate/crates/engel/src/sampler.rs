//! Deterministic seeded sampling of points, times, and grids.
//!
//! Every randomized check in the crate draws from a ChaCha generator
//! seeded explicitly (default seed 0), so identical configuration yields
//! identical samples, reports, and output files.

use crate::extreal::ExtReal;
use crate::point::Point;
use crate::sets::CalibratedSetSpec;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Evenly spaced values including both endpoints.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least two nodes");
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}

/// Sampling region and budget for membership-based checks.
#[derive(Clone, Copy, Debug)]
pub struct SampleSpace {
    pub seed: u64,
    /// Number of base points to draw.
    pub count: usize,
    pub x1: (f64, f64),
    pub x3: (f64, f64),
    pub x4: (f64, f64),
    /// Cap on the sampled height above the graph (and on |x2| for fibers
    /// entirely inside the set).
    pub height_max: f64,
    /// Cap on sampled flow times.
    pub t_max: f64,
    /// Flow times drawn per base point.
    pub times_per_point: usize,
}

impl Default for SampleSpace {
    fn default() -> Self {
        SampleSpace {
            seed: 0,
            count: 10_000,
            x1: (-5.0, 5.0),
            x3: (-5.0, 5.0),
            x4: (-5.0, 5.0),
            height_max: 2.0,
            t_max: 4.0,
            times_per_point: 4,
        }
    }
}

impl SampleSpace {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_count(mut self, count: usize) -> Self {
        self.count = count;
        self
    }

    /// Draw a point of the open set. Heights above the graph are biased
    /// toward zero (cubed uniform), because monotonicity violations of
    /// near-calibrated sets live just above the graph. Returns `None` if
    /// all attempted fibers were empty (graph `+inf`).
    pub fn sample_in_set(
        &self,
        spec: &CalibratedSetSpec,
        rng: &mut impl Rng,
    ) -> Option<Point> {
        for _ in 0..64 {
            let x1 = rng.random_range(self.x1.0..=self.x1.1);
            let x3 = rng.random_range(self.x3.0..=self.x3.1);
            let x4 = rng.random_range(self.x4.0..=self.x4.1);
            match spec.eval_graph(x3, x4) {
                ExtReal::PosInf => continue, // empty fiber; try another
                ExtReal::NegInf => {
                    let x2 = rng.random_range(-self.height_max..=self.height_max);
                    return Some(Point::new(x1, x2, x3, x4));
                }
                ExtReal::Finite(g) => {
                    let u: f64 = rng.random_range(0.0_f64..1.0);
                    let delta = self.height_max * u * u * u + 1e-12;
                    return Some(Point::new(x1, g + delta, x3, x4));
                }
            }
        }
        None
    }

    /// A positive flow time, log-uniform over about four decades below
    /// `t_max` so that both tiny and order-one times are exercised.
    pub fn positive_time(&self, rng: &mut impl Rng) -> f64 {
        let u: f64 = rng.random_range(0.0_f64..=1.0);
        self.t_max * 10f64.powf(-4.0 * u)
    }
}
