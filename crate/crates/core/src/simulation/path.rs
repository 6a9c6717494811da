use super::grid::TimeGrid;
use crate::error::{Error, Result};
use crate::values::SpacePoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Identifies the random stream a path was drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub base_seed: u64,
    pub stream: u64,
}

impl SeedRecord {
    /// ChaCha8 keyed by `base_seed`, positioned on stream `stream`; streams
    /// are independent, so path `i` can be drawn on any worker.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.base_seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// One exact draw of `X_u` given `X_t = x`:
/// `Normal(x(1−u)/(1−t), (u−t)(1−u)/(1−t))`.
pub fn bridge_step<R: Rng + ?Sized>(t: f64, x: f64, u: f64, rng: &mut R) -> Result<f64> {
    if !(u > t) || !(u < 1.0) || !(t >= 0.0) {
        return Err(Error::domain(format!(
            "bridge step needs 0 <= t < u < 1, got t = {t}, u = {u}"
        )));
    }
    let a = (1.0 - u) / (1.0 - t);
    let z: f64 = rng.sample(StandardNormal);
    Ok(a * x + ((u - t) * a).sqrt() * z)
}

/// Fill `out` with a path on `grid` started from `x0` at `grid.times()[0]`.
pub(crate) fn fill_path<R: Rng + ?Sized>(grid: &TimeGrid, x0: f64, rng: &mut R, out: &mut Vec<f64>) {
    out.clear();
    out.reserve(grid.len());
    out.push(x0);
    let mut x = x0;
    for k in 0..grid.len() - 1 {
        let (a, sd) = grid.step(k);
        let z: f64 = rng.sample(StandardNormal);
        x = a * x + sd * z;
        out.push(x);
    }
}

/// A sampled bridge path on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgePath {
    pub grid: Arc<TimeGrid>,
    pub values: Vec<f64>,
    pub start: SpacePoint,
    pub seed: SeedRecord,
}

/// Sample a path from `start`; the grid must begin at `start.t()`.
pub fn simulate_path(start: SpacePoint, grid: Arc<TimeGrid>, seed: SeedRecord) -> Result<BridgePath> {
    if grid.times()[0] != start.t() {
        return Err(Error::config(format!(
            "grid starts at {} but the path starts at t = {}",
            grid.times()[0],
            start.t()
        )));
    }
    let mut values = Vec::new();
    fill_path(&grid, start.x(), &mut seed.rng(), &mut values);
    Ok(BridgePath {
        grid,
        values,
        start,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::grid::GridDescriptor;

    #[test]
    fn step_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(bridge_step(0.5, 0.0, 0.5, &mut rng).is_err());
        assert!(bridge_step(0.5, 0.0, 1.0, &mut rng).is_err());
        assert!(bridge_step(0.5, 0.0, 0.4, &mut rng).is_err());
    }

    #[test]
    fn pinning_near_horizon() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = 1.0 - 1e-12;
        let draws: Vec<f64> = (0..1000).map(|_| bridge_step(0.5, 3.0, u, &mut rng).unwrap()).collect();
        assert!(draws.iter().all(|x| x.abs() < 1e-4));
    }

    #[test]
    fn step_moments_match_transition() {
        // (t, x, u) = (0, 0, 0.5): mean 0, variance 1/4; and one shifted case
        for &(t, x, u) in &[(0.0, 0.0, 0.5), (0.3, 1.2, 0.8)] {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let n = 1_000_000;
            let mean_w = x * (1.0 - u) / (1.0 - t);
            let var_w = (u - t) * (1.0 - u) / (1.0 - t);
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let d = bridge_step(t, x, u, &mut rng).unwrap() - mean_w;
                s1 += d;
                s2 += d * d;
            }
            let mean = s1 / n as f64;
            let var = s2 / n as f64 - mean * mean;
            let se_mean = (var_w / n as f64).sqrt();
            let se_var = var_w * (2.0 / n as f64).sqrt();
            assert!(mean.abs() < 4.0 * se_mean, "mean offset {mean}");
            assert!((var - var_w).abs() < 4.0 * se_var, "var {var} vs {var_w}");
        }
    }

    #[test]
    fn path_starts_at_start_and_ends_at_cutoff() {
        let grid = Arc::new(TimeGrid::new(GridDescriptor::geometric(0.0, 1e-6, 50)).unwrap());
        let start = SpacePoint::new(0.0, 5.0).unwrap();
        let p = simulate_path(
            start,
            grid.clone(),
            SeedRecord {
                base_seed: 3,
                stream: 0,
            },
        )
        .unwrap();
        assert_eq!(p.values[0], 5.0);
        assert_eq!(p.values.len(), 50);
        let two = Arc::new(TimeGrid::new(GridDescriptor::uniform(0.0, 0.5, 2)).unwrap());
        let p = simulate_path(
            start,
            two,
            SeedRecord {
                base_seed: 3,
                stream: 0,
            },
        )
        .unwrap();
        assert_eq!(p.values.len(), 2);
        let late = SpacePoint::new(0.2, 0.0).unwrap();
        assert!(simulate_path(
            late,
            grid,
            SeedRecord {
                base_seed: 3,
                stream: 0
            }
        )
        .is_err());
    }

    #[test]
    fn covariance_of_bridge() {
        // Cov(X_s, X_u) = s(1−u) for s < u
        let grid = Arc::new(TimeGrid::new(GridDescriptor::uniform(0.0, 0.2, 5)).unwrap());
        let (i, j) = (1, 3);
        let (s, u) = (grid.times()[i], grid.times()[j]);
        let start = SpacePoint::new(0.0, 0.0).unwrap();
        let n = 100_000;
        let mut prods = Vec::with_capacity(n);
        for k in 0..n {
            let p = simulate_path(
                start,
                grid.clone(),
                SeedRecord {
                    base_seed: 11,
                    stream: k as u64,
                },
            )
            .unwrap();
            prods.push(p.values[i] * p.values[j]);
        }
        let mean = prods.iter().sum::<f64>() / n as f64;
        let var = prods.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - s * (1.0 - u)).abs() < 5.0 * se, "{mean} vs {}", s * (1.0 - u));
    }

    #[test]
    fn streams_are_reproducible() {
        let s = SeedRecord {
            base_seed: 42,
            stream: 9,
        };
        let a: f64 = s.rng().sample(StandardNormal);
        let b: f64 = s.rng().sample(StandardNormal);
        let c: f64 = SeedRecord { stream: 10, ..s }.rng().sample(StandardNormal);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
