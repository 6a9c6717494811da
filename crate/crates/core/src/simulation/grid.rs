use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Uniform,
    /// `1 − s_k = (1 − t0) r^k`, accumulating points near the horizon.
    Geometric,
}

/// The parameters that determine a [`TimeGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub t0: f64,
    pub epsilon: f64,
    /// Number of grid points, including both ends.
    pub n_steps: usize,
    pub spacing: Spacing,
}

impl GridDescriptor {
    pub fn geometric(t0: f64, epsilon: f64, n_steps: usize) -> Self {
        Self {
            t0,
            epsilon,
            n_steps,
            spacing: Spacing::Geometric,
        }
    }

    pub fn uniform(t0: f64, epsilon: f64, n_steps: usize) -> Self {
        Self {
            t0,
            epsilon,
            n_steps,
            spacing: Spacing::Uniform,
        }
    }
}

/// Strictly increasing monitoring times `t0 = s_0 < … < s_{N−1} = 1 − ε`
/// with the one-step bridge transition coefficients precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    descriptor: GridDescriptor,
    times: Vec<f64>,
    sqrt_remaining: Vec<f64>,
    /// `(1 − s_{k+1})/(1 − s_k)`, the mean factor of step `k`.
    mean_factor: Vec<f64>,
    /// Standard deviation of step `k`.
    step_std: Vec<f64>,
}

impl TimeGrid {
    pub fn new(descriptor: GridDescriptor) -> Result<Self> {
        let GridDescriptor {
            t0,
            epsilon,
            n_steps,
            spacing,
        } = descriptor;
        if !(epsilon > 0.0) || !(t0 >= 0.0) || !(t0 < 1.0 - epsilon) {
            return Err(Error::config(format!(
                "time grid needs 0 <= t0 < 1 - epsilon with epsilon > 0, got t0 = {t0}, epsilon = {epsilon}"
            )));
        }
        if n_steps < 2 {
            return Err(Error::config(format!("time grid needs n_steps >= 2, got {n_steps}")));
        }
        let last = 1.0 - epsilon;
        let span = (n_steps - 1) as f64;
        let mut times: Vec<f64> = match spacing {
            Spacing::Uniform => (0..n_steps).map(|k| t0 + (last - t0) * k as f64 / span).collect(),
            Spacing::Geometric => {
                let log_ratio = (epsilon / (1.0 - t0)).ln() / span;
                (0..n_steps)
                    .map(|k| 1.0 - (1.0 - t0) * (log_ratio * k as f64).exp())
                    .collect()
            }
        };
        times[0] = t0;
        times[n_steps - 1] = last;
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::config(format!(
                "time grid with {n_steps} points on [{t0}, {last}] is not strictly increasing in f64"
            )));
        }
        Ok(Self::from_times(descriptor, times))
    }

    fn from_times(descriptor: GridDescriptor, times: Vec<f64>) -> Self {
        let sqrt_remaining = times.iter().map(|s| (1.0 - s).sqrt()).collect();
        let (mean_factor, step_std) = times
            .windows(2)
            .map(|w| {
                let (t, u) = (w[0], w[1]);
                let a = (1.0 - u) / (1.0 - t);
                (a, ((u - t) * a).sqrt())
            })
            .unzip();
        Self {
            descriptor,
            times,
            sqrt_remaining,
            mean_factor,
            step_std,
        }
    }

    pub fn descriptor(&self) -> GridDescriptor {
        self.descriptor
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `√(1 − s_k)`.
    pub fn sqrt_remaining(&self) -> &[f64] {
        &self.sqrt_remaining
    }

    pub(crate) fn step(&self, k: usize) -> (f64, f64) {
        (self.mean_factor[k], self.step_std[k])
    }

    /// Every `factor`-th point; requires `factor` to divide `n_steps − 1`.
    pub fn coarsened(&self, factor: usize) -> Result<Self> {
        let n = self.len();
        if factor == 0 || !(n - 1).is_multiple_of(factor) {
            return Err(Error::config(format!("cannot coarsen a {n}-point grid by {factor}")));
        }
        let times: Vec<f64> = self.times.iter().step_by(factor).copied().collect();
        let descriptor = GridDescriptor {
            n_steps: times.len(),
            ..self.descriptor
        };
        Ok(Self::from_times(descriptor, times))
    }

    /// Grid with every interval halved; contains this grid as a subsequence.
    pub fn refined(&self) -> Result<Self> {
        Self::new(GridDescriptor {
            n_steps: 2 * self.len() - 1,
            ..self.descriptor
        })
    }
}
