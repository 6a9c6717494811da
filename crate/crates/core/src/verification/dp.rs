use crate::error::{Error, Result};
use crate::special::normal_cdf;
use crate::thresholds::{ProblemKind, ProblemSpec};
use crate::values::SpacePoint;
use serde::{Deserialize, Serialize};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
/// Transition weights beyond this many standard deviations are dropped.
const WINDOW_SD: f64 = 10.0;

/// Time × space lattice for backward induction.
///
/// Time steps are uniform in `θ = −ln(1−t)` from the start time to
/// `1 − epsilon`; space is cut into `n_space` equal intervals of the scaled
/// coordinate `y = x/√(1−t)` on `[−y_max, y_max]`, an even number so that
/// `y = 0` is a node. With these choices the one-step transition of `y` is
/// the same Gaussian at every step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpGrid {
    pub n_time: usize,
    /// Space intervals; the lattice has `n_space + 1` nodes.
    pub n_space: usize,
    pub y_max: f64,
    pub epsilon: f64,
}

impl DpGrid {
    pub const MIN_TIME_STEPS: usize = 50;
    pub const MIN_SPACE_NODES: usize = 100;

    pub fn new(n_time: usize, n_space: usize) -> Self {
        Self {
            n_time,
            n_space,
            y_max: 8.0,
            epsilon: 1e-6,
        }
    }

    /// Both dimensions doubled.
    pub fn refined(&self) -> Self {
        Self {
            n_time: 2 * self.n_time,
            n_space: 2 * self.n_space,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_time < Self::MIN_TIME_STEPS || self.n_space + 1 < Self::MIN_SPACE_NODES {
            return Err(Error::config(format!(
                "DP lattice {}x{} is too coarse; need at least {} time steps and {} space nodes",
                self.n_time,
                self.n_space,
                Self::MIN_TIME_STEPS,
                Self::MIN_SPACE_NODES
            )));
        }
        if !self.n_space.is_multiple_of(2) {
            return Err(Error::config(format!(
                "DP lattice needs an even number of space intervals, got {}",
                self.n_space
            )));
        }
        if !(self.y_max > 0.0) || !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::config(format!(
                "DP lattice needs y_max > 0 and 0 < epsilon < 1, got y_max = {}, epsilon = {}",
                self.y_max, self.epsilon
            )));
        }
        Ok(())
    }
}

/// Payoff of a single stopping problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reward {
    /// `x^{2n+1}`.
    OddPower(u32),
    /// `|x|^q`.
    AbsPower(f64),
}

impl Reward {
    fn at(&self, x: f64) -> f64 {
        match *self {
            Reward::OddPower(n) => x.powi(2 * n as i32 + 1),
            Reward::AbsPower(q) => x.abs().powf(q),
        }
    }
}

struct Lattice {
    times: Vec<f64>,
    ys: Vec<f64>,
    /// Per row: first node index and weights of the expectation functional.
    rows: Vec<(usize, Vec<f64>)>,
}

impl Lattice {
    fn new(t0: f64, grid: &DpGrid) -> Result<Self> {
        grid.validate()?;
        if !(1.0 - t0 > grid.epsilon) {
            return Err(Error::config(format!(
                "start time {t0} is past the DP cutoff 1 - {}",
                grid.epsilon
            )));
        }
        let d_theta = ((1.0 - t0) / grid.epsilon).ln() / grid.n_time as f64;
        let times = (0..=grid.n_time)
            .map(|k| 1.0 - (1.0 - t0) * (-(k as f64) * d_theta).exp())
            .collect();
        let half = grid.n_space / 2;
        let dy = grid.y_max / half as f64;
        let ys: Vec<f64> = (0..=grid.n_space).map(|j| (j as f64 - half as f64) * dy).collect();
        let a = (-0.5 * d_theta).exp();
        let sd = (-(-d_theta).exp_m1()).sqrt();
        let rows = ys.iter().map(|&y| transition_row(a * y, sd, &ys, dy)).collect();
        Ok(Self { times, ys, rows })
    }

    fn expect(&self, i: usize, next: &[f64]) -> f64 {
        let (start, w) = &self.rows[i];
        w.iter().zip(&next[*start..]).map(|(w, v)| w * v).sum()
    }

    /// Backward induction of `max(payoff, E[next])`; returns every slice.
    fn solve(&self, payoff: impl Fn(usize, usize) -> f64) -> Vec<Vec<f64>> {
        let nt = self.times.len();
        let ny = self.ys.len();
        let mut slices = vec![Vec::new(); nt];
        slices[nt - 1] = (0..ny).map(|j| payoff(nt - 1, j)).collect();
        for k in (0..nt - 1).rev() {
            let next = &slices[k + 1];
            let slice = (0..ny).map(|j| payoff(k, j).max(self.expect(j, next))).collect();
            slices[k] = slice;
        }
        slices
    }

    fn x(&self, k: usize, j: usize) -> f64 {
        self.ys[j] * (1.0 - self.times[k]).sqrt()
    }

    fn interpolate(&self, slice: &[f64], y: f64) -> Result<f64> {
        let n = self.ys.len();
        let (lo, hi) = (self.ys[0], self.ys[n - 1]);
        if !(lo..=hi).contains(&y) {
            return Err(Error::domain(format!(
                "scaled start {y} lies outside the DP domain [{lo}, {hi}]"
            )));
        }
        let dy = (hi - lo) / (n - 1) as f64;
        let j = (((y - lo) / dy).floor() as usize).min(n - 2);
        let s = (y - self.ys[j]) / dy;
        Ok(slice[j] * (1.0 - s) + slice[j + 1] * s)
    }
}

/// `E[L(m + sd·ξ)]` for the piecewise-linear interpolant `L` on `ys`,
/// extended linearly past both ends, as weights on the node values.
fn transition_row(m: f64, sd: f64, ys: &[f64], dy: f64) -> (usize, Vec<f64>) {
    let n = ys.len();
    let lo_node = (((m - WINDOW_SD * sd - ys[0]) / dy).floor().max(0.0) as usize).min(n - 2);
    let hi_node = (((m + WINDOW_SD * sd - ys[0]) / dy).ceil().max(1.0) as usize).min(n - 1);
    let hi_node = hi_node.max(lo_node + 1);
    let mut w = vec![0.0; hi_node - lo_node + 1];
    let std = |z: f64| (z - m) / sd;
    let pdf = |u: f64| INV_SQRT_2PI * (-0.5 * u * u).exp();
    for j in lo_node..hi_node {
        let (alpha, beta) = (std(ys[j]), std(ys[j + 1]));
        let p = if alpha > 0.0 {
            normal_cdf(-alpha) - normal_cdf(-beta)
        } else {
            normal_cdf(beta) - normal_cdf(alpha)
        };
        // E[(ξ − α) 1{α < ξ < β}] scaled back to the segment length
        let upper = sd * (pdf(alpha) - pdf(beta) - alpha * p) / dy;
        w[j - lo_node] += p - upper;
        w[j + 1 - lo_node] += upper;
    }
    if lo_node == 0 {
        let alpha = std(ys[0]);
        let p = normal_cdf(alpha);
        let slope = sd * (-pdf(alpha) - alpha * p) / dy;
        w[0] += p - slope;
        w[1] += slope;
    }
    if hi_node == n - 1 {
        let alpha = std(ys[n - 1]);
        let p = normal_cdf(-alpha);
        let slope = sd * (pdf(alpha) - alpha * p) / dy;
        let last = w.len() - 1;
        w[last] += p + slope;
        w[last - 1] -= slope;
    }
    (lo_node, w)
}

/// Backward-induction value of `sup E[reward(X_τ)]` from `start`.
pub fn dp_single_value(reward: Reward, start: SpacePoint, grid: &DpGrid) -> Result<f64> {
    let lattice = Lattice::new(start.t(), grid)?;
    let slices = lattice.solve(|k, j| reward.at(lattice.x(k, j)));
    lattice.interpolate(&slices[0], start.scaled())
}

/// Backward-induction value of the double stopping problem from `start`.
///
/// The inner stage solves the single stopping problem on the lattice and
/// the outer stage uses the inner value, less the first-stop reward, as its
/// payoff. No closed-form value or threshold enters.
pub fn dp_value_oracle(problem: ProblemSpec, start: SpacePoint, grid: &DpGrid) -> Result<f64> {
    let lattice = Lattice::new(start.t(), grid)?;
    let ny = lattice.ys.len();
    let outer = match problem.kind {
        ProblemKind::Problem1 => {
            let inner = lattice.solve(|k, j| lattice.x(k, j));
            lattice.solve(|k, j| inner[k][j] - lattice.x(k, j))
        }
        ProblemKind::Problem2 => {
            let reward = Reward::OddPower(problem.n);
            let inner = lattice.solve(|k, j| reward.at(lattice.x(k, j)));
            lattice.solve(|k, j| {
                let xp = reward.at(lattice.x(k, j));
                if lattice.ys[j] <= 0.0 {
                    inner[k][j] - xp
                } else {
                    inner[k][ny - 1 - j] + xp
                }
            })
        }
        ProblemKind::Problem3 => {
            let reward = Reward::AbsPower(problem.q);
            let inner = lattice.solve(|k, j| reward.at(lattice.x(k, j)));
            lattice.solve(|k, j| inner[k][j] - reward.at(lattice.x(k, j)))
        }
    };
    lattice.interpolate(&outer[0], start.scaled())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_lattice_rejected() {
        let start = SpacePoint::new(0.0, 0.0).unwrap();
        let e = dp_single_value(Reward::OddPower(0), start, &DpGrid::new(49, 600)).unwrap_err();
        assert_eq!(e.code(), "E_CONFIG");
        let e = dp_value_oracle(ProblemSpec::problem1(), start, &DpGrid::new(400, 98)).unwrap_err();
        assert_eq!(e.code(), "E_CONFIG");
        let e = dp_value_oracle(ProblemSpec::problem1(), start, &DpGrid::new(400, 601)).unwrap_err();
        assert_eq!(e.code(), "E_CONFIG");
        assert!(DpGrid::new(50, 100).validate().is_ok());
    }

    #[test]
    fn transition_reproduces_linear_functions() {
        let grid = DpGrid::new(100, 200);
        let lattice = Lattice::new(0.0, &grid).unwrap();
        let a = (-0.5 * ((1.0 / grid.epsilon).ln() / 100.0)).exp();
        let affine: Vec<f64> = lattice.ys.iter().map(|y| 2.0 * y - 1.0).collect();
        for (i, y) in lattice.ys.iter().enumerate() {
            let total: f64 = lattice.rows[i].1.iter().sum();
            assert!((total - 1.0).abs() < 1e-13);
            let e = lattice.expect(i, &affine);
            assert!((e - (2.0 * a * y - 1.0)).abs() < 1e-12, "row {i}");
        }
    }

    #[test]
    fn start_in_stopping_region_stops_at_once() {
        // well above the boundary the linear reward is collected at once
        let start = SpacePoint::new(0.0, 3.0).unwrap();
        let v = dp_single_value(Reward::OddPower(0), start, &DpGrid::new(100, 300)).unwrap();
        assert_eq!(v, 3.0);
    }

    #[test]
    fn outside_domain() {
        let start = SpacePoint::new(0.0, 9.0).unwrap();
        let e = dp_single_value(Reward::AbsPower(2.0), start, &DpGrid::new(60, 120)).unwrap_err();
        assert_eq!(e.code(), "E_DOMAIN");
    }
}
