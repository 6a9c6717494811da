use super::grid::TimeGrid;
use super::path::BridgePath;
use crate::error::{Error, Result};
use crate::thresholds::{ProblemKind, ThresholdSet};
use serde::{Deserialize, Serialize};

/// A boundary in scaled coordinates; `X_s` is compared with `level·√(1−s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CrossingRule {
    /// `X ≥ B√(1−s)`.
    Up(f64),
    /// `X ≤ C√(1−s)`.
    Down(f64),
    /// `|X| ≥ D√(1−s)`.
    TwoSided(f64),
    /// `|X| ≤ A√(1−s)`, or a sign change between consecutive grid points.
    Inner(f64),
}

impl CrossingRule {
    fn hit(&self, x: f64, sqrt_rem: f64, prev: Option<f64>) -> bool {
        match *self {
            CrossingRule::Up(b) => x >= b * sqrt_rem,
            CrossingRule::Down(c) => x <= c * sqrt_rem,
            CrossingRule::TwoSided(d) => x.abs() >= d * sqrt_rem,
            CrossingRule::Inner(a) => x.abs() <= a * sqrt_rem || prev.is_some_and(|p| p * x < 0.0),
        }
    }
}

/// First grid index `k ≥ from` whose value satisfies `rule`.
pub(crate) fn first_hit(values: &[f64], grid: &TimeGrid, rule: CrossingRule, from: usize) -> Option<usize> {
    let roots = grid.sqrt_remaining();
    (from..values.len()).find(|&k| {
        let prev = if k > from { Some(values[k - 1]) } else { None };
        rule.hit(values[k], roots[k], prev)
    })
}

/// First monitoring index at which the path meets `rule`.
pub fn first_crossing(path: &BridgePath, rule: CrossingRule) -> Option<usize> {
    first_hit(&path.values, &path.grid, rule, 0)
}

/// First monitoring index `k ≥ from` at which the path meets `rule`.
pub fn first_crossing_from(path: &BridgePath, rule: CrossingRule, from: usize) -> Option<usize> {
    first_hit(&path.values, &path.grid, rule, from)
}

/// Which side the second stop of Problem 2 was taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Position {
    Long,
    Short,
}

/// The two stopping times of one path and the realised spread.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StoppingOutcome {
    pub tau1: f64,
    pub tau2: f64,
    pub x1: f64,
    pub x2: f64,
    pub spread: f64,
    /// The first stop fell back to the last monitoring time.
    pub forced_first: bool,
    /// The second stop fell back to the last monitoring time.
    pub forced_second: bool,
    pub position: Option<Position>,
}

/// Threshold levels of a double-stopping strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Strategy {
    Problem1 { b: f64, c: f64 },
    Problem2 { n: u32, b: f64 },
    Problem3 { q: f64, a: f64, d: f64 },
}

impl Strategy {
    pub(crate) fn new(thresholds: &ThresholdSet) -> Result<Self> {
        Ok(match thresholds.problem.kind {
            ProblemKind::Problem1 => Strategy::Problem1 {
                b: thresholds.b()?,
                c: thresholds.c()?,
            },
            ProblemKind::Problem2 => Strategy::Problem2 {
                n: thresholds.problem.n,
                b: thresholds.b()?,
            },
            ProblemKind::Problem3 => Strategy::Problem3 {
                q: thresholds.problem.q,
                a: thresholds.a()?,
                d: thresholds.d()?,
            },
        })
    }

    pub(crate) fn run(&self, values: &[f64], grid: &TimeGrid) -> StoppingOutcome {
        let last = values.len() - 1;
        let times = grid.times();
        let (first_rule, position_of): (CrossingRule, fn(f64) -> Option<Position>) = match *self {
            Strategy::Problem1 { c, .. } => (CrossingRule::Down(c), |_| None),
            Strategy::Problem2 { b, .. } => (CrossingRule::TwoSided(b), |x1| {
                Some(if x1 <= 0.0 { Position::Long } else { Position::Short })
            }),
            Strategy::Problem3 { a, .. } => (CrossingRule::Inner(a), |_| None),
        };
        let hit1 = first_hit(values, grid, first_rule, 0);
        let i1 = hit1.unwrap_or(last);
        let x1 = values[i1];
        let position = position_of(x1);
        let second_rule = match *self {
            Strategy::Problem1 { b, .. } => CrossingRule::Up(b),
            Strategy::Problem2 { b, .. } => match position {
                Some(Position::Short) => CrossingRule::Down(-b),
                _ => CrossingRule::Up(b),
            },
            Strategy::Problem3 { d, .. } => CrossingRule::TwoSided(d),
        };
        let hit2 = if hit1.is_some() {
            first_hit(values, grid, second_rule, i1)
        } else {
            None
        };
        let i2 = hit2.unwrap_or(last);
        let x2 = values[i2];
        let spread = match *self {
            Strategy::Problem1 { .. } => x2 - x1,
            Strategy::Problem2 { n, .. } => {
                let p = 2 * n as i32 + 1;
                match position {
                    Some(Position::Short) => x1.powi(p) - x2.powi(p),
                    _ => x2.powi(p) - x1.powi(p),
                }
            }
            Strategy::Problem3 { q, .. } => x2.abs().powf(q) - x1.abs().powf(q),
        };
        StoppingOutcome {
            tau1: times[i1],
            tau2: times[i2],
            x1,
            x2,
            spread,
            forced_first: hit1.is_none(),
            forced_second: hit2.is_none(),
            position,
        }
    }
}

/// Run the threshold strategy of `thresholds` along `path`. Stops that do
/// not occur on the grid are taken at the last monitoring time `1 − ε`.
pub fn run_strategy(thresholds: &ThresholdSet, path: &BridgePath) -> Result<StoppingOutcome> {
    if path.values.len() != path.grid.len() {
        return Err(Error::config("path length does not match its grid"));
    }
    Ok(Strategy::new(thresholds)?.run(&path.values, &path.grid))
}
