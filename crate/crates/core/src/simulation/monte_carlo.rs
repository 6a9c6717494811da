use super::grid::{GridDescriptor, TimeGrid};
use super::path::{fill_path, SeedRecord};
use super::strategy::{StoppingOutcome, Strategy};
use crate::error::{Error, Result};
use crate::thresholds::ThresholdSet;
use crate::values::{Candidate, SpacePoint};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Smallest sample accepted by the estimators.
pub const MIN_PATHS: usize = 100;

const BIAS_NOTE: &str =
    "discrete monitoring can only miss crossings, so the estimate is biased low by O(sqrt(max step))";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MCReport {
    pub mean: f64,
    pub std_error: f64,
    pub n_paths: usize,
    /// Closed-form optimal value at the start point.
    pub analytic: f64,
    /// `(mean − analytic)/std_error`.
    pub z_score: f64,
    pub grid: GridDescriptor,
    pub base_seed: u64,
    pub forced_first: usize,
    pub forced_second: usize,
    pub bias_note: String,
}

/// Paired estimates of two strategies on common paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub reference: MCReport,
    pub alternative: MCReport,
    /// Mean of `alternative − reference` path by path.
    pub paired_difference: f64,
    pub paired_std_error: f64,
}

fn check_inputs(start: SpacePoint, grid: &TimeGrid, n_paths: usize) -> Result<()> {
    if n_paths < MIN_PATHS {
        return Err(Error::config(format!(
            "Monte Carlo needs at least {MIN_PATHS} paths, got {n_paths}"
        )));
    }
    if grid.times()[0] != start.t() {
        return Err(Error::config(format!(
            "grid starts at {} but the start point has t = {}",
            grid.times()[0],
            start.t()
        )));
    }
    Ok(())
}

/// Per-path outcomes of several strategies driven by the same paths; path
/// `i` uses stream `i` of `base_seed`, so results do not depend on the
/// thread count.
fn outcomes_for(
    strategies: &[Strategy],
    start: SpacePoint,
    grid: &TimeGrid,
    n_paths: usize,
    base_seed: u64,
) -> Vec<Vec<StoppingOutcome>> {
    (0..n_paths as u64)
        .into_par_iter()
        .map_init(Vec::new, |buf, stream| {
            let mut rng = SeedRecord { base_seed, stream }.rng();
            fill_path(grid, start.x(), &mut rng, buf);
            strategies.iter().map(|s| s.run(buf, grid)).collect()
        })
        .collect()
}

/// Outcomes of the strategy of `thresholds` on `n_paths` paths from `start`.
pub fn mc_outcomes(
    thresholds: &ThresholdSet,
    start: SpacePoint,
    grid: &TimeGrid,
    n_paths: usize,
    base_seed: u64,
) -> Result<Vec<StoppingOutcome>> {
    check_inputs(start, grid, n_paths)?;
    let strategy = Strategy::new(thresholds)?;
    Ok(outcomes_for(&[strategy], start, grid, n_paths, base_seed)
        .into_iter()
        .map(|mut v| v.remove(0))
        .collect())
}

fn mean_and_se(xs: impl Iterator<Item = f64> + Clone, n: usize) -> (f64, f64) {
    let mean = xs.clone().sum::<f64>() / n as f64;
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn optimal_value(thresholds: &ThresholdSet, start: SpacePoint) -> Result<f64> {
    let optimal = ThresholdSet::solve(thresholds.problem)?;
    Ok(Candidate::new(&optimal)?.value(start)?.value)
}

fn report(outcomes: &[StoppingOutcome], analytic: f64, grid: &TimeGrid, base_seed: u64) -> MCReport {
    let n = outcomes.len();
    let (mean, std_error) = mean_and_se(outcomes.iter().map(|o| o.spread), n);
    MCReport {
        mean,
        std_error,
        n_paths: n,
        analytic,
        z_score: (mean - analytic) / std_error,
        grid: grid.descriptor(),
        base_seed,
        forced_first: outcomes.iter().filter(|o| o.forced_first).count(),
        forced_second: outcomes.iter().filter(|o| o.forced_second).count(),
        bias_note: BIAS_NOTE.to_string(),
    }
}

/// Monte Carlo estimate of the expected spread of the strategy of
/// `thresholds` from `start`. The reported analytic value is the optimum
/// for the same problem, whatever levels `thresholds` carries.
pub fn mc_estimate(
    thresholds: &ThresholdSet,
    start: SpacePoint,
    grid: &TimeGrid,
    n_paths: usize,
    base_seed: u64,
) -> Result<MCReport> {
    let outcomes = mc_outcomes(thresholds, start, grid, n_paths, base_seed)?;
    Ok(report(&outcomes, optimal_value(thresholds, start)?, grid, base_seed))
}

/// Estimates for `reference` and `alternative` on common random numbers.
pub fn mc_compare(
    reference: &ThresholdSet,
    alternative: &ThresholdSet,
    start: SpacePoint,
    grid: &TimeGrid,
    n_paths: usize,
    base_seed: u64,
) -> Result<Comparison> {
    check_inputs(start, grid, n_paths)?;
    if reference.problem != alternative.problem {
        return Err(Error::config("compared strategies must solve the same problem"));
    }
    let strategies = [Strategy::new(reference)?, Strategy::new(alternative)?];
    let rows = outcomes_for(&strategies, start, grid, n_paths, base_seed);
    let (refs, alts): (Vec<_>, Vec<_>) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
    let analytic = optimal_value(reference, start)?;
    let (paired_difference, paired_std_error) =
        mean_and_se(refs.iter().zip(&alts).map(|(r, a)| a.spread - r.spread), n_paths);
    Ok(Comparison {
        reference: report(&refs, analytic, grid, base_seed),
        alternative: report(&alts, analytic, grid, base_seed),
        paired_difference,
        paired_std_error,
    })
}

/// Estimates on `levels` nested grids, coarsest first; grid `k` keeps every
/// `2^(levels−1−k)`-th point of `finest`. Each path is drawn once on
/// `finest` and monitored on every level, so the levels differ only by
/// their monitoring times.
pub fn mc_grid_study(
    thresholds: &ThresholdSet,
    start: SpacePoint,
    finest: &TimeGrid,
    levels: usize,
    n_paths: usize,
    base_seed: u64,
) -> Result<Vec<MCReport>> {
    if levels == 0 {
        return Err(Error::config("grid study needs at least one level"));
    }
    check_inputs(start, finest, n_paths)?;
    let strategy = Strategy::new(thresholds)?;
    let strides: Vec<usize> = (0..levels).map(|k| 1 << (levels - 1 - k)).collect();
    let grids = strides
        .iter()
        .map(|&s| finest.coarsened(s))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<StoppingOutcome>> = (0..n_paths as u64)
        .into_par_iter()
        .map_init(
            || (Vec::new(), Vec::new()),
            |(fine, coarse), stream| {
                let mut rng = SeedRecord { base_seed, stream }.rng();
                fill_path(finest, start.x(), &mut rng, fine);
                strides
                    .iter()
                    .zip(&grids)
                    .map(|(&stride, grid)| {
                        coarse.clear();
                        coarse.extend(fine.iter().step_by(stride));
                        strategy.run(coarse, grid)
                    })
                    .collect()
            },
        )
        .collect();
    let analytic = optimal_value(thresholds, start)?;
    Ok((0..levels)
        .map(|k| {
            let level: Vec<StoppingOutcome> = rows.iter().map(|r| r[k]).collect();
            report(&level, analytic, &grids[k], base_seed)
        })
        .collect())
}
