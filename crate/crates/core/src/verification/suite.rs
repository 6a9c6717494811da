use super::checks::{check_dominance, check_generator, check_scan, check_smooth_fit, label, CheckReport, CHECK_TIMES};
use super::dp::{dp_value_oracle, DpGrid};
use crate::error::Result;
use crate::thresholds::ThresholdSet;
use crate::values::{Candidate, SpacePoint};

/// Relative tolerance of the DP oracle against the closed form.
pub const DP_TOL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub smooth_fit_times: Vec<f64>,
    /// Lattice for the DP comparison at the start point; `None` skips it.
    pub dp_grid: Option<DpGrid>,
    pub start: SpacePoint,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            smooth_fit_times: vec![0.0, 0.5, 0.9],
            dp_grid: Some(DpGrid::new(400, 600)),
            start: SpacePoint::new(0.0, 0.0).expect("origin is a valid point"),
        }
    }
}

/// Relative gap between the DP oracle and the closed-form value at `start`.
pub fn check_dp(thresholds: &ThresholdSet, start: SpacePoint, grid: &DpGrid) -> Result<CheckReport> {
    let closed = Candidate::new(thresholds)?.value(start)?.value;
    let dp = dp_value_oracle(thresholds.problem, start, grid)?;
    Ok(CheckReport::new(
        format!("dp_oracle/{}", label(thresholds)),
        ((dp - closed) / closed).abs(),
        DP_TOL,
        format!(
            "{}x{} lattice at (t = {}, x = {})",
            grid.n_time,
            grid.n_space,
            start.t(),
            start.x()
        ),
    ))
}

/// Every check for one problem: smooth fit, generator, dominance, scan
/// and, if configured, the DP oracle.
pub fn run_suite(thresholds: &ThresholdSet, options: &SuiteOptions) -> Result<Vec<CheckReport>> {
    let mut reports = vec![check_smooth_fit(thresholds, &options.smooth_fit_times)?];
    reports.extend(check_generator(thresholds)?);
    reports.push(check_dominance(thresholds, &CHECK_TIMES, -5.0, 5.0, 0.01)?);
    reports.push(check_scan(thresholds)?);
    if let Some(grid) = &options.dp_grid {
        reports.push(check_dp(thresholds, options.start, grid)?);
    }
    Ok(reports)
}
