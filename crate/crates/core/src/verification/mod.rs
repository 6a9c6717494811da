//! Numerical checks of the optimality conditions and an independent
//! backward-induction oracle for the double stopping values.

mod checks;
mod dp;
mod suite;

pub use checks::{
    check_dominance, check_generator, check_scan, check_smooth_fit, excluded_points, generator, generator_samples,
    pde_residual, scan_maximizer, CheckReport, RegionSample, CHECK_TIMES, DOMINANCE_TOL, GENERATOR_SIGN_TOL,
    GENERATOR_STEP, GENERATOR_ZERO_TOL, SCAN_RESOLUTION, SCAN_TOL, SMOOTH_FIT_STEP, SMOOTH_FIT_TOL,
};
pub use dp::{dp_single_value, dp_value_oracle, DpGrid, Reward};
pub use suite::{check_dp, run_suite, SuiteOptions, DP_TOL};
