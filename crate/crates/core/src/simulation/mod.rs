//! Exact simulation of the bridge on a time grid and Monte Carlo estimates
//! of threshold strategies.

mod grid;
mod monte_carlo;
mod path;
mod strategy;

pub use grid::{GridDescriptor, Spacing, TimeGrid};
pub use monte_carlo::{mc_compare, mc_estimate, mc_grid_study, mc_outcomes, Comparison, MCReport, MIN_PATHS};
pub use path::{bridge_step, simulate_path, BridgePath, SeedRecord};
pub use strategy::{first_crossing, first_crossing_from, run_strategy, CrossingRule, Position, StoppingOutcome};
