//! Optimal double stopping of a Brownian bridge.
//!
//! A Brownian bridge `dX_s = −X_s/(1−s) ds + dW_s` pinned at zero at time
//! one is stopped twice, `τ₁ ≤ τ₂ < 1`, to maximise one of three expected
//! spreads:
//!
//! 1. `E[X_{τ₂} − X_{τ₁}]` (buy, then sell),
//! 2. the odd-power spread where the sign of `X_{τ₁}` picks long or short,
//! 3. `E[|X_{τ₂}|^q − |X_{τ₁}|^q]`.
//!
//! Each optimum is a threshold rule on the scaled process `X_s/√(1−s)`.
//! The crate solves the thresholds ([`thresholds`]), evaluates the value
//! functions in closed form ([`values`]), simulates the strategies
//! ([`simulation`]) and checks optimality numerically ([`verification`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod roots;
pub mod simulation;
pub mod special;
pub mod thresholds;
pub mod values;
pub mod verification;

pub use error::{Error, Result};
pub use thresholds::{ProblemKind, ProblemSpec, ThresholdSet};
pub use values::{Region, SpacePoint, ValueBreakdown};
