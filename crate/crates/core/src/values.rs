//! Closed-form value functions, payoffs and the scalar functions whose
//! extrema pick the thresholds.
//!
//! Every function of `(t, x)` here depends on `x` only through the scaled
//! coordinate `y = x/√(1−t)` and a power of `1−t`.

use crate::error::{Error, Result};
use crate::special::{at_default as sf, big_f1_closed, big_g1_closed, normal_cdf};
use crate::thresholds::{ProblemKind, ThresholdSet};
use serde::{Deserialize, Serialize};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// A state `(t, x)` of the bridge with `0 ≤ t < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacePoint {
    t: f64,
    x: f64,
}

impl SpacePoint {
    pub fn new(t: f64, x: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::domain(format!("time must lie in [0, 1), got t = {t}")));
        }
        if !x.is_finite() {
            return Err(Error::domain(format!("position must be finite, got x = {x}")));
        }
        Ok(Self { t, x })
    }

    /// Point at time `t` with scaled coordinate `y`.
    pub fn from_scaled(t: f64, y: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::domain(format!("time must lie in [0, 1), got t = {t}")));
        }
        Self::new(t, y * (1.0 - t).sqrt())
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn remaining(&self) -> f64 {
        1.0 - self.t
    }

    /// `x/√(1−t)`.
    pub fn scaled(&self) -> f64 {
        self.x / self.remaining().sqrt()
    }

    pub fn mirrored(&self) -> Self {
        Self { t: self.t, x: -self.x }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Continuation,
    Stopping,
}

/// A value together with the region of the state and the active boundary
/// level in scaled coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueBreakdown {
    pub value: f64,
    pub region: Region,
    pub boundary: f64,
}

fn odd_power(x: f64, n: u32) -> f64 {
    x.powi(2 * n as i32 + 1)
}

// ---------------------------------------------------------------------------
// Single stopping
// ---------------------------------------------------------------------------

/// `U(t,x) = sup E[X_τ^{2n+1}]`, attained at the first time `X ≥ B*√(1−s)`.
pub fn u_value(n: u32, point: SpacePoint, b_star: f64) -> Result<ValueBreakdown> {
    let y = point.scaled();
    if y >= b_star {
        return Ok(ValueBreakdown {
            value: odd_power(point.x(), n),
            region: Region::Stopping,
            boundary: b_star,
        });
    }
    let p = 2.0 * n as f64 + 1.0;
    let value = point.remaining().powf(n as f64 + 0.5) * b_star.powf(p) * sf::f(p, y)? / sf::f(p, b_star)?;
    Ok(ValueBreakdown {
        value,
        region: Region::Continuation,
        boundary: b_star,
    })
}

/// `U` for `n = 0` in terms of `Φ`: `√(1−t)(1−(B*)²) F_1(y)` below the
/// boundary, `x` above. Valid only for the solved `B*(0)`.
pub fn u_linear_closed(point: SpacePoint, b_star: f64) -> f64 {
    let y = point.scaled();
    if y >= b_star {
        point.x()
    } else {
        point.remaining().sqrt() * (1.0 - b_star * b_star) * big_f1_closed(y)
    }
}

/// `Ū(t,x) = sup E|X_τ|^q`, attained at the first time `|X| ≥ D*√(1−s)`.
pub fn u_bar_value(q: f64, point: SpacePoint, d_star: f64) -> Result<ValueBreakdown> {
    let y = point.scaled();
    if y.abs() >= d_star {
        return Ok(ValueBreakdown {
            value: point.x().abs().powf(q),
            region: Region::Stopping,
            boundary: d_star,
        });
    }
    let value = point.remaining().powf(0.5 * q) * d_star.powf(q) * sf::fg(q, y)? / sf::fg(q, d_star)?;
    Ok(ValueBreakdown {
        value,
        region: Region::Continuation,
        boundary: d_star,
    })
}

// ---------------------------------------------------------------------------
// Scalar functions
// ---------------------------------------------------------------------------

/// `v(C) = [(1−(B*)²)Φ(C) − C e^{−C²/2}/√(2π)] / Φ(−C)`, for `C ≤ B*`.
pub fn v_scalar(c: f64, b_star: f64) -> f64 {
    ((1.0 - b_star * b_star) * normal_cdf(c) - c * INV_SQRT_2PI * (-0.5 * c * c).exp()) / normal_cdf(-c)
}

/// `u(C) = 1 − (B*)² − (1−C²)Φ(−C) − C e^{−C²/2}/√(2π)`; shares the sign of `v′`.
pub fn u_scalar(c: f64, b_star: f64) -> f64 {
    1.0 - b_star * b_star - (1.0 - c * c) * normal_cdf(-c) - c * INV_SQRT_2PI * (-0.5 * c * c).exp()
}

/// `j(D) = [D^{2n+1} + (B*)^{2n+1} G_{2n+1}(D)/F_{2n+1}(B*)] / (F_{2n+1}+G_{2n+1})(D)`.
pub fn j_scalar(n: u32, d: f64, b_star: f64) -> Result<f64> {
    if !(d >= 0.0) {
        return Err(Error::domain(format!("j(D) needs D >= 0, got {d}")));
    }
    let p = 2.0 * n as f64 + 1.0;
    Ok((d.powf(p) + b_star.powf(p) * sf::g(p, d)? / sf::f(p, b_star)?) / sf::fg(p, d)?)
}

fn check_band(a: f64, d_star: f64) -> Result<()> {
    if !(0.0..=d_star).contains(&a) {
        return Err(Error::domain(format!("A must lie in [0, D*] = [0, {d_star}], got {a}")));
    }
    Ok(())
}

/// `w(A) = [(D*)^q (F_q+G_q)(A)/(F_q+G_q)(D*) − A^q] / G_q(A)` on `[0, D*]`.
pub fn w_scalar(q: f64, a: f64, d_star: f64) -> Result<f64> {
    check_band(a, d_star)?;
    let level = d_star.powf(q) / sf::fg(q, d_star)?;
    Ok((level * sf::fg(q, a)? - a.powf(q)) / sf::g(q, a)?)
}

/// `w′(A)` from the quotient rule. At `A = 0` this is the right limit,
/// which is `−∞` for `q < 1`.
pub fn w_prime(q: f64, a: f64, d_star: f64) -> Result<f64> {
    check_band(a, d_star)?;
    let level = d_star.powf(q) / sf::fg(q, d_star)?;
    let g = sf::g(q, a)?;
    let g_prime = -sf::f(q + 1.0, -a)?;
    let power_slope = if a == 0.0 && q == 1.0 { 1.0 } else { q * a.powf(q - 1.0) };
    let numer = level * sf::fg(q, a)? - a.powf(q);
    Ok((level * sf::fg_prime(q, a)? - power_slope) / g - numer * g_prime / (g * g))
}

// ---------------------------------------------------------------------------
// Payoffs of the outer stopping problems
// ---------------------------------------------------------------------------

/// `f(t,x) = U(t,x) − x` with `n = 0`.
pub fn payoff_f(point: SpacePoint, b_star: f64) -> f64 {
    u_linear_closed(point, b_star) - point.x()
}

/// `g(t,x) = (U(t,x) − x^{2n+1}) 1{x ≤ 0} + (U(t,−x) + x^{2n+1}) 1{x > 0}`.
pub fn payoff_g(n: u32, point: SpacePoint, b_star: f64) -> Result<f64> {
    let x = point.x();
    if x <= 0.0 {
        Ok(u_value(n, point, b_star)?.value - odd_power(x, n))
    } else {
        Ok(u_value(n, point.mirrored(), b_star)?.value + odd_power(x, n))
    }
}

/// `h(t,x) = Ū(t,x) − |x|^q` inside `|x| < D*√(1−t)`, zero outside.
pub fn payoff_h(q: f64, point: SpacePoint, d_star: f64) -> Result<f64> {
    if point.scaled().abs() >= d_star {
        return Ok(0.0);
    }
    Ok(u_bar_value(q, point, d_star)?.value - point.x().abs().powf(q))
}

// ---------------------------------------------------------------------------
// Candidate double-stopping value functions
// ---------------------------------------------------------------------------

/// A candidate value function with its cached constants.
///
/// Each candidate is two smooth branches glued along one or two free
/// boundaries `±level·√(1−t)`. Both branches are exposed separately and can
/// be evaluated on either side of the boundary, which is what the
/// smooth-fit checks differentiate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Candidate {
    /// `V*`: continuation `√(1−t) G_1(y) v(C*)` for `y > C*`, else `f`.
    Problem1 { b_star: f64, c_star: f64, v_at_c: f64 },
    /// `J*`: continuation `(1−t)^{n+½} (F+G)_{2n+1}(y) j(B*)` for `|y| < B*`, else `g`.
    Problem2 { n: u32, b_star: f64, j_at_b: f64 },
    /// `W*`: continuation `(1−t)^{q/2} G_q(|y|) w(A*)` for `|y| > A*`, else `h`.
    Problem3 {
        q: f64,
        d_star: f64,
        a_star: f64,
        w_at_a: f64,
    },
}

impl Candidate {
    pub fn new(thresholds: &ThresholdSet) -> Result<Self> {
        match thresholds.problem.kind {
            ProblemKind::Problem1 => {
                let (b_star, c_star) = (thresholds.b()?, thresholds.c()?);
                Ok(Candidate::Problem1 {
                    b_star,
                    c_star,
                    v_at_c: v_scalar(c_star, b_star),
                })
            }
            ProblemKind::Problem2 => {
                let n = thresholds.problem.n;
                let b_star = thresholds.b()?;
                Ok(Candidate::Problem2 {
                    n,
                    b_star,
                    j_at_b: j_scalar(n, b_star, b_star)?,
                })
            }
            ProblemKind::Problem3 => {
                let q = thresholds.problem.q;
                let (d_star, a_star) = (thresholds.d()?, thresholds.a()?);
                Ok(Candidate::Problem3 {
                    q,
                    d_star,
                    a_star,
                    w_at_a: w_scalar(q, a_star, d_star)?,
                })
            }
        }
    }

    /// Exponent `p` with `value(t,x) = (1−t)^p value(0, x/√(1−t))`.
    pub fn scale_exponent(&self) -> f64 {
        match *self {
            Candidate::Problem1 { .. } => 0.5,
            Candidate::Problem2 { n, .. } => n as f64 + 0.5,
            Candidate::Problem3 { q, .. } => 0.5 * q,
        }
    }

    /// Boundary level in scaled coordinates.
    pub fn level(&self) -> f64 {
        match *self {
            Candidate::Problem1 { c_star, .. } => c_star,
            Candidate::Problem2 { b_star, .. } => b_star,
            Candidate::Problem3 { a_star, .. } => a_star,
        }
    }

    /// Free-boundary positions in `x` at time `t`.
    pub fn boundaries(&self, t: f64) -> Vec<f64> {
        let s = (1.0 - t).sqrt();
        match *self {
            Candidate::Problem1 { c_star, .. } => vec![c_star * s],
            Candidate::Problem2 { b_star, .. } => vec![-b_star * s, b_star * s],
            Candidate::Problem3 { a_star: 0.0, .. } => vec![0.0],
            Candidate::Problem3 { a_star, .. } => vec![-a_star * s, a_star * s],
        }
    }

    pub fn region(&self, point: SpacePoint) -> Region {
        let y = point.scaled();
        let stopping = match *self {
            Candidate::Problem1 { c_star, .. } => y <= c_star,
            Candidate::Problem2 { b_star, .. } => y.abs() >= b_star,
            Candidate::Problem3 { a_star, .. } => y.abs() <= a_star,
        };
        if stopping {
            Region::Stopping
        } else {
            Region::Continuation
        }
    }

    /// The payoff of the outer stopping problem (`f`, `g` or `h`).
    pub fn payoff(&self, point: SpacePoint) -> Result<f64> {
        match *self {
            Candidate::Problem1 { b_star, .. } => Ok(payoff_f(point, b_star)),
            Candidate::Problem2 { n, b_star, .. } => payoff_g(n, point, b_star),
            Candidate::Problem3 { q, d_star, .. } => payoff_h(q, point, d_star),
        }
    }

    /// The continuation formula, evaluated wherever it is defined.
    pub fn continuation_branch(&self, point: SpacePoint) -> Result<f64> {
        let y = point.scaled();
        let r = point.remaining();
        match *self {
            Candidate::Problem1 { v_at_c, .. } => Ok(r.sqrt() * big_g1_closed(y) * v_at_c),
            Candidate::Problem2 { n, j_at_b, .. } => {
                Ok(r.powf(n as f64 + 0.5) * sf::fg(2.0 * n as f64 + 1.0, y)? * j_at_b)
            }
            Candidate::Problem3 { q, w_at_a, .. } => Ok(r.powf(0.5 * q) * sf::g(q, y.abs())? * w_at_a),
        }
    }

    /// The stopping formula; equals the payoff.
    pub fn stopping_branch(&self, point: SpacePoint) -> Result<f64> {
        self.payoff(point)
    }

    pub fn value(&self, point: SpacePoint) -> Result<ValueBreakdown> {
        let region = self.region(point);
        let value = match region {
            Region::Stopping => self.stopping_branch(point)?,
            Region::Continuation => self.continuation_branch(point)?,
        };
        Ok(ValueBreakdown {
            value,
            region,
            boundary: self.level(),
        })
    }
}

/// `V*(t,x)`, the value of Problem 1.
pub fn v_star(point: SpacePoint, thresholds: &ThresholdSet) -> Result<ValueBreakdown> {
    expect_kind(thresholds, ProblemKind::Problem1)?;
    Candidate::new(thresholds)?.value(point)
}

/// `J*(t,x)`, the value of Problem 2.
pub fn j_star(n: u32, point: SpacePoint, thresholds: &ThresholdSet) -> Result<ValueBreakdown> {
    expect_kind(thresholds, ProblemKind::Problem2)?;
    if thresholds.problem.n != n {
        return Err(Error::domain(format!(
            "thresholds solved for n = {}, asked for n = {n}",
            thresholds.problem.n
        )));
    }
    Candidate::new(thresholds)?.value(point)
}

/// `W*(t,x)`, the value of Problem 3.
pub fn w_star(q: f64, point: SpacePoint, thresholds: &ThresholdSet) -> Result<ValueBreakdown> {
    expect_kind(thresholds, ProblemKind::Problem3)?;
    if thresholds.problem.q != q {
        return Err(Error::domain(format!(
            "thresholds solved for q = {}, asked for q = {q}",
            thresholds.problem.q
        )));
    }
    Candidate::new(thresholds)?.value(point)
}

fn expect_kind(thresholds: &ThresholdSet, kind: ProblemKind) -> Result<()> {
    if thresholds.problem.kind != kind {
        return Err(Error::domain(format!(
            "thresholds are for {:?}, not {:?}",
            thresholds.problem.kind, kind
        )));
    }
    Ok(())
}
