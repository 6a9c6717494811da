//! The functions `F_q(y) = ∫₀^∞ u^{q−1} exp(yu − u²/2) du` and
//! `G_q(y) = F_q(−y)`, which span the solutions of
//! `ζ″ − yζ′ − qζ = 0`, together with the normal distribution function.
//!
//! Evaluation is by direct adaptive quadrature. For `y > 0` the integrand is
//! rewritten as `exp(y²/2) · u^{q−1} exp(−(u−y)²/2)` so that the quadrature
//! sees an O(1) bump and the growth is applied as one exact factor.

mod erf;
mod quadrature;

pub(crate) use erf::normal_cdf;
pub use erf::{erf, erfc, erfcx, phi_cdf, scaled_upper_tail};
pub use quadrature::{QuadratureSettings, SpecialValue};

use crate::error::{Error, Result};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

fn check_args(q: f64, y: f64, settings: &QuadratureSettings) -> Result<()> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::domain(format!("F_q requires finite q > 0, got q = {q}")));
    }
    if !y.is_finite() {
        return Err(Error::domain(format!("F_q requires finite y, got y = {y}")));
    }
    settings.validate()
}

/// Breakpoints in `u` for the half-line integral, truncated at `u_max`.
fn breakpoints(q: f64, y: f64, u_max: f64) -> Vec<f64> {
    let mut pts = vec![0.0, 1.0, u_max];
    if y > 1.0 {
        pts.extend([y - 3.0, y, y + 3.0]);
    } else if y < -1.0 {
        pts.extend([1.0 / -y, 4.0 / -y]);
    }
    if q > 1.0 && q.fract() != 0.0 {
        // non-integer powers have a singular derivative at the origin
        pts.push(1e-3);
    }
    pts.retain(|&p| (0.0..=u_max).contains(&p));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// `F_q(y)` by adaptive quadrature.
///
/// The range is truncated at `u_max = max(y,0) + 2√max(q,1) + 10`, beyond
/// which the integrand is below `1e-21` relative to its peak. For `q < 1`
/// the panel `[0, 1]` is integrated in `v = u^q`, which turns the
/// `u^{q−1}` singularity into the bounded integrand `exp(yu − u²/2)/q`.
pub fn big_f(q: f64, y: f64, settings: &QuadratureSettings) -> Result<SpecialValue> {
    check_args(q, y, settings)?;
    let shift = y.max(0.0);
    let exponent = move |u: f64| {
        if y > 0.0 {
            let d = u - y;
            -0.5 * d * d
        } else {
            u * (y - 0.5 * u)
        }
    };
    let u_max = shift + 2.0 * q.max(1.0).sqrt() + 10.0;
    let breaks = breakpoints(q, y, u_max);

    let scaled = if q < 1.0 {
        let inv_q = 1.0 / q;
        let (head, tail): (Vec<f64>, Vec<f64>) = breaks.iter().partition(|&&u| u <= 1.0);
        let head: Vec<f64> = head.iter().map(|u| u.powf(q)).collect();
        let mut tail_breaks = vec![1.0];
        tail_breaks.extend(tail);
        let near = quadrature::integrate(|v: f64| inv_q * exponent(v.powf(inv_q)).exp(), &head, settings)?;
        let far = quadrature::integrate(|u: f64| u.powf(q - 1.0) * exponent(u).exp(), &tail_breaks, settings)?;
        near + far
    } else if q == 1.0 {
        quadrature::integrate(|u: f64| exponent(u).exp(), &breaks, settings)?
    } else if q.fract() == 0.0 && q < 64.0 {
        let k = q as i32 - 1;
        quadrature::integrate(|u: f64| u.powi(k) * exponent(u).exp(), &breaks, settings)?
    } else {
        quadrature::integrate(|u: f64| u.powf(q - 1.0) * exponent(u).exp(), &breaks, settings)?
    };

    let growth = (0.5 * shift * shift).exp();
    Ok(SpecialValue {
        value: scaled.value * growth,
        est_error: scaled.est_error * growth,
    })
}

/// `G_q(y) = F_q(−y)`.
pub fn big_g(q: f64, y: f64, settings: &QuadratureSettings) -> Result<SpecialValue> {
    big_f(q, -y, settings)
}

/// `(F_q + G_q)(y)`; even in `y` bit for bit.
pub fn fg_sum(q: f64, y: f64, settings: &QuadratureSettings) -> Result<SpecialValue> {
    let a = y.abs();
    Ok(big_f(q, a, settings)? + big_f(q, -a, settings)?)
}

/// `F_q′(y) = F_{q+1}(y)`.
pub fn big_f_prime(q: f64, y: f64, settings: &QuadratureSettings) -> Result<SpecialValue> {
    if !(q > 0.0) {
        return Err(Error::domain(format!("F_q requires q > 0, got q = {q}")));
    }
    big_f(q + 1.0, y, settings)
}

/// `G_q′(y) = −F_{q+1}(−y)`.
pub fn big_g_prime(q: f64, y: f64, settings: &QuadratureSettings) -> Result<SpecialValue> {
    let d = big_f_prime(q, -y, settings)?;
    Ok(SpecialValue {
        value: -d.value,
        est_error: d.est_error,
    })
}

/// `(F_q + G_q)′(y) = F_{q+1}(y) − F_{q+1}(−y)`; odd in `y` bit for bit.
pub fn fg_sum_prime(q: f64, y: f64, settings: &QuadratureSettings) -> Result<SpecialValue> {
    if !(q > 0.0) {
        return Err(Error::domain(format!("F_q requires q > 0, got q = {q}")));
    }
    let a = y.abs();
    let plus = big_f(q + 1.0, a, settings)?;
    let minus = big_f(q + 1.0, -a, settings)?;
    let magnitude = plus.value - minus.value;
    Ok(SpecialValue {
        value: if y < 0.0 { -magnitude } else { magnitude },
        est_error: plus.est_error + minus.est_error,
    })
}

/// Closed form `F_1(y) = √(2π) exp(y²/2) Φ(y)`.
pub fn big_f1_closed(y: f64) -> f64 {
    SQRT_2PI * scaled_upper_tail(-y)
}

/// Closed form `G_1(y) = √(2π) exp(y²/2) Φ(−y)`.
pub fn big_g1_closed(y: f64) -> f64 {
    SQRT_2PI * scaled_upper_tail(y)
}

/// Convenience evaluators at the default tolerances, used throughout the crate.
pub(crate) mod at_default {
    use super::*;

    pub fn f(q: f64, y: f64) -> Result<f64> {
        big_f(q, y, &QuadratureSettings::default()).map(|v| v.value)
    }

    pub fn g(q: f64, y: f64) -> Result<f64> {
        big_g(q, y, &QuadratureSettings::default()).map(|v| v.value)
    }

    pub fn fg(q: f64, y: f64) -> Result<f64> {
        fg_sum(q, y, &QuadratureSettings::default()).map(|v| v.value)
    }

    pub fn fg_prime(q: f64, y: f64) -> Result<f64> {
        fg_sum_prime(q, y, &QuadratureSettings::default()).map(|v| v.value)
    }
}
