//! Bracketed scalar root finding: bisection safeguarding secant steps.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Stop once the bracket is narrower than this.
    pub x_tol: f64,
    /// Stop once `|f(x)|` falls below this.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-13,
            f_tol: 1e-12,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Find a zero of `f` on `[lo, hi]`, given that `f(lo)` and `f(hi)` differ in sign.
///
/// Each iteration tries a secant step through the bracket ends and falls back
/// to bisection when the step leaves the bracket or when two consecutive
/// steps failed to halve the bracket width.
pub fn bracketed_root<F>(equation: &'static str, mut f: F, lo: f64, hi: f64, opts: &RootOptions) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Bracket {
            equation,
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut best = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    let mut width_two_ago = f64::INFINITY;
    let mut width_prev = b - a;
    for iter in 1..=opts.max_iter {
        let width = b - a;
        if best.1.abs() < opts.f_tol || width < opts.x_tol {
            return Ok(Root {
                x: best.0,
                residual: best.1,
                iterations: iter - 1,
            });
        }
        let bisect = 0.5 * (a + b);
        let secant = b - fb * (b - a) / (fb - fa);
        let guard = 0.01 * width;
        let stalled = width > 0.5 * width_two_ago;
        let x = if !stalled && secant.is_finite() && secant > a + guard && secant < b - guard {
            secant
        } else {
            bisect
        };
        let fx = f(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            return Ok(Root {
                x,
                residual: 0.0,
                iterations: iter,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        width_two_ago = width_prev;
        width_prev = width;
    }
    Ok(Root {
        x: best.0,
        residual: best.1,
        iterations: opts.max_iter,
    })
}

/// Sub-intervals of `[lo, hi]` (scanned at `step`) on which `f` changes sign.
pub fn sign_changes<F>(mut f: F, lo: f64, hi: f64, step: f64) -> Result<Vec<(f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = ((hi - lo) / step).ceil().max(1.0) as usize;
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut f0 = f(x0)?;
    for i in 1..=n {
        let x1 = if i == n { hi } else { lo + i as f64 * step };
        let f1 = f(x1)?;
        if f0 == 0.0 || f0.signum() != f1.signum() {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(out)
}
