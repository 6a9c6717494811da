//! The four threshold constants and the first-order conditions defining them.
//!
//! * `B*(n)`: zero of `B ↦ (2n+1) − B F′_{2n+1}(B)/F_{2n+1}(B)`, searched on
//!   `[√n, √n + 10]`.
//! * `D*(q)`: zero of `D ↦ q − D (F_q+G_q)′(D)/(F_q+G_q)(D)`, searched on
//!   `[√((q−1)/2 ∨ 0), … + 10]`.
//! * `C*`: zero of `u` on `[−10, 0]`.
//! * `A*(q)`: maximiser of `w` on `[0, D*]`; zero for `q ≤ 1`, otherwise the
//!   zero of `w′/L` on `(0, √((q−1)/2)]`.

use crate::error::{Error, Result};
use crate::roots::{bracketed_root, RootOptions};
use crate::special::at_default as sf;
use crate::values;
use serde::{Deserialize, Serialize};

const BRACKET_WIDTH: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProblemKind {
    /// `E[X_{τ₂} − X_{τ₁}]`.
    Problem1,
    /// Odd-power spread with the trade direction set by the sign of `X_{τ₁}`.
    Problem2,
    /// `E[|X_{τ₂}|^q − |X_{τ₁}|^q]`.
    Problem3,
}

/// One of the three double-stopping problems together with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub kind: ProblemKind,
    /// Odd power `2n+1`; used by Problem 2 only.
    pub n: u32,
    /// Absolute power; used by Problem 3 only.
    pub q: f64,
}

impl ProblemSpec {
    pub fn problem1() -> Self {
        Self {
            kind: ProblemKind::Problem1,
            n: 0,
            q: 1.0,
        }
    }

    pub fn problem2(n: u32) -> Self {
        Self {
            kind: ProblemKind::Problem2,
            n,
            q: 1.0,
        }
    }

    pub fn problem3(q: f64) -> Result<Self> {
        if !(q > 0.0) || !q.is_finite() {
            return Err(Error::domain(format!("Problem 3 needs finite q > 0, got {q}")));
        }
        Ok(Self {
            kind: ProblemKind::Problem3,
            n: 0,
            q,
        })
    }

    /// Build from the 1/2/3 selector used on the command line.
    pub fn from_number(problem: u8, n: u32, q: f64) -> Result<Self> {
        match problem {
            1 => Ok(Self::problem1()),
            2 => Ok(Self::problem2(n)),
            3 => Self::problem3(q),
            other => Err(Error::domain(format!("problem must be 1, 2 or 3, got {other}"))),
        }
    }

    pub fn number(&self) -> u8 {
        match self.kind {
            ProblemKind::Problem1 => 1,
            ProblemKind::Problem2 => 2,
            ProblemKind::Problem3 => 3,
        }
    }
}

/// Residuals of the defining equations at the solved constants.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    pub b_star: Option<f64>,
    pub c_star: Option<f64>,
    pub d_star: Option<f64>,
    pub a_star: Option<f64>,
}

impl Residuals {
    pub fn max_abs(&self) -> f64 {
        [self.b_star, self.c_star, self.d_star, self.a_star]
            .into_iter()
            .flatten()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }
}

/// The solved boundary constants of one problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    pub problem: ProblemSpec,
    pub b_star: Option<f64>,
    pub c_star: Option<f64>,
    pub d_star: Option<f64>,
    pub a_star: Option<f64>,
    pub residuals: Residuals,
}

fn missing(name: &str, problem: &ProblemSpec) -> Error {
    Error::domain(format!(
        "{name} is not part of the thresholds of Problem {}",
        problem.number()
    ))
}

impl ThresholdSet {
    /// Solve every constant the problem needs.
    pub fn solve(problem: ProblemSpec) -> Result<Self> {
        let mut set = ThresholdSet {
            problem,
            b_star: None,
            c_star: None,
            d_star: None,
            a_star: None,
            residuals: Residuals::default(),
        };
        match problem.kind {
            ProblemKind::Problem1 | ProblemKind::Problem2 => {
                let n = if problem.kind == ProblemKind::Problem1 {
                    0
                } else {
                    problem.n
                };
                let b = solve_b_star(n)?;
                set.b_star = Some(b);
                set.residuals.b_star = Some(b_star_equation(n, b)?);
                if problem.kind == ProblemKind::Problem1 {
                    let c = solve_c_star(b)?;
                    set.c_star = Some(c);
                    set.residuals.c_star = Some(values::u_scalar(c, b));
                }
            }
            ProblemKind::Problem3 => {
                let q = problem.q;
                let d = solve_d_star(q)?;
                set.d_star = Some(d);
                set.residuals.d_star = Some(d_star_equation(q, d)?);
                let a = solve_a_star(q, d)?;
                set.a_star = Some(a);
                set.residuals.a_star = Some(if a == 0.0 { 0.0 } else { values::w_prime(q, a, d)? });
            }
        }
        Ok(set)
    }

    pub fn b(&self) -> Result<f64> {
        self.b_star.ok_or_else(|| missing("B*", &self.problem))
    }

    pub fn c(&self) -> Result<f64> {
        self.c_star.ok_or_else(|| missing("C*", &self.problem))
    }

    pub fn d(&self) -> Result<f64> {
        self.d_star.ok_or_else(|| missing("D*", &self.problem))
    }

    pub fn a(&self) -> Result<f64> {
        self.a_star.ok_or_else(|| missing("A*", &self.problem))
    }

    /// Same problem with the given constants, e.g. for perturbed strategies.
    /// Residuals are cleared since the constants no longer solve anything.
    pub fn with_levels(&self, b: Option<f64>, c: Option<f64>, d: Option<f64>, a: Option<f64>) -> Self {
        ThresholdSet {
            problem: self.problem,
            b_star: b.or(self.b_star),
            c_star: c.or(self.c_star),
            d_star: d.or(self.d_star),
            a_star: a.or(self.a_star),
            residuals: Residuals::default(),
        }
    }
}

/// `(2n+1) − B F′_{2n+1}(B) / F_{2n+1}(B)`; decreasing, positive below `B*`.
pub fn b_star_equation(n: u32, b: f64) -> Result<f64> {
    let p = 2.0 * n as f64 + 1.0;
    Ok(p - b * sf::f(p + 1.0, b)? / sf::f(p, b)?)
}

/// `q − D (F_q+G_q)′(D) / (F_q+G_q)(D)`; positive below `D*`.
pub fn d_star_equation(q: f64, d: f64) -> Result<f64> {
    Ok(q - d * sf::fg_prime(q, d)? / sf::fg(q, d)?)
}

/// `w′(A)/L(A)` with `L = (F_q′G_q − F_qG_q′)/G_q² > 0`; shares the sign of
/// `w′` and has the finite limit `(D*)^q/(F_q+G_q)(D*)` at `A = 0` for `q > 1`.
pub fn a_star_equation(q: f64, a: f64, d_star: f64) -> Result<f64> {
    let g = sf::g(q, a)?;
    let g_prime = -sf::f(q + 1.0, -a)?;
    let f = sf::f(q, a)?;
    let f_prime = sf::f(q + 1.0, a)?;
    let wronskian = f_prime * g - f * g_prime;
    let head = if a == 0.0 {
        0.0
    } else {
        (-q * a.powf(q - 1.0) * g + a.powf(q) * g_prime) / wronskian
    };
    Ok(head + d_star.powf(q) / sf::fg(q, d_star)?)
}

pub fn solve_b_star(n: u32) -> Result<f64> {
    solve_b_star_on(n, (n as f64).sqrt(), (n as f64).sqrt() + BRACKET_WIDTH)
}

/// `B*(n)` on an explicit bracket.
pub fn solve_b_star_on(n: u32, lo: f64, hi: f64) -> Result<f64> {
    let root = bracketed_root(
        "B* equation",
        |b| b_star_equation(n, b),
        lo,
        hi,
        &RootOptions::default(),
    )?;
    Ok(root.x)
}

pub fn d_star_lower_bound(q: f64) -> f64 {
    (0.5 * (q - 1.0)).max(0.0).sqrt()
}

pub fn solve_d_star(q: f64) -> Result<f64> {
    let lo = d_star_lower_bound(q);
    solve_d_star_on(q, lo, lo + BRACKET_WIDTH)
}

/// `D*(q)` on an explicit bracket.
pub fn solve_d_star_on(q: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::domain(format!("D* needs finite q > 0, got {q}")));
    }
    let root = bracketed_root(
        "D* equation",
        |d| d_star_equation(q, d),
        lo,
        hi,
        &RootOptions::default(),
    )?;
    Ok(root.x)
}

pub fn solve_c_star(b_star: f64) -> Result<f64> {
    solve_c_star_on(b_star, -BRACKET_WIDTH, 0.0)
}

/// `C*` on an explicit bracket.
pub fn solve_c_star_on(b_star: f64, lo: f64, hi: f64) -> Result<f64> {
    let opts = RootOptions {
        f_tol: 1e-14,
        ..RootOptions::default()
    };
    let root = bracketed_root("u(C) = 0", |c| Ok(values::u_scalar(c, b_star)), lo, hi, &opts)?;
    Ok(root.x)
}

pub fn solve_a_star(q: f64, d_star: f64) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::domain(format!("A* needs finite q > 0, got {q}")));
    }
    if q <= 1.0 {
        return Ok(0.0);
    }
    solve_a_star_on(q, d_star, 0.0, d_star_lower_bound(q).min(d_star))
}

/// `A*(q)` for `q > 1` on an explicit bracket.
pub fn solve_a_star_on(q: f64, d_star: f64, lo: f64, hi: f64) -> Result<f64> {
    let root = bracketed_root(
        "w'(A) = 0",
        |a| a_star_equation(q, a, d_star),
        lo,
        hi,
        &RootOptions::default(),
    )?;
    Ok(root.x)
}
