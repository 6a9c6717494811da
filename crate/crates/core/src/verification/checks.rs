use crate::error::{Error, Result};
use crate::thresholds::{ProblemKind, ThresholdSet};
use crate::values::{Candidate, Region, SpacePoint};
use serde::{Deserialize, Serialize};

/// Step for one-sided first derivatives at free boundaries.
pub const SMOOTH_FIT_STEP: f64 = 1e-6;
pub const SMOOTH_FIT_TOL: f64 = 1e-5;
/// Step for the generator's finite differences.
pub const GENERATOR_STEP: f64 = 1e-4;
pub const GENERATOR_ZERO_TOL: f64 = 1e-4;
pub const GENERATOR_SIGN_TOL: f64 = 1e-6;
pub const DOMINANCE_TOL: f64 = 1e-9;
/// Sample times of the generator and dominance grids.
pub const CHECK_TIMES: [f64; 4] = [0.0, 0.25, 0.5, 0.9];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub grid: String,
}

impl CheckReport {
    pub fn new(name: impl Into<String>, max_violation: f64, tolerance: f64, grid: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            max_violation,
            tolerance,
            passed: max_violation <= tolerance,
            grid: grid.into(),
        }
    }
}

pub(crate) fn label(thresholds: &ThresholdSet) -> String {
    let p = thresholds.problem;
    match p.kind {
        ProblemKind::Problem1 => "problem1".to_string(),
        ProblemKind::Problem2 => format!("problem2[n={}]", p.n),
        ProblemKind::Problem3 => format!("problem3[q={}]", p.q),
    }
}

fn central(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

/// Smooth fit at every free boundary for each time in `t_list`.
///
/// Both branches are differentiated by central differences at the boundary.
/// For Problem 3 with `A* = 0` the check is the strict kink at `x = 0`:
/// the violation is the right derivative minus the left one, which must be
/// negative.
pub fn check_smooth_fit(thresholds: &ThresholdSet, t_list: &[f64]) -> Result<CheckReport> {
    let cand = Candidate::new(thresholds)?;
    let h = SMOOTH_FIT_STEP;
    let grid = format!("t in {t_list:?}, h = {h:e}");
    if let Candidate::Problem3 { a_star, .. } = cand {
        if a_star == 0.0 {
            let mut worst = f64::NEG_INFINITY;
            for &t in t_list {
                let w = |x: f64| -> Result<f64> { Ok(cand.value(SpacePoint::new(t, x)?)?.value) };
                let right = (w(h)? - w(0.0)?) / h;
                let left = (w(0.0)? - w(-h)?) / h;
                worst = worst.max(right - left);
            }
            return Ok(CheckReport::new(
                format!("smooth_fit/{}/kink", label(thresholds)),
                worst,
                0.0,
                grid,
            ));
        }
    }
    let mut worst = 0.0f64;
    for &t in t_list {
        for b in cand.boundaries(t) {
            let cont = central(|x| cand.continuation_branch(SpacePoint::new(t, x)?), b, h)?;
            let stop = central(|x| cand.stopping_branch(SpacePoint::new(t, x)?), b, h)?;
            worst = worst.max((cont - stop).abs());
        }
    }
    Ok(CheckReport::new(
        format!("smooth_fit/{}", label(thresholds)),
        worst,
        SMOOTH_FIT_TOL,
        grid,
    ))
}

/// A generator sample point and the region it is expected to lie in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSample {
    pub point: SpacePoint,
    pub region: Region,
}

/// `ℒξ = ∂ξ/∂t − x/(1−t) ∂ξ/∂x + ½ ∂²ξ/∂x²` by finite differences with step
/// `h`; one-sided in time at `t < h`.
pub fn generator(value_fn: &impl Fn(SpacePoint) -> Result<f64>, point: SpacePoint, h: f64) -> Result<f64> {
    let (t, x) = (point.t(), point.x());
    let v = |t: f64, x: f64| value_fn(SpacePoint::new(t, x)?);
    let v0 = v(t, x)?;
    let dt = if t >= h {
        (v(t + h, x)? - v(t - h, x)?) / (2.0 * h)
    } else {
        (-3.0 * v0 + 4.0 * v(t + h, x)? - v(t + 2.0 * h, x)?) / (2.0 * h)
    };
    let (up, down) = (v(t, x + h)?, v(t, x - h)?);
    let dx = (up - down) / (2.0 * h);
    let dxx = (up - 2.0 * v0 + down) / (h * h);
    Ok(dt - x / (1.0 - t) * dx + 0.5 * dxx)
}

/// Generator conditions over `samples`: `|ℒ| ≤ 1e−4` in the continuation
/// region and `ℒ ≤ 1e−6` in the stopping region, as two reports.
///
/// `excluded(t)` lists the positions (free boundaries and kinks) that no
/// sample may come within `10h` of; such a sample is a configuration error.
pub fn pde_residual(
    name: &str,
    value_fn: impl Fn(SpacePoint) -> Result<f64>,
    samples: &[RegionSample],
    excluded: impl Fn(f64) -> Vec<f64>,
    h: f64,
) -> Result<[CheckReport; 2]> {
    let mut zero = (0.0f64, 0usize);
    let mut sign = (f64::NEG_INFINITY, 0usize);
    for s in samples {
        let (t, x) = (s.point.t(), s.point.x());
        if let Some(b) = excluded(t).into_iter().find(|b| (x - b).abs() < 10.0 * h) {
            return Err(Error::config(format!(
                "{name}: sample (t = {t}, x = {x}) lies within 10h of the excluded point {b}"
            )));
        }
        let l = generator(&value_fn, s.point, h)?;
        match s.region {
            Region::Continuation => {
                zero = (zero.0.max(l.abs()), zero.1 + 1);
            }
            Region::Stopping => {
                sign = (sign.0.max(l), sign.1 + 1);
            }
        }
    }
    if sign.1 == 0 {
        sign.0 = 0.0;
    }
    Ok([
        CheckReport::new(
            format!("generator/{name}/continuation"),
            zero.0,
            GENERATOR_ZERO_TOL,
            format!("{} samples, h = {h:e}", zero.1),
        ),
        CheckReport::new(
            format!("generator/{name}/stopping"),
            sign.0,
            GENERATOR_SIGN_TOL,
            format!("{} samples, h = {h:e}", sign.1),
        ),
    ])
}

/// Positions the generator may not be sampled near: the free boundaries,
/// and `x = 0` for Problem 3.
pub fn excluded_points(cand: &Candidate, t: f64) -> Vec<f64> {
    let mut points = cand.boundaries(t);
    if matches!(cand, Candidate::Problem3 { .. }) && !points.contains(&0.0) {
        points.push(0.0);
    }
    points
}

/// Samples at `t ∈ {0, 0.25, 0.5, 0.9}`, scaled `y ∈ [−5, 5]` in steps of
/// 0.05, skipping points within `20h` of an excluded position. For
/// Problem 3 with `1 < q ≤ 2`, `|y| < 0.05` is also skipped, where
/// `|x|^{q−2}` blows up.
pub fn generator_samples(cand: &Candidate, h: f64) -> Vec<RegionSample> {
    let near_zero_band = match *cand {
        Candidate::Problem3 { q, .. } if q > 1.0 && q <= 2.0 => 0.05,
        _ => 0.0,
    };
    let mut out = Vec::new();
    for &t in &CHECK_TIMES {
        let excluded = excluded_points(cand, t);
        for i in 0..=200 {
            let y = (i as f64 - 100.0) * 0.05;
            if y.abs() < near_zero_band {
                continue;
            }
            let Ok(point) = SpacePoint::from_scaled(t, y) else {
                continue;
            };
            if excluded.iter().any(|b| (point.x() - b).abs() < 20.0 * h) {
                continue;
            }
            out.push(RegionSample {
                point,
                region: cand.region(point),
            });
        }
    }
    out
}

/// Generator conditions for the thresholds' candidate on its documented grid.
pub fn check_generator(thresholds: &ThresholdSet) -> Result<[CheckReport; 2]> {
    let cand = Candidate::new(thresholds)?;
    let h = GENERATOR_STEP;
    let samples = generator_samples(&cand, h);
    pde_residual(
        &label(thresholds),
        |p| Ok(cand.value(p)?.value),
        &samples,
        |t| excluded_points(&cand, t),
        h,
    )
}

/// `min (candidate − payoff)` over `t_list × {y_lo, y_lo + step, …, y_hi}`;
/// the violation is the negated minimum.
pub fn check_dominance(
    thresholds: &ThresholdSet,
    t_list: &[f64],
    y_lo: f64,
    y_hi: f64,
    step: f64,
) -> Result<CheckReport> {
    let cand = Candidate::new(thresholds)?;
    let count = ((y_hi - y_lo) / step).round() as usize;
    let mut min_gap = f64::INFINITY;
    for &t in t_list {
        for i in 0..=count {
            let p = SpacePoint::from_scaled(t, y_lo + i as f64 * step)?;
            min_gap = min_gap.min(cand.value(p)?.value - cand.payoff(p)?);
        }
    }
    Ok(CheckReport::new(
        format!("dominance/{}", label(thresholds)),
        -min_gap,
        DOMINANCE_TOL,
        format!("t in {t_list:?}, y in [{y_lo}, {y_hi}] step {step}"),
    ))
}

/// Grid argmax of `f` over `lo, lo + resolution, …` up to and including `hi`.
pub fn scan_maximizer(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, resolution: f64) -> Result<(f64, f64)> {
    if !(resolution > 0.0) || !(hi >= lo) {
        return Err(Error::config(format!(
            "scan needs lo <= hi and resolution > 0, got [{lo}, {hi}] by {resolution}"
        )));
    }
    let count = ((hi - lo) / resolution).floor() as usize;
    let mut best = (lo, f(lo)?);
    for i in 1..=count + 1 {
        let x = if i > count { hi } else { lo + i as f64 * resolution };
        let v = f(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    Ok(best)
}

/// Scan resolution for maximiser checks.
pub const SCAN_RESOLUTION: f64 = 1e-4;
pub const SCAN_TOL: f64 = 1e-3;

/// Brute-force maximiser of the problem's scalar function against the
/// solved threshold: `v` on `[−5, B*]` for `C*`, `j` on `[0, 3B*]` for
/// `B*`, `w` on `[0, D*]` for `A*`.
pub fn check_scan(thresholds: &ThresholdSet) -> Result<CheckReport> {
    use crate::values::{j_scalar, v_scalar, w_scalar};
    let r = SCAN_RESOLUTION;
    let (argmax, root, interval) = match thresholds.problem.kind {
        ProblemKind::Problem1 => {
            let b = thresholds.b()?;
            let (x, _) = scan_maximizer(|c| Ok(v_scalar(c, b)), -5.0, b, r)?;
            (x, thresholds.c()?, (-5.0, b))
        }
        ProblemKind::Problem2 => {
            let (n, b) = (thresholds.problem.n, thresholds.b()?);
            let (x, _) = scan_maximizer(|d| j_scalar(n, d, b), 0.0, 3.0 * b, r)?;
            (x, b, (0.0, 3.0 * b))
        }
        ProblemKind::Problem3 => {
            let (q, d) = (thresholds.problem.q, thresholds.d()?);
            let (x, _) = scan_maximizer(|a| w_scalar(q, a, d), 0.0, d, r)?;
            (x, thresholds.a()?, (0.0, d))
        }
    };
    Ok(CheckReport::new(
        format!("scan/{}", label(thresholds)),
        (argmax - root).abs(),
        SCAN_TOL,
        format!("[{}, {}] step {r:e}", interval.0, interval.1),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thresholds::ProblemSpec;
    use crate::values::payoff_f;

    fn solve(p: ProblemSpec) -> ThresholdSet {
        ThresholdSet::solve(p).unwrap()
    }

    #[test]
    fn report_pass_flag() {
        assert!(CheckReport::new("a", 1.0, 1.0, "").passed);
        assert!(!CheckReport::new("a", 1.5, 1.0, "").passed);
    }

    #[test]
    fn smooth_fit_problem_one_at_zero() {
        let r = check_smooth_fit(&solve(ProblemSpec::problem1()), &[0.0]).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn smooth_fit_problem_two_half_time() {
        let r = check_smooth_fit(&solve(ProblemSpec::problem2(1)), &[0.5]).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn kink_for_linear_problem_three() {
        let r = check_smooth_fit(&solve(ProblemSpec::problem3(1.0).unwrap()), &[0.0, 0.5]).unwrap();
        assert!(r.name.ends_with("kink"));
        assert!(r.max_violation < 0.0 && r.passed, "{r:?}");
    }

    #[test]
    fn perturbed_boundary_breaks_smooth_fit() {
        let set = solve(ProblemSpec::problem1());
        let off = set.with_levels(set.b_star, Some(set.c().unwrap() + 0.05), None, None);
        let r = check_smooth_fit(&off, &[0.0]).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn generator_in_stopping_region_matches_closed_forms() {
        let set = solve(ProblemSpec::problem1());
        let cand = Candidate::new(&set).unwrap();
        let p = SpacePoint::from_scaled(0.5, -2.0).unwrap();
        let l = generator(&|p| Ok(cand.value(p)?.value), p, GENERATOR_STEP).unwrap();
        assert!((l - p.x() / 0.5).abs() < 1e-5, "{l}");

        let set = solve(ProblemSpec::problem2(1));
        let cand = Candidate::new(&set).unwrap();
        for &y in &[-3.0, -2.0, 2.0, 3.0] {
            let p = SpacePoint::from_scaled(0.25, y).unwrap();
            let l = generator(&|p| Ok(cand.value(p)?.value), p, GENERATOR_STEP).unwrap();
            let x = p.x();
            let want = -3.0 * (x * x / 0.75 - 1.0) * x.abs();
            assert!(((l - want) / want).abs() < 1e-4, "y = {y}: {l} vs {want}");
        }

        let set = solve(ProblemSpec::problem3(3.0).unwrap());
        let cand = Candidate::new(&set).unwrap();
        let p = SpacePoint::from_scaled(0.0, 0.5).unwrap();
        let l = generator(&|p| Ok(cand.value(p)?.value), p, GENERATOR_STEP).unwrap();
        let want = -(1.0 - 0.25) * 3.0 * 0.5;
        assert!(((l - want) / want).abs() < 1e-4, "{l} vs {want}");
    }

    #[test]
    fn generator_problem_one() {
        let [zero, sign] = check_generator(&solve(ProblemSpec::problem1())).unwrap();
        assert!(zero.passed, "{zero:?}");
        assert!(sign.passed, "{sign:?}");
    }

    #[test]
    fn sample_near_boundary_is_rejected() {
        let set = solve(ProblemSpec::problem1());
        let cand = Candidate::new(&set).unwrap();
        let c = set.c().unwrap();
        let samples = [RegionSample {
            point: SpacePoint::new(0.0, c + 1e-4).unwrap(),
            region: Region::Continuation,
        }];
        let e = pde_residual(
            "p1",
            |p| Ok(cand.value(p)?.value),
            &samples,
            |t| cand.boundaries(t),
            1e-4,
        )
        .unwrap_err();
        assert_eq!(e.code(), "E_CONFIG");
        for s in generator_samples(&cand, 1e-4) {
            for b in cand.boundaries(s.point.t()) {
                assert!((s.point.x() - b).abs() >= 10.0 * 1e-4);
            }
        }
    }

    #[test]
    fn dominance_and_equality_regions() {
        let set = solve(ProblemSpec::problem1());
        let r = check_dominance(&set, &[0.0, 0.5], -5.0, 5.0, 0.01).unwrap();
        assert!(r.passed, "{r:?}");
        let cand = Candidate::new(&set).unwrap();
        let p = SpacePoint::from_scaled(0.5, -1.0).unwrap();
        assert_eq!(cand.value(p).unwrap().value, payoff_f(p, set.b().unwrap()));

        let set = solve(ProblemSpec::problem2(0));
        let cand = Candidate::new(&set).unwrap();
        let b = set.b().unwrap();
        for &t in &[0.0, 0.5] {
            for i in 0..50 {
                let y = b + i as f64 * 0.05;
                for s in [y, -y] {
                    let p = SpacePoint::from_scaled(t, s).unwrap();
                    assert!((cand.value(p).unwrap().value - cand.payoff(p).unwrap()).abs() < 1e-10);
                }
            }
        }

        let set = solve(ProblemSpec::problem3(3.0).unwrap());
        let cand = Candidate::new(&set).unwrap();
        let a = set.a().unwrap();
        for i in 0..=20 {
            let p = SpacePoint::from_scaled(0.25, a * (i as f64 / 20.0 * 2.0 - 1.0)).unwrap();
            assert!((cand.value(p).unwrap().value - cand.payoff(p).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn scan_includes_endpoint() {
        let (x, v) = scan_maximizer(Ok, 0.0, 1.05, 0.1).unwrap();
        assert_eq!((x, v), (1.05, 1.05));
        assert!(scan_maximizer(Ok, 1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn scans_agree_with_solvers() {
        for set in [
            solve(ProblemSpec::problem1()),
            solve(ProblemSpec::problem2(0)),
            solve(ProblemSpec::problem3(2.0).unwrap()),
        ] {
            let r = check_scan(&set).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}
