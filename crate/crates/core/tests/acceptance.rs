//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Every tolerance and time budget is pinned here.

use bridge_stopping::simulation::{mc_compare, mc_estimate, GridDescriptor, TimeGrid};
use bridge_stopping::special::{big_f, big_f1_closed, phi_cdf, QuadratureSettings};
use bridge_stopping::thresholds::{solve_b_star, solve_c_star, ProblemSpec, ThresholdSet};
use bridge_stopping::values::{u_scalar, Candidate, SpacePoint};
use bridge_stopping::verification::{
    check_dominance, check_generator, check_scan, check_smooth_fit, dp_value_oracle, CheckReport, DpGrid, CHECK_TIMES,
};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn solve(p: ProblemSpec) -> Result<ThresholdSet, String> {
    ThresholdSet::solve(p).map_err(|e| e.to_string())
}

fn p3(q: f64) -> Result<ThresholdSet, String> {
    solve(ProblemSpec::problem3(q).map_err(|e| e.to_string())?)
}

fn all_pass(reports: &[CheckReport]) -> Outcome {
    let worst = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} = {:e} > {:e}", r.name, r.max_violation, r.tolerance));
    let failures: Vec<String> = worst.collect();
    if failures.is_empty() {
        Ok(format!("{} checks", reports.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_1() -> Outcome {
    let b = solve_b_star(0).map_err(|e| e.to_string())?;
    let phi = phi_cdf(b).map_err(|e| e.to_string())?;
    let residual = SQRT_2PI * (1.0 - b * b) * (0.5 * b * b).exp() * phi - b;
    ensure((0.83..=0.85).contains(&b), || {
        format!("B*(0) = {b} outside [0.83, 0.85]")
    })?;
    ensure(residual.abs() < 1e-10, || format!("residual {residual:e}"))?;
    Ok(format!("B*(0) = {b:.12}, residual {residual:.1e}"))
}

fn criterion_2() -> Outcome {
    let b = solve_b_star(0).map_err(|e| e.to_string())?;
    let c = solve_c_star(b).map_err(|e| e.to_string())?;
    let residual = u_scalar(c, b);
    ensure((-0.57..=-0.56).contains(&c), || {
        format!("C* = {c} outside [-0.57, -0.56]")
    })?;
    ensure(residual.abs() < 1e-12, || format!("u(C*) = {residual:e}"))?;
    ensure(c.abs() < b, || format!("|C*| = {} >= B* = {b}", c.abs()))?;
    Ok(format!("C* = {c:.12}, u(C*) = {residual:.1e}"))
}

fn criterion_3() -> Outcome {
    for n in 0..=10u32 {
        let b = solve_b_star(n).map_err(|e| e.to_string())?;
        ensure(b >= (n as f64).sqrt(), || format!("B*({n}) = {b} < sqrt(n)"))?;
    }
    for q in [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0] {
        let set = p3(q)?;
        let d = set.d().map_err(|e| e.to_string())?;
        let low = (0.5 * (q - 1.0)).max(0.0).sqrt();
        ensure(d >= low, || format!("D*({q}) = {d} < {low}"))?;
    }
    for q in [0.5, 1.0] {
        let a = p3(q)?.a().map_err(|e| e.to_string())?;
        ensure(a == 0.0, || format!("A*({q}) = {a} != 0"))?;
    }
    for q in [2.0, 3.0, 4.0] {
        let a = p3(q)?.a().map_err(|e| e.to_string())?;
        let high = (0.5 * (q - 1.0)).sqrt();
        ensure(a > 0.0 && a <= high, || format!("A*({q}) = {a} outside (0, {high}]"))?;
    }
    Ok("B*(n) for n = 0..10, D*(q) and A*(q) within their bounds".into())
}

fn criterion_4() -> Outcome {
    let s = QuadratureSettings::default();
    let f = |q: f64, y: f64| big_f(q, y, &s).map(|v| v.value).map_err(|e| e.to_string());
    let mut worst_rec = 0.0f64;
    let mut worst_closed = 0.0f64;
    for i in -40..=40 {
        let y = i as f64 * 0.1;
        for q in [1.5, 2.0, 2.5, 3.0, 4.0, 5.5] {
            let lhs = f(q + 1.0, y)?;
            let rhs = y * f(q, y)? + (q - 1.0) * f(q - 1.0, y)?;
            worst_rec = worst_rec.max(((lhs - rhs) / lhs).abs());
        }
        let f2 = f(2.0, y)?;
        worst_rec = worst_rec.max(((f2 - (y * f(1.0, y)? + 1.0)) / f2).abs());
        let closed = big_f1_closed(y);
        worst_closed = worst_closed.max(((f(1.0, y)? - closed) / closed).abs());
    }
    ensure(worst_rec < 1e-8, || format!("recurrence residual {worst_rec:e}"))?;
    ensure(worst_closed < 1e-10, || {
        format!("closed form deviation {worst_closed:e}")
    })?;
    Ok(format!("recurrence {worst_rec:.1e}, closed form {worst_closed:.1e}"))
}

fn criterion_5() -> Outcome {
    let times = [0.0, 0.5, 0.9];
    let mut sets = vec![solve(ProblemSpec::problem1())?];
    for n in 0..=2 {
        sets.push(solve(ProblemSpec::problem2(n))?);
    }
    for q in [2.0, 3.0, 4.0, 1.0] {
        sets.push(p3(q)?);
    }
    let reports: Vec<CheckReport> = sets
        .iter()
        .map(|s| check_smooth_fit(s, &times))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let kink = reports.last().expect("q = 1 report");
    ensure(kink.name.ends_with("kink") && kink.max_violation < 0.0, || {
        format!("{kink:?}")
    })?;
    let gap = reports[..reports.len() - 1]
        .iter()
        .map(|r| r.max_violation)
        .fold(0.0, f64::max);
    all_pass(&reports).map(|n| format!("{n}, max gap {gap:.1e}, kink jump {:.3}", kink.max_violation))
}

fn suite_sets() -> Result<Vec<ThresholdSet>, String> {
    let mut sets = vec![solve(ProblemSpec::problem1())?];
    for n in 0..=3 {
        sets.push(solve(ProblemSpec::problem2(n))?);
    }
    for q in [1.0, 1.5, 2.0, 3.0, 4.0] {
        sets.push(p3(q)?);
    }
    Ok(sets)
}

fn criterion_6() -> Outcome {
    let mut reports = Vec::new();
    for s in suite_sets()? {
        reports.extend(check_generator(&s).map_err(|e| e.to_string())?);
    }
    let zero = reports
        .iter()
        .filter(|r| r.name.ends_with("continuation"))
        .map(|r| r.max_violation)
        .fold(0.0, f64::max);
    all_pass(&reports).map(|n| format!("{n}, max |L| in continuation {zero:.1e}"))
}

fn criterion_7() -> Outcome {
    let mut reports = Vec::new();
    for s in suite_sets()? {
        reports.push(check_dominance(&s, &CHECK_TIMES, -5.0, 5.0, 0.01).map_err(|e| e.to_string())?);
    }
    all_pass(&reports)
}

fn criterion_8() -> Outcome {
    let mut sets = vec![solve(ProblemSpec::problem1())?];
    for n in 0..=3 {
        sets.push(solve(ProblemSpec::problem2(n))?);
    }
    for q in [2.0, 3.0, 4.0] {
        sets.push(p3(q)?);
    }
    let reports: Vec<CheckReport> = sets
        .iter()
        .map(check_scan)
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let worst = reports.iter().map(|r| r.max_violation).fold(0.0, f64::max);
    all_pass(&reports).map(|n| format!("{n}, max offset {worst:.1e}"))
}

fn criterion_9() -> Outcome {
    let origin = SpacePoint::new(0.0, 0.0).map_err(|e| e.to_string())?;
    let coarse = DpGrid::new(400, 600);
    let fine = coarse.refined();
    let mut parts = Vec::new();
    for p in [
        ProblemSpec::problem1(),
        ProblemSpec::problem2(0),
        ProblemSpec::problem3(2.0).map_err(|e| e.to_string())?,
    ] {
        let set = solve(p)?;
        let closed = Candidate::new(&set)
            .and_then(|c| c.value(origin))
            .map_err(|e| e.to_string())?
            .value;
        let gap = |g: &DpGrid| -> Result<f64, String> {
            let dp = dp_value_oracle(p, origin, g).map_err(|e| e.to_string())?;
            Ok(((dp - closed) / closed).abs())
        };
        let (g1, g2) = (gap(&coarse)?, gap(&fine)?);
        ensure(g1 < 0.02, || {
            format!("problem {}: relative gap {g1:.3e} on 400x600", p.number())
        })?;
        ensure(g2 < g1, || {
            format!("problem {}: gap {g2:.3e} on 800x1200 not below {g1:.3e}", p.number())
        })?;
        parts.push(format!("P{} {g1:.2e} -> {g2:.2e}", p.number()));
    }
    Ok(parts.join(", "))
}

fn criterion_10() -> Outcome {
    const PATHS: usize = 100_000;
    const SEED: u64 = 20_240_601;
    let origin = SpacePoint::new(0.0, 0.0).map_err(|e| e.to_string())?;
    let grid = TimeGrid::new(GridDescriptor::geometric(0.0, 1e-6, 2000)).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for p in [
        ProblemSpec::problem1(),
        ProblemSpec::problem2(0),
        ProblemSpec::problem3(2.0).map_err(|e| e.to_string())?,
    ] {
        let set = solve(p)?;
        let r = mc_estimate(&set, origin, &grid, PATHS, SEED).map_err(|e| e.to_string())?;
        let tol = (4.0 * r.std_error).max(0.01);
        ensure((r.mean - r.analytic).abs() <= tol, || {
            format!(
                "problem {}: mean {:.5} vs analytic {:.5}, tolerance {tol:.4}",
                p.number(),
                r.mean,
                r.analytic
            )
        })?;
        let mut perturbed = Vec::new();
        for d in [-0.1, 0.1] {
            match p.number() {
                1 => {
                    perturbed.push(set.with_levels(set.b_star, set.c_star.map(|c| c + d), None, None));
                    perturbed.push(set.with_levels(set.b_star.map(|b| b + d), set.c_star, None, None));
                }
                2 => perturbed.push(set.with_levels(set.b_star.map(|b| b + d), None, None, None)),
                _ => {
                    perturbed.push(set.with_levels(None, None, set.d_star, set.a_star.map(|a| a + d)));
                    perturbed.push(set.with_levels(None, None, set.d_star.map(|x| x + d), set.a_star));
                }
            }
        }
        for alt in &perturbed {
            let c = mc_compare(&set, alt, origin, &grid, PATHS, SEED).map_err(|e| e.to_string())?;
            let combined = (c.reference.std_error.powi(2) + c.alternative.std_error.powi(2)).sqrt();
            let excess = c.alternative.mean - c.reference.mean;
            ensure(excess <= 4.0 * combined, || {
                format!(
                    "problem {}: perturbed strategy beats optimum by {excess:.5} > 4 x {combined:.5}",
                    p.number()
                )
            })?;
        }
        parts.push(format!(
            "P{} {:.4} vs {:.4} (SE {:.4})",
            p.number(),
            r.mean,
            r.analytic,
            r.std_error
        ));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("threshold B*(0)", criterion_1, Duration::from_secs(1)),
        ("threshold C*", criterion_2, Duration::from_secs(1)),
        ("lemma bounds", criterion_3, Duration::from_secs(10)),
        ("special-function identities", criterion_4, Duration::from_secs(10)),
        ("smooth fit", criterion_5, Duration::from_secs(30)),
        ("generator conditions", criterion_6, Duration::from_secs(60)),
        ("dominance", criterion_7, Duration::from_secs(30)),
        ("scan vs solver", criterion_8, Duration::from_secs(60)),
        ("DP oracle", criterion_9, Duration::from_secs(300)),
        ("Monte Carlo optimality", criterion_10, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let result = result.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match result {
            Ok(detail) => println!("PASS criterion {:>2} {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
