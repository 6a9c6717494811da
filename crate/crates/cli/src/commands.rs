use crate::config::RunConfig;
use crate::output::{num, to_json, write_csv};
use bridge_stopping::simulation::{mc_grid_study, mc_outcomes, GridDescriptor, MCReport, TimeGrid};
use bridge_stopping::thresholds::{ProblemKind, ProblemSpec, Residuals, ThresholdSet};
use bridge_stopping::values::{Candidate, Region};
use bridge_stopping::verification::{run_suite, CheckReport, SuiteOptions};
use bridge_stopping::Error;
use serde::Serialize;

/// What a subcommand prints and whether it counts as success.
pub struct Outcome {
    pub stdout: String,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, failure: None }
    }
}

#[derive(Serialize)]
struct ProblemRecord {
    problem: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
}

impl From<ProblemSpec> for ProblemRecord {
    fn from(p: ProblemSpec) -> Self {
        Self {
            problem: p.number(),
            n: (p.kind == ProblemKind::Problem2).then_some(p.n),
            q: (p.kind == ProblemKind::Problem3).then_some(p.q),
        }
    }
}

fn describe(p: ProblemSpec) -> String {
    match p.kind {
        ProblemKind::Problem1 => "problem 1".to_string(),
        ProblemKind::Problem2 => format!("problem 2 (n = {})", p.n),
        ProblemKind::Problem3 => format!("problem 3 (q = {})", p.q),
    }
}

#[derive(Serialize)]
struct ThresholdRecord {
    #[serde(flatten)]
    problem: ProblemRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    b_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a_star: Option<f64>,
    residuals: Residuals,
}

pub fn thresholds(cfg: &RunConfig) -> Result<Outcome, Error> {
    let problem = cfg.problem()?;
    let set = ThresholdSet::solve(problem)?;
    if cfg.json {
        return Ok(Outcome::ok(to_json(&ThresholdRecord {
            problem: problem.into(),
            b_star: set.b_star,
            c_star: set.c_star,
            d_star: set.d_star,
            a_star: set.a_star,
            residuals: set.residuals,
        })));
    }
    let mut out = describe(problem);
    let rows = [
        ("b_star", set.b_star, set.residuals.b_star),
        ("c_star", set.c_star, set.residuals.c_star),
        ("d_star", set.d_star, set.residuals.d_star),
        ("a_star", set.a_star, set.residuals.a_star),
    ];
    for (name, value, residual) in rows {
        if let Some(v) = value {
            out.push_str(&format!("\n{name} = {v}  (residual {:.1e})", residual.unwrap_or(0.0)));
        }
    }
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct ValueRecord {
    #[serde(flatten)]
    problem: ProblemRecord,
    t: f64,
    x: f64,
    value: f64,
    region: Region,
    boundary: f64,
}

pub fn value(cfg: &RunConfig) -> Result<Outcome, Error> {
    let problem = cfg.problem()?;
    let start = cfg.start()?;
    let set = ThresholdSet::solve(problem)?;
    let v = Candidate::new(&set)?.value(start)?;
    if cfg.json {
        return Ok(Outcome::ok(to_json(&ValueRecord {
            problem: problem.into(),
            t: start.t(),
            x: start.x(),
            value: v.value,
            region: v.region,
            boundary: v.boundary,
        })));
    }
    let region = match v.region {
        Region::Continuation => "continuation",
        Region::Stopping => "stopping",
    };
    Ok(Outcome::ok(format!(
        "{} at (t = {}, x = {})\nvalue = {}\nregion = {region}\nboundary = {} (scaled)",
        describe(problem),
        start.t(),
        start.x(),
        v.value,
        v.boundary
    )))
}

#[derive(Serialize)]
struct SimulationRecord {
    #[serde(flatten)]
    problem: ProblemRecord,
    t: f64,
    x: f64,
    #[serde(flatten)]
    report: MCReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    refined: Option<MCReport>,
}

fn mc_lines(label: &str, r: &MCReport) -> String {
    format!(
        "{label}: mean = {:.6} +/- {:.6} (analytic {:.6}, z = {:.2}), {} paths on {} points, forced stops {}/{}",
        r.mean, r.std_error, r.analytic, r.z_score, r.n_paths, r.grid.n_steps, r.forced_first, r.forced_second
    )
}

pub fn simulate(cfg: &RunConfig, refine: bool) -> Result<Outcome, Error> {
    let problem = cfg.problem()?;
    let seed = cfg.seed()?;
    let start = cfg.start()?;
    let set = ThresholdSet::solve(problem)?;
    let grid = TimeGrid::new(GridDescriptor::geometric(start.t(), cfg.epsilon, cfg.steps))?;
    let (report, refined) = if refine {
        let mut levels = mc_grid_study(&set, start, &grid.refined()?, 2, cfg.paths, seed)?;
        let fine = levels.pop();
        (levels.pop().expect("two levels"), fine)
    } else {
        (
            bridge_stopping::simulation::mc_estimate(&set, start, &grid, cfg.paths, seed)?,
            None,
        )
    };
    if let Some(path) = &cfg.out {
        let outcomes = mc_outcomes(&set, start, &grid, cfg.paths, seed)?;
        let header: Vec<String> = [
            "path",
            "tau1",
            "tau2",
            "x1",
            "x2",
            "spread",
            "forced_first",
            "forced_second",
            "position",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let rows: Vec<Vec<String>> = outcomes
            .iter()
            .enumerate()
            .map(|(i, o)| {
                vec![
                    i.to_string(),
                    num(o.tau1),
                    num(o.tau2),
                    num(o.x1),
                    num(o.x2),
                    num(o.spread),
                    o.forced_first.to_string(),
                    o.forced_second.to_string(),
                    o.position.map(|p| format!("{p:?}").to_lowercase()).unwrap_or_default(),
                ]
            })
            .collect();
        write_csv(path, &header, &rows)?;
    }
    if cfg.json {
        return Ok(Outcome::ok(to_json(&SimulationRecord {
            problem: problem.into(),
            t: start.t(),
            x: start.x(),
            report,
            refined,
        })));
    }
    let mut out = format!(
        "{} from (t = {}, x = {})\n{}",
        describe(problem),
        start.t(),
        start.x(),
        mc_lines("grid", &report)
    );
    if let Some(r) = &refined {
        out.push('\n');
        out.push_str(&mc_lines("refined grid", r));
    }
    out.push_str(&format!("\nnote: {}", report.bias_note));
    Ok(Outcome::ok(out))
}

#[derive(Serialize)]
struct VerifyRecord {
    #[serde(flatten)]
    problem: ProblemRecord,
    passed: bool,
    checks: Vec<CheckReport>,
}

pub fn verify(cfg: &RunConfig) -> Result<Outcome, Error> {
    let problem = cfg.problem()?;
    let set = ThresholdSet::solve(problem)?;
    let options = SuiteOptions {
        start: cfg.start()?,
        ..SuiteOptions::default()
    };
    let checks = run_suite(&set, &options)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let stdout = if cfg.json {
        to_json(&VerifyRecord {
            problem: problem.into(),
            passed: failed == 0,
            checks: checks.clone(),
        })
    } else {
        let mut out = describe(problem);
        for c in &checks {
            out.push_str(&format!(
                "\n{} {:<44} violation {:>11.3e}  tolerance {:.0e}  [{}]",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.max_violation,
                c.tolerance,
                c.grid
            ));
        }
        out
    };
    let failure = (failed > 0).then(|| format!("{failed} of {} checks failed", checks.len()));
    Ok(Outcome { stdout, failure })
}

pub fn figures(cfg: &RunConfig) -> Result<Outcome, Error> {
    let dir = cfg.out.clone().unwrap_or_else(|| "figures".into());
    let written = crate::figures::write_all(&dir)?;
    let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    if cfg.json {
        return Ok(Outcome::ok(to_json(&names)));
    }
    Ok(Outcome::ok(names.join("\n")))
}
