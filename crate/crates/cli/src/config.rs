use bridge_stopping::thresholds::ProblemSpec;
use bridge_stopping::values::SpacePoint;
use bridge_stopping::Error;
use clap::Args;
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const DEFAULT_N: u32 = 0;
pub const DEFAULT_Q: f64 = 2.0;
pub const DEFAULT_PATHS: usize = 100_000;
pub const DEFAULT_STEPS: usize = 2000;
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Problem number: 1, 2 or 3.
    #[arg(long)]
    pub problem: Option<u8>,
    /// Odd power 2n+1 of Problem 2.
    #[arg(long)]
    pub n: Option<u32>,
    /// Absolute power of Problem 3.
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    /// Start time.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Start position.
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Number of Monte Carlo paths.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Base seed of the per-path random streams.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of monitoring times on the geometric grid.
    #[arg(long)]
    pub steps: Option<usize>,
    /// The grid ends at 1 - epsilon.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// JSON file with any of the other options; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (simulate: per-path CSV) or directory (figures).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print a JSON record instead of text.
    #[arg(long)]
    pub json: bool,
}

/// Options from a `--config` file; keys match the flag names.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub problem: Option<u8>,
    pub n: Option<u32>,
    pub q: Option<f64>,
    pub t: Option<f64>,
    pub x: Option<f64>,
    pub paths: Option<usize>,
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub json: Option<bool>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("invalid config {}: {e}", path.display())))
    }
}

/// The merged options of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub problem: Option<u8>,
    pub n: u32,
    pub q: f64,
    pub t: f64,
    pub x: f64,
    pub paths: usize,
    pub seed: Option<u64>,
    pub steps: usize,
    pub epsilon: f64,
    pub out: Option<PathBuf>,
    pub json: bool,
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self, Error> {
        let file = match &flags.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Ok(Self::merge(flags, file))
    }

    pub fn merge(flags: &Flags, file: FileConfig) -> Self {
        Self {
            problem: flags.problem.or(file.problem),
            n: flags.n.or(file.n).unwrap_or(DEFAULT_N),
            q: flags.q.or(file.q).unwrap_or(DEFAULT_Q),
            t: flags.t.or(file.t).unwrap_or(0.0),
            x: flags.x.or(file.x).unwrap_or(0.0),
            paths: flags.paths.or(file.paths).unwrap_or(DEFAULT_PATHS),
            seed: flags.seed.or(file.seed),
            steps: flags.steps.or(file.steps).unwrap_or(DEFAULT_STEPS),
            epsilon: flags.epsilon.or(file.epsilon).unwrap_or(DEFAULT_EPSILON),
            out: flags.out.clone().or(file.out),
            json: flags.json || file.json.unwrap_or(false),
        }
    }

    pub fn problem(&self) -> Result<ProblemSpec, Error> {
        let number = self
            .problem
            .ok_or_else(|| Error::Config("--problem is required (1, 2 or 3)".to_string()))?;
        ProblemSpec::from_number(number, self.n, self.q)
    }

    pub fn start(&self) -> Result<SpacePoint, Error> {
        SpacePoint::new(self.t, self.x)
    }

    pub fn seed(&self) -> Result<u64, Error> {
        self.seed
            .ok_or_else(|| Error::Config("--seed is required for simulate".to_string()))
    }
}
