use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ctxbell_core::inequality::Variant;
use serde::Serialize;

/// Invalid flags or configuration; maps to exit code 2.
#[derive(Debug, thiserror::Error)]
pub enum UsageError {
    #[error("invalid grid `{0}`: expected start:stop:step")]
    Grid(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] ctxbell_core::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantSel {
    Abs,
    Signed,
    Both,
}

impl VariantSel {
    pub fn variants(self) -> &'static [Variant] {
        match self {
            VariantSel::Abs => &[Variant::Abs],
            VariantSel::Signed => &[Variant::Signed],
            VariantSel::Both => &Variant::BOTH,
        }
    }
}

impl FromStr for VariantSel {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "abs" => Ok(VariantSel::Abs),
            "signed" => Ok(VariantSel::Signed),
            "both" => Ok(VariantSel::Both),
            _ => Err(UsageError::Invalid(format!("unknown variant `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

impl FromStr for Format {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(UsageError::Invalid(format!("unknown format `{s}`"))),
        }
    }
}

/// `start:stop:step`
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            start: 0.0,
            stop: 1.0,
            step: 0.001,
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

impl FromStr for Grid {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(UsageError::Grid(s.to_string()));
        };
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| UsageError::Grid(s.to_string()))
        };
        let grid = Grid {
            start: num(start)?,
            stop: num(stop)?,
            step: num(step)?,
        };
        if !grid.step.is_finite() || grid.step <= 0.0 {
            return Err(UsageError::Invalid(format!(
                "grid step must be > 0, got {}",
                grid.step
            )));
        }
        Ok(grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Identities,
    Quantum,
    Sample,
    HvBound,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Identities => "identities",
            Command::Quantum => "quantum",
            Command::Sample => "sample",
            Command::HvBound => "hv-bound",
            Command::Sweep => "sweep",
        }
    }
}

pub const DEFAULT_SHOTS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
/// Environment variable naming the directory reports go to when `--out` is
/// not given.
pub const OUT_DIR_ENV: &str = "CTXBELL_OUT_DIR";

/// Everything a command needs; echoed into the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub visibility: f64,
    pub shots: u64,
    pub seed: u64,
    pub variant: VariantSel,
    pub grid: Grid,
    pub output_format: Format,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub workers: usize,
    pub unconstrained: bool,
    pub chi_expt: Vec<f64>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            visibility: 1.0,
            shots: DEFAULT_SHOTS,
            seed: DEFAULT_SEED,
            variant: VariantSel::Both,
            grid: Grid::default(),
            output_format: Format::Json,
            output_path: None,
            workers: 1,
            unconstrained: false,
            chi_expt: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        ctxbell_core::Visibility::new(self.visibility)?;
        if self.shots == 0 {
            return Err(UsageError::Invalid("--shots must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(UsageError::Invalid("--workers must be at least 1".into()));
        }
        if self.output_format == Format::Csv && self.command != Command::Sweep {
            return Err(UsageError::Invalid(
                "csv output is only available for sweep".into(),
            ));
        }
        ctxbell_core::inequality::visibility_grid(self.grid.start, self.grid.stop, self.grid.step)?;
        for &chi in &self.chi_expt {
            ctxbell_core::inequality::visibility_threshold(chi)?;
        }
        Ok(())
    }
}
