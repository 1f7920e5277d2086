//! Run configuration: a TOML file with the sections `problem`, `grid`,
//! `time`, `initial`, `tolerances` and `output`. Unknown keys are errors.

use std::path::{Path, PathBuf};

use radhj::{EpsilonPolicy, ProblemParams, ReportOptions, SolverOptions, SourceScheme, TimeStepping};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const MIN_CELLS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemParams,
    pub grid: GridSection,
    pub time: TimeSection,
    pub initial: InitialData,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputSection,
}

/// `epsilon = 1e-10` or `epsilon = "sqrt-h"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EpsilonSetting {
    Value(f64),
    Named(NamedEpsilon),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedEpsilon {
    #[serde(rename = "sqrt-h")]
    SqrtH,
}

impl Default for EpsilonSetting {
    fn default() -> Self {
        EpsilonSetting::Value(radhj::radial::DEFAULT_EPSILON)
    }
}

impl EpsilonSetting {
    pub fn policy(&self) -> EpsilonPolicy {
        match *self {
            EpsilonSetting::Value(v) => EpsilonPolicy::Fixed(v),
            EpsilonSetting::Named(NamedEpsilon::SqrtH) => EpsilonPolicy::Grid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub cells: usize,
    #[serde(default)]
    pub epsilon: EpsilonSetting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SteppingKind {
    Explicit,
    #[default]
    Implicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub horizon: f64,
    /// Number of equally spaced output times in `(0, horizon]`.
    #[serde(default = "default_outputs")]
    pub outputs: usize,
    #[serde(default)]
    pub stepping: SteppingKind,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub source: SourceScheme,
}

fn default_outputs() -> usize {
    40
}

fn default_dt_max() -> f64 {
    1e-3
}

fn default_cfl() -> f64 {
    0.9
}

impl TimeSection {
    pub fn output_times(&self) -> Vec<f64> {
        let k = self.outputs as f64;
        (1..=self.outputs)
            .map(|i| if i == self.outputs { self.horizon } else { self.horizon * i as f64 / k })
            .collect()
    }

    pub fn solver_options(&self) -> SolverOptions {
        let stepping = match self.stepping {
            SteppingKind::Explicit => TimeStepping::Explicit { cfl: self.cfl },
            SteppingKind::Implicit => TimeStepping::Implicit { dt_max: self.dt_max },
        };
        SolverOptions {
            stepping,
            source: self.source,
        }
    }
}

/// Catalog of initial data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialData {
    Zero,
    /// A member of the steady family.
    Steady { theta: f64 },
    /// `amplitude (1 - r²)`.
    Parabolic { amplitude: f64 },
    /// `height (1 - x²)²` with `x = (r - center) / width`, zero for `|x| >= 1`.
    Bump { center: f64, width: f64, height: f64 },
    /// Two-column text file `r u`, linearly interpolated; paths are relative
    /// to the working directory.
    File { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    #[serde(default = "default_conv_tol")]
    pub conv_tol: f64,
    #[serde(default = "default_tail_slack")]
    pub tail_slack: f64,
}

fn default_tail_fraction() -> f64 {
    ReportOptions::default().tail_fraction
}

fn default_conv_tol() -> f64 {
    ReportOptions::default().conv_tol
}

fn default_tail_slack() -> f64 {
    ReportOptions::default().tail_slack
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tail_fraction: default_tail_fraction(),
            conv_tol: default_conv_tol(),
            tail_slack: default_tail_slack(),
        }
    }
}

impl Tolerances {
    pub fn report_options(&self) -> ReportOptions {
        ReportOptions {
            tail_fraction: self.tail_fraction,
            conv_tol: self.conv_tol,
            tail_slack: self.tail_slack,
            ..ReportOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Overridden by `--out`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Write every `stride`-th output time to the trajectory CSV.
    #[serde(default = "default_stride")]
    pub stride: usize,
}

fn default_stride() -> usize {
    1
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: None,
            stride: default_stride(),
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> CliResult<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> CliResult<()> {
        let invalid = |msg: String| Err(CliError::Config(msg));
        if self.grid.cells < MIN_CELLS {
            return invalid(format!("grid.cells = {} < {MIN_CELLS}", self.grid.cells));
        }
        if let EpsilonSetting::Value(e) = self.grid.epsilon {
            if !(e > 0.0 && e < 1.0) {
                return invalid(format!("grid.epsilon = {e} outside (0, 1)"));
            }
        }
        let t = &self.time;
        if !(t.horizon > 0.0 && t.horizon.is_finite()) {
            return invalid(format!("time.horizon = {} must be positive", t.horizon));
        }
        if t.outputs == 0 {
            return invalid("time.outputs must be at least 1".into());
        }
        if !(t.dt_max > 0.0) || !(t.cfl > 0.0 && t.cfl <= 1.0) {
            return invalid("time.dt_max must be positive and time.cfl in (0, 1]".into());
        }
        if self.output.stride == 0 {
            return invalid("output.stride must be at least 1".into());
        }
        let tol = &self.tolerances;
        if !(tol.tail_fraction > 0.0 && tol.tail_fraction <= 0.5) {
            return invalid(format!("tolerances.tail_fraction = {} outside (0, 0.5]", tol.tail_fraction));
        }
        if !(tol.conv_tol > 0.0) || !(tol.tail_slack >= 0.0) {
            return invalid("tolerances.conv_tol must be positive, tail_slack non-negative".into());
        }
        match &self.initial {
            InitialData::Steady { theta } if !(0.0..=1.0).contains(theta) => {
                invalid(format!("initial.theta = {theta} outside [0, 1]"))
            }
            InitialData::Parabolic { amplitude } if !(*amplitude >= 0.0) => {
                invalid(format!("initial.amplitude = {amplitude} must be non-negative"))
            }
            InitialData::Bump { center, width, height }
                if !(*width > 0.0 && *height >= 0.0 && *center >= 0.0 && center + width <= 1.0) =>
            {
                invalid("initial bump needs width > 0, height >= 0, 0 <= center, center + width <= 1".into())
            }
            InitialData::File { path } if !path.is_file() => {
                invalid(format!("initial.path {} does not exist", path.display()))
            }
            _ => Ok(()),
        }
    }
}
