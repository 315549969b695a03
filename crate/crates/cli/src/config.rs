//! Flat `key = value` run configuration.
//!
//! ```text
//! # reference geometry, SI units
//! m0 = 5e-14
//! d = 450e-6
//! dx = 250e-6
//! T = 1.5
//! convention = M0Squared
//! ```
//!
//! Keys are case-sensitive. Unspecified keys keep their defaults, and
//! command-line overrides are applied after the file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use gravwitness_core::analysis::{Model, VisibilityKind};
use gravwitness_core::gravmodel::{CouplingConvention, ExperimentParams, DEFAULT_TRACE_POINTS};
use thiserror::Error;

pub const VALID_KEYS: &[&str] = &[
    "m0",
    "d",
    "dx",
    "T",
    "G",
    "hbar",
    "c",
    "convention",
    "model",
    "visibility",
    "trace_points",
    "window",
    "unwrap",
    "outputs",
    "sweep_param",
    "sweep_start",
    "sweep_stop",
    "sweep_count",
    "sweep_scalar",
];

/// Where a setting came from, for error messages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Flag,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Flag => f.write_str("command-line override"),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: expected `key = value`, got `{text}`")]
    Syntax { origin: Origin, text: String },
    #[error("{origin}: unknown key `{key}` (valid keys: {})", VALID_KEYS.join(", "))]
    UnknownKey { origin: Origin, key: String },
    #[error("{origin}: cannot parse `{value}` as a number for `{key}`")]
    BadNumber {
        origin: Origin,
        key: String,
        value: String,
    },
    #[error("{origin}: invalid value `{value}` for `{key}`: {reason}")]
    BadValue {
        origin: Origin,
        key: String,
        value: String,
        reason: String,
    },
    #[error("invalid configuration: {0}")]
    Constraint(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputKind {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    M0,
    D,
    Dx,
    T,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::M0 => "m0",
            SweepParam::D => "d",
            SweepParam::Dx => "dx",
            SweepParam::T => "T",
        }
    }

    pub fn apply(self, p: &mut ExperimentParams, value: f64) {
        match self {
            SweepParam::M0 => p.m0 = value,
            SweepParam::D => p.d = value,
            SweepParam::Dx => p.dx = value,
            SweepParam::T => p.t_total = value,
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "m0" => Ok(SweepParam::M0),
            "d" => Ok(SweepParam::D),
            "dx" => Ok(SweepParam::Dx),
            "T" => Ok(SweepParam::T),
            _ => Err("expected one of m0, d, dx, T".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepScalar {
    TJump,
    VMin,
    DeltaPhi,
    ConcurrenceMax,
}

impl SweepScalar {
    pub fn name(self) -> &'static str {
        match self {
            SweepScalar::TJump => "t_jump",
            SweepScalar::VMin => "v_min",
            SweepScalar::DeltaPhi => "delta_phi",
            SweepScalar::ConcurrenceMax => "concurrence_max",
        }
    }
}

impl FromStr for SweepScalar {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "t_jump" => Ok(SweepScalar::TJump),
            "v_min" => Ok(SweepScalar::VMin),
            "delta_phi" => Ok(SweepScalar::DeltaPhi),
            "concurrence_max" => Ok(SweepScalar::ConcurrenceMax),
            _ => Err("expected one of t_jump, v_min, delta_phi, concurrence_max".into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ExperimentParams,
    pub trace_points: usize,
    /// `None` means `(0, T)`.
    pub window: Option<(f64, f64)>,
    pub unwrap: bool,
    pub outputs: Vec<OutputKind>,
    pub model: Model,
    pub visibility: VisibilityKind,
    pub sweep: Option<SweepAxis>,
    pub sweep_scalar: SweepScalar,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: ExperimentParams::default(),
            trace_points: DEFAULT_TRACE_POINTS,
            window: None,
            unwrap: false,
            outputs: vec![OutputKind::Csv],
            model: Model::Semiclassical,
            visibility: VisibilityKind::Global,
            sweep: None,
            sweep_scalar: SweepScalar::TJump,
        }
    }
}

/// Sweep fields are collected separately because they only make sense
/// together.
#[derive(Debug, Default)]
struct PartialSweep {
    param: Option<SweepParam>,
    start: Option<f64>,
    stop: Option<f64>,
    count: Option<usize>,
}

impl RunConfig {
    pub fn window(&self) -> (f64, f64) {
        self.window.unwrap_or((0.0, self.params.t_total))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params
            .validate()
            .map_err(|e| ConfigError::Constraint(e.to_string()))?;
        if self.trace_points < 2 {
            return Err(ConfigError::Constraint(format!(
                "trace_points >= 2 violated (trace_points = {})",
                self.trace_points
            )));
        }
        let (t0, t1) = self.window();
        if !(0.0 <= t0 && t0 < t1 && t1 <= self.params.t_total) {
            return Err(ConfigError::Constraint(format!(
                "window must satisfy 0 <= t0 < t1 <= T (got ({t0}, {t1}) with T = {})",
                self.params.t_total
            )));
        }
        if let Some(axis) = &self.sweep {
            if axis.count < 2 {
                return Err(ConfigError::Constraint(format!(
                    "sweep_count >= 2 violated (sweep_count = {})",
                    axis.count
                )));
            }
            if !(axis.start.is_finite() && axis.stop.is_finite()) {
                return Err(ConfigError::Constraint(
                    "sweep bounds must be finite".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Splits config text into `(key, value, line)` triples.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String, Origin)>, ConfigError> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let origin = Origin::Line(idx + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                origin,
                text: line.to_string(),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                origin,
                text: line.to_string(),
            });
        }
        pairs.push((key.to_string(), value.to_string(), origin));
    }
    Ok(pairs)
}

/// Builds a config from an optional file plus `key=value` overrides, which
/// win over the file.
pub fn load_config(
    path: Option<&Path>,
    overrides: &[(String, String)],
) -> Result<RunConfig, ConfigError> {
    let text = match path {
        Some(path) => std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?,
        None => String::new(),
    };
    let mut pairs = parse_pairs(&text)?;
    pairs.extend(
        overrides
            .iter()
            .map(|(k, v)| (k.clone(), v.clone(), Origin::Flag)),
    );

    let mut cfg = RunConfig::default();
    let mut sweep = PartialSweep::default();
    for (key, value, origin) in &pairs {
        apply(&mut cfg, &mut sweep, key, value, *origin)?;
    }
    cfg.sweep = match sweep {
        PartialSweep {
            param: None,
            start: None,
            stop: None,
            count: None,
        } => None,
        PartialSweep {
            param: Some(param),
            start: Some(start),
            stop: Some(stop),
            count,
        } => Some(SweepAxis {
            param,
            start,
            stop,
            count: count.unwrap_or(11),
        }),
        _ => {
            return Err(ConfigError::Constraint(
                "a sweep needs sweep_param, sweep_start and sweep_stop".into(),
            ))
        }
    };
    cfg.validate()?;
    Ok(cfg)
}

fn apply(
    cfg: &mut RunConfig,
    sweep: &mut PartialSweep,
    key: &str,
    value: &str,
    origin: Origin,
) -> Result<(), ConfigError> {
    let number = || -> Result<f64, ConfigError> {
        value.parse::<f64>().map_err(|_| ConfigError::BadNumber {
            origin,
            key: key.to_string(),
            value: value.to_string(),
        })
    };
    let bad = |reason: String| ConfigError::BadValue {
        origin,
        key: key.to_string(),
        value: value.to_string(),
        reason,
    };
    match key {
        "m0" => cfg.params.m0 = number()?,
        "d" => cfg.params.d = number()?,
        "dx" => cfg.params.dx = number()?,
        "T" => cfg.params.t_total = number()?,
        "G" => cfg.params.g = number()?,
        "hbar" => cfg.params.hbar = number()?,
        "c" => cfg.params.c = number()?,
        "convention" => {
            cfg.params.coupling = value
                .parse::<CouplingConvention>()
                .map_err(|e| bad(e.to_string()))?
        }
        "model" => cfg.model = value.parse::<Model>().map_err(|e| bad(e.to_string()))?,
        "visibility" => {
            cfg.visibility = value
                .parse::<VisibilityKind>()
                .map_err(|e| bad(e.to_string()))?
        }
        "trace_points" => cfg.trace_points = parse_count(value).map_err(bad)?,
        "window" => {
            let parts: Vec<&str> = value.split(',').map(str::trim).collect();
            let [a, b] = parts.as_slice() else {
                return Err(bad("expected `t0, t1`".into()));
            };
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|_| ConfigError::BadNumber {
                    origin,
                    key: key.to_string(),
                    value: s.to_string(),
                })
            };
            cfg.window = Some((parse(a)?, parse(b)?));
        }
        "unwrap" => {
            cfg.unwrap = match value {
                "true" | "1" | "yes" => true,
                "false" | "0" | "no" => false,
                _ => return Err(bad("expected true or false".into())),
            }
        }
        "outputs" => {
            let mut outputs = Vec::new();
            for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let kind = match item {
                    "csv" => OutputKind::Csv,
                    "svg" => OutputKind::Svg,
                    _ => return Err(bad("expected a list of csv, svg".into())),
                };
                if !outputs.contains(&kind) {
                    outputs.push(kind);
                }
            }
            if outputs.is_empty() {
                return Err(bad("at least one output is required".into()));
            }
            cfg.outputs = outputs;
        }
        "sweep_param" => sweep.param = Some(value.parse().map_err(bad)?),
        "sweep_start" => sweep.start = Some(number()?),
        "sweep_stop" => sweep.stop = Some(number()?),
        "sweep_count" => sweep.count = Some(parse_count(value).map_err(bad)?),
        "sweep_scalar" => cfg.sweep_scalar = value.parse().map_err(bad)?,
        _ => {
            return Err(ConfigError::UnknownKey {
                origin,
                key: key.to_string(),
            })
        }
    }
    Ok(())
}

fn parse_count(value: &str) -> Result<usize, String> {
    value
        .parse::<usize>()
        .map_err(|_| "expected a non-negative integer".to_string())
}
