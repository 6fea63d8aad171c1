use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::chsh::ChshConfig;
use crate::estimators::Pipeline;
use crate::ga::{Direction, Vector3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("--trials must be at least 1")]
    NoTrials,
    #[error("--workers must be at least 1")]
    NoWorkers,
    #[error("invalid angle sweep '{0}': expected START:STOP:STEP in degrees")]
    SweepSyntax(String),
    #[error("invalid angle sweep: step must be > 0, got {0}")]
    SweepStep(f64),
    #[error("invalid angle sweep: stop {stop} is before start {start}")]
    SweepOrder { start: f64, stop: f64 },
    #[error("invalid direction '{input}': {reason}")]
    Direction { input: String, reason: String },
    #[error("no pipelines selected")]
    NoPipelines,
    #[error("{0}")]
    Pipeline(String),
    #[error("unknown output format '{0}', expected csv or json")]
    Format(String),
    #[error("--{0} requires --{1}")]
    MissingPartner(&'static str, &'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleSweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl AngleSweep {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, ConfigError> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(ConfigError::SweepStep(step));
        }
        if !start.is_finite() || !stop.is_finite() || stop < start {
            return Err(ConfigError::SweepOrder { start, stop });
        }
        Ok(Self { start, stop, step })
    }

    /// Angles `start + i * step` up to and including `stop`.
    pub fn angles(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for AngleSweep {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| ConfigError::SweepSyntax(s.to_string()))?;
        match parts[..] {
            [start, stop, step] => Self::new(start, stop, step),
            _ => Err(ConfigError::SweepSyntax(s.to_string())),
        }
    }
}

/// Parses a setting given as planar degrees (`"45"`) or an explicit vector
/// (`"x,y,z"`, normalized).
pub fn parse_direction(input: &str) -> Result<Direction, ConfigError> {
    let err = |reason: &str| ConfigError::Direction {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let parts: Vec<&str> = input.split(',').map(str::trim).collect();
    match parts[..] {
        [deg] => {
            let deg: f64 = deg.parse().map_err(|_| err("not a number of degrees"))?;
            if !deg.is_finite() {
                return Err(err("angle is not finite"));
            }
            Ok(Direction::planar(deg))
        }
        [x, y, z] => {
            let c: Vec<f64> = [x, y, z]
                .iter()
                .map(|v| v.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| err("vector components must be numbers"))?;
            Direction::normalize(Vector3::new(c[0], c[1], c[2])).map_err(|e| err(&e.to_string()))
        }
        _ => Err(err("expected degrees or x,y,z")),
    }
}

pub fn parse_pipelines(input: &str) -> Result<BTreeSet<Pipeline>, ConfigError> {
    let set = input
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Pipeline>().map_err(ConfigError::Pipeline))
        .collect::<Result<BTreeSet<_>, _>>()?;
    if set.is_empty() {
        return Err(ConfigError::NoPipelines);
    }
    Ok(set)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(ConfigError::Format(s.to_string())),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

/// Which detector settings a run scores.
#[derive(Debug, Clone, PartialEq)]
pub enum Settings {
    /// `a` along +x, `b` in the xy-plane at each angle.
    Sweep(AngleSweep),
    Pair { a: Direction, b: Direction },
    Quad(ChshConfig),
}

impl Settings {
    /// `(theta in degrees, a, b)` for every row of a correlation report.
    pub fn pairs(&self) -> Vec<(f64, Direction, Direction)> {
        match self {
            Self::Sweep(sweep) => sweep
                .angles()
                .into_iter()
                .map(|theta| (theta, Direction::X, Direction::planar(theta)))
                .collect(),
            Self::Pair { a, b } => vec![(angle_between(*a, *b), *a, *b)],
            Self::Quad(q) => q
                .pairs()
                .into_iter()
                .map(|(a, b)| (angle_between(a, b), a, b))
                .collect(),
        }
    }
}

pub fn angle_between(a: Direction, b: Direction) -> f64 {
    a.dot(b).clamp(-1.0, 1.0).acos().to_degrees()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub trials: u64,
    pub seed: u64,
    pub settings: Settings,
    pub pipelines: BTreeSet<Pipeline>,
    pub format: OutputFormat,
    pub workers: usize,
    pub strict_sampling: bool,
}

impl ExperimentConfig {
    pub fn new(trials: u64, seed: u64, settings: Settings) -> Self {
        Self {
            trials,
            seed,
            settings,
            pipelines: Pipeline::ALL.into_iter().collect(),
            format: OutputFormat::Csv,
            workers: 1,
            strict_sampling: false,
        }
    }

    pub fn with_pipelines(mut self, pipelines: impl IntoIterator<Item = Pipeline>) -> Self {
        self.pipelines = pipelines.into_iter().collect();
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = format;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::NoTrials);
        }
        if self.workers == 0 {
            return Err(ConfigError::NoWorkers);
        }
        if self.pipelines.is_empty() {
            return Err(ConfigError::NoPipelines);
        }
        Ok(())
    }
}
