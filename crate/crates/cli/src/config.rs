//! Experiment configuration: preset, then `key = value` file, then flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use zeno_core::model::{linear_times, log_times};
use zeno_core::{Bandwidth, Detector, System, Tol};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Fig1,
    Fig2,
    Fig3,
    Sweep,
    Pulsed,
    Continuous,
    Compare,
    Selfcheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Sweep => "sweep",
            Self::Pulsed => "pulsed",
            Self::Continuous => "continuous",
            Self::Compare => "compare",
            Self::Selfcheck => "selfcheck",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Pulsed,
    Continuous,
    Both,
    Approx,
    LargeLambda,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Self::Pulsed => "pulsed",
            Self::Continuous => "continuous",
            Self::Both => "both",
            Self::Approx => "approx",
            Self::LargeLambda => "large-lambda",
        }
    }

    pub fn has_pulsed(self) -> bool {
        matches!(self, Self::Pulsed | Self::Both)
    }

    pub fn has_continuous(self) -> bool {
        !matches!(self, Self::Pulsed)
    }
}

impl FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "pulsed" => Self::Pulsed,
            "continuous" => Self::Continuous,
            "both" => Self::Both,
            "approx" => Self::Approx,
            "large-lambda" => Self::LargeLambda,
            _ => {
                return Err(format!(
                    "unknown model {s:?} (pulsed, continuous, both, approx, large-lambda)"
                ))
            }
        })
    }
}

/// Pulse interval, either fixed or paired with `sigma` as `4 / sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tau {
    Value(f64),
    Schulman,
}

impl Tau {
    pub fn resolve(self, sigma: f64) -> Result<f64> {
        match self {
            Self::Value(t) => Ok(t),
            Self::Schulman if sigma > 0.0 => Ok(4.0 / sigma),
            Self::Schulman => Err(CliError::usage("tau = schulman needs sigma > 0")),
        }
    }
}

impl FromStr for Tau {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "schulman" {
            return Ok(Self::Schulman);
        }
        s.parse::<f64>()
            .map(Self::Value)
            .map_err(|_| format!("tau must be a number or \"schulman\", got {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Lambda,
    Sigma,
    Tau,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Lambda => "lambda",
            Self::Sigma => "sigma",
            Self::Tau => "tau",
        }
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "lambda" => Self::Lambda,
            "sigma" => Self::Sigma,
            "tau" => Self::Tau,
            _ => return Err(format!("unknown sweep axis {s:?} (lambda, sigma, tau)")),
        })
    }
}

/// A number or `inf`.
pub fn parse_bandwidth(s: &str) -> Result<Bandwidth<f64>, String> {
    if s == "inf" {
        return Ok(Bandwidth::Infinite);
    }
    s.parse::<f64>()
        .map(Bandwidth::Finite)
        .map_err(|_| format!("lambda must be a number or \"inf\", got {s:?}"))
}

fn parse_list<T>(s: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    s.split(',').map(|x| item(x.trim())).collect()
}

fn parse_f64(s: &str) -> Result<f64, String> {
    s.parse::<f64>().map_err(|_| format!("not a number: {s:?}"))
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("not a boolean: {s:?}")),
    }
}

/// Every setting optional; layers are merged field by field.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub model: Option<Model>,
    pub gamma: Option<f64>,
    pub lambda: Option<Bandwidth<f64>>,
    pub sigma: Option<f64>,
    pub tau: Option<Tau>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub log_time: Option<bool>,
    pub tol: Option<f64>,
    pub precision: Option<usize>,
    pub out: Option<PathBuf>,
    pub lambdas: Option<Vec<Bandwidth<f64>>>,
    pub taus: Option<Vec<f64>>,
    pub axis: Option<Axis>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,
    pub at: Option<Vec<f64>>,
}

macro_rules! overlay_fields {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl ConfigLayer {
    /// `other` wins wherever it is set.
    pub fn overlay(mut self, other: ConfigLayer) -> Self {
        overlay_fields!(
            self, other, model, gamma, lambda, sigma, tau, t_max, points, log_time, tol, precision,
            out, lambdas, taus, axis, from, to, step, at
        );
        self
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut layer = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |reason: String| CliError::ConfigFile {
                path: path.to_path_buf(),
                line: i + 1,
                reason,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got {line:?}")))?;
            layer.set(key.trim(), value.trim()).map_err(err)?;
        }
        Ok(layer)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::ConfigFile {
            path: path.to_path_buf(),
            line: 0,
            reason: e.to_string(),
        })?;
        Self::parse(&text, path)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), String> {
        match key {
            "model" => self.model = Some(v.parse()?),
            "gamma" => self.gamma = Some(parse_f64(v)?),
            "lambda" => self.lambda = Some(parse_bandwidth(v)?),
            "sigma" => self.sigma = Some(parse_f64(v)?),
            "tau" => self.tau = Some(v.parse()?),
            "t_max" | "t-max" => self.t_max = Some(parse_f64(v)?),
            "points" => {
                self.points = Some(
                    v.parse()
                        .map_err(|_| format!("points must be an integer, got {v:?}"))?,
                )
            }
            "log_time" | "log-time" => self.log_time = Some(parse_bool(v)?),
            "tol" => self.tol = Some(parse_f64(v)?),
            "precision" => {
                self.precision = Some(
                    v.parse()
                        .map_err(|_| format!("precision must be an integer, got {v:?}"))?,
                )
            }
            "out" => self.out = Some(PathBuf::from(v)),
            "lambdas" => self.lambdas = Some(parse_list(v, parse_bandwidth)?),
            "taus" => self.taus = Some(parse_list(v, parse_f64)?),
            "axis" => self.axis = Some(v.parse()?),
            "from" => self.from = Some(parse_f64(v)?),
            "to" => self.to = Some(parse_f64(v)?),
            "step" => self.step = Some(parse_f64(v)?),
            "at" => self.at = Some(parse_list(v, parse_f64)?),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }
}

/// Built-in defaults for `cmd`. Times are in units of `1 / gamma` and are
/// rescaled once `gamma` is known.
pub fn preset(cmd: Command) -> ConfigLayer {
    let (t_max, points) = match cmd {
        Command::Fig1 => (4.0, 200),
        Command::Fig3 => (10.0, 400),
        _ => (10.0, 200),
    };
    ConfigLayer {
        model: Some(if cmd == Command::Continuous {
            Model::Continuous
        } else {
            Model::Both
        }),
        gamma: Some(1.0),
        lambda: Some(Bandwidth::Finite(3.0)),
        sigma: Some(40.0),
        tau: Some(Tau::Schulman),
        t_max: None,
        points: Some(points),
        log_time: Some(false),
        tol: Some(Tol::default().rel_tol),
        precision: Some(12),
        out: None,
        lambdas: Some(vec![
            Bandwidth::Finite(1.0),
            Bandwidth::Finite(3.0),
            Bandwidth::Finite(10.0),
            Bandwidth::Infinite,
        ]),
        taus: Some(vec![0.1, 0.5, 1.0]),
        axis: Some(Axis::Sigma),
        from: Some(1.0),
        to: Some(40.0),
        step: Some(1.0),
        at: Some(match cmd {
            Command::Sweep => Vec::new(),
            _ => vec![t_max],
        }),
    }
}

/// Fully resolved and validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub model: Model,
    pub gamma: f64,
    pub lambda: Bandwidth<f64>,
    pub sigma: f64,
    pub tau: Tau,
    pub t_max: f64,
    pub points: usize,
    pub log_time: bool,
    pub tol: f64,
    pub precision: usize,
    pub out: Option<PathBuf>,
    pub lambdas: Vec<Bandwidth<f64>>,
    pub taus: Vec<f64>,
    pub axis: Axis,
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub at: Vec<f64>,
}

fn positive(name: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::usage(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

impl ExperimentConfig {
    /// Preset, then the config file, then flags.
    pub fn resolve(cmd: Command, file: Option<ConfigLayer>, flags: ConfigLayer) -> Result<Self> {
        let mut layer = preset(cmd);
        if let Some(f) = file {
            layer = layer.overlay(f);
        }
        let layer = layer.overlay(flags);
        let gamma = positive("gamma", layer.gamma.expect("preset"))?;
        let t_max = match layer.t_max {
            Some(t) => positive("t_max", t)?,
            None => preset_t_max(cmd) / gamma,
        };
        let sigma = layer.sigma.expect("preset");
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(CliError::usage(format!(
                "sigma must be >= 0 and finite, got {sigma}"
            )));
        }
        let lambda = layer.lambda.expect("preset");
        if let Bandwidth::Finite(l) = lambda {
            positive("lambda", l)?;
        }
        let tau = layer.tau.expect("preset");
        if let Tau::Value(t) = tau {
            positive("tau", t)?;
        }
        let points = layer.points.expect("preset");
        if points < 2 {
            return Err(CliError::usage(format!(
                "points must be at least 2, got {points}"
            )));
        }
        let tol = layer.tol.expect("preset");
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::usage(format!(
                "tol must lie in (0, 1), got {tol}"
            )));
        }
        let precision = layer.precision.expect("preset");
        if !(1..=17).contains(&precision) {
            return Err(CliError::usage(format!(
                "precision must lie in 1..=17, got {precision}"
            )));
        }
        let taus = layer.taus.expect("preset");
        for &t in &taus {
            positive("taus", t)?;
        }
        let lambdas = layer.lambdas.expect("preset");
        for l in &lambdas {
            if let Bandwidth::Finite(x) = l {
                positive("lambdas", *x)?;
            }
        }
        let at = layer.at.expect("preset");
        for &t in &at {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::usage(format!(
                    "at times must be >= 0 and finite, got {t}"
                )));
            }
        }
        Ok(Self {
            command: cmd,
            model: layer.model.expect("preset"),
            gamma,
            lambda,
            sigma,
            tau,
            t_max,
            points,
            log_time: layer.log_time.expect("preset"),
            tol,
            precision,
            out: layer.out,
            lambdas,
            taus,
            axis: layer.axis.expect("preset"),
            from: layer.from.expect("preset"),
            to: layer.to.expect("preset"),
            step: layer.step.expect("preset"),
            at,
        })
    }

    pub fn system(&self) -> Result<System> {
        Ok(System::new(self.gamma)?)
    }

    pub fn tolerances(&self) -> Tol {
        Tol::default().with_rel_tol(self.tol)
    }

    pub fn tau_value(&self) -> Result<f64> {
        self.tau.resolve(self.sigma)
    }

    pub fn continuous_detector(&self) -> Result<Detector> {
        Ok(Detector::new(self.lambda, self.sigma, None)?)
    }

    pub fn pulsed_detector(&self) -> Result<Detector> {
        Ok(Detector::new(self.lambda, 0.0, Some(self.tau_value()?))?)
    }

    /// The time grid; log spacing starts at `t_max / 1000`.
    pub fn times(&self) -> Vec<f64> {
        if self.log_time {
            log_times(self.t_max * 1e-3, self.t_max, self.points)
        } else {
            linear_times(self.t_max, self.points)
        }
    }

    /// The settings that shape the output, in a fixed order. The output path
    /// is left out so the same experiment written twice is byte-identical.
    pub fn canonical(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "gamma={} ", self.gamma);
        match self.command {
            Command::Fig1 => {
                let _ = write!(
                    s,
                    "lambdas={} ",
                    join(self.lambdas.iter().map(fmt_bandwidth))
                );
            }
            Command::Fig2 => {
                let _ = write!(
                    s,
                    "taus={} points={} ",
                    join(self.taus.iter().map(f64::to_string)),
                    self.points
                );
            }
            Command::Sweep => {
                let _ = write!(
                    s,
                    "model={} lambda={} sigma={} tau={} axis={} from={} to={} step={} at={} ",
                    self.model.name(),
                    fmt_bandwidth(&self.lambda),
                    self.sigma,
                    fmt_tau(self.tau),
                    self.axis.name(),
                    self.from,
                    self.to,
                    self.step,
                    join(self.at.iter().map(f64::to_string)),
                );
            }
            _ => {
                if self.command == Command::Continuous {
                    let _ = write!(s, "model={} ", self.model.name());
                }
                let _ = write!(
                    s,
                    "lambda={} sigma={} tau={} ",
                    fmt_bandwidth(&self.lambda),
                    self.sigma,
                    fmt_tau(self.tau)
                );
            }
        }
        if !matches!(self.command, Command::Fig2 | Command::Sweep) {
            let _ = write!(
                s,
                "t_max={} points={} spacing={} ",
                self.t_max,
                self.points,
                if self.log_time { "log" } else { "linear" }
            );
        }
        let _ = write!(s, "tol={:e} precision={}", self.tol, self.precision);
        s
    }
}

fn preset_t_max(cmd: Command) -> f64 {
    match cmd {
        Command::Fig1 => 4.0,
        _ => 10.0,
    }
}

pub fn fmt_bandwidth(b: &Bandwidth<f64>) -> String {
    match b {
        Bandwidth::Infinite => "inf".into(),
        Bandwidth::Finite(x) => x.to_string(),
    }
}

fn fmt_tau(t: Tau) -> String {
    match t {
        Tau::Schulman => "schulman".into(),
        Tau::Value(x) => x.to_string(),
    }
}

fn join(items: impl Iterator<Item = String>) -> String {
    items.collect::<Vec<_>>().join(",")
}
