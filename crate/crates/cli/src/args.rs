//! Command-line flags and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use zeno_core::Bandwidth;

use crate::config::{parse_bandwidth, Axis, Command, ConfigLayer, ExperimentConfig, Model, Tau};
use crate::dataset::write_output;
use crate::error::{CliError, Result};
use crate::{experiments, selfcheck};

#[derive(Debug, Parser)]
#[command(
    name = "zeno-lab",
    version,
    about = "No-click probabilities of pulsed and continuous detectors, as CSV"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// w_lambda(t) / t for several bandwidths, plus w_lambda(t)
    Fig1,
    /// Saturation values against the bandwidth
    Fig2,
    /// Continuous vs Schulman-paired bang-bang curves at sigma = 40 and 3
    Fig3,
    /// One row per value of a swept parameter
    Sweep(SweepArgs),
    /// w_lambda(t) and the bang-bang no-click curve
    Pulsed,
    /// Continuous-measurement curves; --model picks which
    Continuous,
    /// Continuous and bang-bang no-click curves side by side
    Compare,
    /// Run the invariant checks and report measured vs allowed
    Selfcheck(SelfcheckArgs),
}

#[derive(Debug, Args, Default)]
pub struct Common {
    /// Decay rate of the unstable state
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Detector bandwidth, a number or `inf`
    #[arg(long, global = true, value_parser = parse_bandwidth)]
    pub lambda: Option<Bandwidth<f64>>,
    /// Continuous detection efficiency
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    /// Pulse interval, a number or `schulman` for 4 / sigma
    #[arg(long, global = true)]
    pub tau: Option<Tau>,
    /// End of the time grid
    #[arg(long = "t-max", global = true)]
    pub t_max: Option<f64>,
    /// Number of grid points
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Log-spaced times from t_max / 1000
    #[arg(long = "log-time", global = true)]
    pub log_time: bool,
    /// Relative quadrature tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key = value` file layered between the preset and these flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Significant digits in the CSV
    #[arg(long, global = true)]
    pub precision: Option<usize>,
    /// pulsed, continuous, both, approx or large-lambda
    #[arg(long, global = true)]
    pub model: Option<Model>,
    /// Bandwidths for fig1, comma separated
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_bandwidth)]
    pub lambdas: Vec<Bandwidth<f64>>,
    /// Pulse intervals for fig2, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub taus: Vec<f64>,
}

#[derive(Debug, Args, Default)]
pub struct SweepArgs {
    /// lambda, sigma or tau
    #[arg(long)]
    pub axis: Option<Axis>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Times at which to report the no-click curves, comma separated
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<f64>,
}

#[derive(Debug, Args, Default)]
pub struct SelfcheckArgs {
    /// Put the self-energy on the wrong logarithm branch
    #[arg(long)]
    pub debug_misbranch: bool,
}

fn nonempty<T>(v: &[T]) -> Option<Vec<T>>
where
    T: Clone,
{
    (!v.is_empty()).then(|| v.to_vec())
}

impl Cli {
    pub fn kind(&self) -> Command {
        match self.command {
            Sub::Fig1 => Command::Fig1,
            Sub::Fig2 => Command::Fig2,
            Sub::Fig3 => Command::Fig3,
            Sub::Sweep(_) => Command::Sweep,
            Sub::Pulsed => Command::Pulsed,
            Sub::Continuous => Command::Continuous,
            Sub::Compare => Command::Compare,
            Sub::Selfcheck(_) => Command::Selfcheck,
        }
    }

    /// The flag layer: only what was given on the command line.
    pub fn layer(&self) -> ConfigLayer {
        let c = &self.common;
        let mut layer = ConfigLayer {
            model: c.model,
            gamma: c.gamma,
            lambda: c.lambda,
            sigma: c.sigma,
            tau: c.tau,
            t_max: c.t_max,
            points: c.points,
            log_time: c.log_time.then_some(true),
            tol: c.tol,
            precision: c.precision,
            out: c.out.clone(),
            lambdas: nonempty(&c.lambdas),
            taus: nonempty(&c.taus),
            ..ConfigLayer::default()
        };
        if let Sub::Sweep(s) = &self.command {
            layer.axis = s.axis;
            layer.from = s.from;
            layer.to = s.to;
            layer.step = s.step;
            layer.at = nonempty(&s.at);
        }
        layer
    }

    pub fn config(&self) -> Result<ExperimentConfig> {
        let file = self
            .common
            .config
            .as_deref()
            .map(ConfigLayer::load)
            .transpose()?;
        ExperimentConfig::resolve(self.kind(), file, self.layer())
    }
}

/// Runs the parsed command, writing its CSV or report.
pub fn execute(cli: &Cli) -> Result<()> {
    let cfg = cli.config()?;
    if let Sub::Selfcheck(s) = &cli.command {
        let checks = selfcheck::run(selfcheck::Options {
            tol: cfg.tol,
            misbranch: s.debug_misbranch,
        })?;
        let mut report = String::new();
        for c in &checks {
            report.push_str(&c.to_string());
            report.push('\n');
        }
        let failed = checks.iter().filter(|c| !c.passed()).count();
        report.push_str(&format!(
            "{} passed, {failed} failed\n",
            checks.len() - failed
        ));
        write_output(&report, cfg.out.as_deref())?;
        return if failed == 0 {
            Ok(())
        } else {
            Err(CliError::SelfCheck { failed })
        };
    }
    let data = experiments::run(&cfg)?;
    let text = data.to_csv(&experiments::header(&cfg), cfg.precision)?;
    write_output(&text, cfg.out.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "zeno-lab",
            "fig3",
            "--sigma",
            "5",
            "--lambda",
            "inf",
            "--log-time",
        ])
        .unwrap();
        let layer = cli.layer();
        assert_eq!(layer.sigma, Some(5.0));
        assert_eq!(layer.lambda, Some(Bandwidth::Infinite));
        assert_eq!(layer.log_time, Some(true));
        assert_eq!(layer.gamma, None);
    }

    #[test]
    fn sweep_flags() {
        let cli = Cli::try_parse_from([
            "zeno-lab", "sweep", "--axis", "tau", "--from", "0.1", "--to", "1", "--step", "0.1",
            "--at", "1,2",
        ])
        .unwrap();
        let layer = cli.layer();
        assert_eq!(layer.axis, Some(Axis::Tau));
        assert_eq!(layer.at, Some(vec![1.0, 2.0]));
    }

    #[test]
    fn tau_and_lists() {
        let cli = Cli::try_parse_from([
            "zeno-lab",
            "fig1",
            "--tau",
            "schulman",
            "--lambdas",
            "1,inf",
            "--taus",
            "0.2",
        ])
        .unwrap();
        let layer = cli.layer();
        assert_eq!(layer.tau, Some(Tau::Schulman));
        assert_eq!(
            layer.lambdas,
            Some(vec![Bandwidth::Finite(1.0), Bandwidth::Infinite])
        );
        assert_eq!(layer.taus, Some(vec![0.2]));
        assert!(Cli::try_parse_from(["zeno-lab", "fig1", "--lambda", "wide"]).is_err());
    }
}
