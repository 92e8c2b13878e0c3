//! The dataset behind each subcommand.

use zeno_core::continuous::{
    effective_width, noclick_c_inf, noclick_c_inf_large_sigma, noclick_c_large_lambda,
};
use zeno_core::model::log_times;
use zeno_core::pulsed::{noclick_bb, noclick_bb_inf, w_lambda, w_lambda_inf};
use zeno_core::{Bandwidth, Continuous, Detector, System};

use crate::config::{fmt_bandwidth, Axis, Command, ExperimentConfig, Model, Tau};
use crate::dataset::Dataset;
use crate::error::{CliError, Result};

/// First line of every CSV file.
pub fn header(cfg: &ExperimentConfig) -> String {
    format!(
        "zeno-lab v{} {} {}",
        env!("CARGO_PKG_VERSION"),
        cfg.command.name(),
        cfg.canonical()
    )
}

pub fn run(cfg: &ExperimentConfig) -> Result<Dataset> {
    match cfg.command {
        Command::Fig1 => fig1(cfg),
        Command::Fig2 => fig2(cfg),
        Command::Fig3 => fig3(cfg),
        Command::Sweep => sweep(cfg),
        Command::Pulsed => pulsed(cfg),
        Command::Continuous => continuous(cfg),
        Command::Compare => compare(cfg),
        Command::Selfcheck => Err(CliError::usage(
            "selfcheck produces a report, not a dataset",
        )),
    }
}

fn model(sys: System, det: Detector, cfg: &ExperimentConfig, times: &[f64]) -> Result<Continuous> {
    let t_max = times.last().copied().unwrap_or(0.0).max(cfg.t_max);
    Ok(Continuous::new(sys, det, cfg.tolerances(), t_max)?)
}

fn free_decay(sys: &System, times: &[f64]) -> Vec<f64> {
    times.iter().map(|&t| (-sys.gamma() * t).exp()).collect()
}

/// `w_lambda(t) / t` and `w_lambda(t)` for each bandwidth.
pub fn fig1(cfg: &ExperimentConfig) -> Result<Dataset> {
    let sys = cfg.system()?;
    let tol = cfg.tolerances();
    let times = cfg.times();
    let mut ratios = Dataset::new().plain("t", times.clone());
    let mut ws = Vec::new();
    for l in &cfg.lambdas {
        let det = Detector::new(*l, 0.0, None)?;
        let w = times
            .iter()
            .map(|&t| w_lambda(t, &sys, &det, &tol))
            .collect::<zeno_core::Result<Vec<f64>>>()?;
        // t -> 0: quadratic onset in band, slope gamma without a band edge
        let onset = if l.is_infinite() { sys.gamma() } else { 0.0 };
        let ratio = times
            .iter()
            .zip(&w)
            .map(|(&t, &w)| if t == 0.0 { onset } else { w / t })
            .collect();
        let name = fmt_bandwidth(l);
        ratios = ratios.plain(format!("w_over_t_lambda={name}"), ratio);
        ws.push((format!("w_lambda={name}"), w));
    }
    Ok(ws.into_iter().fold(ratios, |d, (name, w)| d.prob(name, w)))
}

/// Saturation values against the bandwidth.
pub fn fig2(cfg: &ExperimentConfig) -> Result<Dataset> {
    let sys = cfg.system()?;
    let tol = cfg.tolerances();
    let g = sys.gamma();
    let lambdas = log_times(0.1 * g, 50.0 * g, cfg.points);
    let continuous = lambdas
        .iter()
        .map(|&l| Ok(1.0 - w_lambda_inf(&sys, &Detector::continuous(l, 0.0)?)))
        .collect::<Result<Vec<f64>>>()?;
    let mut d = Dataset::new()
        .plain("lambda", lambdas.clone())
        .prob("continuous", continuous);
    for &tau in &cfg.taus {
        let col = lambdas
            .iter()
            .map(|&l| Ok(noclick_bb_inf(&sys, &Detector::pulsed(l, tau)?, &tol)?))
            .collect::<Result<Vec<f64>>>()?;
        d = d.prob(format!("bang_bang_tau={tau}"), col);
    }
    Ok(d)
}

/// Continuous and Schulman-paired bang-bang curves for `sigma` = 40 and 3.
pub fn fig3(cfg: &ExperimentConfig) -> Result<Dataset> {
    let sys = cfg.system()?;
    let tol = cfg.tolerances();
    let times = cfg.times();
    let mut d = Dataset::new().plain("t", times.clone());
    for s in [40.0, 3.0] {
        let sigma = s * sys.gamma();
        let c =
            model(sys, Detector::new(cfg.lambda, sigma, None)?, cfg, &times)?.noclick_c(&times)?;
        let bb = noclick_bb(
            &times,
            &sys,
            &Detector::new(cfg.lambda, 0.0, Some(4.0 / sigma))?,
            &tol,
        )?;
        d = d
            .prob(format!("noclick_c_sigma={s}"), c.values().to_vec())
            .prob(format!("noclick_bb_sigma={s}"), bb.values().to_vec());
    }
    Ok(d.prob("exp", free_decay(&sys, &times)))
}

pub fn pulsed(cfg: &ExperimentConfig) -> Result<Dataset> {
    let sys = cfg.system()?;
    let tol = cfg.tolerances();
    let times = cfg.times();
    let det = cfg.pulsed_detector()?;
    let w = times
        .iter()
        .map(|&t| w_lambda(t, &sys, &det, &tol))
        .collect::<zeno_core::Result<Vec<f64>>>()?;
    let bb = noclick_bb(&times, &sys, &det, &tol)?;
    Ok(Dataset::new()
        .plain("t", times)
        .prob("w_lambda", w)
        .prob("noclick_bb", bb.values().to_vec()))
}

pub fn continuous(cfg: &ExperimentConfig) -> Result<Dataset> {
    let sys = cfg.system()?;
    let times = cfg.times();
    let det = cfg.continuous_detector()?;
    let mut d = Dataset::new().plain("t", times.clone());
    match cfg.model {
        Model::Continuous | Model::Both => {
            let ev = model(sys, det, cfg, &times)?.evolve(&times)?;
            d = d
                .prob("survival", ev.survival())
                .prob("w_c", ev.undetected.clone())
                .prob("noclick_c", ev.noclick_values())
                .prob("band_density", ev.band_density);
        }
        Model::Approx => {
            let c = model(sys, det, cfg, &times)?.noclick_c_approx(&times)?;
            d = d.prob("noclick_c_approx", c.values().to_vec());
        }
        Model::LargeLambda => {
            let c = noclick_c_large_lambda(&times, &sys, &det)?;
            d = d.prob("noclick_c_large_lambda", c.values().to_vec());
        }
        Model::Pulsed => {}
    }
    if cfg.model.has_pulsed() {
        let bb = noclick_bb(&times, &sys, &cfg.pulsed_detector()?, &cfg.tolerances())?;
        d = d.prob("noclick_bb", bb.values().to_vec());
    }
    Ok(d)
}

pub fn compare(cfg: &ExperimentConfig) -> Result<Dataset> {
    let sys = cfg.system()?;
    let times = cfg.times();
    let c = model(sys, cfg.continuous_detector()?, cfg, &times)?.noclick_c(&times)?;
    let bb = noclick_bb(&times, &sys, &cfg.pulsed_detector()?, &cfg.tolerances())?;
    let diff = c
        .values()
        .iter()
        .zip(bb.values())
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(Dataset::new()
        .plain("t", times.clone())
        .prob("noclick_c", c.values().to_vec())
        .prob("noclick_bb", bb.values().to_vec())
        .plain("abs_diff", diff)
        .prob("exp", free_decay(&sys, &times)))
}

/// Parameter values `from, from + step, ..` up to `to`.
pub fn sweep_values(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !from.is_finite() || !to.is_finite() || from > to {
        return Err(CliError::usage(format!(
            "empty sweep range: from {from} to {to} step {step}"
        )));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| from + i as f64 * step).collect())
}

pub fn sweep(cfg: &ExperimentConfig) -> Result<Dataset> {
    let sys = cfg.system()?;
    let tol = cfg.tolerances();
    let values = sweep_values(cfg.from, cfg.to, cfg.step)?;
    let mut at = cfg.at.clone();
    at.sort_by(f64::total_cmp);
    at.dedup();

    let mut cols: Vec<(String, bool, Vec<f64>)> = Vec::new();
    let mut push = |name: String, prob: bool, v: f64| match cols.iter_mut().find(|c| c.0 == name) {
        Some(c) => c.2.push(v),
        None => cols.push((name, prob, vec![v])),
    };
    for &v in &values {
        let mut point = cfg.clone();
        match cfg.axis {
            Axis::Lambda => point.lambda = Bandwidth::Finite(v),
            Axis::Sigma => point.sigma = v,
            Axis::Tau => point.tau = Tau::Value(v),
        }
        if cfg.model.has_continuous() {
            let det = point.continuous_detector()?;
            push("gamma_eff".into(), false, effective_width(&sys, &det));
            if det.lambda().is_infinite() {
                push("noclick_c_inf".into(), true, 0.0);
            } else {
                push(
                    "noclick_c_inf".into(),
                    true,
                    noclick_c_inf(&sys, &det, &tol)?,
                );
                if !at.is_empty() {
                    let c = match cfg.model {
                        Model::LargeLambda => noclick_c_large_lambda(&at, &sys, &det)?,
                        Model::Approx => model(sys, det, &point, &at)?.noclick_c_approx(&at)?,
                        _ => model(sys, det, &point, &at)?.noclick_c(&at)?,
                    };
                    for (t, p) in c.iter() {
                        push(format!("noclick_c_t={t}"), true, p);
                    }
                }
            }
            push(
                "noclick_c_inf_approx".into(),
                true,
                noclick_c_inf_large_sigma(&sys, &det),
            );
        }
        if cfg.model.has_pulsed() {
            let det = point.pulsed_detector()?;
            push(
                "noclick_bb_inf".into(),
                true,
                noclick_bb_inf(&sys, &det, &tol)?,
            );
            if !at.is_empty() {
                for (t, p) in noclick_bb(&at, &sys, &det, &tol)?.iter() {
                    push(format!("noclick_bb_t={t}"), true, p);
                }
            }
        }
    }
    let d = Dataset::new().plain(cfg.axis.name(), values);
    Ok(cols.into_iter().fold(d, |d, (name, prob, v)| {
        if prob {
            d.prob(name, v)
        } else {
            d.plain(name, v)
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigLayer;

    fn cfg(cmd: Command, layer: ConfigLayer) -> ExperimentConfig {
        ExperimentConfig::resolve(cmd, None, layer).unwrap()
    }

    #[test]
    fn fig1_columns() {
        let d = fig1(&cfg(
            Command::Fig1,
            ConfigLayer {
                points: Some(21),
                ..Default::default()
            },
        ))
        .unwrap();
        let t = d.column("t").unwrap();
        let inf = d.column("w_over_t_lambda=inf").unwrap();
        for (&t, &r) in t.iter().zip(inf).skip(1) {
            assert!((r - (1.0 - (-t).exp()) / t).abs() < 1e-12);
        }
        assert_eq!(d.column("w_over_t_lambda=3").unwrap()[0], 0.0);
        assert_eq!(d.columns.len(), 9);
    }

    #[test]
    fn fig2_known_values() {
        let d = fig2(&cfg(
            Command::Fig2,
            ConfigLayer {
                points: Some(50),
                ..Default::default()
            },
        ))
        .unwrap();
        let lambdas = d.column("lambda").unwrap();
        assert!((lambdas[0] - 0.1).abs() < 1e-12 && (lambdas[49] - 50.0).abs() < 1e-9);
        let bb = d.column("bang_bang_tau=1").unwrap();
        assert!(bb[49] < 0.02, "{}", bb[49]);
        let cont = d.column("continuous").unwrap();
        let small = d.column("bang_bang_tau=0.1").unwrap();
        assert!(small.iter().zip(cont).all(|(b, c)| b >= c));
    }

    #[test]
    fn sweep_ranges() {
        assert_eq!(sweep_values(1.0, 3.0, 1.0).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(sweep_values(0.1, 0.3, 0.1).unwrap().len(), 3);
        assert!(sweep_values(3.0, 1.0, 1.0).is_err());
        assert!(sweep_values(1.0, 3.0, 0.0).is_err());
    }

    #[test]
    fn sigma_sweep_narrows_width() {
        let layer = ConfigLayer {
            from: Some(1.0),
            to: Some(10.0),
            step: Some(3.0),
            ..Default::default()
        };
        let d = sweep(&cfg(Command::Sweep, layer)).unwrap();
        let g = d.column("gamma_eff").unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.windows(2).all(|w| w[1] < w[0]), "{g:?}");
    }

    #[test]
    fn tau_sweep_raises_saturation_as_tau_shrinks() {
        let layer = ConfigLayer {
            model: Some(Model::Pulsed),
            axis: Some(Axis::Tau),
            from: Some(0.1),
            to: Some(1.0),
            step: Some(0.3),
            ..Default::default()
        };
        let d = sweep(&cfg(Command::Sweep, layer)).unwrap();
        let bb = d.column("noclick_bb_inf").unwrap();
        assert!(bb.windows(2).all(|w| w[1] < w[0]), "{bb:?}");
    }
}
