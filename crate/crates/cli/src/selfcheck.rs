//! Invariant checks at preset parameters, reported as measured vs allowed.

use std::f64::consts::PI;
use std::fmt;

use zeno_core::continuous::{
    effective_width, noclick_c_inf, noclick_c_inf_large_sigma, singular_window,
    spectral_density_unchecked, Branch,
};
use zeno_core::model::linear_times;
use zeno_core::pulsed::{noclick_bb, noclick_bb_inf, w_lambda};
use zeno_core::{Continuous, Detector, System, Tol};

use crate::error::Result;

/// Default relative tolerance; `--tol` scales the numerical allowances by
/// `tol / this`. Thresholds on physical approximations stay fixed.
pub const BASE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    AtMost(f64),
    AtLeast(f64),
    Positive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: Bound,
}

impl Check {
    pub fn passed(&self) -> bool {
        match self.bound {
            Bound::AtMost(a) => self.measured <= a,
            Bound::AtLeast(a) => self.measured >= a,
            Bound::Positive => self.measured > 0.0,
        }
    }

    /// `measured / allowed` for upper bounds, `required / measured` for lower
    /// ones; above 1 means failure either way. Sign checks report 0 or inf.
    pub fn ratio(&self) -> f64 {
        match self.bound {
            Bound::AtMost(a) => self.measured / a,
            Bound::AtLeast(a) => a / self.measured,
            Bound::Positive if self.passed() => 0.0,
            Bound::Positive => f64::INFINITY,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, allowed) = match self.bound {
            Bound::AtMost(a) => ("<=", a),
            Bound::AtLeast(a) => (">=", a),
            Bound::Positive => (">", 0.0),
        };
        write!(
            f,
            "{} {:<46} measured {:<12.4e} {op} {:<10.3e} ratio {:.3e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            allowed,
            self.ratio()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub tol: f64,
    /// Evaluate the densities on the wrong logarithm branch.
    pub misbranch: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tol: BASE_TOL,
            misbranch: false,
        }
    }
}

fn at_most(name: impl Into<String>, measured: f64, allowed: f64) -> Check {
    Check {
        name: name.into(),
        measured,
        bound: Bound::AtMost(allowed),
    }
}

pub fn run(opts: Options) -> Result<Vec<Check>> {
    let sys = System::unit();
    let tol = Tol::default().with_rel_tol(opts.tol);
    let scale = opts.tol / BASE_TOL;
    let branch = if opts.misbranch {
        Branch::Misbranched
    } else {
        Branch::Retarded
    };
    let mut out = Vec::new();

    for s in [3.0, 40.0] {
        let det = Detector::continuous(3.0, s)?;
        let window = singular_window(&sys, &det, &tol);
        let mut lowest = f64::INFINITY;
        for i in 0..=4000 {
            let e = -12.0 + 24.0 * i as f64 / 4000.0;
            lowest = lowest.min(spectral_density_unchecked(e, &sys, &det, branch, window)?);
        }
        out.push(at_most(
            format!("density nonnegative sigma={s}"),
            (-lowest).max(0.0),
            tol.abs_tol * scale,
        ));
    }

    let lorentz_det = Detector::continuous(3.0, 0.0)?;
    let window = singular_window(&sys, &lorentz_det, &tol);
    let mut worst = 0.0f64;
    for e in [0.0, 1.0, -1.0, 5.0, -5.0] {
        let d = spectral_density_unchecked(e, &sys, &lorentz_det, branch, window)?;
        worst = worst.max((d - 1.0 / (2.0 * PI) / (e * e + 0.25)).abs());
    }
    out.push(at_most("lorentzian at sigma=0", worst, 1e-6 * scale));

    // a wrong branch already fails above; building tables on it would only error
    if opts.misbranch {
        return Ok(out);
    }

    for s in [3.0, 40.0, 0.0] {
        let m = Continuous::new(sys, Detector::continuous(3.0, s)?, tol, 5.0)?;
        let mass = m.table().map_or(1.0, |t| t.mass());
        out.push(at_most(
            format!("normalization lambda=3 sigma={s}"),
            (mass - 1.0).abs(),
            1e-5 * scale,
        ));
    }

    let m = Continuous::new(sys, Detector::continuous(3.0, 0.0)?, tol, 5.0)?;
    let times = linear_times(5.0, 50);
    let n = m.noclick_c(&times)?;
    let worst = n
        .values()
        .iter()
        .map(|v| (v - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(at_most("unitarity sigma=0", worst, 1e-4 * scale));

    let m = Continuous::new(sys, Detector::continuous(3.0, 3.0)?, tol, 6.0)?;
    let h = 1e-3;
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        let ev = m.evolve(&[t - h, t, t + h])?;
        let n = ev.noclick_values();
        let slope = (n[2] - n[0]) / (2.0 * h);
        let flux = -3.0 * ev.band_density[1];
        worst = worst.max(((slope - flux) / flux).abs());
    }
    // finite-difference truncation, not a quadrature tolerance
    out.push(at_most("flux identity lambda=sigma=3", worst, 1e-3));

    let curve = m.noclick_c(&linear_times(6.0, 61))?;
    let rise = curve
        .values()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    out.push(at_most(
        "noclick_c nonincreasing lambda=sigma=3",
        rise,
        1e-9 * scale,
    ));

    let mut worst = 0.0f64;
    for l in [0.5, 1.0, 3.0, 10.0] {
        let det = Detector::continuous(l, 0.0)?;
        // the oscillating part of |b|^2 has decayed like e^{-40} by t = 80
        let w = w_lambda(80.0, &sys, &det, &tol)?;
        worst = worst.max((w - 2.0 / PI * (2.0 * l).atan()).abs());
    }
    out.push(at_most("saturation w_lambda(inf)", worst, 1e-6 * scale));

    let l = 3.0;
    let t = 1e-3 / l;
    let w = w_lambda(t, &sys, &Detector::continuous(l, 0.0)?, &tol)?;
    out.push(at_most(
        "quadratic onset",
        (w / (l * t * t / PI) - 1.0).abs(),
        0.05,
    ));

    let taus = [1.0, 0.1, 0.01, 0.001];
    let bb = taus
        .iter()
        .map(|&tau| Ok(noclick_bb_inf(&sys, &Detector::pulsed(l, tau)?, &tol)?))
        .collect::<Result<Vec<f64>>>()?;
    let gain = bb
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    out.push(Check {
        name: "pulsed saturation increases as tau shrinks".into(),
        measured: gain,
        bound: Bound::Positive,
    });
    let expansion = 1.0 - l * 1e-3 / PI;
    out.push(at_most(
        "pulsed zeno limit tau=1e-3",
        (bb[3] - expansion).abs() / expansion,
        0.01,
    ));

    let g = effective_width(&sys, &Detector::continuous(3.0, 3.0)?);
    out.push(at_most(
        "effective width lambda=sigma=3",
        (g - (PI - 2.0 * 0.5f64.atan()) / PI).abs(),
        1e-10 * scale,
    ));
    let widths = [0.1, 1.0, 3.0, 10.0, 100.0]
        .iter()
        .map(|&s| Ok(effective_width(&sys, &Detector::continuous(3.0, s)?)))
        .collect::<Result<Vec<f64>>>()?;
    let rise = widths
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    out.push(Check {
        name: "effective width decreasing in sigma".into(),
        measured: -rise,
        bound: Bound::Positive,
    });

    let det = Detector::continuous(3.0, 1e3)?;
    let exact = noclick_c_inf(&sys, &det, &tol)?;
    out.push(at_most(
        "asymptote vs 1 - w_lambda(inf)",
        (exact - noclick_c_inf_large_sigma(&sys, &det)).abs(),
        1e-2,
    ));

    let m = Continuous::new(sys, Detector::continuous(3.0, 40.0)?, tol, 10.0)?;
    let times = linear_times(10.0, 401);
    let c = m.noclick_c(&times)?;
    let pulsed = Detector::pulsed(3.0, 0.1)?;
    let b = noclick_bb(&times, &sys, &pulsed, &tol)?;
    let short = c
        .iter()
        .zip(b.values())
        .filter(|((t, _), _)| *t <= 0.2)
        .map(|((_, x), y)| (x - y).abs())
        .fold(0.0, f64::max);
    out.push(at_most("schulman agreement t<=0.2 sigma=40", short, 0.02));
    out.push(Check {
        name: "schulman disagreement t=10 sigma=40".into(),
        measured: (c.values()[400] - b.values()[400]).abs(),
        bound: Bound::AtLeast(0.05),
    });
    out.push(Check {
        name: "asymptotes bang-bang minus continuous".into(),
        measured: noclick_bb_inf(&sys, &pulsed, &tol)? - m.noclick_c_inf()?,
        bound: Bound::Positive,
    });

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_defaults_pass() {
        let checks = run(Options::default()).unwrap();
        for c in &checks {
            assert!(c.passed(), "{c}");
        }
        assert!(checks.len() >= 15);
    }

    #[test]
    fn tighter_tolerance_raises_ratio() {
        let find = |opts| {
            run(opts)
                .unwrap()
                .into_iter()
                .find(|c| c.name == "normalization lambda=3 sigma=3")
                .unwrap()
                .ratio()
        };
        let loose = find(Options::default());
        let tight = find(Options {
            tol: BASE_TOL / 100.0,
            misbranch: false,
        });
        assert!(tight > 50.0 * loose, "{loose} vs {tight}");
    }

    #[test]
    fn misbranch_fails_density_check() {
        let checks = run(Options {
            tol: BASE_TOL,
            misbranch: true,
        })
        .unwrap();
        let density: Vec<&Check> = checks
            .iter()
            .filter(|c| c.name.starts_with("density"))
            .collect();
        assert!(!density.is_empty());
        assert!(density.iter().all(|c| !c.passed()));
    }

    #[test]
    fn report_line() {
        let c = at_most("x", 2.0, 1.0);
        let line = c.to_string();
        assert!(line.starts_with("FAIL x"));
        assert!(line.contains("ratio 2.000e0"));
    }
}
