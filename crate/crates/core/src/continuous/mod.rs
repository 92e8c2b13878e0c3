//! Continuous measurement: inside the band the decay products acquire the
//! complex energy `omega(k) = k - i sigma / 2`, which makes the evolution
//! non-Hermitian. The norm lost this way is the probability of a click.
//!
//! [`ContinuousModel`] holds the spectral table of one `(gamma, lambda, sigma)`
//! and the momentum grid used to integrate `|b(k, t)|^2`; build it once and
//! query as many times as needed.

mod march;

use num_complex::Complex;

use crate::model::{check_time, validate_times};
use crate::quadrature::{
    fourier_integral, integrate_adaptive, integrate_semi_infinite, SpectralTable, TableLayout,
};
use crate::special::cos_over_square_tail;
use crate::{
    Bandwidth, DetectorParams, ProbabilityCurve, Real, Result, SystemParams, Tolerances, ZenoError,
};

pub use march::Evolution;

/// Which branch the real-argument logarithm of the self-energy is put on.
///
/// `Retarded` is the physical `E + i0` prescription. `Misbranched` takes the
/// other side of the cut and exists only to show that the density checks
/// catch it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Retarded,
    Misbranched,
}

/// Half-width of the window around the band edges and removable singularities:
/// `1e-6 * max(gamma, lambda)` unless overridden.
pub fn singular_window<T: Real>(
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> T {
    tol.sing_window.unwrap_or_else(|| {
        let scale = match det.lambda() {
            Bandwidth::Finite(l) => sys.gamma().max(l),
            Bandwidth::Infinite => sys.gamma(),
        };
        T::lit(1e-6) * scale
    })
}

/// Self-energy on the real axis,
/// `(gamma / 2 pi) [log((lambda + E) / (lambda - E)) + log((E - lambda + i sigma/2) / (E + lambda + i sigma/2))]`.
///
/// The first logarithm has a real argument, negative for `|E| > lambda`; it is
/// evaluated as the `E + i0` limit, which adds `+i pi` there. Inputs within
/// `window` of a band edge are rejected.
pub fn self_energy<T: Real>(
    e: T,
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    branch: Branch,
    window: T,
) -> Result<Complex<T>> {
    if let Bandwidth::Finite(l) = det.lambda() {
        if (e.abs() - l).abs() < window {
            return Err(ZenoError::SingularPoint {
                energy: e.to_f64().unwrap_or(f64::NAN),
                window: window.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    Ok(self_energy_unguarded(e, sys, det, branch))
}

fn self_energy_unguarded<T: Real>(
    e: T,
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    branch: Branch,
) -> Complex<T> {
    let g = sys.gamma();
    let Bandwidth::Finite(l) = det.lambda() else {
        return Complex::new(T::zero(), g / T::lit(2.0));
    };
    let half_sigma = det.sigma() / T::lit(2.0);
    let jump = match (e.abs() > l, branch) {
        (false, _) => T::zero(),
        (true, Branch::Retarded) => T::PI(),
        (true, Branch::Misbranched) => -T::PI(),
    };
    let first = Complex::new(((l + e) / (l - e)).abs().ln(), jump);
    // both arguments lie in the closed upper half plane, so the difference of
    // principal logarithms is the principal logarithm of the ratio
    let second = Complex::new(e - l, half_sigma).ln() - Complex::new(e + l, half_sigma).ln();
    (first + second) * (g / (T::lit(2.0) * T::PI()))
}

/// `-(1/pi) Im 1/(E + Sigma(E))` without any sign check.
pub fn spectral_density_unchecked<T: Real>(
    e: T,
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    branch: Branch,
    window: T,
) -> Result<T> {
    let e = match det.lambda() {
        // one-sided substitution next to the band edge
        Bandwidth::Finite(l) if (e.abs() - l).abs() < window => {
            let side = if e.abs() < l { -T::one() } else { T::one() };
            (l + side * window) * e.signum()
        }
        _ => e,
    };
    let g = Complex::new(e, T::zero()) + self_energy_unguarded(e, sys, det, branch);
    Ok(-(g.inv().im) / T::PI())
}

/// Spectral density `d_S(E) = -(1/pi) Im G_S(E)` with `G_S = 1/(E + Sigma(E))`.
///
/// A density below `-abs_tol` means the self-energy was put on the wrong
/// branch and is reported as an invariant violation.
pub fn spectral_density<T: Real>(
    e: T,
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    branch: Branch,
    tol: &Tolerances<T>,
) -> Result<T> {
    let window = singular_window(sys, det, tol);
    let d = spectral_density_unchecked(e, sys, det, branch, window)?;
    if d < -tol.abs_tol {
        return Err(ZenoError::InvariantViolation(format!(
            "negative spectral density {d:e} at E = {e}"
        )));
    }
    Ok(d)
}

/// `Gamma~ = (gamma / pi) arg((-lambda + i sigma/2) / (lambda + i sigma/2))`,
/// the decay rate of the large-`sigma` no-click curve.
pub fn effective_width<T: Real>(sys: &SystemParams<T>, det: &DetectorParams<T>) -> T {
    let g = sys.gamma();
    match det.lambda() {
        Bandwidth::Infinite => g,
        Bandwidth::Finite(l) => {
            let hs = det.sigma() / T::lit(2.0);
            g / T::PI() * (hs.atan2(-l) - hs.atan2(l))
        }
    }
}

/// Large-band closed form `e^{-gamma t} + gamma/(gamma - sigma) (e^{-sigma t} - e^{-gamma t})`.
///
/// The second term is evaluated as `gamma t e^{-gamma t} expm1(x) / x` with
/// `x = (gamma - sigma) t`, which is smooth through `sigma = gamma`.
pub fn noclick_c_large_lambda<T: Real>(
    times: &[T],
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
) -> Result<ProbabilityCurve<T>> {
    validate_times(times)?;
    let g = sys.gamma();
    let values = times
        .iter()
        .map(|&t| {
            let decay = (-g * t).exp();
            let x = (g - det.sigma()) * t;
            let ratio = if x == T::zero() {
                T::one()
            } else {
                x.exp_m1() / x
            };
            decay + g * t * decay * ratio
        })
        .collect();
    ProbabilityCurve::new(times.to_vec(), values)
}

/// Large-`sigma` estimate of the no-click asymptote: `1 - w_lambda(inf)`.
pub fn noclick_c_inf_large_sigma<T: Real>(sys: &SystemParams<T>, det: &DetectorParams<T>) -> T {
    match det.lambda() {
        Bandwidth::Infinite => T::zero(),
        Bandwidth::Finite(l) => {
            T::one() - T::lit(2.0) / T::PI() * (T::lit(2.0) * l / sys.gamma()).atan()
        }
    }
}

/// No-click asymptote `(gamma / pi) int_lambda^inf |k + Sigma(k)|^{-2} dk`.
pub fn noclick_c_inf<T: Real>(
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    noclick_c_inf_branch(sys, det, tol, Branch::Retarded)
}

fn noclick_c_inf_branch<T: Real>(
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
    branch: Branch,
) -> Result<T> {
    if !(det.sigma() > T::zero()) {
        return Err(ZenoError::invalid("sigma", "the asymptote needs sigma > 0"));
    }
    let Bandwidth::Finite(l) = det.lambda() else {
        return Ok(T::zero());
    };
    let floor = l + singular_window(sys, det, tol);
    let integrand = |k: T| {
        let k = k.max(floor);
        T::one()
            / (Complex::new(k, T::zero()) + self_energy_unguarded(k, sys, det, branch)).norm_sqr()
    };
    let r = integrate_semi_infinite(integrand, l, tol)?;
    Ok(sys.gamma() / T::PI() * r.value)
}

/// Spectral grid defaults resolved for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub e_max: T,
    pub panel_width: T,
    pub window: T,
    pub time_step: T,
    /// Momentum cutoff beyond which `|b|^2` is integrated analytically.
    pub k_cutoff: T,
    pub k_panel_width: T,
}

impl<T: Real> GridSpec<T> {
    pub fn resolve(
        sys: &SystemParams<T>,
        det: &DetectorParams<T>,
        tol: &Tolerances<T>,
        t_max: T,
    ) -> Self {
        let g = sys.gamma();
        let sigma = det.sigma();
        let l = det.lambda().finite().unwrap_or(T::zero());
        let e_max = tol.e_max.unwrap_or_else(|| {
            (T::lit(40.0) * g)
                .max(T::lit(4.0) * l)
                .max(T::lit(4.0) * sigma)
        });
        let panels = T::from_usize_lossy((tol.grid_points / 8).max(2));
        let budget = T::lit(2.0) * e_max / panels;
        let panel_width = if t_max > T::zero() {
            budget.min(T::one() / t_max)
        } else {
            budget
        };
        let time_step = tol.time_step.unwrap_or_else(|| {
            let h = T::lit(0.01) / g;
            if sigma > T::zero() {
                h.min(T::lit(0.25) / sigma)
            } else {
                h
            }
        });
        let mut k_panel_width = g / T::lit(2.0);
        if t_max > T::zero() {
            k_panel_width = k_panel_width.min(T::one() / t_max);
        }
        if l > T::zero() {
            k_panel_width = k_panel_width.min(l / T::lit(4.0));
        }
        Self {
            e_max,
            panel_width,
            window: singular_window(sys, det, tol),
            time_step,
            k_cutoff: l + T::lit(200.0) * g,
            k_panel_width,
        }
    }
}

/// A prepared continuous-measurement problem for one `(gamma, lambda, sigma)`
/// on times up to `t_max`.
#[derive(Debug, Clone)]
pub struct ContinuousModel<T: Real> {
    sys: SystemParams<T>,
    det: DetectorParams<T>,
    tol: Tolerances<T>,
    t_max: T,
    branch: Branch,
    grid: GridSpec<T>,
    table: Option<SpectralTable<T>>,
}

impl<T: Real> ContinuousModel<T> {
    pub fn new(
        sys: SystemParams<T>,
        det: DetectorParams<T>,
        tol: Tolerances<T>,
        t_max: T,
    ) -> Result<Self> {
        Self::with_branch(sys, det, tol, t_max, Branch::Retarded)
    }

    pub fn with_branch(
        sys: SystemParams<T>,
        det: DetectorParams<T>,
        tol: Tolerances<T>,
        t_max: T,
        branch: Branch,
    ) -> Result<Self> {
        tol.validate()?;
        check_time(t_max)?;
        let grid = GridSpec::resolve(&sys, &det, &tol, t_max);
        let table = match det.lambda() {
            Bandwidth::Infinite => None,
            Bandwidth::Finite(l) => {
                if grid.e_max <= l {
                    return Err(ZenoError::invalid(
                        "e_max",
                        "the spectral grid must extend beyond the band",
                    ));
                }
                let centre = effective_width(&sys, &det).min(sys.gamma()) / T::lit(2.0);
                let layout = TableLayout {
                    e_max: grid.e_max,
                    panel_width: grid.panel_width,
                    features: vec![(T::zero(), centre), (l, T::zero())],
                    edge_window: grid.window,
                    growth: T::lit(0.5),
                    order: 8,
                };
                Some(SpectralTable::from_density(&layout, |e| {
                    spectral_density(e, &sys, &det, branch, &tol)
                })?)
            }
        };
        let model = Self {
            sys,
            det,
            tol,
            t_max,
            branch,
            grid,
            table,
        };
        model.verify_k_symmetry()?;
        Ok(model)
    }

    pub fn system(&self) -> &SystemParams<T> {
        &self.sys
    }

    pub fn detector(&self) -> &DetectorParams<T> {
        &self.det
    }

    pub fn tolerances(&self) -> &Tolerances<T> {
        &self.tol
    }

    pub fn t_max(&self) -> T {
        self.t_max
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    /// The sampled spectral density; `None` for the infinite band.
    pub fn table(&self) -> Option<&SpectralTable<T>> {
        self.table.as_ref()
    }

    pub fn self_energy(&self, e: T) -> Result<Complex<T>> {
        self_energy(e, &self.sys, &self.det, self.branch, self.grid.window)
    }

    pub fn spectral_density(&self, e: T) -> Result<T> {
        spectral_density(e, &self.sys, &self.det, self.branch, &self.tol)
    }

    /// `omega(k)`: complex inside the band, real outside.
    pub fn omega(&self, k: T) -> Complex<T> {
        Complex::new(k, -self.det.efficiency_at(k) / T::lit(2.0))
    }

    fn check_times(&self, times: &[T]) -> Result<()> {
        validate_times(times)?;
        if let Some(&last) = times.last() {
            if last > self.t_max * (T::one() + T::lit(1e-12)) {
                return Err(ZenoError::Unresolvable {
                    time: last.to_f64().unwrap_or(f64::NAN),
                    panel_width: self.grid.panel_width.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    /// Survival amplitude `a(t) = int d_S(E) e^{-iEt} dE`.
    pub fn survival_amplitude(&self, times: &[T]) -> Result<Vec<Complex<T>>> {
        self.check_times(times)?;
        match &self.table {
            None => Ok(times
                .iter()
                .map(|&t| Complex::new((-self.sys.gamma() * t / T::lit(2.0)).exp(), T::zero()))
                .collect()),
            Some(table) => fourier_integral(table, times),
        }
    }

    /// Survival probability `|a(t)|^2`.
    pub fn survival_prob_c(&self, times: &[T]) -> Result<ProbabilityCurve<T>> {
        let a = self.survival_amplitude(times)?;
        ProbabilityCurve::new(times.to_vec(), a.iter().map(|z| z.norm_sqr()).collect())
    }

    /// Decay amplitude from the spectral representation,
    /// `sqrt(gamma / 2 pi) int d_S(E) (e^{-i omega t} - e^{-i E t}) / (omega - E) dE`.
    ///
    /// Nodes within the singular window of a real `omega` use the two-term
    /// expansion `-i t e^{-iEt} (1 - i (omega - E) t / 2)`. The part of the
    /// density beyond the grid is integrated adaptively.
    pub fn decay_amplitude_c(&self, k: T, t: T) -> Result<Complex<T>> {
        check_time(t)?;
        if !k.is_finite() {
            return Err(ZenoError::invalid("k", "must be finite"));
        }
        let g = self.sys.gamma();
        let c = (g / (T::lit(2.0) * T::PI())).sqrt();
        let zero = Complex::new(T::zero(), T::zero());
        if t == T::zero() {
            return Ok(zero);
        }
        let Some(table) = &self.table else {
            let w = self.omega(k);
            let num = (w * Complex::new(T::zero(), -t)).exp()
                - Complex::new((-g * t / T::lit(2.0)).exp(), T::zero());
            return Ok(num / (w + Complex::new(T::zero(), g / T::lit(2.0))) * c);
        };
        if t > table.max_time() {
            return Err(ZenoError::Unresolvable {
                time: t.to_f64().unwrap_or(f64::NAN),
                panel_width: table.panel_width().to_f64().unwrap_or(f64::NAN),
            });
        }
        if k.abs() > table.e_max() / T::lit(2.0) {
            return Err(ZenoError::invalid(
                "k",
                "must lie well inside the spectral grid",
            ));
        }
        let w = self.omega(k);
        let window = self.grid.window;
        let kernel = |e: T| -> Complex<T> {
            let diff = w - Complex::new(e, T::zero());
            let phase_e = Complex::from_polar(T::one(), -e * t);
            if diff.norm() < window {
                let it = Complex::new(T::zero(), t);
                -(it * phase_e) * (Complex::new(T::one(), T::zero()) - it * diff / T::lit(2.0))
            } else {
                ((w * Complex::new(T::zero(), -t)).exp() - phase_e) / diff
            }
        };
        let grid = table
            .node_masses()
            .fold(zero, |acc, (e, m)| acc + kernel(e) * m);
        let tail = spectral_tail_kernel(
            [table.tail_coefficient(), table.tail_quartic()],
            table.e_max(),
            w,
            t,
            &self.tol,
        )?;
        Ok((grid + tail) * c)
    }

    /// `b(k, t)` at each of `ks` from the same time march that builds the
    /// no-click curve; an independent route to [`Self::decay_amplitude_c`].
    pub fn decay_amplitude_marched(&self, ks: &[T], t: T) -> Result<Vec<Complex<T>>> {
        self.check_times(&[t])?;
        if self.table.is_none() {
            return ks.iter().map(|&k| self.decay_amplitude_c(k, t)).collect();
        }
        march::amplitudes_at(self, ks, t)
    }

    /// `b(-k, t) = -conj(b(k, t))`, so `|b|^2` is even in `k`; the momentum
    /// integrals fold onto `k > 0`. Checked once per model.
    fn verify_k_symmetry(&self) -> Result<()> {
        let Some(table) = &self.table else {
            return Ok(());
        };
        let l = self.det.lambda().value();
        let t_top = self.t_max.min(table.max_time());
        if t_top <= T::zero() {
            return Ok(());
        }
        let probes = [
            (l * T::lit(0.37), t_top * T::lit(0.29)),
            (l * T::lit(1.61), t_top * T::lit(0.71)),
            (l * T::lit(0.83) + self.sys.gamma(), t_top),
        ];
        for (k, t) in probes {
            if k.abs() > table.e_max() / T::lit(2.0) {
                continue;
            }
            let p = self.decay_amplitude_c(k, t)?;
            let m = self.decay_amplitude_c(-k, t)?;
            let dev = (m + p.conj()).norm();
            let scale = p.norm().max(T::lit(1e-6));
            if dev > T::lit(1e-8) * scale {
                return Err(ZenoError::InvariantViolation(format!(
                    "b(-k, t) != -conj(b(k, t)) at k = {k}, t = {t}: deviation {dev:e}"
                )));
            }
        }
        Ok(())
    }

    /// Survival amplitude, undetected-decay probability and in-band density
    /// on `times`, from one time march of the amplitudes on the momentum grid.
    pub fn evolve(&self, times: &[T]) -> Result<Evolution<T>> {
        self.check_times(times)?;
        if self.table.is_none() {
            return Ok(self.evolve_infinite_band(times));
        }
        march::evolve(self, times)
    }

    fn evolve_infinite_band(&self, times: &[T]) -> Evolution<T> {
        let g = self.sys.gamma();
        let n =
            noclick_c_large_lambda(times, &self.sys, &self.det).expect("times already validated");
        let amplitude: Vec<T> = times
            .iter()
            .map(|&t| (-g * t / T::lit(2.0)).exp())
            .collect();
        // every momentum is in band, so the band integral is all of w^C
        let undetected: Vec<T> = n
            .values()
            .iter()
            .zip(&amplitude)
            .map(|(&n, &a)| n - a * a)
            .collect();
        Evolution {
            times: times.to_vec(),
            amplitude,
            band_density: undetected.clone(),
            undetected,
        }
    }

    /// Probability that the state decayed but the detector stayed silent.
    pub fn w_c(&self, times: &[T]) -> Result<Vec<T>> {
        Ok(self.evolve(times)?.undetected)
    }

    /// No-click probability `p^C(t) + w^C(t)`.
    pub fn noclick_c(&self, times: &[T]) -> Result<ProbabilityCurve<T>> {
        self.evolve(times)?.noclick()
    }

    /// In-band `int_{-lambda}^{lambda} |b(k, t)|^2 dk`; `sigma` times this is
    /// the click rate.
    pub fn band_density(&self, times: &[T]) -> Result<Vec<T>> {
        Ok(self.evolve(times)?.band_density)
    }

    /// Asymptotic no-click probability.
    pub fn noclick_c_inf(&self) -> Result<T> {
        noclick_c_inf_branch(&self.sys, &self.det, &self.tol, self.branch)
    }

    /// Two-parameter approximation `(1 - p_inf) e^{-Gamma~ t} + p_inf`.
    pub fn noclick_c_approx(&self, times: &[T]) -> Result<ProbabilityCurve<T>> {
        validate_times(times)?;
        let p_inf = self.noclick_c_inf()?;
        let rate = effective_width(&self.sys, &self.det);
        let values = times
            .iter()
            .map(|&t| (T::one() - p_inf) * (-rate * t).exp() + p_inf)
            .collect();
        ProbabilityCurve::new(times.to_vec(), values)
    }
}

/// `int_{|E| > x} (c / E^2) (e^{-i w t} - e^{-iEt}) / (w - E) dE` for `|w| <= x / 2`.
///
/// The `e^{-i w t}` part is a power series in `w / x`. The oscillatory part
/// is integrated adaptively up to `Y` with `Y t >= 60` and closed with the
/// endpoint expansion `e^{-iYt} (h / (it) + h' / (it)^2 + h'' / (it)^3)`.
fn spectral_tail_kernel<T: Real>(
    [c, d]: [T; 2],
    x: T,
    w: Complex<T>,
    t: T,
    tol: &Tolerances<T>,
) -> Result<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    // sum over both sides of (c / E^2 + d / E^4) / (w - E): only odd powers of w survive
    let mut smooth = zero;
    let ratio = w / x;
    let mut power = ratio;
    let (cx, dx) = (c / (x * x), d / (x * x * x * x));
    for n in (1..60).step_by(2) {
        let term = power * (cx / T::from_usize_lossy(n + 2) + dx / T::from_usize_lossy(n + 4));
        smooth = smooth + term;
        if term.norm() < T::epsilon() * smooth.norm() {
            break;
        }
        power = power * ratio * ratio;
    }
    smooth = smooth * -T::lit(2.0);

    // one side at a time: int_x^inf e^{-i s E t} c / (E^2 (w - s E)) dE, s = +-1
    let side = |s: T| -> Result<Complex<T>> {
        let h = |e: T| {
            let e2 = e * e;
            Complex::new(c / e2 + d / (e2 * e2), T::zero()) / (w - Complex::new(s * e, T::zero()))
        };
        let y = (x * T::lit(2.0)).max(T::lit(60.0) / t);
        let local = Tolerances {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-15),
            max_subdivisions: 20_000,
            ..*tol
        };
        let body = integrate_adaptive(
            |e: T| Complex::from_polar(T::one(), -s * e * t) * h(e),
            x,
            y,
            &local,
        )?
        .value;
        let q = (w - Complex::new(s * y, T::zero())).inv();
        let y2 = y * y;
        let p = c / y2 + d / (y2 * y2);
        let dp = -(T::lit(2.0) * c + T::lit(4.0) * d / y2) / (y2 * y);
        let ddp = (T::lit(6.0) * c + T::lit(20.0) * d / y2) / (y2 * y2);
        // d/dE (w - sE)^{-1} = s (w - sE)^{-2}
        let dq = q * q * s;
        let ddq = q * q * q * T::lit(2.0);
        let h0 = q * p;
        let h1 = q * dp + dq * p;
        let h2 = q * ddp + dq * dp * T::lit(2.0) + ddq * p;
        let ist = Complex::new(T::zero(), s * t);
        let end = Complex::from_polar(T::one(), -s * y * t)
            * (h0 / ist + h1 / (ist * ist) + h2 / (ist * ist * ist));
        Ok(body + end)
    };
    let oscillatory = side(T::one())? + side(-T::one())?;
    Ok((w * Complex::new(T::zero(), -t)).exp() * smooth - oscillatory)
}

/// `|b(k, t)|^2` integrated over `|k| > cutoff` using the large-`k` form
/// `b ~ sqrt(gamma / 2 pi) (e^{-ikt} - a(t)) / k`, with `a` real.
pub(crate) fn outer_tail<T: Real>(gamma: T, a: T, t: T, cutoff: T) -> T {
    if t == T::zero() {
        return T::zero();
    }
    let two = T::lit(2.0);
    let per_side = gamma / (two * T::PI())
        * ((a * a + T::one()) / cutoff - two * a * t * cos_over_square_tail(cutoff * t));
    two * per_side
}

fn model_for<T: Real>(
    times: &[T],
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> Result<ContinuousModel<T>> {
    validate_times(times)?;
    let t_max = times.last().copied().unwrap_or_else(T::zero);
    ContinuousModel::new(*sys, *det, *tol, t_max)
}

/// Survival probability under continuous measurement on `times`.
pub fn survival_prob_c<T: Real>(
    times: &[T],
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> Result<ProbabilityCurve<T>> {
    model_for(times, sys, det, tol)?.survival_prob_c(times)
}

/// No-click probability under continuous measurement on `times`.
pub fn noclick_c<T: Real>(
    times: &[T],
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> Result<ProbabilityCurve<T>> {
    model_for(times, sys, det, tol)?.noclick_c(times)
}

/// Undetected-decay probability `w^C` on `times`.
pub fn w_c<T: Real>(
    times: &[T],
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> Result<Vec<T>> {
    model_for(times, sys, det, tol)?.w_c(times)
}

/// Large-`sigma` approximation of the no-click curve on `times`.
pub fn noclick_c_approx<T: Real>(
    times: &[T],
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> Result<ProbabilityCurve<T>> {
    validate_times(times)?;
    let p_inf = noclick_c_inf(sys, det, tol)?;
    let rate = effective_width(sys, det);
    let values = times
        .iter()
        .map(|&t| (T::one() - p_inf) * (-rate * t).exp() + p_inf)
        .collect();
    ProbabilityCurve::new(times.to_vec(), values)
}
