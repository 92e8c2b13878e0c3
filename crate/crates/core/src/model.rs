//! Parameters, unit conventions and the free (detector-less) decay amplitudes.
//!
//! Energies are measured in units of the decay width and times in units of its
//! inverse; the unstable level sits at zero energy and the continuum has
//! `omega(k) = k` over the whole real line with a flat form factor.

use num_complex::Complex;

use crate::{Real, Result, ZenoError};

/// The unstable state. Only the decay width is free: the coupling enters as
/// `g^2 = gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<T> {
    gamma: T,
}

impl<T: Real> SystemParams<T> {
    pub fn new(gamma: T) -> Result<Self> {
        if !(gamma.is_finite() && gamma > T::zero()) {
            return Err(ZenoError::invalid(
                "gamma",
                format!("must be finite and > 0, got {gamma}"),
            ));
        }
        Ok(Self { gamma })
    }

    /// `gamma = 1`, the natural unit.
    pub fn unit() -> Self {
        Self { gamma: T::one() }
    }

    #[inline]
    pub fn gamma(&self) -> T {
        self.gamma
    }
}

/// Half-width of the detection band. An infinite band is an explicit state so
/// that it can route to closed forms instead of a large sentinel value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Bandwidth<T> {
    pub fn finite(&self) -> Option<T> {
        match *self {
            Bandwidth::Finite(l) => Some(l),
            Bandwidth::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Bandwidth::Infinite)
    }

    /// The half-width as a scalar, `+inf` for the infinite band.
    pub fn value(&self) -> T {
        self.finite().unwrap_or_else(T::infinity)
    }

    /// Whether `k` lies strictly inside the band.
    pub fn contains(&self, k: T) -> bool {
        match *self {
            Bandwidth::Finite(l) => k.abs() < l,
            Bandwidth::Infinite => true,
        }
    }
}

/// Detector: band half-width `lambda`, continuous efficiency `sigma` and,
/// for the pulsed model only, the interval `tau` between measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams<T> {
    lambda: Bandwidth<T>,
    sigma: T,
    tau: Option<T>,
}

impl<T: Real> DetectorParams<T> {
    pub fn new(lambda: Bandwidth<T>, sigma: T, tau: Option<T>) -> Result<Self> {
        if let Bandwidth::Finite(l) = lambda {
            if !(l.is_finite() && l > T::zero()) {
                return Err(ZenoError::invalid(
                    "lambda",
                    format!("must be > 0, got {l}"),
                ));
            }
        }
        if !(sigma.is_finite() && sigma >= T::zero()) {
            return Err(ZenoError::invalid(
                "sigma",
                format!("must be finite and >= 0, got {sigma}"),
            ));
        }
        if let Some(tau) = tau {
            if !(tau.is_finite() && tau > T::zero()) {
                return Err(ZenoError::invalid(
                    "tau",
                    format!("must be finite and > 0, got {tau}"),
                ));
            }
        }
        Ok(Self { lambda, sigma, tau })
    }

    /// Continuous detector with band `lambda` and efficiency `sigma`.
    pub fn continuous(lambda: T, sigma: T) -> Result<Self> {
        Self::new(Bandwidth::Finite(lambda), sigma, None)
    }

    /// Pulsed detector with band `lambda` measuring every `tau`.
    pub fn pulsed(lambda: T, tau: T) -> Result<Self> {
        Self::new(Bandwidth::Finite(lambda), T::zero(), Some(tau))
    }

    pub fn with_tau(self, tau: T) -> Result<Self> {
        Self::new(self.lambda, self.sigma, Some(tau))
    }

    pub fn with_sigma(self, sigma: T) -> Result<Self> {
        Self::new(self.lambda, sigma, self.tau)
    }

    pub fn with_lambda(self, lambda: Bandwidth<T>) -> Result<Self> {
        Self::new(lambda, self.sigma, self.tau)
    }

    #[inline]
    pub fn lambda(&self) -> Bandwidth<T> {
        self.lambda
    }

    #[inline]
    pub fn sigma(&self) -> T {
        self.sigma
    }

    #[inline]
    pub fn tau(&self) -> Option<T> {
        self.tau
    }

    /// `tau` or an error naming the missing parameter.
    pub fn require_tau(&self) -> Result<T> {
        self.tau.ok_or_else(|| {
            ZenoError::invalid("tau", "the pulsed model needs a measurement interval")
        })
    }

    /// Detection efficiency profile: `sigma` inside the band, zero outside.
    pub fn efficiency_at(&self, k: T) -> T {
        if self.lambda.contains(k) {
            self.sigma
        } else {
            T::zero()
        }
    }
}

/// Numerical knobs shared by the quadrature engine and the continuous model.
///
/// `None` fields resolve to parameter-dependent defaults, see the accessor
/// methods on [`crate::ContinuousModel`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    /// Half-width of the window around removable singularities and band
    /// edges. Default `1e-6 * max(gamma, lambda)`.
    pub sing_window: Option<T>,
    /// Spectral grid half-extent. Default `max(40 gamma, 4 lambda, 4 sigma)`.
    pub e_max: Option<T>,
    /// Node budget of the spectral grid.
    pub grid_points: usize,
    pub max_subdivisions: usize,
    /// Largest step of the amplitude time-marching. Default `0.01 / gamma`.
    pub time_step: Option<T>,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-13),
            sing_window: None,
            e_max: None,
            grid_points: 1 << 16,
            max_subdivisions: 4000,
            time_step: None,
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: T| x.is_finite() && x > T::zero();
        if !positive(self.rel_tol) {
            return Err(ZenoError::invalid("rel_tol", "must be > 0"));
        }
        if !positive(self.abs_tol) {
            return Err(ZenoError::invalid("abs_tol", "must be > 0"));
        }
        for (name, v) in [
            ("sing_window", self.sing_window),
            ("e_max", self.e_max),
            ("time_step", self.time_step),
        ] {
            if let Some(v) = v {
                if !positive(v) {
                    return Err(ZenoError::invalid(name, "must be > 0"));
                }
            }
        }
        if self.grid_points < 2 {
            return Err(ZenoError::invalid("grid_points", "need at least 2 points"));
        }
        if self.max_subdivisions == 0 {
            return Err(ZenoError::invalid("max_subdivisions", "must be >= 1"));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}

/// A probability as a function of time.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityCurve<T> {
    times: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> ProbabilityCurve<T> {
    /// Pairs `times` with `values`. Times must be nonnegative and strictly
    /// increasing. Values are stored raw; see [`Self::check_range`].
    pub fn new(times: Vec<T>, values: Vec<T>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(ZenoError::invalid(
                "values",
                format!("{} values for {} times", values.len(), times.len()),
            ));
        }
        validate_times(&times)?;
        Ok(Self { times, values })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.times.iter().copied().zip(self.values.iter().copied())
    }

    /// Checks every value lies in `[-tol, 1 + tol]`.
    pub fn check_range(&self, tol: T) -> Result<()> {
        for (t, p) in self.iter() {
            if !(p >= -tol && p <= T::one() + tol) {
                return Err(ZenoError::InvariantViolation(format!(
                    "probability {p} at t = {t} outside [0, 1] by more than {tol}"
                )));
            }
        }
        Ok(())
    }

    /// Values clamped into `[0, 1]` for reporting, with the number of values
    /// that were moved.
    pub fn clamped(&self) -> (Vec<T>, usize) {
        let mut moved = 0;
        let values = self
            .values
            .iter()
            .map(|&p| {
                let c = p.max(T::zero()).min(T::one());
                if c != p {
                    moved += 1;
                }
                c
            })
            .collect();
        (values, moved)
    }

    /// Largest pointwise difference to another curve on the same times.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.times != other.times {
            return Err(ZenoError::invalid(
                "other",
                "curves are sampled on different times",
            ));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
    }
}

pub(crate) fn validate_times<T: Real>(times: &[T]) -> Result<()> {
    if let Some(&t0) = times.first() {
        if !(t0 >= T::zero()) {
            return Err(ZenoError::NegativeTime(t0.to_f64().unwrap_or(f64::NAN)));
        }
    }
    if let Some(w) = times
        .windows(2)
        .find(|w| !(w[1] > w[0]) || !w[1].is_finite())
    {
        return Err(ZenoError::invalid(
            "times",
            format!(
                "must be strictly increasing and finite ({} then {})",
                w[0], w[1]
            ),
        ));
    }
    Ok(())
}

pub(crate) fn check_time<T: Real>(t: T) -> Result<()> {
    if t >= T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(ZenoError::NegativeTime(t.to_f64().unwrap_or(f64::NAN)))
    }
}

/// `n` equally spaced instants on `[0, t_max]`.
pub fn linear_times<T: Real>(t_max: T, n: usize) -> Vec<T> {
    if n < 2 {
        return vec![T::zero()];
    }
    let step = t_max / T::from_usize_lossy(n - 1);
    (0..n).map(|i| T::from_usize_lossy(i) * step).collect()
}

/// `n` log-spaced instants on `[t_min, t_max]`.
pub fn log_times<T: Real>(t_min: T, t_max: T, n: usize) -> Vec<T> {
    if n < 2 {
        return vec![t_max];
    }
    let (lo, hi) = (t_min.ln(), t_max.ln());
    let step = (hi - lo) / T::from_usize_lossy(n - 1);
    (0..n)
        .map(|i| (lo + T::from_usize_lossy(i) * step).exp())
        .collect()
}

/// Undisturbed survival amplitude `a(t) = exp(-gamma t / 2)`.
pub fn survival_amplitude_free<T: Real>(t: T, sys: &SystemParams<T>) -> Result<Complex<T>> {
    check_time(t)?;
    Ok(Complex::new(
        (-sys.gamma() * t / T::lit(2.0)).exp(),
        T::zero(),
    ))
}

/// Undisturbed survival probability `exp(-gamma t)`.
pub fn survival_prob_free<T: Real>(t: T, sys: &SystemParams<T>) -> Result<T> {
    check_time(t)?;
    Ok((-sys.gamma() * t).exp())
}

/// Amplitude of the continuum state `|k>` at time `t` without a detector:
/// `sqrt(gamma / 2 pi) (exp(-i k t) - exp(-gamma t / 2)) / (k + i gamma / 2)`.
pub fn decay_amplitude_free<T: Real>(k: T, t: T, sys: &SystemParams<T>) -> Result<Complex<T>> {
    check_time(t)?;
    if !k.is_finite() {
        return Err(ZenoError::invalid("k", "must be finite"));
    }
    let g = sys.gamma();
    let half = T::lit(0.5);
    let norm = (g / (T::lit(2.0) * T::PI())).sqrt();
    let num =
        Complex::from_polar(T::one(), -k * t) - Complex::new((-g * t * half).exp(), T::zero());
    Ok(num / Complex::new(k, g * half) * norm)
}

/// `|b(k, t)|^2` written without cancellation at small `t`:
/// `(gamma / 2 pi) [(1 - e^{-gamma t/2})^2 + 4 e^{-gamma t/2} sin^2(k t / 2)] / (k^2 + gamma^2 / 4)`.
pub fn decay_density_free<T: Real>(k: T, t: T, sys: &SystemParams<T>) -> T {
    let g = sys.gamma();
    let half = T::lit(0.5);
    let decayed = -(-g * t * half).exp_m1();
    let surv = (-g * t * half).exp();
    let s = (k * t * half).sin();
    let num = decayed * decayed + T::lit(4.0) * surv * s * s;
    g / (T::lit(2.0) * T::PI()) * num / (k * k + g * g * T::lit(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sys(g: f64) -> SystemParams<f64> {
        SystemParams::new(g).unwrap()
    }

    #[test]
    fn survival_amplitude_values() {
        let s = sys(1.0);
        assert_eq!(
            survival_amplitude_free(0.0, &s).unwrap(),
            Complex::new(1.0, 0.0)
        );
        assert_relative_eq!(
            survival_amplitude_free(1.0, &s).unwrap().re,
            0.6065306597126334,
            epsilon = 1e-15
        );
        assert_relative_eq!(
            survival_amplitude_free(3.0, &sys(2.0)).unwrap().re,
            (-3.0f64).exp(),
            epsilon = 1e-16
        );
        assert!(matches!(
            survival_amplitude_free(-1.0, &s),
            Err(ZenoError::NegativeTime(_))
        ));
    }

    #[test]
    fn survival_prob_values() {
        let s = sys(1.0);
        assert_eq!(survival_prob_free(0.0, &s).unwrap(), 1.0);
        assert_relative_eq!(
            survival_prob_free(1.0, &s).unwrap(),
            0.36787944117144233,
            epsilon = 1e-16
        );
    }

    #[test]
    fn decay_amplitude_vanishes_at_zero() {
        let s = sys(1.0);
        for k in [-5.0, -0.3, 0.0, 2.0, 100.0] {
            assert_eq!(decay_amplitude_free(k, 0.0, &s).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn decay_amplitude_long_time_limit() {
        // e^{-t/2} < 1e-10 at t = 50, so |b|^2 is the Lorentzian peak 2/pi.
        let b = decay_amplitude_free(0.0, 50.0, &sys(1.0)).unwrap();
        assert_relative_eq!(
            b.norm_sqr(),
            2.0 / std::f64::consts::PI,
            max_relative = 1e-10
        );
    }

    #[test]
    fn decay_amplitude_reference_point() {
        // Re-evaluated by hand: numerator e^{-i} - e^{-1/2}, denominator 1 + i/2.
        let b = decay_amplitude_free(1.0, 1.0, &sys(1.0)).unwrap();
        let num_re = 1f64.cos() - (-0.5f64).exp();
        let num_im = -1f64.sin();
        let den = 1.25;
        let re = (num_re * 1.0 + num_im * 0.5) / den;
        let im = (num_im * 1.0 - num_re * 0.5) / den;
        let c = (1.0 / (2.0 * std::f64::consts::PI)).sqrt();
        assert_relative_eq!(b.re, c * re, epsilon = 1e-15);
        assert_relative_eq!(b.im, c * im, epsilon = 1e-15);
    }

    #[test]
    fn stable_density_matches_amplitude() {
        let s = sys(1.3);
        for &(k, t) in &[(0.0, 0.5), (2.0, 3.0), (-7.0, 0.01), (0.4, 40.0)] {
            let direct = decay_amplitude_free(k, t, &s).unwrap().norm_sqr();
            assert_relative_eq!(decay_density_free(k, t, &s), direct, max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SystemParams::new(0.0).is_err());
        assert!(SystemParams::new(f64::NAN).is_err());
        assert!(DetectorParams::continuous(-1.0, 1.0).is_err());
        assert!(DetectorParams::continuous(1.0, -1.0).is_err());
        assert!(DetectorParams::pulsed(1.0, 0.0).is_err());
        assert!(DetectorParams::new(Bandwidth::<f64>::Infinite, 0.0, None).is_ok());
    }

    #[test]
    fn curve_validation() {
        assert!(ProbabilityCurve::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(ProbabilityCurve::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(ProbabilityCurve::new(vec![-1.0, 0.0], vec![1.0, 1.0]).is_err());
        let c = ProbabilityCurve::new(vec![0.0, 1.0], vec![1.0 + 1e-12, -1e-12]).unwrap();
        assert!(c.check_range(1e-9).is_ok());
        assert!(c.check_range(1e-13).is_err());
        let (v, moved) = c.clamped();
        assert_eq!(v, vec![1.0, 0.0]);
        assert_eq!(moved, 2);
    }

    #[test]
    fn efficiency_profile() {
        let d = DetectorParams::continuous(3.0, 2.0).unwrap();
        assert_eq!(d.efficiency_at(0.0), 2.0);
        assert_eq!(d.efficiency_at(-2.9), 2.0);
        assert_eq!(d.efficiency_at(3.0), 0.0);
        assert_eq!(d.efficiency_at(10.0), 0.0);
    }

    #[test]
    fn generic_over_f32() {
        let s = SystemParams::<f32>::new(1.0).unwrap();
        assert!((survival_prob_free(1.0f32, &s).unwrap() - (-1.0f32).exp()).abs() < 1e-7);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn survival_is_amplitude_squared(g in 0.01f64..10.0, t in 0.0f64..20.0) {
                let s = sys(g);
                let a = survival_amplitude_free(t, &s).unwrap();
                prop_assert!((a.norm_sqr() - survival_prob_free(t, &s).unwrap()).abs() <= 1e-15);
            }

            #[test]
            fn survival_nonincreasing(g in 0.01f64..10.0, t in 0.0f64..20.0, dt in 0.0f64..5.0) {
                let s = sys(g);
                prop_assert!(survival_prob_free(t + dt, &s).unwrap() <= survival_prob_free(t, &s).unwrap());
            }

            #[test]
            fn long_time_density_even_in_k(k in -50.0f64..50.0) {
                // At t = 80 the e^{-gamma t/2} cross term is below 1e-17, leaving
                // the even Lorentzian (gamma/2pi) / (k^2 + gamma^2/4).
                let s = sys(1.0);
                let p = decay_density_free(k, 80.0, &s);
                let m = decay_density_free(-k, 80.0, &s);
                let lorentz = 1.0 / (2.0 * std::f64::consts::PI) / (k * k + 0.25);
                prop_assert!((p - m).abs() <= 1e-15 * lorentz);
                prop_assert!((p - lorentz).abs() <= 1e-12 * lorentz);
            }
        }
    }
}
