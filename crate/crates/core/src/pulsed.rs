//! Bang-bang measurements: an ideal projective measurement of the decay
//! products in `(-lambda, lambda)` every `tau`, collapsing the state each time.

use crate::model::{check_time, decay_density_free, validate_times};
use crate::quadrature::integrate_adaptive;
use crate::{Bandwidth, DetectorParams, ProbabilityCurve, Real, Result, SystemParams, Tolerances};

/// Probability that a single measurement at time `t` clicks:
/// `int_{-lambda}^{lambda} |b(k, t)|^2 dk`.
pub fn w_lambda<T: Real>(
    t: T,
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    check_time(t)?;
    match det.lambda() {
        Bandwidth::Infinite => Ok(-(-sys.gamma() * t).exp_m1()),
        Bandwidth::Finite(_) if t == T::zero() => Ok(T::zero()),
        Bandwidth::Finite(l) => {
            // the integrand is even in k
            let r = integrate_adaptive(|k| decay_density_free(k, t, sys), T::zero(), l, tol)?;
            Ok(T::lit(2.0) * r.value)
        }
    }
}

/// `lim_{t -> inf} w_lambda(t) = (2 / pi) arctan(2 lambda / gamma)`.
pub fn w_lambda_inf<T: Real>(sys: &SystemParams<T>, det: &DetectorParams<T>) -> T {
    match det.lambda() {
        Bandwidth::Infinite => T::one(),
        Bandwidth::Finite(l) => T::lit(2.0) / T::PI() * (T::lit(2.0) * l / sys.gamma()).atan(),
    }
}

/// `w / (1 - e^{-gamma tau})`, the total click probability per unit `w`.
fn click_fraction<T: Real>(w: T, tau: T, sys: &SystemParams<T>) -> T {
    w / -(-sys.gamma() * tau).exp_m1()
}

/// No-click probability `1 - w(tau) (1 - e^{-gamma t}) / (1 - e^{-gamma tau})`.
///
/// Exact at `t = n tau`; between the measurement instants the same expression
/// is used as the interpolating curve.
pub fn noclick_bb<T: Real>(
    times: &[T],
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> Result<ProbabilityCurve<T>> {
    validate_times(times)?;
    let tau = det.require_tau()?;
    let g = sys.gamma();
    let values = if det.lambda().is_infinite() {
        times.iter().map(|&t| (-g * t).exp()).collect()
    } else {
        let frac = click_fraction(w_lambda(tau, sys, det, tol)?, tau, sys);
        times
            .iter()
            .map(|&t| T::one() + frac * (-g * t).exp_m1())
            .collect()
    };
    ProbabilityCurve::new(times.to_vec(), values)
}

/// `lim_{t -> inf}` of [`noclick_bb`]: `1 - w(tau) / (1 - e^{-gamma tau})`.
pub fn noclick_bb_inf<T: Real>(
    sys: &SystemParams<T>,
    det: &DetectorParams<T>,
    tol: &Tolerances<T>,
) -> Result<T> {
    let tau = det.require_tau()?;
    if det.lambda().is_infinite() {
        return Ok(T::zero());
    }
    Ok(T::one() - click_fraction(w_lambda(tau, sys, det, tol)?, tau, sys))
}
