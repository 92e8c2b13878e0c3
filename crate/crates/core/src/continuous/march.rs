//! Time march of the decay amplitudes on a momentum grid.
//!
//! `b(k, t) = -i sqrt(gamma / 2 pi) int_0^t e^{-i omega(k) (t - s)} a(s) ds`.
//! Each step integrates the exponential exactly against a quadratic
//! interpolant of `a` through the step's ends and midpoint.

use num_complex::Complex;

use super::{outer_tail, ContinuousModel};
use crate::quadrature::{fourier_integral, GaussLegendre};
use crate::special::phi_functions;
use crate::{ProbabilityCurve, Real, Result};

/// Result of one march: everything the no-click curve is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution<T> {
    pub times: Vec<T>,
    /// Survival amplitude `a(t)`, real because the spectral density is even.
    pub amplitude: Vec<T>,
    /// `w^C(t) = int |b(k, t)|^2 dk` over all momenta.
    pub undetected: Vec<T>,
    /// `int_{-lambda}^{lambda} |b(k, t)|^2 dk`.
    pub band_density: Vec<T>,
}

impl<T: Real> Evolution<T> {
    pub fn survival(&self) -> Vec<T> {
        self.amplitude.iter().map(|a| *a * *a).collect()
    }

    pub fn noclick_values(&self) -> Vec<T> {
        self.amplitude
            .iter()
            .zip(&self.undetected)
            .map(|(&a, &w)| a * a + w)
            .collect()
    }

    pub fn noclick(&self) -> Result<ProbabilityCurve<T>> {
        ProbabilityCurve::new(self.times.clone(), self.noclick_values())
    }

    pub fn survival_curve(&self) -> Result<ProbabilityCurve<T>> {
        ProbabilityCurve::new(self.times.clone(), self.survival())
    }
}

/// Gauss nodes on `k > 0`; the first `in_band` lie inside the band.
struct MomentumGrid<T> {
    k: Vec<T>,
    weight: Vec<T>,
    omega: Vec<Complex<T>>,
    in_band: usize,
}

impl<T: Real> MomentumGrid<T> {
    fn new(model: &ContinuousModel<T>) -> Self {
        let grid = model.grid();
        let l = model.detector().lambda().value();
        let rule = GaussLegendre::<T>::new(8);
        let mut k = Vec::new();
        let mut weight = Vec::new();
        let push = |a: T, b: T, k: &mut Vec<T>, weight: &mut Vec<T>| {
            let n = ((b - a) / grid.k_panel_width)
                .ceil()
                .to_usize()
                .unwrap_or(1)
                .max(1);
            let h = (b - a) / T::from_usize_lossy(n);
            for i in 0..n {
                let lo = a + T::from_usize_lossy(i) * h;
                let hi = if i + 1 == n { b } else { lo + h };
                for (x, w) in rule.mapped(lo, hi) {
                    k.push(x);
                    weight.push(w);
                }
            }
        };
        push(T::zero(), l, &mut k, &mut weight);
        let in_band = k.len();
        push(l, grid.k_cutoff, &mut k, &mut weight);
        let omega = k.iter().map(|&x| model.omega(x)).collect();
        Self {
            k,
            weight,
            omega,
            in_band,
        }
    }
}

/// Per-node step coefficients for one step length `h`:
/// `b <- decay * b + c0 a(s) + cm a(s + h/2) + c1 a(s + h)`.
struct StepCoefficients<T> {
    h: T,
    decay: Vec<Complex<T>>,
    c0: Vec<Complex<T>>,
    cm: Vec<Complex<T>>,
    c1: Vec<Complex<T>>,
}

impl<T: Real> StepCoefficients<T> {
    fn new(grid: &MomentumGrid<T>, h: T, coupling: T) -> Self {
        let n = grid.k.len();
        let mut out = Self {
            h,
            decay: Vec::with_capacity(n),
            c0: Vec::with_capacity(n),
            cm: Vec::with_capacity(n),
            c1: Vec::with_capacity(n),
        };
        let scale = Complex::new(T::zero(), -coupling * h);
        let (three, four, eight) = (T::lit(3.0), T::lit(4.0), T::lit(8.0));
        for &w in &grid.omega {
            let z = Complex::new(T::zero(), -h) * w;
            let [p1, p2, p3] = phi_functions(z);
            out.decay.push(z.exp());
            out.c0.push(scale * (p1 - p2 * three + p3 * four));
            out.cm.push(scale * (p2 * four - p3 * eight));
            out.c1.push(scale * (p3 * four - p2));
        }
        out
    }

    fn matches(&self, h: T) -> bool {
        (self.h - h).abs() <= T::lit(1e-13) * h
    }
}

pub(super) fn evolve<T: Real>(model: &ContinuousModel<T>, times: &[T]) -> Result<Evolution<T>> {
    let table = model.table().expect("finite band has a table");
    let g = model.system().gamma();
    let coupling = (g / (T::lit(2.0) * T::PI())).sqrt();
    let h_max = model.grid().time_step;
    let cutoff = model.grid().k_cutoff;

    // step schedule: each gap between requested times is cut into equal steps
    let mut schedule: Vec<(T, usize)> = Vec::with_capacity(times.len());
    let mut samples = vec![T::zero()];
    let mut now = T::zero();
    for &t in times {
        let gap = t - now;
        if gap <= T::zero() {
            schedule.push((T::zero(), 0));
            continue;
        }
        let n = (gap / h_max).ceil().to_usize().unwrap_or(1).max(1);
        let h = gap / T::from_usize_lossy(n);
        for m in 1..=2 * n {
            samples.push(now + h * T::from_usize_lossy(m) / T::lit(2.0));
        }
        // land exactly on the requested time
        *samples.last_mut().expect("just pushed") = t;
        schedule.push((h, n));
        now = t;
    }
    let mut a: Vec<T> = fourier_integral(table, &samples)?
        .iter()
        .map(|z| z.re)
        .collect();
    // initial condition, not a quadrature estimate
    a[0] = T::one();

    let grid = MomentumGrid::new(model);
    let zero = Complex::new(T::zero(), T::zero());
    let mut b = vec![zero; grid.k.len()];
    let mut coeffs: Option<StepCoefficients<T>> = None;
    let mut idx = 0;
    let two = T::lit(2.0);
    let mut out = Evolution {
        times: times.to_vec(),
        amplitude: Vec::with_capacity(times.len()),
        undetected: Vec::with_capacity(times.len()),
        band_density: Vec::with_capacity(times.len()),
    };
    for (&t, &(h, n)) in times.iter().zip(&schedule) {
        if n > 0 {
            if !coeffs.as_ref().is_some_and(|c| c.matches(h)) {
                coeffs = Some(StepCoefficients::new(&grid, h, coupling));
            }
            let c = coeffs.as_ref().expect("set above");
            for _ in 0..n {
                let (a0, am, a1) = (a[idx], a[idx + 1], a[idx + 2]);
                idx += 2;
                for (j, bj) in b.iter_mut().enumerate() {
                    *bj = c.decay[j] * *bj + c.c0[j] * a0 + c.cm[j] * am + c.c1[j] * a1;
                }
            }
        }
        let at = a[idx];
        let mass = |range: std::ops::Range<usize>| {
            range.fold(T::zero(), |acc, j| acc + grid.weight[j] * b[j].norm_sqr())
        };
        let band = two * mass(0..grid.in_band);
        let outer = two * mass(grid.in_band..grid.k.len());
        out.amplitude.push(at);
        out.band_density.push(band);
        out.undetected
            .push(band + outer + outer_tail(g, at, t, cutoff));
    }
    Ok(out)
}

/// Marched amplitudes `b(k, t)` at arbitrary momenta, for cross-checks.
pub(super) fn amplitudes_at<T: Real>(
    model: &ContinuousModel<T>,
    ks: &[T],
    t: T,
) -> Result<Vec<Complex<T>>> {
    let table = model.table().expect("finite band has a table");
    let g = model.system().gamma();
    let coupling = (g / (T::lit(2.0) * T::PI())).sqrt();
    let zero = Complex::new(T::zero(), T::zero());
    if t == T::zero() {
        return Ok(vec![zero; ks.len()]);
    }
    let n = (t / model.grid().time_step)
        .ceil()
        .to_usize()
        .unwrap_or(1)
        .max(1);
    let h = t / T::from_usize_lossy(n);
    let samples: Vec<T> = (0..=2 * n)
        .map(|m| {
            if m == 2 * n {
                t
            } else {
                h * T::from_usize_lossy(m) / T::lit(2.0)
            }
        })
        .collect();
    let a: Vec<T> = fourier_integral(table, &samples)?
        .iter()
        .map(|z| z.re)
        .collect();
    let grid = MomentumGrid {
        k: ks.to_vec(),
        weight: vec![T::zero(); ks.len()],
        omega: ks.iter().map(|&k| model.omega(k)).collect(),
        in_band: 0,
    };
    let c = StepCoefficients::new(&grid, h, coupling);
    let mut b = vec![zero; ks.len()];
    for step in 0..n {
        let (a0, am, a1) = (a[2 * step], a[2 * step + 1], a[2 * step + 2]);
        for (j, bj) in b.iter_mut().enumerate() {
            *bj = c.decay[j] * *bj + c.c0[j] * a0 + c.cm[j] * am + c.c1[j] * a1;
        }
    }
    Ok(b)
}
