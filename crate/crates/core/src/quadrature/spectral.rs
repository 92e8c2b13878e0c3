//! Tabulated spectral densities and their Fourier transforms.
//!
//! A [`SpectralTable`] samples a density `d(E)` on composite Gauss-Legendre
//! panels over `[-E_max, E_max]`. Panels are uniform in the bulk and graded
//! geometrically toward the breakpoints (band edges), where the densities of
//! interest have logarithmic structure. Beyond `E_max` the density is modelled
//! as `C / E^2` and integrated analytically.

use num_complex::Complex;

use super::gauss::GaussLegendre;
use crate::special::{cos_over_quartic_tail, cos_over_square_tail};
use crate::{Real, Result, ZenoError};

/// Largest admissible `t * panel_width` for the Fourier sum.
pub const RESOLVE_LIMIT: f64 = 2.0;

const RESYNC_EVERY: usize = 32;

/// How to lay out the nodes of a [`SpectralTable`].
///
/// Layouts are symmetric about `E = 0`. Panels are stepped outward with width
/// `min(panel_width, growth * dist)`, where `dist` is the distance to the
/// nearest feature plus that feature's scale. A feature of scale zero is a
/// hard breakpoint: panels end on it and shrink geometrically down to
/// `edge_window` next to it.
#[derive(Debug, Clone, PartialEq)]
pub struct TableLayout<T> {
    pub e_max: T,
    /// Largest panel width.
    pub panel_width: T,
    /// `(position, scale)` with `0 <= position < e_max`; mirrored to negative energies.
    pub features: Vec<(T, T)>,
    pub edge_window: T,
    /// Ratio of panel width to feature distance.
    pub growth: T,
    /// Gauss points per panel.
    pub order: usize,
}

impl<T: Real> TableLayout<T> {
    /// Uniform layout of roughly `points` nodes over `[-e_max, e_max]`.
    pub fn uniform(e_max: T, points: usize) -> Self {
        let order = 8;
        let panels = (points / order).max(2);
        Self {
            e_max,
            panel_width: T::lit(2.0) * e_max / T::from_usize_lossy(panels),
            features: Vec::new(),
            edge_window: e_max * T::lit(1e-12),
            growth: T::lit(0.5),
            order,
        }
    }

    fn local_width(&self, x: T) -> T {
        let dist = self
            .features
            .iter()
            .map(|&(f, s)| (x - f).abs() + s)
            .fold(T::infinity(), T::min);
        self.panel_width
            .min(self.growth * dist)
            .max(self.edge_window)
    }

    fn panels(&self) -> Result<Vec<(T, T)>> {
        if !(self.e_max > T::zero() && self.e_max.is_finite()) {
            return Err(ZenoError::invalid("e_max", "must be finite and > 0"));
        }
        if !(self.panel_width > T::zero()) || !(self.edge_window > T::zero()) {
            return Err(ZenoError::invalid(
                "panel_width",
                "panel width and edge window must be > 0",
            ));
        }
        if !(self.growth > T::zero() && self.growth < T::one()) {
            return Err(ZenoError::invalid("growth", "must lie in (0, 1)"));
        }
        let mut cuts = vec![T::zero()];
        for &(f, s) in &self.features {
            if !(f >= T::zero() && f < self.e_max) || !(s >= T::zero()) {
                return Err(ZenoError::invalid(
                    "features",
                    format!("feature ({f}, {s}) outside [0, e_max)"),
                ));
            }
            if s == T::zero() && f > T::zero() {
                cuts.push(f);
            }
        }
        cuts.push(self.e_max);
        cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite cuts"));
        cuts.dedup();

        let mut half = Vec::new();
        let limit = T::lit(1.5);
        for w in cuts.windows(2) {
            let (l, r) = (w[0], w[1]);
            let mut x = l;
            loop {
                let h = self.local_width(x);
                if r - x <= limit * h {
                    half.push((x, r));
                    break;
                }
                half.push((x, x + h));
                x = x + h;
            }
        }
        let mut out: Vec<(T, T)> = half.iter().rev().map(|&(a, b)| (-b, -a)).collect();
        out.extend(half);
        Ok(out)
    }
}

/// Sampled density with quadrature weights and an analytic `C / E^2 + D / E^4` tail.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTable<T> {
    energies: Vec<T>,
    weights: Vec<T>,
    densities: Vec<T>,
    tail_coefficient: T,
    tail_quartic: T,
    e_max: T,
    panel_width: T,
}

impl<T: Real> SpectralTable<T> {
    /// Samples `density` on `layout`. The tail coefficients are fitted from the
    /// even part of the density at `e_max` and `2 e_max`.
    pub fn from_density<F>(layout: &TableLayout<T>, density: F) -> Result<Self>
    where
        F: Fn(T) -> Result<T>,
    {
        let rule = GaussLegendre::<T>::new(layout.order);
        let panels = layout.panels()?;
        let mut energies = Vec::with_capacity(panels.len() * layout.order);
        let mut weights = Vec::with_capacity(panels.len() * layout.order);
        let mut densities = Vec::with_capacity(panels.len() * layout.order);
        let mut widest = T::zero();
        for &(a, b) in &panels {
            widest = widest.max(b - a);
            for (e, w) in rule.mapped(a, b) {
                energies.push(e);
                weights.push(w);
                densities.push(density(e)?);
            }
        }
        let e = layout.e_max;
        let two = T::lit(2.0);
        let near = (density(e)? + density(-e)?) / two * e * e;
        let far = (density(two * e)? + density(-two * e)?) / two * T::lit(4.0) * e * e;
        let tail_quartic = T::lit(4.0) * e * e * (near - far) / T::lit(3.0);
        Ok(Self {
            energies,
            weights,
            densities,
            tail_coefficient: near - tail_quartic / (e * e),
            tail_quartic,
            e_max: e,
            panel_width: widest,
        })
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn densities(&self) -> &[T] {
        &self.densities
    }

    /// `C` in the `C / E^2 + D / E^4` tail.
    pub fn tail_coefficient(&self) -> T {
        self.tail_coefficient
    }

    /// `D` in the `C / E^2 + D / E^4` tail.
    pub fn tail_quartic(&self) -> T {
        self.tail_quartic
    }

    pub fn e_max(&self) -> T {
        self.e_max
    }

    /// Widest panel; bounds the resolvable time.
    pub fn panel_width(&self) -> T {
        self.panel_width
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Largest `t` the Fourier sum accepts.
    pub fn max_time(&self) -> T {
        T::lit(RESOLVE_LIMIT) / self.panel_width
    }

    /// Mass of the tail `|E| > e_max`.
    pub fn tail_mass(&self) -> T {
        let x = self.e_max;
        T::lit(2.0) * (self.tail_coefficient / x + self.tail_quartic / (T::lit(3.0) * x * x * x))
    }

    /// Total mass, grid plus tail.
    pub fn mass(&self) -> T {
        self.grid_mass() + self.tail_mass()
    }

    /// Mass on `[-e_max, e_max]` only.
    pub fn grid_mass(&self) -> T {
        self.weights
            .iter()
            .zip(&self.densities)
            .fold(T::zero(), |acc, (&w, &d)| acc + w * d)
    }

    /// Smallest sampled density.
    pub fn min_density(&self) -> T {
        self.densities.iter().copied().fold(T::infinity(), T::min)
    }

    /// `(weight * density)` per node.
    pub fn node_masses(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.energies
            .iter()
            .zip(self.weights.iter().zip(&self.densities))
            .map(|(&e, (&w, &d))| (e, w * d))
    }

    /// The table of `c * d(E)`.
    pub fn scaled(&self, c: T) -> Self {
        let mut out = self.clone();
        out.densities.iter_mut().for_each(|d| *d = *d * c);
        out.tail_coefficient = out.tail_coefficient * c;
        out.tail_quartic = out.tail_quartic * c;
        out
    }

    /// `c1 * self + c2 * other` on the shared node set.
    pub fn combine(&self, c1: T, other: &Self, c2: T) -> Result<Self> {
        if self.energies != other.energies || self.e_max != other.e_max {
            return Err(ZenoError::invalid(
                "other",
                "tables are sampled on different grids",
            ));
        }
        let mut out = self.clone();
        for (d, &o) in out.densities.iter_mut().zip(&other.densities) {
            *d = c1 * *d + c2 * o;
        }
        out.tail_coefficient = c1 * self.tail_coefficient + c2 * other.tail_coefficient;
        out.tail_quartic = c1 * self.tail_quartic + c2 * other.tail_quartic;
        Ok(out)
    }

    /// `int_{|E| > e_max} (C / E^2 + D / E^4) e^{-i E t} dE`, real because the tail is even.
    pub fn tail_transform(&self, t: T) -> T {
        if t == T::zero() {
            return self.tail_mass();
        }
        let two = T::lit(2.0);
        let y = self.e_max * t;
        two * self.tail_coefficient * t * cos_over_square_tail(y)
            + two * self.tail_quartic * t * t * t * cos_over_quartic_tail(y)
    }

    fn check_time(&self, t: T) -> Result<()> {
        if !(t >= T::zero()) || !t.is_finite() {
            return Err(ZenoError::NegativeTime(t.to_f64().unwrap_or(f64::NAN)));
        }
        if t > self.max_time() {
            return Err(ZenoError::Unresolvable {
                time: t.to_f64().unwrap_or(f64::NAN),
                panel_width: self.panel_width.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// `int d(E) e^{-i E t} dE` for every `t` in `times`.
///
/// Runs of equally spaced times are evaluated with a phase recurrence that is
/// re-anchored every few steps; other times get a direct sum.
pub fn fourier_integral<T: Real>(table: &SpectralTable<T>, times: &[T]) -> Result<Vec<Complex<T>>> {
    for &t in times {
        table.check_time(t)?;
    }
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; times.len()];
    for run in equal_spacing_runs(times) {
        let ts = &times[run.clone()];
        let acc = &mut out[run.clone()];
        if ts.len() == 1 {
            let t = ts[0];
            let mut s = zero;
            for (e, m) in table.node_masses() {
                s = s + Complex::from_polar(m, -e * t);
            }
            acc[0] = s;
            continue;
        }
        let dt = ts[1] - ts[0];
        for (e, m) in table.node_masses() {
            let rot = Complex::from_polar(T::one(), -e * dt);
            let mut z = Complex::from_polar(m, -e * ts[0]);
            for (j, slot) in acc.iter_mut().enumerate() {
                if j > 0 {
                    z = if j % RESYNC_EVERY == 0 {
                        Complex::from_polar(m, -e * ts[j])
                    } else {
                        z * rot
                    };
                }
                *slot = *slot + z;
            }
        }
    }
    for (slot, &t) in out.iter_mut().zip(times) {
        *slot = *slot + Complex::new(table.tail_transform(t), T::zero());
    }
    Ok(out)
}

/// Maximal index ranges of `times` with constant spacing.
fn equal_spacing_runs<T: Real>(times: &[T]) -> Vec<std::ops::Range<usize>> {
    let mut runs = Vec::new();
    let mut start = 0;
    while start < times.len() {
        let mut end = start + 1;
        if end < times.len() {
            let dt = times[end] - times[start];
            let scale = times[end].abs().max(times[start].abs());
            let slack = T::lit(1e-13) * scale.max(dt.abs());
            end += 1;
            while end < times.len() && ((times[end] - times[end - 1]) - dt).abs() <= slack {
                end += 1;
            }
            if end - start == 2 && dt == T::zero() {
                end = start + 1;
            }
        }
        runs.push(start..end);
        start = end;
    }
    runs
}
