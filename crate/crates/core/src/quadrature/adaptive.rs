//! Globally adaptive Gauss-Kronrod integration (21-point rule, bisection of
//! the interval with the largest error estimate).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use super::gauss::{WG10, WGK21, XGK21};
use crate::{Real, Result, Tolerances, ZenoError};

/// Values an integrand may return: real or complex scalars.
pub trait QuadValue<T: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(&self) -> T;
    fn to_f64_lossy(&self) -> f64;
}

impl<T: Real> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn magnitude(&self) -> T {
        self.abs()
    }
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T: Real> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn magnitude(&self) -> T {
        self.norm()
    }
    fn to_f64_lossy(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::NAN)
    }
}

/// Outcome of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V, T> {
    pub value: V,
    pub err_estimate: T,
    pub converged: bool,
    pub evaluations: usize,
}

impl<V: QuadValue<T>, T: Real> QuadResult<V, T> {
    /// The value when converged, otherwise a [`ZenoError::NonConvergence`].
    pub fn into_result(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(ZenoError::NonConvergence {
                estimate: self.value.to_f64_lossy(),
                err_estimate: self.err_estimate.to_f64().unwrap_or(f64::NAN),
                evaluations: self.evaluations,
            })
        }
    }
}

struct Segment<V, T> {
    a: T,
    b: T,
    value: V,
    err: T,
}

impl<V, T: Real> PartialEq for Segment<V, T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<V, T: Real> Eq for Segment<V, T> {}
impl<V, T: Real> PartialOrd for Segment<V, T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V, T: Real> Ord for Segment<V, T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

fn rescale_error<T: Real>(err: T, res_abs: T, res_asc: T) -> T {
    let mut err = err.abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = if scale < T::one() {
            res_asc * scale
        } else {
            res_asc
        };
    }
    let eps50 = T::lit(50.0) * T::epsilon();
    if res_abs > T::min_positive_value() / eps50 {
        err = err.max(eps50 * res_abs);
    }
    err
}

/// 21-point Kronrod estimate on `[a, b]` with its error estimate.
fn kronrod21<V, T, F>(f: &F, a: T, b: T) -> (V, T)
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let two = T::lit(2.0);
    let center = (a + b) / two;
    let half = (b - a) / two;
    let f_center = f(center);
    let mut res_k = f_center * T::lit(WGK21[10]);
    let mut res_g = V::zero();
    let mut res_abs = f_center.magnitude() * T::lit(WGK21[10]);
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];
    for j in 0..10 {
        let x = half * T::lit(XGK21[j]);
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK21[j]);
        res_k = res_k + (f1 + f2) * w;
        res_abs = res_abs + (f1.magnitude() + f2.magnitude()) * w;
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * T::lit(WG10[j / 2]);
        }
    }
    let mean = res_k * T::lit(0.5);
    let mut res_asc = (f_center - mean).magnitude() * T::lit(WGK21[10]);
    for j in 0..10 {
        res_asc = res_asc
            + ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude()) * T::lit(WGK21[j]);
    }
    let abs_half = half.abs();
    let err = (res_k - res_g).magnitude() * abs_half;
    (
        res_k * half,
        rescale_error(err, res_abs * abs_half, res_asc * abs_half),
    )
}

/// Adaptive integration of `f` over finite `[a, b]`, reporting convergence in
/// the result instead of failing.
pub fn integrate_adaptive_raw<V, T, F>(f: F, a: T, b: T, tol: &Tolerances<T>) -> QuadResult<V, T>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let (value, err) = kronrod21(&f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, err });
    let mut total = value;
    let mut total_err = err;
    let target = |v: V| tol.abs_tol.max(tol.rel_tol * v.magnitude());

    let mut converged = total_err <= target(total);
    let mut splits = 0;
    while !converged && splits < tol.max_subdivisions {
        let seg = heap.pop().expect("heap is never empty");
        let mid = (seg.a + seg.b) / T::lit(2.0);
        if !(mid > seg.a && mid < seg.b) {
            // interval exhausted at machine precision
            heap.push(seg);
            break;
        }
        let (v1, e1) = kronrod21(&f, seg.a, mid);
        let (v2, e2) = kronrod21(&f, mid, seg.b);
        evaluations += 42;
        splits += 1;
        total = total - seg.value + v1 + v2;
        total_err = total_err - seg.err + e1 + e2;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            err: e1,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            err: e2,
        });
        if total_err <= target(total) {
            // resum to shed accumulated cancellation in the running totals
            let mut segs: Vec<_> = heap.iter().map(|s| (s.a, s.value, s.err)).collect();
            segs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
            total = segs.iter().fold(V::zero(), |acc, s| acc + s.1);
            total_err = segs.iter().fold(T::zero(), |acc, s| acc + s.2);
            converged = total_err <= target(total);
        }
    }
    if !converged {
        let mut segs: Vec<_> = heap.iter().map(|s| (s.a, s.value, s.err)).collect();
        segs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(Ordering::Equal));
        total = segs.iter().fold(V::zero(), |acc, s| acc + s.1);
        total_err = segs.iter().fold(T::zero(), |acc, s| acc + s.2);
        converged = total_err <= target(total);
    }
    QuadResult {
        value: total,
        err_estimate: total_err,
        converged,
        evaluations,
    }
}

/// Adaptive integration of `f` over finite `[a, b]`.
pub fn integrate_adaptive<V, T, F>(
    f: F,
    a: T,
    b: T,
    tol: &Tolerances<T>,
) -> Result<QuadResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(ZenoError::invalid(
            "interval",
            format!("need finite a < b, got [{a}, {b}]"),
        ));
    }
    integrate_adaptive_raw(f, a, b, tol).into_result()
}

/// `int_a^inf f(k) dk` through `k = a + u / (1 - u)`, `u in [0, 1)`.
///
/// `f` should decay at least like `1/k^2`.
pub fn integrate_semi_infinite<V, T, F>(f: F, a: T, tol: &Tolerances<T>) -> Result<QuadResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    if !a.is_finite() {
        return Err(ZenoError::invalid("a", "lower limit must be finite"));
    }
    let mapped = |u: T| {
        let one_minus = T::one() - u;
        let k = a + u / one_minus;
        f(k) * (T::one() / (one_minus * one_minus))
    };
    integrate_adaptive_raw(mapped, T::zero(), T::one(), tol).into_result()
}
