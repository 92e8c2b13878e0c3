//! No-click probabilities of a finite-bandwidth detector watching an
//! exponentially decaying state.
//!
//! Two detector models are provided:
//!
//! * [`pulsed`]: ideal projective measurements every `tau`, each collapsing the
//!   state (bang-bang measurements).
//! * [`continuous`]: a unitary coupling of efficiency `sigma` which gives the
//!   decay products inside the band `(-lambda, lambda)` the complex energy
//!   `k - i sigma / 2`.
//!
//! All numerics are generic over the scalar type through [`Real`]; the
//! aliases at the crate root fix the scalar to `f64`, which is what the
//! tolerances in this crate are calibrated for.

// negated comparisons are how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod continuous;
mod error;
pub mod model;
pub mod pulsed;
pub mod quadrature;
pub mod special;

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

pub use error::{Result, ZenoError};

/// Real scalar usable throughout the crate: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub use continuous::ContinuousModel;
pub use model::{Bandwidth, DetectorParams, ProbabilityCurve, SystemParams, Tolerances};
pub use quadrature::{QuadResult, SpectralTable};

pub type System = SystemParams<f64>;
pub type Detector = DetectorParams<f64>;
pub type Curve = ProbabilityCurve<f64>;
pub type Tol = Tolerances<f64>;
pub type Table = SpectralTable<f64>;
pub type Continuous = ContinuousModel<f64>;
pub type Complex = num_complex::Complex<f64>;
