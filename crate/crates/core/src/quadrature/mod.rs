//! Numerical integration: adaptive Gauss-Kronrod on finite and semi-infinite
//! intervals, and Fourier transforms of tabulated spectral densities.

mod adaptive;
mod gauss;
mod spectral;

pub use adaptive::{
    integrate_adaptive, integrate_adaptive_raw, integrate_semi_infinite, QuadResult, QuadValue,
};
pub use gauss::GaussLegendre;
pub use spectral::{fourier_integral, SpectralTable, TableLayout, RESOLVE_LIMIT};
