//! Exact truncated q-series over the Gaussian integers.
//!
//! Exponents are stored as integer numerators over a per-series denominator
//! `den`, so `q^{1/24}` powers of eta products and `q^{1/4}` powers of theta
//! constants stay exact.

mod gauss;
mod multi;
mod series;

pub use gauss::{binomials, GaussInt};
pub use multi::{Exp3, MultiSeries};
pub use series::{c_coeffs, eta_quotient, eta_series, euler_product, factor_power, CTable, ExactSeries};
