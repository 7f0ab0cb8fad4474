//! Product-type Kummer surfaces: the coefficient matrix `M(λ1, λ2)`, its
//! partition minors and quadric splits, periods, and the end-to-end checks.

mod checks;
mod matrix;
mod periods;

pub use checks::{eps_delta, norm_identity_check, theta_match_check, ThetaMatch, NormIdentityReport, ThetaMatchReport};
pub use matrix::{all_minors, delta_partition, factor_poly, m_matrix, minor, quadric_split, Poly2, Ring};
pub use periods::{
    model_residuals, monte_carlo_integral, period_quantities, pullback_density, sn_cn_dn, uniformize, MonteCarloReport,
    PeriodQuantities, ProductPoint,
};
