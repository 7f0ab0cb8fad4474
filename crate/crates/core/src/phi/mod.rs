//! The Borcherds products `Φ_1`, `Φ_2`: boundary forms, exact restricted
//! expansions and numerical evaluation on the tube domains.

mod boundary;
mod expansion;
mod numeric;

pub use boundary::{phi1_boundary, phi2_boundary};
pub use expansion::{restricted_expansion, ExpansionStats, RestrictedExpansion, U_DEN};
pub use numeric::{
    complex_norm, eval_numeric, iota, lambda_pair, level_transform, petersson_sq, roots_behind, NumericValue, TubePoint,
};
