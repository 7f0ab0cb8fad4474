//! Theta constants of genus 1 and 2, Freitag theta constants, and the partition tables.

mod freitag;
mod genus1;
mod genus2;
mod tables;

pub use freitag::{freitag_petersson_sq, freitag_theta, EvChar, Hermitian22};
pub use genus1::{eta_eval, jacobi_theta, lambda_eval, theta1, theta1_pow8, theta1_product, theta1_series, theta1_sum_series, Char1, THETA1_DEN};
pub use genus2::{check_siegel, theta2, theta2_petersson_sq, theta2_pow8, theta2_series, Char2, Siegel, THETA2_DEN};
pub use tables::{
    eps_delta_table, ev_table, half_period_table, minor_table, tables_json, LambdaFactor, Partition,
};
