//! Bell series and numerical multiple Dirichlet series.

pub mod bell;
pub mod euler;
pub mod zeta;

pub use bell::{bell_multiply, bell_series, unitary_bell_sum_check, BellSeries};
pub use euler::{dirichlet_partial_sum, euler_product, euler_product_eval, format_float, EulerConfig, EulerProductResult};
pub use zeta::{euler_gamma, pi, zeta, zeta_derivative};
