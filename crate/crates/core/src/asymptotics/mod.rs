//! Mean values, densities, partial-sum tables and perfect tuples.

pub mod density;
pub mod mean;
pub mod perfect;
pub mod tables;

pub use density::{
    density_gcud_coprime, density_pairwise_coprime, density_pairwise_unitary_coprime, density_report, empirical_density,
    q_function, DensityPredicate, DensityReport,
};
pub use mean::{gcd_composite_box_mean, mean_value_dirichlet, mean_value_unitary, MEAN_VALUE_DEGREE};
pub use perfect::search_perfect_tuples;
pub use tables::{fit_leading_coefficient, partial_sum_table, table_csv, PartialSumRow, TableTarget};
