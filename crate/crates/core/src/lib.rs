//! Exact arithmetic for multiplicative functions of several variables.

pub mod arith;
pub mod catalog;
pub mod cli;
pub mod convolute;
pub mod convolution;
pub mod error;
pub mod expr;
pub mod identities;
pub mod asymptotics;
pub mod numbers;
pub mod random;
pub mod series;

pub use arith::{ArithFn, Class, LocalFactor};
pub use error::{Error, Result};
pub use numbers::Rational;
