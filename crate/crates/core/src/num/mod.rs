//! Exact arithmetic: sparse Laurent polynomials and their fractions.

pub mod coeff;
pub mod poly;
