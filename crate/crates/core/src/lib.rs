#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analytic;
pub mod classifier;
pub mod cyclo;
pub mod expansion;
pub mod geometry;
pub mod local_zeros;
pub mod parse;
pub mod poly;
pub mod primes;
pub mod roots;
pub mod series;
pub mod slope;
pub mod upoly;

pub use parse::parse_expression;
pub use poly::{BivariateRational, Monomial, SparsePoly};
pub use series::TruncatedSeries;
pub use slope::Slope;
pub use upoly::UPoly;
