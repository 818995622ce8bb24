//! Exact q-series arithmetic and numerical verification of identities for
//! representation counts of ternary quadratic and triangular forms.

pub mod cache;
pub mod fps;
pub mod qdsl;
pub mod relations;
pub mod seq;

pub use cache::SeriesCache;
pub use fps::{Comparison, Series, SeriesError};
pub use num_bigint::BigInt;
