//! Counting elliptic curves over Q with a rational cyclic N-isogeny,
//! ordered by naive height.
//!
//! Three engines count the same quantity by different routes: a direct
//! census of short Weierstrass models, an enumeration of twist families,
//! and counts of integer section tuples. The `analytic` module fits their
//! growth rates.

pub mod analytic;
pub mod cli;
pub mod counting;
pub mod curves;
pub mod error;
pub mod families;
pub mod isogeny;
pub mod numtheory;

pub use curves::{Curve, CurvePoint};
pub use error::{Error, Result};
