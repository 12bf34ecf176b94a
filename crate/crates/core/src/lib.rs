//! Exact arithmetic for CM elliptic curves, their orders and the Brauer groups
//! of the associated abelian and Kummer surfaces.
//!
//! Everything here is exact: integers are arbitrary precision, and every
//! real-valued bound (involving π, logarithms or square roots) is evaluated
//! with rational enclosures rounded in the direction that keeps the reported
//! integer a genuine upper bound.
//!
//! Module map:
//!
//! * [`quadratic`]: discriminants, orders, Kronecker symbols, class numbers.
//! * [`minkowski`]: the Minkowski constant `M(n)`.
//! * [`cm_census`]: conductor bounds and counts of CM curves / singular K3 surfaces.
//! * [`lattices`]: discriminant identities for Néron–Severi lattices.
//! * [`brauer`]: transcendental Brauer group shapes and bounds for `E × E`.
//! * [`grossencharakter`]: sampling the Grössencharakter of a CM curve over `Q`.
//! * [`bounds`]: the certified evaluator for the uniform bounds.
//! * [`cli`]: the command-line front end.

pub mod bounds;
pub mod brauer;
pub mod certified;
pub mod cli;
pub mod cm_census;
mod error;
pub mod grossencharakter;
pub mod lattices;
pub mod minkowski;
pub mod primes;
pub mod quadratic;

pub use error::{Error, Result};
