//! Rational preperiodic portraits of rational maps `φ: P^1 → P^1` over Q.
//!
//! The crate computes, with exact integer arithmetic throughout:
//!
//! - the normalized model `[F:G]` of a map, its resultant and its places of
//!   bad reduction ([`dynmap`]);
//! - period and dynatomic polynomials and the rational periodic points found
//!   through them ([`dynatomic`]);
//! - the full rational preperiodic portrait, with a bounded-height
//!   brute-force cross-check ([`portrait`]);
//! - S-unit certificates relating tail points to periodic points, and the
//!   known upper bounds on `|Per|`, `|Tail|` and `|PrePer|` ([`certify`]);
//! - two families whose portraits grow with the degree while the bad
//!   reduction stays at `{∞, 2}` ([`families`]).

pub mod certify;
pub mod dynatomic;
pub mod dynmap;
pub mod error;
pub mod families;
pub mod forms;
pub mod portrait;
pub mod qarith;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use qarith::{PrimeSet, ProjPoint, Rat, Valuation};
