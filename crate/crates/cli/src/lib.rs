//! Command-line front end for the `preperiodic` crate: an expression parser
//! for maps, JSON and DOT emitters, and the `preper` commands.

pub mod app;
pub mod dot;
pub mod expr;
pub mod json;
pub mod text;

pub use expr::{parse_map, MapExpr, ParseError, Poly};
