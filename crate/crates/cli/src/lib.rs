//! Command-line front end: JSON forms, formula syntax, seeded instances and the invariant suites.

pub mod checks;
pub mod commands;
pub mod json;
pub mod random;
pub mod sexpr;

pub use commands::{run, Output};
