//! Interval contractors for pruning the search space of bounded program
//! verification.
//!
//! The crate parses small C verification programs, turns their assertions
//! into a constraint satisfaction problem, contracts the variable domains
//! with forward-backward contractors, and inserts `assume` directives that
//! skip states where every assertion provably holds. A small explicit-state
//! bounded checker measures the effect and checks verdicts are unchanged.

pub mod bmc;
pub mod boxes;
pub mod contractor;
pub mod expr;
pub mod instrument;
pub mod interval;
pub mod pipeline;
pub mod program;
pub mod sidecar;

pub use boxes::{BoxSet, IntBox};
pub use interval::Interval;
