//! Semirings, semimodules, semicorings and semicomodules.

pub mod comodule;
pub mod coring;
pub mod error;
pub mod finite;
pub mod linear;
pub mod module;
pub mod report;
pub mod rewrite;
pub mod probes;
pub mod semiring;
pub mod tensor;

pub use error::{Budget, Error, Result};
pub use report::{Check, Flag, Outcome, ValidationReport};
pub use semiring::{Builtin, FiniteSemiring, Scalar, Semiring, SemiringMorphism};
