//! Document format, dispatch and reports for the `semik` driver.

pub mod doc;
pub mod run;

pub use doc::{parse, Command, Decl, Document, ParseError};
pub use run::{run, Options, Record, Report, Verdict};
