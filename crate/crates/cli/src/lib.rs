//! Command-line front end: OEIS b-files, the A214615 self-check, and
//! subcommands over the `holorec` library.

pub mod app;
pub mod bfile;
pub mod fetch;
pub mod report;

pub use app::{run, Invocation};
