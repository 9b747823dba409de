//! File formats, reports, the seeded suite and the command line for
//! [`ksw_core`].

pub mod cli;
pub mod formats;
pub mod instances;
pub mod report;
pub mod suite;

pub use cli::{run, Outcome, CAP_ENV};
pub use report::{Check, RunReport, Status};
pub use suite::{run_full_suite, SuiteConfig};
