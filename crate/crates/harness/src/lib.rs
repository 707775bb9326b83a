//! Test problems, simulation driver, convergence and efficiency studies and
//! CSV output for the ADER schemes of `grprec-core`.

pub mod cases;
pub mod config;
pub mod driver;
pub mod error;
pub mod output;
pub mod profiles;
pub mod study;

pub use cases::TestCase;
pub use config::Experiment;
pub use driver::{run, RunOutcome, RunSpec, Solution};
pub use error::HarnessError;
