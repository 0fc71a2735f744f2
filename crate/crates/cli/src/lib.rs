//! Library side of the `htube` command: configuration files, verification
//! suites and their reports, and the CSV/number formatting used by the binary.

pub mod config;
pub mod output;
pub mod report;
pub mod suites;

pub use config::AlgebraConfig;
pub use report::{CheckRecord, Status, SuiteReport};
pub use suites::{run_suite, Suite, SuiteContext};
