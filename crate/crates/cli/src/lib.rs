//! Verification driver for `so1n-core`: configuration, check registry, suites,
//! reports and the auxiliary subcommands.

pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod registry;
pub mod report;
pub mod suites;

pub use config::VerifyConfig;
pub use error::CliError;
pub use report::VerifyReport;
pub use suites::run_suite;
