//! Theorem-keyed verification suites over seeded corpora, with
//! deterministic JSON reports. The binary front-end lives in `main.rs`;
//! everything here is reusable in-process (the Python bindings drive it the
//! same way).

pub mod config;
pub mod report;
pub mod suites;

pub use config::{parse_config, ConfigError, Suite, SuiteConfig};
pub use report::{emit_report, CheckRecord, Report, Summary};
pub use suites::run_suite;
