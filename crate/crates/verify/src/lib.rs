//! Verification suites for `harmspace`, their configuration and export.

pub mod config;
pub mod error;
pub mod export;
pub mod registry;
pub mod suites;

pub use config::{SuiteConfig, Tier};
pub use error::{Result, VerifyError};
pub use export::Format;
pub use registry::{find, run_suite, suites};
