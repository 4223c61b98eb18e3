//! Command-line front end and std-side drivers for `ctxbell-core`.
//!
//! * [`parallel`]: thread-partitioned HV scans, chain checks, samplers and
//!   sweeps, bit-identical for any worker count.
//! * [`report`]: the JSON report envelope and the sweep CSV table.
//! * [`commands`]: one function per subcommand.

pub mod commands;
pub mod config;
pub mod parallel;
pub mod report;

pub use commands::{run, Output};
pub use config::{Command, Format, Grid, RunConfig, UsageError, VariantSel};
pub use report::{Check, Report};
