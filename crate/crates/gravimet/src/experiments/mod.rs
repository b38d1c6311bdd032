//! Config-driven experiment harness behind the `gravimet` CLI.
//!
//! Everything here is `f64` and deterministic: a given [`SweepConfig`]
//! always produces byte-identical CSV output, and the validation suites
//! draw from a seeded generator.

mod config;
mod report;
mod sweep;
mod validate;

pub use config::{load_config, parse_config, ConfigError, Grid, NamedProbe, Spacing, SweepConfig};
pub use report::report_steady_state;
pub use sweep::{
    qfi_argmax_by_probe, render_csv, run_purity_sweep, run_qfi_contour, run_qfi_sweep, write_csv,
    SweepError, SweepRow, CSV_HEADER,
};
pub use validate::{run_validation, SuiteResult, ValidationReport, DEFAULT_SEED};
