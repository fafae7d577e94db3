//! Scenario plumbing for the `dec2d` binary: configuration files, the
//! solve/convergence drivers, and deterministic report rendering.
//!
//! Everything that matters numerically lives in `dec2d-core`; this crate
//! only decides what to run and how to print it. Reports are byte-stable
//! for a fixed configuration, so they can be diffed across runs. Wall-clock
//! timings are printed to stdout and deliberately kept out of report files.

pub mod config;
pub mod driver;
pub mod error;
pub mod report;

pub use config::{parse_config, parse_methods, LineSpec, MeshSource, Paraboloid, ScenarioConfig};
pub use driver::{
    build_case, refine_case, run_case, run_convergence, run_method, BuiltCase, LevelRun, MethodRun,
};
pub use error::CliError;
