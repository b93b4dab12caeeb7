//! Scenario harness for `spinmech`: a registry of reproducible runs, TOML
//! configuration with `key=value` overrides, seeded disorder, parallel
//! sweeps, and CSV output with a manifest that reproduces each run.
//!
//! ```no_run
//! use spinmech_harness::{run_scenario, ScenarioConfig};
//!
//! let mut config = ScenarioConfig::new("fig2b")?;
//! config.set("r", "0,3")?;
//! let report = run_scenario(&config)?;
//! println!("wrote {}", report.manifest.display());
//! # Ok::<(), spinmech_harness::HarnessError>(())
//! ```

pub mod config;
pub mod disorder;
pub mod error;
pub mod params;
pub mod registry;
pub mod run;
pub mod scenarios;
pub mod table;

pub use config::{Integrator, ScenarioConfig};
pub use disorder::{DisorderMode, DisorderSpec, DISORDER_BOUND};
pub use error::{HarnessError, Result};
pub use params::{ParamSpec, ParamValue, Params, Section};
pub use registry::{Context, Outcome, Scenario};
pub use run::{execute, run_scenario, sweep, OutputFile, RunReport, SweepReport, MANIFEST_FILE};
pub use table::{format_significant, Table, CSV_DIGITS};
