//! Reproducible storage scenarios on top of `vortex-core`: JSON configs,
//! the store/diffuse/retrieve pipeline, figure data and the `vortex` binary.

pub mod config;
pub mod error;
pub mod pgm;
pub mod scenario;

pub use config::{BeamConfig, GridConfig, MediumConfig, Outputs, ScenarioConfig, StorageSequence};
pub use error::{CliError, Result};
pub use scenario::{
    emit_figure_data, flat_figure_set, helical_figure_set, run_scenario, simulate, simulate_with,
    DiffusionSchedule, ScenarioReport, Simulation, Summary,
};
