//! Experiment runner behind the `nli` command.

pub mod config;
pub mod error;
pub mod experiment;
pub mod heatmap;

pub use config::{parse_grid, ExperimentConfig, Overrides};
pub use error::CliError;
pub use experiment::{run_experiment, run_gridsearch, run_stats, RunOutcome};
pub use heatmap::{heatmap_svg, render_heatmap};
