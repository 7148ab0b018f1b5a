//! Configured numerical studies: convergence rates, pollution sweeps and random ensembles.

pub mod config;
pub mod fit;
pub mod runner;
pub mod studies;

pub use config::{apply_overrides, parse_config_str, parse_config_value, ExperimentConfig, ExperimentKind, GridSpec};
pub use fit::{least_squares, log_linear_fit, LinearFit};
pub use runner::{run_experiment, RunSummary};
pub use studies::{
    ensemble_study, pollution_sweep, predicted_rates, rate_experiment, reference_distances, schmidt_spitzer_reference,
    EnsembleResult, Membership, RateResult, SweepResult,
};
