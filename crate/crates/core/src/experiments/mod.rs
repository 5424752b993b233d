//! Seeded Monte Carlo trials, σ-sweeps and their CSV records.

mod config;
mod fit;
mod io;
mod runner;

pub use config::{
    Estimator, ExperimentConfig, PaletteKind, PaletteSpec, Plan, SigmaMode, SigmaSpec, SpaceChoice, SpaceSpec,
    Spacing, ENV_OUTPUT, ENV_THREADS,
};
pub use fit::{fit_logistic, LogisticFit};
pub use io::{read_summary, read_trials, write_summary, write_sweep_files, write_trials};
pub use runner::{
    recovery_mode, run_planned_trial, run_trial, run_trial_detail, sample_truth, summarize, sweep, SummaryRow,
    SweepOutcome, TrialDetail, TrialRecord,
};
