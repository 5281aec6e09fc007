//! Benchmark harness behind the `cgkit` binary: preset instances, variant
//! dispatch, CSV trajectories, JSON summaries and self-checks.
//!
//! CSV columns are
//! `variant,iteration,elapsed_seconds,primal,dual_gap,lmo_calls,cache_hits,active_set_size,step_kind`,
//! followed by `test_error` for the regression and completion presets.
//! Row `t` describes iterate `x_t`; `step_kind` names the step that produced
//! it. Lazy variants report the gap estimate in `dual_gap` on rows where no
//! oracle call was made.

mod check;
mod config;
mod instance;
pub mod pgd;
mod run;

pub use check::{check, CheckOptions, CheckReport, SuiteResult, ORACLE_NAMES};
pub use config::{parse_variants, BatchGrowth, BatchSchedule, Preset, RunConfig, StepChoice, Variant};
pub use instance::{birkhoff_target, gaussian_point, EntrySampler, Instance};
pub use run::{compare, execute, run, ExactSummary, Row, RunReport, VariantReport, VariantSummary, CSV_HEADER};

/// Harness failure with its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    /// Bad preset, variant or option: exit code 2.
    #[error("{0}")]
    Config(String),
    /// Solver or I/O failure: exit code 1.
    #[error(transparent)]
    Solver(#[from] crate::error::Error),
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Solver(e.into())
    }
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Solver(_) => 1,
        }
    }
}
