//! Monte Carlo estimates of root expectations, conditional probabilities
//! and `phi` integrals, with exact targets and persisted reports.

mod estimate;
mod report;
mod sampling;

pub use estimate::{
    estimate_phi_integral, estimate_probability, estimate_root_expectation, phi_target, probability_targets,
    root_target, sample_root_counts, Estimate, RootSamples, MAX_REJECTED_FRACTION,
};
pub use report::{
    phi_reports, read_csv, read_jsonl, root_reports, run_suite, write_csv, write_jsonl, ExperimentReport, SuiteConfig,
    VERSION, Z_GATE,
};
pub use sampling::{sample_rng, ModelKind, Region, SamplingModel};

use crate::dseries::DSeriesError;
use crate::padic::PadicError;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("{rejected} of {samples} samples were degenerate")]
    DegenerateRate { rejected: u64, samples: u64 },
    #[error("no exact target for model {kind} in region {region}")]
    NoTarget { kind: ModelKind, region: Region },
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    DSeries(#[from] DSeriesError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("format: {0}")]
    Format(String),
}
