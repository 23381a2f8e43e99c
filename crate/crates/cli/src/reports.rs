//! JSON report documents emitted by the commands.

use serde::Serialize;

use crate::metrics::PathRecovery;
use epitv_core::optimizer::Termination;
use epitv_core::Scalar;

/// Per-parameter summary inside a fit report.
#[derive(Debug, Clone, Serialize)]
pub struct ParamReport {
    pub name: String,
    pub time_varying: bool,
    pub regularizer: String,
    pub weight: Scalar,
    pub total_variation: Scalar,
    pub mean: Scalar,
    pub first: Scalar,
    pub last: Scalar,
}

/// Top-level fit report (`report.json`).
#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub model: String,
    pub seed: u64,
    pub starts: usize,
    pub best_start: usize,
    pub per_start_loss: Vec<Scalar>,
    pub loss: Scalar,
    pub data_misfit: Scalar,
    pub penalty_total: Scalar,
    pub evals: usize,
    pub restarts: usize,
    pub termination: Termination,
    /// Mean-rate reproduction number beta/gamma.
    pub r0_uncontrolled: Scalar,
    /// Mean-rate beta/(gamma + delta); SIRQ only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0_controlled: Option<Scalar>,
    pub parameters: Vec<ParamReport>,
    pub warnings: Vec<String>,
}

/// Recovery verdict for one constant rate.
#[derive(Debug, Clone, Serialize)]
pub struct RateVerdict {
    pub name: String,
    pub truth: Scalar,
    pub estimate: Scalar,
    pub relative_error: Scalar,
}

/// Recovery verdict for one time-varying rate.
#[derive(Debug, Clone, Serialize)]
pub struct PathVerdict {
    pub name: String,
    pub recovery: PathRecovery,
    pub pass: bool,
}

/// Thresholds a reproduction is judged against.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Thresholds {
    pub max_rate_relative_error: Scalar,
    pub max_step_location_error: usize,
    pub max_plateau_relative_error: Scalar,
}

/// Top-level reproduce verdict (`verdict.json`).
#[derive(Debug, Clone, Serialize)]
pub struct VerdictReport {
    pub experiment: String,
    pub seed: u64,
    pub pass: bool,
    pub thresholds: Thresholds,
    pub rates: Vec<RateVerdict>,
    pub paths: Vec<PathVerdict>,
    pub loss: Scalar,
    pub data_misfit: Scalar,
}

/// One row of the sweep table.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub lambda: Scalar,
    pub best_loss: Scalar,
    pub data_misfit: Scalar,
    /// Total variation of the estimate, summed over time-varying rates.
    pub tv_estimate: Scalar,
    /// Spread (max - min) of the best losses over the fixed start set.
    pub dispersion: Scalar,
    pub regime: String,
    pub per_start_loss: Vec<Scalar>,
}

/// Top-level sweep report (`sweep_report.json`).
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub scenario: String,
    pub seed: u64,
    pub selected_lambda: Option<Scalar>,
    pub rows: Vec<SweepRow>,
}

pub fn to_json_file<T: Serialize>(value: &T, path: &std::path::Path) -> std::io::Result<()> {
    let mut json = serde_json::to_string_pretty(value).expect("report serializes");
    json.push('\n');
    std::fs::write(path, json)
}
