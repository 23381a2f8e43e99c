//! Pinned end-to-end configurations for `reproduce`: seeds, penalty
//! weights, and search budgets for each built-in experiment.

use epitv_core::synthesis::ScenarioName;
use epitv_core::Scalar;

use crate::reports::Thresholds;

/// Everything `reproduce` pins for one experiment.
#[derive(Debug, Clone, Copy)]
pub struct ReproducePreset {
    pub seed: u64,
    /// TV weight for each time-varying rate (beta, and delta in SIRQ).
    pub lambda: Scalar,
    pub starts: usize,
    pub max_restarts: usize,
    pub max_evals: usize,
    pub initial_step: Scalar,
    pub restart_improvement_tol: Scalar,
    pub thresholds: Thresholds,
}

/// Pinned configuration per experiment. The seeds and weights are fixtures:
/// recovery quality depends on the noise realization, and these are the
/// documented runs the verdicts refer to.
pub fn preset(name: ScenarioName) -> ReproducePreset {
    match name {
        ScenarioName::ConstantSirq => ReproducePreset {
            seed: 16,
            lambda: 0.0,
            starts: 5,
            max_restarts: 12,
            max_evals: 4000,
            initial_step: 0.4,
            restart_improvement_tol: 1e-7,
            thresholds: Thresholds {
                max_rate_relative_error: 0.10,
                max_step_location_error: 5,
                max_plateau_relative_error: 0.15,
            },
        },
        ScenarioName::TimeVaryingSir => ReproducePreset {
            seed: 10,
            lambda: 8.0,
            starts: 5,
            max_restarts: 40,
            max_evals: 20_000,
            initial_step: 0.4,
            restart_improvement_tol: 1e-6,
            thresholds: Thresholds {
                max_rate_relative_error: 0.15,
                max_step_location_error: 5,
                max_plateau_relative_error: 0.15,
            },
        },
        ScenarioName::TimeVaryingSirq => ReproducePreset {
            seed: 13,
            lambda: 8.0,
            starts: 5,
            max_restarts: 40,
            max_evals: 25_000,
            initial_step: 0.4,
            restart_improvement_tol: 1e-6,
            thresholds: Thresholds {
                max_rate_relative_error: 0.15,
                max_step_location_error: 5,
                max_plateau_relative_error: 0.15,
            },
        },
    }
}
