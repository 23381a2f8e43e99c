//! On-disk JSON description of a fit: model, grid, initial state, dataset
//! location, parameter layout, penalties, and optimizer budgets.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{ModelKind, ParamName, StateVector, TimeGrid};
use crate::error::{Error, Result};
use crate::objective::{Objective, ParamSpec, ParameterEncoding, RegKind, Regularizer, Transform};
use crate::observation::{Dataset, ObservationConfig};
use crate::optimizer::{InitialStep, IteratedConfig, NelderMeadConfig};
use crate::real::Real;

fn default_starts() -> usize {
    5
}

fn default_transform() -> Transform {
    Transform::Log
}

/// Layout and penalty for one rate, as written in the fit document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"), deny_unknown_fields)]
pub struct ParameterDoc<T> {
    pub name: ParamName,
    #[serde(default)]
    pub time_varying: bool,
    #[serde(default = "default_transform")]
    pub transform: Transform,
    #[serde(default)]
    pub regularizer: RegularizerDoc<T>,
}

/// Penalty entry of the fit document.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"), deny_unknown_fields)]
pub struct RegularizerDoc<T> {
    pub kind: RegKind,
    pub weight: T,
}

impl<T: Real> Default for RegularizerDoc<T> {
    fn default() -> Self {
        RegularizerDoc {
            kind: RegKind::None,
            weight: T::zero(),
        }
    }
}

/// Optimizer budgets of the fit document. The initial step applies in the
/// encoded (for rates, log) coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"), deny_unknown_fields, default)]
pub struct OptimizerDoc<T> {
    pub max_restarts: usize,
    pub restart_improvement_tol: T,
    pub max_evals: usize,
    pub x_tol: T,
    pub f_tol: T,
    pub initial_step: T,
}

impl<T: Real> Default for OptimizerDoc<T> {
    fn default() -> Self {
        OptimizerDoc {
            max_restarts: 40,
            restart_improvement_tol: T::real(1e-6),
            max_evals: 20_000,
            x_tol: T::real(1e-8),
            f_tol: T::real(1e-10),
            initial_step: T::real(0.4),
        }
    }
}

impl<T: Real> OptimizerDoc<T> {
    pub fn to_iterated(&self) -> IteratedConfig<T> {
        let mut inner = NelderMeadConfig::standard(T::one());
        inner.max_evals = self.max_evals;
        inner.x_tol = self.x_tol;
        inner.f_tol = self.f_tol;
        inner.initial_step = InitialStep::Uniform(self.initial_step);
        IteratedConfig {
            max_restarts: self.max_restarts,
            restart_improvement_tol: self.restart_improvement_tol,
            inner,
        }
    }
}

/// Complete fit recipe as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"), deny_unknown_fields)]
pub struct FitDocument<T> {
    pub model: ModelKind,
    pub grid: TimeGrid<T>,
    pub initial_state: StateVector<T>,
    /// Dataset CSV location; relative paths resolve against the document's
    /// directory.
    pub dataset: PathBuf,
    #[serde(default)]
    pub observation: ObservationConfig<T>,
    pub parameters: Vec<ParameterDoc<T>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default)]
    pub optimizer: OptimizerDoc<T>,
    /// Optional params CSV whose paths join the start set, so a fit can
    /// resume from a previous answer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warm_start: Option<PathBuf>,
}

impl<T: Real> FitDocument<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("fit config: {e}")))
    }

    pub fn to_json(&self) -> String {
        let mut json = serde_json::to_string_pretty(self).expect("fit config serializes");
        json.push('\n');
        json
    }

    /// Load a document and return it with its base directory.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path)?;
        let doc = Self::from_json(&text)?;
        let base = path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."));
        Ok((doc, base))
    }

    pub fn dataset_path(&self, base_dir: &Path) -> PathBuf {
        if self.dataset.is_absolute() {
            self.dataset.clone()
        } else {
            base_dir.join(&self.dataset)
        }
    }

    /// Encoding and penalties declared by the document.
    pub fn encoding(&self) -> Result<(ParameterEncoding, Vec<Regularizer<T>>)> {
        let specs: Vec<ParamSpec> = self
            .parameters
            .iter()
            .map(|p| ParamSpec {
                name: p.name,
                time_varying: p.time_varying,
                transform: p.transform,
            })
            .collect();
        let regularizers: Vec<Regularizer<T>> = self
            .parameters
            .iter()
            .map(|p| Regularizer {
                kind: p.regularizer.kind,
                weight: p.regularizer.weight,
            })
            .collect();
        let encoding = ParameterEncoding::new(specs, self.grid.n_steps)?;
        Ok((encoding, regularizers))
    }

    /// Build the objective against an already-loaded dataset.
    pub fn objective_with(&self, dataset: Dataset<T>) -> Result<Objective<T>> {
        let (encoding, regularizers) = self.encoding()?;
        Objective::new(
            self.model,
            self.initial_state,
            self.grid,
            dataset,
            self.observation,
            encoding,
            regularizers,
        )
    }

    /// Read the dataset from disk and build the objective.
    pub fn build_objective(&self, base_dir: &Path) -> Result<Objective<T>> {
        let dataset = Dataset::read_csv_file(&self.dataset_path(base_dir), self.model)?;
        self.objective_with(dataset)
    }
}
