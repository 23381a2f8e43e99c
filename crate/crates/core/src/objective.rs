//! Flat-vector parameter encoding, path-variation penalties, and the
//! regularized negative log-posterior minimized by the optimizer.

use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate, ModelKind, ParamName, ParameterPath, StateVector, TimeGrid, Trajectory};
use crate::error::{Error, Result};
use crate::observation::{dataset_loglik, Dataset, ObservationConfig};
use crate::real::Real;

/// Loss reported when a candidate cannot be evaluated (decode failure or
/// integration overflow), so the simplex can retreat over ordered reals.
pub const LOSS_SENTINEL: f64 = 1e12;

/// Map between a rate value and the coordinate the optimizer sees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Identity,
    /// Optimize the natural log of the rate; keeps rates strictly positive
    /// without constrained search.
    Log,
}

impl Transform {
    fn encode<T: Real>(self, v: T) -> Result<T> {
        match self {
            Transform::Identity => Ok(v),
            Transform::Log => {
                if v > T::zero() {
                    Ok(v.ln())
                } else {
                    Err(Error::Encoding(format!(
                        "log transform needs a positive value, got {v}"
                    )))
                }
            }
        }
    }

    fn decode<T: Real>(self, x: T) -> T {
        match self {
            Transform::Identity => x,
            Transform::Log => x.exp(),
        }
    }
}

/// Layout of one rate inside the flat vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: ParamName,
    pub time_varying: bool,
    pub transform: Transform,
}

/// Order and layout of all rates inside the flat vector: constants
/// contribute one coordinate, time-varying rates one per grid step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterEncoding {
    specs: Vec<ParamSpec>,
    n_steps: usize,
}

impl ParameterEncoding {
    pub fn new(specs: Vec<ParamSpec>, n_steps: usize) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::Config("encoding needs at least one parameter".into()));
        }
        if n_steps == 0 {
            return Err(Error::Config("encoding needs a positive step count".into()));
        }
        for (j, spec) in specs.iter().enumerate() {
            if specs[..j].iter().any(|other| other.name == spec.name) {
                return Err(Error::Config(format!(
                    "duplicate parameter {} in encoding",
                    spec.name
                )));
            }
        }
        Ok(ParameterEncoding { specs, n_steps })
    }

    pub fn specs(&self) -> &[ParamSpec] {
        &self.specs
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    fn span(&self, spec: &ParamSpec) -> usize {
        if spec.time_varying {
            self.n_steps
        } else {
            1
        }
    }

    /// Total dimension of the flat vector.
    pub fn dim(&self) -> usize {
        self.specs.iter().map(|s| self.span(s)).sum()
    }

    /// Concatenate the paths into a flat vector, in declared order.
    pub fn encode<T: Real>(&self, paths: &[ParameterPath<T>]) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(self.dim());
        for spec in &self.specs {
            let path = paths
                .iter()
                .find(|p| p.name == spec.name)
                .ok_or_else(|| Error::Encoding(format!("missing {} path", spec.name)))?;
            let expected = self.span(spec);
            if path.len() != expected {
                return Err(Error::Arity {
                    expected,
                    got: path.len(),
                });
            }
            for &v in path.values() {
                out.push(spec.transform.encode(v)?);
            }
        }
        Ok(out)
    }

    /// Rebuild the paths from a flat vector.
    pub fn decode<T: Real>(&self, x: &[T]) -> Result<Vec<ParameterPath<T>>> {
        if x.len() != self.dim() {
            return Err(Error::Arity {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut paths = Vec::with_capacity(self.specs.len());
        let mut offset = 0;
        for spec in &self.specs {
            let span = self.span(spec);
            let values: Vec<T> = x[offset..offset + span]
                .iter()
                .map(|&xi| spec.transform.decode(xi))
                .collect();
            offset += span;
            paths.push(ParameterPath::new(spec.name, values)?);
        }
        Ok(paths)
    }
}

/// Penalty applied to a rate path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegKind {
    None,
    /// Total variation: sum of absolute successive changes. Favors
    /// piecewise-constant paths with sharp jumps.
    Tv,
    /// Quadratic variation: sum of squared successive changes.
    Qv,
}

/// Penalty kind and weight for one rate, aligned with the encoding order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct Regularizer<T> {
    pub kind: RegKind,
    pub weight: T,
}

impl<T: Real> Regularizer<T> {
    pub fn none() -> Self {
        Regularizer {
            kind: RegKind::None,
            weight: T::zero(),
        }
    }

    pub fn tv(weight: T) -> Self {
        Regularizer {
            kind: RegKind::Tv,
            weight,
        }
    }

    pub fn qv(weight: T) -> Self {
        Regularizer {
            kind: RegKind::Qv,
            weight,
        }
    }
}

/// Sum of absolute adjacent differences. On a fixed grid this equals the
/// supremum over all coarser partitions (triangle inequality), which the
/// tests verify by exhaustive enumeration.
pub fn total_variation<T: Real>(values: &[T]) -> T {
    values
        .windows(2)
        .fold(T::zero(), |acc, w| acc + (w[1] - w[0]).abs())
}

/// Sum of squared adjacent differences on the fixed grid.
pub fn quadratic_variation<T: Real>(values: &[T]) -> T {
    values.windows(2).fold(T::zero(), |acc, w| {
        let d = w[1] - w[0];
        acc + d * d
    })
}

fn penalty<T: Real>(kind: RegKind, values: &[T]) -> T {
    match kind {
        RegKind::None => T::zero(),
        RegKind::Tv => total_variation(values),
        RegKind::Qv => quadratic_variation(values),
    }
}

/// Bound combination of model, data, encoding, and penalties: maps a flat
/// real vector to the regularized negative log-posterior.
///
/// The trajectory is a deterministic function of the rates, so the state
/// equation contributes no density term of its own; the penalty plays the
/// role of the prior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct Objective<T> {
    pub model: ModelKind,
    pub init: StateVector<T>,
    pub grid: TimeGrid<T>,
    pub dataset: Dataset<T>,
    pub observation: ObservationConfig<T>,
    pub encoding: ParameterEncoding,
    pub regularizers: Vec<Regularizer<T>>,
}

impl<T: Real> Objective<T> {
    pub fn new(
        model: ModelKind,
        init: StateVector<T>,
        grid: TimeGrid<T>,
        dataset: Dataset<T>,
        observation: ObservationConfig<T>,
        encoding: ParameterEncoding,
        regularizers: Vec<Regularizer<T>>,
    ) -> Result<Self> {
        grid.validate()?;
        observation.validate()?;
        if init.kind() != model {
            return Err(Error::Config(format!(
                "initial state has {} compartments but the model is {model}",
                init.kind()
            )));
        }
        if dataset.model != model {
            return Err(Error::Config(format!(
                "dataset targets {} but the model is {model}",
                dataset.model
            )));
        }
        if encoding.n_steps() != grid.n_steps {
            return Err(Error::Config(format!(
                "encoding covers {} steps but the grid has {}",
                encoding.n_steps(),
                grid.n_steps
            )));
        }
        let expected: Vec<ParamName> = model.parameters().to_vec();
        let declared: Vec<ParamName> = encoding.specs().iter().map(|s| s.name).collect();
        if declared != expected {
            return Err(Error::Config(format!(
                "encoding must declare exactly {expected:?} in order, got {declared:?}"
            )));
        }
        if regularizers.len() != encoding.specs().len() {
            return Err(Error::Config(format!(
                "{} regularizers for {} parameters",
                regularizers.len(),
                encoding.specs().len()
            )));
        }
        for (spec, reg) in encoding.specs().iter().zip(&regularizers) {
            if !(reg.weight >= T::zero()) {
                return Err(Error::Config(format!(
                    "regularization weight {} for {} is negative or NaN",
                    reg.weight, spec.name
                )));
            }
            if !spec.time_varying && reg.kind != RegKind::None {
                return Err(Error::Config(format!(
                    "constant parameter {} cannot carry a path penalty",
                    spec.name
                )));
            }
        }
        Ok(Objective {
            model,
            init,
            grid,
            dataset,
            observation,
            encoding,
            regularizers,
        })
    }

    pub fn dim(&self) -> usize {
        self.encoding.dim()
    }

    /// Trajectory induced by a flat vector.
    pub fn trajectory(&self, x: &[T]) -> Result<Trajectory<T>> {
        let paths = self.encoding.decode(x)?;
        integrate(self.model, &self.init, &paths, &self.grid)
    }

    /// Regularized negative log-posterior. Candidates that cannot be
    /// integrated evaluate to [`LOSS_SENTINEL`].
    pub fn loss(&self, x: &[T]) -> T {
        assert_eq!(x.len(), self.dim(), "objective input has wrong dimension");
        let sentinel = T::real(LOSS_SENTINEL);
        let paths = match self.encoding.decode(x) {
            Ok(p) => p,
            Err(_) => return sentinel,
        };
        let traj = match integrate(self.model, &self.init, &paths, &self.grid) {
            Ok(t) => t,
            Err(_) => return sentinel,
        };
        let loglik = match dataset_loglik(&self.dataset, &traj, &self.observation) {
            Ok(v) => v,
            Err(_) => return sentinel,
        };
        let mut loss = -loglik;
        for (path, reg) in paths.iter().zip(&self.regularizers) {
            if reg.kind != RegKind::None && reg.weight > T::zero() {
                loss = loss + reg.weight * penalty(reg.kind, path.values());
            }
        }
        loss
    }

    /// Negative log-likelihood alone (no penalty), with the same sentinel
    /// convention as [`Objective::loss`].
    pub fn data_misfit(&self, x: &[T]) -> T {
        let sentinel = T::real(LOSS_SENTINEL);
        let traj = match self.trajectory(x) {
            Ok(t) => t,
            Err(_) => return sentinel,
        };
        match dataset_loglik(&self.dataset, &traj, &self.observation) {
            Ok(v) => -v,
            Err(_) => sentinel,
        }
    }

    /// Penalty term per parameter, evaluated on the natural-scale path.
    pub fn penalties(&self, x: &[T]) -> Result<Vec<T>> {
        let paths = self.encoding.decode(x)?;
        Ok(paths
            .iter()
            .zip(&self.regularizers)
            .map(|(path, reg)| penalty(reg.kind, path.values()))
            .collect())
    }
}
