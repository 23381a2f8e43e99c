//! Ground-truth scenario definitions, epidemic simulation, and seeded
//! synthetic evidence generation.
//!
//! Each evidence record draws from its own RNG stream keyed by
//! `(seed, record index)`, so datasets regenerate bit-exactly regardless of
//! evaluation order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{
    integrate, parameter_paths_csv, ModelKind, ParamName, ParameterPath, StateVector, TimeGrid,
    Trajectory,
};
use crate::error::{Error, Result};
use crate::observation::{Dataset, EvidenceKind, EvidenceRecord};
use crate::real::Real;

/// Built-in scenario identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScenarioName {
    /// Small town, constant SIRQ rates, virulence + surveillance evidence.
    ConstantSirq,
    /// Large city, SIR with a stepped transmission rate, virulence only.
    TimeVaryingSir,
    /// Large city, SIRQ with stepped transmission and quarantine rates,
    /// virulence + surveillance + serology evidence.
    TimeVaryingSirq,
}

impl ScenarioName {
    pub fn all() -> [ScenarioName; 3] {
        [
            ScenarioName::ConstantSirq,
            ScenarioName::TimeVaryingSir,
            ScenarioName::TimeVaryingSirq,
        ]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioName::ConstantSirq => "constant-sirq",
            ScenarioName::TimeVaryingSir => "tv-sir",
            ScenarioName::TimeVaryingSirq => "tv-sirq",
        }
    }
}

impl fmt::Display for ScenarioName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant-sirq" => Ok(ScenarioName::ConstantSirq),
            "tv-sir" => Ok(ScenarioName::TimeVaryingSir),
            "tv-sirq" => Ok(ScenarioName::TimeVaryingSirq),
            other => Err(Error::Parse(format!(
                "unknown scenario `{other}` (expected constant-sirq, tv-sir, or tv-sirq)"
            ))),
        }
    }
}

/// Ground-truth step paths used by the built-in scenarios, written as
/// `(first grid step, level)` segments. These levels and change locations
/// are fixtures of this crate; recovery is always measured against them.
pub mod truth {
    /// Constant-SIRQ rates.
    pub const CONSTANT_SIRQ_RATES: (f64, f64, f64) = (0.3, 0.03, 0.07);

    /// Transmission rate for `tv-sir`: a mid-horizon surge, then a drop
    /// below the starting level.
    pub const TV_SIR_BETA: [(usize, f64); 3] = [(0, 0.16), (30, 0.26), (50, 0.15)];
    /// Constant removal rate for `tv-sir`.
    pub const TV_SIR_GAMMA: f64 = 0.08;

    /// Transmission rate for `tv-sirq`: one sudden drop.
    pub const TV_SIRQ_BETA: [(usize, f64); 2] = [(0, 0.22), (35, 0.12)];
    /// Constant removal rate for `tv-sirq`.
    pub const TV_SIRQ_GAMMA: f64 = 0.03;
    /// Quarantine rate for `tv-sirq`: a temporary surge that returns to the
    /// baseline level.
    pub const TV_SIRQ_DELTA: [(usize, f64); 3] = [(0, 0.08), (50, 0.16), (70, 0.08)];

    /// Expand `(first step, level)` segments into one value per grid step.
    pub fn step_values(n_steps: usize, segments: &[(usize, f64)]) -> Vec<f64> {
        let mut values = vec![0.0; n_steps];
        for (j, &(start, level)) in segments.iter().enumerate() {
            let end = segments.get(j + 1).map_or(n_steps, |&(s, _)| s);
            for v in &mut values[start..end] {
                *v = level;
            }
        }
        values
    }
}

/// One planned observation: what to sample, when, and with what sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct PlannedRecord<T> {
    pub kind: EvidenceKind,
    pub t: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
}

/// Complete recipe for one synthetic experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct ScenarioSpec<T> {
    pub name: String,
    pub model: ModelKind,
    pub population: T,
    pub initial_infectious: T,
    pub grid: TimeGrid<T>,
    pub truth: Vec<ParameterPath<T>>,
    pub plan: Vec<PlannedRecord<T>>,
    pub seed: u64,
}

impl<T: Real> ScenarioSpec<T> {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if !(self.initial_infectious >= T::zero() && self.initial_infectious <= self.population) {
            return Err(Error::Config(format!(
                "initial infectious {} must lie in [0, {}]",
                self.initial_infectious, self.population
            )));
        }
        for planned in &self.plan {
            self.grid.nearest_node(planned.t)?;
        }
        Ok(())
    }

    /// Outbreak start: everyone susceptible except the seed infections.
    pub fn initial_state(&self) -> Result<StateVector<T>> {
        let s = self.population - self.initial_infectious;
        match self.model {
            ModelKind::Sir => StateVector::sir(s, self.initial_infectious, T::zero()),
            ModelKind::Sirq => {
                StateVector::sirq(s, self.initial_infectious, T::zero(), T::zero())
            }
        }
    }

    /// Hex SHA-256 of the canonical JSON rendering.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("scenario serializes");
        let digest = Sha256::digest(json.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

/// Generation provenance: enough to regenerate the dataset bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub spec_hash: String,
}

/// A scenario together with everything it generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct SyntheticBundle<T> {
    pub spec: ScenarioSpec<T>,
    pub truth_trajectory: Trajectory<T>,
    pub dataset: Dataset<T>,
    pub provenance: Provenance,
}

#[derive(Serialize)]
struct ProvenanceDoc<'a, T: Real> {
    seed: u64,
    spec_hash: &'a str,
    spec: &'a ScenarioSpec<T>,
}

impl<T: Real> SyntheticBundle<T> {
    /// Write the four exports into `dir`: dataset CSV, truth-path CSV,
    /// trajectory CSV, and the provenance sidecar.
    pub fn write_all(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let dataset = dir.join("dataset.csv");
        self.dataset.write_csv_file(&dataset)?;
        let truth = dir.join("truth_params.csv");
        std::fs::write(
            &truth,
            parameter_paths_csv(self.spec.model, &self.spec.truth, &self.spec.grid)?,
        )?;
        let trajectory = dir.join("trajectory.csv");
        std::fs::write(&trajectory, self.truth_trajectory.to_csv())?;
        let provenance = dir.join("provenance.json");
        let doc = ProvenanceDoc {
            seed: self.provenance.seed,
            spec_hash: &self.provenance.spec_hash,
            spec: &self.spec,
        };
        let mut json = serde_json::to_string_pretty(&doc).expect("bundle serializes");
        json.push('\n');
        std::fs::write(&provenance, json)?;
        Ok(vec![dataset, truth, trajectory, provenance])
    }
}

fn evenly_spaced<T: Real>(grid: &TimeGrid<T>, count: usize) -> Vec<T> {
    let width = grid.horizon - grid.t0;
    (1..=count)
        .map(|j| grid.t0 + width * T::real(j as f64 / 10.0))
        .collect()
}

/// Built-in scenario recipe by name, with its default seed.
pub fn builtin_scenario<T: Real>(name: ScenarioName) -> ScenarioSpec<T> {
    let grid = TimeGrid::new(T::zero(), T::real(100.0), 100, 10).expect("valid grid");
    let varying = |pname: ParamName, segments: &[(usize, f64)]| {
        let values = truth::step_values(grid.n_steps, segments)
            .into_iter()
            .map(T::real)
            .collect();
        ParameterPath::varying(pname, values).expect("valid truth path")
    };
    let constant = |pname: ParamName, v: f64| {
        ParameterPath::constant(pname, T::real(v)).expect("valid truth rate")
    };
    match name {
        ScenarioName::ConstantSirq => {
            let (beta, gamma, delta) = truth::CONSTANT_SIRQ_RATES;
            let mut plan: Vec<PlannedRecord<T>> = evenly_spaced(&grid, 9)
                .into_iter()
                .map(|t| PlannedRecord {
                    kind: EvidenceKind::Virulence,
                    t,
                    m: Some(10),
                })
                .collect();
            plan.extend(evenly_spaced(&grid, 8).into_iter().map(|t| PlannedRecord {
                kind: EvidenceKind::Surveillance,
                t,
                m: None,
            }));
            ScenarioSpec {
                name: name.to_string(),
                model: ModelKind::Sirq,
                population: T::real(1000.0),
                initial_infectious: T::real(10.0),
                grid,
                truth: vec![
                    constant(ParamName::Beta, beta),
                    constant(ParamName::Gamma, gamma),
                    constant(ParamName::Delta, delta),
                ],
                plan,
                seed: 16,
            }
        }
        ScenarioName::TimeVaryingSir => {
            let plan: Vec<PlannedRecord<T>> = evenly_spaced(&grid, 9)
                .into_iter()
                .map(|t| PlannedRecord {
                    kind: EvidenceKind::Virulence,
                    t,
                    m: Some(1000),
                })
                .collect();
            ScenarioSpec {
                name: name.to_string(),
                model: ModelKind::Sir,
                population: T::real(100_000.0),
                initial_infectious: T::real(100.0),
                grid,
                truth: vec![
                    varying(ParamName::Beta, &truth::TV_SIR_BETA),
                    constant(ParamName::Gamma, truth::TV_SIR_GAMMA),
                ],
                plan,
                seed: 11,
            }
        }
        ScenarioName::TimeVaryingSirq => {
            let mut plan: Vec<PlannedRecord<T>> = evenly_spaced(&grid, 9)
                .into_iter()
                .map(|t| PlannedRecord {
                    kind: EvidenceKind::Virulence,
                    t,
                    m: Some(1000),
                })
                .collect();
            plan.extend(evenly_spaced(&grid, 8).into_iter().map(|t| PlannedRecord {
                kind: EvidenceKind::Surveillance,
                t,
                m: None,
            }));
            plan.extend(evenly_spaced(&grid, 9).into_iter().map(|t| PlannedRecord {
                kind: EvidenceKind::Serology,
                t,
                m: Some(1000),
            }));
            ScenarioSpec {
                name: name.to_string(),
                model: ModelKind::Sirq,
                population: T::real(100_000.0),
                initial_infectious: T::real(100.0),
                grid,
                truth: vec![
                    varying(ParamName::Beta, &truth::TV_SIRQ_BETA),
                    constant(ParamName::Gamma, truth::TV_SIRQ_GAMMA),
                    varying(ParamName::Delta, &truth::TV_SIRQ_DELTA),
                ],
                plan,
                seed: 13,
            }
        }
    }
}

fn fraction<T: Real>(num: T, denom: T) -> f64 {
    let p = (num / denom).to_f64().unwrap_or(0.0);
    p.clamp(0.0, 1.0)
}

fn draw_binomial(rng: &mut ChaCha8Rng, m: u64, p: f64) -> u64 {
    Binomial::new(m, p)
        .expect("probability clamped to [0, 1]")
        .sample(rng)
}

fn draw_poisson(rng: &mut ChaCha8Rng, lambda: f64) -> u64 {
    if lambda <= 0.0 {
        return 0;
    }
    let v: f64 = Poisson::new(lambda)
        .expect("positive finite mean")
        .sample(rng);
    v as u64
}

fn sample_record<T: Real>(
    planned: &PlannedRecord<T>,
    state: &StateVector<T>,
    population: T,
    model: ModelKind,
    seed: u64,
    index: u64,
) -> Result<EvidenceRecord<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    match planned.kind {
        EvidenceKind::Virulence => {
            let m = planned
                .m
                .ok_or_else(|| Error::Config("virulence plan needs a sample size".into()))?;
            let k = draw_binomial(&mut rng, m, fraction(state.i, population));
            EvidenceRecord::virulence(planned.t, m, k)
        }
        EvidenceKind::Surveillance => {
            let level = match model {
                ModelKind::Sirq => state.q.expect("SIRQ state"),
                ModelKind::Sir => state.r,
            };
            let k = draw_poisson(&mut rng, level.to_f64().unwrap_or(0.0));
            EvidenceRecord::surveillance(planned.t, k)
        }
        EvidenceKind::Serology => {
            let m = planned
                .m
                .ok_or_else(|| Error::Config("serology plan needs a sample size".into()))?;
            let k = draw_binomial(&mut rng, m, fraction(state.r, population));
            EvidenceRecord::serology(planned.t, m, k)
        }
    }
}

/// Integrate the truth trajectory and draw one dataset from it.
pub fn synthesize<T: Real>(spec: &ScenarioSpec<T>) -> Result<SyntheticBundle<T>> {
    spec.validate()?;
    let init = spec.initial_state()?;
    let trajectory = integrate(spec.model, &init, &spec.truth, &spec.grid)?;
    let mut records = Vec::with_capacity(spec.plan.len());
    for (index, planned) in spec.plan.iter().enumerate() {
        let node = spec.grid.nearest_node(planned.t)?;
        let record = sample_record(
            planned,
            &trajectory.states[node],
            spec.population,
            spec.model,
            spec.seed,
            index as u64,
        )?;
        records.push(record);
    }
    let dataset = Dataset::new(records, spec.model)?;
    let provenance = Provenance {
        seed: spec.seed,
        spec_hash: spec.hash(),
    };
    Ok(SyntheticBundle {
        spec: spec.clone(),
        truth_trajectory: trajectory,
        dataset,
        provenance,
    })
}
