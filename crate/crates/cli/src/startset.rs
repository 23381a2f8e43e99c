//! Deterministic multi-start generation: a crude constant-rate fit found by
//! coarse grid search, plus seeded step-shaped perturbations of it.

use epitv_core::dynamics::{ModelKind, ParamName, ParameterPath};
use epitv_core::objective::Objective;
use epitv_core::Scalar;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const BETA_GRID: [Scalar; 5] = [0.05, 0.1, 0.2, 0.35, 0.6];
const GAMMA_GRID: [Scalar; 4] = [0.01, 0.03, 0.1, 0.3];
const DELTA_GRID: [Scalar; 3] = [0.02, 0.07, 0.2];

/// Encode constant rates into the objective's (possibly time-varying)
/// layout.
fn encode_constants(obj: &Objective<Scalar>, rates: &[(ParamName, Scalar)]) -> Vec<Scalar> {
    let paths: Vec<ParameterPath<Scalar>> = obj
        .encoding
        .specs()
        .iter()
        .map(|spec| {
            let v = rates
                .iter()
                .find(|(name, _)| *name == spec.name)
                .expect("rate provided for every model parameter")
                .1;
            if spec.time_varying {
                ParameterPath::varying(spec.name, vec![v; obj.grid.n_steps])
                    .expect("positive rate")
            } else {
                ParameterPath::constant(spec.name, v).expect("positive rate")
            }
        })
        .collect();
    obj.encoding.encode(&paths).expect("constants encode")
}

/// Constant-rate candidate with the best loss on a fixed coarse grid.
fn crude_start(obj: &Objective<Scalar>) -> Vec<Scalar> {
    let mut best: Option<(Scalar, Vec<Scalar>)> = None;
    let mut consider = |rates: &[(ParamName, Scalar)]| {
        let x = encode_constants(obj, rates);
        let v = obj.loss(&x);
        if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, x));
        }
    };
    for &beta in &BETA_GRID {
        for &gamma in &GAMMA_GRID {
            match obj.model {
                ModelKind::Sir => {
                    consider(&[(ParamName::Beta, beta), (ParamName::Gamma, gamma)]);
                }
                ModelKind::Sirq => {
                    for &delta in &DELTA_GRID {
                        consider(&[
                            (ParamName::Beta, beta),
                            (ParamName::Gamma, gamma),
                            (ParamName::Delta, delta),
                        ]);
                    }
                }
            }
        }
    }
    best.expect("grid is non-empty").1
}

/// Build `n_starts` starting points: the crude constant fit first, then
/// perturbed copies carrying one or two step-shaped bumps in the encoded
/// (log) coordinates. Deterministic given objective, count, and seed.
pub fn default_starts(obj: &Objective<Scalar>, n_starts: usize, seed: u64) -> Vec<Vec<Scalar>> {
    let x0 = crude_start(obj);
    let dim = x0.len();
    let mut starts = vec![x0.clone()];
    let mut rng = StdRng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    while starts.len() < n_starts {
        let mut x = x0.clone();
        let bumps = rng.random_range(1..=2);
        for _ in 0..bumps {
            let a = rng.random_range(0..dim);
            let b = rng.random_range(0..dim);
            let lo = a.min(b);
            let hi = (a.max(b) + 1).min(dim);
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let bump = sign * rng.random_range(0.25..0.8);
            for xi in &mut x[lo..hi] {
                *xi += bump;
            }
        }
        starts.push(x);
    }
    starts
}

#[cfg(test)]
mod tests {
    use super::*;
    use epitv_core::objective::{ParamSpec, ParameterEncoding, Regularizer, Transform};
    use epitv_core::observation::ObservationConfig;
    use epitv_core::synthesis::{builtin_scenario, synthesize, ScenarioName};

    fn demo_objective() -> Objective<Scalar> {
        let spec = builtin_scenario::<Scalar>(ScenarioName::TimeVaryingSir);
        let bundle = synthesize(&spec).unwrap();
        let encoding = ParameterEncoding::new(
            vec![
                ParamSpec {
                    name: ParamName::Beta,
                    time_varying: true,
                    transform: Transform::Log,
                },
                ParamSpec {
                    name: ParamName::Gamma,
                    time_varying: false,
                    transform: Transform::Log,
                },
            ],
            spec.grid.n_steps,
        )
        .unwrap();
        Objective::new(
            spec.model,
            spec.initial_state().unwrap(),
            spec.grid,
            bundle.dataset,
            ObservationConfig::default(),
            encoding,
            vec![Regularizer::tv(10.0), Regularizer::none()],
        )
        .unwrap()
    }

    #[test]
    fn starts_are_deterministic_and_distinct() {
        let obj = demo_objective();
        let a = default_starts(&obj, 5, 3);
        let b = default_starts(&obj, 5, 3);
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        for s in &a {
            assert_eq!(s.len(), obj.dim());
        }
        for j in 1..a.len() {
            assert_ne!(a[j], a[0], "perturbed start {j} must differ");
        }
        let c = default_starts(&obj, 5, 4);
        assert_ne!(a[1], c[1], "different seeds perturb differently");
    }

    #[test]
    fn first_start_is_the_crude_constant_fit() {
        let obj = demo_objective();
        let starts = default_starts(&obj, 3, 1);
        // a constant path in log coordinates has identical entries per block
        let beta_block = &starts[0][..obj.grid.n_steps];
        assert!(beta_block.iter().all(|v| v == &beta_block[0]));
        assert!(obj.loss(&starts[0]).is_finite());
    }
}
