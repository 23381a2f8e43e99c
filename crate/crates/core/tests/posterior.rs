//! Cross-module checks: the synthetic experiments, their likelihoods, and
//! the assembled posterior behave sensibly end to end.

use epitv_core::dynamics::{integrate, ParamName, ParameterPath};
use epitv_core::objective::{Objective, ParamSpec, ParameterEncoding, Regularizer, Transform};
use epitv_core::observation::{dataset_loglik, ObservationConfig};
use epitv_core::synthesis::{builtin_scenario, synthesize, ScenarioName};

fn constant_sirq_objective() -> (Objective<f64>, Vec<f64>) {
    let spec = builtin_scenario::<f64>(ScenarioName::ConstantSirq);
    let bundle = synthesize(&spec).unwrap();
    let encoding = ParameterEncoding::new(
        vec![
            ParamSpec {
                name: ParamName::Beta,
                time_varying: false,
                transform: Transform::Identity,
            },
            ParamSpec {
                name: ParamName::Gamma,
                time_varying: false,
                transform: Transform::Identity,
            },
            ParamSpec {
                name: ParamName::Delta,
                time_varying: false,
                transform: Transform::Identity,
            },
        ],
        spec.grid.n_steps,
    )
    .unwrap();
    let obj = Objective::new(
        spec.model,
        spec.initial_state().unwrap(),
        spec.grid,
        bundle.dataset,
        ObservationConfig::default(),
        encoding,
        vec![
            Regularizer::none(),
            Regularizer::none(),
            Regularizer::none(),
        ],
    )
    .unwrap();
    let truth = obj.encoding.encode(&spec.truth).unwrap();
    (obj, truth)
}

#[test]
fn truth_dominates_a_gross_transmission_misfit() {
    let (obj, truth) = constant_sirq_objective();
    let loss_truth = obj.loss(&truth);
    assert!(loss_truth.is_finite());
    let mut wrong = truth.clone();
    wrong[0] = 0.6; // double the transmission rate
    let loss_wrong = obj.loss(&wrong);
    assert!(
        loss_truth < loss_wrong,
        "truth {loss_truth} should beat the misfit {loss_wrong}"
    );
}

#[test]
fn dataset_loglik_at_the_generating_trajectory_is_finite_and_dominant() {
    let spec = builtin_scenario::<f64>(ScenarioName::ConstantSirq);
    let bundle = synthesize(&spec).unwrap();
    let cfg = ObservationConfig::default();
    let at_truth = dataset_loglik(&bundle.dataset, &bundle.truth_trajectory, &cfg).unwrap();
    assert!(at_truth.is_finite());

    let wrong_paths = vec![
        ParameterPath::constant(ParamName::Beta, 0.6).unwrap(),
        ParameterPath::constant(ParamName::Gamma, 0.03).unwrap(),
        ParameterPath::constant(ParamName::Delta, 0.07).unwrap(),
    ];
    let wrong_traj = integrate(
        spec.model,
        &spec.initial_state().unwrap(),
        &wrong_paths,
        &spec.grid,
    )
    .unwrap();
    let at_wrong = dataset_loglik(&bundle.dataset, &wrong_traj, &cfg).unwrap();
    assert!(at_truth > at_wrong);
}

#[test]
fn all_scenarios_support_their_evidence() {
    // every planned record's expectation is finite and inside the family's
    // support when evaluated on the truth trajectory
    for name in ScenarioName::all() {
        let spec = builtin_scenario::<f64>(name);
        let bundle = synthesize(&spec).unwrap();
        let cfg = ObservationConfig::default();
        let ll = dataset_loglik(&bundle.dataset, &bundle.truth_trajectory, &cfg).unwrap();
        assert!(ll.is_finite(), "{name}: non-finite log-likelihood");
        assert!(
            ll > epitv_core::observation::LOG_IMPOSSIBLE / 2.0,
            "{name}: an impossible record was drawn"
        );
    }
}

#[test]
fn generic_core_works_at_f32_end_to_end() {
    let spec = builtin_scenario::<f32>(ScenarioName::ConstantSirq);
    let bundle = synthesize(&spec).unwrap();
    let encoding = ParameterEncoding::new(
        vec![
            ParamSpec {
                name: ParamName::Beta,
                time_varying: false,
                transform: Transform::Log,
            },
            ParamSpec {
                name: ParamName::Gamma,
                time_varying: false,
                transform: Transform::Log,
            },
            ParamSpec {
                name: ParamName::Delta,
                time_varying: false,
                transform: Transform::Log,
            },
        ],
        spec.grid.n_steps,
    )
    .unwrap();
    let obj = Objective::new(
        spec.model,
        spec.initial_state().unwrap(),
        spec.grid,
        bundle.dataset,
        ObservationConfig::default(),
        encoding,
        vec![
            Regularizer::none(),
            Regularizer::none(),
            Regularizer::none(),
        ],
    )
    .unwrap();
    let truth = obj.encoding.encode(&spec.truth).unwrap();
    let loss: f32 = obj.loss(&truth);
    assert!(loss.is_finite());
    assert!(loss > 0.0);
}
