//! Implementations of the four subcommands. Each writes its artifacts under
//! the chosen output directory and prints a short summary; nothing written
//! to disk depends on wall-clock time, so reruns are byte-identical.

use std::fmt;
use std::path::{Path, PathBuf};

use epitv_core::config::{FitDocument, OptimizerDoc, ParameterDoc, RegularizerDoc};
use epitv_core::dynamics::{
    basic_reproduction_number, parameter_paths_csv, parse_parameter_paths_csv, ModelKind,
    ParamName, ParameterPath,
};
use epitv_core::objective::{total_variation, Objective, RegKind, Transform};
use epitv_core::optimizer::{multi_start, MultiStartResult, Termination};
use epitv_core::synthesis::{builtin_scenario, synthesize, truth, ScenarioName, ScenarioSpec};
use epitv_core::{Error, RatePath, Scalar, Traj};

use crate::metrics::{relative_error, score_path};
use crate::presets::{preset, ReproducePreset};
use crate::reports::{
    to_json_file, FitReport, ParamReport, PathVerdict, RateVerdict, SweepReport, SweepRow,
    Thresholds, VerdictReport,
};
use crate::startset::default_starts;

/// Command failure, split by exit-code class: usage/configuration problems
/// exit 2, internal failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Internal(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Arity { .. }
            | Error::Domain(_)
            | Error::Config(_)
            | Error::Encoding(_)
            | Error::Parse(_) => CliError::Usage(e.to_string()),
            Error::IntegrationOverflow { .. } | Error::Io(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn parse_scenario(name: &str) -> CliResult<ScenarioName> {
    name.parse::<ScenarioName>().map_err(CliError::from)
}

/// `simulate`: write the synthetic bundle and print a one-line summary.
pub fn simulate(scenario: &str, seed: Option<u64>, out: &Path) -> CliResult<()> {
    let name = parse_scenario(scenario)?;
    let mut spec = builtin_scenario::<Scalar>(name);
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    let bundle = synthesize(&spec)?;
    let files = bundle.write_all(out)?;
    let last = bundle.truth_trajectory.states.last().expect("non-empty");
    let mean =
        |path: &RatePath| path.values().iter().sum::<Scalar>() / path.values().len() as Scalar;
    let beta = mean(&spec.truth[0]);
    let gamma = mean(&spec.truth[1]);
    let delta = spec.truth.get(2).map(mean);
    let r0 = basic_reproduction_number(spec.model, beta, gamma, delta, false)?;
    let controlled = match spec.model {
        ModelKind::Sirq => Some(basic_reproduction_number(
            spec.model, beta, gamma, delta, true,
        )?),
        ModelKind::Sir => None,
    };
    println!(
        "{name}: final S={:.1} I={:.1} R={:.1}{} | R0 uncontrolled={r0:.3}{} | {} files in {}",
        last.s,
        last.i,
        last.r,
        last.q.map_or(String::new(), |q| format!(" Q={q:.1}")),
        controlled.map_or(String::new(), |rc| format!(" controlled={rc:.3}")),
        files.len(),
        out.display(),
    );
    Ok(())
}

/// Everything a finished fit knows.
pub struct FitOutcome {
    pub result: MultiStartResult<Scalar>,
    pub paths: Vec<RatePath>,
    pub trajectory: Traj,
    pub report: FitReport,
}

/// Run the multi-start search for an objective and assemble the report.
pub fn run_fit(
    obj: &Objective<Scalar>,
    doc: &FitDocument<Scalar>,
    extra_starts: &[Vec<Scalar>],
) -> CliResult<FitOutcome> {
    if doc.starts == 0 {
        return Err(CliError::Usage("starts must be at least one".into()));
    }
    let mut starts = default_starts(obj, doc.starts, doc.seed);
    starts.extend_from_slice(extra_starts);
    let cfg = doc.optimizer.to_iterated();
    let f = |x: &[Scalar]| obj.loss(x);
    let result = multi_start(&f, &starts, &cfg).map_err(CliError::from)?;
    let best = &result.best;
    let paths = obj.encoding.decode(&best.best_point)?;
    let trajectory = obj.trajectory(&best.best_point)?;

    let mean =
        |path: &RatePath| path.values().iter().sum::<Scalar>() / path.values().len() as Scalar;
    let beta = mean(&paths[0]);
    let gamma = mean(&paths[1]);
    let delta = paths.get(2).map(mean);
    let r0_uncontrolled = basic_reproduction_number(obj.model, beta, gamma, delta, false)?;
    let r0_controlled = match obj.model {
        ModelKind::Sirq => Some(basic_reproduction_number(
            obj.model, beta, gamma, delta, true,
        )?),
        ModelKind::Sir => None,
    };

    let mut warnings = Vec::new();
    if obj.dataset.is_empty() {
        warnings.push(
            "dataset is empty: the fit is under-determined and any constant path \
             attains the penalty-only minimum"
                .into(),
        );
    }
    if best.termination != Termination::Converged {
        warnings.push(format!(
            "search stopped by budget ({:?}) before the restart improvement stalled",
            best.termination
        ));
    }

    let penalties = obj.penalties(&best.best_point)?;
    let parameters = obj
        .encoding
        .specs()
        .iter()
        .zip(&paths)
        .zip(&obj.regularizers)
        .zip(&penalties)
        .map(|(((spec, path), reg), _)| ParamReport {
            name: spec.name.to_string(),
            time_varying: spec.time_varying,
            regularizer: format!("{:?}", reg.kind).to_lowercase(),
            weight: reg.weight,
            total_variation: total_variation(path.values()),
            mean: mean(path),
            first: path.values()[0],
            last: *path.values().last().expect("non-empty path"),
        })
        .collect();

    let data_misfit = obj.data_misfit(&best.best_point);
    let report = FitReport {
        model: obj.model.to_string(),
        seed: doc.seed,
        starts: starts.len(),
        best_start: result.best_start,
        per_start_loss: result.per_start.clone(),
        loss: best.best_value,
        data_misfit,
        penalty_total: best.best_value - data_misfit,
        evals: best.evals,
        restarts: best.restarts,
        termination: best.termination,
        r0_uncontrolled,
        r0_controlled,
        parameters,
        warnings,
    };
    Ok(FitOutcome {
        result,
        paths,
        trajectory,
        report,
    })
}

/// Write the four fit artifacts into `out`.
pub fn write_fit_outputs(out: &Path, obj: &Objective<Scalar>, outcome: &FitOutcome) -> CliResult<()> {
    std::fs::create_dir_all(out)?;
    std::fs::write(
        out.join("fitted_params.csv"),
        parameter_paths_csv(obj.model, &outcome.paths, &obj.grid)?,
    )?;
    std::fs::write(
        out.join("fitted_trajectory.csv"),
        outcome.trajectory.to_csv(),
    )?;
    std::fs::write(out.join("trace.csv"), outcome.result.best.trace_csv())?;
    to_json_file(&outcome.report, &out.join("report.json"))?;
    Ok(())
}

/// Flag overrides shared by `fit` and `lambda-sweep`.
#[derive(Debug, Clone, Copy, Default)]
pub struct FitOverrides {
    pub seed: Option<u64>,
    pub starts: Option<usize>,
    pub max_restarts: Option<usize>,
    pub max_evals: Option<usize>,
}

impl FitOverrides {
    fn apply(&self, doc: &mut FitDocument<Scalar>) {
        if let Some(seed) = self.seed {
            doc.seed = seed;
        }
        if let Some(starts) = self.starts {
            doc.starts = starts;
        }
        if let Some(max_restarts) = self.max_restarts {
            doc.optimizer.max_restarts = max_restarts;
        }
        if let Some(max_evals) = self.max_evals {
            doc.optimizer.max_evals = max_evals;
        }
    }
}

/// Interpret a parsed params CSV as a start vector for `obj`'s encoding.
fn paths_as_start(obj: &Objective<Scalar>, parsed: &[ParameterPath<Scalar>]) -> CliResult<Vec<Scalar>> {
    let paths: Vec<ParameterPath<Scalar>> = obj
        .encoding
        .specs()
        .iter()
        .map(|spec| -> CliResult<ParameterPath<Scalar>> {
            let path = parsed
                .iter()
                .find(|p| p.name == spec.name)
                .ok_or_else(|| CliError::Usage(format!("warm start lacks {}", spec.name)))?;
            let values = path.expanded(obj.grid.n_steps);
            if spec.time_varying {
                Ok(ParameterPath::varying(spec.name, values)?)
            } else {
                Ok(ParameterPath::constant(spec.name, values[0])?)
            }
        })
        .collect::<CliResult<_>>()?;
    Ok(obj.encoding.encode(&paths)?)
}

/// `fit`: run the search described by a JSON config file.
pub fn fit(config: &Path, out: &Path, overrides: FitOverrides) -> CliResult<()> {
    let (mut doc, base_dir) = FitDocument::<Scalar>::load(config)?;
    overrides.apply(&mut doc);
    let obj = doc.build_objective(&base_dir)?;
    let mut extra = Vec::new();
    if let Some(warm) = &doc.warm_start {
        let path = if warm.is_absolute() {
            warm.clone()
        } else {
            base_dir.join(warm)
        };
        let text = std::fs::read_to_string(&path)?;
        let parsed = parse_parameter_paths_csv::<Scalar>(&text)?;
        extra.push(paths_as_start(&obj, &parsed)?);
    }
    let outcome = run_fit(&obj, &doc, &extra)?;
    write_fit_outputs(out, &obj, &outcome)?;
    println!(
        "fit: loss={} misfit={} evals={} restarts={} termination={:?}{}",
        outcome.report.loss,
        outcome.report.data_misfit,
        outcome.report.evals,
        outcome.report.restarts,
        outcome.report.termination,
        if outcome.report.warnings.is_empty() {
            String::new()
        } else {
            format!(" warnings={}", outcome.report.warnings.len())
        },
    );
    Ok(())
}

/// Fit document matching one reproduce preset, pointing at the dataset CSV
/// inside the output directory.
fn reproduce_document(
    spec: &ScenarioSpec<Scalar>,
    preset: &ReproducePreset,
) -> FitDocument<Scalar> {
    let time_varying = |name: ParamName| -> bool {
        spec.truth
            .iter()
            .find(|p| p.name == name)
            .map(|p| !p.is_constant())
            .unwrap_or(false)
    };
    let parameters = spec
        .model
        .parameters()
        .iter()
        .map(|&name| {
            let varying = time_varying(name);
            ParameterDoc {
                name,
                time_varying: varying,
                transform: Transform::Log,
                regularizer: if varying && preset.lambda > 0.0 {
                    RegularizerDoc {
                        kind: RegKind::Tv,
                        weight: preset.lambda,
                    }
                } else {
                    RegularizerDoc::default()
                },
            }
        })
        .collect();
    FitDocument {
        model: spec.model,
        grid: spec.grid,
        initial_state: spec.initial_state().expect("valid scenario"),
        dataset: PathBuf::from("synthetic/dataset.csv"),
        observation: Default::default(),
        parameters,
        seed: spec.seed,
        starts: preset.starts,
        optimizer: OptimizerDoc {
            max_restarts: preset.max_restarts,
            restart_improvement_tol: preset.restart_improvement_tol,
            max_evals: preset.max_evals,
            x_tol: 1e-8,
            f_tol: 1e-10,
            initial_step: preset.initial_step,
        },
        warm_start: None,
    }
}

fn judge_constant_rates(
    paths: &[RatePath],
    thresholds: &Thresholds,
) -> (Vec<RateVerdict>, bool) {
    let (tb, tg, td) = truth::CONSTANT_SIRQ_RATES;
    let truths = [tb, tg, td];
    let mut pass = true;
    let rates = paths
        .iter()
        .zip(truths)
        .map(|(path, truth_value)| {
            let estimate = path.values()[0];
            let rel = relative_error(estimate, truth_value);
            pass &= rel.abs() <= thresholds.max_rate_relative_error;
            RateVerdict {
                name: path.name.to_string(),
                truth: truth_value,
                estimate,
                relative_error: rel,
            }
        })
        .collect();
    (rates, pass)
}

fn judge_path(
    name: ParamName,
    estimate: &RatePath,
    segments: &[(usize, Scalar)],
    thresholds: &Thresholds,
) -> PathVerdict {
    let recovery = score_path(estimate.values(), segments);
    let pass = recovery.passes(
        thresholds.max_step_location_error,
        thresholds.max_plateau_relative_error,
    );
    PathVerdict {
        name: name.to_string(),
        recovery,
        pass,
    }
}

fn judge_gamma(estimate: Scalar, truth_value: Scalar, thresholds: &Thresholds) -> (RateVerdict, bool) {
    let rel = relative_error(estimate, truth_value);
    (
        RateVerdict {
            name: ParamName::Gamma.to_string(),
            truth: truth_value,
            estimate,
            relative_error: rel,
        },
        rel.abs() <= thresholds.max_rate_relative_error,
    )
}

/// `reproduce`: synthesize one built-in experiment with its pinned seed,
/// fit it, judge recovery, and write the verdict. Returns the verdict.
pub fn reproduce(experiment: &str, out: &Path, seed: Option<u64>) -> CliResult<bool> {
    let name = parse_scenario(experiment)?;
    let mut preset = preset(name);
    if let Some(seed) = seed {
        preset.seed = seed;
    }
    reproduce_with(name, out, &preset)
}

/// `reproduce` with an explicit preset (exposed for calibration sweeps).
///
/// Time-varying experiments anneal the penalty weight: the fit first runs
/// at a multiple of the target weight, then continues from that answer as
/// the weight steps down, which walks the near-constant early solution into
/// the stepped one.
pub fn reproduce_with(name: ScenarioName, out: &Path, preset: &ReproducePreset) -> CliResult<bool> {
    let mut spec = builtin_scenario::<Scalar>(name);
    spec.seed = preset.seed;
    let bundle = synthesize(&spec)?;
    std::fs::create_dir_all(out)?;
    bundle.write_all(&out.join("synthetic"))?;

    let doc = reproduce_document(&spec, preset);
    std::fs::write(out.join("fit_config.json"), doc.to_json())?;
    let obj = doc.objective_with(bundle.dataset.clone())?;

    let time_varying = obj.encoding.specs().iter().any(|s| s.time_varying);
    let outcome = if time_varying && preset.lambda > 0.0 {
        let mut warm: Option<Vec<Scalar>> = None;
        let mut last = None;
        for (stage, mult) in [16.0, 4.0, 1.0].into_iter().enumerate() {
            let mut stage_doc = doc.clone();
            for p in &mut stage_doc.parameters {
                if p.regularizer.kind != RegKind::None {
                    p.regularizer.weight = preset.lambda * mult;
                }
            }
            if stage < 2 {
                stage_doc.optimizer.max_restarts = (doc.optimizer.max_restarts / 3).max(5);
                stage_doc.optimizer.max_evals = doc.optimizer.max_evals * 3 / 5;
            }
            let stage_obj = stage_doc.objective_with(bundle.dataset.clone())?;
            let extra: Vec<Vec<Scalar>> = warm.iter().cloned().collect();
            let outcome = run_fit(&stage_obj, &stage_doc, &extra)?;
            warm = Some(outcome.result.best.best_point.clone());
            last = Some(outcome);
        }
        last.expect("at least one stage ran")
    } else {
        run_fit(&obj, &doc, &[])?
    };
    write_fit_outputs(out, &obj, &outcome)?;

    let thresholds = preset.thresholds;
    let mut rates = Vec::new();
    let mut paths = Vec::new();
    let mut pass = true;
    match name {
        ScenarioName::ConstantSirq => {
            let (rate_verdicts, ok) = judge_constant_rates(&outcome.paths, &thresholds);
            rates = rate_verdicts;
            pass &= ok;
        }
        ScenarioName::TimeVaryingSir => {
            let beta = judge_path(ParamName::Beta, &outcome.paths[0], &truth::TV_SIR_BETA, &thresholds);
            pass &= beta.pass;
            paths.push(beta);
            let (gamma, ok) =
                judge_gamma(outcome.paths[1].values()[0], truth::TV_SIR_GAMMA, &thresholds);
            pass &= ok;
            rates.push(gamma);
        }
        ScenarioName::TimeVaryingSirq => {
            let beta =
                judge_path(ParamName::Beta, &outcome.paths[0], &truth::TV_SIRQ_BETA, &thresholds);
            pass &= beta.pass;
            paths.push(beta);
            let delta =
                judge_path(ParamName::Delta, &outcome.paths[2], &truth::TV_SIRQ_DELTA, &thresholds);
            pass &= delta.pass;
            paths.push(delta);
            let (gamma, ok) =
                judge_gamma(outcome.paths[1].values()[0], truth::TV_SIRQ_GAMMA, &thresholds);
            pass &= ok;
            rates.push(gamma);
        }
    }

    let verdict = VerdictReport {
        experiment: name.to_string(),
        seed: spec.seed,
        pass,
        thresholds,
        rates,
        paths,
        loss: outcome.report.loss,
        data_misfit: outcome.report.data_misfit,
    };
    to_json_file(&verdict, &out.join("verdict.json"))?;

    println!("reproduce {name}: seed={} lambda={}", spec.seed, preset.lambda);
    for rate in &verdict.rates {
        println!(
            "  {}: {:.6} vs {:.6} ({:+.1}%)",
            rate.name,
            rate.estimate,
            rate.truth,
            rate.relative_error * 100.0
        );
    }
    for path in &verdict.paths {
        let cps: Vec<String> = path
            .recovery
            .change_points
            .iter()
            .map(|cp| format!("@{}->{} (err {})", cp.truth_step, cp.estimated_step, cp.location_error))
            .collect();
        let levels: Vec<String> = path
            .recovery
            .plateaus
            .iter()
            .map(|p| format!("{:.4} vs {:.4} ({:+.1}%)", p.estimated_level, p.truth_level, p.relative_error * 100.0))
            .collect();
        println!("  {}: steps {}; plateaus {}", path.name, cps.join(", "), levels.join(", "));
    }
    println!("  verdict: {}", if pass { "PASS" } else { "FAIL" });
    Ok(pass)
}

/// Options for `lambda-sweep`.
#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub scenario: String,
    pub lambdas: Vec<Scalar>,
    pub out: PathBuf,
    pub overrides: FitOverrides,
}

/// `lambda-sweep`: fit the scenario once per weight from a fixed start set
/// (plus an always-present unregularized baseline), and classify the
/// regimes by estimate variation and start dispersion.
pub fn lambda_sweep(opts: &SweepOptions) -> CliResult<()> {
    let name = parse_scenario(&opts.scenario)?;
    if opts.lambdas.is_empty() {
        return Err(CliError::Usage("lambda grid must not be empty".into()));
    }
    for pair in opts.lambdas.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(CliError::Usage(
                "lambda grid must be strictly increasing".into(),
            ));
        }
    }
    if !(opts.lambdas[0] > 0.0) {
        return Err(CliError::Usage(
            "lambda grid must be strictly positive (the zero baseline is built in)".into(),
        ));
    }

    let preset = preset(name);
    let mut spec = builtin_scenario::<Scalar>(name);
    if let Some(seed) = opts.overrides.seed {
        spec.seed = seed;
    }
    if !spec.truth.iter().any(|p| !p.is_constant()) {
        return Err(CliError::Usage(format!(
            "scenario {name} has no time-varying rates to regularize"
        )));
    }
    let bundle = synthesize(&spec)?;
    std::fs::create_dir_all(&opts.out)?;
    bundle.write_all(&opts.out.join("synthetic"))?;

    let mut doc = reproduce_document(&spec, &preset);
    doc.optimizer.max_restarts = opts.overrides.max_restarts.unwrap_or(25);
    doc.optimizer.max_evals = opts.overrides.max_evals.unwrap_or(15_000);
    if let Some(starts) = opts.overrides.starts {
        doc.starts = starts;
    }

    let with_lambda = |lambda: Scalar| -> CliResult<Objective<Scalar>> {
        let mut d = doc.clone();
        for p in &mut d.parameters {
            if p.time_varying {
                p.regularizer = if lambda > 0.0 {
                    RegularizerDoc {
                        kind: RegKind::Tv,
                        weight: lambda,
                    }
                } else {
                    RegularizerDoc::default()
                };
            }
        }
        Ok(d.objective_with(bundle.dataset.clone())?)
    };

    // evaluate the grid from the largest weight down, carrying the previous
    // best point as one extra start; dispersion is always measured over the
    // fixed starts alone
    let mut order: Vec<Scalar> = opts.lambdas.clone();
    order.sort_by(|a, b| b.partial_cmp(a).expect("finite lambdas"));
    let mut rows: Vec<SweepRow> = Vec::new();
    let mut warm: Option<Vec<Scalar>> = None;
    for &lambda in std::iter::once(&0.0).chain(order.iter()) {
        // the baseline (first element) runs without warm start
        let obj = with_lambda(lambda)?;
        let extra: Vec<Vec<Scalar>> = if lambda > 0.0 {
            warm.iter().cloned().collect()
        } else {
            Vec::new()
        };
        let outcome = run_fit(&obj, &doc, &extra)?;
        let fixed = doc.starts;
        let fixed_losses = &outcome.result.per_start[..fixed];
        let dispersion = fixed_losses
            .iter()
            .fold(Scalar::NEG_INFINITY, |a, &b| a.max(b))
            - fixed_losses.iter().fold(Scalar::INFINITY, |a, &b| a.min(b));
        let tv_estimate: Scalar = obj
            .encoding
            .specs()
            .iter()
            .zip(&outcome.paths)
            .filter(|(s, _)| s.time_varying)
            .map(|(_, p)| total_variation(p.values()))
            .sum();
        if lambda > 0.0 {
            warm = Some(outcome.result.best.best_point.clone());
        }
        rows.push(SweepRow {
            lambda,
            best_loss: outcome.result.best.best_value,
            data_misfit: outcome.report.data_misfit,
            tv_estimate,
            dispersion,
            regime: String::new(),
            per_start_loss: outcome.result.per_start.clone(),
        });
    }
    rows[1..].reverse(); // ascending lambda after the baseline row

    // regime labels: the well-regularized weight is the positive one with
    // the lowest start dispersion among non-collapsed estimates
    const COLLAPSE_TV: Scalar = 1e-3;
    let selected_lambda = rows[1..]
        .iter()
        .filter(|r| r.tv_estimate >= COLLAPSE_TV)
        .min_by(|a, b| {
            a.dispersion
                .partial_cmp(&b.dispersion)
                .expect("finite dispersion")
                .then(a.lambda.partial_cmp(&b.lambda).expect("finite lambda"))
        })
        .map(|r| r.lambda);
    for row in rows.iter_mut() {
        row.regime = if row.lambda == 0.0 {
            "baseline".into()
        } else if Some(row.lambda) == selected_lambda {
            "well-regularized".into()
        } else if selected_lambda.is_some_and(|sel| row.lambda < sel) {
            "under-regularized".into()
        } else {
            "over-regularized".into()
        };
    }

    let mut csv = String::from("lambda,best_loss,data_misfit,tv_estimate,dispersion,regime\n");
    for row in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.lambda, row.best_loss, row.data_misfit, row.tv_estimate, row.dispersion, row.regime
        ));
    }
    std::fs::write(opts.out.join("sweep.csv"), &csv)?;
    let report = SweepReport {
        scenario: name.to_string(),
        seed: spec.seed,
        selected_lambda,
        rows,
    };
    to_json_file(&report, &opts.out.join("sweep_report.json"))?;

    println!("lambda sweep on {name} (seed {}):", spec.seed);
    println!("  {:>10} {:>12} {:>12} {:>10} {:>10}  regime", "lambda", "best_loss", "misfit", "tv", "dispersion");
    for row in &report.rows {
        println!(
            "  {:>10} {:>12.4} {:>12.4} {:>10.5} {:>10.4}  {}",
            row.lambda, row.best_loss, row.data_misfit, row.tv_estimate, row.dispersion, row.regime
        );
    }
    match report.selected_lambda {
        Some(sel) => println!("  selected lambda: {sel}"),
        None => println!("  selected lambda: none (all estimates collapsed)"),
    }
    Ok(())
}
