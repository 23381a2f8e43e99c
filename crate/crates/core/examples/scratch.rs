// Scratch exploration harness (not part of the deliverable surface).
use std::time::Instant;

use epitv_core::dynamics::{integrate, ModelKind, ParamName, ParameterPath};
use epitv_core::objective::{
    total_variation, Objective, ParamSpec, ParameterEncoding, RegKind, Regularizer, Transform,
};
use epitv_core::observation::ObservationConfig;
use epitv_core::optimizer::{multi_start, InitialStep, IteratedConfig};
use epitv_core::synthesis::{builtin_scenario, synthesize, ScenarioName};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn show_scenario(name: ScenarioName) {
    let spec = builtin_scenario::<f64>(name);
    let init = spec.initial_state().unwrap();
    let traj = integrate(spec.model, &init, &spec.truth, &spec.grid).unwrap();
    let n = spec.population;
    println!("=== {name} (N = {n}, seed = {})", spec.seed);
    for k in (0..=100).step_by(10) {
        let st = &traj.states[k];
        println!(
            "  t={k:3}  S={:9.1}  I={:9.1} (I/N={:.4})  R={:9.1}  Q={}",
            st.s,
            st.i,
            st.i / n,
            st.r,
            st.q.map_or("-".into(), |q| format!("{q:9.1}")),
        );
    }
}

/// Crude constant-rate pick by coarse grid search, then perturbed copies.
fn make_starts(obj: &Objective<f64>, n_starts: usize, seed: u64) -> Vec<Vec<f64>> {
    let model = obj.model;
    let betas = [0.05, 0.1, 0.2, 0.35, 0.6];
    let gammas = [0.01, 0.03, 0.1, 0.3];
    let deltas = [0.02, 0.07, 0.2];
    let mut best: Option<(f64, Vec<f64>)> = None;
    let encode_constants = |b: f64, g: f64, d: Option<f64>| -> Vec<f64> {
        let mut paths = vec![
            ParameterPath::constant(ParamName::Beta, b).unwrap(),
            ParameterPath::constant(ParamName::Gamma, g).unwrap(),
        ];
        if let Some(d) = d {
            paths.push(ParameterPath::constant(ParamName::Delta, d).unwrap());
        }
        // expand constants into the (possibly time-varying) encoding
        let full: Vec<ParameterPath<f64>> = obj
            .encoding
            .specs()
            .iter()
            .map(|spec| {
                let v = paths.iter().find(|p| p.name == spec.name).unwrap().values()[0];
                if spec.time_varying {
                    ParameterPath::varying(spec.name, vec![v; obj.grid.n_steps]).unwrap()
                } else {
                    ParameterPath::constant(spec.name, v).unwrap()
                }
            })
            .collect();
        obj.encoding.encode(&full).unwrap()
    };
    for &b in &betas {
        for &g in &gammas {
            match model {
                ModelKind::Sir => {
                    let x = encode_constants(b, g, None);
                    let v = obj.loss(&x);
                    if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
                        best = Some((v, x));
                    }
                }
                ModelKind::Sirq => {
                    for &d in &deltas {
                        let x = encode_constants(b, g, Some(d));
                        let v = obj.loss(&x);
                        if best.as_ref().map_or(true, |(bv, _)| v < *bv) {
                            best = Some((v, x));
                        }
                    }
                }
            }
        }
    }
    let (v0, x0) = best.unwrap();
    println!("  crude start loss = {v0:.3}");
    let mut starts = vec![x0.clone()];
    let mut rng = StdRng::seed_from_u64(seed ^ 0x5eed);
    let dim = x0.len();
    for _ in 1..n_starts {
        let mut x = x0.clone();
        // step-shaped log-space bumps
        let n_bumps = rng.random_range(1..=2);
        for _ in 0..n_bumps {
            let a = rng.random_range(0..dim);
            let b = rng.random_range(0..dim);
            let (lo, hi) = (a.min(b), a.max(b).max(a.min(b) + 1));
            let bump = rng.random_range(0.25..0.8) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            for xi in &mut x[lo..hi] {
                *xi += bump;
            }
        }
        starts.push(x);
    }
    starts
}

fn fit_tv_sir(lambda: f64, starts_n: usize, max_restarts: usize, max_evals: usize) {
    let spec = builtin_scenario::<f64>(ScenarioName::TimeVaryingSir);
    let bundle = synthesize(&spec).unwrap();
    let encoding = ParameterEncoding::new(
        vec![
            ParamSpec { name: ParamName::Beta, time_varying: true, transform: Transform::Log },
            ParamSpec { name: ParamName::Gamma, time_varying: false, transform: Transform::Log },
        ],
        spec.grid.n_steps,
    )
    .unwrap();
    let obj = Objective::new(
        spec.model,
        spec.initial_state().unwrap(),
        spec.grid,
        bundle.dataset.clone(),
        ObservationConfig::default(),
        encoding,
        vec![Regularizer::tv(lambda), Regularizer::none()],
    )
    .unwrap();

    let truth_beta = spec.truth[0].values().to_vec();
    let truth_gamma = spec.truth[1].values()[0];
    let x_truth = obj.encoding.encode(&spec.truth).unwrap();
    println!(
        "  truth: loss={:.3} misfit={:.3} tv_penalty={:.3}",
        obj.loss(&x_truth),
        obj.data_misfit(&x_truth),
        lambda * total_variation(&truth_beta)
    );

    let mut starts = make_starts(&obj, starts_n, spec.seed);
    if std::env::var("FROM_TRUTH").is_ok() {
        starts.push(x_truth.clone());
    }
    let mut cfg = IteratedConfig::standard(0.4);
    cfg.max_restarts = max_restarts;
    cfg.restart_improvement_tol = 1e-6;
    cfg.inner.max_evals = max_evals;
    cfg.inner.initial_step = InitialStep::Uniform(0.4);

    let t0 = Instant::now();
    let f = |x: &[f64]| obj.loss(x);
    let res = multi_start(&f, &starts, &cfg).unwrap();
    let dt = t0.elapsed().as_secs_f64();

    let best = &res.best;
    let paths = obj.encoding.decode(&best.best_point).unwrap();
    let beta_hat = paths[0].values();
    let gamma_hat = paths[1].values()[0];
    println!(
        "lambda={lambda:8.2}  loss={:10.3}  misfit={:10.3}  tv={:7.3} (truth tv={:.3})  gamma={:.4} (truth {truth_gamma})  evals={}  restarts={} starts-best={:?}  [{dt:.1}s]",
        best.best_value,
        obj.data_misfit(&best.best_point),
        total_variation(beta_hat),
        total_variation(&truth_beta),
        gamma_hat,
        best.evals,
        best.restarts,
        res.per_start.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>(),
    );
    print!("  beta_hat by decade: ");
    for k in (0..100).step_by(5) {
        print!("{:.3} ", beta_hat[k]);
    }
    println!();
    print!("  truth     by decade: ");
    for k in (0..100).step_by(5) {
        print!("{:.3} ", truth_beta[k]);
    }
    println!();
}

/// Least-squares single change point of `est` inside `[lo, hi)`.
fn change_point(est: &[f64], lo: usize, hi: usize) -> usize {
    let seg = &est[lo..hi];
    let n = seg.len();
    let prefix: Vec<f64> = std::iter::once(0.0)
        .chain(seg.iter().scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        }))
        .collect();
    let prefix2: Vec<f64> = std::iter::once(0.0)
        .chain(seg.iter().scan(0.0, |acc, v| {
            *acc += v * v;
            Some(*acc)
        }))
        .collect();
    let sse = |a: usize, b: usize| -> f64 {
        let len = (b - a) as f64;
        let sum = prefix[b] - prefix[a];
        let sum2 = prefix2[b] - prefix2[a];
        sum2 - sum * sum / len
    };
    let mut best = (f64::INFINITY, 1);
    for c in 1..n {
        let total = sse(0, c) + sse(c, n);
        if total < best.0 {
            best = (total, c);
        }
    }
    lo + best.1
}

fn plateau_mean(est: &[f64], start: usize, end: usize) -> f64 {
    let quarter = (end - start) / 4;
    let inner = &est[start + quarter..end - quarter];
    inner.iter().sum::<f64>() / inner.len() as f64
}

fn tv_sir_metrics(beta_hat: &[f64], gamma_hat: f64) -> String {
    use epitv_core::synthesis::truth::{TV_SIR_BETA, TV_SIR_GAMMA};
    let segs = TV_SIR_BETA;
    let n = beta_hat.len();
    let bounds: Vec<usize> = segs.iter().map(|s| s.0).chain([n]).collect();
    let mut out = String::new();
    for j in 1..segs.len() {
        let truth_cp = segs[j].0;
        let lo = (bounds[j - 1] + bounds[j]) / 2;
        let hi = (bounds[j] + bounds[j + 1]) / 2;
        let cp = change_point(beta_hat, lo, hi + 1);
        out += &format!("cp{j}:{}({}) ", cp, cp as isize - truth_cp as isize);
    }
    for j in 0..segs.len() {
        let level = plateau_mean(beta_hat, bounds[j], bounds[j + 1]);
        let err = (level - segs[j].1) / segs[j].1;
        out += &format!("b{j}:{level:.3}({:+.0}%) ", err * 100.0);
    }
    out += &format!(
        "g:{gamma_hat:.4}({:+.0}%)",
        (gamma_hat - TV_SIR_GAMMA) / TV_SIR_GAMMA * 100.0
    );
    out
}

fn sweep_tv_sir(lambdas: &[f64], seeds: &[u64], starts_n: usize, restarts: usize, evals: usize) {
    for &seed in seeds {
        let mut spec = builtin_scenario::<f64>(ScenarioName::TimeVaryingSir);
        spec.seed = seed;
        let bundle = synthesize(&spec).unwrap();
        for &lambda in lambdas {
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
            let obj = Objective::new(
                spec.model,
                spec.initial_state().unwrap(),
                spec.grid,
                bundle.dataset.clone(),
                ObservationConfig::default(),
                encoding,
                vec![Regularizer::tv(lambda), Regularizer::none()],
            )
            .unwrap();
            let starts = make_starts(&obj, starts_n, spec.seed);
            let mut cfg = IteratedConfig::standard(0.4);
            cfg.max_restarts = restarts;
            cfg.restart_improvement_tol = 1e-6;
            cfg.inner.max_evals = evals;
            let t0 = Instant::now();
            let f = |x: &[f64]| obj.loss(x);
            let res = multi_start(&f, &starts, &cfg).unwrap();
            let dt = t0.elapsed().as_secs_f64();
            let paths = obj.encoding.decode(&res.best.best_point).unwrap();
            println!(
                "seed={seed:3} lam={lambda:6.1} loss={:8.2} tv={:5.3} {} [{dt:.0}s]",
                res.best.best_value,
                total_variation(paths[0].values()),
                tv_sir_metrics(paths[0].values(), paths[1].values()[0]),
            );
        }
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mode = args.get(1).map(String::as_str).unwrap_or("show");
    match mode {
        "show" => {
            for name in ScenarioName::all() {
                show_scenario(name);
            }
        }
        "fit-tv-sir" => {
            let lambda: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(40.0);
            let starts: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(5);
            let restarts: usize = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(40);
            let evals: usize = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(20000);
            fit_tv_sir(lambda, starts, restarts, evals);
        }
        "sweep" => {
            let lambdas: Vec<f64> = args
                .get(2)
                .map(|s| s.split(',').map(|v| v.parse().unwrap()).collect())
                .unwrap_or_else(|| vec![10.0, 20.0, 40.0]);
            let seeds: Vec<u64> = args
                .get(3)
                .map(|s| s.split(',').map(|v| v.parse().unwrap()).collect())
                .unwrap_or_else(|| (1..=8).collect());
            sweep_tv_sir(&lambdas, &seeds, 3, 25, 15000);
        }
        "probe" => {
            // misfit along the (beta_t + c N/S_t, gamma + c) compensation ridge
            for seed in [1u64, 2, 3, 4, 5, 6, 11] {
                let mut spec = builtin_scenario::<f64>(ScenarioName::TimeVaryingSir);
                spec.seed = seed;
                let bundle = synthesize(&spec).unwrap();
                let init = spec.initial_state().unwrap();
                let truth_traj = integrate(spec.model, &init, &spec.truth, &spec.grid).unwrap();
                let n = spec.population;
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
                let obj = Objective::new(
                    spec.model,
                    init,
                    spec.grid,
                    bundle.dataset.clone(),
                    ObservationConfig::default(),
                    encoding,
                    vec![Regularizer::none(), Regularizer::none()],
                )
                .unwrap();
                print!("seed={seed:3} misfit(c): ");
                for c in [-0.01, -0.005, 0.0, 0.005, 0.01, 0.015, 0.02, 0.03] {
                    let beta: Vec<f64> = spec.truth[0]
                        .values()
                        .iter()
                        .enumerate()
                        .map(|(k, &b)| (b + c * n / truth_traj.states[k].s).max(1e-6))
                        .collect();
                    let gamma = spec.truth[1].values()[0] + c;
                    let paths = vec![
                        ParameterPath::varying(ParamName::Beta, beta).unwrap(),
                        ParameterPath::constant(ParamName::Gamma, gamma).unwrap(),
                    ];
                    let x = obj.encoding.encode(&paths).unwrap();
                    print!("{c:+.3}:{:.2} ", obj.data_misfit(&x));
                }
                println!();
            }
        }
        "profile" => {
            // profile likelihood over b2 inside the exact 3-level family
            use epitv_core::optimizer::{nelder_mead, NelderMeadConfig};
            use epitv_core::synthesis::truth::{TV_SIR_BETA, TV_SIR_GAMMA};
            for seed in 1u64..=10 {
                let mut spec = builtin_scenario::<f64>(ScenarioName::TimeVaryingSir);
                spec.seed = seed;
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
                let obj = Objective::new(
                    spec.model,
                    spec.initial_state().unwrap(),
                    spec.grid,
                    bundle.dataset.clone(),
                    ObservationConfig::default(),
                    encoding.clone(),
                    vec![Regularizer::none(), Regularizer::none()],
                )
                .unwrap();
                let misfit_of = |b0: f64, b1: f64, b2: f64, g: f64| {
                    let mut beta = vec![b0; 100];
                    for v in &mut beta[TV_SIR_BETA[1].0..TV_SIR_BETA[2].0] {
                        *v = b1;
                    }
                    for v in &mut beta[TV_SIR_BETA[2].0..] {
                        *v = b2;
                    }
                    let paths = vec![
                        ParameterPath::varying(ParamName::Beta, beta).unwrap(),
                        ParameterPath::constant(ParamName::Gamma, g).unwrap(),
                    ];
                    obj.data_misfit(&encoding.encode(&paths).unwrap())
                };
                print!("seed={seed:3} profile(b2): ");
                let mut best = (f64::INFINITY, 0.0);
                for b2 in [0.12, 0.135, 0.15, 0.165, 0.18, 0.20, 0.22, 0.24] {
                    let f = |x: &[f64]| misfit_of(x[0].exp(), x[1].exp(), b2, x[2].exp());
                    let x0 = [
                        TV_SIR_BETA[0].1.ln(),
                        TV_SIR_BETA[1].1.ln(),
                        TV_SIR_GAMMA.ln(),
                    ];
                    let mut cfg = NelderMeadConfig::standard(0.3);
                    cfg.max_evals = 3000;
                    let res = nelder_mead(f, &x0, &cfg).unwrap();
                    if res.best_value < best.0 {
                        best = (res.best_value, b2);
                    }
                    print!("{b2:.3}:{:.2} ", res.best_value);
                }
                println!("   min at b2={:.3}", best.1);
            }
        }
        "probe-const" => {
            // loss at truth vs at a given candidate for constant-sirq
            for seed in 13u64..=48 {
                let mut spec = builtin_scenario::<f64>(ScenarioName::ConstantSirq);
                spec.seed = seed;
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
                    bundle.dataset.clone(),
                    ObservationConfig::default(),
                    encoding.clone(),
                    vec![
                        Regularizer::none(),
                        Regularizer::none(),
                        Regularizer::none(),
                    ],
                )
                .unwrap();
                let eval = |b: f64, g: f64, d: f64| {
                    obj.loss(&[b.ln(), g.ln(), d.ln()])
                };
                // dense profile over (gamma, delta) with beta optimized crudely
                use epitv_core::optimizer::{nelder_mead, NelderMeadConfig};
                let f = |x: &[f64]| obj.loss(x);
                let mut cfg = NelderMeadConfig::standard(0.5);
                cfg.max_evals = 20000;
                cfg.x_tol = 1e-10;
                let res = nelder_mead(f, &[0.3f64.ln(), 0.03f64.ln(), 0.07f64.ln()], &cfg).unwrap();
                let est: Vec<f64> = res.best_point.iter().map(|v| v.exp()).collect();
                println!(
                    "seed={seed:3} loss(truth)={:8.3}  from-truth NM -> ({:.4}, {:.4}, {:.4}) loss={:8.3}",
                    eval(0.3, 0.03, 0.07),
                    est[0],
                    est[1],
                    est[2],
                    res.best_value,
                );
            }
        }
        "cont-tvsirq" => {
            // lambda-continuation multi-start: big weight -> target weight
            use epitv_core::synthesis::truth::{TV_SIRQ_BETA, TV_SIRQ_DELTA, TV_SIRQ_GAMMA};
            let lambda: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(8.0);
            let seeds: Vec<u64> = args
                .get(3)
                .map(|s| s.split(',').map(|v| v.parse().unwrap()).collect())
                .unwrap_or_else(|| vec![13]);
            for seed in seeds {
                let mut spec = builtin_scenario::<f64>(ScenarioName::TimeVaryingSirq);
                spec.seed = seed;
                let bundle = synthesize(&spec).unwrap();
                let encoding = ParameterEncoding::new(
                    vec![
                        ParamSpec { name: ParamName::Beta, time_varying: true, transform: Transform::Log },
                        ParamSpec { name: ParamName::Gamma, time_varying: false, transform: Transform::Log },
                        ParamSpec { name: ParamName::Delta, time_varying: true, transform: Transform::Log },
                    ],
                    spec.grid.n_steps,
                )
                .unwrap();
                let make_obj = |lam: f64| {
                    Objective::new(
                        spec.model,
                        spec.initial_state().unwrap(),
                        spec.grid,
                        bundle.dataset.clone(),
                        ObservationConfig::default(),
                        encoding.clone(),
                        vec![Regularizer::tv(lam), Regularizer::none(), Regularizer::tv(lam)],
                    )
                    .unwrap()
                };
                let t0 = Instant::now();
                let mut warm: Option<Vec<f64>> = None;
                let mut final_loss = f64::INFINITY;
                let mut final_point = Vec::new();
                for (stage, mult) in [16.0, 4.0, 1.0].iter().enumerate() {
                    let obj = make_obj(lambda * mult);
                    let mut starts = make_starts(&obj, 5, spec.seed);
                    if let Some(w) = &warm {
                        starts.push(w.clone());
                    }
                    let mut cfg = IteratedConfig::standard(0.4);
                    cfg.max_restarts = if stage == 2 { 40 } else { 15 };
                    cfg.restart_improvement_tol = 1e-6;
                    cfg.inner.max_evals = if stage == 2 { 25000 } else { 15000 };
                    let f = |x: &[f64]| obj.loss(x);
                    let res = multi_start(&f, &starts, &cfg).unwrap();
                    warm = Some(res.best.best_point.clone());
                    final_loss = res.best.best_value;
                    final_point = res.best.best_point.clone();
                }
                let dt = t0.elapsed().as_secs_f64();
                let paths = encoding.decode(&final_point).unwrap();
                let beta = paths[0].values();
                let gamma = paths[1].values()[0];
                let delta = paths[2].values();
                let seg_mean = |v: &[f64], a: usize, b: usize| {
                    let q = (b - a) / 4;
                    v[a + q..b - q].iter().sum::<f64>() / (b - q - a - q) as f64
                };
                println!(
                    "seed={seed:3} lam={lambda} continuation: final loss={final_loss:.2} [{dt:.0}s]"
                );
                let b_cp = TV_SIRQ_BETA[1].0;
                let (d_cp1, d_cp2) = (TV_SIRQ_DELTA[1].0, TV_SIRQ_DELTA[2].0);
                println!(
                    "  beta plateaus: {:.4}/{} {:.4}/{}  gamma {:.4}/{} ({:+.1}%)",
                    seg_mean(beta, 0, b_cp),
                    TV_SIRQ_BETA[0].1,
                    seg_mean(beta, b_cp, 100),
                    TV_SIRQ_BETA[1].1,
                    gamma,
                    TV_SIRQ_GAMMA,
                    (gamma - TV_SIRQ_GAMMA) / TV_SIRQ_GAMMA * 100.0,
                );
                println!(
                    "  delta plateaus: {:.4}/{} {:.4}/{} {:.4}/{}",
                    seg_mean(delta, 0, d_cp1),
                    TV_SIRQ_DELTA[0].1,
                    seg_mean(delta, d_cp1, d_cp2),
                    TV_SIRQ_DELTA[1].1,
                    seg_mean(delta, d_cp2, 100),
                    TV_SIRQ_DELTA[2].1,
                );
            }
        }
        "probe-tvsirq" => {
            use epitv_core::optimizer::iterated_nelder_mead;
            use epitv_core::synthesis::truth::{TV_SIRQ_BETA, TV_SIRQ_DELTA, TV_SIRQ_GAMMA};
            let lambda: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(8.0);
            let seeds: Vec<u64> = args
                .get(3)
                .map(|s| s.split(',').map(|v| v.parse().unwrap()).collect())
                .unwrap_or_else(|| vec![13]);
            for seed in seeds {
                let mut spec = builtin_scenario::<f64>(ScenarioName::TimeVaryingSirq);
                spec.seed = seed;
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
                        ParamSpec {
                            name: ParamName::Delta,
                            time_varying: true,
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
                    bundle.dataset.clone(),
                    ObservationConfig::default(),
                    encoding.clone(),
                    vec![
                        Regularizer::tv(lambda),
                        Regularizer::none(),
                        Regularizer::tv(lambda),
                    ],
                )
                .unwrap();
                let x_truth = encoding.encode(&spec.truth).unwrap();
                let mut cfg = IteratedConfig::standard(0.4);
                cfg.max_restarts = 40;
                cfg.restart_improvement_tol = 1e-6;
                cfg.inner.max_evals = 25000;
                let f = |x: &[f64]| obj.loss(x);
                let t0 = Instant::now();
                let res = iterated_nelder_mead(f, &x_truth, &cfg).unwrap();
                let dt = t0.elapsed().as_secs_f64();
                let paths = encoding.decode(&res.best_point).unwrap();
                let beta = paths[0].values();
                let gamma = paths[1].values()[0];
                let delta = paths[2].values();
                let seg_mean = |v: &[f64], a: usize, b: usize| {
                    let q = (b - a) / 4;
                    v[a + q..b - q].iter().sum::<f64>() / (b - q - a - q) as f64
                };
                println!(
                    "seed={seed:3} lam={lambda}: loss(truth)={:.2} from-truth loss={:.2} [{dt:.0}s]",
                    obj.loss(&x_truth),
                    res.best_value,
                );
                let b_cp = TV_SIRQ_BETA[1].0;
                let (d_cp1, d_cp2) = (TV_SIRQ_DELTA[1].0, TV_SIRQ_DELTA[2].0);
                println!(
                    "  beta plateaus: {:.4}/{} {:.4}/{}  gamma {:.4}/{} ({:+.1}%)",
                    seg_mean(beta, 0, b_cp),
                    TV_SIRQ_BETA[0].1,
                    seg_mean(beta, b_cp, 100),
                    TV_SIRQ_BETA[1].1,
                    gamma,
                    TV_SIRQ_GAMMA,
                    (gamma - TV_SIRQ_GAMMA) / TV_SIRQ_GAMMA * 100.0,
                );
                println!(
                    "  delta plateaus: {:.4}/{} {:.4}/{} {:.4}/{}",
                    seg_mean(delta, 0, d_cp1),
                    TV_SIRQ_DELTA[0].1,
                    seg_mean(delta, d_cp1, d_cp2),
                    TV_SIRQ_DELTA[1].1,
                    seg_mean(delta, d_cp2, 100),
                    TV_SIRQ_DELTA[2].1,
                );
            }
        }
        other => eprintln!("unknown mode {other}"),
    }
}
