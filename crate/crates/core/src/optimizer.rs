//! From-scratch Nelder-Mead simplex minimizer, an iterated restart wrapper
//! that re-inflates a fresh simplex at each local optimum, and a
//! deterministic multi-start driver.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Worst-value stand-in for non-finite objective values, so centroid
/// arithmetic always sees ordered reals.
pub const SENTINEL_WORST: f64 = 1e12;

/// Size of the axis-aligned initial simplex: vertex `j` is
/// `x0 + step(j) * e_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub enum InitialStep<T> {
    Uniform(T),
    PerCoordinate(Vec<T>),
}

impl<T: Real> InitialStep<T> {
    fn step(&self, j: usize) -> T {
        match self {
            InitialStep::Uniform(s) => *s,
            InitialStep::PerCoordinate(v) => v[j],
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            InitialStep::Uniform(s) => {
                if !(*s > T::zero()) {
                    return Err(Error::Config(format!("initial step {s} must be positive")));
                }
            }
            InitialStep::PerCoordinate(v) => {
                if v.len() != dim {
                    return Err(Error::Arity {
                        expected: dim,
                        got: v.len(),
                    });
                }
                for s in v {
                    if !(*s > T::zero()) {
                        return Err(Error::Config(format!(
                            "initial step {s} must be positive"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Coefficients and stopping rules for one Nelder-Mead run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct NelderMeadConfig<T> {
    /// Reflection coefficient (rho).
    pub reflection: T,
    /// Expansion coefficient (chi).
    pub expansion: T,
    /// Contraction coefficient (psi), used inside and outside.
    pub contraction: T,
    /// Shrink coefficient (sigma).
    pub shrink: T,
    /// Evaluation budget for one run.
    pub max_evals: usize,
    /// Converged when the simplex diameter drops below this ...
    pub x_tol: T,
    /// ... and the value spread drops below this.
    pub f_tol: T,
    pub initial_step: InitialStep<T>,
}

impl<T: Real> NelderMeadConfig<T> {
    /// Canonical coefficients (1, 2, 1/2, 1/2) with a uniform initial step.
    pub fn standard(initial_step: T) -> Self {
        NelderMeadConfig {
            reflection: T::one(),
            expansion: T::real(2.0),
            contraction: T::real(0.5),
            shrink: T::real(0.5),
            max_evals: 10_000,
            x_tol: T::real(1e-8),
            f_tol: T::real(1e-12),
            initial_step: InitialStep::Uniform(initial_step),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if dim == 0 {
            return Err(Error::Config("objective needs at least one coordinate".into()));
        }
        if !(self.reflection > T::zero()) {
            return Err(Error::Config("reflection coefficient must be positive".into()));
        }
        if !(self.expansion > T::one().max(self.reflection)) {
            return Err(Error::Config(
                "expansion coefficient must exceed max(1, reflection)".into(),
            ));
        }
        if !(self.contraction > T::zero() && self.contraction < T::one()) {
            return Err(Error::Config("contraction coefficient must lie in (0, 1)".into()));
        }
        if !(self.shrink > T::zero() && self.shrink < T::one()) {
            return Err(Error::Config("shrink coefficient must lie in (0, 1)".into()));
        }
        if self.max_evals == 0 {
            return Err(Error::Config("evaluation budget must be positive".into()));
        }
        if !(self.x_tol > T::zero()) || !(self.f_tol > T::zero()) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        self.initial_step.validate(dim)
    }
}

/// Restart policy for the iterated wrapper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct IteratedConfig<T> {
    pub max_restarts: usize,
    /// Stop once a restart improves on its predecessor by less than this.
    pub restart_improvement_tol: T,
    pub inner: NelderMeadConfig<T>,
}

impl<T: Real> IteratedConfig<T> {
    pub fn standard(initial_step: T) -> Self {
        IteratedConfig {
            max_restarts: 10,
            restart_improvement_tol: T::real(1e-9),
            inner: NelderMeadConfig::standard(initial_step),
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.max_restarts == 0 {
            return Err(Error::Config("max_restarts must be at least one".into()));
        }
        if !(self.restart_improvement_tol > T::zero()) {
            return Err(Error::Config("restart improvement tolerance must be positive".into()));
        }
        self.inner.validate(dim)
    }
}

/// Why a search stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    MaxRestarts,
    MaxEvals,
}

/// One entry of the improvement trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct TracePoint<T> {
    pub restart: usize,
    pub eval: usize,
    pub best_value: T,
}

/// Summary of one restart: evaluations it used and the best value known
/// once it finished.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct RestartRecord<T> {
    pub restart: usize,
    pub evals: usize,
    pub value: T,
}

/// Outcome of a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct OptResult<T> {
    pub best_point: Vec<T>,
    pub best_value: T,
    pub evals: usize,
    pub restarts: usize,
    pub termination: Termination,
    /// Best-so-far after each restart; non-increasing.
    pub restart_trace: Vec<RestartRecord<T>>,
    /// Every improvement of the best-so-far value.
    pub trace: Vec<TracePoint<T>>,
}

impl<T: Real> OptResult<T> {
    /// CSV rendering of the improvement trace: `restart,eval,best_value`.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("restart,eval,best_value\n");
        for p in &self.trace {
            writeln!(out, "{},{},{}", p.restart, p.eval, p.best_value).expect("string write");
        }
        out
    }
}

struct Evaluator<'a, T, F> {
    f: &'a mut F,
    evals: usize,
    restart: usize,
    best_value: T,
    best_point: Vec<T>,
    trace: Vec<TracePoint<T>>,
}

impl<'a, T: Real, F: FnMut(&[T]) -> T> Evaluator<'a, T, F> {
    fn new(f: &'a mut F) -> Self {
        Evaluator {
            f,
            evals: 0,
            restart: 0,
            best_value: T::infinity(),
            best_point: Vec::new(),
            trace: Vec::new(),
        }
    }

    fn eval(&mut self, x: &[T]) -> T {
        let raw = (self.f)(x);
        let v = if raw.is_finite() {
            raw
        } else {
            T::real(SENTINEL_WORST)
        };
        self.evals += 1;
        if v < self.best_value {
            self.best_value = v;
            self.best_point = x.to_vec();
            self.trace.push(TracePoint {
                restart: self.restart,
                eval: self.evals,
                best_value: v,
            });
        }
        v
    }
}

struct Vertex<T> {
    x: Vec<T>,
    f: T,
    age: u64,
}

/// Order best-to-worst; equal values rank the older vertex first.
fn sort_vertices<T: Real>(vertices: &mut [Vertex<T>]) {
    vertices.sort_by(|a, b| {
        a.f.partial_cmp(&b.f)
            .expect("objective values are never NaN here")
            .then(a.age.cmp(&b.age))
    });
}

/// One Nelder-Mead run from `x0` with a fresh full-size simplex. Returns
/// the best vertex of the run and why it stopped.
fn run_simplex<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<'_, T, F>,
    x0: &[T],
    cfg: &NelderMeadConfig<T>,
) -> (Vec<T>, T, Termination) {
    let d = x0.len();
    let budget_start = ev.evals;
    let mut next_age = 0u64;
    let mut vertices: Vec<Vertex<T>> = Vec::with_capacity(d + 1);
    let mut push = |vertices: &mut Vec<Vertex<T>>, ev: &mut Evaluator<'_, T, F>, x: Vec<T>| {
        let f = ev.eval(&x);
        vertices.push(Vertex { x, f, age: next_age });
        next_age += 1;
    };
    push(&mut vertices, ev, x0.to_vec());
    for j in 0..d {
        let mut x = x0.to_vec();
        x[j] = x[j] + cfg.initial_step.step(j);
        push(&mut vertices, ev, x);
    }

    let mut coord_sum: Vec<T> = (0..d)
        .map(|j| {
            vertices
                .iter()
                .fold(T::zero(), |acc, v| acc + v.x[j])
        })
        .collect();

    let dim_t = T::from_count(d);
    loop {
        sort_vertices(&mut vertices);

        let spread = vertices[d].f - vertices[0].f;
        let diameter = vertices[1..].iter().fold(T::zero(), |acc, v| {
            let dist = v
                .x
                .iter()
                .zip(&vertices[0].x)
                .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
            acc.max(dist)
        });
        if diameter < cfg.x_tol && spread < cfg.f_tol {
            return (vertices[0].x.clone(), vertices[0].f, Termination::Converged);
        }
        if ev.evals - budget_start >= cfg.max_evals {
            return (vertices[0].x.clone(), vertices[0].f, Termination::MaxEvals);
        }

        let worst = &vertices[d];
        let centroid: Vec<T> = coord_sum
            .iter()
            .zip(&worst.x)
            .map(|(&sum, &w)| (sum - w) / dim_t)
            .collect();
        let towards = |coeff: T| -> Vec<T> {
            centroid
                .iter()
                .zip(&worst.x)
                .map(|(&c, &w)| c + coeff * (c - w))
                .collect()
        };

        let reflected = towards(cfg.reflection);
        let f_reflected = ev.eval(&reflected);

        let replacement = if f_reflected < vertices[0].f {
            let expanded = towards(cfg.expansion * cfg.reflection);
            let f_expanded = ev.eval(&expanded);
            if f_expanded < f_reflected {
                Some((expanded, f_expanded))
            } else {
                Some((reflected, f_reflected))
            }
        } else if f_reflected < vertices[d - 1].f {
            Some((reflected, f_reflected))
        } else if f_reflected < vertices[d].f {
            // outside contraction
            let point = towards(cfg.contraction * cfg.reflection);
            let value = ev.eval(&point);
            if value <= f_reflected {
                Some((point, value))
            } else {
                None
            }
        } else {
            // inside contraction
            let point = towards(-cfg.contraction);
            let value = ev.eval(&point);
            if value < vertices[d].f {
                Some((point, value))
            } else {
                None
            }
        };

        match replacement {
            Some((x, f)) => {
                for (sum, (new, old)) in coord_sum.iter_mut().zip(x.iter().zip(&vertices[d].x)) {
                    *sum = *sum + *new - *old;
                }
                vertices[d] = Vertex { x, f, age: next_age };
                next_age += 1;
            }
            None => {
                // shrink every non-best vertex toward the best
                let best = vertices[0].x.clone();
                for v in vertices[1..].iter_mut() {
                    for (xj, bj) in v.x.iter_mut().zip(&best) {
                        *xj = *bj + cfg.shrink * (*xj - *bj);
                    }
                    v.f = ev.eval(&v.x);
                    v.age = next_age;
                    next_age += 1;
                }
                for (j, sum) in coord_sum.iter_mut().enumerate() {
                    *sum = vertices.iter().fold(T::zero(), |acc, v| acc + v.x[j]);
                }
            }
        }
    }
}

/// Minimize `f` from `x0` with one Nelder-Mead run.
///
/// The returned value never exceeds `f(x0)`; non-finite objective values are
/// treated as [`SENTINEL_WORST`] and never propagate.
pub fn nelder_mead<T: Real, F: FnMut(&[T]) -> T>(
    mut f: F,
    x0: &[T],
    cfg: &NelderMeadConfig<T>,
) -> Result<OptResult<T>> {
    cfg.validate(x0.len())?;
    check_start(x0)?;
    let mut ev = Evaluator::new(&mut f);
    let (_, _, termination) = run_simplex(&mut ev, x0, cfg);
    let record = RestartRecord {
        restart: 0,
        evals: ev.evals,
        value: ev.best_value,
    };
    Ok(OptResult {
        best_point: ev.best_point,
        best_value: ev.best_value,
        evals: ev.evals,
        restarts: 1,
        termination,
        restart_trace: vec![record],
        trace: ev.trace,
    })
}

/// Repeat Nelder-Mead, each time re-seeding a fresh full-size simplex at the
/// previous local optimum; stop when a restart improves on its predecessor
/// by less than the configured tolerance or the restart cap is hit.
pub fn iterated_nelder_mead<T: Real, F: FnMut(&[T]) -> T>(
    mut f: F,
    x0: &[T],
    cfg: &IteratedConfig<T>,
) -> Result<OptResult<T>> {
    cfg.validate(x0.len())?;
    check_start(x0)?;
    let mut ev = Evaluator::new(&mut f);
    let mut cur = x0.to_vec();
    let mut restart_trace = Vec::with_capacity(cfg.max_restarts);
    let mut prev_value: Option<T> = None;
    let mut termination = Termination::MaxRestarts;
    for r in 0..cfg.max_restarts {
        ev.restart = r;
        let before = ev.evals;
        let (point, value, _) = run_simplex(&mut ev, &cur, &cfg.inner);
        restart_trace.push(RestartRecord {
            restart: r,
            evals: ev.evals - before,
            value: ev.best_value,
        });
        cur = point;
        if let Some(prev) = prev_value {
            if prev - value < cfg.restart_improvement_tol {
                termination = Termination::Converged;
                break;
            }
        }
        prev_value = Some(value);
    }
    let restarts = restart_trace.len();
    Ok(OptResult {
        best_point: ev.best_point,
        best_value: ev.best_value,
        evals: ev.evals,
        restarts,
        termination,
        restart_trace,
        trace: ev.trace,
    })
}

/// Outcome of a multi-start search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real"))]
pub struct MultiStartResult<T> {
    /// Result of the winning start.
    pub best: OptResult<T>,
    /// Index of the winning start (ties go to the lower index).
    pub best_start: usize,
    /// Best value reached from each start.
    pub per_start: Vec<T>,
}

/// Run the iterated search independently from every start (in parallel) and
/// keep the global best. Deterministic for a fixed start list.
pub fn multi_start<T, F>(
    f: &F,
    starts: &[Vec<T>],
    cfg: &IteratedConfig<T>,
) -> Result<MultiStartResult<T>>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
{
    if starts.is_empty() {
        return Err(Error::Config("multi-start needs at least one start".into()));
    }
    let dim = starts[0].len();
    for s in starts {
        if s.len() != dim {
            return Err(Error::Arity {
                expected: dim,
                got: s.len(),
            });
        }
    }
    cfg.validate(dim)?;
    let results: Vec<OptResult<T>> = starts
        .par_iter()
        .map(|x0| iterated_nelder_mead(|x| f(x), x0, cfg))
        .collect::<Result<_>>()?;
    let per_start: Vec<T> = results.iter().map(|r| r.best_value).collect();
    let mut best_start = 0;
    for (j, value) in per_start.iter().enumerate() {
        if *value < per_start[best_start] {
            best_start = j;
        }
    }
    let best = results.into_iter().nth(best_start).expect("start exists");
    Ok(MultiStartResult {
        best,
        best_start,
        per_start,
    })
}

fn check_start<T: Real>(x0: &[T]) -> Result<()> {
    for v in x0 {
        if !v.is_finite() {
            return Err(Error::Domain(format!("start coordinate {v} is not finite")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn quadratic_1d(x: &[f64]) -> f64 {
        (x[0] - 1.0) * (x[0] - 1.0)
    }

    fn rosenbrock(x: &[f64]) -> f64 {
        let (a, b) = (1.0, 100.0);
        (a - x[0]).powi(2) + b * (x[1] - x[0] * x[0]).powi(2)
    }

    /// Two basins: a global one at 0 and a shallower local one at 5.
    pub fn staircase(x: &[f64]) -> f64 {
        let left = x[0] * x[0];
        let right = (x[0] - 5.0) * (x[0] - 5.0) + 0.5;
        left.min(right)
    }

    #[test]
    fn quadratic_minimum_is_found() {
        let cfg = NelderMeadConfig::standard(0.5);
        let res = nelder_mead(quadratic_1d, &[0.0], &cfg).unwrap();
        assert!((res.best_point[0] - 1.0).abs() < 1e-6);
        assert_eq!(res.termination, Termination::Converged);
    }

    #[test]
    fn rosenbrock_minimum_is_found() {
        let mut cfg = NelderMeadConfig::standard(0.5);
        cfg.max_evals = 5000;
        cfg.x_tol = 1e-9;
        cfg.f_tol = 1e-15;
        let res = nelder_mead(rosenbrock, &[-1.2, 1.0], &cfg).unwrap();
        assert!((res.best_point[0] - 1.0).abs() < 1e-4, "{:?}", res.best_point);
        assert!((res.best_point[1] - 1.0).abs() < 1e-4, "{:?}", res.best_point);
    }

    #[test]
    fn starting_at_the_minimum_never_worsens() {
        let cfg = NelderMeadConfig::standard(0.3);
        let res = nelder_mead(quadratic_1d, &[1.0], &cfg).unwrap();
        assert!(res.best_value <= quadratic_1d(&[1.0]));
    }

    #[test]
    fn no_worsening_on_random_quadratics() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(99);
        let mut cfg = NelderMeadConfig::standard(0.7);
        cfg.max_evals = 400;
        for _ in 0..100 {
            let d = rng.random_range(1..=5usize);
            let center: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
            let scale: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..10.0)).collect();
            let c = center.clone();
            let sc = scale.clone();
            let f = move |x: &[f64]| {
                x.iter()
                    .zip(&c)
                    .zip(&sc)
                    .map(|((xi, ci), si)| si * (xi - ci) * (xi - ci))
                    .sum()
            };
            let x0: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..3.0)).collect();
            let start_value = f(&x0);
            let res = nelder_mead(f, &x0, &cfg).unwrap();
            assert!(res.best_value <= start_value);
        }
    }

    #[test]
    fn non_finite_values_are_sentineled() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 {
                f64::NAN
            } else {
                (x[0] - 2.0) * (x[0] - 2.0)
            }
        };
        let cfg = NelderMeadConfig::standard(1.0);
        let res = nelder_mead(f, &[0.5], &cfg).unwrap();
        assert!(res.best_value.is_finite());
        assert!((res.best_point[0] - 2.0).abs() < 1e-5);
    }

    #[test]
    fn constant_objective_returns_the_oldest_vertex() {
        // with every value tied, age ordering keeps x0 ranked best
        let cfg = NelderMeadConfig::standard(1.0);
        let res = nelder_mead(|_: &[f64]| 3.5, &[4.0, -2.0], &cfg).unwrap();
        assert_eq!(res.best_point, vec![4.0, -2.0]);
        assert_eq!(res.best_value, 3.5);
    }

    #[test]
    fn translation_equivariance_within_tolerance() {
        let c = 17.25;
        let cfg = NelderMeadConfig::standard(0.5);
        let base = nelder_mead(quadratic_1d, &[0.0], &cfg).unwrap();
        let shifted = nelder_mead(|x: &[f64]| quadratic_1d(&[x[0] - c]), &[c], &cfg).unwrap();
        assert_relative_eq!(shifted.best_point[0], base.best_point[0] + c, epsilon = 1e-5);
    }

    #[test]
    fn evaluation_budget_is_respected() {
        let mut cfg = IteratedConfig::standard(1.0);
        cfg.inner.max_evals = 50;
        cfg.inner.x_tol = 1e-300; // keep every restart running to its budget
        cfg.inner.f_tol = 1e-300;
        cfg.restart_improvement_tol = 1e-300;
        cfg.max_restarts = 7;
        let d = 3;
        let res = iterated_nelder_mead(
            |x: &[f64]| x.iter().map(|v| v * v).sum(),
            &[1.0, 2.0, 3.0],
            &cfg,
        )
        .unwrap();
        assert!(res.evals <= cfg.max_restarts * (cfg.inner.max_evals + d + 1));
        for rec in &res.restart_trace {
            assert!(rec.evals <= cfg.inner.max_evals + d + 1);
        }
    }

    #[test]
    fn convex_objective_stops_after_two_restarts() {
        let mut cfg = IteratedConfig::standard(0.5);
        cfg.max_restarts = 50;
        cfg.restart_improvement_tol = 1e-7;
        let res = iterated_nelder_mead(quadratic_1d, &[0.0], &cfg).unwrap();
        assert_eq!(res.restarts, 2);
        assert_eq!(res.termination, Termination::Converged);
    }

    #[test]
    fn restart_trace_is_non_increasing() {
        let mut cfg = IteratedConfig::standard(2.0);
        cfg.max_restarts = 6;
        cfg.restart_improvement_tol = 1e-12;
        cfg.inner.max_evals = 60;
        let res = iterated_nelder_mead(rosenbrock, &[-1.2, 1.0], &cfg).unwrap();
        for w in res.restart_trace.windows(2) {
            assert!(w[1].value <= w[0].value);
        }
        for w in res.trace.windows(2) {
            assert!(w[1].best_value < w[0].best_value);
        }
    }

    #[test]
    fn restarts_rebuild_a_full_size_simplex() {
        use std::cell::RefCell;
        // log every evaluated point, then check that each restart's first
        // D + 1 evaluations form a fresh axis-aligned simplex of full size
        let log: RefCell<Vec<Vec<f64>>> = RefCell::new(Vec::new());
        let mut cfg = IteratedConfig::standard(2.0);
        cfg.max_restarts = 3;
        cfg.restart_improvement_tol = 1e-300;
        cfg.inner.max_evals = 80;
        let res = iterated_nelder_mead(
            |x: &[f64]| {
                log.borrow_mut().push(x.to_vec());
                rosenbrock(x)
            },
            &[-1.2, 1.0],
            &cfg,
        )
        .unwrap();
        let log = log.into_inner();
        let d = 2;
        let mut offset = 0;
        for rec in &res.restart_trace {
            let base = &log[offset];
            for j in 0..d {
                let vertex = &log[offset + 1 + j];
                for (axis, (v, b)) in vertex.iter().zip(base).enumerate() {
                    let expected = if axis == j { 2.0 } else { 0.0 };
                    assert_relative_eq!(v - b, expected, epsilon = 1e-12);
                }
            }
            offset += rec.evals;
        }
    }

    #[test]
    fn iterated_escapes_the_two_basin_staircase() {
        // a small-step single run walks downhill into the local basin at 5
        let mut small = NelderMeadConfig::standard(0.1);
        small.max_evals = 4000;
        let local = nelder_mead(staircase, &[6.0], &small).unwrap();
        assert!(
            (local.best_point[0] - 5.0).abs() < 1e-3,
            "expected the local basin, got {:?}",
            local.best_point
        );

        // restarts with a full-size simplex probe far enough to cross over
        let mut cfg = IteratedConfig::standard(4.5);
        cfg.max_restarts = 8;
        cfg.restart_improvement_tol = 1e-9;
        cfg.inner.max_evals = 4000;
        let global = iterated_nelder_mead(staircase, &[6.0], &cfg).unwrap();
        assert!(
            global.best_point[0].abs() < 1e-3,
            "expected the global basin, got {:?}",
            global.best_point
        );
        assert!(global.restarts >= 2, "escape should need a restart");
    }

    #[test]
    fn multi_start_returns_the_global_best() {
        let mut cfg = IteratedConfig::standard(0.5);
        cfg.max_restarts = 4;
        let starts = vec![vec![-1.0], vec![6.0]];
        let res = multi_start(&staircase, &starts, &cfg).unwrap();
        assert!(res.best.best_point[0].abs() < 1e-4);
        assert_eq!(res.best_start, 0);
        assert_eq!(res.per_start.len(), 2);
        assert!(res.per_start[0] <= res.per_start[1]);

        let single = multi_start(&staircase, &starts[..1].to_vec(), &cfg).unwrap();
        let direct = iterated_nelder_mead(staircase, &starts[0], &cfg).unwrap();
        assert_eq!(single.best, direct);
    }

    #[test]
    fn config_validation_rejects_bad_coefficients() {
        let mut cfg = NelderMeadConfig::standard(0.5);
        cfg.expansion = 0.9;
        assert!(cfg.validate(2).is_err());
        let mut cfg = NelderMeadConfig::standard(0.5);
        cfg.contraction = 1.0;
        assert!(cfg.validate(2).is_err());
        let cfg = NelderMeadConfig::<f64>::standard(0.0);
        assert!(cfg.validate(2).is_err());
        let mut cfg = NelderMeadConfig::<f64>::standard(1.0);
        cfg.initial_step = InitialStep::PerCoordinate(vec![1.0]);
        assert!(cfg.validate(2).is_err());
    }

    #[test]
    fn trace_csv_has_the_expected_shape() {
        let cfg = NelderMeadConfig::standard(0.5);
        let res = nelder_mead(quadratic_1d, &[0.0], &cfg).unwrap();
        let csv = res.trace_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "restart,eval,best_value");
        assert!(lines.count() >= 1);
    }
}
