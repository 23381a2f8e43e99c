//! SIR and SIRQ compartmental models with forward-Euler integration on a
//! fixed time grid of piecewise-constant rates.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::Real;

/// Compartmental model family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Susceptible-Infectious-Removed.
    Sir,
    /// SIR plus a cumulative Quarantined compartment fed from I.
    Sirq,
}

impl ModelKind {
    /// Number of compartments.
    pub fn compartments(self) -> usize {
        match self {
            ModelKind::Sir => 3,
            ModelKind::Sirq => 4,
        }
    }

    /// Dynamic rates of the model, in canonical order.
    pub fn parameters(self) -> &'static [ParamName] {
        match self {
            ModelKind::Sir => &[ParamName::Beta, ParamName::Gamma],
            ModelKind::Sirq => &[ParamName::Beta, ParamName::Gamma, ParamName::Delta],
        }
    }

    /// Number of dynamic rates.
    pub fn arity(self) -> usize {
        self.parameters().len()
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Sir => f.write_str("sir"),
            ModelKind::Sirq => f.write_str("sirq"),
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sir" | "SIR" => Ok(ModelKind::Sir),
            "sirq" | "SIRQ" => Ok(ModelKind::Sirq),
            other => Err(Error::Parse(format!("unknown model kind `{other}`"))),
        }
    }
}

/// Identifier of one dynamic rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamName {
    /// Transmission rate.
    Beta,
    /// Removal rate.
    Gamma,
    /// Quarantine rate (SIRQ only).
    Delta,
}

impl ParamName {
    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::Beta => "beta",
            ParamName::Gamma => "gamma",
            ParamName::Delta => "delta",
        }
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "beta" => Ok(ParamName::Beta),
            "gamma" => Ok(ParamName::Gamma),
            "delta" => Ok(ParamName::Delta),
            other => Err(Error::Parse(format!("unknown parameter `{other}`"))),
        }
    }
}

/// Compartment occupancies at one time instant. `q` is present iff the
/// state belongs to a SIRQ model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: serde::Deserialize<'de>"))]
pub struct StateVector<T> {
    pub s: T,
    pub i: T,
    pub r: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<T>,
}

impl<T: Real> StateVector<T> {
    pub fn sir(s: T, i: T, r: T) -> Result<Self> {
        Self::checked(s, i, r, None)
    }

    pub fn sirq(s: T, i: T, r: T, q: T) -> Result<Self> {
        Self::checked(s, i, r, Some(q))
    }

    fn checked(s: T, i: T, r: T, q: Option<T>) -> Result<Self> {
        for v in [Some(s), Some(i), Some(r), q].into_iter().flatten() {
            if !(v >= T::zero()) {
                return Err(Error::Domain(format!(
                    "compartment value {v} is negative or non-finite"
                )));
            }
        }
        Ok(StateVector { s, i, r, q })
    }

    /// Model family this state belongs to.
    pub fn kind(&self) -> ModelKind {
        if self.q.is_some() {
            ModelKind::Sirq
        } else {
            ModelKind::Sir
        }
    }

    /// Total population held by the state.
    pub fn total(&self) -> T {
        let base = self.s + self.i + self.r;
        match self.q {
            Some(q) => base + q,
            None => base,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.s.is_finite()
            && self.i.is_finite()
            && self.r.is_finite()
            && self.q.map_or(true, |q| q.is_finite())
    }
}

/// Instantaneous flow rates, one entry per compartment. The infectious
/// component absorbs the negated sum of the others, so
/// `(ds + dr + dq) + di` cancels exactly even in floating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateVector<T> {
    pub ds: T,
    pub di: T,
    pub dr: T,
    pub dq: Option<T>,
}

/// Uniform time grid over which rates are piecewise constant. Each grid
/// step is refined into `substeps_per_step` Euler substeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid<T> {
    pub t0: T,
    pub horizon: T,
    pub n_steps: usize,
    pub substeps_per_step: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t0: T, horizon: T, n_steps: usize, substeps_per_step: usize) -> Result<Self> {
        let grid = TimeGrid {
            t0,
            horizon,
            n_steps,
            substeps_per_step,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 {
            return Err(Error::Config("n_steps must be positive".into()));
        }
        if self.substeps_per_step == 0 {
            return Err(Error::Config("substeps_per_step must be positive".into()));
        }
        let width = self.horizon - self.t0;
        if !(width > T::zero()) || !width.is_finite() {
            return Err(Error::Config(format!(
                "horizon {} must exceed t0 {}",
                self.horizon, self.t0
            )));
        }
        Ok(())
    }

    /// Width of one grid step.
    pub fn step(&self) -> T {
        (self.horizon - self.t0) / T::from_count(self.n_steps)
    }

    /// Time at grid node `k` (0 ..= n_steps).
    pub fn node(&self, k: usize) -> T {
        self.t0 + self.step() * T::from_count(k)
    }

    /// Index of the grid node nearest to `t`, ties resolved toward the
    /// earlier node. `t` must lie within the grid (up to rounding slack).
    pub fn nearest_node(&self, t: T) -> Result<usize> {
        let x = (t - self.t0) / self.step();
        let n = T::from_count(self.n_steps);
        let slack = T::real(1e-6);
        if !(x >= -slack && x <= n + slack) {
            return Err(Error::Domain(format!(
                "time {t} lies outside the grid [{}, {}]",
                self.t0, self.horizon
            )));
        }
        // ceil(x - 1/2) rounds half-integers down, i.e. toward the earlier node
        let idx = (x - T::real(0.5)).ceil().max(T::zero()).min(n);
        Ok(idx.to_usize().expect("node index fits in usize"))
    }
}

/// Per-rate value sequence: one value (constant over the grid) or one value
/// per grid step (time-varying).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterPath<T> {
    pub name: ParamName,
    values: Vec<T>,
}

impl<T: Real> ParameterPath<T> {
    pub fn constant(name: ParamName, value: T) -> Result<Self> {
        Self::new(name, vec![value])
    }

    pub fn varying(name: ParamName, values: Vec<T>) -> Result<Self> {
        Self::new(name, values)
    }

    pub fn new(name: ParamName, values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config(format!("{name} path needs at least one value")));
        }
        for &v in &values {
            if !(v >= T::zero()) {
                return Err(Error::Domain(format!(
                    "{name} value {v} is negative or NaN"
                )));
            }
        }
        Ok(ParameterPath { name, values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.len() == 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Rate value in force during grid step `k`.
    pub fn value_at_step(&self, k: usize) -> T {
        if self.values.len() == 1 {
            self.values[0]
        } else {
            self.values[k]
        }
    }

    /// One value per grid step, with constants repeated.
    pub fn expanded(&self, n_steps: usize) -> Vec<T> {
        (0..n_steps).map(|k| self.value_at_step(k)).collect()
    }

    fn check_grid(&self, grid: &TimeGrid<T>) -> Result<()> {
        if self.values.len() != 1 && self.values.len() != grid.n_steps {
            return Err(Error::Arity {
                expected: grid.n_steps,
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Integrated state sequence over a grid, one state per node (the first
/// entry is the initial condition).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub grid: TimeGrid<T>,
    pub states: Vec<StateVector<T>>,
}

impl<T: Real> Trajectory<T> {
    pub fn kind(&self) -> ModelKind {
        self.states[0].kind()
    }

    /// Constant total population (taken from the initial state).
    pub fn population(&self) -> T {
        self.states[0].total()
    }

    /// CSV rendering: header `t,S,I,R[,Q]`, one row per grid node.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self.kind() {
            ModelKind::Sir => out.push_str("t,S,I,R\n"),
            ModelKind::Sirq => out.push_str("t,S,I,R,Q\n"),
        }
        for (k, st) in self.states.iter().enumerate() {
            let t = self.grid.node(k);
            match st.q {
                Some(q) => writeln!(out, "{t},{},{},{},{q}", st.s, st.i, st.r),
                None => writeln!(out, "{t},{},{},{}", st.s, st.i, st.r),
            }
            .expect("string write");
        }
        out
    }

    /// Parse the `to_csv` format back. The grid's substep count is not part
    /// of the file; `substeps_per_step` restores it.
    pub fn from_csv(text: &str, substeps_per_step: usize) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty trajectory CSV".into()))?;
        let has_q = match header {
            "t,S,I,R" => false,
            "t,S,I,R,Q" => true,
            other => return Err(Error::Parse(format!("bad trajectory header `{other}`"))),
        };
        let mut times = Vec::new();
        let mut states = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let expected = if has_q { 5 } else { 4 };
            if fields.len() != expected {
                return Err(Error::Parse(format!("bad trajectory row `{line}`")));
            }
            let num = |s: &str| -> Result<T> {
                s.parse::<f64>()
                    .map(T::real)
                    .map_err(|e| Error::Parse(format!("bad number `{s}`: {e}")))
            };
            times.push(num(fields[0])?);
            let q = if has_q { Some(num(fields[4])?) } else { None };
            states.push(StateVector {
                s: num(fields[1])?,
                i: num(fields[2])?,
                r: num(fields[3])?,
                q,
            });
        }
        if states.len() < 2 {
            return Err(Error::Parse("trajectory CSV needs at least two rows".into()));
        }
        let grid = TimeGrid::new(
            times[0],
            times[times.len() - 1],
            states.len() - 1,
            substeps_per_step,
        )?;
        Ok(Trajectory { grid, states })
    }
}

/// Instantaneous ODE right-hand side at one state, with the rate values in
/// canonical order (beta, gamma[, delta]).
pub fn derivative<T: Real>(
    kind: ModelKind,
    state: &StateVector<T>,
    params: &[T],
) -> Result<RateVector<T>> {
    if params.len() != kind.arity() {
        return Err(Error::Arity {
            expected: kind.arity(),
            got: params.len(),
        });
    }
    if state.kind() != kind {
        return Err(Error::Arity {
            expected: kind.compartments(),
            got: state.kind().compartments(),
        });
    }
    for &p in params {
        if !(p >= T::zero()) {
            return Err(Error::Domain(format!("rate {p} is negative or NaN")));
        }
    }
    let n = state.total();
    let infection = if n > T::zero() {
        params[0] * state.s * state.i / n
    } else {
        T::zero()
    };
    let removal = params[1] * state.i;
    let (dq, quarantine) = match kind {
        ModelKind::Sir => (None, T::zero()),
        ModelKind::Sirq => {
            let q = params[2] * state.i;
            (Some(q), q)
        }
    };
    let ds = -infection;
    let dr = removal;
    let di = -(ds + dr + quarantine);
    Ok(RateVector { ds, di, dr, dq })
}

/// Forward-Euler integration with rates held constant within each grid step.
///
/// A compartment pushed below zero by a substep has its outflows scaled back
/// proportionally so the state stays non-negative while the population is
/// conserved.
pub fn integrate<T: Real>(
    kind: ModelKind,
    init: &StateVector<T>,
    paths: &[ParameterPath<T>],
    grid: &TimeGrid<T>,
) -> Result<Trajectory<T>> {
    grid.validate()?;
    if init.kind() != kind {
        return Err(Error::Arity {
            expected: kind.compartments(),
            got: init.kind().compartments(),
        });
    }
    if paths.len() != kind.arity() {
        return Err(Error::Arity {
            expected: kind.arity(),
            got: paths.len(),
        });
    }
    let find = |name: ParamName| -> Result<&ParameterPath<T>> {
        paths
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::Config(format!("missing {name} path")))
    };
    let beta = find(ParamName::Beta)?;
    let gamma = find(ParamName::Gamma)?;
    let delta = match kind {
        ModelKind::Sir => None,
        ModelKind::Sirq => Some(find(ParamName::Delta)?),
    };
    for p in paths {
        p.check_grid(grid)?;
    }

    let population = init.total();
    let dt = grid.step() / T::from_count(grid.substeps_per_step);
    let mut states = Vec::with_capacity(grid.n_steps + 1);
    states.push(*init);
    let mut cur = *init;
    for k in 0..grid.n_steps {
        let b = beta.value_at_step(k);
        let g = gamma.value_at_step(k);
        let d = delta.map(|p| p.value_at_step(k));
        for _ in 0..grid.substeps_per_step {
            cur = euler_substep(&cur, population, b, g, d, dt);
        }
        if !cur.is_finite() {
            return Err(Error::IntegrationOverflow { step: k });
        }
        states.push(cur);
    }
    Ok(Trajectory { grid: *grid, states })
}

/// One Euler substep expressed as compartment transfers, so the population
/// is conserved by construction.
fn euler_substep<T: Real>(
    cur: &StateVector<T>,
    population: T,
    beta: T,
    gamma: T,
    delta: Option<T>,
    dt: T,
) -> StateVector<T> {
    let zero = T::zero();
    let infection = if population > zero {
        beta * cur.s * cur.i / population
    } else {
        zero
    };
    let mut t_si = infection * dt;
    if t_si > cur.s {
        t_si = cur.s; // outflow capped at the stock; NaN falls through to the overflow check
    }
    let f_ir = gamma * cur.i * dt;
    let f_iq = match delta {
        Some(d) => d * cur.i * dt,
        None => zero,
    };
    let out = f_ir + f_iq;
    let avail = cur.i + t_si;
    let (t_ir, t_iq) = if out > avail {
        // scale both outflows by the same factor so I lands exactly on zero
        let t_ir = f_ir / out * avail;
        (t_ir, avail - t_ir)
    } else {
        (f_ir, f_iq)
    };
    let s = cur.s - t_si;
    let mut i = cur.i + t_si - t_ir - t_iq;
    if i < zero {
        i = zero; // absorb the last-ulp rounding of the transfer arithmetic
    }
    StateVector {
        s,
        i,
        r: cur.r + t_ir,
        q: cur.q.map(|q| q + t_iq),
    }
}

/// Basic reproduction number: beta/gamma for SIR and the uncontrolled SIRQ
/// reading, beta/(gamma + delta) for controlled SIRQ.
pub fn basic_reproduction_number<T: Real>(
    kind: ModelKind,
    beta: T,
    gamma: T,
    delta: Option<T>,
    controlled: bool,
) -> Result<T> {
    let denom = match (kind, controlled) {
        (ModelKind::Sirq, true) => {
            let d = delta.ok_or(Error::Arity { expected: 3, got: 2 })?;
            gamma + d
        }
        _ => gamma,
    };
    if !(denom > T::zero()) {
        return Err(Error::Domain(
            "reproduction number needs a positive denominator".into(),
        ));
    }
    Ok(beta / denom)
}

/// Render a full set of model rate paths as CSV, one row per grid step:
/// `t,beta,gamma[,delta]`. Constant paths are expanded.
pub fn parameter_paths_csv<T: Real>(
    kind: ModelKind,
    paths: &[ParameterPath<T>],
    grid: &TimeGrid<T>,
) -> Result<String> {
    let find = |name: ParamName| -> Result<Vec<T>> {
        paths
            .iter()
            .find(|p| p.name == name)
            .map(|p| p.expanded(grid.n_steps))
            .ok_or_else(|| Error::Config(format!("missing {name} path")))
    };
    let beta = find(ParamName::Beta)?;
    let gamma = find(ParamName::Gamma)?;
    let delta = match kind {
        ModelKind::Sir => None,
        ModelKind::Sirq => Some(find(ParamName::Delta)?),
    };
    let mut out = String::new();
    match kind {
        ModelKind::Sir => out.push_str("t,beta,gamma\n"),
        ModelKind::Sirq => out.push_str("t,beta,gamma,delta\n"),
    }
    for k in 0..grid.n_steps {
        let t = grid.node(k);
        match &delta {
            Some(d) => writeln!(out, "{t},{},{},{}", beta[k], gamma[k], d[k]),
            None => writeln!(out, "{t},{},{}", beta[k], gamma[k]),
        }
        .expect("string write");
    }
    Ok(out)
}

/// Parse the `parameter_paths_csv` format. Every returned path is
/// time-varying with one value per row.
pub fn parse_parameter_paths_csv<T: Real>(text: &str) -> Result<Vec<ParameterPath<T>>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty parameter CSV".into()))?;
    let names: Vec<ParamName> = match header {
        "t,beta,gamma" => vec![ParamName::Beta, ParamName::Gamma],
        "t,beta,gamma,delta" => vec![ParamName::Beta, ParamName::Gamma, ParamName::Delta],
        other => return Err(Error::Parse(format!("bad parameter header `{other}`"))),
    };
    let mut columns: Vec<Vec<T>> = vec![Vec::new(); names.len()];
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != names.len() + 1 {
            return Err(Error::Parse(format!("bad parameter row `{line}`")));
        }
        for (col, field) in columns.iter_mut().zip(&fields[1..]) {
            let v = field
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number `{field}`: {e}")))?;
            col.push(T::real(v));
        }
    }
    names
        .into_iter()
        .zip(columns)
        .map(|(name, values)| ParameterPath::varying(name, values))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sir_paths(beta: f64, gamma: f64) -> Vec<ParameterPath<f64>> {
        vec![
            ParameterPath::constant(ParamName::Beta, beta).unwrap(),
            ParameterPath::constant(ParamName::Gamma, gamma).unwrap(),
        ]
    }

    fn sirq_paths(beta: f64, gamma: f64, delta: f64) -> Vec<ParameterPath<f64>> {
        vec![
            ParameterPath::constant(ParamName::Beta, beta).unwrap(),
            ParameterPath::constant(ParamName::Gamma, gamma).unwrap(),
            ParameterPath::constant(ParamName::Delta, delta).unwrap(),
        ]
    }

    #[test]
    fn sir_derivative_matches_hand_evaluation() {
        let st = StateVector::sir(990.0, 10.0, 0.0).unwrap();
        let d = derivative(ModelKind::Sir, &st, &[0.3, 0.03]).unwrap();
        assert_relative_eq!(d.ds, -2.97, max_relative = 1e-12);
        assert_relative_eq!(d.di, 2.67, max_relative = 1e-12);
        assert_relative_eq!(d.dr, 0.3, max_relative = 1e-12);
        assert!(d.dq.is_none());
    }

    #[test]
    fn sirq_derivative_matches_hand_evaluation() {
        let st = StateVector::sirq(990.0, 10.0, 0.0, 0.0).unwrap();
        let d = derivative(ModelKind::Sirq, &st, &[0.3, 0.03, 0.07]).unwrap();
        assert_relative_eq!(d.ds, -2.97, max_relative = 1e-12);
        assert_relative_eq!(d.di, 1.97, max_relative = 1e-12);
        assert_relative_eq!(d.dr, 0.3, max_relative = 1e-12);
        assert_relative_eq!(d.dq.unwrap(), 0.7, max_relative = 1e-12);
    }

    #[test]
    fn zero_rates_give_zero_derivative() {
        let st = StateVector::sir(990.0, 10.0, 0.0).unwrap();
        let d = derivative(ModelKind::Sir, &st, &[0.0, 0.0]).unwrap();
        assert_eq!((d.ds, d.di, d.dr), (0.0, 0.0, 0.0));
    }

    #[test]
    fn derivative_components_balance_exactly() {
        let st = StateVector::sirq(812.5, 131.25, 31.0, 25.25).unwrap();
        let d = derivative(ModelKind::Sirq, &st, &[0.37, 0.11, 0.055]).unwrap();
        // di is defined as the negated sum of the other components
        assert_eq!((d.ds + d.dr + d.dq.unwrap()) + d.di, 0.0);
    }

    #[test]
    fn derivative_rejects_wrong_arity() {
        let st = StateVector::sir(990.0, 10.0, 0.0).unwrap();
        assert!(matches!(
            derivative(ModelKind::Sir, &st, &[0.3, 0.03, 0.07]),
            Err(Error::Arity { expected: 2, got: 3 })
        ));
        let stq = StateVector::sirq(990.0, 10.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            derivative(ModelKind::Sirq, &stq, &[0.3, 0.03]),
            Err(Error::Arity { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn one_euler_step_matches_hand_evaluation() {
        let grid = TimeGrid::new(0.0, 1.0, 1, 1).unwrap();
        let init = StateVector::sir(990.0, 10.0, 0.0).unwrap();
        let traj = integrate(ModelKind::Sir, &init, &sir_paths(0.3, 0.03), &grid).unwrap();
        let last = traj.states[1];
        assert_relative_eq!(last.s, 987.03, max_relative = 1e-12);
        assert_relative_eq!(last.i, 12.67, max_relative = 1e-12);
        assert_relative_eq!(last.r, 0.3, max_relative = 1e-12);
    }

    #[test]
    fn zero_rates_hold_the_state_fixed() {
        let grid = TimeGrid::new(0.0, 50.0, 25, 4).unwrap();
        let init = StateVector::sirq(900.0, 80.0, 15.0, 5.0).unwrap();
        let traj = integrate(ModelKind::Sirq, &init, &sirq_paths(0.0, 0.0, 0.0), &grid).unwrap();
        for st in &traj.states {
            assert_eq!(*st, init);
        }
    }

    #[test]
    fn quarantine_outpaces_removal_when_delta_exceeds_gamma() {
        let grid = TimeGrid::new(0.0, 100.0, 100, 10).unwrap();
        let init = StateVector::sirq(990.0, 10.0, 0.0, 0.0).unwrap();
        let traj = integrate(ModelKind::Sirq, &init, &sirq_paths(0.3, 0.03, 0.07), &grid).unwrap();
        let last = traj.states.last().unwrap();
        assert!(last.q.unwrap() > last.r);
    }

    #[test]
    fn conservation_and_monotonicity_hold() {
        let grid = TimeGrid::new(0.0, 100.0, 100, 10).unwrap();
        let init = StateVector::sirq(990.0, 10.0, 0.0, 0.0).unwrap();
        let traj = integrate(ModelKind::Sirq, &init, &sirq_paths(0.8, 0.05, 0.1), &grid).unwrap();
        let n = traj.population();
        let mut prev = traj.states[0];
        for st in &traj.states[1..] {
            assert!((st.total() - n).abs() <= 1e-9 * n);
            assert!(st.s <= prev.s);
            assert!(st.r >= prev.r);
            assert!(st.q.unwrap() >= prev.q.unwrap());
            assert!(st.s >= 0.0 && st.i >= 0.0);
            prev = *st;
        }
    }

    #[test]
    fn overshoot_is_clamped_with_conservation() {
        // beta*h large enough that a raw Euler step would drive S negative
        let grid = TimeGrid::new(0.0, 10.0, 10, 1).unwrap();
        let init = StateVector::sir(100.0, 900.0, 0.0).unwrap();
        let traj = integrate(ModelKind::Sir, &init, &sir_paths(50.0, 60.0), &grid).unwrap();
        let n = traj.population();
        for st in &traj.states {
            assert!(st.s >= 0.0 && st.i >= 0.0 && st.r >= 0.0);
            assert!((st.total() - n).abs() <= 1e-9 * n);
        }
        // the epidemic burns through: S pinned at zero, everyone removed
        let last = traj.states.last().unwrap();
        assert_eq!(last.s, 0.0);
        assert!(last.r > 0.99 * n);
    }

    #[test]
    fn non_finite_rate_reports_overflow_step() {
        let grid = TimeGrid::new(0.0, 10.0, 10, 1).unwrap();
        let init = StateVector::sir(990.0, 10.0, 0.0).unwrap();
        let paths = sir_paths(0.3, f64::INFINITY);
        match integrate(ModelKind::Sir, &init, &paths, &grid) {
            Err(Error::IntegrationOverflow { step }) => assert_eq!(step, 0),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn refinement_halves_the_euler_error() {
        // global error is O(h): against a fine reference, doubling the
        // substep count should roughly halve the worst-case error
        let init = StateVector::sirq(990.0, 10.0, 0.0, 0.0).unwrap();
        let paths = sirq_paths(0.3, 0.03, 0.07);
        let run = |substeps: usize| {
            let grid = TimeGrid::new(0.0, 100.0, 100, substeps).unwrap();
            integrate(ModelKind::Sirq, &init, &paths, &grid).unwrap()
        };
        let reference = run(1000);
        let err = |traj: &Trajectory<f64>| {
            traj.states
                .iter()
                .zip(&reference.states)
                .map(|(a, b)| {
                    (a.s - b.s)
                        .abs()
                        .max((a.i - b.i).abs())
                        .max((a.r - b.r).abs())
                        .max((a.q.unwrap() - b.q.unwrap()).abs())
                })
                .fold(0.0_f64, f64::max)
        };
        let coarse = err(&run(4));
        let fine = err(&run(8));
        let ratio = fine / coarse;
        assert!(
            (0.4..=0.6).contains(&ratio),
            "refinement ratio {ratio} outside [0.4, 0.6]"
        );
    }

    #[test]
    fn reproduction_number_variants() {
        let r0 = basic_reproduction_number(ModelKind::Sir, 0.3, 0.03, None, false).unwrap();
        assert_relative_eq!(r0, 10.0, max_relative = 1e-12);
        let rc =
            basic_reproduction_number(ModelKind::Sirq, 0.3, 0.03, Some(0.07), true).unwrap();
        assert_relative_eq!(rc, 3.0, max_relative = 1e-12);
        let endemic = basic_reproduction_number(ModelKind::Sir, 0.2, 0.2, None, false).unwrap();
        assert_relative_eq!(endemic, 1.0, max_relative = 1e-12);
        assert!(matches!(
            basic_reproduction_number(ModelKind::Sir, 0.3, 0.0, None, false),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            basic_reproduction_number(ModelKind::Sirq, 0.3, 0.03, None, true),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn nearest_node_snaps_ties_toward_earlier() {
        let grid = TimeGrid::new(0.0, 10.0, 10, 1).unwrap();
        assert_eq!(grid.nearest_node(2.5).unwrap(), 2);
        assert_eq!(grid.nearest_node(2.4).unwrap(), 2);
        assert_eq!(grid.nearest_node(2.6).unwrap(), 3);
        assert_eq!(grid.nearest_node(0.0).unwrap(), 0);
        assert_eq!(grid.nearest_node(10.0).unwrap(), 10);
        assert!(grid.nearest_node(10.7).is_err());
        assert!(grid.nearest_node(-0.7).is_err());
    }

    #[test]
    fn trajectory_csv_round_trips() {
        let grid = TimeGrid::new(0.0, 30.0, 30, 10).unwrap();
        let init = StateVector::sirq(990.0, 10.0, 0.0, 0.0).unwrap();
        let traj = integrate(ModelKind::Sirq, &init, &sirq_paths(0.3, 0.03, 0.07), &grid).unwrap();
        let csv = traj.to_csv();
        let parsed = Trajectory::<f64>::from_csv(&csv, grid.substeps_per_step).unwrap();
        assert_eq!(parsed, traj);
        assert_eq!(parsed.to_csv(), csv);
    }

    #[test]
    fn parameter_csv_round_trips_expanded() {
        let grid = TimeGrid::new(0.0, 10.0, 5, 1).unwrap();
        let paths = vec![
            ParameterPath::varying(ParamName::Beta, vec![0.3, 0.3, 0.1, 0.1, 0.1]).unwrap(),
            ParameterPath::constant(ParamName::Gamma, 0.05).unwrap(),
        ];
        let csv = parameter_paths_csv(ModelKind::Sir, &paths, &grid).unwrap();
        let parsed = parse_parameter_paths_csv::<f64>(&csv).unwrap();
        assert_eq!(parsed[0].values(), paths[0].values());
        assert_eq!(parsed[1].values(), &[0.05; 5]);
        assert_eq!(parameter_paths_csv(ModelKind::Sir, &parsed, &grid).unwrap(), csv);
    }

    #[test]
    fn paths_reject_negative_values() {
        assert!(ParameterPath::constant(ParamName::Beta, -0.1).is_err());
        assert!(ParameterPath::varying(ParamName::Beta, vec![0.1, f64::NAN]).is_err());
        assert!(ParameterPath::<f64>::varying(ParamName::Beta, vec![]).is_err());
    }

    #[test]
    fn generic_scalar_instantiates_at_f32() {
        let grid = TimeGrid::<f32>::new(0.0, 10.0, 10, 2).unwrap();
        let init = StateVector::<f32>::sir(990.0, 10.0, 0.0).unwrap();
        let paths = vec![
            ParameterPath::constant(ParamName::Beta, 0.3_f32).unwrap(),
            ParameterPath::constant(ParamName::Gamma, 0.03_f32).unwrap(),
        ];
        let traj = integrate(ModelKind::Sir, &init, &paths, &grid).unwrap();
        let n = traj.population();
        for st in &traj.states {
            assert!((st.total() - n).abs() <= 1e-4 * n);
        }
    }
}
