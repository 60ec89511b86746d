//! The combinatorial Yamabe flow `dr_i/dt = −K_i r_i`, integrated with
//! fixed-step RK4, rejection and halving near degeneracy, and a termination
//! classifier.

mod config;
mod output;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::Complex;
use crate::curvature::{tet_geometries, CurvatureError, CurvatureField};
use crate::metric::{normalized_q, GeometryError, MetricStructure};
use crate::scalar::Real;

pub use config::FlowConfig;
pub use output::{write_summary_json, write_trajectory_csv, FlowSummary};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("invalid flow configuration: {0}")]
    Config(String),
    #[error("invalid initial data: {0}")]
    InitialData(#[from] CurvatureError),
}

/// Why a trial RK4 step was refused. Ids are external.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum StepRejected {
    #[error("radius of vertex {vertex} left the positive range")]
    Vertex { vertex: usize },
    #[error("tetrahedron {tet:?} reached the degeneracy floor")]
    Tet { tet: [usize; 4] },
}

impl StepRejected {
    fn from_curvature(c: &Complex, e: CurvatureError) -> Self {
        match e {
            CurvatureError::DegenerateTet { tet, source: GeometryError::NonPositiveRadius { .. } } => {
                Self::Vertex { vertex: tet[0] }
            }
            CurvatureError::DegenerateTet { tet, .. } => Self::Tet { tet },
            // sizes are fixed for the whole run
            other => unreachable!("curvature error in a running flow on {} vertices: {other}", c.n_vertices()),
        }
    }
}

/// Outcome of a run. Vertex and tet ids are external.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Termination {
    /// Curvature spread fell below the tolerance; `k` is the average at exit.
    Converged { k: f64 },
    /// `min r_i / Σ r_j` stayed below δ on two consecutive accepted steps.
    Collapsed { vertex: usize },
    /// Every halving of the step was rejected at this tet.
    DegeneratePinch { tet: [usize; 4] },
    /// `t_max` reached with no other condition; no collapse observed up to it.
    HorizonReached,
}

impl Termination {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Converged { .. } => "Converged",
            Self::Collapsed { .. } => "Collapsed",
            Self::DegeneratePinch { .. } => "DegeneratePinch",
            Self::HorizonReached => "HorizonReached",
        }
    }
}

/// Radii, curvature and monitors at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState<T> {
    pub t: f64,
    pub metric: MetricStructure<T>,
    pub field: CurvatureField<T>,
    /// Smallest normalized `Q` over tets.
    pub min_q: T,
    /// Smallest `r_i / Σ r_j`.
    pub min_ratio: T,
    /// Dense vertex attaining `min_ratio`.
    pub min_ratio_vertex: usize,
}

impl<T: Real> FlowState<T> {
    pub fn new(c: &Complex, metric: MetricStructure<T>, t: f64, q_min: f64) -> Result<Self, CurvatureError> {
        let geoms = tet_geometries(c, &metric, T::lit(q_min))?;
        let field = CurvatureField::from_geometries(c, &metric, &geoms);
        let min_q = geoms
            .iter()
            .map(|g| normalized_q(g.radii).expect("radii already validated"))
            .fold(T::infinity(), T::min);
        let (min_ratio, min_ratio_vertex) = metric.min_ratio();
        Ok(Self { t, metric, field, min_q, min_ratio, min_ratio_vertex })
    }

    /// `L_i = log r_i`.
    pub fn log_radii(&self) -> Vec<T> {
        self.metric.radii().iter().map(|r| r.ln()).collect()
    }

    /// Uniform rescaling; curvature and every ratio monitor are unchanged.
    fn scaled(mut self, lambda: T) -> Self {
        self.metric = self.metric.scaled(lambda);
        self.field.total = self.field.total * lambda;
        self
    }

    fn monitor(&self) -> Monitor {
        Monitor {
            t: self.t,
            spread: self.field.spread.as_f64(),
            k: self.field.average.as_f64(),
            min_q: self.min_q.as_f64(),
            min_ratio: self.min_ratio.as_f64(),
            min_ratio_vertex: self.min_ratio_vertex,
            rejected: None,
        }
    }
}

/// `−K_i r_i` per vertex.
pub fn yamabe_rhs<T: Real>(c: &Complex, m: &MetricStructure<T>) -> Result<Vec<T>, CurvatureError> {
    let field = crate::curvature::curvature_field(c, m)?;
    Ok(rhs_from(&field, m))
}

fn rhs_from<T: Real>(field: &CurvatureField<T>, m: &MetricStructure<T>) -> Vec<T> {
    field.curvature.iter().zip(m.radii()).map(|(&k, &r)| -k * r).collect()
}

/// One classical RK4 step of size `dt` from `state`. Any stage with a
/// non-positive radius or a tet at the `q_min` floor rejects the step.
pub fn step_rk4<T: Real>(c: &Complex, state: &FlowState<T>, dt: f64, q_min: f64) -> Result<FlowState<T>, StepRejected> {
    let h = T::lit(dt);
    let half = h / T::lit(2.0);
    let r0 = state.metric.radii();
    let trial = |slope: &[T], s: T| -> Result<MetricStructure<T>, StepRejected> {
        let r: Vec<T> = r0.iter().zip(slope).map(|(&r, &d)| r + s * d).collect();
        if let Some(v) = r.iter().position(|x| !(*x > T::zero()) || !x.is_finite()) {
            return Err(StepRejected::Vertex { vertex: c.vertex_id(v) });
        }
        Ok(MetricStructure::new(r).expect("checked positive"))
    };
    let stage = |m: &MetricStructure<T>| -> Result<Vec<T>, StepRejected> {
        let field = CurvatureField::compute(c, m, T::lit(q_min)).map_err(|e| StepRejected::from_curvature(c, e))?;
        Ok(rhs_from(&field, m))
    };
    let k1 = rhs_from(&state.field, &state.metric);
    let k2 = stage(&trial(&k1, half)?)?;
    let k3 = stage(&trial(&k2, half)?)?;
    let k4 = stage(&trial(&k3, h)?)?;
    let slope: Vec<T> = (0..r0.len())
        .map(|i| (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i]) / T::lit(6.0))
        .collect();
    let next = trial(&slope, h)?;
    FlowState::new(c, next, state.t + dt, q_min).map_err(|e| StepRejected::from_curvature(c, e))
}

/// Monitor values of one accepted step (or of the final rejected attempt).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monitor {
    pub t: f64,
    pub spread: f64,
    pub k: f64,
    pub min_q: f64,
    pub min_ratio: f64,
    /// External id.
    pub min_ratio_vertex: usize,
    /// Set when every halving of the step from this state was rejected.
    pub rejected: Option<StepRejected>,
}

/// Maps the monitor history to a termination tag, or `None` while the run
/// should continue. Only the last two entries matter. Precedence:
/// pinch, collapse, convergence, horizon.
pub fn classify_termination(history: &[Monitor], cfg: &FlowConfig) -> Option<Termination> {
    let last = history.last()?;
    match last.rejected {
        Some(StepRejected::Tet { tet }) => return Some(Termination::DegeneratePinch { tet }),
        Some(StepRejected::Vertex { vertex }) => return Some(Termination::Collapsed { vertex }),
        None => {}
    }
    if let [.., prev, last] = history {
        if prev.min_ratio < cfg.delta_collapse && last.min_ratio < cfg.delta_collapse {
            return Some(Termination::Collapsed { vertex: last.min_ratio_vertex });
        }
    }
    if last.spread < cfg.tol_converge {
        return Some(Termination::Converged { k: last.k });
    }
    if last.t >= cfg.t_max {
        return Some(Termination::HorizonReached);
    }
    None
}

/// A broken a priori property at an accepted step.
#[derive(Debug, Clone, PartialEq)]
pub enum InvariantViolation {
    /// `k` rose by more than `1e-9 (1 + |k|)`.
    AverageIncreased { t: f64, before: f64, after: f64 },
    /// `K` left `(4π − 2π d, 4π)` at this external vertex.
    CurvatureBound { t: f64, vertex: usize, value: f64 },
}

impl std::fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::AverageIncreased { t, before, after } => {
                write!(f, "average curvature increased at t = {t}: {before} -> {after}")
            }
            Self::CurvatureBound { t, vertex, value } => {
                write!(f, "curvature of vertex {vertex} out of bounds at t = {t}: {value}")
            }
        }
    }
}

const MONOTONE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport<T> {
    /// Initial state, every `sample_every`-th accepted state, and the final
    /// state.
    pub samples: Vec<FlowState<T>>,
    /// One entry per accepted step, plus the initial state and a trailing
    /// entry for a terminal rejection.
    pub monitors: Vec<Monitor>,
    pub termination: Termination,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    /// Smallest step actually taken.
    pub min_dt: f64,
    pub violations: Vec<InvariantViolation>,
}

impl<T: Real> FlowReport<T> {
    pub fn final_state(&self) -> &FlowState<T> {
        self.samples.last().expect("a report always holds the initial state")
    }
}

/// Integrates from `r0` until a termination condition holds.
pub fn run_flow<T: Real>(c: &Complex, r0: &MetricStructure<T>, cfg: &FlowConfig) -> Result<FlowReport<T>, FlowError> {
    cfg.validate_for(c.n_vertices())?;
    let mut state = FlowState::new(c, r0.clone(), 0.0, cfg.q_min)?;
    let sum0 = state.metric.total();
    let mut monitors = vec![external(c, state.monitor())];
    let mut samples = vec![state.clone()];
    let mut violations = Vec::new();
    check_bounds(c, &state, &mut violations);
    let mut accepted = 0usize;
    let mut rejected = 0usize;
    let mut min_dt = f64::INFINITY;
    let mut last_sampled = true;

    let termination = loop {
        if let Some(term) = classify_termination(&monitors, cfg) {
            break term;
        }
        let remaining = cfg.t_max - state.t;
        let mut h = cfg.dt.min(remaining);
        let mut outcome = Err(StepRejected::Vertex { vertex: 0 });
        for _ in 0..=cfg.max_halvings {
            outcome = step_rk4(c, &state, h, cfg.q_min);
            if outcome.is_ok() {
                break;
            }
            rejected += 1;
            h /= 2.0;
        }
        let mut next = match outcome {
            Ok(next) => next,
            Err(why) => {
                let mut m = external(c, state.monitor());
                m.rejected = Some(why);
                monitors.push(m);
                continue;
            }
        };
        if h == remaining {
            next.t = cfg.t_max;
        }
        min_dt = min_dt.min(h);
        accepted += 1;
        if cfg.normalize {
            let lambda = sum0 / next.metric.total();
            next = next.scaled(lambda);
        }
        let (before, after) = (state.field.average.as_f64(), next.field.average.as_f64());
        if after > before + MONOTONE_SLACK * (1.0 + before.abs()) {
            violations.push(InvariantViolation::AverageIncreased { t: next.t, before, after });
        }
        check_bounds(c, &next, &mut violations);
        state = next;
        monitors.push(external(c, state.monitor()));
        last_sampled = accepted.is_multiple_of(cfg.sample_every);
        if last_sampled {
            samples.push(state.clone());
        }
    };
    if !last_sampled {
        samples.push(state);
    }
    Ok(FlowReport {
        samples,
        monitors,
        termination,
        steps_accepted: accepted,
        steps_rejected: rejected,
        min_dt: if accepted == 0 { 0.0 } else { min_dt },
        violations,
    })
}

fn external(c: &Complex, mut m: Monitor) -> Monitor {
    m.min_ratio_vertex = c.vertex_id(m.min_ratio_vertex);
    m
}

fn check_bounds<T: Real>(c: &Complex, s: &FlowState<T>, out: &mut Vec<InvariantViolation>) {
    if let Err(v) = s.field.check_bounds(c) {
        out.push(InvariantViolation::CurvatureBound {
            t: s.t,
            vertex: c.vertex_id(v),
            value: s.field.curvature[v].as_f64(),
        });
    }
}

/// Radii drawn log-uniformly from `[lo, hi]` with a seeded generator.
pub fn random_radii(n: usize, lo: f64, hi: f64, seed: u64) -> Result<MetricStructure<f64>, GeometryError> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(GeometryError::NonPositiveRadius { value: lo });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (lo.ln(), hi.ln());
    MetricStructure::new((0..n).map(|_| rng.random_range(a..=b).exp().clamp(lo, hi)).collect())
}
