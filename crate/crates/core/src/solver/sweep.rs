//! Frequency sweep: one-time assembly, then bind, excite, precondition and
//! solve at every frequency.

use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use super::{build_preconditioner, gmres, rhs_from, tested_fields, excitation_rule, Breakdown, Formulation, GmresConfig, PlaneWave, PreconditionerKind};
use crate::aimgrid::GridConfig;
use crate::counters::{CounterSnapshot, WorkCounters};
use crate::kernels::{GradSelfTerm, Wavenumber};
use crate::mesh::Discretization;
use crate::num::{Real, C};
use crate::operators::{Mode, OperatorConfig, OperatorError, OperatorSet};
use crate::quadrature::QuadratureConfig;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPlan {
    /// Strictly increasing, in Hz.
    pub frequencies: Vec<f64>,
    pub formulation: Formulation,
    pub mode: Mode,
    pub preconditioner: PreconditionerKind,
    pub gmres: GmresConfig,
    pub linear_term: bool,
    pub grid: GridConfig,
    pub quadrature: QuadratureConfig,
    pub grad_self: GradSelfTerm,
}

impl SweepPlan {
    pub fn new(frequencies: Vec<f64>, formulation: Formulation, mode: Mode) -> Self {
        Self {
            frequencies,
            formulation,
            mode,
            preconditioner: PreconditionerKind::DiagStatic,
            gmres: GmresConfig::default(),
            linear_term: false,
            grid: GridConfig::default(),
            quadrature: QuadratureConfig::default(),
            grad_self: GradSelfTerm::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |s: &str| Err(SweepError::Plan(s.to_string()));
        if self.frequencies.is_empty() {
            return bad("no frequencies");
        }
        if self.frequencies.iter().any(|f| !(*f > 0.0) || !f.is_finite()) {
            return bad("frequencies must be positive and finite");
        }
        if self.frequencies.windows(2).any(|w| w[1] <= w[0]) {
            return bad("frequencies must be strictly increasing");
        }
        if let Formulation::Cfie { alpha } = self.formulation {
            if !(0.0..=1.0).contains(&alpha) {
                return bad("cfie alpha must lie in [0, 1]");
            }
        }
        if self.linear_term && self.mode != Mode::Aimx {
            return bad("the linear-term option needs aimx mode");
        }
        Ok(())
    }

    pub fn operator_config(&self) -> OperatorConfig {
        OperatorConfig {
            mode: self.mode,
            ops: self.formulation.ops(),
            grid: self.grid,
            quadrature: self.quadrature,
            linear_term: self.linear_term,
            grad_self: self.grad_self,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error("invalid sweep plan: {0}")]
    Plan(String),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Wall time per phase, in seconds.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimes {
    pub bind: f64,
    pub excitation: f64,
    pub preconditioner: f64,
    pub solve: f64,
}

#[derive(Clone, Debug)]
pub struct FrequencyResult<T> {
    pub frequency: f64,
    pub k: Wavenumber<T>,
    /// Basis coefficients; empty when `error` is set.
    pub solution: Vec<C<T>>,
    pub converged: bool,
    pub iterations: usize,
    pub history: Vec<T>,
    pub residual: T,
    pub breakdown: Option<Breakdown>,
    /// Failure that prevented a solve at this frequency.
    pub error: Option<String>,
    /// Work done while handling this frequency.
    pub counters: CounterSnapshot,
    pub times: PhaseTimes,
    /// Hash of the near-region matrices used (grid modes).
    pub near_hash: Option<String>,
}

impl<T> FrequencyResult<T> {
    /// Solved and converged.
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.converged
    }
}

#[derive(Clone, Debug)]
pub struct SweepResult<T> {
    pub setup_counters: CounterSnapshot,
    pub setup_seconds: f64,
    pub cache_hit: bool,
    /// Hash of the stored static matrices (AIMx).
    pub static_hash: Option<String>,
    pub points: Vec<FrequencyResult<T>>,
}

impl<T> SweepResult<T> {
    pub fn all_converged(&self) -> bool {
        self.points.iter().all(|p| p.ok())
    }
}

pub fn run_sweep<T: Real>(
    plan: &SweepPlan,
    disc: Arc<Discretization<T>>,
    wave: PlaneWave<T>,
    counters: Arc<WorkCounters>,
    cache_dir: Option<&Path>,
) -> Result<SweepResult<T>, SweepError> {
    run_sweep_with(plan, disc, wave, counters, cache_dir, &mut |_, _, _| {})
}

/// Runs the sweep, calling `hook` after each frequency. Failures at one
/// frequency are recorded in its result and the sweep continues.
pub fn run_sweep_with<T: Real>(
    plan: &SweepPlan,
    disc: Arc<Discretization<T>>,
    wave: PlaneWave<T>,
    counters: Arc<WorkCounters>,
    cache_dir: Option<&Path>,
    hook: &mut dyn FnMut(&Discretization<T>, &PlaneWave<T>, &FrequencyResult<T>),
) -> Result<SweepResult<T>, SweepError> {
    plan.validate()?;
    let t0 = Instant::now();
    let before = counters.snapshot();
    let k_max = Wavenumber::<T>::from_frequency(*plan.frequencies.last().unwrap()).k0;
    let set = OperatorSet::assemble(disc.clone(), plan.operator_config(), k_max, counters.clone(), cache_dir)?;
    let setup_counters = counters.snapshot().since(&before);
    let setup_seconds = t0.elapsed().as_secs_f64();
    let rule = excitation_rule(1);
    let mut points = Vec::with_capacity(plan.frequencies.len());
    for &f in &plan.frequencies {
        let k = Wavenumber::from_frequency(f);
        let wave = wave.at(k);
        let start = counters.snapshot();
        let mut times = PhaseTimes::default();
        let mut res = FrequencyResult {
            frequency: f,
            k,
            solution: Vec::new(),
            converged: false,
            iterations: 0,
            history: Vec::new(),
            residual: T::nan(),
            breakdown: None,
            error: None,
            counters: CounterSnapshot::default(),
            times,
            near_hash: None,
        };
        let outcome = (|| -> Result<(), String> {
            let w = plan.formulation.weights(k);
            let t = Instant::now();
            let op = set.bind(k, w).map_err(|e| e.to_string())?;
            times.bind = t.elapsed().as_secs_f64();
            res.near_hash = op.near_hash();
            let t = Instant::now();
            let b = rhs_from(&tested_fields(&disc, &wave, &rule), plan.formulation);
            times.excitation = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let m = build_preconditioner(&set, plan.preconditioner, k, w).map_err(|e| e.to_string())?;
            times.preconditioner = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let out = gmres(&op, &b, m.as_ref(), &plan.gmres).map_err(|e| e.to_string())?;
            times.solve = t.elapsed().as_secs_f64();
            res.converged = out.converged;
            res.iterations = out.iterations;
            res.history = out.history;
            res.residual = out.residual;
            res.breakdown = out.breakdown;
            res.solution = out.x;
            Ok(())
        })();
        res.error = outcome.err();
        res.times = times;
        res.counters = counters.snapshot().since(&start);
        hook(&disc, &wave, &res);
        points.push(res);
    }
    Ok(SweepResult {
        setup_counters,
        setup_seconds,
        cache_hit: set.cache_hit(),
        static_hash: set.static_hash(),
        points,
    })
}
