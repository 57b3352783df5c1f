//! Excitation, preconditioning, GMRES and the frequency-sweep driver.

mod excitation;
mod gmres;
mod sweep;

pub use excitation::{excitation_rule, tested_fields, PlaneWave, TestedFields, WaveError};
pub use gmres::{
    gmres, Breakdown, BreakdownKind, GmresConfig, GmresError, GmresOutcome, Identity, LinearOperator, Preconditioner,
};
pub use sweep::{run_sweep, run_sweep_with, FrequencyResult, PhaseTimes, SweepError, SweepPlan, SweepResult};

use std::str::FromStr;

use num_complex::Complex;

use crate::kernels::{eta0, Wavenumber};
use crate::mesh::Discretization;
use crate::num::{czero, lit, Real, C};
use crate::operators::{cfie_weights, efie_weights, OperatorError, OperatorSet};
use crate::quadrature::{OpWeights, Ops};

/// Integral equation solved.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Formulation {
    Efie,
    /// `alpha · EFIE + (1 - alpha) · η0 · MFIE`.
    Cfie { alpha: f64 },
}

impl Formulation {
    pub fn ops(self) -> Ops {
        match self {
            Formulation::Efie => Ops::EFIE,
            Formulation::Cfie { alpha } if alpha == 1.0 => Ops::EFIE,
            Formulation::Cfie { .. } => Ops::ALL,
        }
    }

    pub fn weights<T: Real>(self, k: Wavenumber<T>) -> OpWeights<T> {
        match self {
            Formulation::Efie => efie_weights(k),
            Formulation::Cfie { alpha } => cfie_weights(k, lit(alpha)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Formulation::Efie => "efie",
            Formulation::Cfie { .. } => "cfie",
        }
    }
}

/// Right-hand side matching [`Formulation::weights`]: `-⟨f, E_inc⟩` for the
/// EFIE part and `η0 ⟨f, n̂ × H_inc⟩` for the MFIE part.
pub fn excitation_vector<T: Real>(disc: &Discretization<T>, wave: &PlaneWave<T>, form: Formulation) -> Vec<C<T>> {
    let t = tested_fields(disc, wave, &excitation_rule(1));
    rhs_from(&t, form)
}

pub fn rhs_from<T: Real>(t: &TestedFields<T>, form: Formulation) -> Vec<C<T>> {
    let (a, h) = match form {
        Formulation::Efie => (1.0, 0.0),
        Formulation::Cfie { alpha } => (alpha, (1.0 - alpha) * eta0()),
    };
    let (a, h) = (Complex::new(-lit::<T>(a), T::zero()), Complex::new(lit::<T>(h), T::zero()));
    t.e.iter().zip(&t.nxh).map(|(e, n)| a * e + h * n).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PreconditionerKind {
    None,
    /// Diagonal of the static system combination.
    DiagStatic,
    /// Diagonal of the full-wave system matrix.
    DiagFullwave,
}

impl PreconditionerKind {
    pub fn name(self) -> &'static str {
        match self {
            PreconditionerKind::None => "none",
            PreconditionerKind::DiagStatic => "diag_static",
            PreconditionerKind::DiagFullwave => "diag_fullwave",
        }
    }
}

impl FromStr for PreconditionerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Self::None),
            "diag_static" => Ok(Self::DiagStatic),
            "diag_fullwave" => Ok(Self::DiagFullwave),
            _ => Err(format!("unknown preconditioner '{s}' (expected none, diag_static or diag_fullwave)")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PreconditionerError {
    #[error("diagonal entry {0} is zero")]
    ZeroDiagonal(usize),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Jacobi preconditioner `x ↦ x / d`.
pub struct Diagonal<T> {
    inv: Vec<C<T>>,
}

impl<T: Real> Diagonal<T> {
    pub fn new(d: &[C<T>]) -> Result<Self, PreconditionerError> {
        let inv = d
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if *z == czero() || !z.norm().is_finite() {
                    Err(PreconditionerError::ZeroDiagonal(i))
                } else {
                    Ok(z.inv())
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { inv })
    }
}

impl<T: Real> Preconditioner<T> for Diagonal<T> {
    fn solve(&self, x: &[C<T>]) -> Vec<C<T>> {
        x.iter().zip(&self.inv).map(|(a, b)| a * b).collect()
    }
}

/// Preconditioner of `kind` for `Σ w_op op` at `k`.
pub fn build_preconditioner<T: Real>(
    set: &OperatorSet<T>,
    kind: PreconditionerKind,
    k: Wavenumber<T>,
    w: OpWeights<T>,
) -> Result<Box<dyn Preconditioner<T>>, PreconditionerError> {
    Ok(match kind {
        PreconditionerKind::None => Box::new(Identity),
        PreconditionerKind::DiagStatic => Box::new(Diagonal::new(&set.static_diagonal(w))?),
        PreconditionerKind::DiagFullwave => Box::new(Diagonal::new(&set.fullwave_diagonal(k, w)?)?),
    })
}
