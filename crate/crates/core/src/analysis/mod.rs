//! Verification tooling: the Mie oracle, far-field RCS, Lagrange
//! interpolation error bounds and the self-term study.

pub mod interp;
pub mod mie;
pub mod rcs;
pub mod selfterm;
pub mod table;
pub mod verify;

pub use interp::{
    deriv_gd, deriv_grad_gd, error_bound, lagrange_interp, pochhammer, InterpCurve, InterpKernel, InterpPoint,
    InterpStudy,
};
pub use mie::{mie_monostatic, to_dbsm, MieSolution};
pub use rcs::{direction, far_field_rcs};
pub use selfterm::{self_term_error_study, SelfTermConfig, SelfTermRow};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("{0}")]
    Domain(&'static str),
    #[error("nodes {0} and {1} coincide")]
    CoincidentNodes(usize, usize),
    #[error("stencil window is empty")]
    EmptyWindow,
    #[error("Mie series cannot be truncated reliably at size parameter {0}")]
    Truncation(f64),
}
