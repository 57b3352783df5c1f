//! Restarted GMRES with modified Gram-Schmidt and right preconditioning.
//!
//! All inner products are serial fixed-order reductions, so a solve is a
//! deterministic function of the operator output.

use num_complex::Complex;

use crate::num::{cdot, cnorm, czero, Real, C};

/// Matrix-free linear operator.
pub trait LinearOperator<T: Real>: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C<T>]) -> Vec<C<T>>;
}

impl<T: Real> LinearOperator<T> for crate::operators::BoundOperator<T> {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn apply(&self, x: &[C<T>]) -> Vec<C<T>> {
        self.matvec(x).expect("vector length checked by the solver")
    }
}

impl<T: Real> LinearOperator<T> for crate::linalg::DenseMatrix<T> {
    fn dim(&self) -> usize {
        self.rows
    }

    fn apply(&self, x: &[C<T>]) -> Vec<C<T>> {
        self.matvec(x).expect("vector length checked by the solver")
    }
}

/// Right preconditioner `M⁻¹`.
pub trait Preconditioner<T: Real>: Sync {
    fn solve(&self, x: &[C<T>]) -> Vec<C<T>>;
}

/// The identity preconditioner.
pub struct Identity;

impl<T: Real> Preconditioner<T> for Identity {
    fn solve(&self, x: &[C<T>]) -> Vec<C<T>> {
        x.to_vec()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GmresConfig {
    /// Relative residual `|b - A x| / |b|` to reach.
    pub tol: f64,
    /// Krylov dimension per cycle.
    pub restart: usize,
    /// Total iteration budget over all cycles.
    pub max_iter: usize,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            restart: 200,
            max_iter: 2000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreakdownKind {
    /// The Krylov space became invariant and the solution is exact.
    Happy,
    /// The new Arnoldi vector has non-finite entries.
    Serious,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Breakdown {
    pub kind: BreakdownKind,
    /// Total iteration count at which it happened.
    pub iteration: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum GmresError {
    #[error("right-hand side has length {got}, operator dimension is {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("invalid configuration: {0}")]
    Config(&'static str),
}

/// Result of one solve. Non-convergence is reported, not an error.
#[derive(Clone, Debug)]
pub struct GmresOutcome<T> {
    pub x: Vec<C<T>>,
    pub converged: bool,
    pub iterations: usize,
    /// Relative residual estimate after each iteration, starting with the
    /// initial residual (index 0).
    pub history: Vec<T>,
    /// Iteration counts at which restarts happened.
    pub restarts: Vec<usize>,
    /// True relative residual of the returned `x`.
    pub residual: T,
    pub breakdown: Option<Breakdown>,
}

/// Solves `A x = b` from `x = 0`.
pub fn gmres<T: Real>(
    a: &dyn LinearOperator<T>,
    b: &[C<T>],
    m: &dyn Preconditioner<T>,
    cfg: &GmresConfig,
) -> Result<GmresOutcome<T>, GmresError> {
    let n = a.dim();
    if b.len() != n {
        return Err(GmresError::Dimension {
            got: b.len(),
            expected: n,
        });
    }
    if cfg.restart == 0 {
        return Err(GmresError::Config("restart must be positive"));
    }
    if !(cfg.tol > 0.0) {
        return Err(GmresError::Config("tolerance must be positive"));
    }
    let tol = T::from_f64(cfg.tol).unwrap();
    let bnorm = cnorm(b);
    let mut x = vec![czero(); n];
    if bnorm == T::zero() {
        return Ok(GmresOutcome {
            x,
            converged: true,
            iterations: 0,
            history: vec![T::zero()],
            restarts: Vec::new(),
            residual: T::zero(),
            breakdown: None,
        });
    }
    let mut history = vec![T::one()];
    let mut restarts = Vec::new();
    let mut its = 0;
    let mut breakdown = None;
    let mut r = b.to_vec();
    loop {
        let beta = cnorm(&r);
        if beta / bnorm <= tol || its >= cfg.max_iter || breakdown.is_some() {
            let residual = beta / bnorm;
            return Ok(GmresOutcome {
                x,
                converged: residual <= tol,
                iterations: its,
                history,
                restarts,
                residual,
                breakdown,
            });
        }
        if its > 0 {
            restarts.push(its);
        }
        let cycle = cycle(a, m, &r, beta, bnorm, tol, cfg.restart.min(cfg.max_iter - its), its, &mut history);
        its += cycle.steps;
        breakdown = cycle.breakdown;
        for (xi, di) in x.iter_mut().zip(&cycle.dx) {
            *xi = *xi + di;
        }
        let ax = a.apply(&x);
        r = b.iter().zip(&ax).map(|(p, q)| p - q).collect();
    }
}

struct Cycle<T> {
    dx: Vec<C<T>>,
    steps: usize,
    breakdown: Option<Breakdown>,
}

#[allow(clippy::too_many_arguments)]
fn cycle<T: Real>(
    a: &dyn LinearOperator<T>,
    m: &dyn Preconditioner<T>,
    r: &[C<T>],
    beta: T,
    bnorm: T,
    tol: T,
    steps: usize,
    its0: usize,
    history: &mut Vec<T>,
) -> Cycle<T> {
    let n = r.len();
    let inv = T::one() / beta;
    let mut v: Vec<Vec<C<T>>> = vec![r.iter().map(|z| z * inv).collect()];
    // Hessenberg columns after rotation, rotations, and the rotated rhs.
    let mut h: Vec<Vec<C<T>>> = Vec::with_capacity(steps);
    let mut cs: Vec<(T, C<T>)> = Vec::with_capacity(steps);
    let mut g = vec![Complex::new(beta, T::zero())];
    let mut breakdown = None;
    let mut j = 0;
    while j < steps {
        let mut w = a.apply(&m.solve(&v[j]));
        let mut col = Vec::with_capacity(j + 2);
        for vi in &v {
            let hij = cdot(vi, &w);
            for (wk, vk) in w.iter_mut().zip(vi) {
                *wk = *wk - hij * vk;
            }
            col.push(hij);
        }
        let hnext = cnorm(&w);
        if !hnext.is_finite() {
            breakdown = Some(Breakdown {
                kind: BreakdownKind::Serious,
                iteration: its0 + j + 1,
            });
            break;
        }
        col.push(Complex::new(hnext, T::zero()));
        for (i, &(c, s)) in cs.iter().enumerate() {
            let (p, q) = (col[i], col[i + 1]);
            col[i] = p * c + s * q;
            col[i + 1] = -s.conj() * p + q * c;
        }
        let (c, s) = givens(col[j], col[j + 1]);
        col[j] = col[j] * c + s * col[j + 1];
        col[j + 1] = czero();
        let gj = g[j];
        g[j] = gj * c;
        g.push(-s.conj() * gj);
        cs.push((c, s));
        h.push(col);
        j += 1;
        let est = g[j].norm() / bnorm;
        history.push(est);
        if hnext <= T::eps() * beta {
            breakdown = Some(Breakdown {
                kind: BreakdownKind::Happy,
                iteration: its0 + j,
            });
            break;
        }
        if est <= tol {
            break;
        }
        let inv = T::one() / hnext;
        v.push(w.iter().map(|z| z * inv).collect());
    }
    // Back substitution on the rotated triangular system.
    let mut y = vec![czero::<T>(); j];
    for i in (0..j).rev() {
        let mut s = g[i];
        for k in i + 1..j {
            s = s - h[k][i] * y[k];
        }
        y[i] = s / h[i][i];
    }
    let mut z = vec![czero(); n];
    for (yi, vi) in y.iter().zip(&v) {
        for (zk, vk) in z.iter_mut().zip(vi) {
            *zk = *zk + yi * vk;
        }
    }
    Cycle {
        dx: m.solve(&z),
        steps: j,
        breakdown,
    }
}

/// Rotation `(c, s)` with real `c` such that `[c s; -s̄ c] [a; b] = [r; 0]`.
fn givens<T: Real>(a: C<T>, b: C<T>) -> (T, C<T>) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == T::zero() {
        return (T::one(), czero());
    }
    if na == T::zero() {
        return (T::zero(), Complex::new(T::one(), T::zero()) * (b.conj() / nb));
    }
    let den = na.hypot(nb);
    let c = na / den;
    let s = (a / na) * b.conj() / den;
    (c, s)
}
