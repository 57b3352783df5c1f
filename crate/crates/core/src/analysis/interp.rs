//! Lagrange interpolation of the dynamic kernels on a uniform 1-D stencil,
//! with the analytic remainder bound.
//!
//! Lengths are normalized as `θ = k0 r`. In these units
//! `G_d = k0 K(θ)` with `K(θ) = (e^{-jθ} - 1)/(4πθ)`, and the radial profile
//! of `∇G_d` is `k0² K'(θ)`.

use std::f64::consts::PI;

use num_complex::Complex;

use super::AnalysisError;
use crate::num::{czero, from_usize, lit, Real, C};

/// Kernel under study.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InterpKernel {
    Gd,
    GradGd,
}

impl InterpKernel {
    pub fn name(self) -> &'static str {
        match self {
            InterpKernel::Gd => "g_d",
            InterpKernel::GradGd => "grad_g_d",
        }
    }

    /// Normalized kernel value at `θ ≥ 0`.
    pub fn value<T: Real>(self, theta: T) -> C<T> {
        match self {
            InterpKernel::Gd => crate::kernels::g_dyn(T::one(), theta),
            InterpKernel::GradGd => crate::kernels::grad_dyn_radial(T::one(), theta),
        }
    }

    /// `order`-th derivative of the normalized kernel, finite at `θ = 0`.
    fn derivative<T: Real>(self, order: usize, theta: T) -> C<T> {
        match self {
            InterpKernel::Gd => gd_derivative(order, theta),
            InterpKernel::GradGd => grad_gd_derivative(order, theta),
        }
    }

    /// Power of `k0` relating the normalized kernel to the physical one.
    fn k0_power(self) -> i32 {
        match self {
            InterpKernel::Gd => 1,
            InterpKernel::GradGd => 2,
        }
    }
}

/// Rising factorial `(a)_b = a (a+1) ... (a+b-1)`, with `(a)_0 = 1`.
pub fn pochhammer<T: Real>(a: T, b: usize) -> T {
    (0..b).fold(T::one(), |acc, i| acc * (a + from_usize(i)))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}

/// Below this `θ` (plus the derivative order) derivatives are summed from
/// the Taylor series; the closed forms cancel catastrophically there.
const SERIES_BELOW: f64 = 2.0;

/// `d^N K/dθ^N` from `K = (1/4π) Σ_{l≥1} (-j)^l θ^{l-1}/l!`:
/// `(1/4π) Σ_{m≥0} (-j)^{m+N+1} θ^m / (m! (m+N+1))`.
fn gd_series<T: Real>(order: usize, theta: T) -> C<T> {
    let mj = Complex::new(T::zero(), -T::one());
    let mut p = mj.powu(order as u32 + 1);
    let mut sum = czero();
    for m in 0..400usize {
        let t = p / from_usize::<T>(m + order + 1);
        sum = sum + t;
        if m > 2 && t.norm_sqr() < T::eps() * T::eps() * lit(1e-6) * sum.norm_sqr() {
            break;
        }
        p = p * mj * theta / from_usize::<T>(m + 1);
    }
    sum * lit::<T>(1.0 / (4.0 * PI))
}

/// Closed-form `d^N K/dθ^N` by the Leibniz rule:
/// `(-1)^N N!/(4π θ^{N+1}) [-1 + e^{-jθ} Σ_{l=0}^{N} (jθ)^l / l!]`.
fn gd_closed<T: Real>(order: usize, theta: T) -> C<T> {
    let (s, c) = theta.sin_cos();
    let e = Complex::new(c, -s);
    let jt = Complex::new(T::zero(), theta);
    let mut term = Complex::new(T::one(), T::zero());
    let mut sum = term;
    for l in 1..=order {
        term = term * jt / from_usize::<T>(l);
        sum = sum + term;
    }
    let bracket = e * sum - T::one();
    let sign = if order % 2 == 0 { T::one() } else { -T::one() };
    bracket * (sign * lit::<T>(factorial(order) / (4.0 * PI)) / theta.powi(order as i32 + 1))
}

fn gd_derivative<T: Real>(order: usize, theta: T) -> C<T> {
    if theta < lit::<T>(SERIES_BELOW) + from_usize(order) {
        gd_series(order, theta)
    } else {
        gd_closed(order, theta)
    }
}

/// Closed-form `N`-th derivative of the radial profile of `∇K`:
///
/// `-(1/4π) Σ_{l=0}^{N} C(N,l) (l-N-1)_{N-l} θ^{l-N-2} [-δ_l + (-j)^l e^{-jθ} (1 + jθ - l)]`.
///
/// `with_delta = false` drops the Kronecker term; it exists so tests can
/// confirm that the term matters.
pub fn grad_gd_leibniz<T: Real>(order: usize, theta: T, with_delta: bool) -> C<T> {
    let (s, c) = theta.sin_cos();
    let e = Complex::new(c, -s);
    let mj = Complex::new(T::zero(), -T::one());
    let mut sum = czero();
    for l in 0..=order {
        let poch = pochhammer(from_usize::<T>(l) - from_usize(order + 1), order - l);
        let inner = mj.powu(l as u32) * e * Complex::new(T::one() - from_usize(l), theta);
        let inner = if l == 0 && with_delta { inner - T::one() } else { inner };
        let scale = lit::<T>(binomial(order, l)) * poch / theta.powi((order + 2 - l) as i32);
        sum = sum + inner * scale;
    }
    sum * lit::<T>(-1.0 / (4.0 * PI))
}

fn grad_gd_derivative<T: Real>(order: usize, theta: T) -> C<T> {
    // The radial profile of ∇K is K' itself.
    if theta < lit::<T>(SERIES_BELOW) + from_usize(order + 1) {
        gd_series(order + 1, theta)
    } else {
        grad_gd_leibniz(order, theta, true)
    }
}

fn check_theta<T: Real>(theta: T) -> Result<(), AnalysisError> {
    if theta > T::zero() && theta.is_finite() {
        Ok(())
    } else {
        Err(AnalysisError::Domain("θ must be positive and finite"))
    }
}

/// `d^N K/dθ^N` for `K(θ) = (e^{-jθ} - 1)/(4πθ)`.
pub fn deriv_gd<T: Real>(order: usize, theta: T) -> Result<C<T>, AnalysisError> {
    check_theta(theta)?;
    Ok(gd_derivative(order, theta))
}

/// `N`-th derivative of the radial profile of `∇K`.
pub fn deriv_grad_gd<T: Real>(order: usize, theta: T) -> Result<C<T>, AnalysisError> {
    check_theta(theta)?;
    Ok(grad_gd_derivative(order, theta))
}

/// Lagrange polynomial through `(nodes[i], values[i])` evaluated at `theta`.
pub fn lagrange_interp<T: Real>(nodes: &[T], values: &[C<T>], theta: T) -> Result<C<T>, AnalysisError> {
    if nodes.is_empty() || nodes.len() != values.len() {
        return Err(AnalysisError::Domain("need one value per node and at least one node"));
    }
    for i in 0..nodes.len() {
        for j in 0..i {
            if nodes[i] == nodes[j] {
                return Err(AnalysisError::CoincidentNodes(i, j));
            }
        }
    }
    let mut out = czero();
    for (i, (&xi, &vi)) in nodes.iter().zip(values).enumerate() {
        let mut w = T::one();
        for (j, &xj) in nodes.iter().enumerate() {
            if j != i {
                w = w * (theta - xj) / (xi - xj);
            }
        }
        out = out + vi * w;
    }
    Ok(out)
}

/// Points in the dense scan used for the derivative maximum.
pub const BOUND_SCAN_POINTS: usize = 2001;

/// `(θ_n - θ_0)^{n+1}/(n+1)! · max_{[θ_0, θ_n]} |K^{(n+1)}|`, scaled by the
/// power of `k0` that converts the normalized kernel to physical units.
pub fn error_bound<T: Real>(kernel: InterpKernel, n: usize, window: (T, T), k0: T) -> Result<T, AnalysisError> {
    let (a, b) = window;
    if !(b > a) || a < T::zero() {
        return Err(AnalysisError::EmptyWindow);
    }
    let mut max = T::zero();
    for i in 0..BOUND_SCAN_POINTS {
        let t = a + (b - a) * from_usize(i) / from_usize(BOUND_SCAN_POINTS - 1);
        max = max.max(kernel.derivative(n + 1, t).norm());
    }
    let width = (b - a).powi(n as i32 + 1) / lit(factorial(n + 1));
    Ok(width * max * k0.powi(kernel.k0_power()))
}

/// One interpolation experiment: a kernel, a stencil order and a list of
/// sample densities, evaluated over `θ ∈ [theta_min, theta_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct InterpStudy {
    pub kernel: InterpKernel,
    pub order: usize,
    pub samples_per_wavelength: Vec<f64>,
    pub theta_min: f64,
    pub theta_max: f64,
    /// Near-region radius in cells; the marker sits at this many spacings.
    pub near_cells: usize,
    /// Logarithmically spaced points in `[theta_min, spacing]`.
    pub log_points: usize,
    /// Uniformly spaced points per spacing over the rest of the range.
    pub points_per_cell: usize,
}

impl InterpStudy {
    pub fn new(kernel: InterpKernel, order: usize, samples_per_wavelength: Vec<f64>) -> Self {
        Self {
            kernel,
            order,
            samples_per_wavelength,
            theta_min: 1e-4,
            theta_max: 4.0 * PI,
            near_cells: order + 2,
            log_points: 60,
            points_per_cell: 40,
        }
    }

    fn validate(&self) -> Result<(), AnalysisError> {
        if self.order == 0 {
            return Err(AnalysisError::Domain("interpolation order must be at least 1"));
        }
        if !(self.theta_min > 0.0) || !(self.theta_max > self.theta_min) {
            return Err(AnalysisError::Domain("θ range must be positive and nonempty"));
        }
        if self.samples_per_wavelength.is_empty() || self.samples_per_wavelength.iter().any(|&p| !(p > 0.0)) {
            return Err(AnalysisError::Domain("samples per wavelength must be positive"));
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Vec<InterpCurve>, AnalysisError> {
        self.validate()?;
        self.samples_per_wavelength.iter().map(|&ppw| self.curve(ppw)).collect()
    }

    fn curve(&self, ppw: f64) -> Result<InterpCurve, AnalysisError> {
        let h = 2.0 * PI / ppw;
        let n = self.order;
        let mut thetas = Vec::new();
        let lo = self.theta_min.min(h);
        for i in 0..self.log_points {
            thetas.push(lo * (h / lo).powf(i as f64 / self.log_points as f64));
        }
        let cells = ((self.theta_max - h) / h).ceil().max(0.0) as usize;
        for i in 0..=cells * self.points_per_cell {
            let t = h + i as f64 * h / self.points_per_cell as f64;
            if t <= self.theta_max {
                thetas.push(t);
            }
        }
        let mut bounds: Vec<Option<f64>> = Vec::new();
        let mut points = Vec::with_capacity(thetas.len());
        for theta in thetas {
            let start = ((theta / h - (n as f64 - 1.0) / 2.0).floor().max(0.0)) as usize;
            let nodes: Vec<f64> = (0..=n).map(|i| (start + i) as f64 * h).collect();
            let values: Vec<C<f64>> = nodes.iter().map(|&t| self.kernel.value(t)).collect();
            let approx = lagrange_interp(&nodes, &values, theta)?;
            let exact = self.kernel.value(theta);
            if bounds.len() <= start {
                bounds.resize(start + 1, None);
            }
            let bound = match bounds[start] {
                Some(b) => b,
                None => {
                    let b = error_bound(self.kernel, n, (nodes[0], nodes[n]), 1.0)?;
                    bounds[start] = Some(b);
                    b
                }
            };
            points.push(InterpPoint {
                theta,
                exact,
                approx,
                error: (approx - exact).norm(),
                bound,
                window: start,
            });
        }
        Ok(InterpCurve {
            samples_per_wavelength: ppw,
            spacing: h,
            theta_near: self.near_cells as f64 * h,
            points,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterpPoint {
    pub theta: f64,
    pub exact: C<f64>,
    pub approx: C<f64>,
    pub error: f64,
    pub bound: f64,
    /// Index of the first stencil node.
    pub window: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterpCurve {
    pub samples_per_wavelength: f64,
    pub spacing: f64,
    /// Near-region marker `θ_NR`.
    pub theta_near: f64,
    pub points: Vec<InterpPoint>,
}

impl InterpCurve {
    pub fn max_error(&self) -> f64 {
        self.points.iter().map(|p| p.error).fold(0.0, f64::max)
    }

    /// Largest ratio of error to bound; at most 1 when the bound holds.
    pub fn worst_bound_ratio(&self) -> f64 {
        self.points
            .iter()
            .filter(|p| p.bound > 0.0)
            .map(|p| p.error / p.bound)
            .fold(0.0, f64::max)
    }

    /// Largest error for `θ` in `[lo, hi]`.
    pub fn max_error_in(&self, lo: f64, hi: f64) -> f64 {
        self.points
            .iter()
            .filter(|p| p.theta >= lo && p.theta <= hi)
            .map(|p| p.error)
            .fold(0.0, f64::max)
    }

    /// Error near `θ = 0` over the error in the cell just beyond the
    /// near-region marker.
    pub fn near_region_ratio(&self) -> f64 {
        let inner = self.max_error_in(0.0, 0.01 * self.spacing);
        let outer = self.max_error_in(self.theta_near, self.theta_near + self.spacing);
        if outer == 0.0 {
            if inner == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            inner / outer
        }
    }
}
