//! Free-space Green's function and its static/dynamic decomposition.
//!
//! Time dependence is `e^{jωt}`, so `G = e^{-jkr} / (4πr)`. The splitting
//! used throughout the crate is
//!
//! ```text
//! G     = G_s + G_d,              G_s = 1/(4πr),  G_d = (e^{-jkr} - 1)/(4πr)
//! G     = G_s + k² G_lin + G_d',  G_lin = -r/(8π)
//! ∇G    = ∇G_s + ∇G_d,            ∇G_s = -r̂/(4πr²)
//! ```
//!
//! `G_d`, `G_d'` and `∇G_d` are bounded at `r = 0` and are evaluated with
//! power series below a branch threshold so that no digits are lost to
//! cancellation.

use std::f64::consts::PI;

use num_complex::Complex;

use crate::geom::{CVec3, Vec3};
use crate::num::{czero, lit, Real, C};

/// Speed of light in vacuum (m/s), exact.
pub const C0: f64 = 299_792_458.0;
/// Vacuum permeability (H/m), CODATA 2018.
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity (F/m), CODATA 2018.
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Free-space wave impedance `sqrt(μ0/ε0)` in ohms.
pub fn eta0() -> f64 {
    (MU0 / EPS0).sqrt()
}

/// `k·r` below which `G_d` switches to its power series.
pub const GD_SERIES_THRESHOLD: f64 = 1e-3;
/// `k·r` below which `∇G_d` and `G_d'` use their power series. The closed
/// forms of these lose about `2·log10(1/kr)` digits, so the series is kept
/// over a much wider range than for `G_d`.
pub const GRAD_SERIES_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("kernel is singular at r = 0")]
    Singular,
    #[error("wavenumber must be non-negative and finite")]
    BadWavenumber,
}

/// Free-space wavenumber with the derived angular frequency and wavelength.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wavenumber<T> {
    pub k0: T,
}

impl<T: Real> Wavenumber<T> {
    pub fn new(k0: T) -> Result<Self, KernelError> {
        if !(k0 >= T::zero()) || !k0.is_finite() {
            return Err(KernelError::BadWavenumber);
        }
        Ok(Self { k0 })
    }

    pub fn from_frequency(hz: f64) -> Self {
        Self {
            k0: lit(2.0 * PI * hz / C0),
        }
    }

    pub fn omega(&self) -> T {
        self.k0 * lit(C0)
    }

    pub fn frequency(&self) -> T {
        self.omega() / lit(2.0 * PI)
    }

    pub fn wavelength(&self) -> T {
        lit::<T>(2.0 * PI) / self.k0
    }
}

#[inline]
fn inv4pi<T: Real>() -> T {
    lit(1.0 / (4.0 * PI))
}

/// `e^{-jkr}/(4πr)` for `r > 0`.
#[inline]
pub fn g_full<T: Real>(k: T, r: T) -> C<T> {
    let (s, c) = (k * r).sin_cos();
    Complex::new(c, -s) * (inv4pi::<T>() / r)
}

/// `1/(4πr)`.
#[inline]
pub fn g_static<T: Real>(r: T) -> T {
    inv4pi::<T>() / r
}

/// `(e^{-jkr} - 1)/(4πr)`, with the limit `-jk/(4π)` at `r = 0`.
#[inline]
pub fn g_dyn<T: Real>(k: T, r: T) -> C<T> {
    let x = k * r;
    if r == T::zero() {
        Complex::new(T::zero(), -k / lit(4.0 * PI))
    } else if x < lit(GD_SERIES_THRESHOLD) {
        // k/(4π) Σ_{l≥1} (-j)^l x^{l-1}/l!
        let mut term = Complex::new(T::zero(), -T::one());
        let mut sum = term;
        for l in 2..12usize {
            term = term * Complex::new(T::zero(), -x) / T::from_usize(l).unwrap();
            sum = sum + term;
        }
        sum * (k * inv4pi::<T>())
    } else {
        let s = x.sin();
        let h = (x * lit(0.5)).sin();
        Complex::new(lit::<T>(-2.0) * h * h, -s) * (inv4pi::<T>() / r)
    }
}

/// `-r/(8π)`, the linear Taylor term with `k²` factored out.
#[inline]
pub fn g_lin<T: Real>(r: T) -> T {
    -r * lit(1.0 / (8.0 * PI))
}

/// Dynamic remainder after removing the linear term:
/// `G - G_s - k² G_lin`, with the limit `-jk/(4π)` at `r = 0`.
#[inline]
pub fn g_dyn_lin<T: Real>(k: T, r: T) -> C<T> {
    let x = k * r;
    if r == T::zero() {
        Complex::new(T::zero(), -k / lit(4.0 * PI))
    } else if x < lit(GRAD_SERIES_THRESHOLD) {
        // k/(4π) [ -j + Σ_{l≥3} (-j)^l x^{l-1}/l! ]
        let mut term = Complex::new(-x / lit(2.0), T::zero());
        let mut sum = czero();
        for l in 3..40usize {
            term = term * Complex::new(T::zero(), -x) / T::from_usize(l).unwrap();
            sum = sum + term;
            if term.norm_sqr() < T::eps() * T::eps() * lit(1e-4) * sum.norm_sqr() {
                break;
            }
        }
        (sum + Complex::new(T::zero(), -T::one())) * (k * inv4pi::<T>())
    } else {
        g_dyn(k, r) + Complex::new(k * k * r * lit(1.0 / (8.0 * PI)), T::zero())
    }
}

/// Radial profile `g` with `∇G = g(r) r̂`: `-(1 + jkr) e^{-jkr}/(4πr²)`.
#[inline]
pub fn grad_full_radial<T: Real>(k: T, r: T) -> C<T> {
    let (s, c) = (k * r).sin_cos();
    Complex::new(c, -s) * Complex::new(T::one(), k * r) * (-inv4pi::<T>() / (r * r))
}

/// Radial profile of `∇G_s`: `-1/(4πr²)`.
#[inline]
pub fn grad_static_radial<T: Real>(r: T) -> T {
    -inv4pi::<T>() / (r * r)
}

/// Radial profile of `∇G_d`: `-[(1 + jkr) e^{-jkr} - 1]/(4πr²)`, with the
/// limit `(-jk)²/(8π)` at `r = 0`.
#[inline]
pub fn grad_dyn_radial<T: Real>(k: T, r: T) -> C<T> {
    let x = k * r;
    if r == T::zero() {
        Complex::new(-(k * k) / lit(8.0 * PI), T::zero())
    } else if x < lit(GRAD_SERIES_THRESHOLD) {
        // -(k²/4π) Σ_{m≥2} (1-m) (-j)^m x^{m-2}/m!
        // p_m = (-j)^m x^{m-2}/m!, starting at p_2 = -1/2.
        let mut p = Complex::new(lit::<T>(-0.5), T::zero());
        let mut sum = -p;
        for m in 3..40usize {
            p = p * Complex::new(T::zero(), -x) / T::from_usize(m).unwrap();
            let t = p * (T::one() - T::from_usize(m).unwrap());
            sum = sum + t;
            if t.norm_sqr() < T::eps() * T::eps() * lit(1e-4) * sum.norm_sqr() {
                break;
            }
        }
        sum * (-k * k * inv4pi::<T>())
    } else {
        let (s, c) = x.sin_cos();
        let re = c - T::one() + x * s;
        let im = x * c - s;
        Complex::new(re, im) * (-inv4pi::<T>() / (r * r))
    }
}

/// Partial Taylor sum `1/(4πr) + Σ_{l=1}^{terms-1} (-jk)^l r^{l-1}/(4π l!)`.
pub fn taylor_g<T: Real>(k: T, r: T, terms: usize) -> Result<C<T>, KernelError> {
    assert!(terms >= 1, "taylor_g needs at least one term");
    if r == T::zero() {
        return Err(KernelError::Singular);
    }
    let mut sum = Complex::new(T::one() / r, T::zero());
    let mut term = Complex::new(T::one() / r, T::zero());
    for l in 1..terms {
        term = term * Complex::new(T::zero(), -k * r) / T::from_usize(l).unwrap();
        sum = sum + term;
    }
    Ok(sum * inv4pi::<T>())
}

fn radius<T: Real>(r: Vec3<T>) -> Result<T, KernelError> {
    let d = r.norm();
    if d == T::zero() {
        Err(KernelError::Singular)
    } else {
        Ok(d)
    }
}

pub fn eval_g<T: Real>(k: Wavenumber<T>, r: Vec3<T>) -> Result<C<T>, KernelError> {
    Ok(g_full(k.k0, radius(r)?))
}

pub fn eval_g_s<T: Real>(r: Vec3<T>) -> Result<T, KernelError> {
    Ok(g_static(radius(r)?))
}

pub fn eval_g_d<T: Real>(k: Wavenumber<T>, r: Vec3<T>) -> C<T> {
    g_dyn(k.k0, r.norm())
}

pub fn eval_g_lin<T: Real>(r: Vec3<T>) -> T {
    g_lin(r.norm())
}

/// `G - G_s - k² G_lin`.
pub fn eval_g_d_lin<T: Real>(k: Wavenumber<T>, r: Vec3<T>) -> C<T> {
    g_dyn_lin(k.k0, r.norm())
}

pub fn eval_grad_g<T: Real>(k: Wavenumber<T>, r: Vec3<T>) -> Result<CVec3<T>, KernelError> {
    let d = radius(r)?;
    Ok((r / d).scale_c(grad_full_radial(k.k0, d)))
}

pub fn eval_grad_g_s<T: Real>(r: Vec3<T>) -> Result<Vec3<T>, KernelError> {
    let d = radius(r)?;
    Ok(r * (grad_static_radial(d) / d))
}

/// Diagnostic choice for the value of `∇G_d` at `r = 0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GradSelfTerm {
    /// Every Cartesian component set to `(-jk)²/(8π)`.
    #[default]
    Scalar,
    /// All components zero.
    Zero,
}

pub fn eval_grad_g_d<T: Real>(k: Wavenumber<T>, r: Vec3<T>) -> CVec3<T> {
    eval_grad_g_d_with(k, r, GradSelfTerm::Scalar)
}

pub fn eval_grad_g_d_with<T: Real>(k: Wavenumber<T>, r: Vec3<T>, self_term: GradSelfTerm) -> CVec3<T> {
    let d = r.norm();
    if d == T::zero() {
        return match self_term {
            GradSelfTerm::Scalar => {
                let v = grad_dyn_radial(k.k0, T::zero());
                CVec3::new(v, v, v)
            }
            GradSelfTerm::Zero => CVec3::zero(),
        };
    }
    (r / d).scale_c(grad_dyn_radial(k.k0, d))
}

/// Kernel family selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelKind {
    G,
    GS,
    GD,
    /// `G - G_s - k² G_lin` (dynamic part when the linear term is split off).
    GDLin,
    GLin,
    GradG,
    GradGS,
    GradGD,
}

impl KernelKind {
    pub fn is_gradient(self) -> bool {
        matches!(self, Self::GradG | Self::GradGS | Self::GradGD)
    }

    /// True for the kinds that carry the `1/r` (or `1/r²`) singularity.
    pub fn is_singular(self) -> bool {
        matches!(self, Self::G | Self::GS | Self::GradG | Self::GradGS)
    }

    /// Scalar kernel value; `r = 0` yields the finite limit, or an error for
    /// the singular kinds.
    pub fn eval_scalar<T: Real>(self, k: Wavenumber<T>, r: Vec3<T>) -> Result<C<T>, KernelError> {
        let d = r.norm();
        match self {
            Self::G => eval_g(k, r),
            Self::GS => eval_g_s(r).map(Complex::from),
            Self::GD => Ok(g_dyn(k.k0, d)),
            Self::GDLin => Ok(g_dyn_lin(k.k0, d)),
            Self::GLin => Ok(Complex::from(g_lin(d))),
            _ => panic!("{self:?} is a gradient kernel"),
        }
    }

    /// Gradient kernel value (with respect to the field point).
    pub fn eval_vector<T: Real>(self, k: Wavenumber<T>, r: Vec3<T>) -> Result<CVec3<T>, KernelError> {
        match self {
            Self::GradG => eval_grad_g(k, r),
            Self::GradGS => eval_grad_g_s(r).map(|v| v.scale_c(Complex::from(T::one()))),
            Self::GradGD => Ok(eval_grad_g_d(k, r)),
            _ => panic!("{self:?} is a scalar kernel"),
        }
    }

    /// Value assigned at zero offset on the convolution grid.
    pub fn grid_self_scalar<T: Real>(self, k: T) -> C<T> {
        match self {
            Self::G | Self::GD | Self::GDLin => g_dyn(k, T::zero()),
            Self::GS | Self::GLin => czero(),
            _ => panic!("{self:?} is a gradient kernel"),
        }
    }

    /// Per-component value assigned at zero offset for gradient kernels.
    pub fn grid_self_component<T: Real>(self, k: T, mode: GradSelfTerm) -> C<T> {
        match (self, mode) {
            (Self::GradG | Self::GradGD, GradSelfTerm::Scalar) => grad_dyn_radial(k, T::zero()),
            (Self::GradG | Self::GradGD | Self::GradGS, _) => czero(),
            _ => panic!("{self:?} is a scalar kernel"),
        }
    }
}
