//! Scalar abstraction shared by every numerical module.
//!
//! All geometry, kernels and solvers are written against [`Real`], which is
//! implemented for `f32` and `f64`. Because `Real` pulls in both
//! `num_traits::Float` and `num_traits::Signed` (through `rustfft::FftNum`),
//! method-call syntax for `abs`/`signum` is ambiguous on a bare `T`; use
//! `Float::abs(x)` or the [`Real::mag`] helper instead.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar usable throughout the solver.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FftNum
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Absolute value without the `Float`/`Signed` ambiguity.
    #[inline]
    fn mag(self) -> Self {
        Float::abs(self)
    }

    /// Machine epsilon.
    #[inline]
    fn eps() -> Self {
        <Self as Float>::epsilon()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}

/// Complex scalar of the crate's real type.
pub type C<T> = Complex<T>;

#[inline]
pub fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cre<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `-j * x` for real `x`.
#[inline]
pub fn neg_j<T: Real>(x: T) -> C<T> {
    Complex::new(T::zero(), -x)
}

/// Euclidean norm of a complex vector with a fixed-order serial reduction.
pub fn cnorm<T: Real>(v: &[C<T>]) -> T {
    let mut s = T::zero();
    for z in v {
        s = s + z.norm_sqr();
    }
    s.sqrt()
}

/// Hermitian inner product `sum conj(a_i) b_i`, serial and fixed-order.
pub fn cdot<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    let mut s = czero();
    for (x, y) in a.iter().zip(b) {
        s = s + x.conj() * y;
    }
    s
}

/// Relative L2 distance `|a - b| / |b|`.
pub fn rel_l2<T: Real>(a: &[C<T>], b: &[C<T>]) -> T {
    let mut num = T::zero();
    let mut den = T::zero();
    for (x, y) in a.iter().zip(b) {
        num = num + (x - y).norm_sqr();
        den = den + y.norm_sqr();
    }
    (num / den).sqrt()
}
