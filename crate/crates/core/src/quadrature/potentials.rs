//! Closed-form integrals of `1/R` and its derivatives over a flat triangle.
//!
//! For an observation point `r` and a source triangle `T` with unit normal
//! `n̂`, let `d = n̂·(r - p0)` and `ρ` be the projection of `r` onto the
//! plane of `T`. For each edge (counter-clockwise about `n̂`) with unit
//! direction `l̂` and outward in-plane normal `m̂ = l̂ × n̂`:
//!
//! ```text
//! l± = (p± - ρ)·l̂     t0 = (p- - ρ)·m̂     R0² = t0² + d²     R± = sqrt(l±² + R0²)
//! f  = ln((R+ + l+)/(R- + l-))
//! β  = atan(t0 l+/(R0² + |d| R+)) - atan(t0 l-/(R0² + |d| R-))
//! ```
//!
//! and then
//!
//! ```text
//! ∫ 1/R dS'          = Σ t0 f - |d| Σ β
//! ∫ (ρ' - ρ)/R dS'   = ½ Σ m̂ (R0² f + l+ R+ - l- R-)
//! ∫ ∇_r (1/R) dS'    = -n̂ sgn(d) Σ β - Σ m̂ f
//! ```

use crate::geom::Vec3;
use crate::num::{lit, Real};

/// Triangle with the per-edge frame used by the potential formulas.
#[derive(Clone, Copy, Debug)]
pub struct TriGeom<T> {
    pub v: [Vec3<T>; 3],
    pub n: Vec3<T>,
    pub area: T,
    pub centroid: Vec3<T>,
    /// Unit direction of edge `i`, from `v[i]` to `v[(i+1)%3]`.
    pub lhat: [Vec3<T>; 3],
    /// Outward in-plane normal of edge `i`.
    pub mhat: [Vec3<T>; 3],
    pub len: [T; 3],
}

impl<T: Real> TriGeom<T> {
    pub fn new(v: [Vec3<T>; 3]) -> Self {
        let nraw = (v[1] - v[0]).cross(v[2] - v[0]);
        let twice = nraw.norm();
        let n = nraw / twice;
        let mut lhat = [Vec3::zero(); 3];
        let mut mhat = [Vec3::zero(); 3];
        let mut len = [T::zero(); 3];
        for i in 0..3 {
            let e = v[(i + 1) % 3] - v[i];
            len[i] = e.norm();
            lhat[i] = e / len[i];
            mhat[i] = lhat[i].cross(n);
        }
        Self {
            v,
            n,
            area: twice * lit(0.5),
            centroid: (v[0] + v[1] + v[2]) / lit(3.0),
            lhat,
            mhat,
            len,
        }
    }

    pub fn mean_edge(&self) -> T {
        (self.len[0] + self.len[1] + self.len[2]) / lit(3.0)
    }

    /// Barycentric combination of the vertices.
    #[inline]
    pub fn point(&self, b: &[T; 3]) -> Vec3<T> {
        self.v[0] * b[0] + self.v[1] * b[1] + self.v[2] * b[2]
    }
}

/// Static potential integrals of one triangle at one observation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticPotentials<T> {
    /// `∫ 1/R dS'`.
    pub i1: T,
    /// `∫ (r' - r)/R dS'`.
    pub ivec: Vec3<T>,
    /// `∫ ∇_r (1/R) dS'`.
    pub grad: Vec3<T>,
}

/// Returns `ln((R+ + l+)/(R- + l-))` without cancellation for either sign of `l`.
#[inline]
fn edge_log<T: Real>(lp: T, lm: T, rp: T, rm: T, r0sq: T) -> T {
    if lm >= T::zero() {
        ((rp + lp) / (rm + lm)).ln()
    } else if lp <= T::zero() {
        ((rm - lm) / (rp - lp)).ln()
    } else if r0sq > T::zero() {
        // R- + l- = R0²/(R- - l-) when l- < 0.
        ((rp + lp) * (rm - lm) / r0sq).ln()
    } else {
        // Observation point on the edge itself; callers never integrate here.
        T::zero()
    }
}

pub fn static_potentials<T: Real>(tri: &TriGeom<T>, r: Vec3<T>) -> StaticPotentials<T> {
    let d = tri.n.dot(r - tri.v[0]);
    let ad = d.mag();
    let rho = r - tri.n * d;
    let mut sum_tf = T::zero();
    let mut sum_beta = T::zero();
    let mut irho = Vec3::zero();
    let mut msum = Vec3::zero();
    for i in 0..3 {
        let a = tri.v[i];
        let b = tri.v[(i + 1) % 3];
        let (lh, mh) = (tri.lhat[i], tri.mhat[i]);
        let lp = (b - rho).dot(lh);
        let lm = (a - rho).dot(lh);
        let t0 = (a - rho).dot(mh);
        let r0sq = t0 * t0 + d * d;
        let rp = (lp * lp + r0sq).sqrt();
        let rm = (lm * lm + r0sq).sqrt();
        let f = edge_log(lp, lm, rp, rm, r0sq);
        let beta = (t0 * lp).atan2(r0sq + ad * rp) - (t0 * lm).atan2(r0sq + ad * rm);
        sum_tf = sum_tf + t0 * f;
        sum_beta = sum_beta + beta;
        irho += mh * ((r0sq * f + lp * rp - lm * rm) * lit(0.5));
        msum += mh * f;
    }
    let i1 = sum_tf - ad * sum_beta;
    let sgn = if d > T::zero() {
        T::one()
    } else if d < T::zero() {
        -T::one()
    } else {
        T::zero()
    };
    StaticPotentials {
        i1,
        ivec: irho - tri.n * (d * i1),
        grad: -(tri.n * (sgn * sum_beta)) - msum,
    }
}
