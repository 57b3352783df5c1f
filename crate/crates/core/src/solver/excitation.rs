//! Plane-wave excitation and its tested right-hand sides.

use num_complex::Complex;

use crate::geom::{CVec3, Vec3};
use crate::kernels::{eta0, Wavenumber};
use crate::mesh::Discretization;
use crate::num::{czero, lit, Real, C};
use crate::quadrature::TriangleRule;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WaveError {
    #[error("propagation direction must be nonzero and finite")]
    BadDirection,
    #[error("polarization must be a unit vector orthogonal to the propagation direction")]
    BadPolarization,
}

/// `E(r) = E0 ê e^{-jk k̂·r}`, `H = k̂ × E / η0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneWave<T> {
    pub direction: Vec3<T>,
    pub polarization: Vec3<T>,
    pub amplitude: T,
    pub k: Wavenumber<T>,
}

impl<T: Real> PlaneWave<T> {
    /// Normalizes `direction`; `polarization` must already be a unit vector
    /// orthogonal to it.
    pub fn new(direction: Vec3<T>, polarization: Vec3<T>, amplitude: T, k: Wavenumber<T>) -> Result<Self, WaveError> {
        let n = direction.norm();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(WaveError::BadDirection);
        }
        let d = direction / n;
        let tol = lit::<T>(1e-6);
        if (polarization.norm() - T::one()).mag() > tol || d.dot(polarization).mag() > tol {
            return Err(WaveError::BadPolarization);
        }
        Ok(Self {
            direction: d,
            polarization,
            amplitude,
            k,
        })
    }

    /// Travelling along `-z` with `E` along `y`: seen from the scatterer,
    /// the backscatter direction is `+z`.
    pub fn y_polarized_from_above(k: Wavenumber<T>) -> Self {
        Self {
            direction: Vec3::new(T::zero(), T::zero(), -T::one()),
            polarization: Vec3::new(T::zero(), T::one(), T::zero()),
            amplitude: T::one(),
            k,
        }
    }

    pub fn at(self, k: Wavenumber<T>) -> Self {
        Self { k, ..self }
    }

    fn phase(&self, r: Vec3<T>) -> C<T> {
        let p = -self.k.k0 * self.direction.dot(r);
        Complex::new(p.cos(), p.sin()) * self.amplitude
    }

    pub fn e_field(&self, r: Vec3<T>) -> CVec3<T> {
        self.polarization.scale_c(self.phase(r))
    }

    pub fn h_field(&self, r: Vec3<T>) -> CVec3<T> {
        self.direction.cross(self.polarization).scale_c(self.phase(r) / lit::<T>(eta0()))
    }
}

/// `⟨f_m, E_inc⟩` and `⟨f_m, n̂ × H_inc⟩` for every basis function.
pub struct TestedFields<T> {
    pub e: Vec<C<T>>,
    pub nxh: Vec<C<T>>,
}

/// Rule used for the tested incident fields: the 16-point rule on each of
/// the `4^levels` sub-triangles.
pub fn excitation_rule<T: Real>(levels: usize) -> TriangleRule<T> {
    TriangleRule::sixteen_point().subdivided(levels)
}

/// Tests the incident fields with every RWG function.
pub fn tested_fields<T: Real>(disc: &Discretization<T>, wave: &PlaneWave<T>, rule: &TriangleRule<T>) -> TestedFields<T> {
    let mesh = &disc.mesh;
    // Per triangle: ∫ (r - v_i)·E and ∫ (r - v_i)·(n̂ × H) for each local vertex.
    let per_tri: Vec<[[C<T>; 3]; 2]> = (0..mesh.num_triangles())
        .map(|t| {
            let tri = mesh.tri_vertices(t);
            let n = mesh.normals[t];
            let (pts, wts) = rule.map(&tri, mesh.areas[t]);
            let mut out = [[czero(); 3]; 2];
            for (p, &w) in pts.iter().zip(&wts) {
                let e = wave.e_field(*p);
                let nxh = CVec3::rcross(n, wave.h_field(*p));
                for (i, v) in tri.iter().enumerate() {
                    let d = *p - *v;
                    out[0][i] = out[0][i] + e.dot_real(d) * w;
                    out[1][i] = out[1][i] + nxh.dot_real(d) * w;
                }
            }
            out
        })
        .collect();
    let mut e = vec![czero(); disc.unknowns()];
    let mut nxh = vec![czero(); disc.unknowns()];
    for (m, b) in disc.basis.iter().enumerate() {
        for (plus, (t, local, _)) in [(true, b.halves()[0]), (false, b.halves()[1])] {
            let c = b.coef(mesh, plus);
            e[m] = e[m] + per_tri[t][0][local] * c;
            nxh[m] = nxh[m] + per_tri[t][1][local] * c;
        }
    }
    TestedFields { e, nxh }
}
