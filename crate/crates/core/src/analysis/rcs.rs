//! Far-field radiation of RWG surface currents.

use num_complex::Complex;

use crate::geom::{CVec3, Vec3};
use crate::kernels::{eta0, Wavenumber};
use crate::mesh::Discretization;
use crate::num::{lit, Real, C};
use crate::quadrature::TriangleRule;

/// RCS (m²) radiated by `J = Σ x_n f_n` towards each unit vector in
/// `directions`, for an incident field of amplitude `e_inc`:
/// `σ = 4π r²|E_s|²/|E_inc|² = k²η0² |F_⊥|² / (4π |E_inc|²)` with
/// `F = ∫ J(r') e^{jk r̂·r'} dS'`.
pub fn far_field_rcs<T: Real>(
    disc: &Discretization<T>,
    current: &[C<T>],
    k: Wavenumber<T>,
    directions: &[Vec3<T>],
    e_inc: T,
) -> Vec<T> {
    let mesh = &disc.mesh;
    let rule = TriangleRule::<T>::sixteen_point();
    // Current samples at every quadrature point, scaled by the weight.
    let mut samples: Vec<(Vec3<T>, CVec3<T>)> = Vec::with_capacity(mesh.num_triangles() * rule.len());
    for t in 0..mesh.num_triangles() {
        let tri = mesh.tri_vertices(t);
        let (pts, wts) = rule.map(&tri, mesh.areas[t]);
        for (p, w) in pts.into_iter().zip(wts) {
            let mut j = CVec3::zero();
            for &(m, local, coef) in &disc.tri_map[t] {
                let f = (p - tri[local]) * (coef * w);
                j = j + f.scale_c(current[m]);
            }
            samples.push((p, j));
        }
    }
    let factor = (k.k0 * lit::<T>(eta0())).powi(2) / (lit::<T>(4.0 * std::f64::consts::PI) * e_inc * e_inc);
    directions
        .iter()
        .map(|&d| {
            let d = d.normalized();
            let mut f = CVec3::zero();
            for (p, j) in &samples {
                let ph = k.k0 * d.dot(*p);
                f = f + j.scale(Complex::new(ph.cos(), ph.sin()));
            }
            let radial = f.dot_real(d);
            let perp = f - d.scale_c(radial);
            perp.norm_sq() * factor
        })
        .collect()
}

/// Unit vector at polar angle `theta` and azimuth `phi`.
pub fn direction<T: Real>(theta: T, phi: T) -> Vec3<T> {
    Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}
