//! Moment-matching projection of RWG sources onto grid stencils.
//!
//! For a density `ρ` supported near the stencil with nodes `x_a, y_b, z_c`,
//! the weights `w_abc = ∫ ρ(r) L_a(x) L_b(y) L_c(z) dS` (tensor-product
//! Lagrange polynomials of the stencil) reproduce every moment
//! `∫ ρ x^α y^β z^γ dS` with `α, β, γ ≤ n`. The same weights serve as the
//! interpolation rows for Galerkin testing.

use rayon::prelude::*;

use super::AimGrid;
use crate::geom::Vec3;
use crate::mesh::Discretization;
use crate::num::{from_usize, Real, C};
use crate::quadrature::TriangleRule;

/// Which density of a basis function is projected.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Cartesian components of the current `f`.
    A,
    /// Surface divergence (charge) `∇·f`.
    Phi,
    /// Components of `f × n̂`, the testing side of the double-layer operator.
    K,
}

impl Flavor {
    pub fn components(self) -> usize {
        match self {
            Flavor::Phi => 1,
            Flavor::A | Flavor::K => 3,
        }
    }
}

/// Stencil weights of every basis function for one flavor.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection<T> {
    pub flavor: Flavor,
    pub anchors: Vec<[usize; 3]>,
    /// Stencil nodes per basis function.
    pub stencil: usize,
    pub comps: usize,
    /// Layout `[basis][component][local node]`.
    pub weights: Vec<T>,
}

/// Values of the `n + 1` Lagrange polynomials on nodes `0..=n` at `t`.
fn lagrange_row<T: Real>(n: usize, t: T, out: &mut [T]) {
    for (a, o) in out.iter_mut().enumerate().take(n + 1) {
        let mut v = T::one();
        for b in 0..=n {
            if b != a {
                v = v * (t - from_usize(b)) / (from_usize::<T>(a) - from_usize(b));
            }
        }
        *o = v;
    }
}

/// Weights that project a unit point source at `p` onto the stencil at `anchor`.
pub fn point_weights<T: Real>(grid: &AimGrid<T>, anchor: [usize; 3], p: Vec3<T>) -> Vec<T> {
    let n = grid.order;
    let d = (p - grid.node(anchor)) / grid.spacing;
    let mut l = vec![vec![T::zero(); n + 1]; 3];
    for (a, la) in l.iter_mut().enumerate() {
        lagrange_row(n, d[a], la);
    }
    let mut out = Vec::with_capacity(grid.stencil_len());
    for zc in &l[2] {
        for yb in &l[1] {
            for xa in &l[0] {
                out.push(*xa * *yb * *zc);
            }
        }
    }
    out
}

impl<T: Real> Projection<T> {
    pub fn build(disc: &Discretization<T>, grid: &AimGrid<T>, flavor: Flavor) -> Self {
        let n = grid.order;
        let s1 = n + 1;
        let stencil = grid.stencil_len();
        let comps = flavor.components();
        // Density is at most linear; the Lagrange product has degree 3n.
        let rule = TriangleRule::<T>::collapsed_gauss(3 * n + 1);
        let mesh = &disc.mesh;
        let per: Vec<([usize; 3], Vec<T>)> = disc
            .basis
            .par_iter()
            .map(|b| {
                let anchor = grid.anchor(b.support_centroid(mesh));
                let corner = grid.node(anchor);
                let mut w = vec![T::zero(); comps * stencil];
                let mut lx = vec![T::zero(); s1];
                let mut ly = vec![T::zero(); s1];
                let mut lz = vec![T::zero(); s1];
                for plus in [true, false] {
                    let (t, free) = if plus {
                        (b.tri_plus, b.free_plus)
                    } else {
                        (b.tri_minus, b.free_minus)
                    };
                    let tri = mesh.tri_vertices(t);
                    let coef = b.coef(mesh, plus);
                    let div = b.divergence(mesh, t);
                    let normal = mesh.normals[t];
                    let p0 = mesh.vertices[free];
                    let (pts, wts) = rule.map(&tri, mesh.areas[t]);
                    for (r, wq) in pts.into_iter().zip(wts) {
                        let rho: [T; 3] = match flavor {
                            Flavor::A => ((r - p0) * coef).to_array(),
                            Flavor::Phi => [div, T::zero(), T::zero()],
                            Flavor::K => ((r - p0).cross(normal) * coef).to_array(),
                        };
                        let d = (r - corner) / grid.spacing;
                        lagrange_row(n, d.x, &mut lx);
                        lagrange_row(n, d.y, &mut ly);
                        lagrange_row(n, d.z, &mut lz);
                        let mut q = 0;
                        for zc in &lz {
                            for yb in &ly {
                                let yz = *zc * *yb * wq;
                                for xa in &lx {
                                    let l = yz * *xa;
                                    for c in 0..comps {
                                        w[c * stencil + q] = w[c * stencil + q] + rho[c] * l;
                                    }
                                    q += 1;
                                }
                            }
                        }
                    }
                }
                (anchor, w)
            })
            .collect();
        let mut anchors = Vec::with_capacity(per.len());
        let mut weights = Vec::with_capacity(per.len() * comps * stencil);
        for (a, w) in per {
            anchors.push(a);
            weights.extend(w);
        }
        Self {
            flavor,
            anchors,
            stencil,
            comps,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    /// Weights of basis `m`, component `c`, in stencil order.
    #[inline]
    pub fn weights(&self, m: usize, c: usize) -> &[T] {
        let off = (m * self.comps + c) * self.stencil;
        &self.weights[off..off + self.stencil]
    }

    /// `out[node] += Σ_m w_{m,c}(node) x_m`.
    pub fn scatter(&self, grid: &AimGrid<T>, c: usize, x: &[C<T>], out: &mut [C<T>]) {
        for (m, &xm) in x.iter().enumerate() {
            if xm == C::new(T::zero(), T::zero()) {
                continue;
            }
            for (node, &w) in grid.stencil_nodes(self.anchors[m]).zip(self.weights(m, c)) {
                out[node] = out[node] + xm * w;
            }
        }
    }

    /// `y_m += alpha Σ_node w_{m,c}(node) field[node]`.
    pub fn gather(&self, grid: &AimGrid<T>, c: usize, field: &[C<T>], alpha: C<T>, y: &mut [C<T>]) {
        y.par_iter_mut().enumerate().for_each(|(m, ym)| {
            let mut acc = C::new(T::zero(), T::zero());
            for (node, &w) in grid.stencil_nodes(self.anchors[m]).zip(self.weights(m, c)) {
                acc = acc + field[node] * w;
            }
            *ym = *ym + acc * alpha;
        });
    }

    /// Raw little-endian bytes of anchors and weights, for hashing and caching.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.anchors.len() * 24 + self.weights.len() * 8);
        for a in &self.anchors {
            for &i in a {
                out.extend((i as u64).to_le_bytes());
            }
        }
        for w in &self.weights {
            out.extend(w.to_f64().unwrap().to_le_bytes());
        }
        out
    }
}
