//! Triangle-pair integration and matrix assembly for RWG operators.
//!
//! On a triangle pair (test `Tm`, source `Tn`) every RWG restriction is
//! `c (r - v_i)`, so one pair yields three 3x3 local blocks
//!
//! ```text
//! A_ij = ∫∫ (r - v_i)·(r' - w_j) G dS' dS
//! S    = ∫∫ G dS' dS
//! C_ij = ∫∫ ((r - v_i) × n̂_m)·(∇G × (r' - w_j)) dS' dS
//! ```
//!
//! from which the entries follow as `L_A += c_m c_n A_ij`,
//! `L_phi += -4 c_m c_n S` and `K += c_m c_n C_ij`. Because `∇G(r - r')` is
//! parallel to `r - r'`, the inner integral of the `K` block reduces to
//! `[∫ ∇G dS'] × (r - w_j)`.
//!
//! Static kernels on touching or close pairs use the closed-form inner
//! integrals of [`super::potentials`]; everything else is integrated with
//! product rules.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use super::potentials::{static_potentials, TriGeom};
use super::rules::TriangleRule;
use crate::counters::WorkCounters;
use crate::geom::{CVec3, Vec3};
use crate::kernels::{self, KernelKind, Wavenumber};
use crate::linalg::{CsrMatrix, DenseMatrix, Pattern};
use crate::mesh::Discretization;
use crate::num::{czero, lit, Real, C};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorTag {
    LA,
    LPhi,
    K,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("operator {op:?} does not accept kernel {kind:?}")]
    UnsupportedKernel { op: OperatorTag, kind: KernelKind },
    #[error("the K operator requires a closed mesh")]
    OpenMesh,
    #[error("the K operator requires outward normals (mesh encloses negative volume)")]
    InwardNormals,
    #[error("{unknowns} unknowns exceed the dense-assembly limit of {limit}")]
    TooLarge { unknowns: usize, limit: usize },
}

/// Operator, kernel kind and wavenumber for one family of matrix entries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntryKernel<T> {
    pub op: OperatorTag,
    pub kind: KernelKind,
    pub k: Wavenumber<T>,
}

impl<T: Real> EntryKernel<T> {
    pub fn new(op: OperatorTag, kind: KernelKind, k: Wavenumber<T>) -> Result<Self, QuadError> {
        let ok = match op {
            OperatorTag::LA | OperatorTag::LPhi => !kind.is_gradient(),
            OperatorTag::K => matches!(kind, KernelKind::GradG | KernelKind::GradGS | KernelKind::GradGD),
        };
        if ok {
            Ok(Self { op, kind, k })
        } else {
            Err(QuadError::UnsupportedKernel { op, kind })
        }
    }

    pub fn family(&self) -> Family<T> {
        Family::of(self.kind, self.k.k0)
    }
}

/// Kernel family driving the integration strategy. Scalar and gradient
/// kinds map onto the same family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family<T> {
    /// `1/(4πR)` and its gradient.
    Static,
    /// Full `e^{-jkR}/(4πR)`.
    Full(T),
    /// `G - G_s`.
    Dynamic(T),
    /// `G - G_s - k² G_lin` (gradient as for `Dynamic`).
    DynamicLin(T),
    /// `G_lin = -R/(8π)`.
    Linear,
}

impl<T: Real> Family<T> {
    pub fn of(kind: KernelKind, k: T) -> Self {
        match kind {
            KernelKind::G | KernelKind::GradG => Self::Full(k),
            KernelKind::GS | KernelKind::GradGS => Self::Static,
            KernelKind::GD | KernelKind::GradGD => Self::Dynamic(k),
            KernelKind::GDLin => Self::DynamicLin(k),
            KernelKind::GLin => Self::Linear,
        }
    }

    fn has_static(self) -> bool {
        matches!(self, Self::Static | Self::Full(_))
    }

    #[inline]
    fn scalar(self, r: T) -> C<T> {
        match self {
            Self::Static => Complex::new(kernels::g_static(r), T::zero()),
            Self::Full(k) => kernels::g_full(k, r),
            Self::Dynamic(k) => kernels::g_dyn(k, r),
            Self::DynamicLin(k) => kernels::g_dyn_lin(k, r),
            Self::Linear => Complex::new(kernels::g_lin(r), T::zero()),
        }
    }

    #[inline]
    fn radial(self, r: T) -> C<T> {
        match self {
            Self::Static => Complex::new(kernels::grad_static_radial(r), T::zero()),
            Self::Full(k) => kernels::grad_full_radial(k, r),
            Self::Dynamic(k) | Self::DynamicLin(k) => kernels::grad_dyn_radial(k, r),
            Self::Linear => Complex::new(lit(-1.0 / (8.0 * PI)), T::zero()),
        }
    }

    fn dynamic_part(self) -> Option<Self> {
        match self {
            Self::Full(k) => Some(Self::Dynamic(k)),
            _ => None,
        }
    }
}

/// Which local blocks to compute.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Ops {
    pub la: bool,
    pub lphi: bool,
    pub k: bool,
}

impl Ops {
    pub const EFIE: Self = Self {
        la: true,
        lphi: true,
        k: false,
    };
    pub const ALL: Self = Self {
        la: true,
        lphi: true,
        k: true,
    };

    pub fn only(op: OperatorTag) -> Self {
        Self {
            la: op == OperatorTag::LA,
            lphi: op == OperatorTag::LPhi,
            k: op == OperatorTag::K,
        }
    }
}

/// Quadrature orders and the near-singularity escalation threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Polynomial degree of the rule used on well-separated pairs.
    pub far_degree: usize,
    /// Polynomial degree of the rule used on close pairs.
    pub near_degree: usize,
    /// Midpoint refinements of the outer rule on near, non-touching pairs.
    pub near_outer_levels: usize,
    /// Gauss points per direction of the edge-graded outer rule on touching pairs.
    pub graded_points: usize,
    /// Pairs whose centroid distance is below this multiple of the mean
    /// edge length count as close.
    pub near_factor: f64,
    /// Refuse dense assembly above this many unknowns.
    pub max_dense_unknowns: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            far_degree: 5,
            near_degree: 8,
            near_outer_levels: 1,
            graded_points: 12,
            near_factor: 3.0,
            max_dense_unknowns: 10_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Relation {
    Coincident,
    Touching,
    Near,
    Far,
}

/// Local blocks of one triangle pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairBlock<T> {
    pub a: [[C<T>; 3]; 3],
    pub s: C<T>,
    pub c: [[C<T>; 3]; 3],
}

impl<T: Real> PairBlock<T> {
    fn zero() -> Self {
        Self {
            a: [[czero(); 3]; 3],
            s: czero(),
            c: [[czero(); 3]; 3],
        }
    }

    fn add(&mut self, o: &Self) {
        for i in 0..3 {
            for j in 0..3 {
                self.a[i][j] = self.a[i][j] + o.a[i][j];
                self.c[i][j] = self.c[i][j] + o.c[i][j];
            }
        }
        self.s = self.s + o.s;
    }

    /// Weighted combination `wa A - 4 wp S + wk C` (per unit RWG coefficients).
    fn combine(&self, w: &OpWeights<T>) -> [[C<T>; 3]; 3] {
        let phi = self.s * w.lphi * lit::<T>(-4.0);
        let mut out = [[czero(); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = self.a[i][j] * w.la + phi + self.c[i][j] * w.k;
            }
        }
        out
    }
}

/// Complex weights of a linear combination of the three operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpWeights<T> {
    pub la: C<T>,
    pub lphi: C<T>,
    pub k: C<T>,
}

impl<T: Real> OpWeights<T> {
    pub fn only(op: OperatorTag) -> Self {
        let (one, zero) = (Complex::new(T::one(), T::zero()), czero());
        match op {
            OperatorTag::LA => Self { la: one, lphi: zero, k: zero },
            OperatorTag::LPhi => Self { la: zero, lphi: one, k: zero },
            OperatorTag::K => Self { la: zero, lphi: zero, k: one },
        }
    }

    fn ops(&self) -> Ops {
        let z = czero::<T>();
        Ops {
            la: self.la != z,
            lphi: self.lphi != z,
            k: self.k != z,
        }
    }
}

/// Sparse near-region matrices produced by [`PairIntegrator::assemble_sparse`].
#[derive(Clone, Debug, Default)]
pub struct SparseSet<T> {
    pub la: Option<CsrMatrix<T>>,
    pub lphi: Option<CsrMatrix<T>>,
    pub k: Option<CsrMatrix<T>>,
}

/// Integrates operator entries over RWG supports of one discretization.
pub struct PairIntegrator<'a, T> {
    pub disc: &'a Discretization<T>,
    pub geo: Vec<TriGeom<T>>,
    pub cfg: QuadratureConfig,
    far: TriangleRule<T>,
    near: TriangleRule<T>,
    near_outer: TriangleRule<T>,
    graded: TriangleRule<T>,
    gram_rule: TriangleRule<T>,
    counters: Option<Arc<WorkCounters>>,
}

impl<'a, T: Real> PairIntegrator<'a, T> {
    pub fn new(disc: &'a Discretization<T>, cfg: QuadratureConfig) -> Self {
        let geo = (0..disc.mesh.num_triangles())
            .map(|t| TriGeom::new(disc.mesh.tri_vertices(t)))
            .collect();
        Self {
            disc,
            geo,
            cfg,
            far: TriangleRule::for_degree(cfg.far_degree),
            near: TriangleRule::for_degree(cfg.near_degree),
            near_outer: TriangleRule::for_degree(cfg.near_degree).subdivided(cfg.near_outer_levels),
            graded: TriangleRule::edge_graded(cfg.graded_points),
            gram_rule: TriangleRule::seven_point(),
            counters: None,
        }
    }

    pub fn with_counters(mut self, counters: Arc<WorkCounters>) -> Self {
        self.counters = Some(counters);
        self
    }

    /// Fails unless the mesh is closed with outward normals, as `K` requires.
    pub fn check_k(&self) -> Result<(), QuadError> {
        let mesh = &self.disc.mesh;
        if !mesh.is_closed() {
            return Err(QuadError::OpenMesh);
        }
        if mesh.signed_volume() <= T::zero() {
            return Err(QuadError::InwardNormals);
        }
        Ok(())
    }

    fn relation(&self, tm: usize, tn: usize) -> Relation {
        if tm == tn {
            return Relation::Coincident;
        }
        let (a, b) = (&self.disc.mesh.triangles[tm], &self.disc.mesh.triangles[tn]);
        if a.iter().any(|v| b.contains(v)) {
            return Relation::Touching;
        }
        let (ga, gb) = (&self.geo[tm], &self.geo[tn]);
        let scale = (ga.mean_edge() + gb.mean_edge()) * lit(0.5);
        if (ga.centroid - gb.centroid).norm() < scale * lit(self.cfg.near_factor) {
            Relation::Near
        } else {
            Relation::Far
        }
    }

    fn coplanar(&self, tm: usize, tn: usize) -> bool {
        let (ga, gb) = (&self.geo[tm], &self.geo[tn]);
        let tol = lit::<T>(1e-10);
        let off = ga.n.dot(gb.centroid - ga.centroid).mag();
        (T::one() - ga.n.dot(gb.n).mag()) < tol && off < tol * ga.mean_edge()
    }

    /// Local blocks of the pair `(tm, tn)` for the given family.
    pub fn block(&self, tm: usize, tn: usize, fam: Family<T>, ops: Ops) -> PairBlock<T> {
        let rel = self.relation(tm, tn);
        let residue = ops.k && rel == Relation::Coincident && fam.has_static();
        let ops = Ops {
            k: ops.k && !self.coplanar(tm, tn),
            ..ops
        };
        let mut out = PairBlock::zero();
        if residue {
            let g = self.gram_block(tm);
            for i in 0..3 {
                for j in 0..3 {
                    out.c[i][j] = Complex::new(g[i][j] * lit(-0.5), T::zero());
                }
            }
        }
        if !(ops.la || ops.lphi || ops.k) {
            return out;
        }
        let close = rel != Relation::Far;
        if fam.has_static() && close {
            let outer = if rel == Relation::Near { &self.near_outer } else { &self.graded };
            out.add(&self.static_analytic(tm, tn, outer, ops));
            if let Some(c) = &self.counters {
                c.add_singular(1);
            }
            if let Some(dynf) = fam.dynamic_part() {
                out.add(&self.regular(tm, tn, dynf, &self.near, &self.near, ops));
            }
        } else if close {
            out.add(&self.regular(tm, tn, fam, &self.near, &self.near, ops));
        } else {
            out.add(&self.regular(tm, tn, fam, &self.far, &self.far, ops));
        }
        out
    }

    /// `∫ (r - v_i)·(r - v_j) dS` over one triangle.
    pub fn gram_block(&self, t: usize) -> [[T; 3]; 3] {
        let g = &self.geo[t];
        let mut out = [[T::zero(); 3]; 3];
        for (b, &w) in self.gram_rule.bary.iter().zip(&self.gram_rule.weights) {
            let r = g.point(b);
            let wa = w * g.area;
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = out[i][j] + wa * (r - g.v[i]).dot(r - g.v[j]);
                }
            }
        }
        out
    }

    #[inline]
    #[allow(clippy::too_many_arguments)]
    fn accumulate(
        out: &mut PairBlock<T>,
        gm: &TriGeom<T>,
        gn: &TriGeom<T>,
        r: Vec3<T>,
        w: T,
        s0: C<T>,
        s1: CVec3<T>,
        grad: CVec3<T>,
        ops: Ops,
    ) {
        let rv: [Vec3<T>; 3] = [r - gm.v[0], r - gm.v[1], r - gm.v[2]];
        if ops.la {
            for j in 0..3 {
                let q = s1 + (gn.centroid - gn.v[j]).scale_c(s0);
                for i in 0..3 {
                    out.a[i][j] = out.a[i][j] + q.dot_real(rv[i]) * w;
                }
            }
        }
        if ops.lphi {
            out.s = out.s + s0 * w;
        }
        if ops.k {
            let u: [Vec3<T>; 3] = [rv[0].cross(gm.n), rv[1].cross(gm.n), rv[2].cross(gm.n)];
            for j in 0..3 {
                let v = grad.cross_real(r - gn.v[j]);
                for i in 0..3 {
                    out.c[i][j] = out.c[i][j] + v.dot_real(u[i]) * w;
                }
            }
        }
    }

    fn static_analytic(&self, tm: usize, tn: usize, outer: &TriangleRule<T>, ops: Ops) -> PairBlock<T> {
        let (gm, gn) = (&self.geo[tm], &self.geo[tn]);
        let scale = lit::<T>(1.0 / (4.0 * PI));
        let mut out = PairBlock::zero();
        for (b, &w) in outer.bary.iter().zip(&outer.weights) {
            let r = gm.point(b);
            let p = static_potentials(gn, r);
            let s0 = Complex::new(p.i1 * scale, T::zero());
            let s1 = (p.ivec + (r - gn.centroid) * p.i1) * scale;
            let grad = p.grad * scale;
            let one = Complex::new(T::one(), T::zero());
            Self::accumulate(&mut out, gm, gn, r, w * gm.area, s0, s1.scale_c(one), grad.scale_c(one), ops);
        }
        out
    }

    fn regular(
        &self,
        tm: usize,
        tn: usize,
        fam: Family<T>,
        outer: &TriangleRule<T>,
        inner: &TriangleRule<T>,
        ops: Ops,
    ) -> PairBlock<T> {
        let (gm, gn) = (&self.geo[tm], &self.geo[tn]);
        let src: Vec<(Vec3<T>, T)> = inner
            .bary
            .iter()
            .zip(&inner.weights)
            .map(|(b, &w)| (gn.point(b), w * gn.area))
            .collect();
        let mut out = PairBlock::zero();
        let want_scalar = ops.la || ops.lphi;
        for (b, &w) in outer.bary.iter().zip(&outer.weights) {
            let r = gm.point(b);
            let mut s0 = czero();
            let mut s1 = CVec3::zero();
            let mut grad = CVec3::zero();
            for &(rp, wq) in &src {
                let dv = r - rp;
                let d = dv.norm();
                if want_scalar {
                    let val = fam.scalar(d) * wq;
                    s0 = s0 + val;
                    s1 += (rp - gn.centroid).scale_c(val);
                }
                if ops.k && d > T::zero() {
                    grad += (dv / d).scale_c(fam.radial(d) * wq);
                }
            }
            Self::accumulate(&mut out, gm, gn, r, w * gm.area, s0, s1, grad, ops);
        }
        out
    }

    fn halves(&self, m: usize) -> [(usize, usize, T); 2] {
        let b = &self.disc.basis[m];
        [
            (b.tri_plus, b.local_plus, b.coef(&self.disc.mesh, true)),
            (b.tri_minus, b.local_minus, b.coef(&self.disc.mesh, false)),
        ]
    }

    /// One matrix entry `(m, n)` of the requested operator and kernel.
    pub fn entry(&self, m: usize, n: usize, kernel: EntryKernel<T>) -> Result<C<T>, QuadError> {
        if kernel.op == OperatorTag::K {
            self.check_k()?;
        }
        let w = OpWeights::only(kernel.op);
        let fam = kernel.family();
        let mut sum = czero();
        for (tm, i, cm) in self.halves(m) {
            for (tn, j, cn) in self.halves(n) {
                let blk = self.block(tm, tn, fam, w.ops()).combine(&w);
                sum = sum + blk[i][j] * (cm * cn);
            }
        }
        Ok(sum)
    }

    /// Dense matrix of `Σ w_op · op` over all basis pairs for one family.
    pub fn assemble_dense(&self, fam: Family<T>, w: OpWeights<T>) -> Result<DenseMatrix<T>, QuadError> {
        let n = self.disc.unknowns();
        if n > self.cfg.max_dense_unknowns {
            return Err(QuadError::TooLarge {
                unknowns: n,
                limit: self.cfg.max_dense_unknowns,
            });
        }
        let ops = w.ops();
        if ops.k {
            self.check_k()?;
        }
        let nt = self.disc.mesh.num_triangles();
        let mut z = DenseMatrix::zeros(n, n);
        let chunk = 16;
        let sources: Vec<usize> = (0..nt).filter(|&t| !self.disc.tri_map[t].is_empty()).collect();
        for start in (0..nt).step_by(chunk) {
            let tests: Vec<usize> = (start..(start + chunk).min(nt))
                .filter(|&t| !self.disc.tri_map[t].is_empty())
                .collect();
            let blocks: Vec<Vec<[[C<T>; 3]; 3]>> = tests
                .par_iter()
                .map(|&tm| {
                    sources
                        .iter()
                        .map(|&tn| self.block(tm, tn, fam, ops).combine(&w))
                        .collect()
                })
                .collect();
            for (&tm, row) in tests.iter().zip(&blocks) {
                for (&tn, blk) in sources.iter().zip(row) {
                    for &(m, i, cm) in &self.disc.tri_map[tm] {
                        for &(nn, j, cn) in &self.disc.tri_map[tn] {
                            let e = z.get_mut(m, nn);
                            *e = *e + blk[i][j] * (cm * cn);
                        }
                    }
                }
            }
        }
        Ok(z)
    }

    /// Sparse matrices on `pattern` (basis-pair indices) for the selected operators.
    pub fn assemble_sparse(&self, pattern: &Arc<Pattern>, fam: Family<T>, ops: Ops) -> Result<SparseSet<T>, QuadError> {
        if ops.k {
            self.check_k()?;
        }
        let disc = self.disc;
        let nt = disc.mesh.num_triangles();
        let mut la = ops.la.then(|| CsrMatrix::zeros(pattern.clone()));
        let mut lphi = ops.lphi.then(|| CsrMatrix::zeros(pattern.clone()));
        let mut kk = ops.k.then(|| CsrMatrix::zeros(pattern.clone()));
        let partners = |tm: usize| -> Vec<usize> {
            let mut v = Vec::new();
            for &(m, _, _) in &disc.tri_map[tm] {
                for &n in pattern.row(m) {
                    let b = &disc.basis[n];
                    v.push(b.tri_plus);
                    v.push(b.tri_minus);
                }
            }
            v.sort_unstable();
            v.dedup();
            v
        };
        let chunk = 64;
        for start in (0..nt).step_by(chunk) {
            let tests: Vec<usize> = (start..(start + chunk).min(nt)).collect();
            let blocks: Vec<Vec<(usize, PairBlock<T>)>> = tests
                .par_iter()
                .map(|&tm| {
                    partners(tm)
                        .into_iter()
                        .map(|tn| (tn, self.block(tm, tn, fam, ops)))
                        .collect()
                })
                .collect();
            for (&tm, row) in tests.iter().zip(&blocks) {
                for (tn, blk) in row {
                    for &(m, i, cm) in &disc.tri_map[tm] {
                        for &(n, j, cn) in &disc.tri_map[*tn] {
                            let Some(pos) = pattern.find(m, n) else { continue };
                            let c = cm * cn;
                            if let Some(a) = la.as_mut() {
                                a.values[pos] = a.values[pos] + blk.a[i][j] * c;
                            }
                            if let Some(p) = lphi.as_mut() {
                                p.values[pos] = p.values[pos] + blk.s * (c * lit(-4.0));
                            }
                            if let Some(k) = kk.as_mut() {
                                k.values[pos] = k.values[pos] + blk.c[i][j] * c;
                            }
                        }
                    }
                }
            }
        }
        if let Some(c) = &self.counters {
            let nops = [ops.la, ops.lphi, ops.k].iter().filter(|&&b| b).count() as u64;
            c.add_near_entries(pattern.nnz() as u64 * nops);
        }
        Ok(SparseSet { la, lphi, k: kk })
    }

    /// Gram matrix `∫ f_m · f_n dS` on `pattern`.
    pub fn gram(&self, pattern: &Arc<Pattern>) -> CsrMatrix<T> {
        let disc = self.disc;
        let mut g = CsrMatrix::zeros(pattern.clone());
        for t in 0..disc.mesh.num_triangles() {
            let blk = self.gram_block(t);
            for &(m, i, cm) in &disc.tri_map[t] {
                for &(n, j, cn) in &disc.tri_map[t] {
                    if let Some(pos) = pattern.find(m, n) {
                        g.values[pos] = g.values[pos] + Complex::new(blk[i][j] * cm * cn, T::zero());
                    }
                }
            }
        }
        g
    }
}
