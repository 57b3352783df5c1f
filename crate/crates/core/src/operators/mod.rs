//! Complete discrete operators in the three solver modes.
//!
//! An [`OperatorSet`] holds everything that does not depend on frequency;
//! [`OperatorSet::bind`] produces a [`BoundOperator`] for one wavenumber and
//! one linear combination of `L_A`, `L_phi` and `K`. The bound operator is
//! immutable, so its matvec can be called concurrently.
//!
//! Grid-path matvec in AIMx mode:
//!
//! ```text
//! y = (L_s,NR - L_s,P) x + k² (L_lin,OV - L_lin,P) x + W H(G) P x
//! ```
//!
//! where the static (`_s`) and linear-term (`_lin`) matrices are frequency
//! free and the last sum is restricted to pairs with overlapping supports.
//! Conventional AIM replaces the static kernel with the full kernel and
//! rebuilds both near matrices at every frequency.

mod cache;

use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::aimgrid::{
    build_near_map, build_precorrection, grid_entry, AimGrid, Convolution, Flavor, GridConfig, GridError, GridKernels,
    Projection,
};
use crate::counters::WorkCounters;
use crate::fft::Fft3;
use crate::kernels::{eta0, GradSelfTerm, KernelKind, Wavenumber};
use crate::linalg::{CsrMatrix, DenseMatrix, Pattern};
use crate::mesh::Discretization;
use crate::num::{czero, lit, Real, C};
use crate::quadrature::{Family, OpWeights, OperatorTag, Ops, PairIntegrator, QuadError, QuadratureConfig, SparseSet};

pub use cache::{cache_dir_from_env, CACHE_ENV};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Dense matrices from direct integration.
    Direct,
    /// Conventional AIM: full-kernel near region rebuilt per frequency.
    Aim,
    /// Static near region built once; all frequency dependence on the grid.
    Aimx,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Direct => "direct",
            Mode::Aim => "aim",
            Mode::Aimx => "aimx",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Mode::Direct),
            "aim" => Ok(Mode::Aim),
            "aimx" => Ok(Mode::Aimx),
            _ => Err(format!("unknown mode '{s}' (expected direct, aim or aimx)")),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum OperatorError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("vector has length {got}, expected {expected}")]
    Dimension { got: usize, expected: usize },
    #[error("wavenumber must be positive")]
    ZeroWavenumber,
    #[error("the linear-term option is only available in aimx mode")]
    LinearTermMode,
    #[error("operator {0:?} was not assembled")]
    Missing(OperatorTag),
    #[error("cache file {path}: {reason}")]
    Cache { path: String, reason: String },
}

/// Everything that shapes an assembled operator set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorConfig {
    pub mode: Mode,
    pub ops: Ops,
    pub grid: GridConfig,
    pub quadrature: QuadratureConfig,
    /// Integrate the `-R/(8π)` term of the kernel directly on pairs with
    /// overlapping supports (AIMx only).
    pub linear_term: bool,
    pub grad_self: GradSelfTerm,
}

impl OperatorConfig {
    pub fn new(mode: Mode, ops: Ops) -> Self {
        Self {
            mode,
            ops,
            grid: GridConfig::default(),
            quadrature: QuadratureConfig::default(),
            linear_term: false,
            grad_self: GradSelfTerm::default(),
        }
    }
}

/// Grid, projections and near-region patterns shared by all frequencies.
pub struct GridParts<T: Real> {
    pub grid: AimGrid<T>,
    pub pa: Projection<T>,
    pub pphi: Projection<T>,
    pub pk: Option<Projection<T>>,
    /// Basis pairs handled by direct integration.
    pub near: Arc<Pattern>,
    /// Basis pairs sharing a triangle; a subset of `near`.
    pub overlap: Arc<Pattern>,
    /// Position in `near` of every `overlap` entry.
    overlap_pos: Vec<usize>,
    fft: Arc<Fft3<T>>,
}

/// Near-region direct entries and the grid path's entries on the same pairs.
#[derive(Clone, Debug, Default)]
pub struct NearParts<T> {
    pub near: SparseSet<T>,
    pub pre: SparseSet<T>,
    /// Linear-term entries on `overlap` (direct, then grid path).
    pub lin_near: Option<SparseSet<T>>,
    pub lin_pre: Option<SparseSet<T>>,
}

impl<T: Real> NearParts<T> {
    /// SHA-256 over every stored pattern and value.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        let sets = [Some(&self.near), Some(&self.pre), self.lin_near.as_ref(), self.lin_pre.as_ref()];
        for set in sets.into_iter().flatten() {
            for m in [&set.la, &set.lphi, &set.k] {
                match m {
                    Some(m) => {
                        h.update([1u8]);
                        hash_pattern(&mut h, &m.pattern);
                        h.update(m.value_bytes());
                    }
                    None => h.update([0u8]),
                }
            }
        }
        hex(&h.finalize())
    }
}

fn hash_pattern(h: &mut Sha256, p: &Pattern) {
    h.update((p.rows as u64).to_le_bytes());
    h.update((p.cols as u64).to_le_bytes());
    for &v in p.row_ptr.iter().chain(&p.col_idx) {
        h.update((v as u64).to_le_bytes());
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Frequency-independent parts of one discrete operator.
pub struct OperatorSet<T: Real> {
    pub disc: Arc<Discretization<T>>,
    pub config: OperatorConfig,
    pub counters: Arc<WorkCounters>,
    grid: Option<Arc<GridParts<T>>>,
    statics: Option<Arc<NearParts<T>>>,
    /// Static self-pair entries `(L_A, L_phi, K)` per basis function.
    static_diag: Vec<[C<T>; 3]>,
    cache_hit: bool,
}

/// Basis pairs whose supports share a triangle.
pub fn overlap_pattern<T: Real>(disc: &Discretization<T>) -> Pattern {
    let mut rows = vec![Vec::new(); disc.unknowns()];
    for list in &disc.tri_map {
        for &(m, _, _) in list {
            rows[m].extend(list.iter().map(|&(n, _, _)| n));
        }
    }
    Pattern::from_rows(disc.unknowns(), rows)
}

fn union(a: &Pattern, b: &Pattern) -> Pattern {
    let rows = (0..a.rows).map(|i| a.row(i).iter().chain(b.row(i)).copied().collect()).collect();
    Pattern::from_rows(a.cols, rows)
}

fn diag_pattern(n: usize) -> Arc<Pattern> {
    Arc::new(Pattern::from_rows(n, (0..n).map(|i| vec![i]).collect()))
}

impl<T: Real> OperatorSet<T> {
    /// Assembles the frequency-independent parts. `k_max` sizes the grid and
    /// is ignored in direct mode. With `cache_dir`, AIMx static matrices are
    /// read from or written to a file keyed by their inputs.
    pub fn assemble(
        disc: Arc<Discretization<T>>,
        config: OperatorConfig,
        k_max: T,
        counters: Arc<WorkCounters>,
        cache_dir: Option<&Path>,
    ) -> Result<Self, OperatorError> {
        if config.linear_term && config.mode != Mode::Aimx {
            return Err(OperatorError::LinearTermMode);
        }
        let integ = PairIntegrator::new(&disc, config.quadrature).with_counters(counters.clone());
        if config.ops.k {
            integ.check_k()?;
        }
        let mut set = Self {
            disc: disc.clone(),
            config,
            counters: counters.clone(),
            grid: None,
            statics: None,
            static_diag: Vec::new(),
            cache_hit: false,
        };
        if config.mode == Mode::Direct {
            if disc.unknowns() > config.quadrature.max_dense_unknowns {
                return Err(QuadError::TooLarge {
                    unknowns: disc.unknowns(),
                    limit: config.quadrature.max_dense_unknowns,
                }
                .into());
            }
            set.static_diag = static_diagonal(&integ, config.ops, disc.unknowns())?;
            return Ok(set);
        }
        if !(k_max > T::zero()) {
            return Err(OperatorError::ZeroWavenumber);
        }
        let grid = AimGrid::build(&disc.mesh, &config.grid, k_max)?;
        let key = cache::key(&disc, &grid, &config);
        if config.mode == Mode::Aimx {
            if let Some(dir) = cache_dir {
                if let Some((parts, statics)) = cache::load(dir, &key, &grid)? {
                    set.static_diag = diagonal_of(&statics.near, disc.unknowns());
                    set.grid = Some(Arc::new(parts));
                    set.statics = Some(Arc::new(statics));
                    set.cache_hit = true;
                    return Ok(set);
                }
            }
        }
        let parts = Arc::new(grid_parts(&disc, grid, config));
        if config.mode == Mode::Aimx {
            let statics = static_parts(&integ, &parts, config, &counters)?;
            set.static_diag = diagonal_of(&statics.near, disc.unknowns());
            if let Some(dir) = cache_dir {
                cache::store(dir, &key, &parts, &statics)?;
            }
            set.statics = Some(Arc::new(statics));
        } else {
            set.static_diag = static_diagonal(&integ, config.ops, disc.unknowns())?;
        }
        set.grid = Some(parts);
        Ok(set)
    }

    pub fn mode(&self) -> Mode {
        self.config.mode
    }

    pub fn unknowns(&self) -> usize {
        self.disc.unknowns()
    }

    pub fn grid(&self) -> Option<&GridParts<T>> {
        self.grid.as_deref()
    }

    /// Stored static near-region matrices (AIMx only).
    pub fn statics(&self) -> Option<&NearParts<T>> {
        self.statics.as_deref()
    }

    /// Whether the static matrices came from the disk cache.
    pub fn cache_hit(&self) -> bool {
        self.cache_hit
    }

    /// Content hash of the stored static matrices (AIMx only).
    pub fn static_hash(&self) -> Option<String> {
        self.statics.as_ref().map(|s| s.content_hash())
    }

    /// Diagonal of `Σ w_op op` with the static kernel, taken from stored entries.
    pub fn static_diagonal(&self, w: OpWeights<T>) -> Vec<C<T>> {
        self.static_diag.iter().map(|d| w.la * d[0] + w.lphi * d[1] + w.k * d[2]).collect()
    }

    /// Diagonal of `Σ w_op op` with the full kernel at `k`: stored static
    /// self entries plus directly integrated dynamic parts, which are smooth
    /// and need no singularity extraction.
    pub fn fullwave_diagonal(&self, k: Wavenumber<T>, w: OpWeights<T>) -> Result<Vec<C<T>>, OperatorError> {
        let n = self.unknowns();
        let integ = PairIntegrator::new(&self.disc, self.config.quadrature);
        let set = integ.assemble_sparse(&diag_pattern(n), Family::Dynamic(k.k0), self.live_ops(w))?;
        let dynamic = diagonal_of(&set, n);
        Ok(self
            .static_diagonal(w)
            .into_iter()
            .zip(dynamic)
            .map(|(s, d)| s + w.la * d[0] + w.lphi * d[1] + w.k * d[2])
            .collect())
    }

    fn live_ops(&self, w: OpWeights<T>) -> Ops {
        let z = czero::<T>();
        Ops {
            la: self.config.ops.la && w.la != z,
            lphi: self.config.ops.lphi && w.lphi != z,
            k: self.config.ops.k && w.k != z,
        }
    }

    fn check_weights(&self, w: OpWeights<T>) -> Result<(), OperatorError> {
        let z = czero::<T>();
        for (on, wt, tag) in [
            (self.config.ops.la, w.la, OperatorTag::LA),
            (self.config.ops.lphi, w.lphi, OperatorTag::LPhi),
            (self.config.ops.k, w.k, OperatorTag::K),
        ] {
            if !on && wt != z {
                return Err(OperatorError::Missing(tag));
            }
        }
        Ok(())
    }

    /// Operator `Σ w_op op` at wavenumber `k`.
    pub fn bind(&self, k: Wavenumber<T>, w: OpWeights<T>) -> Result<BoundOperator<T>, OperatorError> {
        if !(k.k0 > T::zero()) {
            return Err(OperatorError::ZeroWavenumber);
        }
        self.check_weights(w)?;
        let ops = self.live_ops(w);
        let n = self.unknowns();
        let integ = PairIntegrator::new(&self.disc, self.config.quadrature).with_counters(self.counters.clone());
        let Some(parts) = self.grid.clone() else {
            let dense = integ.assemble_dense(Family::Full(k.k0), w)?;
            return Ok(BoundOperator {
                n,
                k,
                weights: w,
                ops,
                body: Body::Dense(dense),
                counters: self.counters.clone(),
            });
        };
        let fft = parts.fft.clone();
        let scalar = (ops.la || ops.lphi).then(|| {
            Convolution::build_with(&parts.grid, KernelKind::G, k, self.config.grad_self, fft.clone())
                .with_counters(self.counters.clone())
        });
        let gradient = ops.k.then(|| {
            Convolution::build_with(&parts.grid, KernelKind::GradG, k, self.config.grad_self, fft.clone())
                .with_counters(self.counters.clone())
        });
        let near = match &self.statics {
            Some(s) => s.clone(),
            None => {
                let near = integ.assemble_sparse(&parts.near, Family::Full(k.k0), ops)?;
                let kern = GridKernels {
                    grid: &parts.grid,
                    pa: &parts.pa,
                    pphi: &parts.pphi,
                    pk: parts.pk.as_ref(),
                    scalar: scalar.as_ref(),
                    gradient: gradient.as_ref(),
                };
                let pre = build_precorrection(&kern, &parts.near, ops, Some(&self.counters));
                Arc::new(NearParts {
                    near,
                    pre,
                    lin_near: None,
                    lin_pre: None,
                })
            }
        };
        let sparse = combine(&parts, &near, w, k.k0);
        Ok(BoundOperator {
            n,
            k,
            weights: w,
            ops,
            body: Body::Grid {
                sparse,
                parts,
                near,
                scalar,
                gradient,
            },
            counters: self.counters.clone(),
        })
    }
}

fn grid_parts<T: Real>(disc: &Discretization<T>, grid: AimGrid<T>, config: OperatorConfig) -> GridParts<T> {
    let pa = Projection::build(disc, &grid, Flavor::A);
    let pphi = Projection::build(disc, &grid, Flavor::Phi);
    let pk = config.ops.k.then(|| Projection::build(disc, &grid, Flavor::K));
    let overlap = overlap_pattern(disc);
    let near = union(&build_near_map(&grid, &pa.anchors, config.grid.near_radius()), &overlap);
    let overlap_pos = overlap.iter().map(|(i, j)| near.find(i, j).expect("overlap is near")).collect();
    let fft = Arc::new(Fft3::new(Convolution::padded_dims(&grid)));
    GridParts {
        grid,
        pa,
        pphi,
        pk,
        near: Arc::new(near),
        overlap: Arc::new(overlap),
        overlap_pos,
        fft,
    }
}

fn static_parts<T: Real>(
    integ: &PairIntegrator<'_, T>,
    parts: &GridParts<T>,
    config: OperatorConfig,
    counters: &WorkCounters,
) -> Result<NearParts<T>, OperatorError> {
    let ops = config.ops;
    let k1 = Wavenumber { k0: T::one() };
    let near = integ.assemble_sparse(&parts.near, Family::Static, ops)?;
    let scalar = (ops.la || ops.lphi)
        .then(|| Convolution::build_with(&parts.grid, KernelKind::GS, k1, GradSelfTerm::Zero, parts.fft.clone()));
    let gradient = ops
        .k
        .then(|| Convolution::build_with(&parts.grid, KernelKind::GradGS, k1, GradSelfTerm::Zero, parts.fft.clone()));
    let kern = GridKernels {
        grid: &parts.grid,
        pa: &parts.pa,
        pphi: &parts.pphi,
        pk: parts.pk.as_ref(),
        scalar: scalar.as_ref(),
        gradient: gradient.as_ref(),
    };
    let pre = build_precorrection(&kern, &parts.near, ops, Some(counters));
    let (mut lin_near, mut lin_pre) = (None, None);
    let lin_ops = Ops { k: false, ..ops };
    if config.linear_term && (lin_ops.la || lin_ops.lphi) {
        lin_near = Some(integ.assemble_sparse(&parts.overlap, Family::Linear, lin_ops)?);
        let hlin = Convolution::build_with(&parts.grid, KernelKind::GLin, k1, GradSelfTerm::Zero, parts.fft.clone());
        let kern = GridKernels {
            scalar: Some(&hlin),
            gradient: None,
            ..kern
        };
        lin_pre = Some(build_precorrection(&kern, &parts.overlap, lin_ops, Some(counters)));
    }
    Ok(NearParts {
        near,
        pre,
        lin_near,
        lin_pre,
    })
}

fn static_diagonal<T: Real>(
    integ: &PairIntegrator<'_, T>,
    ops: Ops,
    n: usize,
) -> Result<Vec<[C<T>; 3]>, OperatorError> {
    let set = integ.assemble_sparse(&diag_pattern(n), Family::Static, ops)?;
    Ok(diagonal_of(&set, n))
}

fn diagonal_of<T: Real>(set: &SparseSet<T>, n: usize) -> Vec<[C<T>; 3]> {
    let pick = |m: &Option<CsrMatrix<T>>, i: usize| m.as_ref().map_or(czero(), |m| m.get(i, i));
    (0..n).map(|i| [pick(&set.la, i), pick(&set.lphi, i), pick(&set.k, i)]).collect()
}

/// Frequency-combined sparse part on the near pattern.
fn combine<T: Real>(parts: &GridParts<T>, np: &NearParts<T>, w: OpWeights<T>, k: T) -> CsrMatrix<T> {
    let mut out = CsrMatrix::zeros(parts.near.clone());
    let add = |out: &mut CsrMatrix<T>, set: &SparseSet<T>, s: C<T>, pos: Option<&[usize]>| {
        for (m, wt) in [(&set.la, w.la), (&set.lphi, w.lphi), (&set.k, w.k)] {
            let (Some(m), true) = (m, wt != czero()) else { continue };
            let f = wt * s;
            match pos {
                None => out.values.par_iter_mut().zip(&m.values).for_each(|(o, v)| *o = *o + *v * f),
                Some(p) => {
                    for (&i, v) in p.iter().zip(&m.values) {
                        out.values[i] = out.values[i] + *v * f;
                    }
                }
            }
        }
    };
    let one = Complex::new(T::one(), T::zero());
    add(&mut out, &np.near, one, None);
    add(&mut out, &np.pre, -one, None);
    let k2 = Complex::new(k * k, T::zero());
    if let Some(l) = &np.lin_near {
        add(&mut out, l, k2, Some(&parts.overlap_pos));
    }
    if let Some(l) = &np.lin_pre {
        add(&mut out, l, -k2, Some(&parts.overlap_pos));
    }
    out
}

enum Body<T: Real> {
    Dense(DenseMatrix<T>),
    Grid {
        sparse: CsrMatrix<T>,
        parts: Arc<GridParts<T>>,
        near: Arc<NearParts<T>>,
        scalar: Option<Convolution<T>>,
        gradient: Option<Convolution<T>>,
    },
}

/// One operator combination at one frequency.
pub struct BoundOperator<T: Real> {
    n: usize,
    pub k: Wavenumber<T>,
    pub weights: OpWeights<T>,
    ops: Ops,
    body: Body<T>,
    counters: Arc<WorkCounters>,
}

impl<T: Real> BoundOperator<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn counters(&self) -> &WorkCounters {
        &self.counters
    }

    /// Content hash of the near-region and precorrection matrices in use;
    /// `None` in direct mode.
    pub fn near_hash(&self) -> Option<String> {
        match &self.body {
            Body::Dense(_) => None,
            Body::Grid { near, .. } => Some(near.content_hash()),
        }
    }

    /// The dense matrix in direct mode.
    pub fn dense(&self) -> Option<&DenseMatrix<T>> {
        match &self.body {
            Body::Dense(d) => Some(d),
            Body::Grid { .. } => None,
        }
    }

    pub fn matvec(&self, x: &[C<T>]) -> Result<Vec<C<T>>, OperatorError> {
        if x.len() != self.n {
            return Err(OperatorError::Dimension {
                got: x.len(),
                expected: self.n,
            });
        }
        match &self.body {
            Body::Dense(d) => Ok(d.matvec(x).expect("square operator")),
            Body::Grid {
                sparse,
                parts,
                scalar,
                gradient,
                ..
            } => {
                let mut y = sparse.matvec(x);
                self.grid_apply(parts, scalar.as_ref(), gradient.as_ref(), x, &mut y);
                Ok(y)
            }
        }
    }

    fn grid_apply(
        &self,
        parts: &GridParts<T>,
        scalar: Option<&Convolution<T>>,
        gradient: Option<&Convolution<T>>,
        x: &[C<T>],
        y: &mut [C<T>],
    ) {
        let g = &parts.grid;
        let w = self.weights;
        let len = g.len();
        if self.ops.la || self.ops.k {
            let src: Vec<Vec<C<T>>> = (0..3)
                .map(|c| {
                    let mut u = vec![czero(); len];
                    parts.pa.scatter(g, c, x, &mut u);
                    u
                })
                .collect();
            if let (true, Some(h)) = (self.ops.la, scalar) {
                for (c, u) in src.iter().enumerate() {
                    let v = h.apply(u).expect("grid-sized vector");
                    parts.pa.gather(g, c, &v, w.la, y);
                }
            }
            if let (true, Some(h), Some(pk)) = (self.ops.k, gradient, parts.pk.as_ref()) {
                let f = h.apply_curl([&src[0], &src[1], &src[2]]).expect("grid-sized vectors");
                for (i, fi) in f.iter().enumerate() {
                    pk.gather(g, i, fi, w.k, y);
                }
            }
        }
        if let (true, Some(h)) = (self.ops.lphi, scalar) {
            let mut q = vec![czero(); len];
            parts.pphi.scatter(g, 0, x, &mut q);
            let v = h.apply(&q).expect("grid-sized vector");
            parts.pphi.gather(g, 0, &v, -w.lphi, y);
        }
    }

    /// Diagonal of the operator as applied by [`matvec`](Self::matvec).
    pub fn diagonal(&self) -> Vec<C<T>> {
        match &self.body {
            Body::Dense(d) => d.diagonal(),
            Body::Grid {
                sparse,
                parts,
                scalar,
                gradient,
                ..
            } => {
                let kern = GridKernels {
                    grid: &parts.grid,
                    pa: &parts.pa,
                    pphi: &parts.pphi,
                    pk: parts.pk.as_ref(),
                    scalar: scalar.as_ref(),
                    gradient: gradient.as_ref(),
                };
                let w = self.weights;
                (0..self.n)
                    .into_par_iter()
                    .map(|m| {
                        let e = grid_entry(&kern, self.ops, m, m);
                        sparse.get(m, m) + w.la * e[0] + w.lphi * e[1] + w.k * e[2]
                    })
                    .collect()
            }
        }
    }
}

/// `-jωμ0 = -j k η0`, the factor in front of the single-layer operator.
pub fn efie_factor<T: Real>(k: Wavenumber<T>) -> C<T> {
    Complex::new(T::zero(), -k.k0 * lit::<T>(eta0()))
}

/// Weights of `-jωμ0 (L_A + L_phi / k²)`.
pub fn efie_weights<T: Real>(k: Wavenumber<T>) -> OpWeights<T> {
    let f = efie_factor(k);
    OpWeights {
        la: f,
        lphi: f / (k.k0 * k.k0),
        k: czero(),
    }
}

/// Weights of `alpha · EFIE - (1 - alpha) η0 K`, where `K` carries the
/// `-1/2` Gram residue.
pub fn cfie_weights<T: Real>(k: Wavenumber<T>, alpha: T) -> OpWeights<T> {
    let e = efie_weights(k);
    let a = Complex::new(alpha, T::zero());
    OpWeights {
        la: e.la * a,
        lphi: e.lphi * a,
        k: Complex::new(-(T::one() - alpha) * lit::<T>(eta0()), T::zero()),
    }
}

/// Convenience for the two system operators of the solver.
pub fn efie_operator<T: Real>(set: &OperatorSet<T>, k: Wavenumber<T>) -> Result<BoundOperator<T>, OperatorError> {
    set.bind(k, efie_weights(k))
}

pub fn cfie_operator<T: Real>(
    set: &OperatorSet<T>,
    k: Wavenumber<T>,
    alpha: T,
) -> Result<BoundOperator<T>, OperatorError> {
    if alpha == T::one() {
        return efie_operator(set, k);
    }
    set.bind(k, cfie_weights(k, alpha))
}
