//! Numerical integration of RWG operator entries over triangle pairs.

pub mod assembly;
pub mod potentials;
pub mod rules;

pub use assembly::{
    EntryKernel, Family, OpWeights, OperatorTag, Ops, PairBlock, PairIntegrator, QuadError, QuadratureConfig,
    SparseSet,
};
pub use potentials::{static_potentials, StaticPotentials, TriGeom};
pub use rules::{gauss_legendre, gauss_legendre01, TriangleRule};

use crate::kernels::{KernelKind, Wavenumber};
use crate::linalg::DenseMatrix;
use crate::mesh::Discretization;
use crate::num::{Real, C};

/// `∫∫ f_m·f_n G dS' dS`.
pub fn entry_la<T: Real>(disc: &Discretization<T>, m: usize, n: usize, kind: KernelKind, k: Wavenumber<T>) -> Result<C<T>, QuadError> {
    let ker = EntryKernel::new(OperatorTag::LA, kind, k)?;
    PairIntegrator::new(disc, QuadratureConfig::default()).entry(m, n, ker)
}

/// `-∫∫ (∇·f_m)(∇'·f_n) G dS' dS`.
pub fn entry_lphi<T: Real>(disc: &Discretization<T>, m: usize, n: usize, kind: KernelKind, k: Wavenumber<T>) -> Result<C<T>, QuadError> {
    let ker = EntryKernel::new(OperatorTag::LPhi, kind, k)?;
    PairIntegrator::new(disc, QuadratureConfig::default()).entry(m, n, ker)
}

/// `⟨f_m, n̂ × PV∫ ∇G × f_n⟩`, minus half the Gram entry when the kernel has a static part.
pub fn entry_k<T: Real>(disc: &Discretization<T>, m: usize, n: usize, kind: KernelKind, k: Wavenumber<T>) -> Result<C<T>, QuadError> {
    let ker = EntryKernel::new(OperatorTag::K, kind, k)?;
    PairIntegrator::new(disc, QuadratureConfig::default()).entry(m, n, ker)
}

/// Static `L_A` entry with analytic extraction of the `1/R` singularity.
pub fn static_singular_la<T: Real>(disc: &Discretization<T>, m: usize, n: usize) -> T {
    let k = Wavenumber { k0: T::zero() };
    entry_la(disc, m, n, KernelKind::GS, k).expect("static kernel is scalar").re
}

/// Static `L_phi` entry with analytic extraction of the `1/R` singularity.
pub fn static_singular_lphi<T: Real>(disc: &Discretization<T>, m: usize, n: usize) -> T {
    let k = Wavenumber { k0: T::zero() };
    entry_lphi(disc, m, n, KernelKind::GS, k).expect("static kernel is scalar").re
}

/// Dense matrix of one operator and kernel kind.
pub fn assemble_direct<T: Real>(
    disc: &Discretization<T>,
    kernel: EntryKernel<T>,
    cfg: QuadratureConfig,
) -> Result<DenseMatrix<T>, QuadError> {
    PairIntegrator::new(disc, cfg).assemble_dense(kernel.family(), OpWeights::only(kernel.op))
}
