//! Surface integral equation solver for perfectly conducting scatterers.
//!
//! The crate assembles EFIE/MFIE/CFIE operators on RWG-discretized triangle
//! meshes in three modes: dense direct integration, the conventional adaptive
//! integral method (AIM), and AIMx, in which only the frequency-independent
//! static kernel is integrated directly in the near region and every
//! frequency-dependent contribution is carried by grid convolutions. Static
//! near-region matrices are therefore assembled once and reused across a
//! frequency sweep.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below fix the common double-precision case.

pub mod aimgrid;
pub mod analysis;
pub mod counters;
pub mod fft;
pub mod geom;
pub mod kernels;
pub mod linalg;
pub mod mesh;
pub mod num;
pub mod operators;
pub mod quadrature;
pub mod solver;

pub use geom::{Aabb, CVec3, Vec3};
pub use kernels::{KernelKind, Wavenumber};
pub use mesh::{build_rwg, Discretization, Mesh, MeshError, RwgBasis};
pub use num::Real;

pub type Vec3f64 = Vec3<f64>;
pub type Mesh64 = Mesh<f64>;
pub type Mesh32 = Mesh<f32>;
pub type Discretization64 = Discretization<f64>;
pub type Wavenumber64 = Wavenumber<f64>;
