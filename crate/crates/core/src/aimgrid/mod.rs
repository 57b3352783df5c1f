//! Auxiliary regular grid of the adaptive integral method: stencil
//! projection, Toeplitz convolution by FFT, the near-region map and
//! precorrection.

mod convolution;
mod near;
mod precorrection;
mod projection;

pub use convolution::{Convolution, ConvolutionError};
pub use near::build_near_map;
pub use precorrection::{build_precorrection, grid_entry, GridKernels};
pub use projection::{point_weights, Flavor, Projection};

use crate::geom::Vec3;
use crate::mesh::Mesh;
use crate::num::{from_usize, lit, Real};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("points per wavelength must be at least 5, got {0}")]
    TooCoarse(f64),
    #[error("stencil order must be at least 1")]
    BadOrder,
    #[error("near radius {radius} cells is below the minimum {min} for order {order}")]
    NearRadius { radius: usize, min: usize, order: usize },
    #[error("grid of {points} points exceeds the budget of {budget}")]
    TooLarge { points: usize, budget: usize },
    #[error("wavenumber must be positive")]
    BadWavenumber,
}

/// Grid parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridConfig {
    /// Samples per shortest wavelength of the sweep.
    pub points_per_wavelength: f64,
    /// Stencil order `n`; stencils have `n + 1` nodes per axis.
    pub order: usize,
    /// Near-region radius in cells; `None` means `order + 2`.
    pub near_radius_cells: Option<usize>,
    /// Padding around the mesh bounding box in cells; `None` means `order + 1`.
    pub margin_cells: Option<f64>,
    /// Largest accepted number of grid nodes (before FFT padding).
    pub max_points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            points_per_wavelength: 10.0,
            order: 2,
            near_radius_cells: None,
            margin_cells: None,
            max_points: 4_000_000,
        }
    }
}

impl GridConfig {
    pub fn near_radius(&self) -> usize {
        self.near_radius_cells.unwrap_or(self.order + 2)
    }

    pub fn margin(&self) -> f64 {
        self.margin_cells.unwrap_or((self.order + 1) as f64)
    }
}

/// Regular grid with cubic cells.
#[derive(Clone, Debug, PartialEq)]
pub struct AimGrid<T> {
    pub origin: Vec3<T>,
    pub spacing: T,
    pub dims: [usize; 3],
    pub order: usize,
}

impl<T: Real> AimGrid<T> {
    /// Grid resolving wavenumbers up to `k_max` and covering `mesh`.
    pub fn build(mesh: &Mesh<T>, cfg: &GridConfig, k_max: T) -> Result<Self, GridError> {
        if !(cfg.points_per_wavelength >= 5.0) {
            return Err(GridError::TooCoarse(cfg.points_per_wavelength));
        }
        if cfg.order < 1 {
            return Err(GridError::BadOrder);
        }
        if cfg.near_radius() < cfg.order + 1 {
            return Err(GridError::NearRadius {
                radius: cfg.near_radius(),
                min: cfg.order + 1,
                order: cfg.order,
            });
        }
        if !(k_max > T::zero()) {
            return Err(GridError::BadWavenumber);
        }
        let h = T::TAU() / k_max / lit(cfg.points_per_wavelength);
        Self::with_spacing(mesh, h, cfg)
    }

    /// Grid with a given spacing, centered on the mesh bounding box.
    pub fn with_spacing(mesh: &Mesh<T>, h: T, cfg: &GridConfig) -> Result<Self, GridError> {
        let bb = mesh.bounding_box(h * lit(cfg.margin()));
        let size = bb.size();
        let center = (bb.min + bb.max) * lit(0.5);
        let mut dims = [0usize; 3];
        for (a, d) in dims.iter_mut().enumerate() {
            let cells = (size[a] / h).ceil().to_usize().unwrap_or(0);
            *d = (cells + 1).max(cfg.order + 1);
        }
        let points = dims.iter().product::<usize>();
        if points > cfg.max_points {
            return Err(GridError::TooLarge {
                points,
                budget: cfg.max_points,
            });
        }
        let half = |a: usize| h * from_usize::<T>(dims[a] - 1) * lit(0.5);
        let origin = center - Vec3::new(half(0), half(1), half(2));
        Ok(Self {
            origin,
            spacing: h,
            dims,
            order: cfg.order,
        })
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nodes per stencil.
    pub fn stencil_len(&self) -> usize {
        (self.order + 1).pow(3)
    }

    #[inline]
    pub fn index(&self, i: [usize; 3]) -> usize {
        i[0] + self.dims[0] * (i[1] + self.dims[1] * i[2])
    }

    pub fn node(&self, i: [usize; 3]) -> Vec3<T> {
        self.origin + Vec3::new(from_usize(i[0]), from_usize(i[1]), from_usize(i[2])) * self.spacing
    }

    /// Lowest corner of the stencil made of the `n + 1` nodes per axis
    /// nearest to `p`, shifted inward at the grid boundary.
    pub fn anchor(&self, p: Vec3<T>) -> [usize; 3] {
        let n = self.order;
        let mut out = [0usize; 3];
        for a in 0..3 {
            let t = (p[a] - self.origin[a]) / self.spacing;
            let start = (t - from_usize::<T>(n) * lit(0.5) + lit(0.5)).floor();
            let hi = (self.dims[a] - n - 1) as f64;
            out[a] = start.to_f64().unwrap().clamp(0.0, hi) as usize;
        }
        out
    }

    /// Global node indices of the stencil at `anchor`, x fastest.
    pub fn stencil_nodes(&self, anchor: [usize; 3]) -> impl Iterator<Item = usize> + '_ {
        let s = self.order + 1;
        (0..s).flat_map(move |c| {
            (0..s).flat_map(move |b| (0..s).map(move |a| self.index([anchor[0] + a, anchor[1] + b, anchor[2] + c])))
        })
    }
}
