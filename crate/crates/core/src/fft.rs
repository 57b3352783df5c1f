//! Three-dimensional complex FFTs on row-major (x fastest) arrays.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::num::{czero, C};
use crate::Real;

/// Smallest integer `>= n` whose only prime factors are 2, 3 and 5.
pub fn smooth_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut r = m;
        for p in [2, 3, 5] {
            while r % p == 0 {
                r /= p;
            }
        }
        if r == 1 {
            return m;
        }
        m += 1;
    }
}

/// Forward and inverse plans for one array shape.
pub struct Fft3<T: Real> {
    pub dims: [usize; 3],
    fwd: [Arc<dyn Fft<T>>; 3],
    inv: [Arc<dyn Fft<T>>; 3],
}

impl<T: Real> Fft3<T> {
    pub fn new(dims: [usize; 3]) -> Self {
        let mut planner = FftPlanner::new();
        let plan = |p: &mut FftPlanner<T>, d| {
            [
                p.plan_fft(dims[0], d),
                p.plan_fft(dims[1], d),
                p.plan_fft(dims[2], d),
            ]
        };
        let fwd = plan(&mut planner, FftDirection::Forward);
        let inv = plan(&mut planner, FftDirection::Inverse);
        Self { dims, fwd, inv }
    }

    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&self, data: &mut [C<T>]) {
        self.run(data, &self.fwd);
    }

    /// Unnormalized inverse transform in place (scale by `1/len` yourself).
    pub fn inverse(&self, data: &mut [C<T>]) {
        self.run(data, &self.inv);
    }

    fn run(&self, data: &mut [C<T>], plans: &[Arc<dyn Fft<T>>; 3]) {
        assert_eq!(data.len(), self.len());
        let [nx, ny, nz] = self.dims;
        // x: contiguous rows.
        data.par_chunks_mut(nx).for_each(|row| plans[0].process(row));
        // y: strided within each z-plane.
        data.par_chunks_mut(nx * ny).for_each(|plane| {
            let mut col = vec![czero(); ny];
            for i in 0..nx {
                for j in 0..ny {
                    col[j] = plane[i + nx * j];
                }
                plans[1].process(&mut col);
                for j in 0..ny {
                    plane[i + nx * j] = col[j];
                }
            }
        });
        // z: stride nx*ny; process one y-row of pencils at a time.
        let plane = nx * ny;
        let pencils: Vec<Vec<C<T>>> = (0..ny)
            .into_par_iter()
            .map(|j| {
                let mut out = vec![czero(); nx * nz];
                let mut col = vec![czero(); nz];
                for i in 0..nx {
                    for k in 0..nz {
                        col[k] = data[i + nx * j + plane * k];
                    }
                    plans[2].process(&mut col);
                    out[i * nz..(i + 1) * nz].copy_from_slice(&col);
                }
                out
            })
            .collect();
        for (j, block) in pencils.iter().enumerate() {
            for i in 0..nx {
                for k in 0..nz {
                    data[i + nx * j + plane * k] = block[i * nz + k];
                }
            }
        }
    }
}
