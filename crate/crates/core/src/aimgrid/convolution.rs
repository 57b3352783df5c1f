//! Three-level Toeplitz convolution on the grid, applied by circulant
//! embedding and FFT.

use std::sync::Arc;

use super::AimGrid;
use crate::counters::WorkCounters;
use crate::fft::{smooth_size, Fft3};
use crate::geom::Vec3;
use crate::kernels::{GradSelfTerm, KernelKind, Wavenumber};
use crate::num::{czero, from_usize, Real, C};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConvolutionError {
    #[error("grid vector has length {got}, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("{0:?} is a gradient kernel; use apply_curl")]
    NotScalar(KernelKind),
    #[error("{0:?} is a scalar kernel; use apply")]
    NotGradient(KernelKind),
}

/// Kernel samples on all grid offsets and their cached spectra.
pub struct Convolution<T: Real> {
    pub kind: KernelKind,
    pub k: Wavenumber<T>,
    pub dims: [usize; 3],
    pub padded: [usize; 3],
    /// Per component, indexed by offset `d + (N - 1)` per axis, x fastest.
    samples: Vec<Vec<C<T>>>,
    /// Per component, spectrum of the circulant embedding scaled by `1/len`.
    spectra: Vec<Vec<C<T>>>,
    fft: Arc<Fft3<T>>,
    counters: Option<Arc<WorkCounters>>,
}

impl<T: Real> Convolution<T> {
    pub fn build(grid: &AimGrid<T>, kind: KernelKind, k: Wavenumber<T>, grad_self: GradSelfTerm) -> Self {
        let fft = Arc::new(Fft3::new(Self::padded_dims(grid)));
        Self::build_with(grid, kind, k, grad_self, fft)
    }

    /// Padded FFT shape for a grid.
    pub fn padded_dims(grid: &AimGrid<T>) -> [usize; 3] {
        grid.dims.map(|n| smooth_size(2 * n - 1))
    }

    /// Same as [`build`](Self::build) but reusing FFT plans.
    pub fn build_with(
        grid: &AimGrid<T>,
        kind: KernelKind,
        k: Wavenumber<T>,
        grad_self: GradSelfTerm,
        fft: Arc<Fft3<T>>,
    ) -> Self {
        let dims = grid.dims;
        let padded = fft.dims;
        assert_eq!(padded, Self::padded_dims(grid));
        let sd = dims.map(|n| 2 * n - 1);
        let ncomp = if kind.is_gradient() { 3 } else { 1 };
        let total = sd[0] * sd[1] * sd[2];
        let mut samples = vec![vec![czero(); total]; ncomp];
        let h = grid.spacing;
        let off = |i: usize, n: usize| i as isize - (n as isize - 1);
        for c in 0..sd[2] {
            for b in 0..sd[1] {
                for a in 0..sd[0] {
                    let d = [off(a, dims[0]), off(b, dims[1]), off(c, dims[2])];
                    let idx = a + sd[0] * (b + sd[1] * c);
                    let r = Vec3::new(from_isize::<T>(d[0]), from_isize(d[1]), from_isize(d[2])) * h;
                    let zero = d == [0, 0, 0];
                    if kind.is_gradient() {
                        if zero {
                            let v = kind.grid_self_component(k.k0, grad_self);
                            for s in samples.iter_mut() {
                                s[idx] = v;
                            }
                        } else {
                            let v = kind.eval_vector(k, r).unwrap().to_array();
                            for (s, vc) in samples.iter_mut().zip(v) {
                                s[idx] = vc;
                            }
                        }
                    } else {
                        samples[0][idx] = if zero {
                            kind.grid_self_scalar(k.k0)
                        } else {
                            kind.eval_scalar(k, r).unwrap()
                        };
                    }
                }
            }
        }
        // Circulant embedding: offset d lands at index d mod M.
        let len = padded[0] * padded[1] * padded[2];
        let scale = T::one() / from_usize::<T>(len);
        let spectra = samples
            .iter()
            .map(|s| {
                let mut buf = vec![czero(); len];
                for c in 0..sd[2] {
                    let z = wrap(off(c, dims[2]), padded[2]);
                    for b in 0..sd[1] {
                        let y = wrap(off(b, dims[1]), padded[1]);
                        for a in 0..sd[0] {
                            let x = wrap(off(a, dims[0]), padded[0]);
                            buf[x + padded[0] * (y + padded[1] * z)] = s[a + sd[0] * (b + sd[1] * c)] * scale;
                        }
                    }
                }
                fft.forward(&mut buf);
                buf
            })
            .collect();
        Self {
            kind,
            k,
            dims,
            padded,
            samples,
            spectra,
            fft,
            counters: None,
        }
    }

    pub fn with_counters(mut self, counters: Arc<WorkCounters>) -> Self {
        self.counters = Some(counters);
        self
    }

    pub fn fft(&self) -> Arc<Fft3<T>> {
        self.fft.clone()
    }

    pub fn components(&self) -> usize {
        self.samples.len()
    }

    /// Stored kernel value at grid offset `d` (component `c`).
    #[inline]
    pub fn sample(&self, c: usize, d: [isize; 3]) -> C<T> {
        let n = self.dims;
        let sd0 = 2 * n[0] - 1;
        let sd1 = 2 * n[1] - 1;
        let a = (d[0] + n[0] as isize - 1) as usize;
        let b = (d[1] + n[1] as isize - 1) as usize;
        let e = (d[2] + n[2] as isize - 1) as usize;
        self.samples[c][a + sd0 * (b + sd1 * e)]
    }

    fn grid_len(&self) -> usize {
        self.dims.iter().product()
    }

    fn check(&self, x: &[C<T>]) -> Result<(), ConvolutionError> {
        if x.len() != self.grid_len() {
            return Err(ConvolutionError::Length {
                got: x.len(),
                expected: self.grid_len(),
            });
        }
        Ok(())
    }

    fn count(&self, n: u64) {
        if let Some(c) = &self.counters {
            c.add_fft(n);
        }
    }

    fn embed(&self, x: &[C<T>]) -> Vec<C<T>> {
        let [nx, ny, nz] = self.dims;
        let [px, py, _] = self.padded;
        let mut buf = vec![czero(); self.fft.len()];
        for k in 0..nz {
            for j in 0..ny {
                let src = nx * (j + ny * k);
                let dst = px * (j + py * k);
                buf[dst..dst + nx].copy_from_slice(&x[src..src + nx]);
            }
        }
        self.fft.forward(&mut buf);
        buf
    }

    fn extract(&self, mut buf: Vec<C<T>>) -> Vec<C<T>> {
        self.fft.inverse(&mut buf);
        let [nx, ny, nz] = self.dims;
        let [px, py, _] = self.padded;
        let mut out = Vec::with_capacity(nx * ny * nz);
        for k in 0..nz {
            for j in 0..ny {
                let src = px * (j + py * k);
                out.extend_from_slice(&buf[src..src + nx]);
            }
        }
        out
    }

    /// `y_p = Σ_q H(p - q) x_q` for a scalar kernel.
    pub fn apply(&self, x: &[C<T>]) -> Result<Vec<C<T>>, ConvolutionError> {
        if self.kind.is_gradient() {
            return Err(ConvolutionError::NotScalar(self.kind));
        }
        self.check(x)?;
        let mut buf = self.embed(x);
        for (b, s) in buf.iter_mut().zip(&self.spectra[0]) {
            *b = *b * *s;
        }
        self.count(2);
        Ok(self.extract(buf))
    }

    /// Applies the scalar kernel to several grid vectors.
    pub fn apply_many(&self, xs: &[Vec<C<T>>]) -> Result<Vec<Vec<C<T>>>, ConvolutionError> {
        xs.iter().map(|x| self.apply(x)).collect()
    }

    /// `F_i = Σ_jk ε_ijk (∂_j H ⊛ J_k)` for a gradient kernel, i.e. the grid
    /// rendition of `∫ ∇G × J`.
    pub fn apply_curl(&self, j: [&[C<T>]; 3]) -> Result<[Vec<C<T>>; 3], ConvolutionError> {
        if !self.kind.is_gradient() {
            return Err(ConvolutionError::NotGradient(self.kind));
        }
        for x in j {
            self.check(x)?;
        }
        let spec: Vec<Vec<C<T>>> = j.iter().map(|x| self.embed(x)).collect();
        let out = [0usize, 1, 2].map(|i| {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            // ε_i,a,b = +1 and ε_i,b,a = -1.
            let buf: Vec<C<T>> = (0..self.fft.len())
                .map(|q| self.spectra[a][q] * spec[b][q] - self.spectra[b][q] * spec[a][q])
                .collect();
            self.extract(buf)
        });
        self.count(6);
        Ok(out)
    }

    /// Dense Toeplitz product, for verification on small grids.
    pub fn apply_dense(&self, c: usize, x: &[C<T>]) -> Vec<C<T>> {
        let [nx, ny, nz] = self.dims;
        let mut y = vec![czero(); x.len()];
        for pk in 0..nz {
            for pj in 0..ny {
                for pi in 0..nx {
                    let mut acc = czero();
                    for qk in 0..nz {
                        for qj in 0..ny {
                            for qi in 0..nx {
                                let d = [
                                    pi as isize - qi as isize,
                                    pj as isize - qj as isize,
                                    pk as isize - qk as isize,
                                ];
                                acc = acc + self.sample(c, d) * x[qi + nx * (qj + ny * qk)];
                            }
                        }
                    }
                    y[pi + nx * (pj + ny * pk)] = acc;
                }
            }
        }
        y
    }
}

fn wrap(d: isize, m: usize) -> usize {
    d.rem_euclid(m as isize) as usize
}

fn from_isize<T: Real>(d: isize) -> T {
    T::from_isize(d).unwrap()
}
