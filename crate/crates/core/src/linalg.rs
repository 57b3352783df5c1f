//! Dense and compressed-sparse-row complex matrices.

use num_complex::Complex;
use rayon::prelude::*;

use crate::num::{czero, Real, C};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is singular at pivot {0}")]
    Singular(usize),
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![czero(); rows * cols],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`; rows in parallel, each row reduced serially.
    pub fn matvec(&self, x: &[C<T>]) -> Result<Vec<C<T>>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Dimension {
                expected: self.cols,
                got: x.len(),
            });
        }
        Ok(self
            .data
            .par_chunks(self.cols.max(1))
            .map(|row| {
                let mut s = czero();
                for (a, b) in row.iter().zip(x) {
                    s = s + a * b;
                }
                s
            })
            .collect())
    }

    pub fn scale(&mut self, s: C<T>) {
        self.data.iter_mut().for_each(|z| *z = *z * s);
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: C<T>, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter_mut()
            .zip(&other.data)
            .for_each(|(a, b)| *a = *a + s * b);
    }

    /// Largest `|A_ij - A_ji|` relative to the largest entry.
    pub fn symmetry_defect(&self) -> T {
        let mut num = T::zero();
        let mut den = T::zero();
        for i in 0..self.rows {
            for j in 0..self.cols {
                num = num.max((self.get(i, j) - self.get(j, i)).norm());
                den = den.max(self.get(i, j).norm());
            }
        }
        num / den
    }

    /// LU factorization with partial pivoting (consumes the matrix).
    pub fn lu(mut self) -> Result<LuFactors<T>, LinalgError> {
        let n = self.rows;
        if n != self.cols {
            return Err(LinalgError::Dimension {
                expected: n,
                got: self.cols,
            });
        }
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, self.get(i, k).norm()))
                .fold((k, T::zero() - T::one()), |acc, v| if v.1 > acc.1 { v } else { acc });
            if best == T::zero() {
                return Err(LinalgError::Singular(k));
            }
            if p != k {
                for j in 0..n {
                    self.data.swap(k * n + j, p * n + j);
                }
                piv.swap(k, p);
            }
            let inv = Complex::new(T::one(), T::zero()) / self.get(k, k);
            let (head, tail) = self.data.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..(k + 1) * n];
            tail.par_chunks_mut(n).for_each(|row| {
                let f = row[k] * inv;
                row[k] = f;
                if f != czero() {
                    for j in k + 1..n {
                        row[j] = row[j] - f * pivot_row[j];
                    }
                }
            });
        }
        Ok(LuFactors { lu: self, piv })
    }
}

pub struct LuFactors<T> {
    lu: DenseMatrix<T>,
    piv: Vec<usize>,
}

impl<T: Real> LuFactors<T> {
    pub fn solve(&self, b: &[C<T>]) -> Vec<C<T>> {
        let n = self.lu.rows;
        let mut x: Vec<C<T>> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s = s - self.lu.get(i, j) * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s = s - self.lu.get(i, j) * x[j];
            }
            x[i] = s / self.lu.get(i, i);
        }
        x
    }
}

/// Sparsity pattern in CSR layout with sorted column indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub rows: usize,
    pub cols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
}

impl Pattern {
    /// Builds a pattern from per-row column lists (sorted and deduplicated here).
    pub fn from_rows(cols: usize, mut rows: Vec<Vec<usize>>) -> Self {
        let mut row_ptr = Vec::with_capacity(rows.len() + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for r in rows.iter_mut() {
            r.sort_unstable();
            r.dedup();
            col_idx.extend_from_slice(r);
            row_ptr.push(col_idx.len());
        }
        Self {
            rows: rows.len(),
            cols,
            row_ptr,
            col_idx,
        }
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    /// Storage position of `(i, j)`, if present.
    #[inline]
    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        let start = self.row_ptr[i];
        self.row(i).binary_search(&j).ok().map(|p| start + p)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.find(i, j).is_some()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.rows).all(|i| self.row(i).iter().all(|&j| self.contains(j, i)))
    }

    /// Entries `(i, j)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| self.row(i).iter().map(move |&j| (i, j)))
    }
}

/// Complex CSR matrix sharing a [`Pattern`].
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix<T> {
    pub pattern: std::sync::Arc<Pattern>,
    pub values: Vec<C<T>>,
}

impl<T: Real> CsrMatrix<T> {
    pub fn zeros(pattern: std::sync::Arc<Pattern>) -> Self {
        let n = pattern.nnz();
        Self {
            pattern,
            values: vec![czero(); n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C<T> {
        self.pattern.find(i, j).map_or(czero(), |p| self.values[p])
    }

    /// `y = A x` with a fixed per-row summation order.
    pub fn matvec(&self, x: &[C<T>]) -> Vec<C<T>> {
        let p = &*self.pattern;
        (0..p.rows)
            .into_par_iter()
            .map(|i| {
                let mut s = czero();
                for k in p.row_ptr[i]..p.row_ptr[i + 1] {
                    s = s + self.values[k] * x[p.col_idx[k]];
                }
                s
            })
            .collect()
    }

    /// `y += alpha * A x`.
    pub fn matvec_add(&self, alpha: C<T>, x: &[C<T>], y: &mut [C<T>]) {
        let p = &*self.pattern;
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            let mut s = czero();
            for k in p.row_ptr[i]..p.row_ptr[i + 1] {
                s = s + self.values[k] * x[p.col_idx[k]];
            }
            *yi = *yi + alpha * s;
        });
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.pattern.rows).map(|i| self.get(i, i)).collect()
    }

    /// Entrywise `self - other` on an identical pattern.
    pub fn sub(&self, other: &Self) -> Self {
        assert!(std::sync::Arc::ptr_eq(&self.pattern, &other.pattern) || self.pattern == other.pattern);
        Self {
            pattern: self.pattern.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        }
    }

    /// Raw little-endian bytes of the values (for hashing and caching).
    pub fn value_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.values.len() * 16);
        for z in &self.values {
            out.extend_from_slice(&z.re.to_f64().unwrap().to_le_bytes());
            out.extend_from_slice(&z.im.to_f64().unwrap().to_le_bytes());
        }
        out
    }
}
