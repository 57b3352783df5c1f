//! Near-region entries of the grid path, `W H P` restricted to a pattern.

use std::sync::Arc;

use rayon::prelude::*;

use super::{AimGrid, Convolution, Projection};
use crate::counters::WorkCounters;
use crate::linalg::{CsrMatrix, Pattern};
use crate::num::{czero, Real, C};
use crate::quadrature::{Ops, SparseSet};

/// Projections and convolution handles that define the grid path.
pub struct GridKernels<'a, T: Real> {
    pub grid: &'a AimGrid<T>,
    /// Current components (`Flavor::A`), also the source side of `K`.
    pub pa: &'a Projection<T>,
    /// Charge (`Flavor::Phi`).
    pub pphi: &'a Projection<T>,
    /// Testing side of `K` (`Flavor::K`).
    pub pk: Option<&'a Projection<T>>,
    pub scalar: Option<&'a Convolution<T>>,
    pub gradient: Option<&'a Convolution<T>>,
}

/// Scratch tables for one anchor offset.
struct Local<T> {
    s1: usize,
    w: usize,
    /// `T_c(e)` for `e ∈ [-n, n]³`, per kernel component.
    table: Vec<Vec<C<T>>>,
}

impl<T: Real> Local<T> {
    fn new(n: usize, comps: usize) -> Self {
        let w = 2 * n + 1;
        Self {
            s1: n + 1,
            w,
            table: vec![vec![czero(); w * w * w]; comps],
        }
    }

    fn fill(&mut self, conv: &Convolution<T>, d: [isize; 3]) {
        let n = (self.s1 - 1) as isize;
        let w = self.w;
        for (c, tab) in self.table.iter_mut().enumerate() {
            for ez in -n..=n {
                for ey in -n..=n {
                    for ex in -n..=n {
                        let i = (ex + n) as usize + w * ((ey + n) as usize + w * (ez + n) as usize);
                        tab[i] = conv.sample(c, [d[0] + ex, d[1] + ey, d[2] + ez]);
                    }
                }
            }
        }
    }

    /// `u[q] = Σ_p wm[p] T_c(p - q)` over the stencil.
    fn left(&self, c: usize, wm: &[T], u: &mut [C<T>]) {
        let s = self.s1;
        let w = self.w;
        let n = s - 1;
        let tab = &self.table[c];
        for (q, uq) in u.iter_mut().enumerate() {
            let (qx, qy, qz) = (q % s, (q / s) % s, q / (s * s));
            let mut acc = czero();
            let mut p = 0;
            for pz in 0..s {
                for py in 0..s {
                    let base = w * ((py + n - qy) + w * (pz + n - qz));
                    for px in 0..s {
                        acc = acc + tab[base + px + n - qx] * wm[p];
                        p += 1;
                    }
                }
            }
            *uq = acc;
        }
    }
}

fn dot<T: Real>(u: &[C<T>], w: &[T]) -> C<T> {
    let mut acc = czero();
    for (a, &b) in u.iter().zip(w) {
        acc = acc + *a * b;
    }
    acc
}

/// Grid-path entries `(L_A, L_phi, K)` of row `m` against `cols`.
fn row_entries<T: Real>(g: &GridKernels<'_, T>, ops: Ops, m: usize, cols: &[usize]) -> Vec<[C<T>; 3]> {
    let n = g.grid.order;
    let stencil = g.grid.stencil_len();
    let am = g.pa.anchors[m];
    let mut out = vec![[czero(); 3]; cols.len()];
    let mut loc_s = g.scalar.map(|_| Local::new(n, 1));
    let mut loc_g = g.gradient.map(|_| Local::new(n, 3));
    // Columns sharing an anchor reuse the contracted left factors.
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&i| (g.pa.anchors[cols[i]], cols[i]));
    let mut ua = vec![vec![czero(); stencil]; 3];
    let mut uphi = vec![czero(); stencil];
    let mut uk = vec![vec![czero(); stencil]; 9];
    let mut current: Option<[usize; 3]> = None;
    for i in order {
        let nn = cols[i];
        let an = g.pa.anchors[nn];
        if current != Some(an) {
            current = Some(an);
            let d = [0, 1, 2].map(|a| am[a] as isize - an[a] as isize);
            if let (Some(conv), Some(loc)) = (g.scalar, loc_s.as_mut()) {
                if ops.la || ops.lphi {
                    loc.fill(conv, d);
                    if ops.la {
                        for (c, u) in ua.iter_mut().enumerate() {
                            loc.left(0, g.pa.weights(m, c), u);
                        }
                    }
                    if ops.lphi {
                        loc.left(0, g.pphi.weights(m, 0), &mut uphi);
                    }
                }
            }
            if let (Some(conv), Some(loc), Some(pk)) = (g.gradient, loc_g.as_mut(), g.pk) {
                if ops.k {
                    loc.fill(conv, d);
                    for ti in 0..3 {
                        for j in 0..3 {
                            loc.left(j, pk.weights(m, ti), &mut uk[3 * ti + j]);
                        }
                    }
                }
            }
        }
        let mut e = [czero(); 3];
        if ops.la && g.scalar.is_some() {
            for (c, u) in ua.iter().enumerate() {
                e[0] = e[0] + dot(u, g.pa.weights(nn, c));
            }
        }
        if ops.lphi && g.scalar.is_some() {
            e[1] = -dot(&uphi, g.pphi.weights(nn, 0));
        }
        if ops.k && g.gradient.is_some() {
            for ti in 0..3 {
                let (a, b) = ((ti + 1) % 3, (ti + 2) % 3);
                e[2] = e[2] + dot(&uk[3 * ti + a], g.pa.weights(nn, b)) - dot(&uk[3 * ti + b], g.pa.weights(nn, a));
            }
        }
        out[i] = e;
    }
    out
}

/// Grid-path approximation of single entries, e.g. for diagonal studies.
pub fn grid_entry<T: Real>(g: &GridKernels<'_, T>, ops: Ops, m: usize, n: usize) -> [C<T>; 3] {
    row_entries(g, ops, m, &[n])[0]
}

/// `W H P` restricted to `pattern`, one sparse matrix per requested operator.
pub fn build_precorrection<T: Real>(
    g: &GridKernels<'_, T>,
    pattern: &Arc<Pattern>,
    ops: Ops,
    counters: Option<&WorkCounters>,
) -> SparseSet<T> {
    let rows: Vec<Vec<[C<T>; 3]>> = (0..pattern.rows)
        .into_par_iter()
        .map(|m| row_entries(g, ops, m, pattern.row(m)))
        .collect();
    let pick = |which: usize, on: bool| {
        on.then(|| CsrMatrix {
            pattern: pattern.clone(),
            values: rows.iter().flat_map(|r| r.iter().map(move |e| e[which])).collect(),
        })
    };
    if let Some(c) = counters {
        c.add_precorrection();
    }
    SparseSet {
        la: pick(0, ops.la && g.scalar.is_some()),
        lphi: pick(1, ops.lphi && g.scalar.is_some()),
        k: pick(2, ops.k && g.gradient.is_some()),
    }
}
