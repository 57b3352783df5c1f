//! Quadrature rules on the reference triangle and on the line.

use crate::geom::Vec3;
use crate::num::{lit, Real};

/// Symmetric rule in barycentric coordinates; weights sum to one.
#[derive(Clone, Debug)]
pub struct TriangleRule<T> {
    pub bary: Vec<[T; 3]>,
    pub weights: Vec<T>,
    /// Total polynomial degree integrated exactly.
    pub degree: usize,
}

impl<T: Real> TriangleRule<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Maps the rule onto a physical triangle: `(points, area-scaled weights)`.
    pub fn map(&self, tri: &[Vec3<T>; 3], area: T) -> (Vec<Vec3<T>>, Vec<T>) {
        let pts = self
            .bary
            .iter()
            .map(|b| tri[0] * b[0] + tri[1] * b[1] + tri[2] * b[2])
            .collect();
        let w = self.weights.iter().map(|&w| w * area).collect();
        (pts, w)
    }

    pub fn centroid() -> Self {
        let third = lit(1.0 / 3.0);
        Self {
            bary: vec![[third; 3]],
            weights: vec![T::one()],
            degree: 1,
        }
    }

    /// 7-point rule exact to degree 5.
    pub fn seven_point() -> Self {
        let s15 = 15f64.sqrt();
        let mut r = Builder::default();
        r.centroid(9.0 / 40.0);
        r.orbit3((6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
        r.orbit3((6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
        r.finish(5)
    }

    /// 16-point rule exact to degree 8.
    pub fn sixteen_point() -> Self {
        let mut r = Builder::default();
        r.centroid(0.144_315_607_677_787_168_25);
        r.orbit3(0.459_292_588_292_723_156_03, 0.095_091_634_267_284_624_794);
        r.orbit3(0.170_569_307_751_760_206_62, 0.103_217_370_534_718_250_28);
        r.orbit3(0.050_547_228_317_030_975_458, 0.032_458_497_623_198_080_311);
        r.orbit6(
            0.008_394_777_409_957_605_337_2,
            0.263_112_829_634_638_113_42,
            0.027_230_314_174_434_994_265,
        );
        r.finish(8)
    }

    /// Rule by total-degree requirement: picks the smallest built-in rule.
    pub fn for_degree(degree: usize) -> Self {
        match degree {
            0 | 1 => Self::centroid(),
            2..=5 => Self::seven_point(),
            6..=8 => Self::sixteen_point(),
            _ => panic!("no built-in triangle rule of degree {degree}"),
        }
    }

    /// Gauss-Legendre product rule on the collapsed square, exact for
    /// polynomials of total degree `degree`.
    pub fn collapsed_gauss(degree: usize) -> Self {
        let m = (degree + 3) / 2;
        let (x, w) = gauss_legendre01(m);
        let mut bary = Vec::with_capacity(m * m);
        let mut weights = Vec::with_capacity(m * m);
        for (&u, &wu) in x.iter().zip(&w) {
            for (&v, &wv) in x.iter().zip(&w) {
                bary.push([lit(1.0 - u), lit(u * (1.0 - v)), lit(u * v)]);
                weights.push(lit(2.0 * wu * wv * u));
            }
        }
        Self { bary, weights, degree }
    }

    /// Composite rule: `self` applied on each of the `4^levels` congruent
    /// sub-triangles of a midpoint refinement.
    pub fn subdivided(&self, levels: usize) -> Self {
        let mut tris = vec![[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]];
        for _ in 0..levels {
            let mut next = Vec::with_capacity(tris.len() * 4);
            for [a, b, c] in tris {
                let mid = |p: [f64; 3], q: [f64; 3]| [0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]), 0.5 * (p[2] + q[2])];
                let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
                next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
            }
            tris = next;
        }
        let scale = lit::<T>(1.0 / tris.len() as f64);
        let mut bary = Vec::with_capacity(tris.len() * self.len());
        let mut weights = Vec::with_capacity(tris.len() * self.len());
        for t in &tris {
            for (b, &w) in self.bary.iter().zip(&self.weights) {
                let mut p = [T::zero(); 3];
                for (k, pk) in p.iter_mut().enumerate() {
                    *pk = b[0] * lit(t[0][k]) + b[1] * lit(t[1][k]) + b[2] * lit(t[2][k]);
                }
                bary.push(p);
                weights.push(w * scale);
            }
        }
        Self {
            bary,
            weights,
            degree: self.degree,
        }
    }

    /// Rule that clusters points towards all three edges and vertices; used
    /// for outer integrals whose integrand is only log-smooth at the edges.
    ///
    /// The triangle is split into three sub-triangles at the centroid. In
    /// each, the radial coordinate from the centroid is graded as
    /// `1 - τ = (1 - u)^3` and the coordinate along the edge with a
    /// smoothstep map; `n` Gauss-Legendre nodes are used per direction.
    pub fn edge_graded(n: usize) -> Self {
        let (x, w) = gauss_legendre01(n);
        let c = [1.0 / 3.0; 3];
        let mut bary = Vec::with_capacity(3 * n * n);
        let mut weights = Vec::with_capacity(3 * n * n);
        for e in 0..3 {
            let a = unit(e);
            let b = unit((e + 1) % 3);
            for (&u, &wu) in x.iter().zip(&w) {
                let tau = 1.0 - (1.0 - u).powi(3);
                let dtau = 3.0 * (1.0 - u).powi(2);
                for (&v, &wv) in x.iter().zip(&w) {
                    let s = v * v * (3.0 - 2.0 * v);
                    let ds = 6.0 * v * (1.0 - v);
                    let mut p = [0.0; 3];
                    for k in 0..3 {
                        let edge_pt = a[k] + s * (b[k] - a[k]);
                        p[k] = c[k] + tau * (edge_pt - c[k]);
                    }
                    // Sub-triangle has 1/3 of the area; dA/A = 2 (1/3) τ dτ ds.
                    let wt = wu * wv * dtau * ds * tau * 2.0 / 3.0;
                    bary.push([lit(p[0]), lit(p[1]), lit(p[2])]);
                    weights.push(lit(wt));
                }
            }
        }
        // The map is cubic in u and v and the Jacobian has degree 5 in u, so
        // a degree-d polynomial becomes degree 3d + 5 in the Gauss variables.
        Self {
            bary,
            weights,
            degree: (2 * n).saturating_sub(6) / 3,
        }
    }
}

fn unit(i: usize) -> [f64; 3] {
    let mut u = [0.0; 3];
    u[i] = 1.0;
    u
}

#[derive(Default)]
struct Builder {
    bary: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl Builder {
    fn centroid(&mut self, w: f64) {
        self.bary.push([1.0 / 3.0; 3]);
        self.weights.push(w);
    }

    fn orbit3(&mut self, a: f64, w: f64) {
        let b = 1.0 - 2.0 * a;
        for p in [[a, a, b], [a, b, a], [b, a, a]] {
            self.bary.push(p);
            self.weights.push(w);
        }
    }

    fn orbit6(&mut self, a: f64, b: f64, w: f64) {
        let c = 1.0 - a - b;
        for p in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            self.bary.push(p);
            self.weights.push(w);
        }
    }

    fn finish<T: Real>(self, degree: usize) -> TriangleRule<T> {
        TriangleRule {
            bary: self.bary.iter().map(|p| p.map(lit)).collect(),
            weights: self.weights.iter().map(|&w| lit(w)).collect(),
            degree,
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Gauss-Legendre rule mapped to `[0, 1]`.
pub fn gauss_legendre01(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (
        x.iter().map(|&t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|&t| 0.5 * t).collect(),
    )
}
