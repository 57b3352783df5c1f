//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use aimx_core::Vec3;

/// Tanh-sinh nodes and weights on `[0, 1]`, truncated before the nodes
/// round onto the endpoints.
pub fn tanh_sinh01(level: usize) -> Vec<(f64, f64)> {
    let h = 1.0 / (1 << level) as f64;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut out = vec![(0.5, 0.5 * h * half_pi)];
    for k in 1.. {
        let t = k as f64 * h;
        let s = half_pi * t.sinh();
        let w = 0.5 * h * half_pi * t.cosh() / (s.cosh() * s.cosh());
        // (1 - tanh s)/2, free of cancellation.
        let e = 1.0 / ((2.0 * s).exp() + 1.0);
        if e < 1e-15 {
            break;
        }
        out.push((1.0 - e, w));
        out.push((e, w));
    }
    out
}

/// Gauss-Legendre on `[0, 1]`.
pub fn gl01(n: usize) -> Vec<(f64, f64)> {
    let (x, w) = aimx_core::quadrature::gauss_legendre01(n);
    x.into_iter().zip(w).collect()
}

/// Integrates `f` over triangle `(a, b, c)` with a Duffy collapse at `a` and
/// the given 1-D rule in both directions. Handles integrands that are only
/// log-smooth along the edges.
pub fn tri_integrate<F: FnMut(Vec3<f64>) -> f64>(tri: [Vec3<f64>; 3], rule: &[(f64, f64)], mut f: F) -> f64 {
    let [a, b, c] = tri;
    let area2 = (b - a).cross(c - a).norm();
    let mut s = 0.0;
    for &(u, wu) in rule {
        for &(v, wv) in rule {
            let p = a + (b - a) * u + (c - b) * (u * v);
            s += wu * wv * u * area2 * f(p);
        }
    }
    s
}

/// `∫_T g(r') / |r - r'| dS'` for `r` in the plane of `T`, by splitting `T`
/// into signed sub-triangles with apex at `r` and collapsing each (Duffy).
/// Along each far edge the substitution `v = v0 + h sinh t` removes the
/// near-singularity of `1/|dir|` when `r` sits close to the edge line.
pub fn inplane_inner<G: Fn(Vec3<f64>) -> f64>(tri: [Vec3<f64>; 3], r: Vec3<f64>, n: usize, g: G) -> f64 {
    let rule = gl01(n);
    let normal = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
    let mut total = 0.0;
    for e in 0..3 {
        let (p, q) = (tri[e], tri[(e + 1) % 3]);
        let signed2 = (p - r).cross(q - r).dot(normal);
        if signed2.abs() < 1e-300 {
            continue;
        }
        let e2 = (q - p).norm_sq();
        let v0 = -(p - r).dot(q - p) / e2;
        let h = signed2.abs() / e2;
        let (t0, t1) = ((-v0 / h).asinh(), ((1.0 - v0) / h).asinh());
        let el = e2.sqrt();
        for &(s, ws) in &rule {
            let t = t0 + (t1 - t0) * s;
            let v = v0 + h * t.sinh();
            // dv / |dir| = dt / |q - p|.
            let wv = ws * (t1 - t0) / el;
            for &(u, wu) in &rule {
                // x = r + u (p - r) + u v (q - p); dA = |signed2| u du dv.
                let x = r + (p - r) * u + (q - p) * (u * v);
                total += wu * wv * signed2 * g(x);
            }
        }
    }
    total
}

/// `∫_T g(r') / |r - r'| dS'` for `r` off the plane: splits at the
/// projection of `r` and integrates the (then smooth) integrand.
pub fn offplane_inner<G: Fn(Vec3<f64>) -> f64>(tri: [Vec3<f64>; 3], r: Vec3<f64>, n: usize, g: G) -> f64 {
    let rule = gl01(n);
    let normal = (tri[1] - tri[0]).cross(tri[2] - tri[0]).normalized();
    let d = normal.dot(r - tri[0]);
    let rho = r - normal * d;
    let mut total = 0.0;
    for e in 0..3 {
        let (p, q) = (tri[e], tri[(e + 1) % 3]);
        let signed2 = (p - rho).cross(q - rho).dot(normal);
        for &(u, wu) in &rule {
            for &(v, wv) in &rule {
                let x = rho + (p - rho) * u + (q - p) * (u * v);
                total += wu * wv * signed2 * u * g(x) / (x - r).norm();
            }
        }
    }
    total
}

/// Refined product rule for smooth integrands: every triangle split `4^level` times.
pub fn subdivide(tri: [Vec3<f64>; 3], level: usize) -> Vec<[Vec3<f64>; 3]> {
    let mut tris = vec![tri];
    for _ in 0..level {
        let mut next = Vec::with_capacity(tris.len() * 4);
        for [a, b, c] in tris {
            let (ab, bc, ca) = ((a + b) * 0.5, (b + c) * 0.5, (c + a) * 0.5);
            next.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        tris = next;
    }
    tris
}

/// Points and weights of the 16-point rule on each of `4^level` sub-triangles.
pub fn fine_points(tri: [Vec3<f64>; 3], level: usize) -> Vec<(Vec3<f64>, f64)> {
    let rule = aimx_core::quadrature::TriangleRule::<f64>::sixteen_point();
    let mut out = Vec::new();
    for t in subdivide(tri, level) {
        let area = 0.5 * (t[1] - t[0]).cross(t[2] - t[0]).norm();
        let (p, w) = rule.map(&t, area);
        out.extend(p.into_iter().zip(w));
    }
    out
}
