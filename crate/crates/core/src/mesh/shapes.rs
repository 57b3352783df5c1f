//! Small procedural meshes for tests and examples.

use std::collections::HashMap;

use super::Mesh;
use crate::geom::Vec3;
use crate::num::{lit, Real};

/// Single right triangle in the xy-plane.
pub fn single_triangle<T: Real>() -> Mesh<T> {
    Mesh::new(
        vec![Vec3::zero(), Vec3::from_f64(1.0, 0.0, 0.0), Vec3::from_f64(0.0, 1.0, 0.0)],
        vec![[0, 1, 2]],
    )
    .unwrap()
}

/// Unit square split along its diagonal (one interior edge).
pub fn square<T: Real>() -> Mesh<T> {
    plate(T::one(), T::one(), 1, 1)
}

/// Rectangular plate `[0, lx] x [0, ly]` in z = 0 with `nx * ny` cells.
pub fn plate<T: Real>(lx: T, ly: T, nx: usize, ny: usize) -> Mesh<T> {
    let mut v = Vec::new();
    for j in 0..=ny {
        for i in 0..=nx {
            v.push(Vec3::new(
                lx * T::from_usize(i).unwrap() / T::from_usize(nx).unwrap(),
                ly * T::from_usize(j).unwrap() / T::from_usize(ny).unwrap(),
                T::zero(),
            ));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut t = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            t.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            t.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::new(v, t).unwrap()
}

/// Regular tetrahedron with outward normals.
pub fn tetrahedron<T: Real>() -> Mesh<T> {
    let v = vec![
        Vec3::from_f64(1.0, 1.0, 1.0),
        Vec3::from_f64(1.0, -1.0, -1.0),
        Vec3::from_f64(-1.0, 1.0, -1.0),
        Vec3::from_f64(-1.0, -1.0, 1.0),
    ];
    Mesh::new(v, vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]]).unwrap()
}

/// Regular octahedron with vertices on the axes at distance `r` (12 edges).
pub fn octahedron<T: Real>(r: T) -> Mesh<T> {
    let z = T::zero();
    let v = vec![
        Vec3::new(r, z, z),
        Vec3::new(-r, z, z),
        Vec3::new(z, r, z),
        Vec3::new(z, -r, z),
        Vec3::new(z, z, r),
        Vec3::new(z, z, -r),
    ];
    let t = vec![
        [0, 2, 4],
        [2, 1, 4],
        [1, 3, 4],
        [3, 0, 4],
        [2, 0, 5],
        [1, 2, 5],
        [3, 1, 5],
        [0, 3, 5],
    ];
    Mesh::new(v, t).unwrap()
}

/// Axis-aligned box `[0, 1]^3` with `n x n` cells per face, normals outward.
pub fn unit_cube<T: Real>(n: usize) -> Mesh<T> {
    let mut verts: Vec<Vec3<T>> = Vec::new();
    let mut index: HashMap<[usize; 3], usize> = HashMap::new();
    let mut vid = |p: [usize; 3], verts: &mut Vec<Vec3<T>>| {
        *index.entry(p).or_insert_with(|| {
            let f = |k: usize| T::from_usize(k).unwrap() / T::from_usize(n).unwrap();
            verts.push(Vec3::new(f(p[0]), f(p[1]), f(p[2])));
            verts.len() - 1
        })
    };
    let mut tris = Vec::new();
    for axis in 0..3 {
        let (u, w) = ((axis + 1) % 3, (axis + 2) % 3);
        for side in [0usize, n] {
            for i in 0..n {
                for j in 0..n {
                    let mut corner = |di: usize, dj: usize| {
                        let mut p = [0usize; 3];
                        p[axis] = side;
                        p[u] = i + di;
                        p[w] = j + dj;
                        vid(p, &mut verts)
                    };
                    let (a, b, c, d) = (corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1));
                    // (u, w, axis) is right-handed, so a-b-c is counter-clockwise seen from +axis.
                    if side == n {
                        tris.push([a, b, c]);
                        tris.push([a, c, d]);
                    } else {
                        tris.push([a, c, b]);
                        tris.push([a, d, c]);
                    }
                }
            }
        }
    }
    Mesh::new(verts, tris).unwrap()
}

/// Geodesic sphere from a subdivided icosahedron: `20 * 4^level` triangles.
pub fn icosphere<T: Real>(level: usize, radius: T) -> Mesh<T> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let base = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let mut verts: Vec<[f64; 3]> = base
        .iter()
        .map(|p| {
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            [p[0] / n, p[1] / n, p[2] / n]
        })
        .collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(tris.len() * 4);
        for t in &tris {
            let mut m = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                m[k] = *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                    let (p, q) = (verts[a], verts[b]);
                    let s = [p[0] + q[0], p[1] + q[1], p[2] + q[2]];
                    let n = (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt();
                    verts.push([s[0] / n, s[1] / n, s[2] / n]);
                    verts.len() - 1
                });
            }
            next.push([t[0], m[0], m[2]]);
            next.push([t[1], m[1], m[0]]);
            next.push([t[2], m[2], m[1]]);
            next.push([m[0], m[1], m[2]]);
        }
        tris = next;
    }
    let verts = verts
        .into_iter()
        .map(|p| Vec3::new(lit::<T>(p[0]), lit(p[1]), lit(p[2])) * radius)
        .collect();
    Mesh::new(verts, tris).unwrap()
}
