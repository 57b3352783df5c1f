//! Triangle surface meshes and RWG basis functions.

mod io;
pub mod shapes;

use std::collections::BTreeMap;

pub use io::{load_mesh, parse_gmsh2, parse_tri, write_tri, MeshFormat};

use crate::geom::{Aabb, Vec3};
use crate::num::{lit, Real};

#[derive(Debug, thiserror::Error)]
pub enum MeshError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("triangle {tri} references vertex {vertex} but mesh has {count} vertices")]
    IndexOutOfRange {
        tri: usize,
        vertex: usize,
        count: usize,
    },
    #[error("triangle {0} is degenerate (zero area)")]
    Degenerate(usize),
    #[error("edge {edge} ({a}, {b}) is shared by {count} triangles")]
    NonManifold {
        edge: usize,
        a: usize,
        b: usize,
        count: usize,
    },
    #[error("edge {edge} ({a}, {b}) is traversed in the same direction by both adjacent triangles")]
    InconsistentOrientation { edge: usize, a: usize, b: usize },
    #[error("mesh is empty")]
    Empty,
}

/// Undirected mesh edge with its (at most two) adjacent triangles.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    /// Vertex indices with `a < b`.
    pub a: usize,
    pub b: usize,
    /// Adjacent triangles, in the order they were encountered.
    pub tris: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Mesh<T> {
    pub vertices: Vec<Vec3<T>>,
    pub triangles: Vec<[usize; 3]>,
    pub areas: Vec<T>,
    pub normals: Vec<Vec3<T>>,
    /// Edges sorted by `(a, b)`; the position in this list is the edge id.
    pub edges: Vec<Edge>,
}

impl<T: Real> Mesh<T> {
    /// Validates indices, areas and edge manifoldness, and precomputes
    /// per-triangle geometry and the edge table.
    pub fn new(vertices: Vec<Vec3<T>>, triangles: Vec<[usize; 3]>) -> Result<Self, MeshError> {
        if triangles.is_empty() {
            return Err(MeshError::Empty);
        }
        let nv = vertices.len();
        let mut areas = Vec::with_capacity(triangles.len());
        let mut normals = Vec::with_capacity(triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= nv {
                    return Err(MeshError::IndexOutOfRange {
                        tri: t,
                        vertex: v,
                        count: nv,
                    });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(MeshError::Degenerate(t));
            }
            let [p0, p1, p2] = tri.map(|i| vertices[i]);
            let n = (p1 - p0).cross(p2 - p0);
            let twice = n.norm();
            let scale = (p1 - p0).norm_sq().max((p2 - p0).norm_sq());
            if !(twice > scale * lit(1e-12)) {
                return Err(MeshError::Degenerate(t));
            }
            areas.push(twice * lit(0.5));
            normals.push(n / twice);
        }

        let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for i in 0..3 {
                let (u, v) = (tri[i], tri[(i + 1) % 3]);
                map.entry((u.min(v), u.max(v))).or_default().push(t);
            }
        }
        let mut edges = Vec::with_capacity(map.len());
        for (id, ((a, b), tris)) in map.into_iter().enumerate() {
            if tris.len() > 2 {
                return Err(MeshError::NonManifold {
                    edge: id,
                    a,
                    b,
                    count: tris.len(),
                });
            }
            edges.push(Edge { a, b, tris });
        }
        Ok(Self {
            vertices,
            triangles,
            areas,
            normals,
            edges,
        })
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn tri_vertices(&self, t: usize) -> [Vec3<T>; 3] {
        self.triangles[t].map(|i| self.vertices[i])
    }

    pub fn centroid(&self, t: usize) -> Vec3<T> {
        let [a, b, c] = self.tri_vertices(t);
        (a + b + c) / lit(3.0)
    }

    pub fn interior_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.tris.len() == 2).count()
    }

    /// True when every edge is shared by exactly two triangles.
    pub fn is_closed(&self) -> bool {
        self.edges.iter().all(|e| e.tris.len() == 2)
    }

    /// Signed enclosed volume; positive for a closed mesh with outward normals.
    pub fn signed_volume(&self) -> T {
        let mut v = T::zero();
        for t in 0..self.triangles.len() {
            let [a, b, c] = self.tri_vertices(t);
            v = v + a.dot(b.cross(c));
        }
        v / lit(6.0)
    }

    pub fn mean_edge_length(&self) -> T {
        let mut s = T::zero();
        for e in &self.edges {
            s = s + (self.vertices[e.b] - self.vertices[e.a]).norm();
        }
        s / T::from_usize(self.edges.len()).unwrap()
    }

    pub fn max_edge_length(&self) -> T {
        self.edges
            .iter()
            .map(|e| (self.vertices[e.b] - self.vertices[e.a]).norm())
            .fold(T::zero(), T::max)
    }

    /// Minimal axis-aligned box around all vertices, inflated by `margin`.
    pub fn bounding_box(&self, margin: T) -> Aabb<T> {
        let mut min = self.vertices[0];
        let mut max = self.vertices[0];
        for p in &self.vertices {
            min = Vec3::new(min.x.min(p.x), min.y.min(p.y), min.z.min(p.z));
            max = Vec3::new(max.x.max(p.x), max.y.max(p.y), max.z.max(p.z));
        }
        Aabb { min, max }.inflate(margin)
    }

    /// Applies `f` to every vertex, recomputing the derived geometry.
    pub fn map_vertices(&self, f: impl Fn(Vec3<T>) -> Vec3<T>) -> Result<Self, MeshError> {
        Self::new(
            self.vertices.iter().map(|&p| f(p)).collect(),
            self.triangles.clone(),
        )
    }

    /// Converts the scalar type.
    pub fn cast<U: Real>(&self) -> Mesh<U> {
        let conv = |x: T| U::from_f64(x.to_f64().unwrap()).unwrap();
        Mesh::new(
            self.vertices
                .iter()
                .map(|p| Vec3::new(conv(p.x), conv(p.y), conv(p.z)))
                .collect(),
            self.triangles.clone(),
        )
        .expect("valid mesh stays valid under precision change")
    }
}

/// One RWG function supported on the two triangles adjacent to an interior edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RwgBasis<T> {
    pub edge: usize,
    pub tri_plus: usize,
    pub tri_minus: usize,
    /// Global index of the vertex opposite the edge in each triangle.
    pub free_plus: usize,
    pub free_minus: usize,
    /// Local (0..3) position of the free vertex in each triangle.
    pub local_plus: usize,
    pub local_minus: usize,
    pub length: T,
}

impl<T: Real> RwgBasis<T> {
    /// Iterates the two supporting halves as `(triangle, local free vertex, sign)`.
    pub fn halves(&self) -> [(usize, usize, T); 2] {
        [
            (self.tri_plus, self.local_plus, T::one()),
            (self.tri_minus, self.local_minus, -T::one()),
        ]
    }

    /// Coefficient `c` in `f = c (r - v_free)` on triangle `t` of the support.
    pub fn coef(&self, m: &Mesh<T>, plus: bool) -> T {
        if plus {
            self.length / (m.areas[self.tri_plus] * lit(2.0))
        } else {
            -self.length / (m.areas[self.tri_minus] * lit(2.0))
        }
    }

    /// Evaluates f at a point known to lie on triangle `t` (zero elsewhere).
    pub fn eval(&self, mesh: &Mesh<T>, t: usize, r: Vec3<T>) -> Vec3<T> {
        if t == self.tri_plus {
            (r - mesh.vertices[self.free_plus]) * self.coef(mesh, true)
        } else if t == self.tri_minus {
            (r - mesh.vertices[self.free_minus]) * self.coef(mesh, false)
        } else {
            Vec3::zero()
        }
    }

    /// Surface divergence on triangle `t`.
    pub fn divergence(&self, mesh: &Mesh<T>, t: usize) -> T {
        if t == self.tri_plus {
            self.length / mesh.areas[t]
        } else if t == self.tri_minus {
            -self.length / mesh.areas[t]
        } else {
            T::zero()
        }
    }

    /// Area-weighted centroid of the two-triangle support.
    pub fn support_centroid(&self, mesh: &Mesh<T>) -> Vec3<T> {
        let (ap, am) = (mesh.areas[self.tri_plus], mesh.areas[self.tri_minus]);
        (mesh.centroid(self.tri_plus) * ap + mesh.centroid(self.tri_minus) * am) / (ap + am)
    }
}

/// Builds one RWG function per interior edge, ordered by edge id.
///
/// The plus triangle is the one traversing the edge from its lower to its
/// higher vertex index.
pub fn build_rwg<T: Real>(mesh: &Mesh<T>) -> Result<Vec<RwgBasis<T>>, MeshError> {
    let mut out = Vec::new();
    for (id, e) in mesh.edges.iter().enumerate() {
        if e.tris.len() != 2 {
            continue;
        }
        let forward = |t: usize| {
            let tri = mesh.triangles[t];
            (0..3).any(|i| tri[i] == e.a && tri[(i + 1) % 3] == e.b)
        };
        let (t0, t1) = (e.tris[0], e.tris[1]);
        let (tp, tm) = match (forward(t0), forward(t1)) {
            (true, false) => (t0, t1),
            (false, true) => (t1, t0),
            _ => {
                return Err(MeshError::InconsistentOrientation {
                    edge: id,
                    a: e.a,
                    b: e.b,
                })
            }
        };
        let free = |t: usize| {
            let tri = mesh.triangles[t];
            let l = (0..3).find(|&i| tri[i] != e.a && tri[i] != e.b).unwrap();
            (tri[l], l)
        };
        let (free_plus, local_plus) = free(tp);
        let (free_minus, local_minus) = free(tm);
        out.push(RwgBasis {
            edge: id,
            tri_plus: tp,
            tri_minus: tm,
            free_plus,
            free_minus,
            local_plus,
            local_minus,
            length: (mesh.vertices[e.b] - mesh.vertices[e.a]).norm(),
        });
    }
    Ok(out)
}

/// Per-triangle list of `(basis index, local free vertex, coefficient)` so
/// that the basis restricted to the triangle is `coef * (r - v_local)`.
pub type TriBasisMap<T> = Vec<Vec<(usize, usize, T)>>;

pub fn triangle_basis_map<T: Real>(mesh: &Mesh<T>, basis: &[RwgBasis<T>]) -> TriBasisMap<T> {
    let mut map = vec![Vec::new(); mesh.num_triangles()];
    for (n, b) in basis.iter().enumerate() {
        map[b.tri_plus].push((n, b.local_plus, b.coef(mesh, true)));
        map[b.tri_minus].push((n, b.local_minus, b.coef(mesh, false)));
    }
    map
}

/// Mesh together with its RWG basis and the triangle-to-basis incidence.
#[derive(Clone, Debug)]
pub struct Discretization<T> {
    pub mesh: Mesh<T>,
    pub basis: Vec<RwgBasis<T>>,
    pub tri_map: TriBasisMap<T>,
}

impl<T: Real> Discretization<T> {
    pub fn new(mesh: Mesh<T>) -> Result<Self, MeshError> {
        let basis = build_rwg(&mesh)?;
        let tri_map = triangle_basis_map(&mesh, &basis);
        Ok(Self {
            mesh,
            basis,
            tri_map,
        })
    }

    pub fn unknowns(&self) -> usize {
        self.basis.len()
    }
}
