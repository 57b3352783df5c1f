//! Mesh file readers and the triangle-list writer.
//!
//! Triangle-list format (`.tri`): `#` comment lines and blank lines are
//! ignored; the first data line holds `nv nt`, followed by `nv` vertex lines
//! `x y z` and `nt` lines of 0-based vertex indices `i j k`.
//!
//! Gmsh import understands the ASCII version 2 `.msh` layout and keeps only
//! 3-node triangle elements (type 2).

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use super::{Mesh, MeshError};
use crate::geom::Vec3;
use crate::num::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Tri,
    Gmsh,
}

impl MeshFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "tri" | "txt" => Some(Self::Tri),
            "msh" => Some(Self::Gmsh),
            _ => None,
        }
    }
}

impl FromStr for MeshFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "tri" => Ok(Self::Tri),
            "gmsh" | "msh" => Ok(Self::Gmsh),
            other => Err(format!("unknown mesh format '{other}'")),
        }
    }
}

/// Reads a mesh, multiplying every coordinate by `scale` (to meters).
pub fn load_mesh<T: Real>(path: &Path, format: MeshFormat, scale: T) -> Result<Mesh<T>, MeshError> {
    let text = std::fs::read_to_string(path)?;
    let (verts, tris) = match format {
        MeshFormat::Tri => parse_tri(&text)?,
        MeshFormat::Gmsh => parse_gmsh2(&text)?,
    };
    Mesh::new(verts.into_iter().map(|p| p * scale).collect(), tris)
}

type Raw<T> = (Vec<Vec3<T>>, Vec<[usize; 3]>);

fn perr(line: usize, msg: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        msg: msg.into(),
    }
}

fn nums<N: FromStr>(line: usize, s: &str, count: usize) -> Result<Vec<N>, MeshError> {
    let v: Vec<N> = s
        .split_whitespace()
        .map(|t| t.parse::<N>().map_err(|_| perr(line, format!("bad number '{t}'"))))
        .collect::<Result<_, _>>()?;
    if v.len() < count {
        return Err(perr(line, format!("expected {count} values, found {}", v.len())));
    }
    Ok(v)
}

fn real<T: Real>(line: usize, x: f64) -> Result<T, MeshError> {
    if !x.is_finite() {
        return Err(perr(line, "non-finite coordinate"));
    }
    Ok(T::from_f64(x).unwrap())
}

pub fn parse_tri<T: Real>(text: &str) -> Result<Raw<T>, MeshError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or_else(|| perr(0, "missing header"))?;
    let h: Vec<usize> = nums(ln, header, 2)?;
    let (nv, nt) = (h[0], h[1]);
    let mut verts = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines.next().ok_or_else(|| perr(0, "unexpected end of vertex block"))?;
        let v: Vec<f64> = nums(ln, l, 3)?;
        verts.push(Vec3::new(real(ln, v[0])?, real(ln, v[1])?, real(ln, v[2])?));
    }
    let mut tris = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (ln, l) = lines.next().ok_or_else(|| perr(0, "unexpected end of triangle block"))?;
        let t: Vec<usize> = nums(ln, l, 3)?;
        tris.push([t[0], t[1], t[2]]);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(perr(ln, "trailing data after triangle block"));
    }
    Ok((verts, tris))
}

pub fn parse_gmsh2<T: Real>(text: &str) -> Result<Raw<T>, MeshError> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).collect();
    let find = |tag: &str| lines.iter().position(|(_, l)| *l == tag);

    if let Some(f) = find("$MeshFormat") {
        let (ln, l) = lines.get(f + 1).copied().ok_or_else(|| perr(f + 1, "truncated $MeshFormat"))?;
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() < 2 || !fields[0].starts_with('2') {
            return Err(perr(ln, "only ASCII Gmsh version 2 is supported"));
        }
        if fields[1] != "0" {
            return Err(perr(ln, "binary Gmsh files are not supported"));
        }
    }

    let start = find("$Nodes").ok_or_else(|| perr(0, "missing $Nodes section"))?;
    let (ln, l) = lines.get(start + 1).copied().ok_or_else(|| perr(start + 1, "truncated $Nodes"))?;
    let nn: usize = nums::<usize>(ln, l, 1)?[0];
    let mut id_map = HashMap::with_capacity(nn);
    let mut verts = Vec::with_capacity(nn);
    for i in 0..nn {
        let (ln, l) = lines.get(start + 2 + i).copied().ok_or_else(|| perr(0, "truncated $Nodes"))?;
        let v: Vec<f64> = nums(ln, l, 4)?;
        id_map.insert(v[0] as usize, verts.len());
        verts.push(Vec3::new(real(ln, v[1])?, real(ln, v[2])?, real(ln, v[3])?));
    }

    let start = find("$Elements").ok_or_else(|| perr(0, "missing $Elements section"))?;
    let (ln, l) = lines.get(start + 1).copied().ok_or_else(|| perr(start + 1, "truncated $Elements"))?;
    let ne: usize = nums::<usize>(ln, l, 1)?[0];
    let mut tris = Vec::new();
    for i in 0..ne {
        let (ln, l) = lines.get(start + 2 + i).copied().ok_or_else(|| perr(0, "truncated $Elements"))?;
        let v: Vec<usize> = nums(ln, l, 3)?;
        if v[1] != 2 {
            continue;
        }
        let ntags = v[2];
        if v.len() < 3 + ntags + 3 {
            return Err(perr(ln, "triangle element with too few nodes"));
        }
        let mut tri = [0usize; 3];
        for (k, slot) in tri.iter_mut().enumerate() {
            let id = v[3 + ntags + k];
            *slot = *id_map
                .get(&id)
                .ok_or_else(|| perr(ln, format!("unknown node id {id}")))?;
        }
        tris.push(tri);
    }
    Ok((verts, tris))
}

/// Writes the triangle-list format with round-trip precision.
pub fn write_tri<T: Real>(mesh: &Mesh<T>, mut out: impl Write, comment: &str) -> std::io::Result<()> {
    writeln!(out, "# {comment}")?;
    writeln!(out, "{} {}", mesh.vertices.len(), mesh.triangles.len())?;
    for p in &mesh.vertices {
        writeln!(out, "{:.17e} {:.17e} {:.17e}", p.x, p.y, p.z)?;
    }
    for t in &mesh.triangles {
        writeln!(out, "{} {} {}", t[0], t[1], t[2])?;
    }
    Ok(())
}
