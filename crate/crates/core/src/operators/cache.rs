//! On-disk cache of the AIMx frequency-independent parts.
//!
//! One file per key, little-endian: magic, key, then patterns, projections
//! and sparse values. Values are stored as `f64` whatever the scalar type.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use super::{hex, GridParts, NearParts, OperatorConfig, OperatorError};
use crate::aimgrid::{AimGrid, Convolution, Flavor, Projection};
use crate::fft::Fft3;
use crate::linalg::{CsrMatrix, Pattern};
use crate::mesh::Discretization;
use crate::num::{Real, C};
use crate::quadrature::SparseSet;

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "AIMX_CACHE_DIR";

const MAGIC: &[u8; 8] = b"AIMXSTAT";
const VERSION: u32 = 1;

pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Hex SHA-256 of everything the static parts depend on.
pub(super) fn key<T: Real>(disc: &Discretization<T>, grid: &AimGrid<T>, cfg: &OperatorConfig) -> String {
    let mut h = Sha256::new();
    h.update(MAGIC);
    h.update(VERSION.to_le_bytes());
    h.update((std::mem::size_of::<T>() as u32).to_le_bytes());
    let f = |h: &mut Sha256, x: T| h.update(x.to_f64().unwrap().to_le_bytes());
    for v in &disc.mesh.vertices {
        for x in v.to_array() {
            f(&mut h, x);
        }
    }
    for t in &disc.mesh.triangles {
        for &i in t {
            h.update((i as u64).to_le_bytes());
        }
    }
    for x in grid.origin.to_array() {
        f(&mut h, x);
    }
    f(&mut h, grid.spacing);
    for d in grid.dims {
        h.update((d as u64).to_le_bytes());
    }
    h.update((grid.order as u64).to_le_bytes());
    h.update((cfg.grid.near_radius() as u64).to_le_bytes());
    h.update(format!("{:?}|{:?}|{}", cfg.quadrature, cfg.ops, cfg.linear_term).as_bytes());
    hex(&h.finalize())
}

fn path_for(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("aimx-static-{}.bin", &key[..32]))
}

fn err(path: &Path, reason: impl ToString) -> OperatorError {
    OperatorError::Cache {
        path: path.display().to_string(),
        reason: reason.to_string(),
    }
}

struct Writer(Vec<u8>);

impl Writer {
    fn u64(&mut self, v: usize) {
        self.0.extend((v as u64).to_le_bytes());
    }

    fn f64(&mut self, v: f64) {
        self.0.extend(v.to_le_bytes());
    }

    fn pattern(&mut self, p: &Pattern) {
        self.u64(p.rows);
        self.u64(p.cols);
        self.u64(p.col_idx.len());
        for &v in p.row_ptr.iter().chain(&p.col_idx) {
            self.u64(v);
        }
    }

    fn projection<T: Real>(&mut self, p: &Projection<T>) {
        self.u64(p.anchors.len());
        for a in &p.anchors {
            for &i in a {
                self.u64(i);
            }
        }
        self.u64(p.weights.len());
        for w in &p.weights {
            self.f64(w.to_f64().unwrap());
        }
    }

    fn set<T: Real>(&mut self, s: &SparseSet<T>) {
        for m in [&s.la, &s.lphi, &s.k] {
            match m {
                Some(m) => {
                    self.u64(m.values.len());
                    for z in &m.values {
                        self.f64(z.re.to_f64().unwrap());
                        self.f64(z.im.to_f64().unwrap());
                    }
                }
                None => self.u64(usize::MAX),
            }
        }
    }

    fn opt_set<T: Real>(&mut self, s: &Option<SparseSet<T>>) {
        match s {
            Some(s) => {
                self.u64(1);
                self.set(s);
            }
            None => self.u64(0),
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8], String> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len()).ok_or("truncated file")?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u64(&mut self) -> Result<usize, String> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()) as usize)
    }

    fn f64<T: Real>(&mut self) -> Result<T, String> {
        Ok(T::from_f64(f64::from_le_bytes(self.take(8)?.try_into().unwrap())).unwrap())
    }

    fn pattern(&mut self) -> Result<Pattern, String> {
        let rows = self.u64()?;
        let cols = self.u64()?;
        let nnz = self.u64()?;
        let row_ptr = (0..=rows).map(|_| self.u64()).collect::<Result<_, _>>()?;
        let col_idx = (0..nnz).map(|_| self.u64()).collect::<Result<_, _>>()?;
        Ok(Pattern {
            rows,
            cols,
            row_ptr,
            col_idx,
        })
    }

    fn projection<T: Real>(&mut self, grid: &AimGrid<T>, flavor: Flavor) -> Result<Projection<T>, String> {
        let n = self.u64()?;
        let anchors = (0..n)
            .map(|_| Ok([self.u64()?, self.u64()?, self.u64()?]))
            .collect::<Result<Vec<_>, String>>()?;
        let len = self.u64()?;
        let weights = (0..len).map(|_| self.f64()).collect::<Result<Vec<T>, _>>()?;
        let stencil = grid.stencil_len();
        let comps = flavor.components();
        if len != n * comps * stencil {
            return Err("projection size mismatch".into());
        }
        Ok(Projection {
            flavor,
            anchors,
            stencil,
            comps,
            weights,
        })
    }

    fn set<T: Real>(&mut self, pattern: &Arc<Pattern>) -> Result<SparseSet<T>, String> {
        let mut one = || -> Result<Option<CsrMatrix<T>>, String> {
            let n = self.u64()?;
            if n == usize::MAX {
                return Ok(None);
            }
            if n != pattern.nnz() {
                return Err("matrix size mismatch".into());
            }
            let values = (0..n)
                .map(|_| Ok(C::new(self.f64()?, self.f64()?)))
                .collect::<Result<Vec<_>, String>>()?;
            Ok(Some(CsrMatrix {
                pattern: pattern.clone(),
                values,
            }))
        };
        Ok(SparseSet {
            la: one()?,
            lphi: one()?,
            k: one()?,
        })
    }

    fn opt_set<T: Real>(&mut self, pattern: &Arc<Pattern>) -> Result<Option<SparseSet<T>>, String> {
        match self.u64()? {
            0 => Ok(None),
            _ => self.set(pattern).map(Some),
        }
    }
}

pub(super) fn store<T: Real>(
    dir: &Path,
    key: &str,
    parts: &GridParts<T>,
    statics: &NearParts<T>,
) -> Result<(), OperatorError> {
    fs::create_dir_all(dir).map_err(|e| err(dir, e))?;
    let path = path_for(dir, key);
    let mut w = Writer(Vec::new());
    w.0.extend(MAGIC);
    w.0.extend(VERSION.to_le_bytes());
    w.0.extend(key.as_bytes());
    w.pattern(&parts.near);
    w.pattern(&parts.overlap);
    w.projection(&parts.pa);
    w.projection(&parts.pphi);
    match &parts.pk {
        Some(p) => {
            w.u64(1);
            w.projection(p);
        }
        None => w.u64(0),
    }
    w.set(&statics.near);
    w.set(&statics.pre);
    w.opt_set(&statics.lin_near);
    w.opt_set(&statics.lin_pre);
    // Write then rename so that a concurrent reader never sees a partial file.
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(|e| err(&tmp, e))?;
    f.write_all(&w.0).map_err(|e| err(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, &path).map_err(|e| err(&path, e))
}

/// Parts for `key`, or `None` if no cache file exists.
pub(super) fn load<T: Real>(
    dir: &Path,
    key: &str,
    grid: &AimGrid<T>,
) -> Result<Option<(GridParts<T>, NearParts<T>)>, OperatorError> {
    let path = path_for(dir, key);
    let buf = match fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(err(&path, e)),
    };
    let mut r = Reader { buf: &buf, pos: 0 };
    let parse = |r: &mut Reader| -> Result<Option<(GridParts<T>, NearParts<T>)>, String> {
        if r.take(8)? != MAGIC || r.take(4)? != VERSION.to_le_bytes() {
            return Err("not a cache file of this version".into());
        }
        if r.take(key.len())? != key.as_bytes() {
            // Prefix collision on the file name: treat as a miss.
            return Ok(None);
        }
        let near = Arc::new(r.pattern()?);
        let overlap = Arc::new(r.pattern()?);
        let pa = r.projection(grid, Flavor::A)?;
        let pphi = r.projection(grid, Flavor::Phi)?;
        let pk = match r.u64()? {
            0 => None,
            _ => Some(r.projection(grid, Flavor::K)?),
        };
        let statics = NearParts {
            near: r.set(&near)?,
            pre: r.set(&near)?,
            lin_near: r.opt_set(&overlap)?,
            lin_pre: r.opt_set(&overlap)?,
        };
        let overlap_pos = overlap
            .iter()
            .map(|(i, j)| near.find(i, j).ok_or("overlap pair missing from near pattern"))
            .collect::<Result<_, _>>()?;
        let fft = Arc::new(Fft3::new(Convolution::padded_dims(grid)));
        let parts = GridParts {
            grid: grid.clone(),
            pa,
            pphi,
            pk,
            near,
            overlap,
            overlap_pos,
            fft,
        };
        Ok(Some((parts, statics)))
    };
    parse(&mut r).map_err(|e| err(&path, e))
}
