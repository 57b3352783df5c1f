//! `aimx verify`: numerical checks with CSV tables.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use aimx_core::aimgrid::GridConfig;
use aimx_core::analysis::table::{interp_rows, selfterm_rows, sig12, write_csv, INTERP_HEADER, SELFTERM_HEADER};
use aimx_core::analysis::verify::{self, Check};
use aimx_core::analysis::{InterpKernel, InterpStudy};
use aimx_core::mesh::{load_mesh, shapes, MeshFormat};
use aimx_core::Discretization;
use clap::{Args, ValueEnum};

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Kernels,
    Interp,
    Selfterm,
    Modes,
    Toeplitz,
    Sphere,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Closed PEC sphere mesh for the self-term and sphere suites
    /// (default: a 1280-triangle icosphere).
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Sphere radius in meters, used for the default mesh and the Mie reference.
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    /// Sphere sweep in Hz.
    #[arg(long, default_value_t = 50e6)]
    start: f64,
    #[arg(long, default_value_t = 250e6)]
    stop: f64,
    #[arg(long, default_value_t = 5)]
    count: usize,
    /// Grid samples per wavelength for the sphere suite.
    #[arg(long, default_value_t = 13.0)]
    ppw: f64,
    #[arg(long, default_value = "aimx-verify")]
    out: PathBuf,
}

const SPHERE_HEADER: [&str; 5] = ["frequency_hz", "aimx_minus_mie_db", "direct_minus_mie_db", "iters_diag_static", "iters_diag_fullwave"];

fn write(dir: &Path, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let p = dir.join(name);
    let f = fs::File::create(&p).map_err(|e| Failure::io(&p, e))?;
    write_csv(f, header, rows).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
}

fn sphere(a: &VerifyArgs) -> Result<Arc<Discretization<f64>>, Failure> {
    let mesh = match &a.mesh {
        Some(p) => {
            let fmt = MeshFormat::from_path(p)
                .ok_or_else(|| Failure::Config(format!("cannot infer mesh format of {}", p.display())))?;
            load_mesh(p, fmt, 1.0).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?
        }
        None => shapes::icosphere(3, a.radius),
    };
    Discretization::new(mesh)
        .map(Arc::new)
        .map_err(|e| Failure::Config(e.to_string()))
}

fn error_check(name: &str, e: impl std::fmt::Display) -> Check {
    Check::new(name, false, format!("error: {e}"))
}

/// Returns whether every selected check passed.
pub fn run(a: VerifyArgs) -> Result<bool, Failure> {
    if !(a.radius > 0.0) || !(a.ppw >= 5.0) || a.count == 0 || !(a.start > 0.0) || a.stop < a.start {
        return Err(Failure::Config("bad verify parameters".into()));
    }
    fs::create_dir_all(&a.out).map_err(|e| Failure::io(&a.out, e))?;
    let on = |s: Suite| a.suite == Suite::All || a.suite == s;
    let mut checks = Vec::new();

    if on(Suite::Kernels) {
        checks.push(verify::kernel_identities(100_000, 1));
    }
    if on(Suite::Interp) {
        let ppw = [10.0, 20.0, 30.0];
        let mut rows = Vec::new();
        for kernel in [InterpKernel::Gd, InterpKernel::GradGd] {
            for n in 1..=3 {
                let curves = InterpStudy::new(kernel, n, ppw.to_vec())
                    .run()
                    .map_err(|e| Failure::Config(e.to_string()))?;
                for c in &curves {
                    for mut r in interp_rows(c) {
                        r.insert(0, n.to_string());
                        r.insert(0, kernel.name().to_string());
                        rows.push(r);
                    }
                }
            }
        }
        let header: Vec<&str> = ["kernel", "order"].into_iter().chain(INTERP_HEADER).collect();
        write(&a.out, "interp.csv", &header, &rows)?;
        checks.push(verify::interpolation_bounds(&[1, 2, 3], &ppw));
    }
    if on(Suite::Selfterm) {
        match verify::self_term(sphere(&a)?, GridConfig::default()) {
            Ok((c, rows)) => {
                let mut table = selfterm_rows(&rows);
                let half = rows.len() / 2;
                for (i, r) in table.iter_mut().enumerate() {
                    r.push((i >= half).to_string());
                }
                let header: Vec<&str> = SELFTERM_HEADER.into_iter().chain(["linear_term"]).collect();
                write(&a.out, "selfterm.csv", &header, &table)?;
                checks.extend(c);
            }
            Err(e) => checks.push(error_check("self term", e)),
        }
    }
    if on(Suite::Modes) {
        checks.push(verify::mode_equivalence(5).unwrap_or_else(|e| error_check("mode equivalence", e)));
    }
    if on(Suite::Toeplitz) {
        checks.push(verify::toeplitz(9));
    }
    if on(Suite::Sphere) {
        let freqs: Vec<f64> = if a.count == 1 {
            vec![a.start]
        } else {
            (0..a.count).map(|i| a.start + (a.stop - a.start) * i as f64 / (a.count - 1) as f64).collect()
        };
        let grid = GridConfig {
            points_per_wavelength: a.ppw,
            ..GridConfig::default()
        };
        match verify::sphere_runs(sphere(&a)?, a.radius, freqs, grid) {
            Ok(r) => {
                let rows: Vec<Vec<String>> = (0..r.frequencies.len())
                    .map(|i| {
                        vec![
                            sig12(r.frequencies[i]),
                            sig12(r.aimx_db[i]),
                            sig12(r.direct_db[i]),
                            r.iters_static[i].to_string(),
                            r.iters_fullwave[i].to_string(),
                        ]
                    })
                    .collect();
                write(&a.out, "sphere.csv", &SPHERE_HEADER, &rows)?;
                checks.push(r.rcs_check(0.5));
                checks.push(r.preconditioner_check());
            }
            Err(e) => checks.push(error_check("sphere rcs vs mie", e)),
        }
    }

    let lines: Vec<String> = checks.iter().map(|c| c.line()).collect();
    for l in &lines {
        println!("{l}");
    }
    let p = a.out.join("checks.txt");
    fs::write(&p, lines.join("\n") + "\n").map_err(|e| Failure::io(&p, e))?;
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if !failed.is_empty() {
        eprintln!("aimx: failed checks: {}", failed.join(", "));
    }
    Ok(failed.is_empty())
}
