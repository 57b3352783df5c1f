//! `aimx solve`: runs a frequency sweep and writes the report files.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use aimx_core::aimgrid::AimGrid;
use aimx_core::analysis::table::{sig12, write_csv};
use aimx_core::analysis::{direction, far_field_rcs, to_dbsm, MieSolution};
use aimx_core::counters::{CounterSnapshot, WorkCounters};
use aimx_core::kernels::Wavenumber;
use aimx_core::mesh::{load_mesh, MeshFormat};
use aimx_core::operators::Mode;
use aimx_core::solver::{run_sweep_with, FrequencyResult, PlaneWave, SweepResult};
use aimx_core::{Discretization, Vec3};
use serde_json::{json, Value};

use crate::config::{Resolved, RunConfig};
use crate::Failure;

pub struct SolveArgs {
    pub config: PathBuf,
    pub cache_dir: Option<PathBuf>,
    pub scale: Option<f64>,
    pub out: Option<PathBuf>,
}

pub const REPORT_HEADER: [&str; 15] = [
    "incidence",
    "frequency_hz",
    "k0",
    "status",
    "iterations",
    "residual",
    "rcs_m2",
    "rcs_dbsm",
    "mie_m2",
    "mie_dbsm",
    "singular_integration_calls",
    "near_entry_direct_integrations",
    "precorrection_builds",
    "fft_applications",
    "message",
];

pub const TIMING_HEADER: [&str; 7] = ["incidence", "frequency_hz", "setup_s", "bind_s", "excitation_s", "preconditioner_s", "solve_s"];

pub const BISTATIC_HEADER: [&str; 6] = ["incidence", "frequency_hz", "phi_deg", "theta_deg", "rcs_m2", "rcs_dbsm"];

fn counters_json(c: &CounterSnapshot) -> Value {
    json!({
        "singular_integration_calls": c.singular_integration_calls,
        "near_entry_direct_integrations": c.near_entry_direct_integrations,
        "precorrection_builds": c.precorrection_builds,
        "fft_applications": c.fft_applications,
    })
}

fn status(p: &FrequencyResult<f64>) -> &'static str {
    if p.error.is_some() {
        "error"
    } else if p.converged {
        "ok"
    } else {
        "not_converged"
    }
}

fn vec3(a: [f64; 3]) -> Vec3<f64> {
    Vec3::new(a[0], a[1], a[2])
}

fn write_table(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let f = fs::File::create(path).map_err(|e| Failure::io(path, e))?;
    write_csv(f, header, rows).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

pub fn load_disc(cfg: &RunConfig) -> Result<Discretization<f64>, Failure> {
    let path = &cfg.mesh.path;
    let format = match &cfg.mesh.format {
        Some(f) => f.to_ascii_lowercase().parse().map_err(Failure::Config)?,
        None => MeshFormat::from_path(path)
            .ok_or_else(|| Failure::Config(format!("cannot infer mesh format of {}", path.display())))?,
    };
    let mesh = load_mesh(path, format, cfg.mesh.scale).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    Discretization::new(mesh).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

/// Returns whether every frequency of every incidence converged.
pub fn run(args: SolveArgs) -> Result<bool, Failure> {
    let mut cfg = RunConfig::load(&args.config).map_err(|e| Failure::Config(e.to_string()))?;
    if let Some(s) = args.scale {
        cfg.mesh.scale = s;
    }
    if let Some(dir) = args.cache_dir {
        cfg.cache_dir = Some(dir);
    }
    if let Some(out) = args.out {
        cfg.output.dir = out;
    }
    cfg.mesh.path = fs::canonicalize(&cfg.mesh.path)
        .map_err(|e| Failure::Config(format!("mesh {}: {e}", cfg.mesh.path.display())))?;
    let Resolved { config: cfg, plan } = cfg.resolve().map_err(|e| Failure::Config(e.to_string()))?;
    let disc = Arc::new(load_disc(&cfg)?);

    // Validate every incidence before heavy work.
    let incidences = cfg.excitation.incidences();
    let mut waves = Vec::new();
    for inc in &incidences {
        let w = PlaneWave::new(
            vec3(inc.direction),
            vec3(inc.polarization),
            cfg.excitation.amplitude,
            Wavenumber::new(1.0).expect("positive"),
        )
        .map_err(|e| Failure::Config(format!("excitation: {e}")))?;
        waves.push(w);
    }
    let grid = match plan.mode {
        Mode::Direct => None,
        _ => {
            let k_max = Wavenumber::<f64>::from_frequency(*plan.frequencies.last().expect("nonempty")).k0;
            Some(AimGrid::build(&disc.mesh, &plan.grid, k_max).map_err(|e| Failure::Config(format!("grid: {e}")))?)
        }
    };

    let out = &cfg.output.dir;
    fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
    if let Some(c) = &cfg.cache_dir {
        fs::create_dir_all(c).map_err(|e| Failure::io(c, e))?;
    }
    let cfg_hash = cfg.hash();
    fs::write(out.join("config.resolved.toml"), cfg.to_toml()).map_err(|e| Failure::io(out, e))?;

    let mut report = Vec::new();
    let mut timing = Vec::new();
    let mut bistatic = Vec::new();
    let mut currents = Vec::new();
    let mut sweeps = Vec::new();
    let mut all_ok = true;
    for (i, wave) in waves.iter().enumerate() {
        let counters = Arc::new(WorkCounters::default());
        let mut hook = |d: &Discretization<f64>, w: &PlaneWave<f64>, p: &FrequencyResult<f64>| {
            let ok = p.error.is_none() && !p.solution.is_empty();
            let mono = if ok {
                far_field_rcs(d, &p.solution, p.k, &[-w.direction], w.amplitude)[0]
            } else {
                f64::NAN
            };
            let mie = cfg
                .output
                .mie_radius
                .and_then(|a| MieSolution::new(a, p.k.k0).ok())
                .map(|m| m.monostatic());
            let num = |x: Option<f64>| x.map(sig12).unwrap_or_default();
            let c = p.counters;
            report.push(vec![
                i.to_string(),
                sig12(p.frequency),
                sig12(p.k.k0),
                status(p).to_string(),
                p.iterations.to_string(),
                sig12(p.residual),
                num(ok.then_some(mono)),
                num(ok.then(|| to_dbsm(mono))),
                num(mie),
                num(mie.map(to_dbsm)),
                c.singular_integration_calls.to_string(),
                c.near_entry_direct_integrations.to_string(),
                c.precorrection_builds.to_string(),
                c.fft_applications.to_string(),
                p.error.clone().unwrap_or_default(),
            ]);
            if ok {
                for cut in &cfg.output.bistatic {
                    let thetas = cut.thetas();
                    let dirs: Vec<Vec3<f64>> =
                        thetas.iter().map(|t| direction(t.to_radians(), cut.phi_deg.to_radians())).collect();
                    let sig = far_field_rcs(d, &p.solution, p.k, &dirs, w.amplitude);
                    for (t, s) in thetas.iter().zip(sig) {
                        bistatic.push(vec![
                            i.to_string(),
                            sig12(p.frequency),
                            sig12(cut.phi_deg),
                            sig12(*t),
                            sig12(s),
                            sig12(to_dbsm(s)),
                        ]);
                    }
                }
                if cfg.output.currents {
                    for (n, x) in p.solution.iter().enumerate() {
                        currents.push(vec![i.to_string(), sig12(p.frequency), n.to_string(), sig12(x.re), sig12(x.im)]);
                    }
                }
            }
        };
        let result: SweepResult<f64> = run_sweep_with(&plan, disc.clone(), *wave, counters, cfg.cache_dir.as_deref(), &mut hook)
            .map_err(|e| Failure::Config(e.to_string()))?;
        all_ok &= result.all_converged();
        for p in &result.points {
            timing.push(vec![
                i.to_string(),
                sig12(p.frequency),
                String::new(),
                format!("{:.6}", p.times.bind),
                format!("{:.6}", p.times.excitation),
                format!("{:.6}", p.times.preconditioner),
                format!("{:.6}", p.times.solve),
            ]);
        }
        timing.push(vec![
            i.to_string(),
            String::new(),
            format!("{:.6}", result.setup_seconds),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ]);
        sweeps.push(json!({
            "incidence": i,
            "direction": incidences[i].direction,
            "polarization": incidences[i].polarization,
            "setup_seconds": result.setup_seconds,
            "setup_counters": counters_json(&result.setup_counters),
            "cache_hit": result.cache_hit,
            "static_hash": result.static_hash,
            "all_converged": result.all_converged(),
            "rows": result.points.iter().map(|p| json!({
                "frequency_hz": p.frequency,
                "k0": p.k.k0,
                "status": status(p),
                "iterations": p.iterations,
                "residual": p.residual,
                "breakdown": p.breakdown.map(|b| format!("{:?} at iteration {}", b.kind, b.iteration)),
                "error": p.error,
                "counters": counters_json(&p.counters),
                "near_hash": p.near_hash,
                "times": {
                    "bind_s": p.times.bind,
                    "excitation_s": p.times.excitation,
                    "preconditioner_s": p.times.preconditioner,
                    "solve_s": p.times.solve,
                },
            })).collect::<Vec<_>>(),
        }));
    }

    write_table(&out.join("report.csv"), &REPORT_HEADER, &report)?;
    write_table(&out.join("timing.csv"), &TIMING_HEADER, &timing)?;
    if !cfg.output.bistatic.is_empty() {
        write_table(&out.join("bistatic.csv"), &BISTATIC_HEADER, &bistatic)?;
    }
    if cfg.output.currents {
        write_table(&out.join("currents.csv"), &["incidence", "frequency_hz", "basis", "re", "im"], &currents)?;
    }
    let mesh = &disc.mesh;
    let summary = json!({
        "config_hash": cfg_hash,
        "config": serde_json::to_value(&cfg).expect("config serializes"),
        "mesh": {
            "path": cfg.mesh.path,
            "vertices": mesh.vertices.len(),
            "triangles": mesh.num_triangles(),
            "unknowns": disc.unknowns(),
            "closed": mesh.is_closed(),
            "mean_edge_m": mesh.mean_edge_length(),
            "max_edge_m": mesh.max_edge_length(),
            "mean_edge_wavelengths_at_top": mesh.mean_edge_length() * plan.frequencies.last().copied().unwrap_or(0.0)
                / aimx_core::kernels::C0,
        },
        "grid": grid.as_ref().map(|g| json!({
            "dims": g.dims,
            "spacing_m": g.spacing,
            "points": g.len(),
            "order": g.order,
            "origin": [g.origin.x, g.origin.y, g.origin.z],
        })),
        "mode": plan.mode.name(),
        "formulation": plan.formulation.name(),
        "preconditioner": plan.preconditioner.name(),
        "all_converged": all_ok,
        "sweeps": sweeps,
    });
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::write(out.join("summary.json"), text + "\n").map_err(|e| Failure::io(out, e))?;
    eprintln!(
        "aimx: {} frequencies x {} incidences, {} -> {}",
        plan.frequencies.len(),
        waves.len(),
        if all_ok { "all converged" } else { "some frequencies failed" },
        out.display()
    );
    Ok(all_ok)
}
