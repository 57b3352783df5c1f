//! Named pass/fail checks shared by the command-line `verify` runner and
//! the acceptance suite.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::interp::{InterpKernel, InterpStudy};
use super::mie::{to_dbsm, MieSolution};
use super::rcs::far_field_rcs;
use super::selfterm::{self_term_error_study, SelfTermConfig, SelfTermRow};
use crate::aimgrid::{AimGrid, Convolution, GridConfig};
use crate::counters::WorkCounters;
use crate::kernels::{g_dyn, g_full, g_static, grad_dyn_radial, grad_full_radial, grad_static_radial, GradSelfTerm};
use crate::kernels::{KernelKind, Wavenumber};
use crate::mesh::{shapes, Discretization};
use crate::num::rel_l2;
use crate::operators::{efie_weights, Mode, OperatorConfig, OperatorError, OperatorSet};
use crate::quadrature::Ops;
use crate::solver::{run_sweep, Formulation, PlaneWave, PreconditionerKind, SweepError, SweepPlan, SweepResult};
use crate::Vec3;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Mesh(#[from] crate::mesh::MeshError),
    #[error(transparent)]
    Kernel(#[from] crate::kernels::KernelError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// `G = G_s + G_d` and `∇G = ∇G_s + ∇G_d` over `samples` random pairs
/// `(k, r)` with `kr` log-uniform in `[1e-12, 1e2]`, plus the exact limits
/// of the dynamic parts at `r = 0`.
pub fn kernel_identities(samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut eg, mut egrad) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let k = 10f64.powf(rng.gen_range(-3.0..3.0));
        let x = 10f64.powf(rng.gen_range(-12.0..2.0));
        let r = x / k;
        let g = g_full(k, r);
        let split = g_dyn(k, r) + g_static(r);
        eg = eg.max((g - split).norm() / g.norm());
        let dg = grad_full_radial(k, r);
        let split = grad_dyn_radial(k, r) + grad_static_radial(r);
        egrad = egrad.max((dg - split).norm() / dg.norm());
    }
    let mut limits = true;
    for k in [1e-3, 0.7, 1.0, 20.9, 1e3] {
        limits &= g_dyn(k, 0.0) == Complex64::new(0.0, -k / (4.0 * PI));
        limits &= grad_dyn_radial(k, 0.0) == Complex64::new(-(k * k) / (8.0 * PI), 0.0);
    }
    Check::new(
        "kernel decomposition",
        eg <= 1e-11 && egrad <= 1e-11 && limits,
        format!("{samples} samples, max rel G {eg:.2e}, grad G {egrad:.2e}, exact self limits {limits}"),
    )
}

/// Lagrange error against the analytic bound for both dynamic kernels.
pub fn interpolation_bounds(orders: &[usize], ppw: &[f64]) -> Check {
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut notes = Vec::new();
    for kernel in [InterpKernel::Gd, InterpKernel::GradGd] {
        for &n in orders {
            let curves = match InterpStudy::new(kernel, n, ppw.to_vec()).run() {
                Ok(c) => c,
                Err(e) => return Check::new("interpolation bound", false, e.to_string()),
            };
            for c in &curves {
                worst = worst.max(c.worst_bound_ratio());
            }
            let errs: Vec<f64> = curves.iter().map(|c| c.max_error()).collect();
            if errs.windows(2).any(|w| w[1] >= w[0]) {
                ok = false;
                notes.push(format!("{} n={n} not monotone {errs:?}", kernel.name()));
            }
        }
    }
    ok &= worst <= 1.0;
    Check::new(
        "interpolation bound",
        ok,
        format!("worst error/bound {worst:.3}; orders {orders:?}, ppw {ppw:?} {}", notes.join("; ")),
    )
}

/// Self-term study at mean edges of 1e-3 λ and 0.1 λ on a grid sized for
/// the higher frequency.
pub fn self_term(disc: Arc<Discretization<f64>>, grid: GridConfig) -> Result<(Vec<Check>, Vec<SelfTermRow>), VerifyError> {
    let edge = disc.mesh.mean_edge_length();
    let ks = [Wavenumber::new(2.0 * PI * 1e-3 / edge)?, Wavenumber::new(2.0 * PI * 0.1 / edge)?];
    let mut cfg = SelfTermConfig::new(false);
    cfg.grid = grid;
    let plain = self_term_error_study(disc.clone(), &ks, cfg)?;
    cfg.linear_term = true;
    let lin = self_term_error_study(disc, &ks, cfg)?;
    let checks = vec![
        Check::new(
            "self term at 0.1 lambda",
            plain[1].efie < 1e-2,
            format!(
                "EFIE {:.3e} (L_A {:.3e}, L_phi {:.3e}), target < 1e-2",
                plain[1].efie, plain[1].la, plain[1].lphi
            ),
        ),
        Check::new(
            "self term at 1e-3 lambda with linear term",
            lin[0].efie < 1e-5,
            format!("EFIE {:.3e} (without linear term {:.3e}), target < 1e-5", lin[0].efie, plain[0].efie),
        ),
    ];
    Ok((checks, plain.into_iter().chain(lin).collect()))
}

/// Relative matvec error of AIM and AIMx against dense direct assembly of
/// the EFIE operator on a strip of 398 unknowns with edges of 0.05 λ,
/// grid order 2 at 10 points per wavelength.
pub fn mode_equivalence(seed: u64) -> Result<Check, VerifyError> {
    let side = 0.01;
    let d = Arc::new(Discretization::new(shapes::plate::<f64>(80.0 * side, 2.0 * side, 80, 2))?);
    let lambda = d.mesh.max_edge_length() / 0.05;
    let k = Wavenumber::new(2.0 * PI / lambda)?;
    let w = efie_weights(k);
    let bind = |mode| -> Result<_, OperatorError> {
        OperatorSet::assemble(d.clone(), OperatorConfig::new(mode, Ops::EFIE), k.k0, Arc::default(), None)?.bind(k, w)
    };
    let (direct, aim, aimx) = (bind(Mode::Direct)?, bind(Mode::Aim)?, bind(Mode::Aimx)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ea, mut ex) = (0.0f64, 0.0f64);
    for _ in 0..4 {
        let x = random_vec(&mut rng, d.unknowns());
        let yd = direct.matvec(&x)?;
        ea = ea.max(rel_l2(&aim.matvec(&x)?, &yd));
        ex = ex.max(rel_l2(&aimx.matvec(&x)?, &yd));
    }
    Ok(Check::new(
        "mode equivalence",
        ea <= 1e-2 && ex <= 1e-2 && ex <= 2.0 * ea,
        format!("{} unknowns, AIM {ea:.3e}, AIMx {ex:.3e} (limit 1e-2, AIMx <= 2x AIM)", d.unknowns()),
    ))
}

/// FFT convolution against dense Toeplitz products on an 8x8x8 grid.
pub fn toeplitz(seed: u64) -> Check {
    let g = AimGrid {
        origin: Vec3::zero(),
        spacing: 0.1,
        dims: [8, 8, 8],
        order: 2,
    };
    let k = Wavenumber::new(6.0).expect("positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut ok = true;
    for kind in [KernelKind::G, KernelKind::GS, KernelKind::GD, KernelKind::GLin, KernelKind::GradG] {
        let c = Convolution::build(&g, kind, k, GradSelfTerm::Scalar);
        for comp in 0..c.components() {
            let x = random_vec(&mut rng, g.len());
            let fast = if c.components() == 1 {
                c.apply(&x)
            } else {
                // With only j_b nonzero, component i of ∇G × j is ∂_a G j_b for
                // (a, b) = (i + 1, i + 2) mod 3.
                let z = vec![Complex64::new(0.0, 0.0); g.len()];
                let mut j = [&z[..], &z[..], &z[..]];
                j[(comp + 1) % 3] = &x;
                c.apply_curl(j).map(|out| out[(comp + 2) % 3].clone())
            };
            let Ok(fast) = fast else {
                ok = false;
                continue;
            };
            let dense = c.apply_dense(comp, &x);
            let err = fast.iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            worst = worst.max(err);
        }
    }
    Check::new(
        "fft vs toeplitz",
        ok && worst <= 1e-12,
        format!("8x8x8 grid, max abs entry error {worst:.2e} (limit 1e-12)"),
    )
}

/// Monostatic RCS along `-wave.direction` for every solved frequency.
pub fn monostatic(disc: &Discretization<f64>, wave: &PlaneWave<f64>, r: &SweepResult<f64>) -> Vec<f64> {
    r.points
        .iter()
        .map(|p| {
            if p.solution.is_empty() {
                f64::NAN
            } else {
                far_field_rcs(disc, &p.solution, p.k, &[-wave.direction], wave.amplitude)[0]
            }
        })
        .collect()
}

/// dB difference from the Mie series for a sphere of radius `a`.
pub fn mie_db_errors(a: f64, r: &SweepResult<f64>, rcs: &[f64]) -> Vec<f64> {
    r.points
        .iter()
        .zip(rcs)
        .map(|(p, &s)| match MieSolution::new(a, p.k.k0) {
            Ok(m) => to_dbsm(s) - to_dbsm(m.monostatic()),
            Err(_) => f64::NAN,
        })
        .collect()
}

/// Sphere runs behind the RCS, preconditioner and resonance checks.
pub struct SphereRuns {
    pub frequencies: Vec<f64>,
    pub aimx_db: Vec<f64>,
    pub direct_db: Vec<f64>,
    pub iters_static: Vec<usize>,
    pub iters_fullwave: Vec<usize>,
    pub converged: bool,
}

/// Solves the EFIE on a PEC sphere of radius `a` in AIMx mode with both
/// diagonal preconditioners and in direct mode.
pub fn sphere_runs(
    disc: Arc<Discretization<f64>>,
    a: f64,
    frequencies: Vec<f64>,
    grid: GridConfig,
) -> Result<SphereRuns, VerifyError> {
    let wave = PlaneWave::y_polarized_from_above(Wavenumber::new(1.0).expect("positive"));
    let mut plan = SweepPlan::new(frequencies.clone(), Formulation::Efie, Mode::Aimx);
    plan.grid = grid;
    let aimx = run_sweep(&plan, disc.clone(), wave, Arc::default(), None)?;
    plan.preconditioner = PreconditionerKind::DiagFullwave;
    let full = run_sweep(&plan, disc.clone(), wave, Arc::default(), None)?;
    let mut dplan = SweepPlan::new(frequencies.clone(), Formulation::Efie, Mode::Direct);
    dplan.preconditioner = PreconditionerKind::DiagStatic;
    let direct = run_sweep(&dplan, disc.clone(), wave, Arc::default(), None)?;
    let aimx_db = mie_db_errors(a, &aimx, &monostatic(&disc, &wave, &aimx));
    let direct_db = mie_db_errors(a, &direct, &monostatic(&disc, &wave, &direct));
    Ok(SphereRuns {
        frequencies,
        aimx_db,
        direct_db,
        iters_static: aimx.points.iter().map(|p| p.iterations).collect(),
        iters_fullwave: full.points.iter().map(|p| p.iterations).collect(),
        converged: aimx.all_converged() && full.all_converged() && direct.all_converged(),
    })
}

impl SphereRuns {
    /// AIMx within `limit_db` of Mie and within twice the direct-mode error.
    pub fn rcs_check(&self, limit_db: f64) -> Check {
        let mut fails = Vec::new();
        for ((f, x), d) in self.frequencies.iter().zip(&self.aimx_db).zip(&self.direct_db) {
            if !(x.abs() <= limit_db) || !(x.abs() <= 2.0 * d.abs()) {
                fails.push(format!("{:.0} MHz aimx {x:+.3} dB direct {d:+.3} dB", f / 1e6));
            }
        }
        let worst = self.aimx_db.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let worst_direct = self.direct_db.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Check::new(
            "sphere rcs vs mie",
            fails.is_empty() && self.converged,
            format!(
                "max |aimx - mie| {worst:.3} dB, max |direct - mie| {worst_direct:.3} dB over {} frequencies{}{}",
                self.frequencies.len(),
                if self.converged { "" } else { "; not all converged" },
                if fails.is_empty() { String::new() } else { format!("; misses: {}", fails.join(", ")) }
            ),
        )
    }

    /// Equal iteration counts except where the count spikes to twice the median.
    pub fn preconditioner_check(&self) -> Check {
        let mut sorted = self.iters_static.clone();
        sorted.sort_unstable();
        let median = sorted[sorted.len() / 2] as f64;
        let mut fails = Vec::new();
        let mut exempt = 0;
        for ((f, s), w) in self.frequencies.iter().zip(&self.iters_static).zip(&self.iters_fullwave) {
            if s != w {
                if (*s.max(w) as f64) >= 2.0 * median {
                    exempt += 1;
                } else {
                    fails.push(format!("{:.0} MHz {s} vs {w}", f / 1e6));
                }
            }
        }
        Check::new(
            "preconditioner parity",
            fails.is_empty(),
            format!(
                "static {:?} vs full-wave {:?}; {exempt} resonance exemptions{}",
                self.iters_static,
                self.iters_fullwave,
                if fails.is_empty() { String::new() } else { format!("; differ at {}", fails.join(", ")) }
            ),
        )
    }
}

/// AIMx and AIM sweeps over `frequencies`: setup-only singular and
/// precorrection work in AIMx, repeated work in AIM, and one static hash.
pub fn sweep_reuse(disc: Arc<Discretization<f64>>, frequencies: Vec<f64>) -> Result<Check, VerifyError> {
    let wave = PlaneWave::y_polarized_from_above(Wavenumber::new(1.0).expect("positive"));
    let plan = SweepPlan::new(frequencies.clone(), Formulation::Efie, Mode::Aimx);
    let c = Arc::new(WorkCounters::default());
    let x = run_sweep(&plan, disc.clone(), wave, c, None)?;
    let aim_plan = SweepPlan::new(frequencies, Formulation::Efie, Mode::Aim);
    let a = run_sweep(&aim_plan, disc, wave, Arc::default(), None)?;
    let setup_ok = x.setup_counters.singular_integration_calls > 0 && x.setup_counters.precorrection_builds > 0;
    let aimx_zero = x.points.iter().all(|p| {
        p.counters.singular_integration_calls == 0
            && p.counters.precorrection_builds == 0
            && p.counters.near_entry_direct_integrations == 0
    });
    let aim_work = a
        .points
        .iter()
        .all(|p| p.counters.singular_integration_calls > 0 && p.counters.precorrection_builds > 0);
    let hash_ok = x.static_hash.is_some() && x.points.iter().all(|p| p.near_hash == x.static_hash);
    let per: Vec<(u64, u64)> =
        x.points.iter().map(|p| (p.counters.singular_integration_calls, p.counters.precorrection_builds)).collect();
    let aim_per: Vec<(u64, u64)> =
        a.points.iter().map(|p| (p.counters.singular_integration_calls, p.counters.precorrection_builds)).collect();
    Ok(Check::new(
        "sweep reuse",
        setup_ok && aimx_zero && aim_work && hash_ok && x.points.len() >= 3,
        format!(
            "aimx setup (singular, precorrection) = ({}, {}), per frequency {per:?}; aim per frequency {aim_per:?}; static hash constant {hash_ok}",
            x.setup_counters.singular_integration_calls, x.setup_counters.precorrection_builds
        ),
    ))
}

/// EFIE against CFIE(0.5) at one frequency, with the CFIE RCS against Mie.
pub fn cfie_resonance(disc: Arc<Discretization<f64>>, a: f64, frequency: f64, grid: GridConfig) -> Result<Check, VerifyError> {
    let wave = PlaneWave::y_polarized_from_above(Wavenumber::new(1.0).expect("positive"));
    let run = |form| {
        let mut plan = SweepPlan::new(vec![frequency], form, Mode::Aimx);
        plan.grid = grid;
        run_sweep(&plan, disc.clone(), wave, Arc::default(), None)
    };
    let e = run(Formulation::Efie)?;
    let c = run(Formulation::Cfie { alpha: 0.5 })?;
    let db = mie_db_errors(a, &c, &monostatic(&disc, &wave, &c))[0];
    let (ie, ic) = (e.points[0].iterations, c.points[0].iterations);
    Ok(Check::new(
        "cfie at resonance",
        c.points[0].ok() && ic < ie && db.abs() <= 1.0,
        format!("ka = {:.3}: EFIE {ie} iterations, CFIE {ic}; CFIE vs Mie {db:+.3} dB (limit 1 dB)", c.points[0].k.k0 * a),
    ))
}
