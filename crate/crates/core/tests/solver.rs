use std::sync::Arc;

use aimx_core::counters::WorkCounters;
use aimx_core::geom::rotate;
use aimx_core::kernels::Wavenumber;
use aimx_core::linalg::DenseMatrix;
use aimx_core::mesh::shapes;
use aimx_core::num::{cnorm, rel_l2};
use aimx_core::operators::{efie_weights, Mode, OperatorConfig, OperatorSet};
use aimx_core::quadrature::{Ops, TriangleRule};
use aimx_core::solver::*;
use aimx_core::{Discretization, Mesh, Vec3};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Z = Complex64;

fn z(re: f64, im: f64) -> Z {
    Z::new(re, im)
}

struct Scaled(f64, usize);

impl LinearOperator<f64> for Scaled {
    fn dim(&self) -> usize {
        self.1
    }

    fn apply(&self, x: &[Z]) -> Vec<Z> {
        x.iter().map(|v| v * self.0).collect()
    }
}

struct Poisoned(usize);

impl LinearOperator<f64> for Poisoned {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply(&self, x: &[Z]) -> Vec<Z> {
        x.iter().map(|_| z(f64::NAN, 0.0)).collect()
    }
}

fn diag_matrix(d: &[Z]) -> DenseMatrix<f64> {
    let mut m = DenseMatrix::zeros(d.len(), d.len());
    for (i, v) in d.iter().enumerate() {
        *m.get_mut(i, i) = *v;
    }
    m
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Z> {
    (0..n).map(|_| z(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn sphere(level: usize) -> Arc<Discretization<f64>> {
    Arc::new(Discretization::new(shapes::icosphere(level, 0.5)).unwrap())
}

fn wk(k: f64) -> Wavenumber<f64> {
    Wavenumber::new(k).unwrap()
}

#[test]
fn identity_converges_in_one_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let b = random_vec(&mut rng, 20);
    let out = gmres(&Scaled(1.0, 20), &b, &Identity, &GmresConfig::default()).unwrap();
    assert!(out.converged);
    assert_eq!(out.iterations, 1);
    assert!(rel_l2(&out.x, &b) < 1e-14);
    assert!(out.residual < 1e-14);
}

#[test]
fn zero_rhs_gives_zero() {
    let b = vec![z(0.0, 0.0); 5];
    let out = gmres(&Scaled(2.0, 5), &b, &Identity, &GmresConfig::default()).unwrap();
    assert!(out.converged);
    assert_eq!(out.iterations, 0);
    assert!(out.x.iter().all(|v| *v == z(0.0, 0.0)));
}

#[test]
fn rejects_bad_input() {
    let b = vec![z(1.0, 0.0); 4];
    assert!(matches!(
        gmres(&Scaled(1.0, 5), &b, &Identity, &GmresConfig::default()),
        Err(GmresError::Dimension { got: 4, expected: 5 })
    ));
    let cfg = GmresConfig {
        restart: 0,
        ..GmresConfig::default()
    };
    assert!(matches!(gmres(&Scaled(1.0, 4), &b, &Identity, &cfg), Err(GmresError::Config(_))));
}

#[test]
fn invariant_subspace_is_a_happy_breakdown() {
    // Two distinct eigenvalues: the Krylov space closes after two steps.
    let a = diag_matrix(&[z(1.0, 0.0), z(1.0, 0.0), z(3.0, 1.0), z(3.0, 1.0)]);
    let b = vec![z(1.0, 0.0), z(2.0, 0.0), z(0.5, -1.0), z(0.0, 1.0)];
    let cfg = GmresConfig {
        tol: 1e-300,
        ..GmresConfig::default()
    };
    let out = gmres(&a, &b, &Identity, &cfg).unwrap();
    let bd = out.breakdown.unwrap();
    assert_eq!(bd.kind, BreakdownKind::Happy);
    assert_eq!(bd.iteration, 2);
    assert!(out.residual < 1e-14);
}

#[test]
fn non_finite_operator_is_a_serious_breakdown() {
    let b = vec![z(1.0, 0.0); 3];
    let out = gmres(&Poisoned(3), &b, &Identity, &GmresConfig::default()).unwrap();
    assert!(!out.converged);
    let bd = out.breakdown.unwrap();
    assert_eq!(bd.kind, BreakdownKind::Serious);
    assert_eq!(bd.iteration, 1);
    assert!(out.x.iter().all(|v| v.re.is_finite()));
}

#[test]
fn iteration_budget_is_reported() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let d: Vec<Z> = (0..60).map(|i| z(1.0 + i as f64, 0.3 * i as f64)).collect();
    let b = random_vec(&mut rng, 60);
    let cfg = GmresConfig {
        tol: 1e-12,
        restart: 5,
        max_iter: 12,
    };
    let out = gmres(&diag_matrix(&d), &b, &Identity, &cfg).unwrap();
    assert!(!out.converged);
    assert_eq!(out.iterations, 12);
    assert_eq!(out.restarts, vec![5, 10]);
    assert_eq!(out.history.len(), 13);
    assert!((out.residual - cnorm(&residual(&diag_matrix(&d), &out.x, &b)) / cnorm(&b)).abs() < 1e-14);
}

fn residual(a: &DenseMatrix<f64>, x: &[Z], b: &[Z]) -> Vec<Z> {
    a.matvec(x).unwrap().iter().zip(b).map(|(p, q)| q - p).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn residual_decreases_within_each_cycle(seed in any::<u64>(), restart in 2usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 30;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *a.get_mut(i, j) = z(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * 0.2;
            }
            *a.get_mut(i, i) += z(2.0 + i as f64 * 0.1, 0.0);
        }
        let b = random_vec(&mut rng, n);
        let cfg = GmresConfig { tol: 1e-10, restart, max_iter: 200 };
        let out = gmres(&a, &b, &Identity, &cfg).unwrap();
        prop_assert!(out.converged);
        let mut start = 0;
        for &end in out.restarts.iter().chain([&out.iterations]) {
            for w in out.history[start..=end].windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
            start = end;
        }
        let true_res = cnorm(&residual(&a, &out.x, &b)) / cnorm(&b);
        prop_assert!((true_res - out.residual).abs() < 1e-14);
        prop_assert!(true_res <= 1e-10);
    }
}

#[test]
fn small_efie_matches_factorization() {
    let d = Arc::new(Discretization::new(shapes::plate(1.0, 0.8, 5, 4)).unwrap());
    assert_eq!(d.unknowns(), 51);
    let k = wk(2.0);
    let set = OperatorSet::assemble(
        d.clone(),
        OperatorConfig::new(Mode::Direct, Ops::EFIE),
        k.k0,
        Arc::new(WorkCounters::default()),
        None,
    )
    .unwrap();
    let op = set.bind(k, efie_weights(k)).unwrap();
    let wave = PlaneWave::y_polarized_from_above(k);
    let b = excitation_vector(&d, &wave, Formulation::Efie);
    let exact = op.dense().unwrap().clone().lu().unwrap().solve(&b);
    let tol = 1e-4;
    let cfg = GmresConfig {
        tol,
        ..GmresConfig::default()
    };
    for kind in [PreconditionerKind::None, PreconditionerKind::DiagStatic] {
        let m = build_preconditioner(&set, kind, k, efie_weights(k)).unwrap();
        let out = gmres(&op, &b, m.as_ref(), &cfg).unwrap();
        assert!(out.converged);
        let e = rel_l2(&out.x, &exact);
        assert!(e <= 10.0 * tol, "{kind:?} {e:e}");
    }
}

#[test]
fn diagonal_preconditioner_inverts_its_diagonal() {
    let d = vec![z(2.0, 1.0), z(-0.5, 0.0), z(0.0, 3.0)];
    let p = Diagonal::new(&d).unwrap();
    for v in p.solve(&d) {
        assert!((v - z(1.0, 0.0)).norm() < 1e-15);
    }
    assert!(matches!(
        Diagonal::new(&[z(1.0, 0.0), z(0.0, 0.0)]),
        Err(PreconditionerError::ZeroDiagonal(1))
    ));
}

#[test]
fn preconditioners_agree_on_the_solution() {
    let d = sphere(1);
    let k = wk(4.0);
    let set = OperatorSet::assemble(
        d.clone(),
        OperatorConfig::new(Mode::Aimx, Ops::EFIE),
        k.k0,
        Arc::new(WorkCounters::default()),
        None,
    )
    .unwrap();
    let w = efie_weights(k);
    let op = set.bind(k, w).unwrap();
    let b = excitation_vector(&d, &PlaneWave::y_polarized_from_above(k), Formulation::Efie);
    let tol = 1e-6;
    let cfg = GmresConfig {
        tol,
        ..GmresConfig::default()
    };
    let solve = |kind| {
        let m = build_preconditioner(&set, kind, k, w).unwrap();
        gmres(&op, &b, m.as_ref(), &cfg).unwrap()
    };
    let none = solve(PreconditionerKind::None);
    let stat = solve(PreconditionerKind::DiagStatic);
    let full = solve(PreconditionerKind::DiagFullwave);
    assert!(rel_l2(&stat.x, &full.x) <= 10.0 * tol);
    assert!(rel_l2(&stat.x, &none.x) <= 10.0 * tol);
    let plain = gmres(&op, &b, &Identity, &cfg).unwrap();
    assert_eq!(plain.x, none.x);
    assert_eq!(plain.history, none.history);
}

#[test]
fn plane_wave_validation() {
    let k = wk(1.0);
    let x = Vec3::new(1.0, 0.0, 0.0);
    let y = Vec3::new(0.0, 1.0, 0.0);
    assert!(PlaneWave::new(Vec3::new(0.0, 0.0, 2.0), x, 1.0, k).is_ok());
    assert_eq!(PlaneWave::new(Vec3::zero(), x, 1.0, k), Err(WaveError::BadDirection));
    assert_eq!(PlaneWave::new(x, x, 1.0, k), Err(WaveError::BadPolarization));
    assert_eq!(PlaneWave::new(Vec3::new(0.0, 0.0, 1.0), y * 2.0, 1.0, k), Err(WaveError::BadPolarization));
    let w = PlaneWave::y_polarized_from_above(k);
    let r = Vec3::new(0.3, -0.2, 0.7);
    let (e, h) = (w.e_field(r), w.h_field(r));
    // |E| = η0 |H| and E ⟂ H.
    let eta = aimx_core::kernels::eta0();
    assert!((e.norm_sq().sqrt() - eta * h.norm_sq().sqrt()).abs() < 1e-12);
    assert!((e.x * h.x.conj() + e.y * h.y.conj() + e.z * h.z.conj()).norm() < 1e-15);
}

#[test]
fn zero_amplitude_gives_zero_rhs() {
    let d = sphere(1);
    let mut w = PlaneWave::y_polarized_from_above(wk(3.0));
    w.amplitude = 0.0;
    for f in [Formulation::Efie, Formulation::Cfie { alpha: 0.5 }] {
        assert!(excitation_vector(&d, &w, f).iter().all(|v| *v == z(0.0, 0.0)));
    }
}

#[test]
fn tested_fields_match_refined_quadrature() {
    let d = sphere(2);
    let w = PlaneWave::new(Vec3::new(0.3, -0.5, -1.0), Vec3::new(1.0, 0.6, 0.0).normalized(), 1.0, wk(9.0)).unwrap();
    let fine = tested_fields(&d, &w, &TriangleRule::sixteen_point().subdivided(4));
    let used = tested_fields(&d, &w, &excitation_rule(1));
    assert!(rel_l2(&used.e, &fine.e) < 1e-9);
    assert!(rel_l2(&used.nxh, &fine.nxh) < 1e-9);
}

#[test]
fn uniform_field_is_tested_exactly() {
    // k = 0: ⟨f, E⟩ = E·∫f = E·Σ± l/2 (centroid - free vertex).
    let d = sphere(1);
    let e0 = Vec3::new(0.2, 1.0, -0.4);
    let w = PlaneWave {
        direction: Vec3::new(0.0, 0.0, 1.0),
        polarization: e0,
        amplitude: 1.0,
        k: Wavenumber { k0: 0.0 },
    };
    let t = tested_fields(&d, &w, &excitation_rule(0));
    for (m, b) in d.basis.iter().enumerate() {
        let m_plus = d.mesh.centroid(b.tri_plus) - d.mesh.vertices[b.free_plus];
        let m_minus = d.mesh.vertices[b.free_minus] - d.mesh.centroid(b.tri_minus);
        let expect = (m_plus + m_minus).dot(e0) * b.length * 0.5;
        assert!((t.e[m] - z(expect, 0.0)).norm() < 1e-13, "{m}");
    }
}

#[test]
fn rotating_mesh_and_wave_keeps_rhs_norm() {
    let d = sphere(1);
    let (axis, angle) = (Vec3::new(1.0, 2.0, -0.5).normalized(), 0.7);
    let verts = d.mesh.vertices.iter().map(|&v| rotate(v, axis, angle)).collect();
    let rd = Discretization::new(Mesh::new(verts, d.mesh.triangles.clone()).unwrap()).unwrap();
    let w = PlaneWave::new(Vec3::new(0.0, 0.4, -1.0), Vec3::new(1.0, 0.0, 0.0), 1.0, wk(5.0)).unwrap();
    let rw = PlaneWave::new(rotate(w.direction, axis, angle), rotate(w.polarization, axis, angle), 1.0, w.k).unwrap();
    for f in [Formulation::Efie, Formulation::Cfie { alpha: 0.3 }] {
        let (a, b) = (excitation_vector(&d, &w, f), excitation_vector(&rd, &rw, f));
        assert!((cnorm(&a) - cnorm(&b)).abs() < 1e-12 * cnorm(&a));
    }
}

fn plan(freqs: &[f64], form: Formulation, mode: Mode) -> SweepPlan {
    SweepPlan::new(freqs.to_vec(), form, mode)
}

#[test]
fn aimx_sweep_reuses_static_parts() {
    let d = sphere(2);
    let p = plan(&[100e6, 150e6, 200e6], Formulation::Cfie { alpha: 0.5 }, Mode::Aimx);
    let counters = Arc::new(WorkCounters::default());
    let wave = PlaneWave::y_polarized_from_above(wk(1.0));
    let r = run_sweep(&p, d, wave, counters, None).unwrap();
    assert!(r.setup_counters.singular_integration_calls > 0);
    assert!(r.setup_counters.precorrection_builds > 0);
    assert!(r.all_converged());
    for pt in &r.points {
        assert_eq!(pt.counters.singular_integration_calls, 0);
        assert_eq!(pt.counters.near_entry_direct_integrations, 0);
        assert_eq!(pt.counters.precorrection_builds, 0);
        assert!(pt.counters.fft_applications > 0);
        assert_eq!(pt.near_hash, r.static_hash);
        assert!(pt.residual <= 1e-4);
    }
}

#[test]
fn aim_sweep_refills_near_region_every_frequency() {
    let d = sphere(2);
    let p = plan(&[100e6, 150e6, 200e6], Formulation::Efie, Mode::Aim);
    let counters = Arc::new(WorkCounters::default());
    let r = run_sweep(&p, d, PlaneWave::y_polarized_from_above(wk(1.0)), counters, None).unwrap();
    assert!(r.static_hash.is_none());
    for pt in &r.points {
        assert!(pt.counters.singular_integration_calls > 0);
        assert_eq!(pt.counters.precorrection_builds, 1);
        assert!(pt.ok());
    }
}

#[test]
fn frequency_result_is_independent_of_the_sweep() {
    let d = sphere(1);
    let wave = PlaneWave::y_polarized_from_above(wk(1.0));
    let freqs = [120e6, 180e6, 240e6];
    let all = run_sweep(&plan(&freqs, Formulation::Efie, Mode::Aimx), d.clone(), wave, Arc::default(), None).unwrap();
    // Same grid: keep the top frequency in the plan.
    let alone = run_sweep(&plan(&[180e6, 240e6], Formulation::Efie, Mode::Aimx), d, wave, Arc::default(), None).unwrap();
    assert_eq!(all.points[1].solution, alone.points[0].solution);
    assert_eq!(all.points[1].iterations, alone.points[0].iterations);
}

#[test]
fn thread_count_does_not_change_results() {
    let d = sphere(2);
    let wave = PlaneWave::y_polarized_from_above(wk(1.0));
    let p = plan(&[150e6, 300e6], Formulation::Cfie { alpha: 0.5 }, Mode::Aimx);
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| run_sweep(&p, d.clone(), wave, Arc::default(), None).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.static_hash, b.static_hash);
    for (x, y) in a.points.iter().zip(&b.points) {
        assert!(rel_l2(&x.solution, &y.solution) <= 1e-10);
    }
}

#[test]
fn non_convergence_is_flagged_and_the_sweep_continues() {
    let d = sphere(1);
    let mut p = plan(&[100e6, 200e6, 300e6], Formulation::Efie, Mode::Direct);
    p.gmres.max_iter = 2;
    let mut seen = Vec::new();
    let r = run_sweep_with(
        &p,
        d,
        PlaneWave::y_polarized_from_above(wk(1.0)),
        Arc::default(),
        None,
        &mut |_, w, pt| seen.push((pt.frequency, w.k.k0)),
    )
    .unwrap();
    assert_eq!(r.points.len(), 3);
    assert!(r.points.iter().all(|pt| !pt.converged && pt.error.is_none() && pt.iterations == 2));
    assert!(!r.all_converged());
    assert_eq!(seen.len(), 3);
    assert!((seen[2].1 - Wavenumber::<f64>::from_frequency(300e6).k0).abs() < 1e-12);
}

#[test]
fn invalid_plans_are_rejected() {
    let d = sphere(0);
    let w = PlaneWave::y_polarized_from_above(wk(1.0));
    let bad = [
        plan(&[], Formulation::Efie, Mode::Aimx),
        plan(&[2e8, 1e8], Formulation::Efie, Mode::Aimx),
        plan(&[1e8, 1e8], Formulation::Efie, Mode::Aimx),
        plan(&[-1e8], Formulation::Efie, Mode::Aimx),
        plan(&[1e8], Formulation::Cfie { alpha: 1.5 }, Mode::Aimx),
        SweepPlan {
            linear_term: true,
            ..plan(&[1e8], Formulation::Efie, Mode::Aim)
        },
    ];
    for p in bad {
        assert!(matches!(run_sweep(&p, d.clone(), w, Arc::default(), None), Err(SweepError::Plan(_))), "{p:?}");
    }
}

#[test]
fn cfie_helps_at_an_interior_resonance() {
    // First interior resonance of a sphere of radius 0.5: ka = 2.744.
    let d = sphere(2);
    let f = 2.744 / 0.5 * aimx_core::kernels::C0 / (2.0 * std::f64::consts::PI);
    let w = PlaneWave::y_polarized_from_above(wk(1.0));
    let run = |form| {
        let mut p = plan(&[f], form, Mode::Direct);
        p.preconditioner = PreconditionerKind::None;
        run_sweep(&p, d.clone(), w, Arc::default(), None).unwrap().points.remove(0)
    };
    let (e, c) = (run(Formulation::Efie), run(Formulation::Cfie { alpha: 0.5 }));
    assert!(e.ok() && c.ok());
    assert!(c.iterations < e.iterations, "cfie {} efie {}", c.iterations, e.iterations);
}
