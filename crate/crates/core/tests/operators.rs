use std::sync::Arc;

use aimx_core::counters::WorkCounters;
use aimx_core::kernels::{GradSelfTerm, Wavenumber};
use aimx_core::mesh::shapes;
use aimx_core::num::rel_l2;
use aimx_core::operators::*;
use aimx_core::quadrature::{Family, OpWeights, OperatorTag, Ops, PairIntegrator, QuadError, QuadratureConfig};
use aimx_core::Discretization;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TAGS: [OperatorTag; 3] = [OperatorTag::LA, OperatorTag::LPhi, OperatorTag::K];

fn disc(level: usize) -> Arc<Discretization<f64>> {
    Arc::new(Discretization::new(shapes::icosphere(level, 0.5)).unwrap())
}

/// Wavenumber at which the mean edge is `frac` wavelengths.
fn k_at(d: &Discretization<f64>, frac: f64) -> f64 {
    2.0 * std::f64::consts::PI * frac / d.mesh.mean_edge_length()
}

fn wk(k: f64) -> Wavenumber<f64> {
    Wavenumber::new(k).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn build(d: &Arc<Discretization<f64>>, cfg: OperatorConfig, k_max: f64) -> OperatorSet<f64> {
    OperatorSet::assemble(d.clone(), cfg, k_max, Arc::new(WorkCounters::default()), None).unwrap()
}

fn set(d: &Arc<Discretization<f64>>, mode: Mode, ops: Ops, k_max: f64) -> OperatorSet<f64> {
    build(d, OperatorConfig::new(mode, ops), k_max)
}

fn max_err(a: &BoundOperator<f64>, b: &BoundOperator<f64>, xs: &[Vec<Complex64>]) -> f64 {
    xs.iter()
        .map(|x| rel_l2(&a.matvec(x).unwrap(), &b.matvec(x).unwrap()))
        .fold(0.0, f64::max)
}

fn mean_err(a: &BoundOperator<f64>, b: &BoundOperator<f64>, xs: &[Vec<Complex64>]) -> f64 {
    xs.iter().map(|x| rel_l2(&a.matvec(x).unwrap(), &b.matvec(x).unwrap())).sum::<f64>() / xs.len() as f64
}

#[test]
fn modes_agree_with_direct() {
    // Grid sized for edges of 0.1 wavelength, evaluated at 0.05.
    let d = disc(2);
    let (k_max, k) = (k_at(&d, 0.1), wk(k_at(&d, 0.05)));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let xs: Vec<_> = (0..4).map(|_| random_vec(&mut rng, d.unknowns())).collect();
    for tag in TAGS {
        let w = OpWeights::only(tag);
        let direct = set(&d, Mode::Direct, Ops::only(tag), k_max).bind(k, w).unwrap();
        let aim = set(&d, Mode::Aim, Ops::only(tag), k_max).bind(k, w).unwrap();
        let aimx = set(&d, Mode::Aimx, Ops::only(tag), k_max).bind(k, w).unwrap();
        let (ea, ex) = (max_err(&aim, &direct, &xs), max_err(&aimx, &direct, &xs));
        assert!(ea <= 1e-2, "{tag:?} aim {ea:e}");
        assert!(ex <= 1e-2, "{tag:?} aimx {ex:e}");
        let cross = max_err(&aimx, &aim, &xs);
        assert!(cross <= 1e-2, "{tag:?} aim vs aimx {cross:e}");
    }
}

#[test]
fn linear_term_reduces_error() {
    let d = disc(2);
    let k = wk(k_at(&d, 0.1));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let xs: Vec<_> = (0..4).map(|_| random_vec(&mut rng, d.unknowns())).collect();
    for tag in [OperatorTag::LA, OperatorTag::LPhi] {
        let w = OpWeights::only(tag);
        let direct = set(&d, Mode::Direct, Ops::only(tag), k.k0).bind(k, w).unwrap();
        let plain = set(&d, Mode::Aimx, Ops::only(tag), k.k0).bind(k, w).unwrap();
        let mut cfg = OperatorConfig::new(Mode::Aimx, Ops::only(tag));
        cfg.linear_term = true;
        let lin = build(&d, cfg, k.k0).bind(k, w).unwrap();
        assert!(max_err(&lin, &direct, &xs) <= max_err(&plain, &direct, &xs), "{tag:?}");
        assert!(mean_err(&lin, &direct, &xs) < mean_err(&plain, &direct, &xs), "{tag:?}");
    }
}

#[test]
fn linear_term_entries_only_on_overlapping_pairs() {
    let d = disc(1);
    let mut cfg = OperatorConfig::new(Mode::Aimx, Ops::EFIE);
    cfg.linear_term = true;
    let s = build(&d, cfg, k_at(&d, 0.1));
    let lin = s.statics().unwrap().lin_near.as_ref().unwrap();
    let la = lin.la.as_ref().unwrap();
    let overlap = overlap_pattern(&d);
    assert_eq!(*la.pattern, overlap);
    for (i, j) in overlap.iter() {
        let shared = d.tri_map.iter().any(|l| l.iter().any(|e| e.0 == i) && l.iter().any(|e| e.0 == j));
        assert!(shared, "{i} {j}");
    }
}

#[test]
fn small_mesh_aimx_matches_direct() {
    let d = Arc::new(Discretization::new(shapes::octahedron(1.0)).unwrap());
    assert_eq!(d.unknowns(), 12);
    let k = wk(k_at(&d, 0.02));
    let w = efie_weights(k);
    let direct = set(&d, Mode::Direct, Ops::EFIE, k.k0).bind(k, w).unwrap();
    let aimx = set(&d, Mode::Aimx, Ops::EFIE, k.k0).bind(k, w).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let xs: Vec<_> = (0..10).map(|_| random_vec(&mut rng, 12)).collect();
    let e = max_err(&aimx, &direct, &xs);
    assert!(e <= 1e-3, "{e:e}");
}

#[test]
fn aimx_rebinding_skips_singular_work() {
    let d = disc(1);
    let k_max = k_at(&d, 0.1);
    let counters = Arc::new(WorkCounters::default());
    let s = OperatorSet::assemble(d.clone(), OperatorConfig::new(Mode::Aimx, Ops::ALL), k_max, counters.clone(), None)
        .unwrap();
    let setup = counters.snapshot();
    assert!(setup.singular_integration_calls > 0);
    assert!(setup.precorrection_builds > 0);
    let mut hashes = Vec::new();
    for frac in [0.03, 0.06, 0.1] {
        let k = wk(k_at(&d, frac));
        let before = counters.snapshot();
        let b = s.bind(k, cfie_weights(k, 0.5)).unwrap();
        let diff = counters.snapshot().since(&before);
        assert_eq!(diff.singular_integration_calls, 0);
        assert_eq!(diff.near_entry_direct_integrations, 0);
        assert_eq!(diff.precorrection_builds, 0);
        hashes.push(b.near_hash().unwrap());
    }
    assert!(hashes.iter().all(|h| *h == hashes[0]));
    assert_eq!(s.static_hash().unwrap(), hashes[0]);
}

#[test]
fn aim_rebinding_redoes_near_work() {
    let d = disc(1);
    let k_max = k_at(&d, 0.1);
    let counters = Arc::new(WorkCounters::default());
    let s = OperatorSet::assemble(d.clone(), OperatorConfig::new(Mode::Aim, Ops::EFIE), k_max, counters.clone(), None)
        .unwrap();
    let mut hashes = Vec::new();
    for frac in [0.03, 0.06, 0.1] {
        let k = wk(k_at(&d, frac));
        let before = counters.snapshot();
        let b = s.bind(k, efie_weights(k)).unwrap();
        let diff = counters.snapshot().since(&before);
        assert!(diff.singular_integration_calls > 0);
        assert!(diff.precorrection_builds > 0);
        hashes.push(b.near_hash().unwrap());
    }
    assert_ne!(hashes[0], hashes[1]);
    assert!(s.static_hash().is_none());
}

#[test]
fn binding_twice_is_idempotent() {
    let d = disc(1);
    let k = wk(k_at(&d, 0.08));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x = random_vec(&mut rng, d.unknowns());
    for mode in [Mode::Direct, Mode::Aim, Mode::Aimx] {
        let s = set(&d, mode, Ops::ALL, k.k0);
        let w = cfie_weights(k, 0.5);
        let a = s.bind(k, w).unwrap().matvec(&x).unwrap();
        let b = s.bind(k, w).unwrap().matvec(&x).unwrap();
        assert_eq!(a, b, "{mode}");
    }
}

#[test]
fn direct_mode_is_dense_assembly() {
    let d = disc(1);
    let k = wk(k_at(&d, 0.1));
    let w = cfie_weights(k, 0.3);
    let b = set(&d, Mode::Direct, Ops::ALL, k.k0).bind(k, w).unwrap();
    let reference = PairIntegrator::new(&d, QuadratureConfig::default())
        .assemble_dense(Family::Full(k.k0), w)
        .unwrap();
    assert_eq!(b.dense().unwrap().data, reference.data);
}

#[test]
fn zero_vector_maps_to_zero() {
    let d = disc(1);
    let k = wk(k_at(&d, 0.1));
    let zero = vec![Complex64::new(0.0, 0.0); d.unknowns()];
    for mode in [Mode::Direct, Mode::Aim, Mode::Aimx] {
        let y = set(&d, mode, Ops::ALL, k.k0).bind(k, cfie_weights(k, 0.5)).unwrap().matvec(&zero).unwrap();
        assert!(y.iter().all(|z| *z == Complex64::new(0.0, 0.0)), "{mode}");
    }
}

#[test]
fn wrong_length_is_rejected() {
    let d = disc(1);
    let k = wk(k_at(&d, 0.1));
    for mode in [Mode::Direct, Mode::Aimx] {
        let b = set(&d, mode, Ops::EFIE, k.k0).bind(k, efie_weights(k)).unwrap();
        assert_eq!(b.dim(), d.unknowns());
        let x = vec![Complex64::new(1.0, 0.0); d.unknowns() - 1];
        assert!(matches!(b.matvec(&x), Err(OperatorError::Dimension { .. })));
    }
}

#[test]
fn invalid_configurations_are_rejected() {
    let d = disc(1);
    let k = k_at(&d, 0.1);
    let s = set(&d, Mode::Aimx, Ops::EFIE, k);
    assert!(matches!(s.bind(Wavenumber { k0: 0.0 }, efie_weights(wk(k))), Err(OperatorError::ZeroWavenumber)));
    assert!(matches!(s.bind(wk(k), OpWeights::only(OperatorTag::K)), Err(OperatorError::Missing(OperatorTag::K))));
    let zero_k = OperatorSet::assemble(
        d.clone(),
        OperatorConfig::new(Mode::Aimx, Ops::EFIE),
        0.0,
        Arc::new(WorkCounters::default()),
        None,
    );
    assert!(matches!(zero_k, Err(OperatorError::ZeroWavenumber)));
    for mode in [Mode::Direct, Mode::Aim] {
        let mut cfg = OperatorConfig::new(mode, Ops::EFIE);
        cfg.linear_term = true;
        let r = OperatorSet::assemble(d.clone(), cfg, k, Arc::new(WorkCounters::default()), None);
        assert!(matches!(r, Err(OperatorError::LinearTermMode)), "{mode}");
    }
}

#[test]
fn double_layer_needs_closed_mesh() {
    let d = Arc::new(Discretization::new(shapes::plate(1.0, 1.0, 3, 3)).unwrap());
    for mode in [Mode::Direct, Mode::Aim, Mode::Aimx] {
        let r = OperatorSet::assemble(
            d.clone(),
            OperatorConfig::new(mode, Ops::ALL),
            10.0,
            Arc::new(WorkCounters::default()),
            None,
        );
        assert!(matches!(r, Err(OperatorError::Quadrature(_))), "{mode}");
        assert!(set(&d, mode, Ops::EFIE, 10.0).unknowns() > 0);
    }
}

#[test]
fn dense_memory_guard() {
    let d = disc(1);
    let mut cfg = OperatorConfig::new(Mode::Direct, Ops::EFIE);
    cfg.quadrature.max_dense_unknowns = d.unknowns() - 1;
    let r = OperatorSet::assemble(d.clone(), cfg, 1.0, Arc::new(WorkCounters::default()), None);
    assert!(matches!(r, Err(OperatorError::Quadrature(QuadError::TooLarge { .. }))));
}

#[test]
fn efie_direct_matrix_is_complex_symmetric() {
    let d = disc(1);
    let k = wk(k_at(&d, 0.1));
    let b = efie_operator(&set(&d, Mode::Direct, Ops::EFIE, k.k0), k).unwrap();
    let defect = b.dense().unwrap().symmetry_defect();
    assert!(defect < 1e-10, "{defect:e}");
}

#[test]
fn cfie_with_unit_alpha_is_efie() {
    let d = disc(1);
    let k = wk(k_at(&d, 0.1));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = random_vec(&mut rng, d.unknowns());
    for mode in [Mode::Direct, Mode::Aimx] {
        let s = set(&d, mode, Ops::ALL, k.k0);
        let a = cfie_operator(&s, k, 1.0).unwrap().matvec(&x).unwrap();
        let b = efie_operator(&s, k).unwrap().matvec(&x).unwrap();
        assert_eq!(a, b, "{mode}");
    }
}

#[test]
fn double_layer_tends_to_static_action() {
    let d = disc(1);
    let k = wk(1e-7);
    let w = OpWeights::only(OperatorTag::K);
    let b = set(&d, Mode::Direct, Ops::ALL, 1.0).bind(k, w).unwrap();
    let reference = PairIntegrator::new(&d, QuadratureConfig::default())
        .assemble_dense(Family::Static, w)
        .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let x = random_vec(&mut rng, d.unknowns());
    let e = rel_l2(&b.matvec(&x).unwrap(), &reference.matvec(&x).unwrap());
    assert!(e < 1e-9, "{e:e}");
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = disc(1);
    let k = wk(k_at(&d, 0.1));
    let mut cfg = OperatorConfig::new(Mode::Aimx, Ops::ALL);
    cfg.linear_term = true;
    let counters = Arc::new(WorkCounters::default());
    let first = OperatorSet::assemble(d.clone(), cfg, k.k0, counters.clone(), Some(dir.path())).unwrap();
    assert!(!first.cache_hit());
    let before = counters.snapshot();
    let second = OperatorSet::assemble(d.clone(), cfg, k.k0, counters.clone(), Some(dir.path())).unwrap();
    assert!(second.cache_hit());
    assert_eq!(counters.snapshot().since(&before).singular_integration_calls, 0);
    assert_eq!(first.static_hash(), second.static_hash());
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let x = random_vec(&mut rng, d.unknowns());
    let w = cfie_weights(k, 0.5);
    assert_eq!(
        first.bind(k, w).unwrap().matvec(&x).unwrap(),
        second.bind(k, w).unwrap().matvec(&x).unwrap()
    );
    assert_eq!(first.static_diagonal(w), second.static_diagonal(w));

    // A different configuration misses.
    let third = build_cached(&d, OperatorConfig::new(Mode::Aimx, Ops::ALL), k.k0, dir.path());
    assert!(!third.cache_hit());
}

fn build_cached(d: &Arc<Discretization<f64>>, cfg: OperatorConfig, k: f64, dir: &std::path::Path) -> OperatorSet<f64> {
    OperatorSet::assemble(d.clone(), cfg, k, Arc::new(WorkCounters::default()), Some(dir)).unwrap()
}

#[test]
fn corrupt_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = disc(1);
    let k = k_at(&d, 0.1);
    let cfg = OperatorConfig::new(Mode::Aimx, Ops::EFIE);
    build_cached(&d, cfg, k, dir.path());
    let file = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let bytes = std::fs::read(&file).unwrap();
    std::fs::write(&file, &bytes[..bytes.len() / 2]).unwrap();
    let r = OperatorSet::assemble(d.clone(), cfg, k, Arc::new(WorkCounters::default()), Some(dir.path()));
    assert!(matches!(r, Err(OperatorError::Cache { .. })));
}

#[test]
fn diagonal_matches_unit_vector_products() {
    let d = disc(1);
    let n = d.unknowns();
    let k = wk(k_at(&d, 0.1));
    for (mode, lin) in [(Mode::Direct, false), (Mode::Aim, false), (Mode::Aimx, false), (Mode::Aimx, true)] {
        let mut cfg = OperatorConfig::new(mode, Ops::ALL);
        cfg.linear_term = lin;
        let b = build(&d, cfg, k.k0).bind(k, cfie_weights(k, 0.5)).unwrap();
        let diag = b.diagonal();
        for m in (0..n).step_by(7) {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[m] = Complex64::new(1.0, 0.0);
            let y = b.matvec(&e).unwrap();
            assert!((y[m] - diag[m]).norm() <= 1e-10 * diag[m].norm(), "{mode} {m}");
        }
    }
}

#[test]
fn fullwave_diagonal_matches_direct() {
    let d = disc(1);
    let k = wk(k_at(&d, 0.1));
    let w = cfie_weights(k, 0.5);
    let direct = set(&d, Mode::Direct, Ops::ALL, k.k0).bind(k, w).unwrap().diagonal();
    for mode in [Mode::Direct, Mode::Aimx] {
        let full = set(&d, mode, Ops::ALL, k.k0).fullwave_diagonal(k, w).unwrap();
        for (a, b) in full.iter().zip(&direct) {
            assert!((a - b).norm() <= 1e-9 * b.norm(), "{mode}");
        }
    }
}

#[test]
fn static_part_dominates_self_terms_as_mesh_refines() {
    let d = disc(1);
    let s = set(&d, Mode::Aimx, Ops::EFIE, k_at(&d, 0.1));
    let mut prev: Option<Vec<f64>> = None;
    for frac in [0.1, 0.03, 0.01] {
        let k = wk(k_at(&d, frac));
        let w = efie_weights(k);
        let stat = s.static_diagonal(w);
        let full = s.fullwave_diagonal(k, w).unwrap();
        let ratio: Vec<f64> = stat.iter().zip(&full).map(|(s, f)| s.norm() / (f - s).norm()).collect();
        if let Some(p) = &prev {
            for (r, q) in ratio.iter().zip(p) {
                assert!(r > q, "{frac}: {r} <= {q}");
            }
        }
        prev = Some(ratio);
    }
}

#[test]
fn zero_gradient_self_term_option() {
    let d = disc(1);
    let k = wk(k_at(&d, 0.1));
    let w = OpWeights::only(OperatorTag::K);
    let mut cfg = OperatorConfig::new(Mode::Aimx, Ops::ALL);
    let a = build(&d, cfg, k.k0).bind(k, w).unwrap();
    cfg.grad_self = GradSelfTerm::Zero;
    let b = build(&d, cfg, k.k0).bind(k, w).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let x = random_vec(&mut rng, d.unknowns());
    assert_ne!(a.matvec(&x).unwrap(), b.matvec(&x).unwrap());
}

#[test]
fn mode_names_round_trip() {
    for m in [Mode::Direct, Mode::Aim, Mode::Aimx] {
        assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
    }
    assert_eq!("AIMX".parse::<Mode>().unwrap(), Mode::Aimx);
    assert!("fmm".parse::<Mode>().is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn matvec_is_linear(seed in any::<u64>(), ar in -2.0f64..2.0, ai in -2.0f64..2.0) {
        let d = disc(0);
        let k = wk(k_at(&d, 0.1));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_vec(&mut rng, d.unknowns());
        let y = random_vec(&mut rng, d.unknowns());
        let a = Complex64::new(ar, ai);
        let combo: Vec<_> = x.iter().zip(&y).map(|(p, q)| a * p + q).collect();
        for mode in [Mode::Direct, Mode::Aimx] {
            let b = set(&d, mode, Ops::ALL, k.k0).bind(k, cfie_weights(k, 0.5)).unwrap();
            let (bx, by, bc) = (b.matvec(&x).unwrap(), b.matvec(&y).unwrap(), b.matvec(&combo).unwrap());
            let expect: Vec<_> = bx.iter().zip(&by).map(|(p, q)| a * p + q).collect();
            prop_assert!(rel_l2(&bc, &expect) < 1e-12);
        }
    }
}
