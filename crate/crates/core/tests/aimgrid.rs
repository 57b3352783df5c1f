use std::path::Path;
use std::sync::Arc;

use aimx_core::aimgrid::*;
use aimx_core::kernels::{GradSelfTerm, KernelKind, Wavenumber, C0};
use aimx_core::mesh::{load_mesh, shapes, MeshFormat};
use aimx_core::quadrature::{EntryKernel, OperatorTag, Ops, PairIntegrator, QuadratureConfig, TriangleRule};
use aimx_core::{Discretization, Vec3};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sphere() -> Discretization<f64> {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/sphere_3080.tri");
    Discretization::new(load_mesh(&p, MeshFormat::Tri, 1.0).unwrap()).unwrap()
}

fn k_of(hz: f64) -> f64 {
    2.0 * std::f64::consts::PI * hz / C0
}

fn wk(k: f64) -> Wavenumber<f64> {
    Wavenumber::new(k).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn sphere_grid_at_500_mhz() {
    let d = sphere();
    let g = AimGrid::build(&d.mesh, &GridConfig::default(), k_of(500e6)).unwrap();
    for n in g.dims {
        assert!((22..=26).contains(&n), "{:?}", g.dims);
    }
    let lam = C0 / 500e6;
    assert!((g.spacing - lam / 10.0).abs() < 1e-12);
    // Every stencil lies inside the grid and its box contains the support centroid.
    for b in &d.basis {
        let c = b.support_centroid(&d.mesh);
        let a = g.anchor(c);
        for ax in 0..3 {
            assert!(a[ax] + g.order < g.dims[ax]);
            let lo = g.node(a)[ax];
            assert!(c[ax] >= lo - 1e-12 && c[ax] <= lo + g.spacing * g.order as f64 + 1e-12);
        }
    }
    let bb = d.mesh.bounding_box(0.0);
    let far = g.node([g.dims[0] - 1, g.dims[1] - 1, g.dims[2] - 1]);
    assert!(g.origin.x < bb.min.x && far.x > bb.max.x);
}

#[test]
fn doubling_density_octuples_points() {
    let d = sphere();
    let k = k_of(500e6);
    let cfg = GridConfig {
        margin_cells: Some(0.0),
        ..GridConfig::default()
    };
    let g1 = AimGrid::build(&d.mesh, &cfg, k).unwrap();
    let g2 = AimGrid::build(&d.mesh, &GridConfig { points_per_wavelength: 20.0, ..cfg }, k).unwrap();
    assert!((g2.spacing * 2.0 - g1.spacing).abs() < 1e-15);
    let ratio = g2.len() as f64 / g1.len() as f64;
    assert!((6.5..9.5).contains(&ratio), "{ratio}");
}

#[test]
fn grid_errors() {
    let m = shapes::tetrahedron::<f64>();
    let bad = GridConfig {
        points_per_wavelength: 4.0,
        ..GridConfig::default()
    };
    assert!(matches!(AimGrid::build(&m, &bad, 1.0), Err(GridError::TooCoarse(_))));
    let bad = GridConfig {
        near_radius_cells: Some(2),
        ..GridConfig::default()
    };
    assert!(matches!(AimGrid::build(&m, &bad, 1.0), Err(GridError::NearRadius { .. })));
    let bad = GridConfig {
        max_points: 100,
        ..GridConfig::default()
    };
    assert!(matches!(AimGrid::build(&m, &bad, 100.0), Err(GridError::TooLarge { .. })));
}

#[test]
fn point_source_on_node_projects_onto_that_node() {
    let m = shapes::unit_cube::<f64>(2);
    let g = AimGrid::build(&m, &GridConfig::default(), 20.0).unwrap();
    let a = [2, 3, 1];
    for q in 0..g.stencil_len() {
        let s = g.order + 1;
        let node = g.node([a[0] + q % s, a[1] + (q / s) % s, a[2] + q / (s * s)]);
        let w = point_weights(&g, a, node);
        for (i, wi) in w.iter().enumerate() {
            let expect = if i == q { 1.0 } else { 0.0 };
            assert!((wi - expect).abs() < 1e-14);
        }
    }
}

/// Exact moments `∫ ρ x^a y^b z^c` of one RWG for each flavor component.
fn exact_moment(d: &Discretization<f64>, m: usize, flavor: Flavor, comp: usize, c0: Vec3<f64>, e: [i32; 3]) -> f64 {
    let b = d.basis[m];
    let rule = TriangleRule::<f64>::collapsed_gauss(12);
    let mut total = 0.0;
    for plus in [true, false] {
        let t = if plus { b.tri_plus } else { b.tri_minus };
        let free = d.mesh.vertices[if plus { b.free_plus } else { b.free_minus }];
        let (pts, wts) = rule.map(&d.mesh.tri_vertices(t), d.mesh.areas[t]);
        for (r, w) in pts.into_iter().zip(wts) {
            let rho = match flavor {
                Flavor::A => ((r - free) * b.coef(&d.mesh, plus))[comp],
                Flavor::Phi => b.divergence(&d.mesh, t),
                Flavor::K => ((r - free).cross(d.mesh.normals[t]) * b.coef(&d.mesh, plus))[comp],
            };
            let s = r - c0;
            total += w * rho * s.x.powi(e[0]) * s.y.powi(e[1]) * s.z.powi(e[2]);
        }
    }
    total
}

#[test]
fn projection_matches_moments() {
    let d = Discretization::new(shapes::icosphere::<f64>(2, 0.5)).unwrap();
    let g = AimGrid::build(&d.mesh, &GridConfig::default(), 12.0).unwrap();
    let n = g.order as i32;
    for flavor in [Flavor::A, Flavor::Phi, Flavor::K] {
        let p = Projection::build(&d, &g, flavor);
        for m in (0..d.unknowns()).step_by(37) {
            let anchor = p.anchors[m];
            let c0 = g.node(anchor);
            let s = g.order + 1;
            for comp in 0..flavor.components() {
                let w = p.weights(m, comp);
                for a in 0..=n {
                    for b in 0..=n {
                        for c in 0..=n {
                            let got: f64 = (0..g.stencil_len())
                                .map(|q| {
                                    let off = [q % s, (q / s) % s, q / (s * s)].map(|i| i as f64 * g.spacing);
                                    w[q] * off[0].powi(a) * off[1].powi(b) * off[2].powi(c)
                                })
                                .sum();
                            let exact = exact_moment(&d, m, flavor, comp, c0, [a, b, c]);
                            let scale = exact_moment(&d, m, Flavor::Phi, 0, c0, [0, 0, 0]).abs()
                                + w.iter().map(|x| x.abs()).sum::<f64>() * g.spacing.powi(a + b + c);
                            assert!((got - exact).abs() <= 1e-12 * scale, "{flavor:?} m={m} c={comp} ({a},{b},{c})");
                        }
                    }
                }
            }
            if flavor == Flavor::Phi {
                // Charge neutrality of an interior RWG.
                let total: f64 = p.weights(m, 0).iter().sum();
                assert!(total.abs() < 1e-12 * p.weights(m, 0).iter().map(|x| x.abs()).sum::<f64>());
            }
        }
    }
}

#[test]
fn projected_source_reproduces_far_potential() {
    let d = Discretization::new(shapes::icosphere::<f64>(3, 0.5)).unwrap();
    let g = AimGrid::build(&d.mesh, &GridConfig::default(), 12.0).unwrap();
    let p = Projection::build(&d, &g, Flavor::A);
    let k = wk(3.0);
    let m = 17;
    let b = d.basis[m];
    let c = b.support_centroid(&d.mesh);
    let s = g.order + 1;
    let rule = TriangleRule::<f64>::collapsed_gauss(16);
    for dir in [Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.3, -0.8, 0.52).normalized()] {
        let obs = c + dir * (10.0 * g.spacing);
        let mut grid_val = [Complex64::new(0.0, 0.0); 3];
        let mut direct = [Complex64::new(0.0, 0.0); 3];
        for comp in 0..3 {
            let w = p.weights(m, comp);
            for q in 0..g.stencil_len() {
                let a = p.anchors[m];
                let node = g.node([a[0] + q % s, a[1] + (q / s) % s, a[2] + q / (s * s)]);
                grid_val[comp] += KernelKind::G.eval_scalar(k, obs - node).unwrap() * w[q];
            }
            for plus in [true, false] {
                let t = if plus { b.tri_plus } else { b.tri_minus };
                let free = d.mesh.vertices[if plus { b.free_plus } else { b.free_minus }];
                let (pts, wts) = rule.map(&d.mesh.tri_vertices(t), d.mesh.areas[t]);
                for (r, wq) in pts.into_iter().zip(wts) {
                    let f = (r - free) * b.coef(&d.mesh, plus);
                    direct[comp] += KernelKind::G.eval_scalar(k, obs - r).unwrap() * (f[comp] * wq);
                }
            }
        }
        // Components that vanish by symmetry are judged against the full vector.
        let scale = direct.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(scale > 0.0);
        for comp in 0..3 {
            let err = (grid_val[comp] - direct[comp]).norm();
            assert!(err <= 1e-3 * scale, "{comp}: {} vs {}", grid_val[comp], direct[comp]);
        }
    }
}

fn small_grid() -> AimGrid<f64> {
    AimGrid {
        origin: Vec3::zero(),
        spacing: 0.1,
        dims: [8, 8, 8],
        order: 2,
    }
}

#[test]
fn convolution_self_entries() {
    let g = small_grid();
    let k = 2.5;
    let c = Convolution::build(&g, KernelKind::G, wk(k), GradSelfTerm::Scalar);
    assert_eq!(c.sample(0, [0, 0, 0]), Complex64::new(0.0, -k / (4.0 * std::f64::consts::PI)));
    let c = Convolution::build(&g, KernelKind::GS, wk(k), GradSelfTerm::Scalar);
    assert_eq!(c.sample(0, [0, 0, 0]), Complex64::new(0.0, 0.0));
    let c = Convolution::build(&g, KernelKind::GradG, wk(k), GradSelfTerm::Scalar);
    let expect = Complex64::new(0.0, -k).powi(2) / (8.0 * std::f64::consts::PI);
    for comp in 0..3 {
        assert!((c.sample(comp, [0, 0, 0]) - expect).norm() == 0.0);
    }
    let c = Convolution::build(&g, KernelKind::GradG, wk(k), GradSelfTerm::Zero);
    assert_eq!(c.sample(1, [0, 0, 0]), Complex64::new(0.0, 0.0));
    // Toeplitz samples are the kernel at the offset.
    let c = Convolution::build(&g, KernelKind::G, wk(k), GradSelfTerm::Scalar);
    let r = Vec3::new(-3.0, 2.0, 7.0) * 0.1;
    assert_eq!(c.sample(0, [-3, 2, 7]), KernelKind::G.eval_scalar(wk(k), r).unwrap());
}

#[test]
fn impulse_response_is_kernel() {
    let g = small_grid();
    let c = Convolution::build(&g, KernelKind::G, wk(4.0), GradSelfTerm::Scalar);
    let mut x = vec![Complex64::new(0.0, 0.0); g.len()];
    let center = [4, 4, 4];
    x[g.index(center)] = Complex64::new(1.0, 0.0);
    let y = c.apply(&x).unwrap();
    for kz in 0..8 {
        for ky in 0..8 {
            for kx in 0..8 {
                let d = [kx as isize - 4, ky as isize - 4, kz as isize - 4];
                assert!((y[g.index([kx, ky, kz])] - c.sample(0, d)).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn fft_matches_dense_toeplitz() {
    let g = small_grid();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for kind in [KernelKind::G, KernelKind::GS, KernelKind::GD, KernelKind::GLin] {
        let c = Convolution::build(&g, kind, wk(6.0), GradSelfTerm::Scalar);
        let x = random_vec(&mut rng, g.len());
        let fast = c.apply(&x).unwrap();
        let dense = c.apply_dense(0, &x);
        let err = fast.iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12 * max_abs(&dense), "{kind:?}: {err:e}");
    }
    let c = Convolution::build(&g, KernelKind::GradG, wk(6.0), GradSelfTerm::Scalar);
    let j: Vec<Vec<Complex64>> = (0..3).map(|_| random_vec(&mut rng, g.len())).collect();
    let fast = c.apply_curl([&j[0], &j[1], &j[2]]).unwrap();
    for i in 0..3 {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        let da = c.apply_dense(a, &j[b]);
        let db = c.apply_dense(b, &j[a]);
        let dense: Vec<Complex64> = da.iter().zip(&db).map(|(x, y)| x - y).collect();
        let err = fast[i].iter().zip(&dense).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err <= 1e-12 * max_abs(&dense), "curl {i}: {err:e}");
    }
    assert!(matches!(c.apply(&j[0]), Err(ConvolutionError::NotScalar(_))));
    let s = Convolution::build(&g, KernelKind::G, wk(6.0), GradSelfTerm::Scalar);
    assert!(matches!(s.apply(&j[0][..10]), Err(ConvolutionError::Length { .. })));
}

#[test]
fn near_map_properties() {
    let d = sphere();
    let cfg = GridConfig::default();
    let g = AimGrid::build(&d.mesh, &cfg, k_of(500e6)).unwrap();
    let p = Projection::build(&d, &g, Flavor::A);
    let r = cfg.near_radius();
    let map = build_near_map(&g, &p.anchors, r);
    assert!(map.is_symmetric());
    for m in 0..d.unknowns() {
        assert!(map.contains(m, m));
    }
    let bound = (r + 2 * (g.order + 1)) as f64 * g.spacing;
    let mut far_checked = 0;
    for m in (0..d.unknowns()).step_by(97) {
        let cm = d.basis[m].support_centroid(&d.mesh);
        for n in 0..d.unknowns() {
            let dist = (cm - d.basis[n].support_centroid(&d.mesh)).norm();
            if dist > bound {
                assert!(!map.contains(m, n));
                far_checked += 1;
            }
            // Brute-force stencil gap.
            let (am, an) = (p.anchors[m], p.anchors[n]);
            let gap2: usize = (0..3)
                .map(|i| {
                    let dd = am[i].abs_diff(an[i]).saturating_sub(g.order);
                    dd * dd
                })
                .sum();
            assert_eq!(map.contains(m, n), gap2 <= r * r);
        }
    }
    assert!(far_checked > 0);
    // Rebuilding for another frequency on the same grid reproduces the map.
    let p2 = Projection::build(&d, &g, Flavor::Phi);
    assert_eq!(build_near_map(&g, &p2.anchors, r), map);
}

/// Dense `W H P` from explicit matrices on a tiny case.
#[test]
fn precorrection_matches_dense_product() {
    let d = Discretization::new(shapes::icosphere::<f64>(1, 0.5)).unwrap();
    let cfg = GridConfig::default();
    let g = AimGrid::build(&d.mesh, &cfg, 8.0).unwrap();
    let pa = Projection::build(&d, &g, Flavor::A);
    let pphi = Projection::build(&d, &g, Flavor::Phi);
    let pk = Projection::build(&d, &g, Flavor::K);
    let k = wk(3.0);
    let hs = Convolution::build(&g, KernelKind::G, k, GradSelfTerm::Scalar);
    let hg = Convolution::build(&g, KernelKind::GradG, k, GradSelfTerm::Scalar);
    let map = Arc::new(build_near_map(&g, &pa.anchors, cfg.near_radius()));
    let kern = GridKernels {
        grid: &g,
        pa: &pa,
        pphi: &pphi,
        pk: Some(&pk),
        scalar: Some(&hs),
        gradient: Some(&hg),
    };
    let pre = build_precorrection(&kern, &map, Ops::ALL, None);
    // Dense grid matrices.
    let n = d.unknowns();
    let ng = g.len();
    let dense_p = |p: &Projection<f64>, c: usize| {
        let mut out = vec![0.0; n * ng];
        for m in 0..n {
            for (node, &w) in g.stencil_nodes(p.anchors[m]).zip(p.weights(m, c)) {
                out[m * ng + node] += w;
            }
        }
        out
    };
    let coord = |i: usize| [i % g.dims[0], (i / g.dims[0]) % g.dims[1], i / (g.dims[0] * g.dims[1])];
    let h = |conv: &Convolution<f64>, c: usize, p: usize, q: usize| {
        let (a, b) = (coord(p), coord(q));
        conv.sample(c, [0, 1, 2].map(|i| a[i] as isize - b[i] as isize))
    };
    let bilinear = |wm: &[f64], conv: &Convolution<f64>, c: usize, wn: &[f64]| {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in (0..ng).filter(|&p| wm[p] != 0.0) {
            for q in (0..ng).filter(|&q| wn[q] != 0.0) {
                acc += h(conv, c, p, q) * (wm[p] * wn[q]);
            }
        }
        acc
    };
    let pa_d: Vec<Vec<f64>> = (0..3).map(|c| dense_p(&pa, c)).collect();
    let pk_d: Vec<Vec<f64>> = (0..3).map(|c| dense_p(&pk, c)).collect();
    let pphi_d = dense_p(&pphi, 0);
    let row = |v: &Vec<f64>, m: usize| v[m * ng..(m + 1) * ng].to_vec();
    for (m, nn) in map.iter().step_by(11) {
        let mut la = Complex64::new(0.0, 0.0);
        for c in 0..3 {
            la += bilinear(&row(&pa_d[c], m), &hs, 0, &row(&pa_d[c], nn));
        }
        let lphi = -bilinear(&row(&pphi_d, m), &hs, 0, &row(&pphi_d, nn));
        let mut kk = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            kk += bilinear(&row(&pk_d[i], m), &hg, a, &row(&pa_d[b], nn));
            kk -= bilinear(&row(&pk_d[i], m), &hg, b, &row(&pa_d[a], nn));
        }
        assert!((pre.la.as_ref().unwrap().get(m, nn) - la).norm() <= 1e-12);
        assert!((pre.lphi.as_ref().unwrap().get(m, nn) - lphi).norm() <= 1e-12);
        assert!((pre.k.as_ref().unwrap().get(m, nn) - kk).norm() <= 1e-12);
        assert_eq!(grid_entry(&kern, Ops::ALL, m, nn)[1], pre.lphi.as_ref().unwrap().get(m, nn));
    }
    // Far pairs carry no entry.
    let far = (0..n).find(|&j| !map.contains(0, j));
    if let Some(j) = far {
        assert_eq!(pre.la.as_ref().unwrap().get(0, j), Complex64::new(0.0, 0.0));
    }
}

/// `∫∫ |a_m| |a_n| G_s` over the two supports, the size of an entry before
/// the cancellations between its triangle pairs.
fn magnitude_scale(d: &Discretization<f64>, m: usize, n: usize, charge: bool) -> f64 {
    let rule = TriangleRule::<f64>::seven_point();
    let (bm, bn) = (d.basis[m], d.basis[n]);
    let mut scale = 0.0;
    for tm in [bm.tri_plus, bm.tri_minus] {
        let (xm, wm) = rule.map(&d.mesh.tri_vertices(tm), d.mesh.areas[tm]);
        for tn in [bn.tri_plus, bn.tri_minus] {
            let (xn, wn) = rule.map(&d.mesh.tri_vertices(tn), d.mesh.areas[tn]);
            for (a, wa) in xm.iter().zip(&wm) {
                for (b, wb) in xn.iter().zip(&wn) {
                    let amp = if charge {
                        (bm.divergence(&d.mesh, tm) * bn.divergence(&d.mesh, tn)).abs()
                    } else {
                        bm.eval(&d.mesh, tm, *a).norm() * bn.eval(&d.mesh, tn, *b).norm()
                    };
                    scale += amp * wa * wb / (4.0 * std::f64::consts::PI * (*a - *b).norm());
                }
            }
        }
    }
    scale
}

#[test]
fn static_precorrection_approximates_separated_entries() {
    let d = sphere();
    let cfg = GridConfig::default();
    let g = AimGrid::build(&d.mesh, &cfg, k_of(500e6)).unwrap();
    let pa = Projection::build(&d, &g, Flavor::A);
    let pphi = Projection::build(&d, &g, Flavor::Phi);
    let hs = Convolution::build(&g, KernelKind::GS, wk(1.0), GradSelfTerm::Scalar);
    let kern = GridKernels {
        grid: &g,
        pa: &pa,
        pphi: &pphi,
        pk: None,
        scalar: Some(&hs),
        gradient: None,
    };
    let map = build_near_map(&g, &pa.anchors, cfg.near_radius());
    let integ = PairIntegrator::new(&d, QuadratureConfig::default());
    let (mut checked, mut plain) = (0, 0);
    for m in (0..d.unknowns()).step_by(151) {
        for &n in map.row(m) {
            // Inside the near region, with stencils at least three cells apart.
            let gap2: usize = (0..3)
                .map(|i| pa.anchors[m][i].abs_diff(pa.anchors[n][i]).saturating_sub(g.order).pow(2))
                .sum();
            if gap2 < 9 {
                continue;
            }
            let e = grid_entry(&kern, Ops::EFIE, m, n);
            let la = integ.entry(m, n, EntryKernel::new(OperatorTag::LA, KernelKind::GS, wk(1.0)).unwrap()).unwrap();
            let lp = integ.entry(m, n, EntryKernel::new(OperatorTag::LPhi, KernelKind::GS, wk(1.0)).unwrap()).unwrap();
            let (sa, sp) = (magnitude_scale(&d, m, n, false), magnitude_scale(&d, m, n, true));
            // RWG charges are dipoles, so the charge entries always cancel
            // heavily; their error is measured against the uncancelled size.
            assert!((e[1] - lp).norm() <= 1e-2 * sp, "phi ({m},{n}): {} vs {}", e[1], lp);
            assert!((e[0] - la).norm() <= 1e-2 * sa, "A ({m},{n}): {} vs {}", e[0], la);
            if la.norm() >= 0.1 * sa {
                assert!((e[0] - la).norm() <= 1e-2 * la.norm(), "A ({m},{n}): {} vs {}", e[0], la);
                plain += 1;
            }
            checked += 1;
        }
    }
    assert!(checked > 1000 && plain > checked / 2, "{checked} {plain}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn convolution_is_linear(seed in 0u64..1000, a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let g = small_grid();
        let c = Convolution::build(&g, KernelKind::G, wk(3.0), GradSelfTerm::Scalar);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_vec(&mut rng, g.len());
        let y = random_vec(&mut rng, g.len());
        let (alpha, beta) = (Complex64::new(a, 0.5), Complex64::new(0.25, b));
        let z: Vec<Complex64> = x.iter().zip(&y).map(|(p, q)| alpha * p + beta * q).collect();
        let lhs = c.apply(&z).unwrap();
        let (cx, cy) = (c.apply(&x).unwrap(), c.apply(&y).unwrap());
        let scale = max_abs(&lhs).max(1.0);
        for i in 0..lhs.len() {
            prop_assert!((lhs[i] - alpha * cx[i] - beta * cy[i]).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn toeplitz_samples_match_kernel(dx in -7isize..8, dy in -7isize..8, dz in -7isize..8) {
        let g = small_grid();
        let c = Convolution::build(&g, KernelKind::GD, wk(2.0), GradSelfTerm::Scalar);
        let r = Vec3::new(dx as f64, dy as f64, dz as f64) * g.spacing;
        let expect = if (dx, dy, dz) == (0, 0, 0) {
            KernelKind::GD.grid_self_scalar(2.0)
        } else {
            KernelKind::GD.eval_scalar(wk(2.0), r).unwrap()
        };
        prop_assert_eq!(c.sample(0, [dx, dy, dz]), expect);
    }
}

