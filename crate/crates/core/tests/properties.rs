use faer::{c64, Mat};
use gaussent::closed_form::{
    banded_toeplitz, geometry_singulars, geometry_singulars_grouped, toeplitz_fourier_singulars,
    Geometry, LinkStrengths,
};
use gaussent::lattice::{boundary_measure_1, boundary_measure_2, build_adjacency, AdjacencyKind};
use gaussent::linalg::max_abs;
use gaussent::symplectic::{
    entanglement_entropy, log_negativity, partial_transpose, partial_transpose_spectrum,
    pure_bipartition_log_negativity, pure_state_reduced_spectrum, singular_values,
    symplectic_eigenvalues,
};
use gaussent::{
    solve_ground_state, Boundary, ContractionMatrix, Lattice2D, LogBase, QuadraticHamiltonian,
    Region, Tolerances,
};
use proptest::prelude::*;

/// Random stable real Hamiltonian: symmetric couplings with zero diagonal and
/// lambda a margin above the row-sum bound.
fn hamiltonian() -> impl Strategy<Value = QuadraticHamiltonian> {
    (2usize..=6).prop_flat_map(|n| {
        let m = n * (n - 1) / 2;
        (
            prop::collection::vec(-1.0f64..1.0, m),
            prop::collection::vec(-1.0f64..1.0, m),
            1.1f64..6.0,
        )
            .prop_map(move |(p, q, margin)| {
                let sym = |v: &[f64]| {
                    let mut a = Mat::<c64>::zeros(n, n);
                    let mut k = 0;
                    for i in 0..n {
                        for j in i + 1..n {
                            a[(i, j)] = c64::new(v[k], 0.0);
                            a[(j, i)] = c64::new(v[k], 0.0);
                            k += 1;
                        }
                    }
                    a
                };
                let (dp, dm) = (sym(&p), sym(&q));
                let row = |a: &Mat<c64>| {
                    (0..n)
                        .map(|i| (0..n).map(|j| a[(i, j)].norm()).sum::<f64>())
                        .fold(0.0, f64::max)
                };
                let lambda = margin * (row(&dp) + row(&dm)).max(0.1);
                QuadraticHamiltonian::new(vec![lambda; n], dp, dm).unwrap()
            })
    })
}

fn state_and_cut() -> impl Strategy<Value = (ContractionMatrix, Region)> {
    hamiltonian().prop_flat_map(|h| {
        let n = h.n_modes();
        let d = solve_ground_state(&h).unwrap().1;
        (Just(d), 1usize..n).prop_map(move |(d, k)| {
            let region = Region::new(n, (0..k).collect()).unwrap();
            (d, region)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ground_state_is_pure((d, _) in state_and_cut()) {
        prop_assert!(d.purity_residual() < 1e-9);
    }

    #[test]
    fn entropy_is_symmetric((d, a) in state_and_cut()) {
        let b = a.complement();
        let sa = symplectic_eigenvalues(&d.restrict(a.sites()).unwrap()).unwrap();
        let sb = symplectic_eigenvalues(&d.restrict(b.sites()).unwrap()).unwrap();
        prop_assert!(sa.values.iter().all(|&f| f >= 0.0));
        let ea = entanglement_entropy(&sa, LogBase::E).unwrap().value;
        let eb = entanglement_entropy(&sb, LogBase::E).unwrap().value;
        prop_assert!((ea - eb).abs() < 1e-8 * (1.0 + ea), "{} vs {}", ea, eb);
    }

    #[test]
    fn pure_state_negativity_identity((d, a) in state_and_cut()) {
        let b = a.complement();
        let pt = partial_transpose_spectrum(&d, a.sites(), b.sites(), &Tolerances::default()).unwrap();
        prop_assert!(pt.values.iter().all(|&f| f >= -0.5));
        let sa = pure_state_reduced_spectrum(&d, a.sites(), &Tolerances::default()).unwrap();
        let n1 = log_negativity(&pt, LogBase::Two).unwrap().value;
        let n2 = pure_bipartition_log_negativity(&sa, LogBase::Two).unwrap().value;
        prop_assert!((n1 - n2).abs() < 1e-8 * (1.0 + n1), "{} vs {}", n1, n2);
    }

    #[test]
    fn pure_state_spectrum_matches_kernel((d, a) in state_and_cut()) {
        let general = symplectic_eigenvalues(&d.restrict(a.sites()).unwrap()).unwrap();
        let pure = pure_state_reduced_spectrum(&d, a.sites(), &Tolerances::default()).unwrap();
        for (x, y) in general.values.iter().zip(&pure.values) {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + x), "{} vs {}", x, y);
        }
    }

    #[test]
    fn partial_transpose_is_an_involution((d, a) in state_and_cut()) {
        let b = a.complement();
        let once = partial_transpose(&d, a.sites(), b.sites()).unwrap();
        let k = a.len();
        let n = d.n_modes();
        let (bb, cc): (Vec<usize>, Vec<usize>) = ((0..k).collect(), (k..n).collect());
        let twice = partial_transpose(&once, &bb, &cc).unwrap();
        let order: Vec<usize> = a.sites().iter().chain(b.sites()).copied().collect();
        let orig = d.restrict(&order).unwrap();
        prop_assert!(max_abs(&(twice.f_plus() - orig.f_plus())) < 1e-15);
        prop_assert!(max_abs(&(twice.f_minus() - orig.f_minus())) < 1e-15);
    }

    #[test]
    fn mode_order_does_not_change_spectrum((d, a) in state_and_cut()) {
        let mut rev = a.sites().to_vec();
        rev.reverse();
        let s1 = symplectic_eigenvalues(&d.restrict(a.sites()).unwrap()).unwrap().values;
        let s2 = symplectic_eigenvalues(&d.restrict(&rev).unwrap()).unwrap().values;
        for (x, y) in s1.iter().zip(&s2) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn circulant_singulars_match_svd(
        taps in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..5),
        n in 8usize..40,
    ) {
        let f: Vec<c64> = taps.iter().map(|&(re, im)| c64::new(re, im)).collect();
        let mut fourier = toeplitz_fourier_singulars(&f, n);
        fourier.sort_by(f64::total_cmp);
        let mut svd = singular_values(&banded_toeplitz(&f, n, Boundary::Cyclic)).unwrap();
        svd.sort_by(f64::total_cmp);
        for (x, y) in fourier.iter().zip(&svd) {
            prop_assert!((x - y).abs() < 1e-10, "{} vs {}", x, y);
        }
    }

    #[test]
    fn rect_singulars_match_boundary_measures(nx in 2usize..9, ny in 2usize..9) {
        let lat = Lattice2D::new(nx + 4, ny + 4, Boundary::Open).unwrap();
        let a = Region::rect_block(&lat, 2, 2, nx, ny).unwrap();
        let adj = build_adjacency(&lat, AdjacencyKind::FirstNeighbor);
        let unit = LinkStrengths::isotropic(1.0, 1.0);
        let geom = Geometry::RectBlock { nx, ny };
        let sv = geometry_singulars(geom, &unit).unwrap();
        let m1 = boundary_measure_1(&adj, &a).unwrap().trace_norm;
        let m2 = boundary_measure_2(&adj, &a);
        prop_assert!((sv.iter().sum::<f64>() - m1).abs() < 1e-9);
        prop_assert!((sv.iter().map(|s| s * s).sum::<f64>() - m2).abs() < 1e-9);
        let count: usize = geometry_singulars_grouped(geom, &unit).unwrap().iter().map(|g| g.1).sum();
        prop_assert_eq!(count, 2 * (nx + ny) - 4);
    }

    #[test]
    fn geometry_singulars_scale_linearly(sigma in 1e-4f64..0.2, n in 2usize..12) {
        let unit = LinkStrengths::isotropic(1.0, 1.0);
        let s = LinkStrengths::isotropic(sigma, sigma);
        for geom in [Geometry::TiltedBlock { n }, Geometry::Checkerboard { nx: 2 * n, ny: 2 * n }] {
            let a = geometry_singulars(geom, &unit).unwrap();
            let b = geometry_singulars(geom, &s).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x * sigma - y).abs() < 1e-12);
            }
        }
    }
}
