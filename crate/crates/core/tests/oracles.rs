use faer::{c64, Mat};
use gaussent::closed_form::{
    lmg_critical_lambda, lmg_f1, lmg_pt_eigenvalue, lmg_reduced_eigenvalue, summed_entropy,
};
use gaussent::lattice::{build_adjacency, AdjacencyKind};
use gaussent::model::{critical_lambda, CouplingTemplate, LatticeCouplings};
use gaussent::symplectic::{
    entanglement_entropy, h, log_negativity, partial_transpose_spectrum, symplectic_eigenvalues,
};
use gaussent::weak::{approx_reduced_spectrum, cross_singular_values, WeakOptions};
use gaussent::{
    solve_ground_state, Boundary, ContractionMatrix, Lattice2D, LogBase, QuadraticHamiltonian,
    Region, Tolerances,
};

fn real(n: usize, f: impl Fn(usize, usize) -> f64) -> Mat<c64> {
    Mat::from_fn(n, n, |i, j| c64::new(f(i, j), 0.0))
}

fn two_mode_squeezed(r: f64) -> ContractionMatrix {
    let (s, c) = (r.sinh(), r.cosh());
    let fp = real(2, |i, j| if i == j { s * s } else { 0.0 });
    let fm = real(2, |i, j| if i != j { s * c } else { 0.0 });
    ContractionMatrix::new(fp, fm).unwrap()
}

#[test]
fn two_mode_squeezed_vacuum() {
    for r in [0.05, 0.3, 1.2] {
        let d = two_mode_squeezed(r);
        assert!(d.purity_residual() < 1e-13);
        let n = r.sinh().powi(2);
        let one = symplectic_eigenvalues(&d.restrict(&[0]).unwrap()).unwrap();
        assert!((one.values[0] - n).abs() < 1e-12);
        let s = entanglement_entropy(&one, LogBase::E).unwrap().value;
        assert!((s - h(n)).abs() < 1e-12);
        let pt = partial_transpose_spectrum(&d, &[0], &[1], &Tolerances::default()).unwrap();
        // one PT value at (e^{-2r} - 1) / 2, its partner at (e^{2r} - 1) / 2
        assert!((pt.values[0] - 0.5 * (-2.0 * r).exp_m1()).abs() < 1e-12);
        assert!((pt.values[1] - 0.5 * (2.0 * r).exp_m1()).abs() < 1e-10);
        let e = log_negativity(&pt, LogBase::E).unwrap().value;
        assert!((e - 2.0 * r).abs() < 1e-12);
    }
}

#[test]
fn thermal_single_mode() {
    let nbar = 0.37;
    let d = ContractionMatrix::new(real(1, |_, _| nbar), real(1, |_, _| 0.0)).unwrap();
    let spec = symplectic_eigenvalues(&d).unwrap();
    assert!((spec.values[0] - nbar).abs() < 1e-14);
    let s = entanglement_entropy(&spec, LogBase::Two).unwrap().value;
    let want = -nbar * nbar.log2() + (1.0 + nbar) * (1.0 + nbar).log2();
    assert!((s - want).abs() < 1e-13);
}

#[test]
fn fully_connected_closed_forms_match_dense() {
    for (n, lambda, dx, dy) in [
        (8, 2.0, 1.5, 0.5),
        (12, 4.0, 3.0, 1.0),
        (10, 1.2, 1.0, -0.6),
    ] {
        let h = QuadraticHamiltonian::fully_connected(n, lambda, 0.5 * (dx + dy), 0.5 * (dx - dy))
            .unwrap();
        let (_, d) = solve_ground_state(&h).unwrap();
        let f1 = lmg_f1(n, lambda, dx, dy).unwrap();
        for na in 1..n {
            let a: Vec<usize> = (0..na).collect();
            let spec = symplectic_eigenvalues(&d.restrict(&a).unwrap()).unwrap();
            let top = *spec.values.last().unwrap();
            assert!((top - lmg_reduced_eigenvalue(n, na, f1)).abs() < 1e-10);
        }
        let (b, c): (Vec<usize>, Vec<usize>) = ((0..2).collect(), (2..5).collect());
        let pt = partial_transpose_spectrum(&d, &b, &c, &Tolerances::default()).unwrap();
        assert!((pt.values[0] - lmg_pt_eigenvalue(n, 2, 3, f1)).abs() < 1e-10);
    }
}

#[test]
fn fully_connected_critical_point() {
    let (n, dx, dy) = (9, 2.0, -0.5);
    let template = CouplingTemplate::FullyConnected {
        n,
        delta_plus: 0.5 * (dx + dy),
        delta_minus: 0.5 * (dx - dy),
    };
    let lc = critical_lambda(&template).unwrap().lambda_c;
    assert!((lc - lmg_critical_lambda(n, dx, dy)).abs() < 1e-9 * lc);
}

#[test]
fn cyclic_lattice_critical_point_is_exact_estimate() {
    let template = CouplingTemplate::Lattice {
        lattice: Lattice2D::new(6, 6, Boundary::Cyclic).unwrap(),
        couplings: LatticeCouplings::isotropic(1.0, 0.5),
    };
    let cp = critical_lambda(&template).unwrap();
    assert!((cp.lambda_c - cp.estimate).abs() < 1e-9 * cp.estimate);
}

#[test]
fn open_lattice_critical_point_below_estimate() {
    let template = CouplingTemplate::Lattice {
        lattice: Lattice2D::new(6, 6, Boundary::Open).unwrap(),
        couplings: LatticeCouplings::isotropic(1.0, 0.5),
    };
    let cp = critical_lambda(&template).unwrap();
    assert!(cp.lambda_c < cp.estimate);
}

#[test]
fn weak_reduced_spectrum_tracks_exact_deep_in_the_phase() {
    let lat = Lattice2D::new(10, 10, Boundary::Open).unwrap();
    let c = LatticeCouplings::isotropic(1.0, 2.0 / 3.0);
    let h = QuadraticHamiltonian::lattice(&lat, 16.0 * c.critical_estimate(), &c);
    let (_, d) = solve_ground_state(&h).unwrap();
    let a = Region::rect_block(&lat, 3, 3, 4, 4).unwrap();
    let exact = symplectic_eigenvalues(&d.restrict(a.sites()).unwrap()).unwrap();
    let est = approx_reduced_spectrum(&d, &a, &WeakOptions::default()).unwrap();
    assert!(!est.degraded);
    let s_exact = entanglement_entropy(&exact, LogBase::Two).unwrap().value;
    let s_weak = summed_entropy(&est.sigma, LogBase::Two).value;
    assert!(
        (s_exact - s_weak).abs() < 0.05 * s_exact,
        "{s_exact} {s_weak}"
    );
    // F-_{A,Ac} couples a border of 12 sites; the rest are second order
    let sv = cross_singular_values(&d, &a, &a.complement()).unwrap();
    assert!(sv[11] > 20.0 * sv[12]);
}

#[test]
fn first_neighbor_graph_degrees() {
    let lat = Lattice2D::new(5, 4, Boundary::Open).unwrap();
    let m = build_adjacency(&lat, AdjacencyKind::FirstNeighbor);
    assert_eq!(m.degree(lat.index(0, 0)), 2);
    assert_eq!(m.degree(lat.index(2, 0)), 3);
    assert_eq!(m.degree(lat.index(2, 2)), 4);
    let cyc = Lattice2D::new(5, 4, Boundary::Cyclic).unwrap();
    let m = build_adjacency(&cyc, AdjacencyKind::FirstNeighbor);
    assert!((0..20).all(|i| m.degree(i) == 4));
}
