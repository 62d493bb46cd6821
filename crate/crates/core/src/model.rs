//! Quadratic boson Hamiltonians and their Gaussian ground and thermal states.

use faer::{c64, Mat, Side};
use serde::{Deserialize, Serialize};

use crate::lattice::{Axis, Lattice2D};
use crate::linalg::{self, CMat};
use crate::symplectic::ContractionMatrix;
use crate::{Error, Result};

/// Nearest-neighbour couplings of a square lattice, per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeCouplings {
    pub delta_plus_x: f64,
    pub delta_plus_y: f64,
    pub delta_minus_x: f64,
    pub delta_minus_y: f64,
}

impl LatticeCouplings {
    pub fn isotropic(delta_plus: f64, delta_minus: f64) -> Self {
        LatticeCouplings {
            delta_plus_x: delta_plus,
            delta_plus_y: delta_plus,
            delta_minus_x: delta_minus,
            delta_minus_y: delta_minus,
        }
    }

    /// sum over axes of |D+| + |D-|; exact lambda_c on cyclic lattices
    pub fn critical_estimate(&self) -> f64 {
        self.delta_plus_x.abs()
            + self.delta_plus_y.abs()
            + self.delta_minus_x.abs()
            + self.delta_minus_y.abs()
    }
}

/// H = sum_i lambda_i b_i^dag b_i - sum_ij [D+_ij b_i^dag b_j + (D-_ij b_i^dag b_j^dag + h.c.)/2]
/// written as the 2n x 2n form [[L - D+, -D-], [-conj D-, L - conj D+]].
#[derive(Clone, Debug)]
pub struct QuadraticHamiltonian {
    lambda: Vec<f64>,
    delta_plus: CMat,
    delta_minus: CMat,
}

impl QuadraticHamiltonian {
    pub fn new(lambda: Vec<f64>, delta_plus: CMat, delta_minus: CMat) -> Result<Self> {
        let n = lambda.len();
        linalg::check_square(&delta_plus, n, "D+")?;
        linalg::check_square(&delta_minus, n, "D-")?;
        let scale = 1f64
            .max(linalg::max_abs(&delta_plus))
            .max(linalg::max_abs(&delta_minus));
        let r = linalg::hermitian_residual(&delta_plus);
        if !(r <= 1e-12 * scale) {
            return Err(Error::SymmetryViolation {
                what: "D+ (hermitian)",
                residual: r,
            });
        }
        let r = linalg::symmetric_residual(&delta_minus);
        if !(r <= 1e-12 * scale) {
            return Err(Error::SymmetryViolation {
                what: "D- (symmetric)",
                residual: r,
            });
        }
        if lambda.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidArgument("non-finite local energy".into()));
        }
        Ok(QuadraticHamiltonian {
            lambda,
            delta_plus,
            delta_minus,
        })
    }

    /// D_ij = sum_mu (D_mu / 2)(delta_{i, j+u_mu} + delta_{i, j-u_mu}), with
    /// wrapped terms counted as often as they occur.
    pub fn lattice(lat: &Lattice2D, lambda: f64, c: &LatticeCouplings) -> Self {
        let n = lat.n_sites();
        let mut dp = linalg::zeros(n, n);
        let mut dm = linalg::zeros(n, n);
        for j in 0..n {
            for (axis, p, m) in [
                (Axis::X, c.delta_plus_x, c.delta_minus_x),
                (Axis::Y, c.delta_plus_y, c.delta_minus_y),
            ] {
                for step in [-1, 1] {
                    if let Some(i) = lat.neighbor(j, axis, step) {
                        dp[(i, j)] += c64::new(0.5 * p, 0.0);
                        dm[(i, j)] += c64::new(0.5 * m, 0.0);
                    }
                }
            }
        }
        QuadraticHamiltonian {
            lambda: vec![lambda; n],
            delta_plus: dp,
            delta_minus: dm,
        }
    }

    /// D_ij = (1 - delta_ij) D / (n - 1)
    pub fn fully_connected(
        n: usize,
        lambda: f64,
        delta_plus: f64,
        delta_minus: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(
                "fully connected model needs n >= 2".into(),
            ));
        }
        let k = 1.0 / (n - 1) as f64;
        let off =
            |d: f64| Mat::from_fn(n, n, |i, j| c64::new(if i == j { 0.0 } else { d * k }, 0.0));
        Ok(QuadraticHamiltonian {
            lambda: vec![lambda; n],
            delta_plus: off(delta_plus),
            delta_minus: off(delta_minus),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn delta_plus(&self) -> &CMat {
        &self.delta_plus
    }

    pub fn delta_minus(&self) -> &CMat {
        &self.delta_minus
    }

    pub fn is_real(&self) -> bool {
        linalg::is_real(&self.delta_plus, 0.0) && linalg::is_real(&self.delta_minus, 0.0)
    }

    /// Common local energy, if all lambda_i agree to 1e-12 (relative).
    pub fn uniform_lambda(&self) -> Result<f64> {
        let l0 = *self
            .lambda
            .first()
            .ok_or_else(|| Error::InvalidArgument("no modes".into()))?;
        let spread = self
            .lambda
            .iter()
            .map(|l| (l - l0).abs())
            .fold(0.0, f64::max);
        if spread > 1e-12 * 1f64.max(l0.abs()) {
            return Err(Error::UnequalLocalEnergies(spread));
        }
        Ok(l0)
    }

    /// The 2n x 2n hermitian form.
    pub fn matrix(&self) -> CMat {
        let n = self.n_modes();
        let (dp, dm) = (&self.delta_plus, &self.delta_minus);
        Mat::from_fn(2 * n, 2 * n, |i, j| {
            let diag = |k: usize| {
                if i == j {
                    c64::new(self.lambda[k], 0.0)
                } else {
                    c64::new(0.0, 0.0)
                }
            };
            match (i < n, j < n) {
                (true, true) => diag(i) - dp[(i, j)],
                (true, false) => -dm[(i, j - n)],
                (false, true) => -dm[(i - n, j)].conj(),
                (false, false) => diag(i - n) - dp[(i - n, j - n)].conj(),
            }
        })
    }
}

/// Normal-mode transformation b = U beta + conj(V) beta^dag style blocks,
/// with the symplectic constraints U^dag U - V^t conj(V) = 1 and
/// U^dag V - V^t conj(U) = 0.
#[derive(Clone, Debug)]
pub struct BogoliubovTransform {
    pub u: CMat,
    pub v: CMat,
    /// ascending
    pub omega: Vec<f64>,
}

impl BogoliubovTransform {
    /// (max |U^dag U - V^t conj V - 1|, max |U^dag V - V^t conj U|)
    pub fn symplectic_residuals(&self) -> (f64, f64) {
        let (u, v) = (&self.u, &self.v);
        let (ub, vb) = (linalg::conj(u), linalg::conj(v));
        let n = u.nrows();
        let r1 = u.adjoint() * u - v.transpose() * &vb - Mat::<c64>::identity(n, n);
        let r2 = u.adjoint() * v - v.transpose() * &ub;
        (linalg::max_abs(&r1), linalg::max_abs(&r2))
    }
}

const OMEGA_FLOOR: f64 = 1e-10;

macro_rules! colpa_impl {
    ($name:ident, $t:ty, $to_c:expr) => {
        /// Colpa's method: H = L L^dag, then the hermitian matrix L^dag M L has
        /// eigenvalues +-omega; T = (L^dag)^-1 X sqrt(omega) holds the
        /// positive-frequency normal modes.
        fn $name(hm: Mat<$t>, n: usize) -> Result<(CMat, Vec<f64>)> {
            let llt = hm
                .llt(Side::Lower)
                .map_err(|_| Error::Unstable("quadratic form is not positive definite".into()))?;
            let l = llt.L().to_owned();
            let mut ml = l.clone();
            for j in 0..2 * n {
                for i in n..2 * n {
                    ml[(i, j)] = -ml[(i, j)];
                }
            }
            let a = l.adjoint() * &ml;
            let a = Mat::<$t>::from_fn(
                2 * n,
                2 * n,
                |i, j| {
                    if i >= j {
                        a[(i, j)]
                    } else {
                        a[(j, i)]
                    }
                },
            );
            let eig = a
                .self_adjoint_eigen(Side::Lower)
                .map_err(|e| Error::NumericalFailure(format!("hermitian eigen: {e:?}")))?;
            let s = eig.S().column_vector();
            let omega: Vec<f64> = (n..2 * n).map(|k| $to_c(s[k]).re).collect();
            if let Some(&w) = omega.first() {
                if !(w > OMEGA_FLOOR) {
                    return Err(Error::Unstable(format!("lowest normal-mode energy {w:e}")));
                }
            }
            let mut t = Mat::<$t>::from_fn(2 * n, n, |i, j| eig.U()[(i, n + j)]);
            l.adjoint().solve_upper_triangular_in_place(t.as_mut());
            let t = Mat::<c64>::from_fn(2 * n, n, |i, j| $to_c(t[(i, j)]) * omega[j].sqrt());
            Ok((t, omega))
        }
    };
}

colpa_impl!(colpa_real, f64, |x: f64| c64::new(x, 0.0));
colpa_impl!(colpa_complex, c64, |x: c64| x);

/// Exact normal modes and pure ground-state contractions F- = V U^t, F+ = V V^dag.
pub fn solve_ground_state(
    h: &QuadraticHamiltonian,
) -> Result<(BogoliubovTransform, ContractionMatrix)> {
    let t = bogoliubov_transform(h)?;
    let d = thermal_contractions(&t, f64::INFINITY);
    Ok((t, d))
}

pub fn bogoliubov_transform(h: &QuadraticHamiltonian) -> Result<BogoliubovTransform> {
    let n = h.n_modes();
    if n == 0 {
        return Err(Error::InvalidArgument("no modes".into()));
    }
    let hm = h.matrix();
    let (t, omega) = if h.is_real() {
        colpa_real(linalg::real_part(&hm), n)?
    } else {
        colpa_complex(hm, n)?
    };
    let u = Mat::from_fn(n, n, |i, j| t[(i, j)]);
    let v = Mat::from_fn(n, n, |i, j| t[(n + i, j)].conj());
    Ok(BogoliubovTransform { u, v, omega })
}

/// Bose occupation 1 / (e^{beta w} - 1); zero at beta = infinity.
pub fn bose_occupation(beta: f64, omega: f64) -> f64 {
    if beta.is_infinite() {
        0.0
    } else {
        1.0 / (beta * omega).exp_m1()
    }
}

/// F- = V U^t + V F' U^t + U F' V^t and F+ = V V^dag + V F' V^dag + U F' U^dag
/// with diagonal normal-mode occupations F'.
pub fn thermal_contractions(t: &BogoliubovTransform, beta: f64) -> ContractionMatrix {
    let (u, v) = (&t.u, &t.v);
    let n = u.nrows();
    let occ: Vec<f64> = t.omega.iter().map(|&w| bose_occupation(beta, w)).collect();
    let scale = |m: &CMat, f: &dyn Fn(usize) -> f64| Mat::from_fn(n, n, |i, j| m[(i, j)] * f(j));
    let fm;
    let fp;
    if occ.iter().all(|&o| o == 0.0) {
        fm = v * u.transpose();
        fp = v * v.adjoint();
    } else {
        let vf = scale(v, &|j| 1.0 + occ[j]);
        let uf = scale(u, &|j| occ[j]);
        fm = &vf * u.transpose() + &uf * v.transpose();
        fp = &vf * v.adjoint() + &uf * u.adjoint();
    }
    ContractionMatrix::symmetrized(&fp, &fm)
}

/// Warn above this |D|/lambda; reject at `PERTURBATIVE_LIMIT`.
pub const PERTURBATIVE_WARN: f64 = 0.2;
pub const PERTURBATIVE_LIMIT: f64 = 0.5;

fn row_sum_norm(a: &CMat) -> f64 {
    (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn perturbative_ratio(h: &QuadraticHamiltonian, lambda: f64) -> Result<f64> {
    let ratio = row_sum_norm(&h.delta_plus).max(row_sum_norm(&h.delta_minus)) / lambda;
    if !(ratio < PERTURBATIVE_LIMIT) {
        return Err(Error::CouplingTooStrong(ratio));
    }
    if ratio > PERTURBATIVE_WARN {
        log::warn!("perturbative contractions at |D|/lambda = {ratio:.3}");
    }
    Ok(ratio)
}

/// F- to first order D-/(2 lambda), optionally plus (D+ D- + D- conj D+)/(4 lambda^2);
/// F+ = F- conj(F-).
pub fn perturbative_contractions(h: &QuadraticHamiltonian, order: u8) -> Result<ContractionMatrix> {
    if order != 1 && order != 2 {
        return Err(Error::InvalidArgument(format!(
            "perturbative order must be 1 or 2, got {order}"
        )));
    }
    let lambda = h.uniform_lambda()?;
    perturbative_ratio(h, lambda)?;
    let (dp, dm) = (&h.delta_plus, &h.delta_minus);
    let mut fm = Mat::from_fn(dm.nrows(), dm.ncols(), |i, j| dm[(i, j)] / (2.0 * lambda));
    if order == 2 {
        let second = dp * dm + dm * linalg::conj(dp);
        fm += Mat::from_fn(dm.nrows(), dm.ncols(), |i, j| {
            second[(i, j)] / (4.0 * lambda * lambda)
        });
    }
    let fp = &fm * linalg::conj(&fm);
    Ok(ContractionMatrix::symmetrized(&fp, &fm))
}

/// First-order normal modes: U diagonalizes L - D+ with energies omega, and
/// V = U X with X_ab = (U^dag D- conj U)_ab / (omega_a + omega_b).
pub fn perturbative_bogoliubov_v(h: &QuadraticHamiltonian) -> Result<BogoliubovTransform> {
    let n = h.n_modes();
    let a = Mat::from_fn(n, n, |i, j| {
        let d = if i == j {
            c64::new(h.lambda[i], 0.0)
        } else {
            c64::new(0.0, 0.0)
        };
        d - h.delta_plus[(i, j)]
    });
    let eig = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("hermitian eigen: {e:?}")))?;
    let omega: Vec<f64> = (0..n).map(|k| eig.S().column_vector()[k].re).collect();
    if let Some(&w) = omega.first() {
        if !(w > 0.0) {
            return Err(Error::Unstable(format!("L - D+ has eigenvalue {w:e}")));
        }
    }
    let u = eig.U().to_owned();
    let m = u.adjoint() * &h.delta_minus * linalg::conj(&u);
    let x = Mat::from_fn(n, n, |a, b| m[(a, b)] / (omega[a] + omega[b]));
    let v = &u * x;
    Ok(BogoliubovTransform { u, v, omega })
}

/// Coupling structure with the uniform local energy left free.
#[derive(Clone, Debug)]
pub enum CouplingTemplate {
    Lattice {
        lattice: Lattice2D,
        couplings: LatticeCouplings,
    },
    FullyConnected {
        n: usize,
        delta_plus: f64,
        delta_minus: f64,
    },
    Explicit {
        delta_plus: CMat,
        delta_minus: CMat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub lambda_c: f64,
    /// closed-form estimate: sum_mu (|D+_mu| + |D-_mu|) on lattices,
    /// |D+| + |D-| for the fully connected model
    pub estimate: f64,
}

impl CouplingTemplate {
    pub fn hamiltonian(&self, lambda: f64) -> Result<QuadraticHamiltonian> {
        match self {
            CouplingTemplate::Lattice { lattice, couplings } => {
                Ok(QuadraticHamiltonian::lattice(lattice, lambda, couplings))
            }
            CouplingTemplate::FullyConnected {
                n,
                delta_plus,
                delta_minus,
            } => QuadraticHamiltonian::fully_connected(*n, lambda, *delta_plus, *delta_minus),
            CouplingTemplate::Explicit {
                delta_plus,
                delta_minus,
            } => QuadraticHamiltonian::new(
                vec![lambda; delta_plus.nrows()],
                delta_plus.clone(),
                delta_minus.clone(),
            ),
        }
    }

    pub fn estimate(&self) -> f64 {
        match self {
            CouplingTemplate::Lattice { couplings, .. } => couplings.critical_estimate(),
            CouplingTemplate::FullyConnected {
                delta_plus,
                delta_minus,
                ..
            } => delta_plus.abs() + delta_minus.abs(),
            CouplingTemplate::Explicit {
                delta_plus,
                delta_minus,
            } => row_sum_norm(delta_plus) + row_sum_norm(delta_minus),
        }
    }
}

fn positive_definite(h: &QuadraticHamiltonian) -> bool {
    let hm = h.matrix();
    if h.is_real() {
        linalg::real_part(&hm).llt(Side::Lower).is_ok()
    } else {
        hm.llt(Side::Lower).is_ok()
    }
}

/// Bisection on positive definiteness of the quadratic form, which fails
/// exactly where the lowest normal-mode energy reaches zero.
pub fn critical_lambda(template: &CouplingTemplate) -> Result<CriticalPoint> {
    let estimate = template.estimate();
    let probe = template.hamiltonian(0.0)?;
    // |lambda_max| of the coupling form is bounded by the row-sum norm
    let bound = row_sum_norm(probe.delta_plus()) + row_sum_norm(probe.delta_minus());
    if bound == 0.0 {
        return Err(Error::NoCriticalPoint);
    }
    let (mut lo, mut hi) = (0.0, 1.01 * bound);
    if positive_definite(&template.hamiltonian(lo)?) {
        return Err(Error::NoCriticalPoint);
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        if positive_definite(&template.hamiltonian(mid)?) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalPoint {
        lambda_c: hi,
        estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use crate::symplectic::symplectic_eigenvalues;

    fn two_modes(lambda: f64, dm12: f64) -> QuadraticHamiltonian {
        let dm = Mat::from_fn(2, 2, |i, j| c64::new(if i != j { dm12 } else { 0.0 }, 0.0));
        QuadraticHamiltonian::new(vec![lambda; 2], linalg::zeros(2, 2), dm).unwrap()
    }

    #[test]
    fn uncoupled_oscillators() {
        let h = QuadraticHamiltonian::new(vec![1.5; 3], linalg::zeros(3, 3), linalg::zeros(3, 3))
            .unwrap();
        let (t, d) = solve_ground_state(&h).unwrap();
        assert!(t.omega.iter().all(|&w| (w - 1.5).abs() < 1e-14));
        assert!(linalg::max_abs(d.f_plus()) < 1e-15 && linalg::max_abs(d.f_minus()) < 1e-15);
        assert!(linalg::max_abs(&t.v) < 1e-15);
        assert!(linalg::max_abs(&(&t.u * t.u.adjoint() - Mat::<c64>::identity(3, 3))) < 1e-14);
    }

    /// b_pm = (b1 +- b2)/sqrt2 decouple into single modes with lambda and
    /// squeezing -+D/2 ... each has omega = sqrt(lambda^2 - D^2), sinh 2r = D/omega.
    #[test]
    fn two_mode_oracle() {
        let (l, d) = (1.0, 0.2);
        let (t, c) = solve_ground_state(&two_modes(l, d)).unwrap();
        let w = (l * l - d * d).sqrt();
        assert!(t.omega.iter().all(|&x| (x - w).abs() < 1e-12));
        assert!((w - 0.9797958971).abs() < 1e-9);
        // single mode w/ lambda, pairing g: <b b> = g/(2w), <b^dag b> = (lambda/w - 1)/2
        // for b_pm the pairing is +-d, so F-_12 = (F-_++ - F-_--)/2 = d/(2w), F-_11 = 0
        let fm = c.f_minus();
        assert!((fm[(0, 1)].re - d / (2.0 * w)).abs() < 1e-12);
        assert!((fm[(0, 1)].re - 0.10206).abs() < 1e-5);
        assert!(fm[(0, 0)].norm() < 1e-12);
        assert!((c.f_plus()[(0, 0)].re - 0.5 * (l / w - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn two_mode_weak_coupling_matches_first_order() {
        let (_, c) = solve_ground_state(&two_modes(10.0, 0.2)).unwrap();
        assert!((c.f_minus()[(0, 1)].re - 0.01).abs() < 1e-4);
        let p = perturbative_contractions(&two_modes(10.0, 0.2), 1).unwrap();
        assert!((p.f_minus()[(0, 1)].re - 0.01).abs() < 1e-15);
    }

    #[test]
    fn unstable_is_rejected() {
        assert!(matches!(
            solve_ground_state(&two_modes(0.1, 0.2)),
            Err(Error::Unstable(_))
        ));
    }

    #[test]
    fn lattice_symplectic_and_purity() {
        let lat = Lattice2D::new(6, 6, Boundary::Open).unwrap();
        let c = LatticeCouplings::isotropic(1.0, 2.0 / 3.0);
        let h = QuadraticHamiltonian::lattice(&lat, 2.0 * c.critical_estimate(), &c);
        let (t, d) = solve_ground_state(&h).unwrap();
        let (r1, r2) = t.symplectic_residuals();
        assert!(r1 < 1e-10 && r2 < 1e-10, "{r1:e} {r2:e}");
        assert!(d.purity_residual() < 1e-10);
        let full = symplectic_eigenvalues(&d).unwrap();
        assert!(full.values.iter().all(|&f| f < 1e-9));
    }

    #[test]
    fn complex_hamiltonian_solves() {
        let n = 3;
        let dp = Mat::from_fn(n, n, |i, j| {
            if i == j {
                c64::new(0.0, 0.0)
            } else if i < j {
                c64::new(0.1, 0.05)
            } else {
                c64::new(0.1, -0.05)
            }
        });
        let dm = Mat::from_fn(n, n, |i, j| c64::new(0.1 + 0.01 * (i + j) as f64, 0.03));
        let h = QuadraticHamiltonian::new(vec![1.0; n], dp, dm).unwrap();
        let (t, d) = solve_ground_state(&h).unwrap();
        let (r1, r2) = t.symplectic_residuals();
        assert!(r1 < 1e-12 && r2 < 1e-12);
        assert!(d.purity_residual() < 1e-12);
    }

    #[test]
    fn thermal_free_modes() {
        let t = BogoliubovTransform {
            u: Mat::identity(2, 2),
            v: linalg::zeros(2, 2),
            omega: vec![1.0, 2.0],
        };
        let d = thermal_contractions(&t, 0.5);
        assert!((d.f_plus()[(0, 0)].re - 1.0 / (0.5f64).exp_m1()).abs() < 1e-14);
        assert!((d.f_plus()[(1, 1)].re - 1.0 / (1.0f64).exp_m1()).abs() < 1e-14);
        assert_eq!(linalg::max_abs(d.f_minus()), 0.0);
    }

    #[test]
    fn thermal_spectrum_is_bose_occupations() {
        let lat = Lattice2D::new(3, 3, Boundary::Open).unwrap();
        let c = LatticeCouplings::isotropic(1.0, 0.5);
        let h = QuadraticHamiltonian::lattice(&lat, 4.0, &c);
        let t = bogoliubov_transform(&h).unwrap();
        let beta = 0.7;
        let spec = symplectic_eigenvalues(&thermal_contractions(&t, beta)).unwrap();
        let mut want: Vec<f64> = t.omega.iter().map(|&w| bose_occupation(beta, w)).collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in spec.values.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "{a} {b}");
        }
    }

    #[test]
    fn perturbative_preconditions() {
        let h = QuadraticHamiltonian::new(vec![1.0, 2.0], linalg::zeros(2, 2), linalg::zeros(2, 2))
            .unwrap();
        assert!(matches!(
            perturbative_contractions(&h, 1),
            Err(Error::UnequalLocalEnergies(_))
        ));
        assert!(matches!(
            perturbative_contractions(&two_modes(1.0, 0.6), 1),
            Err(Error::CouplingTooStrong(_))
        ));
        let zero = perturbative_contractions(&two_modes(1.0, 0.0), 1).unwrap();
        assert_eq!(
            linalg::max_abs(zero.f_plus()) + linalg::max_abs(zero.f_minus()),
            0.0
        );
    }

    #[test]
    fn perturbative_v_without_pairing_is_zero() {
        let dp = Mat::from_fn(2, 2, |i, j| c64::new(if i != j { 0.3 } else { 0.0 }, 0.0));
        let h = QuadraticHamiltonian::new(vec![1.0; 2], dp, linalg::zeros(2, 2)).unwrap();
        let t = perturbative_bogoliubov_v(&h).unwrap();
        assert_eq!(linalg::max_abs(&t.v), 0.0);
        // the eigenbasis mixes the degenerate sites
        assert!(t.u[(0, 0)].norm() > 0.5 && t.u[(0, 1)].norm() > 0.5);
    }

    #[test]
    fn cyclic_critical_point_is_exact_estimate() {
        let lat = Lattice2D::new(6, 6, Boundary::Cyclic).unwrap();
        let t = CouplingTemplate::Lattice {
            lattice: lat,
            couplings: LatticeCouplings::isotropic(0.3, 0.2),
        };
        let cp = critical_lambda(&t).unwrap();
        assert!((cp.lambda_c - 1.0).abs() < 1e-10, "{}", cp.lambda_c);
        assert!((cp.estimate - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vacuum_has_no_critical_point() {
        let lat = Lattice2D::new(3, 3, Boundary::Open).unwrap();
        let t = CouplingTemplate::Lattice {
            lattice: lat,
            couplings: LatticeCouplings::isotropic(0.0, 0.0),
        };
        assert!(matches!(critical_lambda(&t), Err(Error::NoCriticalPoint)));
    }

    #[test]
    fn non_symmetric_pairing_rejected() {
        let dm = Mat::from_fn(2, 2, |i, j| {
            c64::new(if i == 0 && j == 1 { 0.2 } else { 0.0 }, 0.0)
        });
        let err = QuadraticHamiltonian::new(vec![1.0; 2], linalg::zeros(2, 2), dm).unwrap_err();
        assert!(matches!(err, Error::SymmetryViolation { .. }));
    }
}
