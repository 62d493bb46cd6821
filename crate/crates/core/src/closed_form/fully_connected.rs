//! Exact and weak-coupling results for n modes coupled uniformly,
//! D+-_ij = (1 - delta_ij) D+- / (n - 1).

use crate::{Error, Result};

/// lambda below which the uniform model has no stable ground state.
pub fn lmg_critical_lambda(n: usize, dx: f64, dy: f64) -> f64 {
    let k = 1.0 / (n as f64 - 1.0);
    dx.max(dy).max(-dx * k).max(-dy * k)
}

fn frequencies(n: usize, lambda: f64, dx: f64, dy: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "fully connected model needs n >= 2".into(),
        ));
    }
    let lc = lmg_critical_lambda(n, dx, dy);
    if lambda <= lc {
        return Err(Error::Unstable(format!("lambda = {lambda} <= {lc}")));
    }
    let k = 1.0 / (n as f64 - 1.0);
    let w0 = ((lambda - dx) * (lambda - dy)).sqrt();
    let w1 = ((lambda + dx * k) * (lambda + dy * k)).sqrt();
    Ok((w0, w1))
}

/// Exact off-diagonal F+_1 for axis couplings (D_x, D_y), D+- = (D_x +- D_y)/2.
pub fn lmg_f1(n: usize, lambda: f64, dx: f64, dy: f64) -> Result<f64> {
    let (w0, w1) = frequencies(n, lambda, dx, dy)?;
    let nf = n as f64;
    let wbar = (w0 + (nf - 1.0) * w1) / nf;
    Ok(nf * (lambda * lambda - wbar * wbar) / (4.0 * (nf - 1.0) * w0 * w1))
}

/// |F-_1| from the purity constraint F+_1^2 + F+_1/n = (F-_1)^2.
pub fn lmg_f1_minus(n: usize, f1_plus: f64) -> f64 {
    (f1_plus * f1_plus + f1_plus / n as f64).max(0.0).sqrt()
}

/// First order in D-: F-_1 ~ D- / (2 (n-1) lambda).
pub fn lmg_weak_f1_minus(n: usize, lambda: f64, delta_minus: f64) -> f64 {
    delta_minus / (2.0 * (n as f64 - 1.0) * lambda)
}

/// The single nonzero symplectic eigenvalue of an n_a-mode subsystem.
pub fn lmg_reduced_eigenvalue(n: usize, n_a: usize, f1_plus: f64) -> f64 {
    let na = n_a as f64;
    let nb = n as f64 - na;
    (0.25 + f1_plus * na * nb / n as f64).sqrt() - 0.5
}

/// The single negative partial-transpose eigenvalue for disjoint B, C.
pub fn lmg_pt_eigenvalue(n: usize, n_b: usize, n_c: usize, f1_plus: f64) -> f64 {
    let nf = n as f64;
    let (nb, nc) = (n_b as f64, n_c as f64);
    let beta = nb * nc / nf;
    let gamma = 0.5 * (nb + nc) * (nf - nb - nc) / nf + 2.0 * beta;
    let inner = (f1_plus * (beta + gamma * gamma * f1_plus)).max(0.0).sqrt();
    (0.25 + gamma * f1_plus - inner).max(0.0).sqrt() - 0.5
}

/// sqrt(n_b n_c) |F-_1|
pub fn lmg_weak_cross_sigma(n_b: usize, n_c: usize, f1_minus: f64) -> f64 {
    ((n_b * n_c) as f64).sqrt() * f1_minus.abs()
}

/// n_a (n - n_a) (F-_1)^2
pub fn lmg_weak_reduced(n: usize, n_a: usize, f1_minus: f64) -> f64 {
    (n_a * (n - n_a)) as f64 * f1_minus * f1_minus
}

/// -sqrt(n_b n_c)|F-_1| + |F-_1|^2 (n_b (n - n_b) + n_c (n - n_c)) / 2
pub fn lmg_weak_pt(n: usize, n_b: usize, n_c: usize, f1_minus: f64) -> f64 {
    let env = (n_b * (n - n_b) + n_c * (n - n_c)) as f64;
    -lmg_weak_cross_sigma(n_b, n_c, f1_minus) + 0.5 * f1_minus * f1_minus * env
}

/// (sigma_1, sigma_0) for an L-mode block with F_ij = F0 delta_ij + F1;
/// sigma_0 is (L-1)-fold degenerate.
pub fn lmg_reduced_sigma_pair(
    l: usize,
    f0p: f64,
    f0m: f64,
    f1p: f64,
    f1m: f64,
) -> Result<(f64, f64)> {
    let lf = l as f64;
    let r1 = (f0p + lf * f1p + 0.5).powi(2) - (f0m + lf * f1m).powi(2);
    let r0 = (f0p + 0.5).powi(2) - f0m * f0m;
    for r in [r1, r0] {
        if r < 0.0 {
            return Err(Error::NonPhysical { value: r, tol: 0.0 });
        }
    }
    Ok((r1.sqrt() - 0.5, r0.sqrt() - 0.5))
}
