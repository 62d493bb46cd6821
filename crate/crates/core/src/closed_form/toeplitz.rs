use faer::{c64, Mat};

use crate::lattice::Boundary;
use crate::linalg::CMat;

/// g(l) = sum_k f(k) conj f(k + l) for l = 0..len(f)-1.
pub fn autocorrelation(f: &[c64]) -> Vec<c64> {
    (0..f.len())
        .map(|l| (0..f.len() - l).map(|k| f[k] * f[k + l].conj()).sum())
        .collect()
}

/// sigma_k for the banded Toeplitz matrix A_ij = f(j - i), k = 0..n-1,
/// exact when A is circulant.
pub fn toeplitz_fourier_singulars(f: &[c64], n: usize) -> Vec<f64> {
    let g = autocorrelation(f);
    let tau = 2.0 * std::f64::consts::PI;
    (0..n)
        .map(|k| {
            let mut s2 = g.first().map_or(0.0, |g0| g0.re);
            for (l, gl) in g.iter().enumerate().skip(1) {
                let ph = tau * (k * l) as f64 / n as f64;
                s2 += 2.0 * (*gl * c64::new(ph.cos(), ph.sin())).re;
            }
            s2.max(0.0).sqrt()
        })
        .collect()
}

/// A_ij = f(j - i), wrapped modulo n when cyclic.
pub fn banded_toeplitz(f: &[c64], n: usize, boundary: Boundary) -> CMat {
    Mat::from_fn(n, n, |i, j| {
        let l = match boundary {
            Boundary::Cyclic => (j + n - i) % n,
            Boundary::Open => {
                if j < i {
                    return c64::new(0.0, 0.0);
                }
                j - i
            }
        };
        f.get(l).copied().unwrap_or(c64::new(0.0, 0.0))
    })
}
