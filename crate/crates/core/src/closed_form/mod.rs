//! Weak-coupling asymptotics for lattice geometries, pair negativities,
//! Toeplitz singular values and the exactly solvable fully connected model.

pub mod fully_connected;
pub mod geometry;
pub mod pairs;
pub mod toeplitz;

use serde::{Deserialize, Serialize};

use crate::model::LatticeCouplings;
use crate::symplectic::{EntropyValue, LogBase, NegativityValue};

pub use fully_connected::*;
pub use geometry::*;
pub use pairs::*;
pub use toeplitz::*;

/// sigma_mu = |D-_mu| / (4 lambda), sigma+_mu = |D+_mu| / (4 lambda)
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinkStrengths {
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub sigma_plus_x: f64,
    pub sigma_plus_y: f64,
}

/// Above this the asymptotic forms are not trustworthy.
pub const LINK_STRENGTH_WARN: f64 = 0.25;

impl LinkStrengths {
    pub fn new(c: &LatticeCouplings, lambda: f64) -> Self {
        let k = 1.0 / (4.0 * lambda);
        let s = LinkStrengths {
            sigma_x: c.delta_minus_x.abs() * k,
            sigma_y: c.delta_minus_y.abs() * k,
            sigma_plus_x: c.delta_plus_x.abs() * k,
            sigma_plus_y: c.delta_plus_y.abs() * k,
        };
        if s.max() > LINK_STRENGTH_WARN {
            log::warn!(
                "link strength {:.3} outside the weak-coupling regime",
                s.max()
            );
        }
        s
    }

    pub fn isotropic(sigma: f64, sigma_plus: f64) -> Self {
        LinkStrengths {
            sigma_x: sigma,
            sigma_y: sigma,
            sigma_plus_x: sigma_plus,
            sigma_plus_y: sigma_plus,
        }
    }

    pub fn is_isotropic(&self) -> bool {
        self.sigma_x == self.sigma_y && self.sigma_plus_x == self.sigma_plus_y
    }

    fn max(&self) -> f64 {
        self.sigma_x
            .max(self.sigma_y)
            .max(self.sigma_plus_x)
            .max(self.sigma_plus_y)
    }
}

/// -sum sigma^2 log(sigma^2 / e) over a list of singular values.
pub fn summed_entropy(sigmas: &[f64], base: LogBase) -> EntropyValue {
    let s: f64 = sigmas
        .iter()
        .filter(|&&s| s > 0.0)
        .map(|&s| {
            let x = s * s;
            -x * (x.ln() - 1.0)
        })
        .sum();
    EntropyValue {
        value: s * base.from_nats(),
        base,
    }
}

/// 2 log(e) sum sigma
pub fn summed_negativity(sigmas: &[f64], base: LogBase) -> NegativityValue {
    let s: f64 = sigmas.iter().sum();
    NegativityValue {
        value: 2.0 * s * base.from_nats(),
        base,
        diverging: false,
    }
}

/// (n / 2 pi) * integral over [0, 2 pi) of a periodic f, by the trapezoid
/// rule (spectrally accurate for smooth periodic integrands).
pub fn periodic_integral_sum(n: f64, f: impl Fn(f64) -> f64) -> f64 {
    const POINTS: usize = 1 << 14;
    let h = 2.0 * std::f64::consts::PI / POINTS as f64;
    let s: f64 = (0..POINTS).map(|k| f(k as f64 * h)).sum();
    n * s / POINTS as f64
}
