use serde::{Deserialize, Serialize};

use super::{periodic_integral_sum, summed_entropy, summed_negativity, LinkStrengths};
use crate::symplectic::{EntropyValue, LogBase, NegativityValue};
use crate::{Error, Result};

/// Subsystem shapes with known first-order singular values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Geometry {
    SingleSite,
    /// nx x ny block aligned with the axes
    RectBlock {
        nx: usize,
        ny: usize,
    },
    /// diamond with n sites along each side
    TiltedBlock {
        n: usize,
    },
    /// one sublattice of a cyclic nx x ny lattice
    Checkerboard {
        nx: usize,
        ny: usize,
    },
}

/// Singular values with multiplicities.
pub fn geometry_singulars_grouped(geom: Geometry, s: &LinkStrengths) -> Result<Vec<(f64, usize)>> {
    let (sx, sy) = (s.sigma_x, s.sigma_y);
    Ok(match geom {
        Geometry::SingleSite => vec![((2.0 * (sx * sx + sy * sy)).sqrt(), 1)],
        Geometry::RectBlock { nx, ny } => {
            if nx < 2 || ny < 2 {
                return Err(Error::InvalidArgument(
                    "rect block needs nx, ny >= 2".into(),
                ));
            }
            // horizontal sides cut y-links, vertical sides cut x-links
            vec![
                (sy, 2 * (nx - 2)),
                (sx, 2 * (ny - 2)),
                ((sx * sx + sy * sy).sqrt(), 4),
            ]
        }
        Geometry::TiltedBlock { n } => {
            if n < 2 {
                return Err(Error::InvalidArgument("tilted block needs n >= 2".into()));
            }
            let m = 4 * n - 4;
            (1..=m)
                .map(|k| (tilted_sigma(sx, sy, k as f64, m as f64), 1))
                .collect()
        }
        Geometry::Checkerboard { nx, ny } => {
            if nx % 2 != 0 || ny % 2 != 0 {
                return Err(Error::InvalidArgument(
                    "checkerboard needs even nx, ny".into(),
                ));
            }
            let tau = 2.0 * std::f64::consts::PI;
            let mut v = Vec::with_capacity(nx * ny / 2);
            for kx in 1..=nx {
                for ky in 1..=ny / 2 {
                    let c = sx * (tau * kx as f64 / nx as f64).cos()
                        + sy * (tau * ky as f64 / ny as f64).cos();
                    v.push((2.0 * c.abs(), 1));
                }
            }
            v
        }
    })
}

/// sqrt(sx^2 + sy^2 + 2 sx sy cos(2 pi k / m))
pub fn tilted_sigma(sx: f64, sy: f64, k: f64, m: f64) -> f64 {
    let c = (2.0 * std::f64::consts::PI * k / m).cos();
    (sx * sx + sy * sy + 2.0 * sx * sy * c).max(0.0).sqrt()
}

/// Flattened singular values; length equals the number of border modes.
pub fn geometry_singulars(geom: Geometry, s: &LinkStrengths) -> Result<Vec<f64>> {
    Ok(geometry_singulars_grouped(geom, s)?
        .into_iter()
        .flat_map(|(v, m)| std::iter::repeat_n(v, m))
        .collect())
}

pub const ALPHA: f64 = std::f64::consts::E / 2.0;
pub const BETA: f64 = 2.0 * std::f64::consts::SQRT_2 / std::f64::consts::PI;

/// L border modes, m cut links per border mode, geometric class j.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryForm {
    #[serde(rename = "L")]
    pub l: f64,
    pub m: f64,
    pub j: i32,
}

impl GeometryForm {
    /// Isotropic asymptotic table; `n` is the block side (ignored for a site).
    pub fn for_geometry(geom: Geometry) -> Result<Self> {
        Ok(match geom {
            Geometry::SingleSite => GeometryForm {
                l: 1.0,
                m: 4.0,
                j: 0,
            },
            Geometry::RectBlock { nx, ny } => {
                if nx != ny {
                    return Err(Error::InvalidArgument(
                        "asymptotic table covers square blocks only".into(),
                    ));
                }
                GeometryForm {
                    l: 4.0 * nx as f64,
                    m: 1.0,
                    j: 0,
                }
            }
            Geometry::TiltedBlock { n } => GeometryForm {
                l: 4.0 * n as f64,
                m: 2.0,
                j: 1,
            },
            Geometry::Checkerboard { nx, ny } => {
                if nx != ny {
                    return Err(Error::InvalidArgument(
                        "asymptotic table covers square checkerboards only".into(),
                    ));
                }
                GeometryForm {
                    l: (nx * nx) as f64 / 2.0,
                    m: 4.0,
                    j: 2,
                }
            }
        })
    }

    /// |dA|_2 = L m
    pub fn measure_2(&self) -> f64 {
        self.l * self.m
    }

    /// |dA|_1 = L sqrt(m) beta^j
    pub fn measure_1(&self) -> f64 {
        self.l * self.m.sqrt() * BETA.powi(self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GenericForm {
    pub entropy: EntropyValue,
    pub negativity: NegativityValue,
    /// negativity / (2 log e) = |dA|_1 sigma
    pub scaled_negativity: f64,
    pub measure_1: f64,
    pub measure_2: f64,
}

/// -L m s^2 log(alpha^j m s^2 / e) and 2 log(e) L sqrt(m) beta^j s.
pub fn generic_form(gf: &GeometryForm, sigma: f64, base: LogBase) -> GenericForm {
    let x = gf.m * sigma * sigma;
    let entropy = if sigma == 0.0 {
        0.0
    } else {
        -gf.l * x * base.log(ALPHA.powi(gf.j) * x / std::f64::consts::E)
    };
    let scaled = gf.measure_1() * sigma;
    GenericForm {
        entropy: EntropyValue {
            value: entropy,
            base,
        },
        negativity: NegativityValue {
            value: 2.0 * base.log_e() * scaled,
            base,
            diverging: false,
        },
        scaled_negativity: scaled,
        measure_1: gf.measure_1(),
        measure_2: gf.measure_2(),
    }
}

/// How the asymptotic value is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticMode {
    /// isotropic closed forms with sums over k replaced by integrals
    #[default]
    ClosedForm,
    /// exact sum over `geometry_singulars` (finite size, corners included)
    Summation,
}

/// Closed forms are isotropic; anisotropic strengths fall back to summation
/// except for the tilted block, which is integrated.
pub fn asymptotic_entropy(
    geom: Geometry,
    s: &LinkStrengths,
    mode: AsymptoticMode,
    base: LogBase,
) -> Result<EntropyValue> {
    match mode {
        AsymptoticMode::Summation => Ok(summed_entropy(&geometry_singulars(geom, s)?, base)),
        AsymptoticMode::ClosedForm => {
            if s.sigma_x == s.sigma_y {
                Ok(generic_form(&GeometryForm::for_geometry(geom)?, s.sigma_x, base).entropy)
            } else if let Geometry::TiltedBlock { n } = geom {
                // 4n border modes, matching the isotropic table
                let m = 4.0 * n as f64;
                let v = periodic_integral_sum(m, |u| {
                    let x =
                        tilted_sigma(s.sigma_x, s.sigma_y, u, 2.0 * std::f64::consts::PI).powi(2);
                    if x > 0.0 {
                        -x * (x.ln() - 1.0)
                    } else {
                        0.0
                    }
                });
                Ok(EntropyValue {
                    value: v * base.from_nats(),
                    base,
                })
            } else {
                Ok(summed_entropy(&geometry_singulars(geom, s)?, base))
            }
        }
    }
}

pub fn asymptotic_negativity(
    geom: Geometry,
    s: &LinkStrengths,
    mode: AsymptoticMode,
    base: LogBase,
) -> Result<NegativityValue> {
    match mode {
        AsymptoticMode::Summation => Ok(summed_negativity(&geometry_singulars(geom, s)?, base)),
        AsymptoticMode::ClosedForm => {
            if s.sigma_x == s.sigma_y {
                Ok(generic_form(&GeometryForm::for_geometry(geom)?, s.sigma_x, base).negativity)
            } else if let Geometry::TiltedBlock { n } = geom {
                // 4n border modes, matching the isotropic table
                let m = 4.0 * n as f64;
                let v = periodic_integral_sum(m, |u| {
                    tilted_sigma(s.sigma_x, s.sigma_y, u, 2.0 * std::f64::consts::PI)
                });
                Ok(NegativityValue {
                    value: 2.0 * v * base.from_nats(),
                    base,
                    diverging: false,
                })
            } else {
                Ok(summed_negativity(&geometry_singulars(geom, s)?, base))
            }
        }
    }
}

/// Finite n x n parallel block with its four corners:
/// -4(n-1) s^2 log(s^2/e) - 4 s^2 log(4 s^2/e).
pub fn corner_corrected_block_entropy(n: usize, sigma: f64, base: LogBase) -> EntropyValue {
    let x = sigma * sigma;
    let e = std::f64::consts::E;
    let v = if x == 0.0 {
        0.0
    } else {
        -4.0 * (n as f64 - 1.0) * x * base.log(x / e) - 4.0 * x * base.log(4.0 * x / e)
    };
    EntropyValue { value: v, base }
}

/// 2 log(e) [4(n-1) s + 4(sqrt2 - 1) s]
pub fn corner_corrected_block_negativity(n: usize, sigma: f64, base: LogBase) -> NegativityValue {
    let scaled = 4.0 * (n as f64 - 1.0) * sigma + 4.0 * (std::f64::consts::SQRT_2 - 1.0) * sigma;
    NegativityValue {
        value: 2.0 * base.log_e() * scaled,
        base,
        diverging: false,
    }
}
