use serde::{Deserialize, Serialize};

use super::{periodic_integral_sum, tilted_sigma, LinkStrengths};
use crate::lattice::Orientation;
use crate::symplectic::{LogBase, NegativityValue};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairFlag {
    /// separation >= 2, or the leading second-order term is not positive
    VanishesAtThisOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairNegativity {
    pub negativity: NegativityValue,
    /// sum over border modes of max(0, -f~)
    pub scaled: f64,
    pub flag: Option<PairFlag>,
}

/// How sums over the contact surface are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSum {
    /// (n / 2 pi) * integral
    #[default]
    Integral,
    /// sum over k = 1..n
    Discrete,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PairOptions {
    pub sum: PairSum,
    /// add the -2 sigma^2 edge term (parallel pairs, s = 1)
    pub edge_correction: bool,
}

/// Asymptotic log-negativity between two blocks of width `depth` with an
/// n-site contact surface, separated by `separation` empty layers.
/// Parallel pairs are stacked along x; tilted pairs along the diagonal.
pub fn pair_negativity(
    orientation: Orientation,
    n: usize,
    s: &LinkStrengths,
    separation: usize,
    depth: usize,
    opts: &PairOptions,
    base: LogBase,
) -> Result<PairNegativity> {
    if depth == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "pair needs n >= 1 and depth >= 1".into(),
        ));
    }
    let nf = n as f64;
    let line = depth == 1;
    let scaled = match (separation, orientation) {
        (0, Orientation::Parallel) => nf * s.sigma_x,
        (0, Orientation::Tilted) => sum_over_k(n, opts.sum, |u| {
            tilted_sigma(s.sigma_x, s.sigma_y, u, 2.0 * std::f64::consts::PI)
        }),
        (1, Orientation::Parallel) => {
            let k = if line { 2.0 } else { 1.0 };
            let per_mode = 2.0 * s.sigma_plus_x * s.sigma_x - k * s.sigma_x * s.sigma_x;
            let mut v = nf * per_mode.max(0.0);
            if opts.edge_correction && v > 0.0 {
                v = (v - 2.0 * s.sigma_x * s.sigma_x).max(0.0);
            }
            v
        }
        (1, Orientation::Tilted) => {
            let k = if line { 2.0 } else { 1.0 };
            sum_over_k(n, opts.sum, |u| (-tilted_s1_eigenvalue(s, u, k)).max(0.0))
        }
        _ => 0.0,
    };
    let flag = (scaled <= 0.0).then_some(PairFlag::VanishesAtThisOrder);
    Ok(PairNegativity {
        negativity: NegativityValue {
            value: 2.0 * base.log_e() * scaled,
            base,
            diverging: false,
        },
        scaled,
        flag,
    })
}

fn sum_over_k(n: usize, mode: PairSum, f: impl Fn(f64) -> f64) -> f64 {
    match mode {
        PairSum::Integral => periodic_integral_sum(n as f64, f),
        PairSum::Discrete => {
            let tau = 2.0 * std::f64::consts::PI;
            (1..=n).map(|k| f(tau * k as f64 / n as f64)).sum()
        }
    }
}

/// Second-order PT eigenvalue of mode u for tilted pairs one layer apart;
/// `sq_weight` is 1 for blocks and 2 for lines.
pub fn tilted_s1_eigenvalue(s: &LinkStrengths, u: f64, sq_weight: f64) -> f64 {
    let ax = s.sigma_plus_x * s.sigma_x;
    let ay = s.sigma_plus_y * s.sigma_y;
    let axy = s.sigma_plus_x * s.sigma_y + s.sigma_plus_y * s.sigma_x;
    let r = axy * axy
        + ax * ax
        + ay * ay
        + 2.0 * axy * (ax + ay) * u.cos()
        + 2.0 * ax * ay * (2.0 * u).cos();
    let sk2 = s.sigma_x * s.sigma_x + s.sigma_y * s.sigma_y + 2.0 * s.sigma_x * s.sigma_y * u.cos();
    -(2.0 * r.max(0.0).sqrt() - sq_weight * sk2)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = 0.01;
    const SP: f64 = 0.015;

    fn run(o: Orientation, sep: usize, depth: usize, sum: PairSum) -> PairNegativity {
        let opts = PairOptions {
            sum,
            edge_correction: false,
        };
        pair_negativity(
            o,
            10,
            &LinkStrengths::isotropic(S, SP),
            sep,
            depth,
            &opts,
            LogBase::Two,
        )
        .unwrap()
    }

    #[test]
    fn contiguous_parallel() {
        let r = run(Orientation::Parallel, 0, 10, PairSum::Integral);
        assert!((r.negativity.value - 10.0 * S * 2.0 * std::f64::consts::LOG2_E).abs() < 1e-15);
        assert!(r.flag.is_none());
    }

    #[test]
    fn tilted_parallel_ratios() {
        let r0 = run(Orientation::Tilted, 0, 10, PairSum::Integral).scaled
            / run(Orientation::Parallel, 0, 10, PairSum::Integral).scaled;
        assert!((r0 - 4.0 / std::f64::consts::PI).abs() < 1e-7);
        let r1 = run(Orientation::Tilted, 1, 10, PairSum::Integral).scaled
            / run(Orientation::Parallel, 1, 10, PairSum::Integral).scaled;
        assert!((r1 - 2.0).abs() < 1e-7);
    }

    #[test]
    fn separated_block_and_line_values() {
        let n = 10.0;
        assert!(
            (run(Orientation::Parallel, 1, 10, PairSum::Integral).scaled - n * S * (2.0 * SP - S))
                .abs()
                < 1e-15
        );
        assert!(
            (run(Orientation::Tilted, 1, 10, PairSum::Integral).scaled
                - 2.0 * n * S * (2.0 * SP - S))
                .abs()
                < 1e-13
        );
        assert!(
            (run(Orientation::Parallel, 1, 1, PairSum::Integral).scaled
                - n * S * (2.0 * SP - 2.0 * S))
                .abs()
                < 1e-15
        );
        assert!(
            (run(Orientation::Tilted, 1, 1, PairSum::Integral).scaled
                - 2.0 * n * S * (2.0 * SP - 2.0 * S))
                .abs()
                < 1e-13
        );
    }

    #[test]
    fn isotropic_tilted_mode_is_cos_squared() {
        let s = LinkStrengths::isotropic(S, SP);
        for k in 0..8 {
            let u = k as f64 * 0.7;
            let want = -4.0 * S * (2.0 * SP - S) * (u / 2.0).cos().powi(2);
            assert!((tilted_s1_eigenvalue(&s, u, 1.0) - want).abs() < 1e-16);
        }
    }

    #[test]
    fn discrete_tilted_s1_sum_is_exact_for_cos_squared() {
        let a = run(Orientation::Tilted, 1, 10, PairSum::Discrete).scaled;
        let b = run(Orientation::Tilted, 1, 10, PairSum::Integral).scaled;
        assert!((a / b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lines_vanish_when_sigma_exceeds_sigma_plus() {
        let s = LinkStrengths::isotropic(0.02, 0.015);
        for o in [Orientation::Parallel, Orientation::Tilted] {
            let r =
                pair_negativity(o, 10, &s, 1, 1, &PairOptions::default(), LogBase::Two).unwrap();
            assert_eq!(r.negativity.value, 0.0);
            assert_eq!(r.flag, Some(PairFlag::VanishesAtThisOrder));
            // blocks survive up to sigma = 2 sigma+
            let b =
                pair_negativity(o, 10, &s, 1, 4, &PairOptions::default(), LogBase::Two).unwrap();
            assert!(b.negativity.value > 0.0);
        }
    }

    #[test]
    fn far_separation_is_flagged() {
        let r = run(Orientation::Parallel, 2, 10, PairSum::Integral);
        assert_eq!(r.scaled, 0.0);
        assert_eq!(r.flag, Some(PairFlag::VanishesAtThisOrder));
    }

    #[test]
    fn edge_correction_lowers_parallel_value() {
        let s = LinkStrengths::isotropic(S, SP);
        let opts = PairOptions {
            sum: PairSum::Integral,
            edge_correction: true,
        };
        let r = pair_negativity(Orientation::Parallel, 10, &s, 1, 10, &opts, LogBase::E).unwrap();
        assert!((r.scaled - (10.0 * S * (2.0 * SP - S) - 2.0 * S * S)).abs() < 1e-16);
    }
}
