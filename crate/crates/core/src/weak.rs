//! Weak-coupling estimates of reduced and partially transposed spectra from
//! singular values of cross blocks of F-.

use faer::{Mat, Side};
use serde::{Deserialize, Serialize};

use crate::lattice::Region;
use crate::linalg::{self, CMat};
use crate::symplectic::{
    ContractionMatrix, EntropyValue, LogBase, NegativityValue, SpectrumKind, Tolerances,
};
use crate::{Error, Result};

/// Single-mode symplectic eigenvalue and the local rotation that diagonalizes it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalMode {
    pub f: f64,
    pub u: f64,
    pub v: f64,
    /// phase of F-_ii
    pub phi: f64,
}

pub fn local_symplectic_eigenvalue(d: &ContractionMatrix, i: usize) -> Result<LocalMode> {
    local_mode(d, i, Tolerances::default().physical)
}

fn local_mode(d: &ContractionMatrix, i: usize, tol: f64) -> Result<LocalMode> {
    if i >= d.n_modes() {
        return Err(Error::OutOfBounds(format!(
            "mode {i} not in 0..{}",
            d.n_modes()
        )));
    }
    let fp = d.f_plus()[(i, i)].re;
    let fm = d.f_minus()[(i, i)];
    let rad = (0.5 + fp).powi(2) - fm.norm_sqr();
    if rad < -tol {
        return Err(Error::NonPhysical { value: rad, tol });
    }
    let f = (rad.max(0.0).sqrt() - 0.5).max(0.0);
    let den = 2.0 * f + 1.0;
    let u = ((fp + 0.5 + (f + 0.5)) / den).max(0.0).sqrt();
    let v = ((fp + 0.5 - (f + 0.5)) / den).max(0.0).sqrt();
    Ok(LocalMode {
        f,
        u,
        v,
        phi: fm.im.atan2(fm.re),
    })
}

/// Which expression is used for the second-order diagonal blocks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountertermForm {
    /// G_S = F+_S - F-_S conj(F-_S)
    Definition,
    /// G_B = F-_{B,E} conj(F-_{E,B}) with E the sites outside B and C
    #[default]
    Environment,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeakOptions {
    /// max single-mode f before the estimate is marked degraded
    pub gate: f64,
    /// fail with NotWeaklyCorrelated instead of marking degraded
    pub strict: bool,
    /// max purity residual for reduced-spectrum estimates
    pub purity_threshold: f64,
    pub form: CountertermForm,
    /// relative gap below which singular values are treated as degenerate
    pub degeneracy_tol: f64,
}

impl Default for WeakOptions {
    fn default() -> Self {
        WeakOptions {
            gate: 0.1,
            strict: false,
            purity_threshold: 1e-6,
            form: CountertermForm::Environment,
            degeneracy_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakCouplingEstimate {
    /// descending
    pub sigma: Vec<f64>,
    /// first-order PT values aligned with `sigma`
    pub corrected: Option<Vec<f64>>,
    /// per sigma: sigma > sqrt((conj G_B)_aa (G_C)_aa); empty unless corrected
    pub condition_flags: Vec<bool>,
    pub kind: SpectrumKind,
    /// outside the gate
    pub degraded: bool,
    pub max_local_f: f64,
}

impl WeakCouplingEstimate {
    /// Approximate spectrum: sigma^2 (reduced) or the PT values, aligned with `sigma`.
    pub fn values(&self) -> Vec<f64> {
        match self.kind {
            SpectrumKind::Reduced => self.sigma.iter().map(|s| s * s).collect(),
            SpectrumKind::PartialTranspose => match &self.corrected {
                Some(c) => c.clone(),
                None => self.sigma.iter().map(|s| -s).collect(),
            },
        }
    }
}

fn gate(d: &ContractionMatrix, opts: &WeakOptions) -> Result<(bool, f64)> {
    let mut max_f = 0.0f64;
    for i in 0..d.n_modes() {
        max_f = max_f.max(local_mode(d, i, Tolerances::default().physical)?.f);
    }
    if max_f > opts.gate {
        if opts.strict {
            return Err(Error::NotWeaklyCorrelated {
                max_f,
                gate: opts.gate,
            });
        }
        log::warn!("weak-coupling estimate outside gate: max local f = {max_f:.3e}");
        return Ok((true, max_f));
    }
    Ok((false, max_f))
}

/// f_a ~ sigma_a^2 with sigma the singular values of F-_{A, complement}.
pub fn approx_reduced_spectrum(
    d: &ContractionMatrix,
    a: &Region,
    opts: &WeakOptions,
) -> Result<WeakCouplingEstimate> {
    check_region(d, a)?;
    let (mut degraded, max_f) = gate(d, opts)?;
    let purity = d.purity_residual();
    if purity > opts.purity_threshold {
        if opts.strict {
            return Err(Error::InvalidArgument(format!(
                "global state is not pure: residual {purity:e}"
            )));
        }
        log::warn!("weak-coupling reduced spectrum on a mixed state (residual {purity:e})");
        degraded = true;
    }
    let ac = a.complement();
    let sigma = linalg::singular_values(&linalg::submatrix(d.f_minus(), a.sites(), ac.sites()))?;
    Ok(WeakCouplingEstimate {
        sigma,
        corrected: None,
        condition_flags: Vec::new(),
        kind: SpectrumKind::Reduced,
        degraded,
        max_local_f: max_f,
    })
}

fn check_region(d: &ContractionMatrix, r: &Region) -> Result<()> {
    if r.n_total() != d.n_modes() {
        return Err(Error::DimensionMismatch(format!(
            "region over {} sites, state has {} modes",
            r.n_total(),
            d.n_modes()
        )));
    }
    Ok(())
}

/// -sum sigma^2 log(sigma^2 / e)
pub fn approx_entropy(est: &WeakCouplingEstimate, base: LogBase) -> EntropyValue {
    let s: f64 = est
        .sigma
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

/// -2 log(e) sum over negative values.
pub fn approx_log_negativity(est: &WeakCouplingEstimate, base: LogBase) -> NegativityValue {
    let s: f64 = match est.kind {
        SpectrumKind::Reduced => est.sigma.iter().sum(),
        SpectrumKind::PartialTranspose => {
            est.values().iter().filter(|&&f| f < 0.0).map(|f| -f).sum()
        }
    };
    NegativityValue {
        value: 2.0 * s * base.from_nats(),
        base,
        diverging: false,
    }
}

#[derive(Clone, Debug)]
pub struct Counterterms {
    /// (G_B, G_C) in the definition form
    pub definition: (CMat, CMat),
    /// (G_B, G_C) in the environment form
    pub environment: (CMat, CMat),
    pub requested: CountertermForm,
}

impl Counterterms {
    pub fn selected(&self) -> &(CMat, CMat) {
        match self.requested {
            CountertermForm::Definition => &self.definition,
            CountertermForm::Environment => &self.environment,
        }
    }
}

pub fn counterterms(
    d: &ContractionMatrix,
    b: &Region,
    c: &Region,
    form: CountertermForm,
) -> Result<Counterterms> {
    check_region(d, b)?;
    check_region(d, c)?;
    b.check_disjoint(c)?;
    let env = Region::environment(b, c);
    let (fp, fm) = (d.f_plus(), d.f_minus());
    let definition = |s: &Region| {
        let fms = linalg::submatrix(fm, s.sites(), s.sites());
        linalg::submatrix(fp, s.sites(), s.sites()) - &fms * linalg::conj(&fms)
    };
    let environment = |s: &Region| {
        let x = linalg::submatrix(fm, s.sites(), env.sites());
        &x * x.adjoint()
    };
    Ok(Counterterms {
        definition: (definition(b), definition(c)),
        environment: (environment(b), environment(c)),
        requested: form,
    })
}

/// PT values -sigma_a of F-_{B,C}; at order 1 shifted by
/// [(conj G_B)_aa + (G_C)_aa]/2 in the singular bases, with degenerate
/// clusters of sigma resolved by diagonalizing the correction inside them.
pub fn approx_pt_spectrum(
    d: &ContractionMatrix,
    b: &Region,
    c: &Region,
    order: u8,
    opts: &WeakOptions,
) -> Result<WeakCouplingEstimate> {
    if order > 1 {
        return Err(Error::InvalidArgument(format!(
            "PT estimate order must be 0 or 1, got {order}"
        )));
    }
    check_region(d, b)?;
    check_region(d, c)?;
    b.check_disjoint(c)?;
    let (degraded, max_f) = gate(d, opts)?;
    let cross = linalg::submatrix(d.f_minus(), b.sites(), c.sites());
    if order == 0 || cross.nrows() == 0 || cross.ncols() == 0 {
        return Ok(WeakCouplingEstimate {
            sigma: linalg::singular_values(&cross)?,
            corrected: None,
            condition_flags: Vec::new(),
            kind: SpectrumKind::PartialTranspose,
            degraded,
            max_local_f: max_f,
        });
    }
    let (w, sigma, y) = linalg::thin_svd(&cross)?;
    let ct = counterterms(d, b, c, opts.form)?;
    let (gb, gc) = ct.selected();
    // The PT cross block is conj(F-_{B,C}); its singular vectors are
    // a = conj(w), b = conj(y).
    let a = linalg::conj(&w);
    let bv = linalg::conj(&y);
    let gb_bar = linalg::conj(gb);
    let pb = a.adjoint() * &gb_bar * &a;
    let pc = bv.adjoint() * gc * &bv;
    let k = sigma.len();
    let corr = Mat::from_fn(k, k, |i, j| (pb[(i, j)] + pc[(i, j)]) * 0.5);

    let mut corrected = vec![0.0; k];
    let smax = sigma.first().copied().unwrap_or(0.0);
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < k && sigma[end - 1] - sigma[end] <= opts.degeneracy_tol * smax + 1e-300 {
            end += 1;
        }
        if end - start == 1 {
            corrected[start] = -sigma[start] + corr[(start, start)].re;
        } else {
            let m = end - start;
            let blk = Mat::from_fn(m, m, |i, j| {
                let (x, yv) = (corr[(start + i, start + j)], corr[(start + j, start + i)]);
                (x + yv.conj()) * 0.5
            });
            let ev = blk
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| Error::NumericalFailure(format!("hermitian eigen: {e:?}")))?;
            let mean_sigma = sigma[start..end].iter().sum::<f64>() / m as f64;
            for (t, e) in ev.iter().enumerate() {
                corrected[start + t] = -mean_sigma + e;
            }
        }
        start = end;
    }
    let condition_flags = (0..k)
        .map(|i| {
            let prod = pb[(i, i)].re.max(0.0) * pc[(i, i)].re.max(0.0);
            sigma[i] > prod.sqrt()
        })
        .collect();
    Ok(WeakCouplingEstimate {
        sigma,
        corrected: Some(corrected),
        condition_flags,
        kind: SpectrumKind::PartialTranspose,
        degraded,
        max_local_f: max_f,
    })
}

/// Singular values of F-_{B,C}, descending.
pub fn cross_singular_values(d: &ContractionMatrix, b: &Region, c: &Region) -> Result<Vec<f64>> {
    b.check_disjoint(c)?;
    linalg::singular_values(&linalg::submatrix(d.f_minus(), b.sites(), c.sites()))
}
