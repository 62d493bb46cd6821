//! Exact Gaussian-state kernel: contraction matrices, symplectic spectra,
//! partial transposes, entropy and logarithmic negativity.

use faer::{c64, Mat};
use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMat};
use crate::{Error, Result};

/// Logarithm base used for entropies and negativities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogBase {
    /// bits
    #[default]
    #[serde(rename = "2")]
    Two,
    /// nats
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    /// Multiply a natural-log quantity by this to express it in the base.
    pub fn from_nats(self) -> f64 {
        match self {
            LogBase::Two => std::f64::consts::LOG2_E,
            LogBase::E => 1.0,
        }
    }

    /// log(e) in this base.
    pub fn log_e(self) -> f64 {
        self.from_nats()
    }

    pub fn log(self, x: f64) -> f64 {
        x.ln() * self.from_nats()
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" => Ok(LogBase::E),
            other => Err(Error::InvalidArgument(format!(
                "log base must be 2 or e, got {other}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// lower bound slack for physical spectra
    pub physical: f64,
    /// max mismatch between f and -(1+f) partners
    pub pairing: f64,
    /// max discarded imaginary part
    pub imaginary: f64,
    /// hermiticity / symmetry residual, relative to max(1, max|entry|)
    pub symmetry: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            physical: 1e-9,
            pairing: 1e-8,
            imaginary: 1e-8,
            symmetry: 1e-12,
        }
    }
}

/// The pair expectations F+_ij = <b_j^dag b_i> and F-_ij = <b_i b_j> of a
/// zero-mean Gaussian state.
#[derive(Clone, Debug)]
pub struct ContractionMatrix {
    f_plus: CMat,
    f_minus: CMat,
}

impl ContractionMatrix {
    /// Checks hermiticity of F+ and symmetry of F- with default tolerances.
    pub fn new(f_plus: CMat, f_minus: CMat) -> Result<Self> {
        Self::with_tolerance(f_plus, f_minus, Tolerances::default().symmetry)
    }

    pub fn with_tolerance(f_plus: CMat, f_minus: CMat, tol: f64) -> Result<Self> {
        let n = f_plus.nrows();
        linalg::check_square(&f_plus, n, "F+")?;
        linalg::check_square(&f_minus, n, "F-")?;
        let scale = 1f64
            .max(linalg::max_abs(&f_plus))
            .max(linalg::max_abs(&f_minus));
        let r = linalg::hermitian_residual(&f_plus);
        if !(r <= tol * scale) {
            return Err(Error::SymmetryViolation {
                what: "F+ (hermitian)",
                residual: r,
            });
        }
        let r = linalg::symmetric_residual(&f_minus);
        if !(r <= tol * scale) {
            return Err(Error::SymmetryViolation {
                what: "F- (symmetric)",
                residual: r,
            });
        }
        Ok(ContractionMatrix { f_plus, f_minus })
    }

    /// Symmetrizes the inputs instead of rejecting small residuals. Used for
    /// solver outputs where roundoff breaks exact symmetry.
    pub(crate) fn symmetrized(f_plus: &CMat, f_minus: &CMat) -> Self {
        ContractionMatrix {
            f_plus: linalg::hermitian_part(f_plus),
            f_minus: linalg::symmetric_part(f_minus),
        }
    }

    pub fn vacuum(n: usize) -> Self {
        ContractionMatrix {
            f_plus: linalg::zeros(n, n),
            f_minus: linalg::zeros(n, n),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.f_plus.nrows()
    }

    pub fn f_plus(&self) -> &CMat {
        &self.f_plus
    }

    pub fn f_minus(&self) -> &CMat {
        &self.f_minus
    }

    pub fn is_real(&self) -> bool {
        linalg::is_real(&self.f_plus, 0.0) && linalg::is_real(&self.f_minus, 0.0)
    }

    fn check_indices(&self, idx: &[usize]) -> Result<()> {
        let n = self.n_modes();
        let mut seen = vec![false; n];
        for &i in idx {
            if i >= n {
                return Err(Error::OutOfBounds(format!("mode {i} not in 0..{n}")));
            }
            if seen[i] {
                return Err(Error::Overlap(i));
            }
            seen[i] = true;
        }
        Ok(())
    }

    /// Contraction matrix of the reduced state on `modes`, in the given order.
    pub fn restrict(&self, modes: &[usize]) -> Result<Self> {
        self.check_indices(modes)?;
        Ok(ContractionMatrix {
            f_plus: linalg::submatrix(&self.f_plus, modes, modes),
            f_minus: linalg::submatrix(&self.f_minus, modes, modes),
        })
    }

    /// The 2n x 2n matrix [[F+, F-], [conj F-, 1 + conj F+]].
    pub fn full_matrix(&self) -> CMat {
        let n = self.n_modes();
        Mat::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => self.f_plus[(i, j)],
            (true, false) => self.f_minus[(i, j - n)],
            (false, true) => self.f_minus[(i - n, j)].conj(),
            (false, false) => {
                let d = if i == j { 1.0 } else { 0.0 };
                self.f_plus[(i - n, j - n)].conj() + c64::new(d, 0.0)
            }
        })
    }

    /// max |F- conj(F-) - F+ - (F+)^2|; zero for pure states.
    pub fn purity_residual(&self) -> f64 {
        let fm = &self.f_minus;
        let fp = &self.f_plus;
        let r = fm * linalg::conj(fm) - fp - fp * fp;
        linalg::max_abs(&r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpectrumKind {
    Reduced,
    PartialTranspose,
}

impl SpectrumKind {
    fn name(self) -> &'static str {
        match self {
            SpectrumKind::Reduced => "Reduced",
            SpectrumKind::PartialTranspose => "PartialTranspose",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SymplecticSpectrum {
    /// ascending
    pub values: Vec<f64>,
    pub kind: SpectrumKind,
    /// max |y_k + y_{2n-1-k}| over the shifted eigenvalues y = lambda + 1/2
    pub pairing_residual: f64,
}

impl SymplecticSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Option<f64> {
        self.values.first().copied()
    }

    /// Wraps externally computed values, validating the kind's lower bound.
    pub fn from_values(mut values: Vec<f64>, kind: SpectrumKind, tol: f64) -> Result<Self> {
        let floor = match kind {
            SpectrumKind::Reduced => 0.0,
            SpectrumKind::PartialTranspose => -0.5,
        };
        for v in values.iter_mut() {
            if !v.is_finite() || *v < floor - tol {
                return Err(Error::NonPhysical { value: *v, tol });
            }
            if *v < floor {
                *v = floor;
            }
        }
        values.sort_by(f64::total_cmp);
        Ok(SymplecticSpectrum {
            values,
            kind,
            pairing_residual: 0.0,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyValue {
    pub value: f64,
    pub base: LogBase,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NegativityValue {
    pub value: f64,
    pub base: LogBase,
    /// some value sat at the -1/2 floor and was clamped
    pub diverging: bool,
}

/// Symplectic eigenvalues of a reduced (physical) state with default tolerances.
pub fn symplectic_eigenvalues(d: &ContractionMatrix) -> Result<SymplecticSpectrum> {
    symplectic_spectrum(d, SpectrumKind::Reduced, &Tolerances::default())
}

/// Eigenvalues of D*M come in pairs (f, -(1+f)). Shifting by 1/2 makes the
/// pairs (y, -y); the n largest y give f = y - 1/2.
pub fn symplectic_spectrum(
    d: &ContractionMatrix,
    kind: SpectrumKind,
    tol: &Tolerances,
) -> Result<SymplecticSpectrum> {
    let n = d.n_modes();
    if n == 0 {
        return Ok(SymplecticSpectrum {
            values: Vec::new(),
            kind,
            pairing_residual: 0.0,
        });
    }
    let full = d.full_matrix();
    // D*M with M = diag(1, -1): negate the right half of the columns,
    // then shift by 1/2.
    let shifted = |i: usize, j: usize, v: c64| {
        let s = if j < n { v } else { -v };
        if i == j {
            s + c64::new(0.5, 0.0)
        } else {
            s
        }
    };
    let eig: Vec<c64> = if d.is_real() {
        let dm = Mat::<f64>::from_fn(2 * n, 2 * n, |i, j| shifted(i, j, full[(i, j)]).re);
        dm.eigenvalues()
            .map_err(|e| Error::NumericalFailure(format!("eigen: {e:?}")))?
            .into_iter()
            .map(|z| c64::new(z.re, z.im))
            .collect()
    } else {
        let dm = Mat::<c64>::from_fn(2 * n, 2 * n, |i, j| shifted(i, j, full[(i, j)]));
        dm.eigenvalues()
            .map_err(|e| Error::NumericalFailure(format!("eigen: {e:?}")))?
    };

    let mut ys: Vec<f64> = Vec::with_capacity(2 * n);
    for z in &eig {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NumericalFailure("non-finite eigenvalue".into()));
        }
        if z.im.abs() > tol.imaginary * 1f64.max(z.re.abs()) {
            return Err(Error::NumericalFailure(format!(
                "eigenvalue {} + {}i has imaginary part above {:e}",
                z.re - 0.5,
                z.im,
                tol.imaginary
            )));
        }
        ys.push(z.re);
    }
    ys.sort_by(|a, b| b.total_cmp(a));
    let mut pairing = 0.0f64;
    for k in 0..n {
        let (a, b) = (ys[k], ys[2 * n - 1 - k]);
        pairing = pairing.max((a + b).abs() / 1f64.max(a.abs()));
    }
    if pairing > tol.pairing {
        return Err(Error::NumericalFailure(format!(
            "eigenvalues of D*M do not pair: residual {pairing:e}"
        )));
    }

    let floor = match kind {
        SpectrumKind::Reduced => 0.0,
        SpectrumKind::PartialTranspose => -0.5,
    };
    let mut values = Vec::with_capacity(n);
    for &y in &ys[..n] {
        let f = y - 0.5;
        if f < floor - tol.physical {
            return Err(Error::NonPhysical {
                value: f,
                tol: tol.physical,
            });
        }
        values.push(if f < floor { floor } else { f });
    }
    values.sort_by(f64::total_cmp);
    Ok(SymplecticSpectrum {
        values,
        kind,
        pairing_residual: pairing,
    })
}

/// Contraction matrix of the partial transpose on `b` of the state restricted
/// to b followed by c. Output mode order: b then c.
pub fn partial_transpose(
    d: &ContractionMatrix,
    b: &[usize],
    c: &[usize],
) -> Result<ContractionMatrix> {
    let all: Vec<usize> = b.iter().chain(c.iter()).copied().collect();
    d.check_indices(&all)?;
    let nb = b.len();
    let m = all.len();
    let fp = &d.f_plus;
    let fm = &d.f_minus;
    let build = |same: &CMat, other: &CMat| {
        Mat::from_fn(m, m, |i, j| {
            let (gi, gj) = (all[i], all[j]);
            match (i < nb, j < nb) {
                (true, true) => same[(gi, gj)].conj(),
                (true, false) => other[(gi, gj)].conj(),
                (false, true) => other[(gi, gj)],
                (false, false) => same[(gi, gj)],
            }
        })
    };
    Ok(ContractionMatrix {
        f_plus: build(fp, fm),
        f_minus: build(fm, fp),
    })
}

/// Spectrum of the partial transpose on b of the (b, c) reduced state.
pub fn partial_transpose_spectrum(
    d: &ContractionMatrix,
    b: &[usize],
    c: &[usize],
    tol: &Tolerances,
) -> Result<SymplecticSpectrum> {
    let pt = partial_transpose(d, b, c)?;
    symplectic_spectrum(&pt, SpectrumKind::PartialTranspose, tol)
}

/// h(x) = -x ln x + (1+x) ln(1+x), in nats; h(0) = 0.
pub fn h(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    -x * x.ln() + (1.0 + x) * x.ln_1p()
}

/// g(x) = -ln(1 + 2x), in nats.
pub fn g(x: f64) -> f64 {
    -(2.0 * x).ln_1p()
}

fn expect_kind(spec: &SymplecticSpectrum, kind: SpectrumKind) -> Result<()> {
    if spec.kind != kind {
        return Err(Error::WrongKind {
            expected: kind.name(),
            got: spec.kind.name(),
        });
    }
    Ok(())
}

pub fn entanglement_entropy(spec: &SymplecticSpectrum, base: LogBase) -> Result<EntropyValue> {
    expect_kind(spec, SpectrumKind::Reduced)?;
    let s: f64 = spec.values.iter().map(|&f| h(f.max(0.0))).sum();
    Ok(EntropyValue {
        value: s * base.from_nats(),
        base,
    })
}

pub const DIVERGENCE_EPS: f64 = 1e-12;

pub fn log_negativity(spec: &SymplecticSpectrum, base: LogBase) -> Result<NegativityValue> {
    expect_kind(spec, SpectrumKind::PartialTranspose)?;
    let mut diverging = false;
    let mut s = 0.0;
    for &f in &spec.values {
        if f >= 0.0 {
            continue;
        }
        let f = if f <= -0.5 {
            diverging = true;
            -0.5 + DIVERGENCE_EPS
        } else {
            f
        };
        s += g(f);
    }
    Ok(NegativityValue {
        value: s * base.from_nats(),
        base,
        diverging,
    })
}

/// 2 sum log(sqrt f + sqrt(1+f)) = 2 sum asinh(sqrt f); valid when the
/// global state is pure and the spectrum is of one side of the cut.
pub fn pure_bipartition_log_negativity(
    spec: &SymplecticSpectrum,
    base: LogBase,
) -> Result<NegativityValue> {
    expect_kind(spec, SpectrumKind::Reduced)?;
    let s: f64 = spec
        .values
        .iter()
        .map(|&f| 2.0 * f.max(0.0).sqrt().asinh())
        .sum();
    Ok(NegativityValue {
        value: s * base.from_nats(),
        base,
        diverging: false,
    })
}

/// Reduced spectrum of `a` when the global state is pure. Purity turns the
/// A block of (DM)(DM + 1) into -D_{A,Ac} M D_{Ac,A} M, whose eigenvalues
/// f(1+f) are then known to the precision of the small cross blocks instead
/// of that of the O(1) diagonal. Use for the sqrt(f) in
/// `pure_bipartition_log_negativity`, where noise in tiny f dominates.
pub fn pure_state_reduced_spectrum(
    d: &ContractionMatrix,
    a: &[usize],
    tol: &Tolerances,
) -> Result<SymplecticSpectrum> {
    d.check_indices(a)?;
    let n = d.n_modes();
    let mut inside = vec![false; n];
    for &i in a {
        inside[i] = true;
    }
    let ac: Vec<usize> = (0..n).filter(|&i| !inside[i]).collect();
    let double = |s: &[usize]| -> Vec<usize> { s.iter().chain(s).copied().collect() };
    let (ra, rc) = (double(a), double(&ac));
    let (na, nc) = (a.len(), ac.len());
    if na == 0 {
        return SymplecticSpectrum::from_values(Vec::new(), SpectrumKind::Reduced, tol.physical);
    }
    if nc == 0 {
        return SymplecticSpectrum::from_values(vec![0.0; na], SpectrumKind::Reduced, tol.physical);
    }
    let full = d.full_matrix();
    // sign of M and offset into the 2n index space
    let at = |rows: &[usize], nr: usize, cols: &[usize], nk: usize, i: usize, j: usize| {
        let gi = rows[i] + if i < nr { 0 } else { n };
        let gj = cols[j] + if j < nk { 0 } else { n };
        let s = if j < nk { 1.0 } else { -1.0 };
        full[(gi, gj)] * s
    };
    let x = Mat::from_fn(2 * na, 2 * nc, |i, j| at(&ra, na, &rc, nc, i, j));
    let y = Mat::from_fn(2 * nc, 2 * na, |i, j| at(&rc, nc, &ra, na, i, j));
    let w = -(&x * &y);
    let eig: Vec<c64> = if d.is_real() {
        linalg::real_part(&w)
            .eigenvalues()
            .map_err(|e| Error::NumericalFailure(format!("eigen: {e:?}")))?
            .into_iter()
            .map(|z| c64::new(z.re, z.im))
            .collect()
    } else {
        w.eigenvalues()
            .map_err(|e| Error::NumericalFailure(format!("eigen: {e:?}")))?
    };
    let scale = 1f64.max(linalg::max_abs(&w));
    let mut xs = Vec::with_capacity(2 * na);
    for z in eig {
        if !(z.im.abs() <= tol.imaginary * scale) {
            return Err(Error::NumericalFailure(format!(
                "eigenvalue {} + {}i has imaginary part above {:e}",
                z.re, z.im, tol.imaginary
            )));
        }
        xs.push(z.re);
    }
    xs.sort_by(|p, q| q.total_cmp(p));
    // each f(1+f) appears twice
    let values = xs
        .chunks(2)
        .map(|p| {
            let v = 0.5 * (p[0] + p[1]);
            2.0 * v / (1.0 + (1.0 + 4.0 * v.max(-0.25)).sqrt())
        })
        .collect();
    SymplecticSpectrum::from_values(values, SpectrumKind::Reduced, tol.physical)
}

pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    linalg::singular_values(a)
}

/// Schatten norm: m = 1 (trace), 2 (Frobenius) or infinity (spectral).
pub fn matrix_norm(a: &CMat, m: f64) -> Result<f64> {
    let s = singular_values(a)?;
    if m == 1.0 {
        Ok(s.iter().sum())
    } else if m == 2.0 {
        Ok(s.iter().map(|x| x * x).sum::<f64>().sqrt())
    } else if m == f64::INFINITY {
        Ok(s.first().copied().unwrap_or(0.0))
    } else {
        Err(Error::UnsupportedNorm(m.to_string()))
    }
}
