//! C ABI over the gaussent kernel.
//!
//! Every fallible function returns a `GeStatus`; on anything but `GE_STATUS_OK` the
//! message is available from `ge_last_error_message` on the same thread.
//! Handles are opaque and owned by the caller until passed to the matching
//! `_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use faer::{c64, Mat};
use gaussent::model::{critical_lambda, CouplingTemplate, LatticeCouplings};
use gaussent::symplectic::{
    entanglement_entropy, log_negativity, partial_transpose_spectrum, symplectic_eigenvalues,
};
use gaussent::{
    solve_ground_state, Boundary, ContractionMatrix, Error, Lattice2D, LogBase,
    QuadraticHamiltonian, SymplecticSpectrum, Tolerances,
};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NonPhysical = 3,
    Numerical = 4,
    Unstable = 5,
    BufferTooSmall = 6,
    Panic = 7,
    Other = 8,
}

pub const GE_LOG_BASE_2: u32 = 0;
pub const GE_LOG_BASE_E: u32 = 1;

/// Opaque Gaussian state given by its pair contractions.
pub struct GeContraction {
    inner: ContractionMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GeStatus {
    match e {
        Error::NonPhysical { .. } => GeStatus::NonPhysical,
        Error::NumericalFailure(_) => GeStatus::Numerical,
        Error::Unstable(_) | Error::NoCriticalPoint => GeStatus::Unstable,
        Error::SymmetryViolation { .. }
        | Error::Overlap(_)
        | Error::OutOfBounds(_)
        | Error::DimensionMismatch(_)
        | Error::InvalidArgument(_)
        | Error::UnequalLocalEnergies(_) => GeStatus::InvalidArgument,
        _ => GeStatus::Other,
    }
}

enum Fail {
    Status(GeStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(GeStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GeStatus::Ok,
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic");
            GeStatus::Panic
        }
    }
}

fn base(b: u32) -> Result<LogBase, Fail> {
    match b {
        GE_LOG_BASE_2 => Ok(LogBase::Two),
        GE_LOG_BASE_E => Ok(LogBase::E),
        _ => Err(Fail::Status(
            GeStatus::InvalidArgument,
            format!("unknown log base {b}"),
        )),
    }
}

unsafe fn contraction<'a>(d: *const GeContraction) -> Result<&'a ContractionMatrix, Fail> {
    d.as_ref()
        .map(|d| &d.inner)
        .ok_or_else(|| null("contraction"))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn emit(d: ContractionMatrix, out: *mut *mut GeContraction) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(GeContraction { inner: d }));
    Ok(())
}

unsafe fn write_values(
    spec: &SymplecticSpectrum,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> Result<(), Fail> {
    if out_len.is_null() {
        return Err(null("out_len"));
    }
    *out_len = spec.values.len();
    if cap < spec.values.len() {
        return Err(Fail::Status(
            GeStatus::BufferTooSmall,
            format!("need {} values, buffer holds {cap}", spec.values.len()),
        ));
    }
    if !spec.values.is_empty() {
        if buf.is_null() {
            return Err(null("buf"));
        }
        ptr::copy_nonoverlapping(spec.values.as_ptr(), buf, spec.values.len());
    }
    Ok(())
}

fn lattice(nx: usize, ny: usize, cyclic: bool) -> Result<Lattice2D, Fail> {
    let b = if cyclic {
        Boundary::Cyclic
    } else {
        Boundary::Open
    };
    Ok(Lattice2D::new(nx, ny, b)?)
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn ge_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread; empty if none. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ge_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Ground state of the isotropic nearest-neighbour lattice model with
/// uniform local energy `lambda`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ge_lattice_ground_state(
    nx: usize,
    ny: usize,
    cyclic: bool,
    delta_plus: f64,
    delta_minus: f64,
    lambda: f64,
    out: *mut *mut GeContraction,
) -> GeStatus {
    guard(|| {
        let lat = lattice(nx, ny, cyclic)?;
        let c = LatticeCouplings::isotropic(delta_plus, delta_minus);
        let (_, d) = solve_ground_state(&QuadraticHamiltonian::lattice(&lat, lambda, &c))?;
        emit(d, out)
    })
}

/// Ground state of n uniformly coupled modes.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ge_fully_connected_ground_state(
    n: usize,
    lambda: f64,
    delta_plus: f64,
    delta_minus: f64,
    out: *mut *mut GeContraction,
) -> GeStatus {
    guard(|| {
        let h = QuadraticHamiltonian::fully_connected(n, lambda, delta_plus, delta_minus)?;
        emit(solve_ground_state(&h)?.1, out)
    })
}

/// Lowest stable local energy of the isotropic lattice model.
///
/// # Safety
/// `out` must point to writable storage for one double.
#[no_mangle]
pub unsafe extern "C" fn ge_lattice_critical_lambda(
    nx: usize,
    ny: usize,
    cyclic: bool,
    delta_plus: f64,
    delta_minus: f64,
    out: *mut f64,
) -> GeStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let template = CouplingTemplate::Lattice {
            lattice: lattice(nx, ny, cyclic)?,
            couplings: LatticeCouplings::isotropic(delta_plus, delta_minus),
        };
        *out = critical_lambda(&template)?.lambda_c;
        Ok(())
    })
}

/// State from row-major n x n arrays. The imaginary parts may be null.
///
/// # Safety
/// Each non-null array must hold n * n doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ge_contraction_new(
    n: usize,
    f_plus_re: *const f64,
    f_plus_im: *const f64,
    f_minus_re: *const f64,
    f_minus_im: *const f64,
    out: *mut *mut GeContraction,
) -> GeStatus {
    guard(|| {
        let len = n
            .checked_mul(n)
            .ok_or_else(|| Fail::Status(GeStatus::InvalidArgument, "n too large".into()))?;
        let read = |re: *const f64, im: *const f64, what: &str| -> Result<Mat<c64>, Fail> {
            let re = slice(re, len, what)?;
            let im = if im.is_null() {
                None
            } else {
                Some(slice(im, len, what)?)
            };
            Ok(Mat::from_fn(n, n, |i, j| {
                let k = i * n + j;
                c64::new(re[k], im.map_or(0.0, |v| v[k]))
            }))
        };
        let fp = read(f_plus_re, f_plus_im, "f_plus_re")?;
        let fm = read(f_minus_re, f_minus_im, "f_minus_re")?;
        emit(ContractionMatrix::new(fp, fm)?, out)
    })
}

/// # Safety
/// `d` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ge_contraction_free(d: *mut GeContraction) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of modes, 0 for a null handle.
///
/// # Safety
/// `d` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ge_contraction_n_modes(d: *const GeContraction) -> usize {
    d.as_ref().map_or(0, |d| d.inner.n_modes())
}

/// Symplectic eigenvalues of the state reduced to `modes`, ascending.
/// `out_len` always receives the required length.
///
/// # Safety
/// `modes` holds `n_modes` indices; `buf` holds `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ge_symplectic_eigenvalues(
    d: *const GeContraction,
    modes: *const usize,
    n_modes: usize,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> GeStatus {
    guard(|| {
        let d = contraction(d)?;
        let m = slice(modes, n_modes, "modes")?;
        let spec = symplectic_eigenvalues(&d.restrict(m)?)?;
        write_values(&spec, buf, cap, out_len)
    })
}

/// Eigenvalues of the partial transpose on `b` of the (b, c) state, ascending.
///
/// # Safety
/// `b` and `c` hold `nb` and `nc` indices; `buf` holds `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ge_partial_transpose_eigenvalues(
    d: *const GeContraction,
    b: *const usize,
    nb: usize,
    c: *const usize,
    nc: usize,
    buf: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> GeStatus {
    guard(|| {
        let d = contraction(d)?;
        let (b, c) = (slice(b, nb, "b")?, slice(c, nc, "c")?);
        let spec = partial_transpose_spectrum(d, b, c, &Tolerances::default())?;
        write_values(&spec, buf, cap, out_len)
    })
}

/// Entanglement entropy of `modes` with the rest.
///
/// # Safety
/// `modes` holds `n_modes` indices; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ge_entropy(
    d: *const GeContraction,
    modes: *const usize,
    n_modes: usize,
    log_base: u32,
    out: *mut f64,
) -> GeStatus {
    guard(|| {
        let d = contraction(d)?;
        let base = base(log_base)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let spec = symplectic_eigenvalues(&d.restrict(slice(modes, n_modes, "modes")?)?)?;
        *out = entanglement_entropy(&spec, base)?.value;
        Ok(())
    })
}

/// Logarithmic negativity between `b` and `c`. `diverging` (nullable) is set
/// when an eigenvalue sat at the lower bound.
///
/// # Safety
/// `b` and `c` hold `nb` and `nc` indices; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn ge_log_negativity(
    d: *const GeContraction,
    b: *const usize,
    nb: usize,
    c: *const usize,
    nc: usize,
    log_base: u32,
    out: *mut f64,
    diverging: *mut bool,
) -> GeStatus {
    guard(|| {
        let d = contraction(d)?;
        let base = base(log_base)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (b, c) = (slice(b, nb, "b")?, slice(c, nc, "c")?);
        let spec = partial_transpose_spectrum(d, b, c, &Tolerances::default())?;
        let v = log_negativity(&spec, base)?;
        *out = v.value;
        if !diverging.is_null() {
            *diverging = v.diverging;
        }
        Ok(())
    })
}
