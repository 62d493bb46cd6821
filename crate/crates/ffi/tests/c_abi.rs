use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gaussent_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ge_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

fn lattice_state(lambda_over_lc: f64) -> *mut GeContraction {
    let mut lc = 0.0;
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(
            ge_lattice_critical_lambda(8, 8, true, 1.0, 2.0 / 3.0, &mut lc),
            GeStatus::Ok
        );
        assert_eq!(
            ge_lattice_ground_state(8, 8, true, 1.0, 2.0 / 3.0, lambda_over_lc * lc, &mut d),
            GeStatus::Ok
        );
    }
    d
}

#[test]
fn cyclic_critical_point() {
    let mut lc = 0.0;
    let st = unsafe { ge_lattice_critical_lambda(8, 8, true, 1.0, 2.0 / 3.0, &mut lc) };
    assert_eq!(st, GeStatus::Ok);
    assert!((lc - 10.0 / 3.0).abs() < 1e-9);
}

#[test]
fn entropy_matches_library() {
    let d = lattice_state(2.0);
    let a: Vec<usize> = vec![0, 1, 8, 9];
    let mut s = 0.0;
    unsafe {
        assert_eq!(
            ge_entropy(d, a.as_ptr(), a.len(), GE_LOG_BASE_E, &mut s),
            GeStatus::Ok
        );
    }
    let lat = gaussent::Lattice2D::new(8, 8, gaussent::Boundary::Cyclic).unwrap();
    let c = gaussent::model::LatticeCouplings::isotropic(1.0, 2.0 / 3.0);
    let h = gaussent::QuadraticHamiltonian::lattice(&lat, 2.0 * 10.0 / 3.0, &c);
    let (_, dd) = gaussent::solve_ground_state(&h).unwrap();
    let spec = gaussent::symplectic::symplectic_eigenvalues(&dd.restrict(&a).unwrap()).unwrap();
    let want = gaussent::symplectic::entanglement_entropy(&spec, gaussent::LogBase::E)
        .unwrap()
        .value;
    assert!((s - want).abs() < 1e-12);
    unsafe { ge_contraction_free(d) };
}

#[test]
fn spectrum_buffer_protocol() {
    let d = lattice_state(4.0);
    let modes: Vec<usize> = (0..5).collect();
    let mut len = 0;
    let mut buf = [0.0; 5];
    unsafe {
        let st = ge_symplectic_eigenvalues(d, modes.as_ptr(), 5, buf.as_mut_ptr(), 3, &mut len);
        assert_eq!(st, GeStatus::BufferTooSmall);
        assert_eq!(len, 5);
        let st = ge_symplectic_eigenvalues(d, modes.as_ptr(), 5, buf.as_mut_ptr(), 5, &mut len);
        assert_eq!(st, GeStatus::Ok);
        assert!(buf.windows(2).all(|w| w[0] <= w[1]));
        let (b, c) = ([0usize, 1], [2usize, 3, 4]);
        let mut pt = [0.0; 5];
        let st = ge_partial_transpose_eigenvalues(
            d,
            b.as_ptr(),
            2,
            c.as_ptr(),
            3,
            pt.as_mut_ptr(),
            5,
            &mut len,
        );
        assert_eq!(st, GeStatus::Ok);
        assert!(pt[0] < 0.0 && pt[0] >= -0.5);
        ge_contraction_free(d);
    }
}

#[test]
fn two_mode_squeezed_state_from_arrays() {
    let r: f64 = 0.4;
    let (s, c) = (r.sinh(), r.cosh());
    let fp = [s * s, 0.0, 0.0, s * s];
    let fm = [0.0, s * c, s * c, 0.0];
    let mut d = ptr::null_mut();
    unsafe {
        let st = ge_contraction_new(
            2,
            fp.as_ptr(),
            ptr::null(),
            fm.as_ptr(),
            ptr::null(),
            &mut d,
        );
        assert_eq!(st, GeStatus::Ok);
        assert_eq!(ge_contraction_n_modes(d), 2);
        let (mut n, mut div) = (0.0, true);
        let st = ge_log_negativity(d, &0, 1, &1, 1, GE_LOG_BASE_E, &mut n, &mut div);
        assert_eq!(st, GeStatus::Ok);
        assert!((n - 2.0 * r).abs() < 1e-12);
        assert!(!div);
        ge_contraction_free(d);
    }
}

#[test]
fn errors_are_reported() {
    let mut d = ptr::null_mut();
    let fm = [0.0, 0.1, 0.3, 0.0];
    let fp = [0.0; 4];
    unsafe {
        let st = ge_contraction_new(
            2,
            fp.as_ptr(),
            ptr::null(),
            fm.as_ptr(),
            ptr::null(),
            &mut d,
        );
        assert_eq!(st, GeStatus::InvalidArgument);
        assert!(last_error().contains("symmetric"), "{}", last_error());
        assert!(d.is_null());

        let mut s = 0.0;
        assert_eq!(
            ge_entropy(ptr::null(), ptr::null(), 0, 0, &mut s),
            GeStatus::NullPointer
        );
        let good = lattice_state(2.0);
        assert_eq!(
            ge_entropy(good, &0, 1, 7, &mut s),
            GeStatus::InvalidArgument
        );
        assert!(last_error().contains("log base"));
        let dup = [3usize, 3];
        assert_eq!(
            ge_entropy(good, dup.as_ptr(), 2, 0, &mut s),
            GeStatus::InvalidArgument
        );

        let mut bad = ptr::null_mut();
        let st = ge_lattice_ground_state(4, 4, true, 1.0, 0.5, 0.5, &mut bad);
        assert_ne!(st, GeStatus::Ok);
        assert!(bad.is_null());
        ge_contraction_free(good);
        ge_contraction_free(ptr::null_mut());
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(ge_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/gaussent.h")).unwrap();
    let src = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let mut n = 0;
    for line in src.lines() {
        let Some(rest) = line.split("extern \"C\" fn ").nth(1) else {
            continue;
        };
        let name = rest.split('(').next().unwrap();
        assert!(header.contains(&format!("{name}(")), "{name} missing");
        n += 1;
    }
    assert!(n >= 10);
    assert!(header.contains("typedef struct GeContraction GeContraction;"));
}

/// Directory holding the freshly built static library.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = artifact_dir().join("libgaussent_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .arg(crate_dir().join("tests/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap_or_else(|e| panic!("running {cc}: {e}"));
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
