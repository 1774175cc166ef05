//! The exported functions called as a foreign caller would, plus a C program
//! compiled against the generated header.

use std::ffi::CStr;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use pdem_ffi::*;

fn new_device(g: f64, mu1: f64, mu2: f64, a0: f64) -> *mut PdemDevice {
    let mut dev = ptr::null_mut();
    assert_eq!(unsafe { pdem_device_new(g, mu1, mu2, a0, &mut dev) }, PdemStatus::Ok);
    assert!(!dev.is_null());
    dev
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pdem_last_error_message()) }
        .to_str()
        .unwrap()
        .to_string()
}

fn c(re: f64, im: f64) -> PdemComplex {
    PdemComplex { re, im }
}

#[test]
fn invalid_parameters_leave_out_untouched() {
    let mut dev = ptr::null_mut();
    let status = unsafe { pdem_device_new(1.5, -4.0, 0.3, 2.5, &mut dev) };
    assert_eq!(status, PdemStatus::InvalidArgument);
    assert!(dev.is_null());
    assert!(last_error().contains("invalid device parameters"));
}

#[test]
fn null_pointers_are_reported() {
    assert_eq!(
        unsafe { pdem_device_new(1.5, 4.0, 0.3, 2.5, ptr::null_mut()) },
        PdemStatus::NullPointer
    );
    let mut m = 0.0;
    assert_eq!(unsafe { pdem_mass(ptr::null(), 0.0, &mut m) }, PdemStatus::NullPointer);
    assert!(last_error().contains("device"));
    unsafe { pdem_device_free(ptr::null_mut()) };
}

#[test]
fn scattering_through_the_abi_matches_core() {
    let dev = new_device(1.5, 4.0, 0.3, 2.5);
    let mut out = PdemScatter::default();
    for (side, core_side) in [(PdemSide::Left, pdem_core::Side::Left), (PdemSide::Right, pdem_core::Side::Right)] {
        assert_eq!(unsafe { pdem_scatter(dev, 10.0, side, PdemMethod::Analytic, &mut out) }, PdemStatus::Ok);
        let want = pdem_core::analytic::match_scatter(10.0, &pdem_core::DeviceParams::REFERENCE, core_side).unwrap();
        assert_eq!((out.r.re, out.r.im, out.t.re, out.t.im), (want.r.re, want.r.im, want.t.re, want.t.im));
        assert_eq!(last_error(), "");
    }
    let mut oracle = PdemScatter::default();
    assert_eq!(unsafe { pdem_scatter(dev, 10.0, PdemSide::Right, PdemMethod::Oracle, &mut oracle) }, PdemStatus::Ok);
    assert!((oracle.t.re - out.t.re).abs() < 1e-6 && (oracle.t.im - out.t.im).abs() < 1e-6);
    assert_eq!(
        unsafe { pdem_scatter(dev, -1.0, PdemSide::Left, PdemMethod::Analytic, &mut out) },
        PdemStatus::BelowThreshold
    );
    unsafe { pdem_device_free(dev) };
}

#[test]
fn bound_states_respect_capacity() {
    let dev = new_device(1.5, 4.0, 0.3, 2.5);
    let mut count = 0usize;
    assert_eq!(unsafe { pdem_bound_states(dev, ptr::null_mut(), 0, &mut count) }, PdemStatus::Ok);
    assert_eq!(count, 2);
    let mut one = [f64::NAN; 1];
    assert_eq!(unsafe { pdem_bound_states(dev, one.as_mut_ptr(), 1, &mut count) }, PdemStatus::Ok);
    assert_eq!(count, 2);
    assert!((one[0] + 2.662358713621).abs() < 1e-9);
    assert_eq!(
        unsafe { pdem_bound_states(dev, ptr::null_mut(), 3, &mut count) },
        PdemStatus::NullPointer
    );
    unsafe { pdem_device_free(dev) };
}

#[test]
fn profile_and_special_function() {
    let dev = new_device(1.5, 4.0, 0.3, 2.5);
    let (mut v, mut m, mut v0) = (PdemComplex::default(), 0.0, 0.0);
    unsafe {
        assert_eq!(pdem_potential(dev, 3.0, &mut v), PdemStatus::Ok);
        assert_eq!(pdem_threshold(dev, &mut v0), PdemStatus::Ok);
        assert_eq!(pdem_mass(dev, 3.0, &mut m), PdemStatus::Ok);
        pdem_device_free(dev);
    }
    assert_eq!((v.re, v.im), (v0, 0.0));
    assert!((m - 1.125 / 7.25).abs() < 1e-15);

    let mut f = PdemComplex::default();
    let status = unsafe { pdem_hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.5, 0.0), &mut f) };
    assert_eq!(status, PdemStatus::Ok);
    assert!((f.re - 2.0 * 2f64.ln()).abs() < 1e-15);
    let status = unsafe { pdem_hyp2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.9, 0.0), &mut f) };
    assert_eq!(status, PdemStatus::InvalidArgument);
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(manifest_dir().join("include/pdem.h")).unwrap();
    for name in [
        "pdem_device_new",
        "pdem_device_free",
        "pdem_threshold",
        "pdem_scatter",
        "pdem_bound_states",
        "pdem_potential",
        "pdem_mass",
        "pdem_hyp2f1",
        "pdem_last_error_message",
        "typedef struct PdemDevice PdemDevice;",
        "PDEM_STATUS_PANIC = 7",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

/// Directory holding this build's libpdem_ffi.a: the test binary lives in
/// its deps/ subdirectory.
fn lib_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let lib = lib_dir().join("libpdem_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile_dir();
    let exe = dir.join("smoke");
    let status = Command::new("cc")
        .arg(manifest_dir().join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest_dir().join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "ok\n");
    std::fs::remove_dir_all(dir).unwrap();
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pdem-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
