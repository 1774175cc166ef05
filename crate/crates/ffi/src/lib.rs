//! C ABI over `pdem-core`.
//!
//! Devices are opaque heap handles created by [`pdem_device_new`] and
//! released by [`pdem_device_free`]. Every fallible call returns a
//! [`PdemStatus`]; on failure the message is kept per thread and read back
//! with [`pdem_last_error_message`]. Output pointers are written only on
//! success. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;
use pdem_core::analytic::{self, BoundSearchConfig};
use pdem_core::model;
use pdem_core::oracle::{self, IntegratorConfig};
use pdem_core::specfun::{hyp2f1, Hyp2F1Params};
use pdem_core::{DeviceParams, Error, Side};

/// Opaque device handle.
pub struct PdemDevice {
    params: DeviceParams,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PdemStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BelowThreshold = 3,
    SingularMatching = 4,
    NoConvergence = 5,
    NumericFailure = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PdemSide {
    Left = 0,
    Right = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PdemMethod {
    Analytic = 0,
    Oracle = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PdemComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for PdemComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<PdemComplex> for Complex64 {
    fn from(z: PdemComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

/// Amplitudes for one incidence side.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PdemScatter {
    pub r: PdemComplex,
    pub t: PdemComplex,
    pub condition: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    // Interior NULs cannot occur in our messages; strip them anyway.
    let msg = CString::new(msg.replace('\0', "")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> PdemStatus {
    match err {
        Error::InvalidParams(_) | Error::Usage(_) | Error::DomainError { .. } | Error::PoleAtC { .. } => {
            PdemStatus::InvalidArgument
        }
        Error::BelowThreshold { .. } => PdemStatus::BelowThreshold,
        Error::SingularMatching { .. } => PdemStatus::SingularMatching,
        Error::NoConvergence { .. } | Error::NonConvergence { .. } | Error::NoSignChange { .. } => {
            PdemStatus::NoConvergence
        }
        _ => PdemStatus::NumericFailure,
    }
}

enum Failure {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

/// Runs `f`, turning errors and panics into a status plus stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PdemStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            PdemStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed as `{what}`"));
            PdemStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            PdemStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` is null or points to a live `PdemDevice`.
unsafe fn device<'a>(ptr: *const PdemDevice) -> Result<&'a PdemDevice, Failure> {
    ptr.as_ref().ok_or(Failure::Null("device"))
}

/// # Safety
/// `ptr` is null or valid for a write of `T`.
unsafe fn put<T>(ptr: *mut T, what: &'static str, value: T) -> Result<(), Failure> {
    let slot = ptr.as_mut().ok_or(Failure::Null(what))?;
    *slot = value;
    Ok(())
}

/// Creates a device. On success `*out` owns a handle for [`pdem_device_free`].
///
/// # Safety
/// `out` must be null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn pdem_device_new(g: f64, mu1: f64, mu2: f64, a0: f64, out: *mut *mut PdemDevice) -> PdemStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let params = DeviceParams::new(g, mu1, mu2, a0)?;
        put(out, "out", Box::into_raw(Box::new(PdemDevice { params })))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `dev` must be null or a handle from [`pdem_device_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pdem_device_free(dev: *mut PdemDevice) {
    if !dev.is_null() {
        drop(Box::from_raw(dev));
    }
}

/// Threshold V₀ of the exterior.
///
/// # Safety
/// `dev` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pdem_threshold(dev: *const PdemDevice, out: *mut f64) -> PdemStatus {
    guard(|| put(out, "out", device(dev)?.params.v0()))
}

/// Reflection and transmission amplitudes at real energy above threshold.
///
/// # Safety
/// `dev` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pdem_scatter(
    dev: *const PdemDevice,
    energy: f64,
    side: PdemSide,
    method: PdemMethod,
    out: *mut PdemScatter,
) -> PdemStatus {
    guard(|| {
        let p = &device(dev)?.params;
        let side = match side {
            PdemSide::Left => Side::Left,
            PdemSide::Right => Side::Right,
        };
        let res = match method {
            PdemMethod::Analytic => analytic::match_scatter(energy, p, side)?,
            PdemMethod::Oracle => oracle::scatter_numeric(energy, p, side, &IntegratorConfig::default())?,
        };
        put(
            out,
            "out",
            PdemScatter {
                r: res.r.into(),
                t: res.t.into(),
                condition: res.condition_estimate,
            },
        )
    })
}

/// Bound-state energies in ascending order. `*count` receives the number
/// found; at most `capacity` of them are written to `energies`, which may be
/// null when `capacity` is 0.
///
/// # Safety
/// `dev` must be a live handle, `count` valid for a write, and `energies`
/// valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn pdem_bound_states(
    dev: *const PdemDevice,
    energies: *mut f64,
    capacity: usize,
    count: *mut usize,
) -> PdemStatus {
    guard(|| {
        let p = &device(dev)?.params;
        if count.is_null() {
            return Err(Failure::Null("count"));
        }
        if capacity > 0 && energies.is_null() {
            return Err(Failure::Null("energies"));
        }
        let spectrum = analytic::find_bound_states(p, &BoundSearchConfig::for_device(p))?;
        for (i, s) in spectrum.states.iter().take(capacity).enumerate() {
            *energies.add(i) = s.energy;
        }
        put(count, "count", spectrum.states.len())
    })
}

/// Potential V(z) of the full device.
///
/// # Safety
/// `dev` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pdem_potential(dev: *const PdemDevice, z: f64, out: *mut PdemComplex) -> PdemStatus {
    guard(|| put(out, "out", model::potential(z, &device(dev)?.params).into()))
}

/// Effective mass m(z) of the full device.
///
/// # Safety
/// `dev` must be a live handle; `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pdem_mass(dev: *const PdemDevice, z: f64, out: *mut f64) -> PdemStatus {
    guard(|| put(out, "out", model::mass(z, &device(dev)?.params)))
}

/// ₂F₁(a, b; c; y) for |y| ≤ 0.75.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn pdem_hyp2f1(
    a: PdemComplex,
    b: PdemComplex,
    c: PdemComplex,
    y: PdemComplex,
    out: *mut PdemComplex,
) -> PdemStatus {
    guard(|| {
        let f = hyp2f1(&Hyp2F1Params::new(a.into(), b.into(), c.into(), y.into()))?;
        put(out, "out", f.into())
    })
}

/// Message for the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn pdem_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
