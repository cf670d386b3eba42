//! C ABI over the underbarrier solver.
//!
//! Every entry point returns a [`UbStatus`]. On failure the message is kept per
//! thread and read back with [`ub_last_error_message`]. Objects cross the
//! boundary as opaque handles that the caller releases with the matching
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use underbarrier::cli::config::parse_config;
use underbarrier::cli::{render_scenario, RunOptions};
use underbarrier::critical::find_critical_width;
use underbarrier::trajectory::{find_threshold, penetration};
use underbarrier::{BarrierParams, Error};

/// Result of every call. Solver codes equal the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UbStatus {
    Ok = 0,
    Config = 2,
    Io = 3,
    NoConvergence = 10,
    NearFold = 11,
    StepCollapse = 12,
    QuadratureFailure = 13,
    NoRealRoot = 14,
    FoldsMerged = 15,
    WindowViolation = 16,
    TracerStall = 17,
    IntegratorTolerance = 18,
    NoRoot = 19,
    Domain = 20,
    RegimeViolation = 21,
    SolverFailure = 22,
    OutOfRange = 23,
    ExponentCap = 24,
    InvalidParams = 25,
    NullPointer = 100,
    InvalidUtf8 = 101,
    Panic = 102,
}

impl From<&Error> for UbStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Config { .. } => UbStatus::Config,
            Error::Io(_) => UbStatus::Io,
            Error::NoConvergence { .. } => UbStatus::NoConvergence,
            Error::NearFold { .. } => UbStatus::NearFold,
            Error::StepCollapse { .. } => UbStatus::StepCollapse,
            Error::QuadratureFailure { .. } => UbStatus::QuadratureFailure,
            Error::NoRealRoot { .. } => UbStatus::NoRealRoot,
            Error::FoldsMerged { .. } => UbStatus::FoldsMerged,
            Error::WindowViolation { .. } => UbStatus::WindowViolation,
            Error::TracerStall { .. } => UbStatus::TracerStall,
            Error::IntegratorTolerance(_) => UbStatus::IntegratorTolerance,
            Error::NoRoot { .. } => UbStatus::NoRoot,
            Error::Domain(_) => UbStatus::Domain,
            Error::RegimeViolation(_) => UbStatus::RegimeViolation,
            Error::SolverFailure(_) => UbStatus::SolverFailure,
            Error::OutOfRange { .. } => UbStatus::OutOfRange,
            Error::ExponentCap { .. } => UbStatus::ExponentCap,
            Error::InvalidParams(_) => UbStatus::InvalidParams,
        }
    }
}

/// Barrier parameters, immutable once created.
pub struct UbBarrier(BarrierParams);

/// Owned, NUL-terminated text produced by the library.
pub struct UbText(CString);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct UbCriticalWidth {
    pub a0: f64,
    pub x0: f64,
    pub v0: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct UbPenetration {
    pub action_a0: f64,
    pub action_a1: f64,
    /// Natural-log penetration exponent.
    pub w_log: f64,
    /// Same exponent for the homogeneous wire.
    pub wkb_log: f64,
    pub x_b: f64,
    pub v_b: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct UbThreshold {
    pub a_r: f64,
    pub slope: f64,
    pub x_b: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), UbStatus>) -> UbStatus {
    set_error(String::new());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UbStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            UbStatus::Panic
        }
    }
}

fn fail(e: Error) -> UbStatus {
    let s = UbStatus::from(&e);
    set_error(e.to_string());
    s
}

fn null(what: &str) -> UbStatus {
    set_error(format!("{what} is null"));
    UbStatus::NullPointer
}

unsafe fn barrier<'a>(h: *const UbBarrier) -> Result<&'a BarrierParams, UbStatus> {
    h.as_ref().map(|b| &b.0).ok_or_else(|| null("barrier handle"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), UbStatus> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ub_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ub_version() -> *const c_char {
    static V: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!(),
    };
    V.as_ptr()
}

/// Create a barrier from B, γ, α0² and a.
///
/// # Safety
/// `out` must be null or point to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ub_barrier_new(b: f64, gamma: f64, alpha0_sq: f64, a: f64, out: *mut *mut UbBarrier) -> UbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let p = BarrierParams::with_alpha0_sq(b, gamma, alpha0_sq, a).map_err(fail)?;
        out.write(Box::into_raw(Box::new(UbBarrier(p))));
        Ok(())
    })
}

/// Release a barrier. Null is ignored.
///
/// # Safety
/// `h` must be null or a handle from [`ub_barrier_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ub_barrier_free(h: *mut UbBarrier) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Critical width a0 and the cusp location for the barrier's B, γ, α0.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ub_critical_width(h: *const UbBarrier, out: *mut UbCriticalWidth) -> UbStatus {
    guard(|| {
        let p = barrier(h)?;
        let w = find_critical_width(p).map_err(fail)?;
        write(out, UbCriticalWidth { a0: w.a0, x0: w.x0, v0: w.v0 })
    })
}

/// Penetration exponent along the imaginary-time trajectory.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ub_penetration(h: *const UbBarrier, out: *mut UbPenetration) -> UbStatus {
    guard(|| {
        let p = barrier(h)?;
        let r = penetration(p).map_err(fail)?;
        write(
            out,
            UbPenetration {
                action_a0: r.action_a0,
                action_a1: r.action_a1,
                w_log: r.w_log,
                wkb_log: r.wkb_log,
                x_b: r.x_b,
                v_b: r.v_b,
            },
        )
    })
}

/// Width a_R at which the tunneling action A0 + A1 vanishes, with the slope
/// d(A0 + A1)/da / B there. The handle's own a is ignored.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ub_threshold(h: *const UbBarrier, out: *mut UbThreshold) -> UbStatus {
    guard(|| {
        let p = barrier(h)?;
        let t = find_threshold(p).map_err(fail)?;
        write(out, UbThreshold { a_r: t.a_r, slope: t.slope, x_b: t.x_b })
    })
}

/// Run every scenario in a config text and return the rendered outputs,
/// concatenated in section order.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ub_run_config(config: *const c_char, out: *mut *mut UbText) -> UbStatus {
    guard(|| {
        if config.is_null() {
            return Err(null("config"));
        }
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let src = CStr::from_ptr(config).to_str().map_err(|e| {
            set_error(e.to_string());
            UbStatus::InvalidUtf8
        })?;
        let mut text = String::new();
        for named in parse_config(src).map_err(fail)? {
            text.push_str(&render_scenario(&named, &RunOptions::default()).map_err(fail)?);
        }
        let c = CString::new(text).map_err(|e| fail(Error::SolverFailure(e.to_string())))?;
        out.write(Box::into_raw(Box::new(UbText(c))));
        Ok(())
    })
}

/// Contents of a text handle, valid until it is freed.
///
/// # Safety
/// `t` must be null or a live text handle.
#[no_mangle]
pub unsafe extern "C" fn ub_text_data(t: *const UbText) -> *const c_char {
    t.as_ref().map_or(ptr::null(), |t| t.0.as_ptr())
}

/// Release a text handle. Null is ignored.
///
/// # Safety
/// `t` must be null or a handle from [`ub_run_config`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ub_text_free(t: *mut UbText) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}
