//! C ABI over the rayclass engine.
//!
//! Handles are opaque and owned by the caller; free them with the matching
//! `*_free` function. Every fallible call returns an [`RcStatus`]; on failure
//! `rc_last_error` describes the problem for the calling thread. Strings
//! returned through out-parameters must be released with `rc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rayclass::classfield::{make_field, ray_class_degree, Field};
use rayclass::qseries::{LevelOne, ModularPoint};
use rayclass::verify::{check_curve_point, check_generation};
use rayclass::{Error, PrecisionContext};

/// Result codes shared by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcStatus {
    Ok = 0,
    CheckFailed = 1,
    InvalidArgument = 2,
    Numerical = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// Working precision and tolerance.
pub struct RcContext {
    inner: PrecisionContext,
}

/// An imaginary quadratic field with its reduced forms.
pub struct RcField {
    inner: Field,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn from_error(err: Error) -> RcStatus {
    let status = if err.is_numerical() {
        RcStatus::Numerical
    } else {
        RcStatus::InvalidArgument
    };
    set_error(err.to_string());
    status
}

fn guard(f: impl FnOnce() -> RcStatus) -> RcStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            RcStatus::Panic
        }
    }
}

fn write_string(out: *mut *mut c_char, s: String) -> RcStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            RcStatus::Ok
        }
        Err(_) => {
            set_error("output contains an interior NUL");
            RcStatus::Panic
        }
    }
}

macro_rules! non_null {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return RcStatus::NullPointer;
        })+
    };
}

/// Message for the last failed call on this thread, or NULL. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn rc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn rc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn rc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be a valid pointer to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn rc_context_new(bits: u32, eps: f64, out: *mut *mut RcContext) -> RcStatus {
    non_null!(out);
    guard(|| match PrecisionContext::new(bits, eps) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(RcContext { inner }));
            RcStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `ctx` must be NULL or a handle from `rc_context_new`.
#[no_mangle]
pub unsafe extern "C" fn rc_context_free(ctx: *mut RcContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// `out` must be a valid pointer to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn rc_field_new(dk: i64, out: *mut *mut RcField) -> RcStatus {
    non_null!(out);
    guard(|| match make_field(dk) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(RcField { inner }));
            RcStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `field` must be NULL or a handle from `rc_field_new`.
#[no_mangle]
pub unsafe extern "C" fn rc_field_free(field: *mut RcField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_field_class_number(field: *const RcField, out: *mut u64) -> RcStatus {
    non_null!(field, out);
    *out = (*field).inner.h as u64;
    RcStatus::Ok
}

/// `[K_(N) : K]`.
///
/// # Safety
/// `field` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_ray_class_degree(field: *const RcField, level: i64, out: *mut u64) -> RcStatus {
    non_null!(field, out);
    guard(|| match ray_class_degree(&(*field).inner, level) {
        Ok(d) => {
            *out = d;
            RcStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// `j(τ)` rounded to double precision.
///
/// # Safety
/// `ctx` must be a live handle; `out_re` and `out_im` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_eval_j(ctx: *const RcContext, re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> RcStatus {
    non_null!(ctx, out_re, out_im);
    guard(|| {
        let res = ModularPoint::from_f64(re, im, &(*ctx).inner).and_then(|pt| LevelOne::new(&pt));
        match res {
            Ok(lvl) => {
                let (a, b) = lvl.j().to_f64_pair();
                *out_re = a;
                *out_im = b;
                RcStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Curve identity at `θ` for level `N`; the JSON report goes to `out_json`.
/// Returns `CheckFailed` when the report does not pass.
///
/// # Safety
/// `ctx` and `field` must be live handles; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_check_curve(
    ctx: *const RcContext,
    field: *const RcField,
    level: i64,
    relaxed: bool,
    out_json: *mut *mut c_char,
) -> RcStatus {
    non_null!(ctx, field, out_json);
    guard(|| match check_curve_point(&(*field).inner, level, relaxed, &(*ctx).inner) {
        Ok(rep) => {
            let status = write_string(out_json, serde_json::to_string(&rep).unwrap_or_default());
            if status == RcStatus::Ok && !rep.pass {
                RcStatus::CheckFailed
            } else {
                status
            }
        }
        Err(e) => from_error(e),
    })
}

/// Generation witness for a descriptor such as `"pair"`, `"y4"` or `"y12N"`.
///
/// # Safety
/// `ctx` and `field` must be live handles, `descriptor` a NUL-terminated
/// string and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn rc_check_generation(
    ctx: *const RcContext,
    field: *const RcField,
    level: i64,
    descriptor: *const c_char,
    out_json: *mut *mut c_char,
) -> RcStatus {
    non_null!(ctx, field, descriptor, out_json);
    let Ok(desc) = CStr::from_ptr(descriptor).to_str() else {
        set_error("descriptor is not UTF-8");
        return RcStatus::InvalidUtf8;
    };
    guard(|| {
        let res = desc.parse().and_then(|d| check_generation(&(*field).inner, level, d, &(*ctx).inner));
        match res {
            Ok(rep) => {
                let status = write_string(out_json, serde_json::to_string(&rep).unwrap_or_default());
                if status == RcStatus::Ok && !rep.pass {
                    RcStatus::CheckFailed
                } else {
                    status
                }
            }
            Err(e) => from_error(e),
        }
    })
}

/// Run a command-line invocation (without the program name) and return its
/// output. `out_exit` receives the process exit code the CLI would use.
///
/// # Safety
/// `argv` must hold `argc` NUL-terminated strings; `out_text` and `out_exit`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn rc_run_command(argc: c_int, argv: *const *const c_char, out_text: *mut *mut c_char, out_exit: *mut c_int) -> RcStatus {
    non_null!(out_text, out_exit);
    if argc < 0 || (argc > 0 && argv.is_null()) {
        set_error("argv is NULL or argc is negative");
        return RcStatus::NullPointer;
    }
    let mut args = vec!["rayclass".to_string()];
    for i in 0..argc as usize {
        let p = *argv.add(i);
        non_null!(p);
        match CStr::from_ptr(p).to_str() {
            Ok(s) => args.push(s.to_string()),
            Err(_) => {
                set_error(format!("argument {i} is not UTF-8"));
                return RcStatus::InvalidUtf8;
            }
        }
    }
    guard(|| {
        let (code, text) = rayclass::cli::execute(args);
        *out_exit = code;
        write_string(out_text, text)
    })
}
