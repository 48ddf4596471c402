//! C ABI over `cspadv`.
//!
//! Instances are opaque handles owned by the caller and released with
//! [`cspadv_instance_free`]. Every fallible call returns a [`CspadvStatus`];
//! on failure [`cspadv_last_error`] describes the cause. Strings returned
//! through out-parameters are released with [`cspadv_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cspadv::csp::{parse_instance, write_instance, TriangleFreeReport};
use cspadv::gen::{generate, GenKind, GenSpec};
use cspadv::{solve, Algorithm, Error, Instance, SolveOptions};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CspadvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Precondition = 5,
    Internal = 6,
}

/// Opaque instance handle.
pub struct CspadvInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (CspadvStatus, String);

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn from_error(e: Error) -> Failure {
    let status = match e {
        Error::Parse(_) => CspadvStatus::Parse,
        ref e if e.is_precondition() => CspadvStatus::Precondition,
        _ => CspadvStatus::InvalidArgument,
    };
    (status, e.to_string())
}

fn null(what: &str) -> Failure {
    (CspadvStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records its failure message and converts panics to
/// [`CspadvStatus::Internal`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CspadvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CspadvStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            CspadvStatus::Internal
        }
    }
}

/// # Safety
/// `s` must be null or a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| (CspadvStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `inst` must be null or a live handle.
unsafe fn instance<'a>(inst: *const CspadvInstance) -> Result<&'a Instance, Failure> {
    inst.as_ref().map(|h| &h.inner).ok_or_else(|| null("instance"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("generated text has no NUL").into_raw()
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the most recent failed call on this thread, or null. The
/// pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cspadv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cspadv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses the text instance format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cspadv_instance_parse(text: *const c_char, out: *mut *mut CspadvInstance) -> CspadvStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let inner = parse_instance(text).map_err(|e| from_error(e.into()))?;
        put(out, Box::into_raw(Box::new(CspadvInstance { inner })), "out")
    })
}

/// Builds an instance from a generator family name such as `"kxor"` or
/// `"triangle-free"`. Unused size parameters are ignored.
///
/// # Safety
/// `kind` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cspadv_instance_generate(
    kind: *const c_char,
    n: usize,
    k: usize,
    d: usize,
    seed: u64,
    out: *mut *mut CspadvInstance,
) -> CspadvStatus {
    guard(|| {
        let kind: GenKind = read_str(kind, "kind")?.parse().map_err(|e| (CspadvStatus::InvalidArgument, e))?;
        let generated = generate(&GenSpec { kind, n, k, d, seed }).map_err(from_error)?;
        put(out, Box::into_raw(Box::new(CspadvInstance { inner: generated.instance })), "out")
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `inst` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cspadv_instance_free(inst: *mut CspadvInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cspadv_instance_num_vars(inst: *const CspadvInstance) -> usize {
    inst.as_ref().map_or(0, |h| h.inner.n())
}

/// Number of constraints, or 0 for a null handle.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cspadv_instance_num_constraints(inst: *const CspadvInstance) -> usize {
    inst.as_ref().map_or(0, |h| h.inner.m())
}

/// Serializes to the text instance format.
///
/// # Safety
/// `inst` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cspadv_instance_to_text(inst: *const CspadvInstance, out: *mut *mut c_char) -> CspadvStatus {
    guard(|| {
        let text = write_instance(instance(inst)?, &[]);
        put(out, into_c_string(text), "out")
    })
}

/// Number of constraints satisfied by the ±1 assignment `x[0..len]`.
///
/// # Safety
/// `inst` must be a live handle, `x` readable for `len` bytes and
/// `out_satisfied` writable.
#[no_mangle]
pub unsafe extern "C" fn cspadv_instance_satisfied(
    inst: *const CspadvInstance,
    x: *const i8,
    len: usize,
    out_satisfied: *mut usize,
) -> CspadvStatus {
    guard(|| {
        let inst = instance(inst)?;
        if x.is_null() {
            return Err(null("x"));
        }
        let x = std::slice::from_raw_parts(x, len);
        let count = inst.satisfied_count(x).map_err(|e| from_error(e.into()))?;
        put(out_satisfied, count, "out_satisfied")
    })
}

/// Validation and triangle-freeness as a JSON object with fields `valid`,
/// `violations` and `triangle_free`.
///
/// # Safety
/// `inst` must be a live handle and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn cspadv_instance_check(inst: *const CspadvInstance, out_json: *mut *mut c_char) -> CspadvStatus {
    guard(|| {
        let inst = instance(inst)?;
        let validation = inst.validate();
        let triangle = inst.check_triangle_free();
        let text = serde_json::json!({
            "valid": validation.is_ok(),
            "violations": validation.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "triangle_free": triangle == TriangleFreeReport::Ok,
        })
        .to_string();
        put(out_json, into_c_string(text), "out_json")
    })
}

/// Runs the solver named `alg` (`"xor3"`, `"xor3-derand"`, `"advrand"`,
/// `"trifree"` or `"brute"`). The JSON report goes to `out_json` when it is
/// not null; the assignment goes to `x_out` when it is not null, which must
/// hold exactly `x_len` = number of variables entries.
///
/// # Safety
/// `inst` must be a live handle, `alg` a NUL-terminated string, `x_out`
/// null or writable for `x_len` bytes, and `out_json` null or writable.
#[no_mangle]
pub unsafe extern "C" fn cspadv_solve(
    inst: *const CspadvInstance,
    alg: *const c_char,
    seed: u64,
    x_out: *mut i8,
    x_len: usize,
    out_json: *mut *mut c_char,
) -> CspadvStatus {
    guard(|| {
        let inst = instance(inst)?;
        let alg: Algorithm = read_str(alg, "alg")?.parse().map_err(|e| (CspadvStatus::InvalidArgument, e))?;
        if !x_out.is_null() && x_len != inst.n() {
            return Err((CspadvStatus::InvalidArgument, format!("x_len is {x_len}, instance has {} variables", inst.n())));
        }
        let (x, report) = solve(inst, alg, seed, &SolveOptions::default()).map_err(from_error)?;
        if !x_out.is_null() {
            std::slice::from_raw_parts_mut(x_out, x_len).copy_from_slice(&x);
        }
        if !out_json.is_null() {
            out_json.write(into_c_string(report.to_json()));
        }
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cspadv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
