//! C interface to gl11. Specs are opaque handles; reports come back as JSON strings that
//! the caller releases with `gl11_string_free`. Every fallible call returns a status code
//! and records a message retrievable with `gl11_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use gl11::monodromy::ModuleSpec;
use gl11::report::{random_spec, spectrum, verify, Caps, Fault, Suite};
use gl11::Error;

/// Opaque module specification.
pub struct Gl11Spec {
    inner: ModuleSpec,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gl11Status {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    Computation = 5,
    /// the call succeeded but a verification failed
    VerificationFailed = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn status_of(e: &Error) -> Gl11Status {
    match e {
        Error::Parse(_) => Gl11Status::Parse,
        Error::Invalid(_) => Gl11Status::InvalidInput,
        _ => Gl11Status::Computation,
    }
}

fn fail(e: Error) -> Gl11Status {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `f`, converting panics into `Panic`.
fn guard(f: impl FnOnce() -> Gl11Status) -> Gl11Status {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            Gl11Status::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Gl11Status> {
    if p.is_null() {
        set_error("null string argument");
        return Err(Gl11Status::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not UTF-8");
        Gl11Status::InvalidUtf8
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Gl11Status {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            Gl11Status::Ok
        }
        Err(_) => {
            set_error("output contains a nul byte");
            Gl11Status::Computation
        }
    }
}

/// Message of the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn gl11_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parse a TOML spec (`weights`, `points`, `twist`) into a new handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl11_spec_from_toml(text: *const c_char, out: *mut *mut Gl11Spec) -> Gl11Status {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Gl11Status::NullPointer;
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match ModuleSpec::from_toml_str(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(Gl11Spec { inner }));
                Gl11Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Deterministic pseudo-random cyclic spec; `split` forces γ to factor over ℚ.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl11_spec_random(
    seed: u64,
    k: usize,
    weight_budget: i64,
    split: bool,
    out: *mut *mut Gl11Spec,
) -> Gl11Status {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Gl11Status::NullPointer;
        }
        match random_spec(seed, k, weight_budget, split) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(Gl11Spec { inner }));
                Gl11Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `spec` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn gl11_spec_free(spec: *mut Gl11Spec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// Number of tensor factors, or 0 for NULL.
///
/// # Safety
/// `spec` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gl11_spec_factors(spec: *const Gl11Spec) -> usize {
    spec.as_ref().map_or(0, |s| s.inner.k())
}

/// The spec as TOML text.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl11_spec_to_toml(spec: *const Gl11Spec, out: *mut *mut c_char) -> Gl11Status {
    guard(|| {
        let (Some(s), false) = (spec.as_ref(), out.is_null()) else {
            set_error("null argument");
            return Gl11Status::NullPointer;
        };
        write_string(out, s.inner.to_toml_string())
    })
}

/// Spectral report as JSON; `level` < 0 selects all levels. Returns
/// `VerificationFailed` (with the report written) when it is not internally consistent.
///
/// # Safety
/// `spec` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl11_spectrum_json(spec: *const Gl11Spec, level: i64, out: *mut *mut c_char) -> Gl11Status {
    guard(|| {
        let (Some(s), false) = (spec.as_ref(), out.is_null()) else {
            set_error("null argument");
            return Gl11Status::NullPointer;
        };
        let level = usize::try_from(level).ok();
        match spectrum(&s.inner, level) {
            Ok(r) => {
                let st = write_string(out, serde_json::to_string(&r).expect("serializable"));
                if st == Gl11Status::Ok && !r.consistent {
                    set_error("spectrum is not internally consistent");
                    return Gl11Status::VerificationFailed;
                }
                st
            }
            Err(e) => fail(e),
        }
    })
}

/// Runs a suite ("rtt", "bethe", "algebra", "norms", "fusion", "weyl" or "all") with
/// the given caps (0 selects the default) and writes the JSON report.
///
/// # Safety
/// `suite` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gl11_verify_json(
    suite: *const c_char,
    max_k: usize,
    max_n: usize,
    out: *mut *mut c_char,
) -> Gl11Status {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return Gl11Status::NullPointer;
        }
        let suites = match read_str(suite).map(Suite::parse) {
            Ok(Ok(s)) => s,
            Ok(Err(e)) => return fail(e),
            Err(s) => return s,
        };
        let d = Caps::default();
        let caps = Caps {
            max_k: if max_k == 0 { d.max_k } else { max_k },
            max_n: if max_n == 0 { d.max_n } else { max_n },
            ..d
        };
        match verify(&suites, &caps, Fault::None, false) {
            Ok(r) => {
                let st = write_string(out, serde_json::to_string(&r).expect("serializable"));
                if st == Gl11Status::Ok && !r.pass {
                    set_error("verification failed");
                    return Gl11Status::VerificationFailed;
                }
                st
            }
            Err(e) => fail(e),
        }
    })
}

/// Release a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gl11_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
