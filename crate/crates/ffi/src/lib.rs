//! C ABI over the beckdiff core.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`BdStatus`]; on anything but `BD_OK` a message is available from
//! [`bd_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use beckdiff::beck::{kahler, lift_check_torsor, unramified_check, verify_torsor, TorsorCandidate, TorsorJson};
use beckdiff::fpalg::{AlgebraJson, AlgebraPresentation};
use beckdiff::polyring::Limits;
use beckdiff::Error;

/// Result codes. Values are stable.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BdStatus {
    BdOk = 0,
    /// A required pointer was null or a string was not UTF-8.
    BdNullOrInvalidArgument = 1,
    /// Malformed JSON, grammar errors, inconsistent tables.
    BdInputError = 2,
    /// The input is well formed but fails the mathematical check
    /// (for example a kernel that does not square to zero).
    BdCheckFailed = 3,
    BdResourceLimit = 4,
    /// A panic was caught at the boundary.
    BdInternalError = 5,
}

/// A finitely presented algebra.
pub struct BdAlgebra {
    inner: Arc<AlgebraPresentation>,
}

/// A verified Beck torsor between finite ring tables.
pub struct BdTorsor {
    inner: TorsorCandidate,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    // interior NULs would truncate the message; replace them
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BdStatus {
    match e {
        Error::ResourceLimit(_) => BdStatus::BdResourceLimit,
        Error::KernelSquareNonzero { .. } | Error::NotSurjective | Error::NotAModule(_) => BdStatus::BdCheckFailed,
        _ => BdStatus::BdInputError,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), (BdStatus, String)>) -> BdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BdStatus::BdOk,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            BdStatus::BdInternalError
        }
    }
}

fn lib_err(e: Error) -> (BdStatus, String) {
    (status_of(&e), e.to_string())
}

fn invalid(what: &str) -> (BdStatus, String) {
    (BdStatus::BdNullOrInvalidArgument, format!("invalid argument: {what}"))
}

/// # Safety
/// `s` must be null or a NUL-terminated string valid for reads.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (BdStatus, String)> {
    if s.is_null() {
        return Err(invalid(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(what))
}

/// # Safety
/// `p` must be null or point to a live value of type `T`.
unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, (BdStatus, String)> {
    p.as_ref().ok_or_else(|| invalid(what))
}

/// Message for the last failing call on this thread, or null. The pointer is
/// valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn bd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an algebra presentation such as
/// `{"base":{"kind":"Fp","p":5},"generators":["x"],"relations":["x^2 - 2"]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_algebra_from_json(json: *const c_char, out: *mut *mut BdAlgebra) -> BdStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out"));
        }
        let text = read_str(json, "json")?;
        let j: AlgebraJson = serde_json::from_str(text).map_err(|e| lib_err(e.into()))?;
        let p = AlgebraPresentation::from_json(&j, Limits::default()).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BdAlgebra { inner: Arc::new(p) }));
        Ok(())
    })
}

/// # Safety
/// `a` must be null or a handle from `bd_algebra_from_json` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bd_algebra_free(a: *mut BdAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Number of generators of the algebra.
///
/// # Safety
/// `a` must be a live algebra handle.
#[no_mangle]
pub unsafe extern "C" fn bd_algebra_num_generators(a: *const BdAlgebra, out: *mut usize) -> BdStatus {
    guard(|| {
        let a = get(a, "algebra")?;
        if out.is_null() {
            return Err(invalid("out"));
        }
        *out = a.inner.generators().len();
        Ok(())
    })
}

/// Whether Ω of the algebra over its base is the zero module.
///
/// # Safety
/// `a` must be a live algebra handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bd_kahler_is_zero(a: *const BdAlgebra, out: *mut bool) -> BdStatus {
    guard(|| {
        let a = get(a, "algebra")?;
        if out.is_null() {
            return Err(invalid("out"));
        }
        let omega = kahler(&a.inner).map_err(lib_err)?;
        *out = omega.zero_test().map_err(lib_err)?.is_zero;
        Ok(())
    })
}

/// Formal unramifiedness; when false, a witness pair of distinct lifts was
/// built and verified (finite algebras) before returning.
///
/// # Safety
/// `a` must be a live algebra handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bd_unramified(a: *const BdAlgebra, out: *mut bool) -> BdStatus {
    guard(|| {
        let a = get(a, "algebra")?;
        if out.is_null() {
            return Err(invalid("out"));
        }
        *out = unramified_check(&a.inner).map_err(lib_err)?.unramified;
        Ok(())
    })
}

/// Verifies `{"total": table, "base": table, "map": [...]}` as a torsor.
/// Returns `BD_CHECK_FAILED` when the surjection is not square-zero.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn bd_torsor_from_json(json: *const c_char, out: *mut *mut BdTorsor) -> BdStatus {
    guard(|| {
        if out.is_null() {
            return Err(invalid("out"));
        }
        let text = read_str(json, "json")?;
        let j: TorsorJson = serde_json::from_str(text).map_err(|e| lib_err(e.into()))?;
        let q = j.to_map().map_err(lib_err)?;
        let t = verify_torsor(&q).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(BdTorsor { inner: t }));
        Ok(())
    })
}

/// # Safety
/// `t` must be null or a handle from `bd_torsor_from_json` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bd_torsor_free(t: *mut BdTorsor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be a live torsor handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bd_torsor_is_split(t: *const BdTorsor, out: *mut bool) -> BdStatus {
    guard(|| {
        let t = get(t, "torsor")?;
        if out.is_null() {
            return Err(invalid("out"));
        }
        *out = t.inner.is_split();
        Ok(())
    })
}

/// Size of the kernel module `M`.
///
/// # Safety
/// `t` must be a live torsor handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bd_torsor_kernel_size(t: *const BdTorsor, out: *mut usize) -> BdStatus {
    guard(|| {
        let t = get(t, "torsor")?;
        if out.is_null() {
            return Err(invalid("out"));
        }
        *out = t.inner.kernel().len();
        Ok(())
    })
}

/// Whether post-composition `Hom(B, Z) → Hom(B, Y)` is injective.
///
/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bd_lift_injective(a: *const BdAlgebra, t: *const BdTorsor, out: *mut bool) -> BdStatus {
    guard(|| {
        let a = get(a, "algebra")?;
        let t = get(t, "torsor")?;
        if out.is_null() {
            return Err(invalid("out"));
        }
        *out = lift_check_torsor(&a.inner, &t.inner, Limits::default()).map_err(lib_err)?.injective;
        Ok(())
    })
}
