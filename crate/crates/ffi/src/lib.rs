//! C ABI over `orba`.
//!
//! Spaces are opaque handles built from the JSON space descriptor. Every call
//! returns an [`OrbaStatus`]; on failure a message is available from
//! [`orba_last_error`] on the same thread. Strings returned by the library are
//! freed with [`orba_string_free`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use libc::{c_char, size_t};
use orba::cone_analysis::{min_dominator, n_norm, scan, ScanConfig};
use orba::covers::{koethe_norm, merged_norm, principal_ideal_norm};
use orba::space::SpaceDescriptor;
use orba::{OrbaError, OrderedSpace};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, wrong dimensions or an invalid descriptor.
    InvalidInput = 3,
    /// A well-formed request whose computation failed.
    Computation = 4,
    Panic = 5,
}

/// An ordered space. Create with [`orba_space_from_json`], release with [`orba_space_free`].
pub struct OrbaSpace {
    inner: Arc<OrderedSpace>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg.into()));
}

enum Failure {
    Null(&'static str),
    Utf8,
    Orba(OrbaError),
    Json(String),
}

impl From<OrbaError> for Failure {
    fn from(e: OrbaError) -> Self {
        Failure::Orba(e)
    }
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OrbaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrbaStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            OrbaStatus::NullPointer
        }
        Ok(Err(Failure::Utf8)) => {
            set_error("string is not valid UTF-8");
            OrbaStatus::InvalidUtf8
        }
        Ok(Err(Failure::Json(msg))) => {
            set_error(msg);
            OrbaStatus::InvalidInput
        }
        Ok(Err(Failure::Orba(e))) => {
            set_error(e.to_string());
            if e.is_input_error() {
                OrbaStatus::InvalidInput
            } else {
                OrbaStatus::Computation
            }
        }
        Err(_) => {
            set_error("internal panic");
            OrbaStatus::Panic
        }
    }
}

unsafe fn slice<'a>(ptr: *const f64, len: size_t, what: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: the caller guarantees `len` readable doubles at `ptr`.
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn space<'a>(s: *const OrbaSpace) -> Result<&'a OrderedSpace, Failure> {
    // SAFETY: non-null handles come from `orba_space_from_json`.
    s.as_ref().map(|h| &*h.inner).ok_or(Failure::Null("space"))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: checked non-null; the caller guarantees it is writable.
    out.write(value);
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn orba_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the last error message on this thread, or NULL if there is none.
/// Free the result with [`orba_string_free`].
#[no_mangle]
pub extern "C" fn orba_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .and_then(|m| CString::new(m.replace('\0', " ")).ok())
            .map_or(std::ptr::null_mut(), CString::into_raw)
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library that was not freed yet.
#[no_mangle]
pub unsafe extern "C" fn orba_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in this library.
        drop(CString::from_raw(s));
    }
}

/// Builds a space from a JSON descriptor.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orba_space_from_json(json: *const c_char, out: *mut *mut OrbaSpace) -> OrbaStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| Failure::Utf8)?;
        let desc: SpaceDescriptor = serde_json::from_str(text).map_err(|e| Failure::Json(e.to_string()))?;
        let inner = Arc::new(desc.build("ffi")?);
        write(out, Box::into_raw(Box::new(OrbaSpace { inner })), "out")
    })
}

/// # Safety
/// `space` must be NULL or a handle from [`orba_space_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn orba_space_free(space: *mut OrbaSpace) {
    if !space.is_null() {
        // SAFETY: created by `Box::into_raw` in `orba_space_from_json`.
        drop(Box::from_raw(space));
    }
}

/// # Safety
/// `space` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn orba_space_dim(space: *const OrbaSpace, out: *mut size_t) -> OrbaStatus {
    guard(|| write(out, self::space(space)?.dim(), "out"))
}

/// `‖x‖`.
///
/// # Safety
/// `x` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orba_norm(space: *const OrbaSpace, x: *const f64, len: size_t, out: *mut f64) -> OrbaStatus {
    guard(|| {
        let s = self::space(space)?;
        let v = s.vector(slice(x, len, "x")?.to_vec())?;
        write(out, s.norm(&v)?, "out")
    })
}

/// `x ⪯ y`.
///
/// # Safety
/// `x` and `y` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orba_leq(
    space: *const OrbaSpace,
    x: *const f64,
    y: *const f64,
    len: size_t,
    out: *mut bool,
) -> OrbaStatus {
    guard(|| {
        let s = self::space(space)?;
        let a = s.vector(slice(x, len, "x")?.to_vec())?;
        let b = s.vector(slice(y, len, "y")?.to_vec())?;
        write(out, s.leq(&a, &b)?, "out")
    })
}

/// `x ∈ D⁺`.
///
/// # Safety
/// `x` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orba_cone_contains(
    space: *const OrbaSpace,
    x: *const f64,
    len: size_t,
    out: *mut bool,
) -> OrbaStatus {
    guard(|| {
        let s = self::space(space)?;
        let v = s.vector(slice(x, len, "x")?.to_vec())?;
        write(out, s.cone_contains(&v)?, "out")
    })
}

/// Minimal `a ∈ D⁺` with `-a ⪯ x ⪯ a`, written to `a_out` (`len` doubles), and `‖a‖`.
///
/// # Safety
/// `x` must point to `len` doubles, `a_out` to `len` writable doubles and `value_out` be writable.
#[no_mangle]
pub unsafe extern "C" fn orba_min_dominator(
    space: *const OrbaSpace,
    x: *const f64,
    len: size_t,
    a_out: *mut f64,
    value_out: *mut f64,
) -> OrbaStatus {
    guard(|| {
        let s = self::space(space)?;
        let v = s.vector(slice(x, len, "x")?.to_vec())?;
        let d = min_dominator(s, &v)?;
        if a_out.is_null() && len > 0 {
            return Err(Failure::Null("a_out"));
        }
        // SAFETY: `a_out` holds `len` doubles and the dimension was checked by `vector`.
        std::ptr::copy_nonoverlapping(d.a.coords().as_ptr(), a_out, len);
        write(value_out, d.value, "value_out")
    })
}

/// `N(x) = inf { ‖a‖ : a ∈ D⁺, -a ⪯ x ⪯ a }`.
///
/// # Safety
/// `x` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orba_n_norm(space: *const OrbaSpace, x: *const f64, len: size_t, out: *mut f64) -> OrbaStatus {
    guard(|| {
        let s = self::space(space)?;
        let v = s.vector(slice(x, len, "x")?.to_vec())?;
        write(out, n_norm(s, &v)?, "out")
    })
}

/// Seeded sampling of the dominating constant and the normality ratio.
///
/// # Safety
/// The output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn orba_scan(
    space: *const OrbaSpace,
    samples: size_t,
    seed: u64,
    c_lower_out: *mut f64,
    normality_out: *mut f64,
) -> OrbaStatus {
    guard(|| {
        let r = scan(self::space(space)?, &ScanConfig::new(samples, seed))?;
        write(c_lower_out, r.c_lower, "c_lower_out")?;
        write(normality_out, r.normality_ratio, "normality_out")
    })
}

/// `Σ |f_i| w_i ν_i`.
///
/// # Safety
/// `w`, `nu` and `f` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orba_koethe_norm(
    w: *const f64,
    nu: *const f64,
    f: *const f64,
    len: size_t,
    out: *mut f64,
) -> OrbaStatus {
    guard(|| {
        let v = koethe_norm(slice(w, len, "w")?, slice(nu, len, "nu")?, slice(f, len, "f")?)?;
        write(out, v, "out")
    })
}

/// The merged norm of two weighted L1 function norms.
///
/// # Safety
/// `w1`, `w2`, `nu` and `f` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orba_merged_norm(
    w1: *const f64,
    w2: *const f64,
    nu: *const f64,
    f: *const f64,
    len: size_t,
    out: *mut f64,
) -> OrbaStatus {
    guard(|| {
        let v = merged_norm(
            slice(w1, len, "w1")?,
            slice(w2, len, "w2")?,
            slice(nu, len, "nu")?,
            slice(f, len, "f")?,
        )?;
        write(out, v, "out")
    })
}

/// `max |f_i| / u_i`; fails when `f` leaves the ideal of `u`.
///
/// # Safety
/// `u` and `f` must point to `len` doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn orba_principal_ideal_norm(
    u: *const f64,
    f: *const f64,
    len: size_t,
    out: *mut f64,
) -> OrbaStatus {
    guard(|| {
        let v = principal_ideal_norm(slice(u, len, "u")?, slice(f, len, "f")?)?;
        write(out, v, "out")
    })
}
