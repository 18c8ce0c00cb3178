//! C ABI over the `hyperpath` library.
//!
//! Spaces and sets are opaque heap handles released with their `_free`
//! functions. Every fallible call returns an [`HpStatus`]; on failure the
//! message is available from [`hp_last_error`] on the same thread. Strings
//! returned through out-parameters are released with [`hp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use hyperpath::cli::run_job;
use hyperpath::hyperspace::{hausdorff_distance, FiniteSubset};
use hyperpath::metric::{GroundSpace, SpaceConfig};
use hyperpath::paths::{lipschitz_certificate, two_leg_quasiconvex_path, DEFAULT_DEPTH};
use hyperpath::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Precondition = 4,
    Capacity = 5,
    Unsupported = 6,
    Parse = 7,
    Io = 8,
    /// The job ran but a certificate in its report failed.
    CertificateFailed = 9,
    Panic = 10,
}

/// A ground metric space.
pub struct HpSpace {
    inner: GroundSpace,
}

/// A finite subset of a ground space, in canonical order.
pub struct HpSet {
    inner: FiniteSubset,
    width: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HpStatus {
    match e {
        Error::InvalidPoint(_) | Error::InvalidSpace(_) | Error::Parameter(_) => HpStatus::InvalidArgument,
        Error::Domain(_) => HpStatus::Domain,
        Error::Precondition(_) | Error::CapViolation { .. } => HpStatus::Precondition,
        Error::Capacity { .. } => HpStatus::Capacity,
        Error::Unsupported(_) => HpStatus::Unsupported,
        Error::Parse(_) | Error::Json(_) | Error::Csv(_) => HpStatus::Parse,
        Error::Io(_) => HpStatus::Io,
    }
}

/// Runs `f`, converting errors and panics into a status and message.
fn guard(f: impl FnOnce() -> Result<(), (HpStatus, String)>) -> HpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            HpStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            HpStatus::Panic
        }
    }
}

fn lib(e: Error) -> (HpStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (HpStatus, String) {
    (HpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (HpStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (HpStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (HpStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Euclidean space of dimension `dim >= 1`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hp_space_euclidean(dim: usize, out: *mut *mut HpSpace) -> HpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = GroundSpace::euclidean(dim).map_err(lib)?;
        emit(out, HpSpace { inner });
        Ok(())
    })
}

/// The union of the two coordinate axes of the plane, with the taxicab metric.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn hp_space_taxicab_cross(out: *mut *mut HpSpace) -> HpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        emit(
            out,
            HpSpace {
                inner: GroundSpace::TaxicabCross,
            },
        );
        Ok(())
    })
}

/// Space from a JSON configuration such as `{"kind":"euclidean","dim":2}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hp_space_from_json(json: *const c_char, out: *mut *mut HpSpace) -> HpStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cfg: SpaceConfig = serde_json::from_str(text).map_err(|e| lib(e.into()))?;
        let inner = GroundSpace::from_config(&cfg).map_err(lib)?;
        emit(out, HpSpace { inner });
        Ok(())
    })
}

/// # Safety
/// `space` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hp_space_free(space: *mut HpSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of doubles describing one point of `space`.
///
/// # Safety
/// `space` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hp_space_point_width(space: *const HpSpace) -> usize {
    space.as_ref().map_or(0, |s| s.inner.raw_width())
}

/// Set of `count` points read row-major from `coords`, each
/// `hp_space_point_width(space)` doubles long. Duplicates merge.
///
/// # Safety
/// `coords` must point to `count * width` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hp_set_new(
    space: *const HpSpace,
    coords: *const f64,
    count: usize,
    out: *mut *mut HpSet,
) -> HpStatus {
    guard(|| {
        let space = &deref(space, "space")?.inner;
        if coords.is_null() {
            return Err(null("coords"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let width = space.raw_width();
        let flat = std::slice::from_raw_parts(
            coords,
            count
                .checked_mul(width)
                .ok_or_else(|| (HpStatus::InvalidArgument, "coordinate count overflows".to_string()))?,
        );
        let rows: Vec<Vec<f64>> = flat.chunks(width).map(<[f64]>::to_vec).collect();
        let inner = FiniteSubset::from_raw(space, &rows).map_err(lib)?;
        emit(out, HpSet { inner, width });
        Ok(())
    })
}

/// Number of distinct points in the set.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hp_set_len(set: *const HpSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.len())
}

/// Copies the canonical coordinates, row-major, into `buf` of `cap`
/// doubles; `cap` must be at least `len * width`.
///
/// # Safety
/// `buf` must point to `cap` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn hp_set_coords(set: *const HpSet, buf: *mut f64, cap: usize) -> HpStatus {
    guard(|| {
        let set = deref(set, "set")?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let need = set.inner.len() * set.width;
        if cap < need {
            return Err((
                HpStatus::InvalidArgument,
                format!("buffer holds {cap} doubles, need {need}"),
            ));
        }
        let out = std::slice::from_raw_parts_mut(buf, need);
        for (row, p) in out.chunks_mut(set.width.max(1)).zip(set.inner.points()) {
            row.copy_from_slice(&p.raw());
        }
        Ok(())
    })
}

/// # Safety
/// `set` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hp_set_free(set: *mut HpSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Hausdorff distance between two sets of the same space.
///
/// # Safety
/// All handles must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hp_hausdorff(
    space: *const HpSpace,
    a: *const HpSet,
    b: *const HpSet,
    out: *mut f64,
) -> HpStatus {
    guard(|| {
        let space = &deref(space, "space")?.inner;
        let (a, b) = (deref(a, "a")?, deref(b, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        *out = hausdorff_distance(space, &a.inner, &b.inner);
        Ok(())
    })
}

/// Two-leg path from `x` to `y` through sets of at most `n` points. Writes
/// the intermediate set, the grid length estimate and the Lipschitz
/// constant of the path. Null out-pointers are skipped.
///
/// # Safety
/// All handles must be live; non-null out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hp_two_leg(
    space: *const HpSpace,
    x: *const HpSet,
    y: *const HpSet,
    n: usize,
    out_midpoint: *mut *mut HpSet,
    out_length: *mut f64,
    out_lipschitz: *mut f64,
) -> HpStatus {
    guard(|| {
        let space = &deref(space, "space")?.inner;
        let (x, y) = (deref(x, "x")?, deref(y, "y")?);
        let path = two_leg_quasiconvex_path(space, &x.inner, &y.inner, n).map_err(lib)?;
        let cert = lipschitz_certificate(space, &path, path.declared_lipschitz(), DEFAULT_DEPTH).map_err(lib)?;
        if !out_midpoint.is_null() {
            emit(
                out_midpoint,
                HpSet {
                    inner: path.midpoint.clone(),
                    width: x.width,
                },
            );
        }
        if !out_length.is_null() {
            *out_length = cert.length_lower_bound;
        }
        if !out_lipschitz.is_null() {
            *out_lipschitz = path.declared_lipschitz();
        }
        Ok(())
    })
}

/// Runs a JSON job (the format accepted by `hyperpath --job`) and returns its
/// report in `out`. The report is also produced when the status is
/// `HP_STATUS_CERTIFICATE_FAILED`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn hp_run_job_json(json: *const c_char, out: *mut *mut c_char) -> HpStatus {
    let mut failed = false;
    let status = guard(|| {
        let text = str_arg(json, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let outcome = run_job(text).map_err(lib)?;
        let report = CString::new(outcome.report).map_err(|_| (HpStatus::Io, "report holds a NUL byte".to_string()))?;
        *out = report.into_raw();
        failed = !outcome.passed;
        Ok(())
    });
    if status == HpStatus::Ok && failed {
        set_last_error("certificate failed");
        return HpStatus::CertificateFailed;
    }
    status
}

/// Message for the last failing call on this thread; empty after success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn hp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn hp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
