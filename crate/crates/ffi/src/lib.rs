//! C ABI over `enriques-phi`.
//!
//! Every function returns an [`EpStatus`]; results go through out-pointers.
//! Series are opaque [`EpSeries`] handles released with [`ep_series_free`];
//! strings handed out are released with [`ep_string_free`]. The message of the
//! last failure on the calling thread is available from [`ep_last_error`].
//! Panics are caught at the boundary and reported as `EP_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use enriques_phi::kummer::{norm_identity_check, ProductPoint};
use enriques_phi::phi::{phi1_boundary, phi2_boundary};
use enriques_phi::qseries::ExactSeries;
use enriques_phi::resultant::{macaulay_resultant, QuadricTriple};
use enriques_phi::verify::{find_check, run_check, Context, VerifyConfig};
use enriques_phi::Error;

/// Result codes shared by all entry points.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Overflow = 3,
    Singular = 4,
    Convergence = 5,
    Budget = 6,
    Lattice = 7,
    Discriminant = 8,
    NoMatch = 9,
    Serialization = 10,
    /// A verification check ran and did not pass.
    CheckFailed = 11,
    Panic = 12,
}

/// Opaque truncated q-series.
pub struct EpSeries {
    series: ExactSeries,
    terms: Vec<(i64, i128)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EpStatus {
    match e {
        Error::Overflow(_) => EpStatus::Overflow,
        Error::DenominatorMismatch(..) | Error::InvalidArgument(_) => EpStatus::InvalidArgument,
        Error::Lattice(_) => EpStatus::Lattice,
        Error::Singular(_) => EpStatus::Singular,
        Error::Convergence(_) => EpStatus::Convergence,
        Error::Budget(_) => EpStatus::Budget,
        Error::Discriminant(_) => EpStatus::Discriminant,
        Error::NoMatch(_) => EpStatus::NoMatch,
        Error::Serde(_) => EpStatus::Serialization,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<EpStatus, Error>) -> EpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(e)) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside enriques-phi");
            EpStatus::Panic
        }
    }
}

fn null_error(name: &str) -> Error {
    Error::InvalidArgument(format!("{name} is null"))
}

unsafe fn c_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Error> {
    if p.is_null() {
        return Err(null_error(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Error::InvalidArgument(format!("{name} is not UTF-8")))
}

fn hand_out(s: String, out: *mut *mut c_char) -> Result<EpStatus, Error> {
    let c = CString::new(s).map_err(|_| Error::Serde("interior NUL in output".into()))?;
    unsafe { *out = c.into_raw() };
    Ok(EpStatus::Ok)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn ep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Boundary form of `Φ_level` truncated below `q^order`.
///
/// # Safety
/// `out` must be a valid pointer; the handle is released with [`ep_series_free`].
#[no_mangle]
pub unsafe extern "C" fn ep_phi_boundary(level: u8, order: i64, out: *mut *mut EpSeries) -> EpStatus {
    guard(|| {
        if out.is_null() {
            return Ok(EpStatus::NullPointer);
        }
        let series = match level {
            1 => phi1_boundary(order)?,
            2 => phi2_boundary(order)?,
            _ => return Err(Error::InvalidArgument(format!("level {level} is not 1 or 2"))),
        };
        let terms = series.terms().map(|(e, c)| (e, c.re)).collect();
        *out = Box::into_raw(Box::new(EpSeries { series, terms }));
        Ok(EpStatus::Ok)
    })
}

/// Number of nonzero terms.
///
/// # Safety
/// `s` must be a live handle and `len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ep_series_len(s: *const EpSeries, len: *mut usize) -> EpStatus {
    if s.is_null() || len.is_null() {
        return EpStatus::NullPointer;
    }
    *len = (*s).terms.len();
    EpStatus::Ok
}

/// Exponent numerator, denominator and rational-integer coefficient of term `index`.
///
/// # Safety
/// `s` must be a live handle; the out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_series_term(
    s: *const EpSeries,
    index: usize,
    exponent: *mut i64,
    den: *mut i64,
    coeff: *mut i64,
) -> EpStatus {
    guard(|| {
        if s.is_null() || exponent.is_null() || den.is_null() || coeff.is_null() {
            return Ok(EpStatus::NullPointer);
        }
        let s = &*s;
        let (e, c) = *s.terms.get(index).ok_or_else(|| Error::InvalidArgument(format!("term {index} out of range")))?;
        *exponent = e;
        *den = s.series.den();
        *coeff = i64::try_from(c).map_err(|_| Error::Overflow("coefficient exceeds 64 bits"))?;
        Ok(EpStatus::Ok)
    })
}

/// Releases a series handle; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ep_series_free(s: *mut EpSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Exact resultant of three symmetric 3×3 forms given as 27 numerators and
/// 27 positive denominators in row-major order, form by form. The result is
/// written as a `"p/q"` (or `"p"`) string.
///
/// # Safety
/// `num` and `den` must point to 27 values each; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_resultant(num: *const i64, den: *const i64, out: *mut *mut c_char) -> EpStatus {
    guard(|| {
        if num.is_null() || den.is_null() || out.is_null() {
            return Ok(EpStatus::NullPointer);
        }
        let (num, den) = (std::slice::from_raw_parts(num, 27), std::slice::from_raw_parts(den, 27));
        if den.contains(&0) {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let q = |k: usize| BigRational::new(BigInt::from(num[k]), BigInt::from(den[k]));
        let forms = std::array::from_fn(|f| std::array::from_fn(|r| std::array::from_fn(|c| q(9 * f + 3 * r + c))));
        let r = macaulay_resultant(&QuadricTriple::new(forms)?)?;
        let text = if r.is_integer() { r.numer().to_string() } else { r.to_string() };
        hand_out(text, out)
    })
}

/// Relative residual of the norm identity at `(τ1, τ2)` for a partition such as `"126/345"`.
///
/// # Safety
/// `partition` must be a NUL-terminated string and `residual` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ep_norm_identity_residual(
    tau1_re: f64,
    tau1_im: f64,
    tau2_re: f64,
    tau2_im: f64,
    partition: *const c_char,
    residual: *mut f64,
) -> EpStatus {
    guard(|| {
        if residual.is_null() {
            return Ok(EpStatus::NullPointer);
        }
        let part = c_str(partition, "partition")?.parse()?;
        let p = ProductPoint::new(Complex64::new(tau1_re, tau1_im), Complex64::new(tau2_re, tau2_im))?;
        *residual = norm_identity_check(&p, part)?.residual;
        Ok(EpStatus::Ok)
    })
}

/// Runs one verification check with default tolerances and writes its JSON
/// report to `report` (may be null). Returns `EP_STATUS_CHECK_FAILED` when the
/// check ran and did not pass.
///
/// # Safety
/// `id` must be a NUL-terminated string; `report`, if not null, must be valid.
#[no_mangle]
pub unsafe extern "C" fn ep_verify(id: *const c_char, seed: u64, report: *mut *mut c_char) -> EpStatus {
    guard(|| {
        let check = find_check(c_str(id, "id")?)?;
        let config = VerifyConfig::default_config()?;
        let r = run_check(&check, &Context { config: &config, seed }, false);
        if !report.is_null() {
            hand_out(serde_json::to_string(&r).map_err(Error::from)?, report)?;
        }
        if r.passed() {
            Ok(EpStatus::Ok)
        } else {
            set_error(&format!("check {} did not pass", r.id));
            Ok(EpStatus::CheckFailed)
        }
    })
}
