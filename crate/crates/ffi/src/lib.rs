//! C interface to `mws-core`.
//!
//! Objects are opaque handles created by `mws_*_new`-style functions and
//! released with the matching `*_free`. Every fallible call returns an
//! [`MwsStatus`]; on failure a message is available from
//! [`mws_last_error_message`] on the same thread. Strings returned through
//! out-parameters are owned by the caller and must be released with
//! [`mws_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use mws_core::bounds;
use mws_core::code::{EnumGuard, LinearCode, SpectrumReport};
use mws_core::constructions;
use mws_core::matrix::{parse_matrix, write_matrix};
use mws_core::{Error, FieldSpec};
use num_bigint::BigUint;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MwsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrimePower = 3,
    TooLarge = 4,
    RankDeficient = 5,
    NotQuasiMinimal = 6,
    Parse = 7,
    Internal = 8,
}

/// A finite field GF(q).
pub struct MwsField {
    inner: Arc<FieldSpec>,
}

/// A linear code with column multiplicities.
pub struct MwsCode {
    inner: LinearCode,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(MwsStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotPrimePower { .. } => MwsStatus::NotPrimePower,
            Error::TooLarge { .. } | Error::SearchSpaceTooLarge { .. } => MwsStatus::TooLarge,
            Error::RankDeficient { .. } => MwsStatus::RankDeficient,
            Error::NotQuasiMinimal => MwsStatus::NotQuasiMinimal,
            Error::Parse { .. } => MwsStatus::Parse,
            _ => MwsStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

fn set_last_error(message: Option<String>) {
    let c = message.map(|m| CString::new(m.replace('\0', " ")).unwrap_or_default());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn call(f: impl FnOnce() -> FfiResult<()>) -> MwsStatus {
    set_last_error(None);
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Failure(MwsStatus::Internal, format!("internal error: {msg}")))
    });
    match outcome {
        Ok(()) => MwsStatus::Ok,
        Err(Failure(status, message)) => {
            set_last_error(Some(message));
            status
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MwsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

fn need<T>(out: *mut T) -> FfiResult<()> {
    if out.is_null() {
        Err(null("output pointer"))
    } else {
        Ok(())
    }
}

unsafe fn put<T>(out: *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> FfiResult<()> {
    let c = CString::new(s).map_err(|_| Failure(MwsStatus::Internal, "string contains NUL".into()))?;
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(c.into_raw());
    Ok(())
}

unsafe fn put_code(out: *mut *mut MwsCode, code: LinearCode) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(Box::into_raw(Box::new(MwsCode { inner: code })));
    Ok(())
}

fn guard() -> FfiResult<EnumGuard> {
    Ok(EnumGuard::from_env()?)
}

fn to_json<T: serde::Serialize>(value: &T) -> FfiResult<String> {
    serde_json::to_string(value).map_err(|e| Failure(MwsStatus::Internal, e.to_string()))
}

/// Message for the most recent failed call on this thread, or NULL. The
/// pointer stays valid until the next `mws_*` call on the same thread.
#[no_mangle]
pub extern "C" fn mws_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn mws_status_name(status: MwsStatus) -> *const c_char {
    let s: &'static CStr = match status {
        MwsStatus::Ok => c"ok",
        MwsStatus::NullPointer => c"null pointer",
        MwsStatus::InvalidArgument => c"invalid argument",
        MwsStatus::NotPrimePower => c"not a prime power",
        MwsStatus::TooLarge => c"too large",
        MwsStatus::RankDeficient => c"rank deficient",
        MwsStatus::NotQuasiMinimal => c"not quasi-minimal",
        MwsStatus::Parse => c"parse error",
        MwsStatus::Internal => c"internal error",
    };
    s.as_ptr()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mws_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_field_new(q: u64, out: *mut *mut MwsField) -> MwsStatus {
    call(|| {
        need(out)?;
        let inner = constructions::field(q)?;
        put(out, Box::into_raw(Box::new(MwsField { inner })))
    })
}

/// # Safety
/// `field` must be NULL or a handle from [`mws_field_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn mws_field_free(field: *mut MwsField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Field order q, or 0 for a NULL handle.
///
/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mws_field_order(field: *const MwsField) -> u32 {
    field.as_ref().map_or(0, |f| f.inner.order())
}

/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_field_info_json(field: *const MwsField, out: *mut *mut c_char) -> MwsStatus {
    call(|| {
        need(out)?;
        let f = borrow(field, "field")?;
        put_string(out, to_json(&f.inner.info())?)
    })
}

/// Parses the text matrix format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_from_matrix_text(text: *const c_char, out: *mut *mut MwsCode) -> MwsStatus {
    call(|| {
        need(out)?;
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| Failure(MwsStatus::InvalidArgument, "text is not UTF-8".into()))?;
        put_code(out, parse_matrix(s)?)
    })
}

/// Builds a code from `k * n` row-major element indices.
///
/// # Safety
/// `entries` must point to `k * n` readable values and `out` be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_from_indices(
    field: *const MwsField,
    k: usize,
    n: usize,
    entries: *const u32,
    out: *mut *mut MwsCode,
) -> MwsStatus {
    call(|| {
        need(out)?;
        let f = borrow(field, "field")?;
        let len = k
            .checked_mul(n)
            .ok_or_else(|| Failure(MwsStatus::InvalidArgument, "k * n overflows".into()))?;
        if entries.is_null() && len > 0 {
            return Err(null("entries"));
        }
        let data = if len == 0 { Vec::new() } else { std::slice::from_raw_parts(entries, len).to_vec() };
        let code = LinearCode::from_raw(f.inner.clone(), k, n, data, vec![BigUint::from(1u32); n])?;
        put_code(out, code)
    })
}

/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_simplex(field: *const MwsField, k: usize, out: *mut *mut MwsCode) -> MwsStatus {
    call(|| {
        need(out)?;
        let f = borrow(field, "field")?;
        put_code(out, constructions::simplex(&f.inner, k, &guard()?)?)
    })
}

/// # Safety
/// `field` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_identity(field: *const MwsField, k: usize, out: *mut *mut MwsCode) -> MwsStatus {
    call(|| {
        need(out)?;
        let f = borrow(field, "field")?;
        put_code(out, constructions::identity_code(&f.inner, k)?)
    })
}

/// Replaces the column multiplicities; `count` must equal the base length.
///
/// # Safety
/// `multiplicities` must point to `count` readable values; `code` must be
/// live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_with_multiplicities(
    code: *const MwsCode,
    multiplicities: *const u64,
    count: usize,
    out: *mut *mut MwsCode,
) -> MwsStatus {
    call(|| {
        need(out)?;
        let c = borrow(code, "code")?;
        if multiplicities.is_null() && count > 0 {
            return Err(null("multiplicities"));
        }
        let m = if count == 0 {
            Vec::new()
        } else {
            std::slice::from_raw_parts(multiplicities, count).iter().copied().map(BigUint::from).collect()
        };
        put_code(out, constructions::generalized_repetition(&c.inner, m)?)
    })
}

/// Power-of-two embedding of a quasi-minimal code. Fails with
/// `NotQuasiMinimal` if the input is not QM, so the result is always MWS.
///
/// # Safety
/// `code` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_embed(code: *const MwsCode, out: *mut *mut MwsCode) -> MwsStatus {
    call(|| {
        need(out)?;
        let c = borrow(code, "code")?;
        let g = guard()?;
        let result = constructions::mws_pipeline(&constructions::Source::External(c.inner.clone()), &g)?;
        put_code(out, result.embedded)
    })
}

/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mws_code_free(code: *mut MwsCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mws_code_dimension(code: *const MwsCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.dimension())
}

/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mws_code_base_length(code: *const MwsCode) -> usize {
    code.as_ref().map_or(0, |c| c.inner.base_length())
}

/// # Safety
/// `code` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_is_qm(code: *const MwsCode, out: *mut bool) -> MwsStatus {
    call(|| {
        need(out)?;
        let c = borrow(code, "code")?;
        put(out, c.inner.is_qm(&guard()?)?)
    })
}

/// # Safety
/// `code` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_is_mws(code: *const MwsCode, out: *mut bool) -> MwsStatus {
    call(|| {
        need(out)?;
        let c = borrow(code, "code")?;
        put(out, c.inner.is_mws(&guard()?)?)
    })
}

/// Spectrum report as a JSON object.
///
/// # Safety
/// `code` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_spectrum_json(code: *const MwsCode, out: *mut *mut c_char) -> MwsStatus {
    call(|| {
        need(out)?;
        let c = borrow(code, "code")?;
        put_string(out, to_json(&SpectrumReport::build(&c.inner, &guard()?)?)?)
    })
}

/// # Safety
/// `code` must be live and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_code_matrix_text(code: *const MwsCode, out: *mut *mut c_char) -> MwsStatus {
    call(|| {
        need(out)?;
        let c = borrow(code, "code")?;
        put_string(out, write_matrix(&c.inner))
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_lambda_q(q: u64, out: *mut f64) -> MwsStatus {
    call(|| {
        need(out)?;
        put(out, bounds::lambda_q(q)?)
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_mu_q(q: u64, out: *mut f64) -> MwsStatus {
    call(|| {
        need(out)?;
        put(out, bounds::mu_q(q)?)
    })
}

/// Length lower bound for MWS codes, as a decimal string.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_lower_bound(q: u64, k: u32, out: *mut *mut c_char) -> MwsStatus {
    call(|| {
        need(out)?;
        if q < 2 || k == 0 {
            return Err(Failure(MwsStatus::InvalidArgument, "need q >= 2 and k >= 1".into()));
        }
        put_string(out, bounds::mws_lower_bound(q, k).to_string())
    })
}

/// Smallest length meeting the averaging condition, as a decimal string.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_eqbound_min_n(q: u64, k: u32, out: *mut *mut c_char) -> MwsStatus {
    call(|| {
        need(out)?;
        if q < 2 || k == 0 {
            return Err(Failure(MwsStatus::InvalidArgument, "need q >= 2 and k >= 1".into()));
        }
        put_string(out, bounds::eqbound_min_n(q, k)?.n.to_string())
    })
}

/// Bounds report for one `(q, k)` cell as a JSON object.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn mws_bounds_json(q: u64, k: u32, out: *mut *mut c_char) -> MwsStatus {
    call(|| {
        need(out)?;
        put_string(out, to_json(&bounds::bounds_report(q, k)?)?)
    })
}
