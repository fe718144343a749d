//! C ABI over `klmasks`.
//!
//! Permutations and mask sets are opaque handles created by `*_new`/`*_parse`
//! functions and released with the matching `*_free`. Every fallible call
//! returns a [`KlmStatus`]; the message of the most recent failure on the
//! calling thread is available from [`klm_last_error`]. Strings handed out by
//! the library must be released with [`klm_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use klmasks::construct1::{StepVariant, VariantConstruction};
use klmasks::error::Error;
use klmasks::kl::kl_polynomial;
use klmasks::mask::MaskSet;
use klmasks::perm::Perm;
use klmasks::verify::{run_suite, Suite};
use klmasks::zel::{construction2_set, ordering_by_index, Variant};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KlmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Precondition = 5,
    GuardExceeded = 6,
    BufferTooSmall = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KlmStepVariant {
    UpSteps = 0,
    DownSteps = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KlmDiagonalVariant {
    NeSw = 0,
    NwSe = 1,
}

/// Opaque permutation handle.
pub struct KlmPerm(Perm);

/// Opaque handle to a set of masks on a fixed reduced word.
pub struct KlmMaskSet(MaskSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KlmStatus {
    match e {
        Error::Parse(_) | Error::InvalidPermutation(_) => KlmStatus::Parse,
        Error::RankMismatch(..) | Error::InvalidGenerator(..) | Error::NotReduced | Error::LengthMismatch { .. } => {
            KlmStatus::InvalidArgument
        }
        Error::NotCograssmannian(_) | Error::Precondition(_) | Error::NotInImage(_) | Error::NotNeat => {
            KlmStatus::Precondition
        }
        Error::GuardExceeded(_) => KlmStatus::GuardExceeded,
        Error::Internal(_) => KlmStatus::Internal,
    }
}

fn fail(status: KlmStatus, msg: impl Into<String>) -> KlmStatus {
    set_error(msg.into());
    status
}

fn guard(f: impl FnOnce() -> Result<(), KlmStatus>) -> KlmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KlmStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(KlmStatus::Internal, "panic inside klmasks"),
    }
}

fn lib(e: Error) -> KlmStatus {
    let s = status_of(&e);
    fail(s, e.to_string())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, KlmStatus> {
    if p.is_null() {
        return Err(fail(KlmStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(KlmStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, KlmStatus> {
    p.as_ref().ok_or_else(|| fail(KlmStatus::NullPointer, "null handle"))
}

unsafe fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, KlmStatus> {
    p.as_mut().ok_or_else(|| fail(KlmStatus::NullPointer, "null output pointer"))
}

fn to_c_string(s: String) -> Result<*mut c_char, KlmStatus> {
    CString::new(s).map(CString::into_raw).map_err(|_| fail(KlmStatus::Internal, "interior nul in output"))
}

/// Message of the last failure on this thread, or null. Owned by the library;
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn klm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn klm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses one-line notation such as `"4231"` or `"1,3,2"`.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn klm_perm_parse(text: *const c_char, out: *mut *mut KlmPerm) -> KlmStatus {
    guard(|| {
        let out = out_arg(out)?;
        let p: Perm = str_arg(text)?.parse().map_err(lib)?;
        *out = Box::into_raw(Box::new(KlmPerm(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`klm_perm_parse`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn klm_perm_free(p: *mut KlmPerm) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn klm_perm_rank(p: *const KlmPerm) -> usize {
    p.as_ref().map_or(0, |p| p.0.n())
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn klm_perm_length(p: *const KlmPerm) -> usize {
    p.as_ref().map_or(0, |p| p.0.length())
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn klm_perm_is_cograssmannian(p: *const KlmPerm) -> bool {
    p.as_ref().is_some_and(|p| p.0.is_cograssmannian())
}

/// Writes the coefficients of `P_{x,w}` (constant term first) into `coeffs`.
/// `len` receives the number of coefficients; when it exceeds `cap` nothing is
/// written and `KLM_STATUS_BUFFER_TOO_SMALL` is returned.
///
/// # Safety
/// `x`, `w` must be live handles, `coeffs` must have room for `cap` values
/// (it may be null when `cap` is 0) and `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn klm_kl_polynomial(
    x: *const KlmPerm,
    w: *const KlmPerm,
    coeffs: *mut i64,
    cap: usize,
    len: *mut usize,
) -> KlmStatus {
    guard(|| {
        let (x, w, len) = (ref_arg(x)?, ref_arg(w)?, out_arg(len)?);
        let p = kl_polynomial(&x.0, &w.0).map_err(lib)?;
        let c = p.coeffs();
        *len = c.len();
        if c.len() > cap {
            return Err(fail(KlmStatus::BufferTooSmall, format!("need {} coefficients", c.len())));
        }
        if !c.is_empty() {
            if coeffs.is_null() {
                return Err(fail(KlmStatus::NullPointer, "null coefficient buffer"));
            }
            ptr::copy_nonoverlapping(c.as_ptr(), coeffs, c.len());
        }
        Ok(())
    })
}

/// The mask set of the first construction for a cograssmannian `w`.
///
/// # Safety
/// `w` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn klm_construction1_new(
    w: *const KlmPerm,
    variant: KlmStepVariant,
    out: *mut *mut KlmMaskSet,
) -> KlmStatus {
    guard(|| {
        let (w, out) = (ref_arg(w)?, out_arg(out)?);
        let v = match variant {
            KlmStepVariant::UpSteps => StepVariant::UpSteps,
            KlmStepVariant::DownSteps => StepVariant::DownSteps,
        };
        let set = VariantConstruction::new(&w.0, v).and_then(|c| c.construction1_set()).map_err(lib)?;
        *out = Box::into_raw(Box::new(KlmMaskSet(set)));
        Ok(())
    })
}

/// The mask set of the second construction. A negative `ordering` selects the
/// first neat ordering; otherwise it indexes all orderings lexicographically.
///
/// # Safety
/// `w` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn klm_construction2_new(
    w: *const KlmPerm,
    ordering: i64,
    variant: KlmDiagonalVariant,
    out: *mut *mut KlmMaskSet,
) -> KlmStatus {
    guard(|| {
        let (w, out) = (ref_arg(w)?, out_arg(out)?);
        let index = usize::try_from(ordering).ok();
        let v = match variant {
            KlmDiagonalVariant::NeSw => Variant::NeSw,
            KlmDiagonalVariant::NwSe => Variant::NwSe,
        };
        let set = ordering_by_index(&w.0, index).and_then(|o| construction2_set(&o, v)).map_err(lib)?;
        *out = Box::into_raw(Box::new(KlmMaskSet(set)));
        Ok(())
    })
}

/// # Safety
/// `s` must come from a constructor of this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn klm_mask_set_free(s: *mut KlmMaskSet) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn klm_mask_set_len(s: *const KlmMaskSet) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// Length of the underlying word, which is the length of every mask.
///
/// # Safety
/// `s` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn klm_mask_set_word_len(s: *const KlmMaskSet) -> usize {
    s.as_ref().map_or(0, |s| s.0.word.len())
}

/// Copies mask `index` as 0/1 bytes into `bits`, which must hold the word length.
///
/// # Safety
/// `s` must be a live handle and `bits` must have room for `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn klm_mask_set_get(s: *const KlmMaskSet, index: usize, bits: *mut u8, cap: usize) -> KlmStatus {
    guard(|| {
        let s = ref_arg(s)?;
        let m = s.0.masks.get(index).ok_or_else(|| fail(KlmStatus::InvalidArgument, format!("no mask {index}")))?;
        if m.len() > cap {
            return Err(fail(KlmStatus::BufferTooSmall, format!("need {} bytes", m.len())));
        }
        if bits.is_null() && !m.is_empty() {
            return Err(fail(KlmStatus::NullPointer, "null bit buffer"));
        }
        for (j, &b) in m.iter().enumerate() {
            *bits.add(j) = u8::from(b);
        }
        Ok(())
    })
}

/// Deodhar's conditions and the comparison with Kazhdan-Lusztig polynomials.
/// `passed` is true when the set is bounded, admissible and reproduces every
/// `P_{x,w}`.
///
/// # Safety
/// `s` must be a live handle and `passed` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn klm_mask_set_deodhar(s: *const KlmMaskSet, passed: *mut bool) -> KlmStatus {
    guard(|| {
        let (s, passed) = (ref_arg(s)?, out_arg(passed)?);
        *passed = match s.0.deodhar_check() {
            Ok(r) => r.passed(),
            Err(Error::Precondition(_)) => false,
            Err(e) => return Err(lib(e)),
        };
        Ok(())
    })
}

/// The set as JSON: `{"n", "word", "masks"}` with masks as bit strings.
///
/// # Safety
/// `s` must be a live handle and `json` a valid pointer. The string must be
/// released with [`klm_string_free`].
#[no_mangle]
pub unsafe extern "C" fn klm_mask_set_to_json(s: *const KlmMaskSet, json: *mut *mut c_char) -> KlmStatus {
    guard(|| {
        let (s, json) = (ref_arg(s)?, out_arg(json)?);
        let text = serde_json::to_string(&s.0).map_err(|e| fail(KlmStatus::Internal, e.to_string()))?;
        *json = to_c_string(text)?;
        Ok(())
    })
}

/// Runs a verification suite by name (`"all"`, `"paper-examples"`, ...) and
/// returns the JSON report. `passed` tells whether every check passed.
///
/// # Safety
/// `suite` must be a nul-terminated string; `json` and `passed` must be valid.
#[no_mangle]
pub unsafe extern "C" fn klm_verify(
    suite: *const c_char,
    n_max: usize,
    json: *mut *mut c_char,
    passed: *mut bool,
) -> KlmStatus {
    guard(|| {
        let (json, passed) = (out_arg(json)?, out_arg(passed)?);
        let suite: Suite = str_arg(suite)?.parse().map_err(lib)?;
        let report = run_suite(suite, n_max).map_err(lib)?;
        let text = serde_json::to_string(&report).map_err(|e| fail(KlmStatus::Internal, e.to_string()))?;
        *json = to_c_string(text)?;
        *passed = report.passed();
        Ok(())
    })
}
