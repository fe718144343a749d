use std::ffi::{CStr, CString};
use std::ptr;

use klmasks_ffi::*;

fn perm(s: &str) -> *mut KlmPerm {
    let text = CString::new(s).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { klm_perm_parse(text.as_ptr(), &mut p) }, KlmStatus::Ok);
    p
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { klm_string_free(s) };
    out
}

#[test]
fn perm_round_trip() {
    let p = perm("4231");
    unsafe {
        assert_eq!(klm_perm_rank(p), 4);
        assert_eq!(klm_perm_length(p), 5);
        assert!(klm_perm_is_cograssmannian(p));
        klm_perm_free(p);
    }
}

#[test]
fn parse_errors_set_a_message() {
    let bad = CString::new("4221").unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { klm_perm_parse(bad.as_ptr(), &mut p) }, KlmStatus::Parse);
    assert!(p.is_null());
    let msg = unsafe { CStr::from_ptr(klm_last_error()) }.to_str().unwrap();
    assert!(!msg.is_empty());
    assert_eq!(unsafe { klm_perm_parse(ptr::null(), &mut p) }, KlmStatus::NullPointer);
}

#[test]
fn kl_polynomial_coefficients() {
    let (x, w) = (perm("1234"), perm("4231"));
    let mut len = 0usize;
    assert_eq!(unsafe { klm_kl_polynomial(x, w, ptr::null_mut(), 0, &mut len) }, KlmStatus::BufferTooSmall);
    assert_eq!(len, 2);
    let mut buf = [0i64; 4];
    assert_eq!(unsafe { klm_kl_polynomial(x, w, buf.as_mut_ptr(), buf.len(), &mut len) }, KlmStatus::Ok);
    assert_eq!(&buf[..len], &[1, 1]);
    unsafe {
        klm_perm_free(x);
        klm_perm_free(w);
    }
}

#[test]
fn construction1_handle() {
    let w = perm("4231");
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { klm_construction1_new(w, KlmStepVariant::UpSteps, &mut set) }, KlmStatus::Ok);
    unsafe {
        assert_eq!(klm_mask_set_len(set), 24);
        assert_eq!(klm_mask_set_word_len(set), 5);
        let mut bits = [9u8; 5];
        assert_eq!(klm_mask_set_get(set, 23, bits.as_mut_ptr(), 5), KlmStatus::Ok);
        assert_eq!(bits, [1, 1, 1, 1, 1]);
        assert_eq!(klm_mask_set_get(set, 24, bits.as_mut_ptr(), 5), KlmStatus::InvalidArgument);
        assert_eq!(klm_mask_set_get(set, 0, bits.as_mut_ptr(), 4), KlmStatus::BufferTooSmall);
        let mut passed = false;
        assert_eq!(klm_mask_set_deodhar(set, &mut passed), KlmStatus::Ok);
        assert!(passed);
        let mut json = ptr::null_mut();
        assert_eq!(klm_mask_set_to_json(set, &mut json), KlmStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
        assert_eq!(v["masks"].as_array().unwrap().len(), 24);
        klm_mask_set_free(set);
        klm_perm_free(w);
    }
}

#[test]
fn construction_preconditions() {
    let w = perm("1324");
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { klm_construction1_new(w, KlmStepVariant::DownSteps, &mut set) }, KlmStatus::Precondition);
    assert!(set.is_null());
    unsafe { klm_perm_free(w) };
}

#[test]
fn construction2_handle() {
    let w = perm("4231");
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { klm_construction2_new(w, -1, KlmDiagonalVariant::NeSw, &mut set) }, KlmStatus::Ok);
    let mut passed = false;
    unsafe {
        assert_eq!(klm_mask_set_len(set), 24);
        assert_eq!(klm_mask_set_deodhar(set, &mut passed), KlmStatus::Ok);
        klm_mask_set_free(set);
    }
    assert!(passed);
    assert_eq!(unsafe { klm_construction2_new(w, 7, KlmDiagonalVariant::NwSe, &mut set) }, KlmStatus::Precondition);
    unsafe { klm_perm_free(w) };
}

#[test]
fn verify_report() {
    let suite = CString::new("paper-examples").unwrap();
    let mut json = ptr::null_mut();
    let mut passed = false;
    assert_eq!(unsafe { klm_verify(suite.as_ptr(), 4, &mut json, &mut passed) }, KlmStatus::Ok);
    assert!(passed);
    let v: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(v["checks"][0]["name"], "paper-examples");
    let bad = CString::new("nope").unwrap();
    assert_eq!(unsafe { klm_verify(bad.as_ptr(), 4, &mut json, &mut passed) }, KlmStatus::Parse);
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        klm_perm_free(ptr::null_mut());
        klm_mask_set_free(ptr::null_mut());
        klm_string_free(ptr::null_mut());
        assert_eq!(klm_mask_set_len(ptr::null()), 0);
        let mut passed = false;
        assert_eq!(klm_mask_set_deodhar(ptr::null(), &mut passed), KlmStatus::NullPointer);
    }
}
