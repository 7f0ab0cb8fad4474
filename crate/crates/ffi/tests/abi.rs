//! Calls the exported functions as a C caller would.

use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use enriques_phi_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { ep_string_free(p) };
    s
}

#[test]
fn version_is_the_package_version() {
    let v = unsafe { CStr::from_ptr(ep_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn level2_boundary_starts_at_256_q_squared() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ep_phi_boundary(2, 10, &mut s) }, EpStatus::Ok);
    let mut len = 0usize;
    assert_eq!(unsafe { ep_series_len(s, &mut len) }, EpStatus::Ok);
    assert!(len > 1);
    let (mut e, mut d, mut c) = (0i64, 0i64, 0i64);
    assert_eq!(unsafe { ep_series_term(s, 0, &mut e, &mut d, &mut c) }, EpStatus::Ok);
    assert_eq!((e, d, c), (2, 1, 256));
    assert_eq!(unsafe { ep_series_term(s, len, &mut e, &mut d, &mut c) }, EpStatus::InvalidArgument);
    unsafe { ep_series_free(s) };
}

#[test]
fn bad_level_sets_the_error_message() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ep_phi_boundary(3, 10, &mut s) }, EpStatus::InvalidArgument);
    assert!(s.is_null());
    let msg = unsafe { CStr::from_ptr(ep_last_error()) }.to_str().unwrap();
    assert!(msg.contains("level 3"), "{msg}");
}

#[test]
fn null_pointers_are_reported() {
    assert_eq!(unsafe { ep_phi_boundary(1, 10, ptr::null_mut()) }, EpStatus::NullPointer);
    assert_eq!(unsafe { ep_series_len(ptr::null(), ptr::null_mut()) }, EpStatus::NullPointer);
    unsafe { ep_series_free(ptr::null_mut()) };
    unsafe { ep_string_free(ptr::null_mut()) };
}

fn diagonal(a: [[i64; 3]; 3]) -> [i64; 27] {
    let mut m = [0i64; 27];
    for f in 0..3 {
        for j in 0..3 {
            m[9 * f + 4 * j] = a[f][j];
        }
    }
    m
}

#[test]
fn resultant_of_unit_and_diagonal_triples() {
    let den = [1i64; 27];
    let mut out = ptr::null_mut();
    let unit = diagonal([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    assert_eq!(unsafe { ep_resultant(unit.as_ptr(), den.as_ptr(), &mut out) }, EpStatus::Ok);
    assert_eq!(take_string(out), "1");
    // det [[2,1,0],[0,1,1],[1,0,3]] = 7, so R = 7⁴
    let a = diagonal([[2, 1, 0], [0, 1, 1], [1, 0, 3]]);
    assert_eq!(unsafe { ep_resultant(a.as_ptr(), den.as_ptr(), &mut out) }, EpStatus::Ok);
    assert_eq!(take_string(out), "2401");
    let mut halves = [1i64; 27];
    halves[0] = 2;
    assert_eq!(unsafe { ep_resultant(unit.as_ptr(), halves.as_ptr(), &mut out) }, EpStatus::Ok);
    assert_eq!(take_string(out), "1/16");
}

#[test]
fn asymmetric_forms_are_rejected() {
    let den = [1i64; 27];
    let mut m = diagonal([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
    m[1] = 5;
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ep_resultant(m.as_ptr(), den.as_ptr(), &mut out) }, EpStatus::InvalidArgument);
}

#[test]
fn norm_identity_residual_is_small() {
    let part = CString::new("126/345").unwrap();
    let mut r = f64::NAN;
    assert_eq!(unsafe { ep_norm_identity_residual(0.0, 1.1, 0.9, 1.3, part.as_ptr(), &mut r) }, EpStatus::Ok);
    assert!(r < 1e-6, "{r}");
    let bad = CString::new("123/456").unwrap();
    assert_eq!(unsafe { ep_norm_identity_residual(0.0, 1.1, 0.9, 1.3, bad.as_ptr(), &mut r) }, EpStatus::InvalidArgument);
}

#[test]
fn verify_one_check_through_the_abi() {
    let id = CString::new("c-stream").unwrap();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { ep_verify(id.as_ptr(), 7, &mut report) }, EpStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert_eq!(v["status"], "pass");
    let unknown = CString::new("no-such-check").unwrap();
    assert_eq!(unsafe { ep_verify(unknown.as_ptr(), 7, ptr::null_mut()) }, EpStatus::InvalidArgument);
}

#[test]
fn header_declares_every_entry_point_and_parses_as_c() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/enriques_phi.h");
    let header = std::fs::read_to_string(&path).unwrap();
    for f in [
        "ep_version",
        "ep_last_error",
        "ep_string_free",
        "ep_phi_boundary",
        "ep_series_len",
        "ep_series_term",
        "ep_series_free",
        "ep_resultant",
        "ep_norm_identity_residual",
        "ep_verify",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing");
    }
    assert!(header.contains("typedef struct EpSeries EpSeries;"));
    // a C compiler is optional on the test host
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99"]).arg(&path).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
