use std::ffi::{CStr, CString};
use std::ptr;

use poisson_forge_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { pf_string_free(s) };
    out
}

fn last_error() -> String {
    let p = pf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn bracket_through_handle() {
    let mut alg = ptr::null_mut();
    assert_eq!(unsafe { pf_algebra_builtin(&mut alg) }, PfStatus::Ok);
    let (f, g) = (CString::new("X2").unwrap(), CString::new("X1").unwrap());
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pf_bracket(alg, f.as_ptr(), g.as_ptr(), &mut out) }, PfStatus::Ok);
    assert_eq!(take(out), "-3*X1*X2");
    assert!(pf_last_error().is_null());

    let bad = CString::new("X2 +").unwrap();
    assert_eq!(unsafe { pf_bracket(alg, bad.as_ptr(), g.as_ptr(), &mut out) }, PfStatus::ParseError);
    assert!(!last_error().is_empty());
    unsafe { pf_algebra_free(alg) };
}

#[test]
fn algebra_from_json() {
    let json = CString::new(r#"{"variables":["x","y"],"brackets":{"2,1":"x*y"}}"#).unwrap();
    let mut alg = ptr::null_mut();
    assert_eq!(unsafe { pf_algebra_from_json(json.as_ptr(), &mut alg) }, PfStatus::Ok);
    let (f, g) = (CString::new("x").unwrap(), CString::new("y^-1").unwrap());
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pf_bracket(alg, f.as_ptr(), g.as_ptr(), &mut out) }, PfStatus::Ok);
    assert_eq!(take(out), "x*y^-1");
    unsafe { pf_algebra_free(alg) };

    let broken = CString::new(r#"{"variables":["x"]}"#).unwrap();
    assert_eq!(unsafe { pf_algebra_from_json(broken.as_ptr(), &mut alg) }, PfStatus::SchemaError);
}

#[test]
fn normal_form_and_parameters() {
    let e = CString::new("X3^2").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pf_normal_form(e.as_ptr(), ptr::null(), ptr::null(), &mut out) }, PfStatus::Ok);
    assert_eq!(take(out), "2*alpha + 3*x1*x4 + x2*x5 - 2*x1*x3*x5");
    let a = CString::new("1/2").unwrap();
    assert_eq!(unsafe { pf_normal_form(e.as_ptr(), a.as_ptr(), ptr::null(), &mut out) }, PfStatus::Ok);
    assert_eq!(take(out), "1 + 3*x1*x4 + x2*x5 - 2*x1*x3*x5");
    let bad = CString::new("half").unwrap();
    assert_ne!(unsafe { pf_normal_form(e.as_ptr(), bad.as_ptr(), ptr::null(), &mut out) }, PfStatus::Ok);
}

#[test]
fn suites_and_null_pointers() {
    let name = CString::new("casimir").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { pf_verify_suite(name.as_ptr(), 1, &mut out) }, PfStatus::Ok);
    let report: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(report["status"], "pass");
    assert_eq!(report["suites"][0]["items"].as_array().unwrap().len(), 12);

    let unknown = CString::new("nope").unwrap();
    assert_eq!(unsafe { pf_verify_suite(unknown.as_ptr(), 1, &mut out) }, PfStatus::InvalidArgument);
    assert_eq!(unsafe { pf_verify_suite(ptr::null(), 1, &mut out) }, PfStatus::NullPointer);
    assert_eq!(unsafe { pf_algebra_builtin(ptr::null_mut()) }, PfStatus::NullPointer);
    unsafe {
        pf_algebra_free(ptr::null_mut());
        pf_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/poisson_forge.h");
    for f in [
        "pf_algebra_builtin",
        "pf_algebra_from_json",
        "pf_algebra_free",
        "pf_bracket",
        "pf_normal_form",
        "pf_verify_suite",
        "pf_last_error",
        "pf_string_free",
        "PF_STATUS_NULL_POINTER",
        "typedef struct PfAlgebra PfAlgebra",
    ] {
        assert!(header.contains(f), "{f}");
    }
}
