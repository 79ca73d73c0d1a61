use std::ffi::{c_char, CStr, CString};
use std::ptr;

use serde_json::Value;
use srl_ffi::*;

fn take(s: *mut c_char) -> Value {
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { srl_string_free(s) };
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(srl_last_error()) }.to_string_lossy().into_owned()
}

fn group(spec: &str) -> *mut SrlGroup {
    let spec = CString::new(spec).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { srl_group_new(spec.as_ptr(), &mut g) }, SrlStatus::Ok);
    g
}

#[test]
fn group_lifecycle() {
    let g = group("PSL(2,7)");
    let mut degree = 0usize;
    assert_eq!(unsafe { srl_group_degree(g, &mut degree) }, SrlStatus::Ok);
    assert_eq!(degree, 8);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { srl_group_order(g, &mut s) }, SrlStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), "168");
    unsafe { srl_string_free(s) };
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { srl_survey_json(g, 0, &mut s) }, SrlStatus::Ok);
    let report = take(s);
    assert_eq!(report["order"], 168);
    assert!(report["classes"].as_array().unwrap().iter().all(|c| c["verdict"] == "PAIR_WITNESS"));
    unsafe { srl_group_free(g) };
    unsafe { srl_group_free(ptr::null_mut()) };
}

#[test]
fn witness_modes() {
    let g = group("Alt(5)");
    let x = CString::new("(1,2,3)").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { srl_witness_json(g, x.as_ptr(), 2, 0, 0, &mut s) }, SrlStatus::Ok);
    let r = take(s);
    assert_eq!(r["status"], "WITNESS_FOUND");
    assert_eq!(r["subgroup_order"], 60);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { srl_witness_json(g, x.as_ptr(), 2, 100, 3, &mut s) }, SrlStatus::Ok);
    assert_eq!(take(s)["mode"], "random");
    let odd = CString::new("(1,2)").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { srl_witness_json(g, odd.as_ptr(), 2, 0, 0, &mut s) }, SrlStatus::InvalidArgument);
    assert!(s.is_null());
    assert!(last_error().contains("not in the group"));
    unsafe { srl_group_free(g) };
}

#[test]
fn radical_audit_parse() {
    let g = group("Direct(Alt(5),Cyclic(3))");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { srl_radical_json(g, &mut s) }, SrlStatus::Ok);
    assert_eq!(take(s)["order"], 3);
    unsafe { srl_group_free(g) };
    let fam = CString::new("psl2").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { srl_audit_json(fam.as_ptr(), 3, 3, &mut s) }, SrlStatus::Ok);
    assert_eq!(take(s)["lhs"], "819");
    let spec = CString::new("psl(2, 7)").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { srl_parse_json(spec.as_ptr(), &mut s) }, SrlStatus::Ok);
    assert_eq!(take(s)["canonical"], "PSL(2,7)");
}

#[test]
fn error_codes() {
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { srl_group_new(ptr::null(), &mut g) }, SrlStatus::NullArgument);
    let bad = CString::new("PSL(2,6)").unwrap();
    assert_eq!(unsafe { srl_group_new(bad.as_ptr(), &mut g) }, SrlStatus::ParseError);
    assert!(g.is_null());
    assert!(last_error().contains("prime power"), "{}", last_error());
    let big = CString::new("SL(6,9)").unwrap();
    assert_ne!(unsafe { srl_group_new(big.as_ptr(), &mut g) }, SrlStatus::Ok);
    let invalid = [0xffu8, 0];
    assert_eq!(unsafe { srl_group_new(invalid.as_ptr().cast(), &mut g) }, SrlStatus::InvalidUtf8);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { srl_group_order(ptr::null(), &mut s) }, SrlStatus::NullArgument);
    let fam = CString::new("sz").unwrap();
    assert_eq!(unsafe { srl_audit_json(fam.as_ptr(), 4, 3, &mut s) }, SrlStatus::InvalidArgument);
    let msg = unsafe { CStr::from_ptr(srl_status_message(SrlStatus::Infeasible as i32)) };
    assert_eq!(msg.to_str().unwrap(), "infeasible");
    assert_eq!(unsafe { CStr::from_ptr(srl_status_message(99)) }.to_str().unwrap(), "unknown");
}

#[test]
fn header_declares_the_interface() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/srl.h")).unwrap();
    for name in [
        "typedef struct SrlGroup SrlGroup",
        "SRL_STATUS_OK",
        "srl_group_new",
        "srl_group_free",
        "srl_witness_json",
        "srl_string_free",
        "srl_last_error",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}
