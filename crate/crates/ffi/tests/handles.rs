use std::ffi::{CStr, CString};
use std::ptr;

use cspadv_ffi::*;

fn last_error() -> String {
    let p = cspadv_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { cspadv_string_free(p) };
    s
}

fn parse(text: &str) -> *mut CspadvInstance {
    let text = CString::new(text).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { cspadv_instance_parse(text.as_ptr(), &mut inst) }, CspadvStatus::Ok);
    inst
}

#[test]
fn parse_count_and_free() {
    let inst = parse("p csp 3 1\nx 3 0 1 2 1\n");
    unsafe {
        assert_eq!(cspadv_instance_num_vars(inst), 3);
        assert_eq!(cspadv_instance_num_constraints(inst), 1);
        let mut sat = 0usize;
        let x = [1i8, 1, 1];
        assert_eq!(cspadv_instance_satisfied(inst, x.as_ptr(), 3, &mut sat), CspadvStatus::Ok);
        assert_eq!(sat, 1);
        let x = [1i8, -1, 1];
        assert_eq!(cspadv_instance_satisfied(inst, x.as_ptr(), 3, &mut sat), CspadvStatus::Ok);
        assert_eq!(sat, 0);
        cspadv_instance_free(inst);
        cspadv_instance_free(ptr::null_mut());
    }
}

#[test]
fn parse_errors_set_message() {
    let text = CString::new("p csp 3 1\nx 3 0 1 q 1\n").unwrap();
    let mut inst = ptr::null_mut();
    let status = unsafe { cspadv_instance_parse(text.as_ptr(), &mut inst) };
    assert_eq!(status, CspadvStatus::Parse);
    assert!(inst.is_null());
    assert!(last_error().contains("line 2"), "{}", last_error());
    assert_eq!(unsafe { cspadv_instance_parse(ptr::null(), &mut inst) }, CspadvStatus::NullPointer);
}

#[test]
fn wrong_assignment_length() {
    let inst = parse("p csp 3 1\nx 3 0 1 2 1\n");
    let x = [1i8, 1];
    let mut sat = 0usize;
    let status = unsafe { cspadv_instance_satisfied(inst, x.as_ptr(), 2, &mut sat) };
    assert_eq!(status, CspadvStatus::InvalidArgument);
    unsafe { cspadv_instance_free(inst) };
}

#[test]
fn generate_solve_and_round_trip() {
    let kind = CString::new("kxor").unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { cspadv_instance_generate(kind.as_ptr(), 60, 3, 4, 7, &mut inst) }, CspadvStatus::Ok);
    let n = unsafe { cspadv_instance_num_vars(inst) };
    let alg = CString::new("xor3").unwrap();
    let mut x = vec![0i8; n];
    let mut json = ptr::null_mut();
    let status = unsafe { cspadv_solve(inst, alg.as_ptr(), 1, x.as_mut_ptr(), n, &mut json) };
    assert_eq!(status, CspadvStatus::Ok, "{}", last_error());
    let report: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(report["alg"], "xor3");
    assert!(x.iter().all(|&v| v == 1 || v == -1));
    let mut sat = 0usize;
    unsafe { cspadv_instance_satisfied(inst, x.as_ptr(), n, &mut sat) };
    assert_eq!(report["satisfied"].as_u64().unwrap() as usize, sat);

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { cspadv_instance_to_text(inst, &mut text) }, CspadvStatus::Ok);
    let copy = parse(&take_string(text));
    unsafe {
        assert_eq!(cspadv_instance_num_constraints(copy), cspadv_instance_num_constraints(inst));
        cspadv_instance_free(copy);
        cspadv_instance_free(inst);
    }
}

#[test]
fn trifree_precondition_is_reported() {
    let inst = parse("p csp 4 2\nx 3 0 1 2 1\nx 3 0 1 3 1\n");
    let alg = CString::new("trifree").unwrap();
    let status = unsafe { cspadv_solve(inst, alg.as_ptr(), 0, ptr::null_mut(), 0, ptr::null_mut()) };
    assert_eq!(status, CspadvStatus::Precondition);
    assert!(last_error().contains("constraints 0 and 1"), "{}", last_error());
    let mut json = ptr::null_mut();
    assert_eq!(unsafe { cspadv_instance_check(inst, &mut json) }, CspadvStatus::Ok);
    let check: serde_json::Value = serde_json::from_str(&take_string(json)).unwrap();
    assert_eq!(check["triangle_free"], false);
    assert_eq!(check["valid"], true);
    unsafe { cspadv_instance_free(inst) };
}

#[test]
fn unknown_names_are_invalid_arguments() {
    let inst = parse("p csp 3 1\nx 3 0 1 2 1\n");
    let alg = CString::new("simplex").unwrap();
    let status = unsafe { cspadv_solve(inst, alg.as_ptr(), 0, ptr::null_mut(), 0, ptr::null_mut()) };
    assert_eq!(status, CspadvStatus::InvalidArgument);
    let kind = CString::new("petersen").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cspadv_instance_generate(kind.as_ptr(), 5, 3, 3, 0, &mut out) }, CspadvStatus::InvalidArgument);
    unsafe { cspadv_instance_free(inst) };
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(cspadv_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
