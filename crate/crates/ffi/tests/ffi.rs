use std::ffi::{CStr, CString};
use std::ptr;

use loopcocycle_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn new_handle(config: &str) -> *mut LcMultiloop {
    let mut h = ptr::null_mut();
    let status = unsafe { lc_multiloop_new(cstr(config).as_ptr(), &mut h) };
    assert_eq!(status, LcStatus::Ok, "{}", last_error());
    h
}

fn last_error() -> String {
    let p = lc_last_error();
    if p.is_null() {
        String::new()
    } else {
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }
}

const TWISTED_A2: &str = r#"{"algebra": "sl3", "r": [2], "automorphisms": ["outer_transpose"]}"#;

#[test]
fn graded_dims_of_twisted_a2() {
    let h = new_handle(TWISTED_A2);
    let mut n = 0;
    assert_eq!(unsafe { lc_multiloop_nvars(h, &mut n) }, LcStatus::Ok);
    assert_eq!(n, 1);
    for (w, expected) in [(0i64, 3usize), (1, 5), (-3, 5), (4, 3)] {
        let mut d = 0;
        assert_eq!(unsafe { lc_graded_dim(h, &w, 1, &mut d) }, LcStatus::Ok);
        assert_eq!(d, expected, "weight {w}");
    }
    unsafe { lc_multiloop_free(h) };
}

#[test]
fn h2_and_target() {
    let h = new_handle(TWISTED_A2);
    let mut d = 99;
    assert_eq!(unsafe { lc_h2_dim(h, &0, 1, 3, &mut d) }, LcStatus::Ok);
    assert_eq!(d, 1);
    let mut v = LcTargetVerdict::default();
    assert_eq!(unsafe { lc_compare_to_target(h, &1, 1, 3, &mut v) }, LcStatus::Ok);
    assert_eq!(v, LcTargetVerdict { h2_dim: 0, h2_dim_next: 0, target_dim: 0, stable: true, matches: true });
    unsafe { lc_multiloop_free(h) };
}

#[test]
fn omega_text() {
    let h = new_handle(r#"{"algebra": "sl2"}"#);
    let mut out = ptr::null_mut();
    // ω(t ⊗ e, t^-1 ⊗ f) = κ(e, f) ⊗ [t^0 (-1) λ]
    assert_eq!(unsafe { lc_omega_string(h, &1, 0, &-1, 2, 1, &mut out) }, LcStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { lc_string_free(out) };
    assert!(text.starts_with("weight (0):"), "{text}");
    let mut zero = ptr::null_mut();
    assert_eq!(unsafe { lc_omega_string(h, &1, 0, &1, 0, 1, &mut zero) }, LcStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(zero) }.to_str().unwrap(), "0");
    unsafe { lc_string_free(zero) };
    unsafe { lc_multiloop_free(h) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut h = ptr::null_mut();
    let bad = cstr(r#"{"algebra": {"structure_constants": {"dim": 3, "entries": [[0,1,2,1],[1,2,0,1],[0,2,0,1]]}}}"#);
    assert_eq!(unsafe { lc_multiloop_new(bad.as_ptr(), &mut h) }, LcStatus::InvalidAlgebra);
    assert!(last_error().contains("(0, 1, 2)"), "{}", last_error());
    assert!(h.is_null());

    let unknown = cstr(r#"{"cutof": 3}"#);
    assert_eq!(unsafe { lc_multiloop_new(unknown.as_ptr(), &mut h) }, LcStatus::Config);
    assert!(last_error().contains("cutof"));

    assert_eq!(unsafe { lc_multiloop_new(ptr::null(), &mut h) }, LcStatus::NullPointer);

    let good = new_handle(r#"{"n": 2}"#);
    let mut d = 0;
    assert_eq!(unsafe { lc_graded_dim(good, &0, 1, &mut d) }, LcStatus::InvalidArgument);
    assert_eq!(unsafe { lc_graded_dim(ptr::null(), [0, 0].as_ptr(), 2, &mut d) }, LcStatus::NullPointer);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { lc_omega_string(good, [0, 0].as_ptr(), 7, [0, 0].as_ptr(), 0, 2, &mut out) }, LcStatus::InvalidArgument);
    unsafe { lc_multiloop_free(good) };
}

#[test]
fn run_command_returns_json() {
    let mut out = ptr::null_mut();
    let cfg = cstr(r#"{"weights": [0, 1], "cutoff": 3}"#);
    let status = unsafe { lc_run_command(cstr("h2-scan").as_ptr(), cfg.as_ptr(), 0, 2, &mut out) };
    assert_eq!(status, LcStatus::Ok, "{}", last_error());
    let json: serde_json::Value = serde_json::from_str(unsafe { CStr::from_ptr(out) }.to_str().unwrap()).unwrap();
    unsafe { lc_string_free(out) };
    assert_eq!(json["command"], "h2-scan");
    assert_eq!(json["passed"], true);
    assert_eq!(json["tables"][0]["rows"][0][4], "1");

    let status = unsafe { lc_run_command(cstr("frobnicate").as_ptr(), cfg.as_ptr(), 0, 0, &mut out) };
    assert_eq!(status, LcStatus::Config);
}

#[test]
fn failing_checks_still_report() {
    let mut out = ptr::null_mut();
    let cfg = cstr(r#"{"density": {"function": "exp-sin"}}"#);
    let status = unsafe { lc_run_command(cstr("density-demo").as_ptr(), cfg.as_ptr(), 0, 1, &mut out) };
    assert_eq!(status, LcStatus::ChecksFailed);
    assert!(!out.is_null());
    unsafe { lc_string_free(out) };
}

#[test]
fn header_is_valid_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/loopcocycle.h");
    let text = std::fs::read_to_string(header).unwrap();
    for sym in ["lc_multiloop_new", "lc_h2_dim", "lc_compare_to_target", "lc_run_command", "lc_string_free", "LC_STATUS_OK"] {
        assert!(text.contains(sym), "{sym} missing from header");
    }
    let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", header]).status() else {
        eprintln!("no C compiler found; syntax check skipped");
        return;
    };
    assert!(status.success());
}
