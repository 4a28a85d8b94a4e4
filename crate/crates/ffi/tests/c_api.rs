use std::ffi::{CStr, CString};
use std::ptr;

use morse_orbits_ffi::*;

const TETRA: &str = "OFF\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n";

fn analyze(mesh: &str, field: &str, codomain: MoCodomain) -> (MoStatus, *mut MoAnalysis) {
    let mesh = CString::new(mesh).unwrap();
    let field = CString::new(field).unwrap();
    let mut out = ptr::null_mut();
    let status = unsafe { mo_analyze(mesh.as_ptr(), field.as_ptr(), codomain, true, &mut out) };
    (status, out)
}

fn take(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { mo_string_free(p) };
    s
}

fn last_error() -> String {
    let p = mo_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn sphere_height_round_trip() {
    let (status, a) = analyze(TETRA, "0 1 2 3", MoCodomain::Real);
    assert_eq!(status, MoStatus::Ok);
    let mut summary = MoSummary::default();
    assert_eq!(unsafe { mo_analysis_summary(a, &mut summary) }, MoStatus::Ok);
    assert_eq!((summary.c0, summary.c1, summary.c2), (1, 0, 1));
    assert_eq!((summary.codim_orbit, summary.codim_orbit_cr), (2, 6));
    assert_eq!(summary.euler_characteristic, 2);
    assert_eq!(summary.k, -1);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mo_analysis_orbit_type(a, &mut s) }, MoStatus::Ok);
    assert_eq!(take(s), "S2");
    assert_eq!(unsafe { mo_analysis_report_json(a, &mut s) }, MoStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["type"], "A");
    assert_eq!(unsafe { mo_analysis_reeb_dot(a, &mut s) }, MoStatus::Ok);
    assert!(take(s).contains("->"));
    unsafe { mo_analysis_free(a) };
}

#[test]
fn circle_field_from_header() {
    let mesh = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/torus_grid.off")).unwrap();
    let field =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/torus_grid.fibration.field")).unwrap();
    let (status, a) = analyze(&mesh, &field, MoCodomain::Auto);
    assert_eq!(status, MoStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mo_analysis_orbit_type(a, &mut s) }, MoStatus::Ok);
    assert_eq!(take(s), "S1");
    unsafe { mo_analysis_free(a) };
}

#[test]
fn errors_set_status_and_message() {
    let (status, a) = analyze(TETRA, "0 1 2", MoCodomain::Real);
    assert_eq!(status, MoStatus::Parse);
    assert!(a.is_null());
    assert!(last_error().contains("expected 4 values"));

    let (status, _) = analyze("OFF\n4 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n4 0 1 2 3\n", "0 1 2 3", MoCodomain::Real);
    assert_eq!(status, MoStatus::Parse);
    assert!(last_error().starts_with("line 7"));

    let (status, _) = analyze(TETRA, "0 0.3 0.6 0.9", MoCodomain::Circle);
    assert_eq!(status, MoStatus::Morse);
}

#[test]
fn null_pointers_are_rejected() {
    let mut out = ptr::null_mut();
    let status = unsafe { mo_analyze(ptr::null(), ptr::null(), MoCodomain::Real, false, &mut out) };
    assert_eq!(status, MoStatus::NullPointer);
    assert_eq!(last_error(), "mesh is null");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mo_analysis_report_json(ptr::null(), &mut s) }, MoStatus::NullPointer);
    unsafe {
        mo_analysis_free(ptr::null_mut());
        mo_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(mo_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
