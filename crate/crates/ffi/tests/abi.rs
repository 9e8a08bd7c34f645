use cmapprox_ffi::*;
use std::ffi::{CStr, CString};
use std::ptr;

fn new_fn(spec: &str) -> *mut CmFunctionHandle {
    let s = CString::new(spec).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cm_function_new(s.as_ptr(), &mut h) }, CmStatus::Ok);
    h
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cm_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn euler_roundtrip() {
    let h = new_fn("euler");
    let mut v = 0.0;
    unsafe {
        assert_eq!(cm_function_eval(h, 1.0, &mut v), CmStatus::Ok);
        assert!((v - 0.5).abs() < 1e-15);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(cm_function_eval_complex(h, 0.0, 1.0, &mut re, &mut im), CmStatus::Ok);
        assert!((re - 0.5).abs() < 1e-15 && (im + 0.5).abs() < 1e-15);
        assert_eq!(cm_function_moment(h, 4, &mut v), CmStatus::Ok);
        assert!((v - 24.0).abs() < 1e-12);
        let mut cls = 0;
        assert_eq!(cm_function_class(h, &mut cls), CmStatus::Ok);
        assert_eq!(cls, 4);
        let mut p = ptr::null_mut();
        assert_eq!(cm_function_power_scale(h, 8, &mut p), CmStatus::Ok);
        let mut fv = std::mem::zeroed::<CmFunctionalValues>();
        assert_eq!(cm_functional_values(p, 0.5, &mut fv), CmStatus::Ok);
        let mut exact = 0.0;
        assert_eq!(cm_euler_c_alpha_exact(8, 0.5, &mut exact), CmStatus::Ok);
        assert!((fv.c_alpha - exact).abs() < 1e-8);
        assert!((fv.a - 1.0 / 16.0).abs() < 1e-14);
        cm_function_free(p);
        cm_function_free(h);
    }
}

#[test]
fn errors_are_reported() {
    let s = CString::new("no_such_function").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cm_function_new(s.as_ptr(), &mut h) }, CmStatus::InvalidParameter);
    assert!(h.is_null());
    assert!(last_error().contains("no_such_function"));
    let mut v = 0.0;
    assert_eq!(unsafe { cm_function_eval(ptr::null(), 1.0, &mut v) }, CmStatus::NullPointer);
    assert_eq!(unsafe { cm_digamma(-1.0, &mut v) }, CmStatus::InvalidParameter);
    assert_eq!(unsafe { cm_digamma(1.0, &mut v) }, CmStatus::Ok);
    assert!(last_error().is_empty());
    assert!((v + 0.5772156649015329).abs() < 1e-12);
    assert_eq!(unsafe { cm_log_gamma(0.5, &mut v) }, CmStatus::Ok);
    assert!((v - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    let h = new_fn("frac_tail:gamma=0.5");
    let mut fv = unsafe { std::mem::zeroed::<CmFunctionalValues>() };
    assert_eq!(unsafe { cm_functional_values(h, 0.5, &mut fv) }, CmStatus::Ok);
    assert!(fv.a.is_nan());
    unsafe { cm_function_free(h) };
}

#[test]
fn scheme_on_generator() {
    let s = CString::new("diag_pos:k=4,min=1,max=8").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(cm_generator_new(s.as_ptr(), &mut g), CmStatus::Ok);
        assert_eq!(cm_generator_dim(g), 4);
        let x = [1.0; 4];
        let z = [0.0; 4];
        let (mut yr, mut yi) = ([0.0; 4], [0.0; 4]);
        let e = CString::new("euler").unwrap();
        let st = cm_scheme_apply(e.as_ptr(), g, 1.0, 2, x.as_ptr(), z.as_ptr(), 4, yr.as_mut_ptr(), yi.as_mut_ptr());
        assert_eq!(st, CmStatus::Ok);
        // eigenvalues 1, 2, 4, 8
        for (k, l) in [1.0f64, 2.0, 4.0, 8.0].iter().enumerate() {
            assert!((yr[k] - (1.0 + l / 2.0).powi(-2)).abs() < 1e-13);
            assert!(yi[k].abs() < 1e-14);
        }
        let st = cm_scheme_apply(e.as_ptr(), g, 1.0, 2, x.as_ptr(), z.as_ptr(), 3, yr.as_mut_ptr(), yi.as_mut_ptr());
        assert_eq!(st, CmStatus::InvalidParameter);
        cm_generator_free(g);
    }
}

#[test]
fn header_lists_exports() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/cmapprox.h")).unwrap();
    for f in [
        "cm_function_new",
        "cm_function_free",
        "cm_function_eval",
        "cm_function_power_scale",
        "cm_functional_values",
        "cm_scheme_apply",
        "cm_generator_new",
        "cm_last_error",
        "CM_STATUS_NULL_POINTER",
    ] {
        assert!(h.contains(f), "{f} missing from header");
    }
}
