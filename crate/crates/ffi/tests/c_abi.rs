use std::f64::consts::PI;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use dbsampler_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe { dbs_last_error(buf.as_mut_ptr(), buf.len()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn bessel_and_free_solution() {
    let mut v = 0.0;
    assert_eq!(unsafe { dbs_bessel_j(0.5, 1.0, &mut v) }, DbsStatus::Ok);
    assert!((v - (2.0 / PI).sqrt() * 1.0f64.sin()).abs() < 1e-14);

    // xi_{1/2}(z, x) = sin(sqrt z x)/sqrt z
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { dbs_xi_free(0.5, 4.0, 0.0, 0.3, &mut re, &mut im) },
        DbsStatus::Ok
    );
    assert!((re - (0.6f64).sin() / 2.0).abs() < 1e-14 && im == 0.0);

    assert_eq!(
        unsafe { dbs_bessel_j(-1.0, 1.0, &mut v) },
        DbsStatus::Invalid
    );
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { dbs_bessel_j(0.5, 1.0, ptr::null_mut()) },
        DbsStatus::NullPointer
    );
}

#[test]
fn spectrum_handle_lifecycle() {
    let mut setup = ptr::null_mut();
    let q = CString::new("zero").unwrap();
    assert_eq!(
        unsafe { dbs_setup_new(0.5, PI, 0.0, q.as_ptr(), &mut setup) },
        DbsStatus::Ok
    );
    let mut spec = ptr::null_mut();
    assert_eq!(
        unsafe { dbs_spectrum_compute(setup, 4, &mut spec) },
        DbsStatus::Ok
    );
    assert_eq!(unsafe { dbs_spectrum_len(spec) }, 4);
    for i in 0..4 {
        let (mut n, mut l, mut k) = (0usize, 0.0, 0.0);
        assert_eq!(
            unsafe { dbs_spectrum_get(spec, i, &mut n, &mut l, &mut k) },
            DbsStatus::Ok
        );
        assert_eq!(n, i + 1);
        assert!((l - (n * n) as f64).abs() < 1e-8);
        assert!(((n * n) as f64 * k - PI / 2.0).abs() < 1e-8);
    }
    assert_eq!(
        unsafe { dbs_spectrum_get(spec, 4, ptr::null_mut(), ptr::null_mut(), ptr::null_mut()) },
        DbsStatus::Invalid
    );
    assert!(last_error().contains("out of range"));
    unsafe {
        dbs_spectrum_free(spec);
        dbs_setup_free(setup);
        dbs_spectrum_free(ptr::null_mut());
        dbs_setup_free(ptr::null_mut());
    }
    assert_eq!(unsafe { dbs_spectrum_len(ptr::null()) }, 0);
}

#[test]
fn kernel_and_identity() {
    let mut setup = ptr::null_mut();
    assert_eq!(
        unsafe { dbs_setup_new(0.5, PI, 0.0, ptr::null(), &mut setup) },
        DbsStatus::Ok
    );
    let (mut re, mut im) = (0.0, 0.0);
    assert_eq!(
        unsafe { dbs_kernel_inner(setup, 1.0, 0.0, 1.0, 0.0, &mut re, &mut im) },
        DbsStatus::Ok
    );
    assert!((re - PI / 2.0).abs() < 1e-9 && im.abs() < 1e-12);
    let mut r = 1.0;
    assert_eq!(
        unsafe { dbs_ibp_identity_residual(setup, 1, 0.5, 1.0, 7.0, 3.0, 1.0, &mut r) },
        DbsStatus::Ok
    );
    assert!(r < 1e-8);
    assert_eq!(
        unsafe { dbs_ibp_identity_residual(setup, 4, 0.5, 1.0, 7.0, 3.0, 1.0, &mut r) },
        DbsStatus::Invalid
    );
    unsafe { dbs_setup_free(setup) };
}

#[test]
fn invalid_setups_are_rejected() {
    let mut setup = ptr::null_mut();
    let bad = CString::new("power:1:2:4").unwrap();
    assert_eq!(
        unsafe { dbs_setup_new(0.75, 1.0, 0.0, bad.as_ptr(), &mut setup) },
        DbsStatus::Invalid
    );
    assert!(setup.is_null());
    assert_eq!(
        unsafe { dbs_setup_new(0.75, 1.0, 4.0, ptr::null(), &mut setup) },
        DbsStatus::Invalid
    );
    assert!(last_error().contains("gamma"));
    assert_eq!(
        unsafe { dbs_setup_new(0.75, 1.0, 0.0, ptr::null(), ptr::null_mut()) },
        DbsStatus::NullPointer
    );
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dbsampler.h"))
        .unwrap();
    for sym in [
        "dbs_last_error",
        "dbs_bessel_j",
        "dbs_xi_free",
        "dbs_setup_new",
        "dbs_setup_free",
        "dbs_kernel_inner",
        "dbs_spectrum_compute",
        "dbs_spectrum_len",
        "dbs_spectrum_get",
        "dbs_spectrum_free",
        "dbs_ibp_identity_residual",
        "dbs_version",
        "typedef struct DbsSetup DbsSetup",
        "DBS_STATUS_PANIC = 4",
    ] {
        assert!(h.contains(sym), "{sym} missing from header");
    }
    let v = unsafe { CStr::from_ptr(dbs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
