//! C ABI for `dbsampler`.
//!
//! Every function returns a [`DbsStatus`]; results go through out-pointers.
//! On failure the message is kept per thread and can be read with
//! [`dbs_last_error`]. Panics never cross the boundary: they are caught and
//! reported as `DBS_STATUS_PANIC`.
//!
//! Setups and spectra are opaque handles owned by the caller and released
//! with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dbsampler::identities::Identity;
use dbsampler::kernel::kernel_inner;
use dbsampler::setup::{Potential, ProblemSetup};
use dbsampler::specfun::{bessel_j, Order};
use dbsampler::spectrum::{compute_spectrum, Spectrum};
use dbsampler::unperturbed::{xi_free, SpectralPoint};
use dbsampler::{Complex64, Error};

/// Result code of every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DbsStatus {
    Ok = 0,
    NullPointer = 1,
    /// Invalid input (domain, configuration, support, shape).
    Invalid = 2,
    /// Numerical failure (bracketing, convergence, series radius).
    Numerical = 3,
    Panic = 4,
}

/// Opaque operator description.
pub struct DbsSetup {
    inner: ProblemSetup,
}

/// Opaque computed spectrum.
pub struct DbsSpectrum {
    inner: Spectrum,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(e: Error) -> DbsStatus {
    let status = if e.is_validation() {
        DbsStatus::Invalid
    } else {
        DbsStatus::Numerical
    };
    set_error(e.to_string());
    status
}

fn null(what: &str) -> DbsStatus {
    set_error(format!("{what} is null"));
    DbsStatus::NullPointer
}

/// Runs `f`, mapping panics to `Panic`.
fn guard(f: impl FnOnce() -> DbsStatus) -> DbsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == DbsStatus::Ok {
                set_error(String::new());
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            DbsStatus::Panic
        }
    }
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len - 1` bytes) and returns the full message length.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn dbs_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// `J_nu(x)` for `nu >= 0`, `x >= 0`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dbs_bessel_j(nu: f64, x: f64, out: *mut f64) -> DbsStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        match bessel_j(nu, x) {
            Ok(v) => {
                *out = v;
                DbsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Free regular solution `xi_nu(z, x)`.
///
/// # Safety
/// `out_re` and `out_im` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dbs_xi_free(
    nu: f64,
    z_re: f64,
    z_im: f64,
    x: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DbsStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return null("output");
        }
        let r = Order::new(nu)
            .and_then(|o| xi_free(o, SpectralPoint::new(Complex64::new(z_re, z_im)), x));
        match r {
            Ok(v) => {
                *out_re = v.re;
                *out_im = v.im;
                DbsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Creates a setup. `potential` uses the config syntax (`zero`,
/// `const:c`, `power:c:beta:r`, `bump:c:center:width`, `table:path`);
/// null means `zero`.
///
/// # Safety
/// `potential` must be null or a NUL-terminated string; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn dbs_setup_new(
    nu: f64,
    s: f64,
    gamma: f64,
    potential: *const c_char,
    out: *mut *mut DbsSetup,
) -> DbsStatus {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        *out = ptr::null_mut();
        let q = if potential.is_null() {
            Ok(Potential::zero())
        } else {
            match CStr::from_ptr(potential).to_str() {
                Ok(t) => Potential::parse(t),
                Err(_) => Err(Error::Config("potential is not valid UTF-8".into())),
            }
        };
        match q.and_then(|q| ProblemSetup::new(nu, s, q, gamma)) {
            Ok(st) => {
                *out = Box::into_raw(Box::new(DbsSetup { inner: st }));
                DbsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `setup` must be null or a handle from [`dbs_setup_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dbs_setup_free(setup: *mut DbsSetup) {
    if !setup.is_null() {
        drop(Box::from_raw(setup));
    }
}

/// Reproducing kernel `K_s(z, w) = int_0^s xi(z, x) conj(xi(w, x)) dx`.
///
/// # Safety
/// `setup` must be a live handle; `out_re`, `out_im` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dbs_kernel_inner(
    setup: *const DbsSetup,
    z_re: f64,
    z_im: f64,
    w_re: f64,
    w_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> DbsStatus {
    guard(|| {
        if setup.is_null() {
            return null("setup");
        }
        if out_re.is_null() || out_im.is_null() {
            return null("output");
        }
        let z = SpectralPoint::new(Complex64::new(z_re, z_im));
        let w = SpectralPoint::new(Complex64::new(w_re, w_im));
        match kernel_inner(&(*setup).inner, z, w) {
            Ok(v) => {
                *out_re = v.re;
                *out_im = v.im;
                DbsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// First `n` eigenvalues and norming constants of the setup's operator.
///
/// # Safety
/// `setup` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dbs_spectrum_compute(
    setup: *const DbsSetup,
    n: usize,
    out: *mut *mut DbsSpectrum,
) -> DbsStatus {
    guard(|| {
        if setup.is_null() {
            return null("setup");
        }
        if out.is_null() {
            return null("out");
        }
        *out = ptr::null_mut();
        match compute_spectrum(&(*setup).inner, n) {
            Ok(sp) => {
                *out = Box::into_raw(Box::new(DbsSpectrum { inner: sp }));
                DbsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Number of eigenvalues held; 0 for a null handle.
///
/// # Safety
/// `spectrum` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dbs_spectrum_len(spectrum: *const DbsSpectrum) -> usize {
    if spectrum.is_null() {
        0
    } else {
        (*spectrum).inner.len()
    }
}

/// Entry `i` (0-based): the operator index `n` (0 or 1 based on the angle),
/// `lambda_n` and `K(lambda_n, lambda_n)`. Any output pointer may be null.
///
/// # Safety
/// `spectrum` must be a live handle; non-null outputs valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dbs_spectrum_get(
    spectrum: *const DbsSpectrum,
    i: usize,
    index: *mut usize,
    lambda: *mut f64,
    norming: *mut f64,
) -> DbsStatus {
    guard(|| {
        if spectrum.is_null() {
            return null("spectrum");
        }
        let sp = &(*spectrum).inner;
        if i >= sp.len() {
            return fail(Error::Domain(format!(
                "entry {i} out of range (len {})",
                sp.len()
            )));
        }
        if !index.is_null() {
            *index = sp.index(i);
        }
        if !lambda.is_null() {
            *lambda = sp.eigenvalues[i];
        }
        if !norming.is_null() {
            *norming = sp.norming[i];
        }
        DbsStatus::Ok
    })
}

/// # Safety
/// `spectrum` must be null or a handle from [`dbs_spectrum_compute`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dbs_spectrum_free(spectrum: *mut DbsSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

/// Relative residual of integration-by-parts identity `which` (1, 2 or 3)
/// for the setup's order and potential on `(0, b]`.
///
/// # Safety
/// `setup` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dbs_ibp_identity_residual(
    setup: *const DbsSetup,
    which: u32,
    a: f64,
    b: f64,
    t: f64,
    z_re: f64,
    z_im: f64,
    out: *mut f64,
) -> DbsStatus {
    guard(|| {
        if setup.is_null() {
            return null("setup");
        }
        if out.is_null() {
            return null("out");
        }
        let id = match which {
            1 => Identity::A1,
            2 => Identity::A2,
            3 => Identity::A3,
            _ => {
                return fail(Error::Domain(format!(
                    "identity must be 1, 2 or 3, got {which}"
                )))
            }
        };
        match dbsampler::identities::ibp_identity_residual(
            id,
            &(*setup).inner,
            a,
            b,
            t,
            Complex64::new(z_re, z_im),
        ) {
            Ok(r) => {
                *out = r;
                DbsStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Library version, static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dbs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
