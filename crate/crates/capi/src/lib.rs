//! C ABI over the spectral library: opaque weight handles, flat buffers,
//! and integer status codes. The header is generated into
//! `include/specop.h` at build time.
//!
//! Conventions: every function returns a [`SpecopStatus`]; outputs go
//! through caller-provided pointers/buffers; any non-OK status leaves a
//! message retrievable with [`specop_last_error_message`] on the same
//! thread. Handles are created and released only by this library.

use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_complex::Complex64;

use specop::eigensolve::{eigenvalues, outliers};
use specop::error::Error;
use specop::operator::{essential_interval, inner_check, jacobi_truncation};
use specop::pointspec::{eigenfunction_recurrence, point_spectrum, Branch};
use specop::series::CoeffSeq;
use specop::weights::{make_weight, WeightKind, WeightSequence};

/// Status codes returned by every entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecopStatus {
    Ok = 0,
    InvalidArgument = 1,
    NoConvergence = 2,
    Degenerate = 3,
    NullPointer = 4,
    BufferTooSmall = 5,
    InternalPanic = 6,
}

/// Opaque weight-sequence handle.
pub struct SpecopWeight {
    inner: WeightSequence,
}

/// One predicted point-spectrum entry. `branch` is 0 for the minus branch
/// (below the essential interval) and 1 for the plus branch (above).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SpecopPointEigen {
    pub j: u32,
    pub branch: i32,
    pub lambda: f64,
    pub rho: f64,
    pub pole: f64,
    pub valid: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: &str) {
    LAST_ERROR.with(|cell| {
        let mut buf = cell.borrow_mut();
        buf.clear();
        buf.extend_from_slice(msg.as_bytes());
    });
}

fn status_of(err: &Error) -> SpecopStatus {
    match err {
        Error::InvalidArgument(_) => SpecopStatus::InvalidArgument,
        Error::NoConvergence { .. } => SpecopStatus::NoConvergence,
        Error::Degenerate(_) => SpecopStatus::Degenerate,
    }
}

fn fail(err: &Error) -> SpecopStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Runs a fallible body, translating library errors and panics into codes.
fn guarded(body: impl FnOnce() -> Result<SpecopStatus, Error>) -> SpecopStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => fail(&e),
        Err(_) => {
            set_error("internal panic");
            SpecopStatus::InternalPanic
        }
    }
}

/// Copies the message for the most recent error on this thread into `buf`
/// (NUL-terminated, truncated to `cap`). Returns the full message length.
///
/// # Safety
/// `buf` must point to `cap` writable bytes (or be null, in which case only
/// the length is reported).
#[no_mangle]
pub unsafe extern "C" fn specop_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|cell| {
        let msg = cell.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Creates a binomial-family weight handle (`alpha < 1`).
///
/// # Safety
/// `out` must be a valid pointer; the handle must be released with
/// [`specop_weight_free`].
#[no_mangle]
pub unsafe extern "C" fn specop_weight_bergman(
    alpha: f64,
    out: *mut *mut SpecopWeight,
) -> SpecopStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SpecopStatus::NullPointer;
    }
    guarded(|| {
        let w = make_weight(WeightKind::BergmanType { alpha })?;
        *out = Box::into_raw(Box::new(SpecopWeight { inner: w }));
        Ok(SpecopStatus::Ok)
    })
}

/// Creates a power-family weight handle (`w_n = (n+1)^alpha`).
///
/// # Safety
/// As for [`specop_weight_bergman`].
#[no_mangle]
pub unsafe extern "C" fn specop_weight_dirichlet_pow(
    alpha: f64,
    out: *mut *mut SpecopWeight,
) -> SpecopStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SpecopStatus::NullPointer;
    }
    guarded(|| {
        let w = make_weight(WeightKind::DirichletPower { alpha })?;
        *out = Box::into_raw(Box::new(SpecopWeight { inner: w }));
        Ok(SpecopStatus::Ok)
    })
}

/// Releases a weight handle. Null is a no-op.
///
/// # Safety
/// `w` must have come from a `specop_weight_*` constructor and must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn specop_weight_free(w: *mut SpecopWeight) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// Weight value `w_n`.
///
/// # Safety
/// `w` must be a live handle, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn specop_weight_value(
    w: *const SpecopWeight,
    n: usize,
    out: *mut f64,
) -> SpecopStatus {
    if w.is_null() || out.is_null() {
        set_error("null pointer");
        return SpecopStatus::NullPointer;
    }
    guarded(|| {
        *out = (*w).inner.weight(n);
        Ok(SpecopStatus::Ok)
    })
}

/// Consecutive ratio `w_{n+1}/w_n`.
///
/// # Safety
/// As for [`specop_weight_value`].
#[no_mangle]
pub unsafe extern "C" fn specop_weight_ratio(
    w: *const SpecopWeight,
    n: usize,
    out: *mut f64,
) -> SpecopStatus {
    if w.is_null() || out.is_null() {
        set_error("null pointer");
        return SpecopStatus::NullPointer;
    }
    guarded(|| {
        *out = (*w).inner.ratio(n);
        Ok(SpecopStatus::Ok)
    })
}

/// The essential interval `[(1-|a|)^2, (1+|a|)^2]` for `a = a_re + i a_im`.
///
/// # Safety
/// `lo` and `hi` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn specop_essential_interval(
    a_re: f64,
    a_im: f64,
    lo: *mut f64,
    hi: *mut f64,
) -> SpecopStatus {
    if lo.is_null() || hi.is_null() {
        set_error("null output pointer");
        return SpecopStatus::NullPointer;
    }
    let interval = essential_interval(Complex64::new(a_re, a_im));
    *lo = interval[0];
    *hi = interval[1];
    SpecopStatus::Ok
}

/// Closed-form candidate eigenvalues for the binomial weights: both
/// branches for `j <= jmax`, written in order. Requires
/// `cap >= 2 (jmax + 1)`; `written` receives the entry count (0 when the
/// point spectrum is empty).
///
/// # Safety
/// `out` must point to `cap` entries, `written` must be valid.
#[no_mangle]
pub unsafe extern "C" fn specop_point_spectrum(
    alpha: f64,
    a_re: f64,
    a_im: f64,
    jmax: u32,
    out: *mut SpecopPointEigen,
    cap: usize,
    written: *mut usize,
) -> SpecopStatus {
    if out.is_null() || written.is_null() {
        set_error("null output pointer");
        return SpecopStatus::NullPointer;
    }
    guarded(|| {
        let entries = point_spectrum(alpha, Complex64::new(a_re, a_im), jmax as usize)?;
        if entries.len() > cap {
            set_error("output buffer too small for the requested jmax");
            return Ok(SpecopStatus::BufferTooSmall);
        }
        for (i, e) in entries.iter().enumerate() {
            *out.add(i) = SpecopPointEigen {
                j: e.j as u32,
                branch: match e.branch {
                    Branch::Minus => 0,
                    Branch::Plus => 1,
                },
                lambda: e.lambda,
                rho: e.rho,
                pole: e.pole,
                valid: e.valid,
            };
        }
        *written = entries.len();
        Ok(SpecopStatus::Ok)
    })
}

/// All `n` eigenvalues of the dimension-`n` finite section for gauge
/// modulus `a_mod`, ascending.
///
/// # Safety
/// `w` must be a live handle and `out` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn specop_section_eigenvalues(
    w: *const SpecopWeight,
    a_mod: f64,
    n: usize,
    out: *mut f64,
) -> SpecopStatus {
    if w.is_null() || out.is_null() {
        set_error("null pointer");
        return SpecopStatus::NullPointer;
    }
    guarded(|| {
        let t = jacobi_truncation(&(*w).inner, a_mod, n)?;
        let result = eigenvalues(&t, 1e-10)?;
        std::ptr::copy_nonoverlapping(result.values.as_ptr(), out, n);
        Ok(SpecopStatus::Ok)
    })
}

/// Section eigenvalues outside the essential interval by more than
/// `margin`, split into the two sides.
///
/// # Safety
/// `w` live; the two buffer/len pairs valid with the stated capacities.
#[no_mangle]
pub unsafe extern "C" fn specop_outliers(
    w: *const SpecopWeight,
    a_mod: f64,
    n: usize,
    margin: f64,
    below: *mut f64,
    below_cap: usize,
    below_len: *mut usize,
    above: *mut f64,
    above_cap: usize,
    above_len: *mut usize,
) -> SpecopStatus {
    if w.is_null()
        || below.is_null()
        || above.is_null()
        || below_len.is_null()
        || above_len.is_null()
    {
        set_error("null pointer");
        return SpecopStatus::NullPointer;
    }
    guarded(|| {
        let t = jacobi_truncation(&(*w).inner, a_mod, n)?;
        let interval = essential_interval(Complex64::new(a_mod, 0.0));
        let (lo, hi) = outliers(&t, interval, margin);
        if lo.len() > below_cap || hi.len() > above_cap {
            set_error("outlier buffer too small");
            return Ok(SpecopStatus::BufferTooSmall);
        }
        std::ptr::copy_nonoverlapping(lo.as_ptr(), below, lo.len());
        std::ptr::copy_nonoverlapping(hi.as_ptr(), above, hi.len());
        *below_len = lo.len();
        *above_len = hi.len();
        Ok(SpecopStatus::Ok)
    })
}

/// Inner-function test for a polynomial given as `n_coeffs` interleaved
/// `(re, im)` pairs, constant term first.
///
/// # Safety
/// `w` live; `coeffs` points to `2 * n_coeffs` doubles; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn specop_inner_check(
    w: *const SpecopWeight,
    coeffs: *const f64,
    n_coeffs: usize,
    tol: f64,
    out: *mut bool,
) -> SpecopStatus {
    if w.is_null() || coeffs.is_null() || out.is_null() {
        set_error("null pointer");
        return SpecopStatus::NullPointer;
    }
    if n_coeffs == 0 {
        set_error("polynomial needs at least one coefficient");
        return SpecopStatus::InvalidArgument;
    }
    guarded(|| {
        let raw = std::slice::from_raw_parts(coeffs, 2 * n_coeffs);
        let poly = CoeffSeq::new(
            raw.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect(),
        );
        *out = inner_check(&(*w).inner, &poly, tol);
        Ok(SpecopStatus::Ok)
    })
}

/// The normalized formal solution of the eigenvalue recurrence at `lambda`,
/// written as `n_terms` interleaved `(re, im)` pairs.
///
/// # Safety
/// `w` live; `out` points to `2 * n_terms` doubles.
#[no_mangle]
pub unsafe extern "C" fn specop_eigenfunction_recurrence(
    w: *const SpecopWeight,
    a_mod: f64,
    lambda: f64,
    n_terms: usize,
    out: *mut f64,
) -> SpecopStatus {
    if w.is_null() || out.is_null() {
        set_error("null pointer");
        return SpecopStatus::NullPointer;
    }
    if n_terms == 0 {
        set_error("n_terms must be at least 1");
        return SpecopStatus::InvalidArgument;
    }
    guarded(|| {
        let h = eigenfunction_recurrence(&(*w).inner, a_mod, lambda, n_terms)?;
        for (i, c) in h.coeffs().iter().enumerate() {
            *out.add(2 * i) = c.re;
            *out.add(2 * i + 1) = c.im;
        }
        Ok(SpecopStatus::Ok)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    unsafe fn bergman(alpha: f64) -> *mut SpecopWeight {
        let mut handle: *mut SpecopWeight = std::ptr::null_mut();
        let status = specop_weight_bergman(alpha, &mut handle);
        assert_eq!(status, SpecopStatus::Ok);
        assert!(!handle.is_null());
        handle
    }

    #[test]
    fn weight_lifecycle_and_values() {
        unsafe {
            let w = bergman(-1.0);
            let mut v = 0.0;
            assert_eq!(specop_weight_value(w, 3, &mut v), SpecopStatus::Ok);
            assert_eq!(v, 0.25);
            assert_eq!(specop_weight_ratio(w, 0, &mut v), SpecopStatus::Ok);
            assert_eq!(v, 0.5);
            specop_weight_free(w);
            specop_weight_free(std::ptr::null_mut());
        }
    }

    #[test]
    fn constructor_rejects_bad_alpha_with_message() {
        unsafe {
            let mut handle: *mut SpecopWeight = std::ptr::null_mut();
            let status = specop_weight_bergman(1.5, &mut handle);
            assert_eq!(status, SpecopStatus::InvalidArgument);
            let mut buf = vec![0i8; 128];
            let len = specop_last_error_message(buf.as_mut_ptr(), buf.len());
            assert!(len > 0);
            let msg = std::ffi::CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
            assert!(msg.contains("alpha"));
        }
    }

    #[test]
    fn essential_interval_values() {
        unsafe {
            let (mut lo, mut hi) = (0.0, 0.0);
            assert_eq!(
                specop_essential_interval(0.5, 0.0, &mut lo, &mut hi),
                SpecopStatus::Ok
            );
            assert_eq!((lo, hi), (0.25, 2.25));
            assert_eq!(
                specop_essential_interval(0.0, 1.0, &mut lo, &mut hi),
                SpecopStatus::Ok
            );
            assert_eq!((lo, hi), (0.0, 4.0));
            assert_eq!(
                specop_essential_interval(1.0, 0.0, std::ptr::null_mut(), &mut hi),
                SpecopStatus::NullPointer
            );
        }
    }

    #[test]
    fn point_spectrum_buffer_flow() {
        unsafe {
            let mut buf = vec![
                SpecopPointEigen {
                    j: 0,
                    branch: 0,
                    lambda: 0.0,
                    rho: 0.0,
                    pole: 0.0,
                    valid: false
                };
                8
            ];
            let mut written = 0usize;
            let status =
                specop_point_spectrum(-1.0, 0.5, 0.0, 1, buf.as_mut_ptr(), buf.len(), &mut written);
            assert_eq!(status, SpecopStatus::Ok);
            assert_eq!(written, 4);
            let lam0 = 1.25 + (1.0 - 3.0 * 3.0f64.sqrt()) / 4.0;
            let first = buf.iter().find(|e| e.branch == 0 && e.j == 0).unwrap();
            assert!(first.valid);
            assert!((first.lambda - lam0).abs() < 1e-14);

            // Too-small buffer reports without writing.
            let status =
                specop_point_spectrum(-1.0, 0.5, 0.0, 5, buf.as_mut_ptr(), 2, &mut written);
            assert_eq!(status, SpecopStatus::BufferTooSmall);

            // Hardy weight: empty point spectrum.
            let status =
                specop_point_spectrum(0.0, 0.5, 0.0, 3, buf.as_mut_ptr(), buf.len(), &mut written);
            assert_eq!(status, SpecopStatus::Ok);
            assert_eq!(written, 0);

            // alpha >= 1 is rejected.
            let status =
                specop_point_spectrum(1.0, 0.5, 0.0, 1, buf.as_mut_ptr(), buf.len(), &mut written);
            assert_eq!(status, SpecopStatus::InvalidArgument);
        }
    }

    #[test]
    fn section_and_outliers_roundtrip() {
        unsafe {
            let w = bergman(-1.0);
            let n = 120;
            let mut eigs = vec![0.0; n];
            assert_eq!(
                specop_section_eigenvalues(w, 0.5, n, eigs.as_mut_ptr()),
                SpecopStatus::Ok
            );
            let lam0 = 1.25 + (1.0 - 3.0 * 3.0f64.sqrt()) / 4.0;
            assert!((eigs[0] - lam0).abs() < 1e-6);
            assert!(eigs.windows(2).all(|p| p[0] <= p[1]));

            let mut below = vec![0.0; 32];
            let mut above = vec![0.0; 32];
            let (mut nb, mut na) = (0usize, 0usize);
            let status = specop_outliers(
                w,
                0.5,
                n,
                1e-6,
                below.as_mut_ptr(),
                below.len(),
                &mut nb,
                above.as_mut_ptr(),
                above.len(),
                &mut na,
            );
            assert_eq!(status, SpecopStatus::Ok);
            assert!(nb > 0);
            assert_eq!(na, 0);
            assert!((below[0] - lam0).abs() < 1e-6);
            specop_weight_free(w);
        }
    }

    #[test]
    fn inner_check_over_ffi() {
        unsafe {
            let w = bergman(-1.0);
            let sqrt2 = 2.0f64.sqrt();
            let e1 = [0.0, 0.0, sqrt2, 0.0];
            let mut verdict = false;
            assert_eq!(
                specop_inner_check(w, e1.as_ptr(), 2, 1e-10, &mut verdict),
                SpecopStatus::Ok
            );
            assert!(verdict);
            let not_inner = [0.5, 0.0, -1.0, 0.0];
            assert_eq!(
                specop_inner_check(w, not_inner.as_ptr(), 2, 1e-10, &mut verdict),
                SpecopStatus::Ok
            );
            assert!(!verdict);
            specop_weight_free(w);
        }
    }

    #[test]
    fn recurrence_over_ffi() {
        unsafe {
            let w = bergman(-1.0);
            let lam0 = 1.25 + (1.0 - 3.0 * 3.0f64.sqrt()) / 4.0;
            let mut buf = vec![0.0; 6];
            assert_eq!(
                specop_eigenfunction_recurrence(w, 0.5, lam0, 3, buf.as_mut_ptr()),
                SpecopStatus::Ok
            );
            assert!((buf[0] - 1.0).abs() < 1e-15);
            assert!((buf[2] - 2.1961524).abs() < 1e-7);
            // a = 0 is not a recurrence.
            assert_eq!(
                specop_eigenfunction_recurrence(w, 0.0, 1.0, 3, buf.as_mut_ptr()),
                SpecopStatus::InvalidArgument
            );
            specop_weight_free(w);
        }
    }
}
