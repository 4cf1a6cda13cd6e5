//! The self-adjoint operator `V_a = M*_(a-z) M_(a-z)` on a weighted Hardy
//! space: its action on coefficient sequences, the general polynomial-symbol
//! form `M*_f M_f`, the symmetric tridiagonal finite sections in the
//! normalized monomial basis, rotation gauge reduction for complex `a`, and
//! the essential-spectrum interval.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{product, CoeffSeq};
use crate::weights::WeightSequence;

/// Real symmetric tridiagonal matrix: `diag` of length N, `offdiag` of
/// length N-1 coupling rows k and k+1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "dimension must be at least 1");
        assert_eq!(
            offdiag.len() + 1,
            diag.len(),
            "offdiagonal length must be dimension - 1"
        );
        SymTridiag { diag, offdiag }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Row-sum norm; also the scale used for perturbation thresholds.
    pub fn inf_norm(&self) -> f64 {
        let n = self.dim();
        let mut best: f64 = 0.0;
        for i in 0..n {
            let mut row = self.diag[i].abs();
            if i > 0 {
                row += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                row += self.offdiag[i].abs();
            }
            best = best.max(row);
        }
        best
    }

    /// Matrix-vector product `T x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.offdiag[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiag[i] * x[i + 1];
            }
            y[i] = acc;
        }
        y
    }

    /// Union-of-Gershgorin-discs bounds on the spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }
}

/// Polar decomposition of a gauge parameter: `modulus * exp(i phase)`
/// reconstructs the input, with `phase` in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeResult {
    pub modulus: f64,
    pub phase: f64,
}

/// Rotation gauge: spectra of `V_a` depend on `a` through `|a|` only, so all
/// downstream spectral computation takes the modulus. The phase re-enters
/// only when rotating eigenfunction coefficients back.
pub fn gauge_reduce(a: Complex64) -> GaugeResult {
    let modulus = a.norm();
    let mut phase = a.arg();
    if phase < 0.0 {
        phase += 2.0 * std::f64::consts::PI;
    }
    if modulus == 0.0 {
        phase = 0.0;
    }
    GaugeResult { modulus, phase }
}

/// The closed interval `[(1-|a|)^2, (1+|a|)^2]`: the essential spectrum of
/// `V_a` for any valid weight. `0` is in the spectrum exactly when `|a| = 1`.
pub fn essential_interval(a: Complex64) -> [f64; 2] {
    let m = a.norm();
    [(1.0 - m) * (1.0 - m), (1.0 + m) * (1.0 + m)]
}

/// Coefficientwise action of `V_a` on a truncated sequence:
///
/// `(V_a h)_n = |a|^2 h_n - a h_{n+1} r_n - conj(a) h_{n-1} + h_n r_n`
///
/// with `r_n = w_{n+1}/w_n`. Output has the input's length; the `h_{n+1}`
/// term at the last index reads 0 (truncation boundary), which is exact when
/// the input is a polynomial of smaller degree.
pub fn apply_va(w: &WeightSequence, a: Complex64, h: &CoeffSeq) -> CoeffSeq {
    let n = h.len();
    let a_sq = a.norm_sqr();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let r = w.ratio(k);
        let prev = if k == 0 { Complex64::ZERO } else { h.coeff(k - 1) };
        let val = a_sq * h.coeff(k) - a * h.coeff(k + 1) * r - a.conj() * prev + h.coeff(k) * r;
        out.push(val);
    }
    CoeffSeq::new(out)
}

/// `M*_f M_f h` for a polynomial symbol `f`, exact for polynomial `h`:
/// the multiplication is a Cauchy product carried to full length, and
/// `(M*_f g)_n = w_n^{-1} sum_k conj(f_k) g_{n+k} w_{n+k}`.
///
/// Output length is `h.len() + deg f`.
pub fn apply_poly_v(w: &WeightSequence, f: &CoeffSeq, h: &CoeffSeq) -> CoeffSeq {
    let deg_f = f.degree();
    let out_len = h.len() + deg_f;
    let g = product(f, h, out_len); // M_f h, exact to degree h.len()-1 + deg_f
    let ws = w.weights_upto(out_len);
    let mut out = Vec::with_capacity(out_len);
    for n in 0..out_len {
        let mut acc = Complex64::ZERO;
        for k in 0..=deg_f {
            if n + k >= out_len {
                break;
            }
            acc += f.coeff(k).conj() * g.coeff(n + k) * ws[n + k];
        }
        out.push(acc / ws[n]);
    }
    CoeffSeq::new(out)
}

/// Inner-function test: `f` (a polynomial of unit norm) is inner for the
/// space exactly when `M*_f M_f 1 = 1`; checked as
/// `|| apply_poly_v(w, f, [1]) - [1] ||_inf <= tol`.
pub const INNER_CHECK_DEFAULT_TOL: f64 = 1e-10;

pub fn inner_check(w: &WeightSequence, f: &CoeffSeq, tol: f64) -> bool {
    let one = CoeffSeq::one(1);
    let image = apply_poly_v(w, f, &one);
    let mut dev: f64 = (image.coeff(0) - Complex64::ONE).norm();
    for n in 1..image.len() {
        dev = dev.max(image.coeff(n).norm());
    }
    dev <= tol
}

/// The leading N-by-N section of `V_a` in the normalized monomial basis,
/// for real `a >= 0` (complex inputs go through [`gauge_reduce`] first):
///
/// `d_k = a^2 + r_k`, `e_k = -a sqrt(r_k)`.
pub fn jacobi_truncation(w: &WeightSequence, a: f64, n: usize) -> Result<SymTridiag> {
    if a < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "finite section requires a >= 0 after gauge reduction, got {a}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("section dimension must be >= 1".into()));
    }
    let mut diag = Vec::with_capacity(n);
    let mut offdiag = Vec::with_capacity(n - 1);
    for k in 0..n {
        let r = w.ratio(k);
        diag.push(a * a + r);
        if k + 1 < n {
            offdiag.push(-a * r.sqrt());
        }
    }
    Ok(SymTridiag::new(diag, offdiag))
}

/// The two partial sums certifying that the section sequence is a
/// Hilbert-Schmidt perturbation of the shifted free Jacobi matrix:
///
/// `(2a^2 sum_{k < n_terms} (1 - sqrt(r_k))^2, sum_{k < n_terms} (1 - r_k)^2)`.
pub fn hs_perturbation_sums(w: &WeightSequence, a: f64, n_terms: usize) -> (f64, f64) {
    assert!(n_terms >= 1);
    let mut sqrt_sum = 0.0;
    let mut plain_sum = 0.0;
    for k in 0..n_terms {
        let r = w.ratio(k);
        let s = 1.0 - r.sqrt();
        sqrt_sum += s * s;
        let g = 1.0 - r;
        plain_sum += g * g;
    }
    (2.0 * a * a * sqrt_sum, plain_sum)
}
