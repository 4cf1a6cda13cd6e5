//! Truncated Maclaurin series arithmetic: dense complex coefficient
//! sequences with Cauchy products, generalized binomial series, the series
//! exponential, and weighted partial norms.
//!
//! Consumers index past the stored length (and below zero) as coefficient 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::weights::WeightSequence;

/// A truncated coefficient sequence `h_0, h_1, ..., h_{len-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    coeffs: Vec<Complex64>,
}

impl CoeffSeq {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a coefficient sequence has length >= 1");
        CoeffSeq { coeffs }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![Complex64::ZERO; len])
    }

    /// The constant series `1` padded to `len` terms.
    pub fn one(len: usize) -> Self {
        let mut c = vec![Complex64::ZERO; len];
        c[0] = Complex64::ONE;
        Self::new(c)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at `n`, with zero beyond the stored range.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(Complex64::ZERO)
    }

    /// Truncate or zero-pad to exactly `len` terms.
    pub fn resized(&self, len: usize) -> CoeffSeq {
        let mut c = self.coeffs.clone();
        c.resize(len, Complex64::ZERO);
        CoeffSeq::new(c)
    }

    /// Degree of the highest nonzero stored coefficient (0 for the zero
    /// sequence).
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.norm_sqr() != 0.0)
            .unwrap_or(0)
    }

    /// Scale every coefficient.
    pub fn scaled(&self, factor: Complex64) -> CoeffSeq {
        CoeffSeq::new(self.coeffs.iter().map(|&c| factor * c).collect())
    }

    /// Horner evaluation of the stored polynomial at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Max coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Coefficients of `(1 - s z)^e` via the binomial recurrence
/// `c_{n+1} = c_n (-s)(e - n)/(n + 1)`.
pub fn binomial_series(s: Complex64, e: f64, n_terms: usize) -> CoeffSeq {
    binomial_series_cpx(s, Complex64::new(e, 0.0), n_terms)
}

/// Same as [`binomial_series`] with a complex exponent.
pub fn binomial_series_cpx(s: Complex64, e: Complex64, n_terms: usize) -> CoeffSeq {
    assert!(n_terms >= 1);
    let mut coeffs = Vec::with_capacity(n_terms);
    let mut c = Complex64::ONE;
    coeffs.push(c);
    for n in 0..n_terms - 1 {
        let nf = n as f64;
        c = c * (-s) * (e - nf) / (nf + 1.0);
        coeffs.push(c);
    }
    CoeffSeq::new(coeffs)
}

/// Cauchy product of two truncated series, to `n_terms` coefficients.
pub fn product(u: &CoeffSeq, v: &CoeffSeq, n_terms: usize) -> CoeffSeq {
    assert!(n_terms >= 1);
    let mut out = vec![Complex64::ZERO; n_terms];
    for (i, &a) in u.coeffs().iter().enumerate() {
        if i >= n_terms {
            break;
        }
        if a.norm_sqr() == 0.0 {
            continue;
        }
        for (j, &b) in v.coeffs().iter().enumerate() {
            let k = i + j;
            if k >= n_terms {
                break;
            }
            out[k] += a * b;
        }
    }
    CoeffSeq::new(out)
}

/// Coefficients of `exp(u(z))` for a series with vanishing constant term,
/// via the derivative convolution `n g_n = sum_{k=1}^{n} k u_k g_{n-k}`.
pub fn exponential(u: &CoeffSeq, n_terms: usize) -> Result<CoeffSeq> {
    assert!(n_terms >= 1);
    if u.coeff(0).norm() != 0.0 {
        return Err(Error::InvalidArgument(
            "series exponential requires a vanishing constant term".into(),
        ));
    }
    let mut g = vec![Complex64::ZERO; n_terms];
    g[0] = Complex64::ONE;
    for n in 1..n_terms {
        let mut acc = Complex64::ZERO;
        for k in 1..=n.min(u.len() - 1) {
            acc += (k as f64) * u.coeff(k) * g[n - k];
        }
        g[n] = acc / (n as f64);
    }
    Ok(CoeffSeq::new(g))
}

/// Running partial sums `S_N = sum_{n <= N} |u_n|^2 w_n`. Nondecreasing.
pub fn weighted_partial_norms(u: &CoeffSeq, w: &WeightSequence) -> Vec<f64> {
    let ws = w.weights_upto(u.len());
    let mut out = Vec::with_capacity(u.len());
    let mut acc = 0.0;
    for (c, wn) in u.coeffs().iter().zip(ws) {
        acc += c.norm_sqr() * wn;
        out.push(acc);
    }
    out
}
