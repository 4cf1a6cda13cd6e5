//! Closed-form point spectra and eigenfunctions of `V_a` for the binomial
//! weights `w_n = binom(n - alpha, n)^{-1}`, `alpha < 1`.
//!
//! For each index `j` and branch there is a candidate eigenvalue
//!
//! `lambda_j = |a|^2 + 1 + (alpha^2 -/+ (2j + 2 - alpha) rho_j) / (2 (j+1)(j+1-alpha))`
//!
//! with `rho_j = sqrt(alpha^2 + 4 |a|^2 (j+1)(j+1-alpha))`. Which branches are
//! genuine eigenvalues depends on the signs of `alpha` and `|a| - 1`:
//!
//! * `alpha < 0`: the minus branch, exactly when `0 < |a| < 1`; nothing else.
//! * `alpha in (0, 1)`: the plus branch for every `a != 0`, and additionally
//!   the minus branch when `|a| > 1`.
//! * `alpha = 0`: empty point spectrum (self-adjoint Toeplitz operator).
//!
//! Eigenfunctions are `(z -/+ pole)^j / (1 -/+ pole z)^(j+2-alpha)`, rational
//! up to a fractional power, with `pole` strictly inside `(0, 1)` when the
//! entry is valid. The same coefficients solve the three-term recurrence
//! generated by the eigenvalue equation with `h_0 = 1`, which is what
//! [`eigenfunction_recurrence`] produces for any weight and any `lambda`
//! (membership of the formal solution in the space is not asserted).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{gauge_reduce, SymTridiag};
use crate::series::{binomial_series, product, CoeffSeq};
use crate::weights::{validity_report, WeightSequence};

/// Which side of the essential interval a candidate eigenvalue sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Below `(1-|a|)^2`.
    Minus,
    /// Above `(1+|a|)^2`.
    Plus,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Minus => write!(f, "minus"),
            Branch::Plus => write!(f, "plus"),
        }
    }
}

/// One predicted point-spectrum entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEigen {
    pub j: usize,
    pub branch: Branch,
    pub lambda: f64,
    pub rho: f64,
    /// Eigenfunction parameter: the reciprocal of the larger root of
    /// `z^2 - b z + 1` with `b = (|a|^2 + 1 - lambda)/|a|`. In `(0, 1)` when
    /// the entry is valid.
    pub pole: f64,
    /// Whether this branch exists for the given `(alpha, |a|)`.
    pub valid: bool,
}

/// Interval guaranteed to contain any eigenvalue, from the sup-ratio
/// constants. Case `NonIncreasing` is half-open on the right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub lo: f64,
    pub hi: f64,
    pub case_tag: BoundsCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundsCase {
    NonDecreasing,
    NonIncreasing,
}

/// `rho_j = sqrt(alpha^2 + 4 a^2 (j+1)(j+1-alpha))`; always exceeds |alpha|.
pub fn rho(alpha: f64, a_mod: f64, j: usize) -> f64 {
    let jp = j as f64 + 1.0;
    (alpha * alpha + 4.0 * a_mod * a_mod * jp * (jp - alpha)).sqrt()
}

fn entry(alpha: f64, a_mod: f64, j: usize, branch: Branch) -> PointEigen {
    let jp = j as f64 + 1.0;
    let denom = 2.0 * jp * (jp - alpha);
    let rho_j = rho(alpha, a_mod, j);
    let signed = match branch {
        Branch::Minus => -(2.0 * jp - alpha) * rho_j,
        Branch::Plus => (2.0 * jp - alpha) * rho_j,
    };
    let lambda = a_mod * a_mod + 1.0 + (alpha * alpha + signed) / denom;
    let pole = match branch {
        Branch::Minus => (rho_j + alpha) / (2.0 * a_mod * jp),
        Branch::Plus => (rho_j - alpha) / (2.0 * a_mod * jp),
    };
    let valid = match branch {
        Branch::Minus => {
            if alpha < 0.0 {
                a_mod < 1.0
            } else {
                a_mod > 1.0
            }
        }
        Branch::Plus => alpha > 0.0,
    };
    PointEigen { j, branch, lambda, rho: rho_j, pole, valid }
}

/// All candidate entries for `j <= jmax`, both branches, sorted by `j` with
/// the minus branch first. `alpha = 0` yields an empty list; `alpha >= 1`
/// and `a = 0` are rejected.
pub fn point_spectrum(alpha: f64, a: Complex64, jmax: usize) -> Result<Vec<PointEigen>> {
    if alpha >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "closed-form point spectrum requires alpha < 1, got {alpha}"
        )));
    }
    if a.norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "point spectrum requires a != 0 (the a = 0 operator is diagonal)".into(),
        ));
    }
    if alpha == 0.0 {
        return Ok(Vec::new());
    }
    let a_mod = a.norm();
    let mut out = Vec::with_capacity(2 * (jmax + 1));
    for j in 0..=jmax {
        out.push(entry(alpha, a_mod, j, Branch::Minus));
        out.push(entry(alpha, a_mod, j, Branch::Plus));
    }
    Ok(out)
}

/// Maclaurin coefficients of the closed-form eigenfunction for a valid
/// entry, normalized to `h_0 = 1`:
///
/// minus branch `(1 - z/pole)^j (1 - pole z)^(-(j+2-alpha))`, plus branch
/// with both signs flipped. For complex `a` the coefficients are rotated
/// back through the gauge: coefficient `n` picks up `exp(-i n arg a)`.
///
/// The numerator is regrouped as `(1 - z/s) = (1 - s z) + z (s - 1/s)`
/// before multiplying out, turning the product into a short sum of
/// binomial series whose leading term dominates; the naive Cauchy product
/// loses ~`n^j` digits to cancellation when the pole approaches 1.
pub fn eigenfunction_closed(
    alpha: f64,
    a: Complex64,
    entry: &PointEigen,
    n_terms: usize,
) -> Result<CoeffSeq> {
    if !entry.valid {
        return Err(Error::InvalidArgument(format!(
            "no eigenfunction: branch {} at j = {} does not exist for alpha = {alpha}, |a| = {}",
            entry.branch,
            entry.j,
            a.norm()
        )));
    }
    let s = match entry.branch {
        Branch::Minus => entry.pole,
        Branch::Plus => -entry.pole,
    };
    let j = entry.j;
    // (1 - z/s)^j (1 - s z)^{-(j+2-alpha)}
    //   = sum_i binom(j,i) (s - 1/s)^i z^i (1 - s z)^{-(2-alpha+i)}
    let delta = s - 1.0 / s;
    let mut acc = vec![Complex64::ZERO; n_terms];
    let mut front = 1.0; // binom(j,i) delta^i
    for i in 0..=j {
        let term = binomial_series(Complex64::new(s, 0.0), -(2.0 - alpha + i as f64), n_terms);
        for n in i..n_terms {
            acc[n] += front * term.coeff(n - i);
        }
        front *= delta * (j - i) as f64 / (i as f64 + 1.0);
    }
    let h = CoeffSeq::new(acc);
    let phase = gauge_reduce(a).phase;
    if phase == 0.0 {
        return Ok(h);
    }
    let rotated = h
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, &c)| c * Complex64::from_polar(1.0, -(n as f64) * phase))
        .collect();
    Ok(CoeffSeq::new(rotated))
}

/// The unique `h_0 = 1` formal solution of the eigenvalue recurrence
///
/// `h_{n+1} = ((a^2 + r_n - lambda) h_n - a h_{n-1}) / (a r_n)`
///
/// for any weight and any `lambda`. Whether the result lies in the space is
/// for the caller to judge (decay, weighted norms). `a = 0` is rejected:
/// the relation then no longer determines `h_{n+1}`.
pub fn eigenfunction_recurrence(
    w: &WeightSequence,
    a_mod: f64,
    lambda: f64,
    n_terms: usize,
) -> Result<CoeffSeq> {
    if !(a_mod > 0.0) {
        return Err(Error::InvalidArgument(
            "the eigenvalue relation is only a recurrence for a != 0".into(),
        ));
    }
    assert!(n_terms >= 1);
    let mut h = Vec::with_capacity(n_terms);
    h.push(Complex64::ONE);
    let mut prev = Complex64::ZERO; // h_{-1}
    for n in 0..n_terms - 1 {
        let r = w.ratio(n);
        let cur = h[n];
        let next = ((a_mod * a_mod + r - lambda) * cur - a_mod * prev) / (a_mod * r);
        h.push(next);
        prev = cur;
    }
    Ok(CoeffSeq::new(h))
}

/// Number of ratios scanned to classify monotonicity for the bounds.
const BOUNDS_SCAN: usize = 1000;

/// Eigenvalue localization from the sup-ratio constants:
///
/// * non-decreasing weights: `[(a-1)^2 - C0 a, (a+1)^2 + (C0 - 1) a]`,
/// * non-increasing weights: `[(a-1)^2 - (C1 - 1), (a-1)^2)` (right-open).
///
/// The non-increasing interval is a proven enclosure (the operator norm is
/// at most `(a+1)^2`, so everything sits on the minus side). The
/// non-decreasing interval undershoots for small `a`: the top of the plus
/// branch exceeds its right endpoint there — the tests pin
/// `(alpha, a) = (0.25, 0.3)` as a concrete case — so treat it as a guide,
/// not a certificate, below `a` of about 1.
///
/// A constant weight is classified non-increasing, making the interval
/// empty, which matches its empty point spectrum.
pub fn eigenvalue_bounds(w: &WeightSequence, a_mod: f64) -> BoundsResult {
    let rep = validity_report(w, BOUNDS_SCAN);
    let non_decreasing = (0..BOUNDS_SCAN).any(|n| w.ratio(n) > 1.0);
    let a = a_mod;
    if non_decreasing {
        BoundsResult {
            lo: (a - 1.0) * (a - 1.0) - rep.c0 * a,
            hi: (a + 1.0) * (a + 1.0) + (rep.c0 - 1.0) * a,
            case_tag: BoundsCase::NonDecreasing,
        }
    } else {
        BoundsResult {
            lo: (a - 1.0) * (a - 1.0) - (rep.c1 - 1.0),
            hi: (a - 1.0) * (a - 1.0),
            case_tag: BoundsCase::NonIncreasing,
        }
    }
}

/// Boundary-case candidate for `lambda = (a -/+ 1)^2` (double root of the
/// pole polynomial at +/-1), `alpha < 0`:
///
/// `h(z) = (1 -/+ z)^(alpha-2) exp(-alpha (1/a -/+ 1)/(z -/+ 1))`
///
/// normalized to `h_0 = 1`. Analytic on the disc but not in the space; pair
/// with weighted partial norms to exhibit the divergence.
pub fn case3_candidate(alpha: f64, a_mod: f64, sign: i32, n_terms: usize) -> Result<CoeffSeq> {
    let (normalized, _scale) = case3_raw(alpha, a_mod, sign, n_terms)?;
    Ok(normalized)
}

/// Shared construction: returns the normalized series together with the
/// unnormalized constant term `exp(u_0)`.
pub(crate) fn case3_raw(
    alpha: f64,
    a_mod: f64,
    sign: i32,
    n_terms: usize,
) -> Result<(CoeffSeq, f64)> {
    if !(alpha < 0.0) || !(a_mod > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "boundary candidates require alpha < 0 and a > 0, got alpha = {alpha}, a = {a_mod}"
        )));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument("sign must be +1 or -1".into()));
    }
    let sigma = sign as f64;
    // 1/(z - sigma) = -sum_n z^n sigma^(n+1) for sigma = +/-1, so the
    // exponent series -alpha (1/a - sigma)/(z - sigma) has terms
    // u_n = alpha (1/a - sigma) sigma^(n+1): constant for sigma = 1,
    // alternating for sigma = -1.
    let coeff = alpha * (1.0 / a_mod - sigma);
    let u: Vec<Complex64> = (0..n_terms)
        .map(|n| {
            let sig_pow = if n % 2 == 0 { sigma } else { 1.0 };
            Complex64::new(coeff * sig_pow, 0.0)
        })
        .collect();
    let u0 = u[0].re;
    let mut centered = u;
    centered[0] = Complex64::ZERO;
    let exp_part = crate::series::exponential(&CoeffSeq::new(centered), n_terms)?;
    let front = binomial_series(Complex64::new(sigma, 0.0), alpha - 2.0, n_terms);
    // True candidate is exp(u0) * front * exp_part; the scalar cancels under
    // the h_0 = 1 normalization, so it is returned separately.
    let series = product(&front, &exp_part, n_terms);
    Ok((series, u0.exp()))
}

/// Worst relative residual of the three-term eigenvalue relation
/// `a r_n h_{n+1} - (a^2 + r_n - lambda) h_n + a h_{n-1} = 0` over the
/// first `n_check` indices of `h`.
///
/// Since the relation determines `h_{n+1}` uniquely from its predecessors,
/// a sequence with `h_0 = 1` and vanishing residual at every index IS the
/// normalized recurrence solution; checking the residual per index stays
/// numerically well-posed where iterating the recurrence forward in f64
/// would drown in amplified roundoff (see [`forward_stability_window`]).
pub fn recurrence_residual(
    w: &WeightSequence,
    a_mod: f64,
    lambda: f64,
    h: &CoeffSeq,
    n_check: usize,
) -> f64 {
    let mut worst: f64 = 0.0;
    for n in 0..n_check.min(h.len().saturating_sub(1)) {
        let r = w.ratio(n);
        let up = a_mod * r * h.coeff(n + 1);
        let mid = (a_mod * a_mod + r - lambda) * h.coeff(n);
        let down = if n == 0 { Complex64::ZERO } else { a_mod * h.coeff(n - 1) };
        let res = (up - mid + down).norm();
        let scale = up.norm().max(mid.norm()).max(down.norm()).max(f64::MIN_POSITIVE);
        worst = worst.max(res / scale);
    }
    worst
}

/// Largest coefficient index up to which forward f64 iteration of the
/// recurrence still tracks a solution decaying like `pole^n`.
///
/// Roundoff injected at machine precision rides the complementary solution,
/// which grows like `pole^{-n}`; the deviation relative to the decaying
/// solution therefore grows like `eps * pole^{-2n}`. The window is where
/// that envelope stays below `tol` (with a 4x safety factor).
pub fn forward_stability_window(pole: f64, tol: f64) -> usize {
    if !(pole > 0.0 && pole < 1.0) {
        return usize::MAX;
    }
    let budget = (tol / (4.0 * f64::EPSILON)).ln();
    if budget <= 0.0 {
        return 0;
    }
    (budget / (2.0 * (1.0 / pole).ln())).floor() as usize
}

/// Relative residual of a predicted eigenpair against a finite section:
/// with `h_hat_n = h_n sqrt(w_n)`, returns
/// `|| (T h_hat - lambda h_hat)_(interior) ||_2 / || h_hat ||_2`,
/// where interior excludes the last row (its up-coupling is truncated).
pub fn section_residual(t: &SymTridiag, w: &WeightSequence, h: &CoeffSeq, lambda: f64) -> f64 {
    let n = t.dim();
    let ws = w.weights_upto(n);
    let h_hat: Vec<Complex64> = (0..n).map(|k| h.coeff(k) * ws[k].sqrt()).collect();
    let mut num = 0.0;
    for k in 0..n.saturating_sub(1) {
        let mut acc = t.diag[k] * h_hat[k];
        if k > 0 {
            acc += t.offdiag[k - 1] * h_hat[k - 1];
        }
        if k + 1 < n {
            acc += t.offdiag[k] * h_hat[k + 1];
        }
        num += (acc - lambda * h_hat[k]).norm_sqr();
    }
    let den: f64 = h_hat.iter().map(|c| c.norm_sqr()).sum();
    (num / den).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::eigenvalues;
    use crate::operator::jacobi_truncation;
    use crate::series::weighted_partial_norms;
    use crate::weights::{make_weight, WeightKind};

    fn bergman(alpha: f64) -> WeightSequence {
        make_weight(WeightKind::BergmanType { alpha }).unwrap()
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn rho_examples() {
        assert!((rho(-1.0, 0.5, 0) - 3.0f64.sqrt()).abs() < 1e-15);
        assert!((rho(0.5, 1.0, 0) - 1.5).abs() < 1e-15);
        // alpha = 0 collapses to 2a(j+1).
        for j in 0..5 {
            assert!((rho(0.0, 0.7, j) - 2.0 * 0.7 * (j as f64 + 1.0)).abs() < 1e-14);
        }
        for &alpha in &[-2.0, -0.5, 0.25, 0.75] {
            assert!(rho(alpha, 0.3, 2) > alpha.abs());
        }
    }

    #[test]
    fn bergman_small_a_eigenvalues() {
        // Independent arithmetic for the first two minus-branch values.
        let lam0 = 1.25 + (1.0 - 3.0 * 3.0f64.sqrt()) / 4.0;
        let lam1 = 1.25 + (1.0 - 5.0 * 7.0f64.sqrt()) / 12.0;
        let spec = point_spectrum(-1.0, re(0.5), 1).unwrap();
        let minus: Vec<&PointEigen> =
            spec.iter().filter(|e| e.branch == Branch::Minus).collect();
        assert!(minus.iter().all(|e| e.valid));
        assert!((minus[0].lambda - lam0).abs() < 1e-15);
        assert!((minus[0].lambda - 0.2009619).abs() < 1e-7);
        assert!((minus[1].lambda - lam1).abs() < 1e-15);
        assert!((minus[1].lambda - 0.2309370).abs() < 1e-7);
        // The plus branch does not exist for alpha < 0.
        assert!(spec.iter().filter(|e| e.branch == Branch::Plus).all(|e| !e.valid));
    }

    #[test]
    fn bergman_large_a_spectrum_empty() {
        let spec = point_spectrum(-1.0, re(1.5), 10).unwrap();
        assert!(spec.iter().all(|e| !e.valid));
        // |a| = 1 is on the empty side for alpha < 0.
        let spec = point_spectrum(-1.0, re(1.0), 4).unwrap();
        assert!(spec.iter().all(|e| !e.valid));
    }

    #[test]
    fn dirichlet_type_both_branches_at_large_a() {
        let spec = point_spectrum(0.5, re(2.0), 0).unwrap();
        let plus = spec.iter().find(|e| e.branch == Branch::Plus).unwrap();
        let minus = spec.iter().find(|e| e.branch == Branch::Minus).unwrap();
        assert!(plus.valid && minus.valid);
        // rho_0 = sqrt(8.25); freeze the quadratic-formula oracle values.
        let rho0 = 8.25f64.sqrt();
        assert!((plus.lambda - (5.25 + 1.5 * rho0)).abs() < 1e-14);
        assert!((minus.lambda - (5.25 - 1.5 * rho0)).abs() < 1e-14);
        assert!((plus.lambda - 9.5584220).abs() < 1e-7);
        assert!((minus.lambda - 0.9415780).abs() < 1e-7);

        // At |a| <= 1 only the plus branch survives, e.g. lambda_0^+ = 4.5.
        let spec = point_spectrum(0.5, re(1.0), 0).unwrap();
        let plus = spec.iter().find(|e| e.branch == Branch::Plus).unwrap();
        assert!(plus.valid);
        assert!((plus.lambda - 4.5).abs() < 1e-15);
        assert!((plus.rho - 1.5).abs() < 1e-15);
        assert!(!spec.iter().find(|e| e.branch == Branch::Minus).unwrap().valid);
    }

    #[test]
    fn hardy_weight_has_empty_spectrum_and_bad_inputs_are_rejected() {
        assert!(point_spectrum(0.0, re(0.5), 10).unwrap().is_empty());
        assert!(point_spectrum(1.0, re(0.5), 1).is_err());
        assert!(point_spectrum(-1.0, Complex64::ZERO, 1).is_err());
    }

    #[test]
    fn branch_placement_and_positivity_on_grid() {
        for &alpha in &[-2.0, -1.0, -0.5, 0.25, 0.5, 0.75] {
            for &a in &[0.3, 0.9, 1.1, 2.0] {
                let lo = (1.0 - a) * (1.0 - a);
                let hi = (1.0 + a) * (1.0 + a);
                for e in point_spectrum(alpha, re(a), 20).unwrap() {
                    if !e.valid {
                        continue;
                    }
                    assert!(e.lambda > 0.0, "positivity: alpha={alpha} a={a} j={}", e.j);
                    match e.branch {
                        Branch::Minus => assert!(e.lambda < lo, "alpha={alpha} a={a} j={}", e.j),
                        Branch::Plus => assert!(e.lambda > hi, "alpha={alpha} a={a} j={}", e.j),
                    }
                    assert!(e.pole > 0.0 && e.pole < 1.0, "pole: alpha={alpha} a={a} j={}", e.j);
                }
            }
        }
    }

    #[test]
    fn pole_solves_the_root_relation() {
        // The signed pole (minus branch +, plus branch -) is 1/c where
        // c + 1/c = b, b = (a^2 + 1 - lambda)/a; the plus branch sits at
        // b < -2, where the |c| >= 1 root is negative.
        for &alpha in &[-2.0, -1.0, -0.5, 0.25, 0.5, 0.75] {
            for &a in &[0.3, 0.9, 1.1, 2.0] {
                for e in point_spectrum(alpha, re(a), 6).unwrap() {
                    if !e.valid {
                        continue;
                    }
                    let b = (a * a + 1.0 - e.lambda) / a;
                    let signed_pole = match e.branch {
                        Branch::Minus => e.pole,
                        Branch::Plus => -e.pole,
                    };
                    let c = 1.0 / signed_pole;
                    assert!(c.abs() > 1.0, "alpha={alpha} a={a} j={}", e.j);
                    assert!(
                        (c + 1.0 / c - b).abs() < 1e-12 * b.abs().max(1.0),
                        "alpha={alpha} a={a} j={} {:?}",
                        e.j,
                        e.branch
                    );
                }
            }
        }
    }

    #[test]
    fn minus_branch_increases_to_left_edge_and_gaps_are_summable() {
        let a: f64 = 0.5;
        let left = (1.0 - a) * (1.0 - a);
        let spec = point_spectrum(-1.0, re(a), 1000).unwrap();
        let minus: Vec<f64> = spec
            .iter()
            .filter(|e| e.branch == Branch::Minus && e.valid)
            .map(|e| e.lambda)
            .collect();
        assert_eq!(minus.len(), 1001);
        for (j, pair) in minus.windows(2).enumerate() {
            assert!(pair[1] > pair[0], "j = {j}");
        }
        let mut gap_power_sum = 0.0;
        let mut partial_at_500 = 0.0;
        for (j, &lam) in minus.iter().enumerate() {
            assert!(lam < left);
            gap_power_sum += (left - lam).powf(1.5);
            if j == 500 {
                partial_at_500 = gap_power_sum;
            }
        }
        // Gaps decay ~ j^{-2}; the 3/2-power series has essentially settled.
        assert!(gap_power_sum.is_finite());
        assert!(gap_power_sum - partial_at_500 < 0.01 * gap_power_sum);

        // Plus branch decreases to the right edge for alpha in (0,1).
        let spec = point_spectrum(0.5, re(a), 400).unwrap();
        let plus: Vec<f64> = spec
            .iter()
            .filter(|e| e.branch == Branch::Plus && e.valid)
            .map(|e| e.lambda)
            .collect();
        let right = (1.0 + a) * (1.0 + a);
        for pair in plus.windows(2) {
            assert!(pair[1] < pair[0]);
        }
        assert!(plus.iter().all(|&l| l > right));
    }

    #[test]
    fn closed_form_coefficients_match_examples() {
        // j = 0 minus branch at the Bergman weight: (1 - s z)^{-3},
        // s = sqrt(3) - 1.
        let spec = point_spectrum(-1.0, re(0.5), 0).unwrap();
        let e0 = spec.iter().find(|e| e.branch == Branch::Minus).unwrap();
        assert!((e0.pole - (3.0f64.sqrt() - 1.0)).abs() < 1e-15);
        let h = eigenfunction_closed(-1.0, re(0.5), e0, 5).unwrap();
        assert!((h.coeff(0) - re(1.0)).norm() < 1e-15);
        assert!((h.coeff(1) - re(2.1961524)).norm() < 1e-7);
        assert!((h.coeff(2) - re(3.2153903)).norm() < 1e-7);

        // Plus branch, alpha = 1/2: (1 + t z)^{-3/2} with t = 1/2 at a = 1.
        let spec = point_spectrum(0.5, re(1.0), 0).unwrap();
        let p0 = spec.iter().find(|e| e.branch == Branch::Plus).unwrap();
        assert!((p0.pole - 0.5).abs() < 1e-15);
        let h = eigenfunction_closed(0.5, re(1.0), p0, 3).unwrap();
        assert!((h.coeff(1) - re(-0.75)).norm() < 1e-15);

        // a = 2: t = 0.5930703, first coefficient -1.5 t.
        let spec = point_spectrum(0.5, re(2.0), 0).unwrap();
        let p0 = spec.iter().find(|e| e.branch == Branch::Plus).unwrap();
        assert!((p0.pole - 0.5930703).abs() < 1e-7);
        let h = eigenfunction_closed(0.5, re(2.0), p0, 3).unwrap();
        assert!((h.coeff(1) - re(-0.8896055)).norm() < 1e-7);

        // Invalid entries are rejected.
        let spec = point_spectrum(-1.0, re(1.5), 0).unwrap();
        assert!(eigenfunction_closed(-1.0, re(1.5), &spec[0], 3).is_err());
    }

    #[test]
    fn recurrence_examples() {
        let w = bergman(-1.0);
        let lam0 = 1.25 + (1.0 - 3.0 * 3.0f64.sqrt()) / 4.0;
        let h = eigenfunction_recurrence(&w, 0.5, lam0, 3).unwrap();
        assert!((h.coeff(1) - re((0.75 - lam0) / 0.25)).norm() < 1e-14);
        assert!((h.coeff(1) - re(2.1961524)).norm() < 1e-7);

        let w = bergman(0.5);
        let h = eigenfunction_recurrence(&w, 1.0, 4.5, 2).unwrap();
        assert!((h.coeff(1) - re(-0.75)).norm() < 1e-15);

        // Hardy weight at lambda = 2: the solution alternates
        // [1, 0, -1, 0, 1, ...] with no decay, certifying that 2 is not an
        // eigenvalue there.
        let w = bergman(0.0);
        let h = eigenfunction_recurrence(&w, 1.0, 2.0, 9).unwrap();
        let want = [1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0];
        for (k, &v) in want.iter().enumerate() {
            assert!((h.coeff(k) - re(v)).norm() < 1e-12, "k = {k}");
        }

        assert!(eigenfunction_recurrence(&w, 0.0, 1.0, 4).is_err());
    }

    #[test]
    fn closed_form_equals_recurrence_on_grid() {
        // Sequence identity is checked in two parts: the per-index relation
        // residual of the closed form (well-posed at any depth), plus a
        // literal elementwise comparison on the window where forward f64
        // iteration still tracks the decaying solution.
        for &alpha in &[-2.0, -1.0, -0.5, 0.25, 0.5, 0.75] {
            let w = bergman(alpha);
            for &a in &[0.3, 0.9, 1.1, 2.0] {
                for e in point_spectrum(alpha, re(a), 3).unwrap() {
                    if !e.valid {
                        continue;
                    }
                    let closed = eigenfunction_closed(alpha, re(a), &e, 51).unwrap();
                    assert!((closed.coeff(0) - re(1.0)).norm() < 1e-14);
                    let res = recurrence_residual(&w, a, e.lambda, &closed, 50);
                    assert!(
                        res <= 1e-10,
                        "alpha={alpha} a={a} j={} {:?}: relation residual {res}",
                        e.j,
                        e.branch
                    );

                    let window = forward_stability_window(e.pole, 1e-10).min(50);
                    let rec = eigenfunction_recurrence(&w, a, e.lambda, 51).unwrap();
                    let mut sup: f64 = 0.0;
                    for n in 0..=window {
                        sup = sup.max(closed.coeff(n).norm());
                        assert!(
                            (closed.coeff(n) - rec.coeff(n)).norm() <= 1e-10 * sup,
                            "alpha={alpha} a={a} j={} {:?} n={n}",
                            e.j,
                            e.branch
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn coefficients_decay_at_the_pole_rate() {
        let spec = point_spectrum(-1.0, re(0.5), 2).unwrap();
        for e in spec.iter().filter(|e| e.valid) {
            let h = eigenfunction_closed(-1.0, re(0.5), e, 220).unwrap();
            // Rolling coefficient ratio settles near the pole.
            let mut acc = 0.0;
            for n in 150..200 {
                acc += (h.coeff(n + 1).norm() / h.coeff(n).norm()).ln();
            }
            let rate = (acc / 50.0).exp();
            assert!((rate - e.pole).abs() < 0.05 * e.pole, "j = {}", e.j);
        }
    }

    #[test]
    fn predicted_pairs_have_small_section_residual() {
        let alpha = -1.0;
        let w = bergman(alpha);
        let a = 0.5;
        let t = jacobi_truncation(&w, a, 500).unwrap();
        for e in point_spectrum(alpha, re(a), 3).unwrap() {
            if !e.valid {
                continue;
            }
            let h = eigenfunction_closed(alpha, re(a), &e, 500).unwrap();
            let res = section_residual(&t, &w, &h, e.lambda);
            assert!(res < 1e-8, "j = {} residual {res}", e.j);
        }
    }

    #[test]
    fn section_eigenvalues_approach_predictions() {
        // Small version of the large-section runs: N = 300 already pins the
        // lowest eigenvalue to 1e-8.
        let w = bergman(-1.0);
        let t = jacobi_truncation(&w, 0.5, 300).unwrap();
        let vals = eigenvalues(&t, 1e-10).unwrap().values;
        let lam0 = 1.25 + (1.0 - 3.0 * 3.0f64.sqrt()) / 4.0;
        assert!((vals[0] - lam0).abs() < 1e-8);
    }

    #[test]
    fn bounds_examples() {
        let w = bergman(-1.0);
        let b = eigenvalue_bounds(&w, 0.5);
        assert_eq!(b.case_tag, BoundsCase::NonIncreasing);
        assert!((b.lo - (-0.75)).abs() < 1e-15);
        assert!((b.hi - 0.25).abs() < 1e-15);

        let w = bergman(0.5);
        let b = eigenvalue_bounds(&w, 1.0);
        assert_eq!(b.case_tag, BoundsCase::NonDecreasing);
        assert!((b.lo - (-2.0)).abs() < 1e-15);
        assert!((b.hi - 5.0).abs() < 1e-15);

        // Constant weight degenerates to the empty right-open interval.
        let w = bergman(0.0);
        let b = eigenvalue_bounds(&w, 0.7);
        assert_eq!(b.case_tag, BoundsCase::NonIncreasing);
        assert_eq!(b.lo, b.hi);
    }

    #[test]
    fn valid_eigenvalues_lie_in_bounds() {
        // Non-increasing case: full enclosure. Non-decreasing case: the left
        // endpoint always holds, the right endpoint only away from small a
        // (see the counterexample test below).
        for &alpha in &[-2.0, -1.0, -0.5, 0.25, 0.5, 0.75] {
            let w = bergman(alpha);
            for &a in &[0.3, 0.9, 1.1, 2.0] {
                let b = eigenvalue_bounds(&w, a);
                for e in point_spectrum(alpha, re(a), 10).unwrap() {
                    if !e.valid {
                        continue;
                    }
                    match b.case_tag {
                        BoundsCase::NonDecreasing => {
                            assert!(e.lambda >= b.lo - 1e-12);
                            if a >= 0.9 {
                                assert!(
                                    e.lambda <= b.hi + 1e-12,
                                    "alpha={alpha} a={a} j={} {:?}",
                                    e.j,
                                    e.branch
                                );
                            }
                        }
                        BoundsCase::NonIncreasing => {
                            assert!(e.lambda >= b.lo - 1e-12 && e.lambda < b.hi)
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn case_one_upper_edge_misses_top_eigenvalue_at_small_a() {
        // Counterexample pinning the doc caveat: at alpha = 0.25, a = 0.3
        // the largest eigenvalue exceeds the non-decreasing-case right
        // endpoint. The value is corroborated by a finite section, whose
        // Rayleigh quotients never exceed the true spectral sup.
        let alpha = 0.25;
        let a = 0.3;
        let w = bergman(alpha);
        let b = eigenvalue_bounds(&w, a);
        assert_eq!(b.case_tag, BoundsCase::NonDecreasing);
        let top = point_spectrum(alpha, re(a), 0)
            .unwrap()
            .into_iter()
            .find(|e| e.branch == Branch::Plus)
            .unwrap();
        assert!(top.valid);
        assert!(top.lambda > b.hi + 0.01);
        let t = jacobi_truncation(&w, a, 600).unwrap();
        let section_top = *eigenvalues(&t, 1e-10).unwrap().values.last().unwrap();
        assert!((section_top - top.lambda).abs() < 1e-6);
        assert!(section_top > b.hi + 0.01);
    }

    #[test]
    fn gauge_rotation_of_eigenfunctions() {
        let theta = std::f64::consts::FRAC_PI_3;
        let a = Complex64::from_polar(0.7, theta);
        let spec_rot = point_spectrum(-1.0, a, 2).unwrap();
        let spec_real = point_spectrum(-1.0, re(0.7), 2).unwrap();
        for (er, e0) in spec_rot.iter().zip(&spec_real) {
            assert_eq!(er.valid, e0.valid);
            if !er.valid {
                continue;
            }
            assert!((er.lambda - e0.lambda).abs() < 1e-14);
            let hr = eigenfunction_closed(-1.0, a, er, 30).unwrap();
            let h0 = eigenfunction_closed(-1.0, re(0.7), e0, 30).unwrap();
            for n in 0..30 {
                let want = h0.coeff(n) * Complex64::from_polar(1.0, -(n as f64) * theta);
                assert!((hr.coeff(n) - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn case3_candidate_examples() {
        // Unnormalized constant term is exp(alpha (1/a - 1)) = 1/e here.
        let (_, scale) = case3_raw(-1.0, 0.5, 1, 8).unwrap();
        assert!((scale - (-1.0f64).exp()).abs() < 1e-15);

        let h = case3_candidate(-1.0, 0.5, 1, 64).unwrap();
        assert!((h.coeff(0) - re(1.0)).norm() < 1e-15);
        let h = case3_candidate(-2.0, 0.25, -1, 64).unwrap();
        assert!((h.coeff(0) - re(1.0)).norm() < 1e-15);

        assert!(case3_candidate(0.5, 0.5, 1, 8).is_err());
        assert!(case3_candidate(-1.0, 0.5, 0, 8).is_err());
    }

    #[test]
    fn case3_candidate_solves_recurrence_but_escapes_the_space() {
        // The boundary candidate solves the eigenvalue recurrence at
        // lambda = (a - 1)^2 ...
        let alpha = -1.0;
        let a = 0.5;
        let w = bergman(alpha);
        let lam = (a - 1.0) * (a - 1.0);
        let cand = case3_candidate(alpha, a, 1, 400).unwrap();
        let rec = eigenfunction_recurrence(&w, a, lam, 400).unwrap();
        for n in 0..400 {
            let scale = rec.coeff(n).norm().max(1.0);
            assert!((cand.coeff(n) - rec.coeff(n)).norm() < 1e-9 * scale, "n = {n}");
        }
        // ... but its weighted partial norms keep climbing: no plateau.
        let big = case3_candidate(alpha, a, 1, 10_000).unwrap();
        let norms = weighted_partial_norms(&big, &w);
        for pair in norms.windows(2) {
            assert!(pair[1] >= pair[0]);
        }
        let s100 = norms[99];
        let s10k = norms[9_999];
        assert!(s10k > 10.0 * s100, "s100 = {s100}, s10k = {s10k}");
        for block in norms.chunks(100).skip(1) {
            assert!(block.last().unwrap() > &block[0]);
        }
    }
}
