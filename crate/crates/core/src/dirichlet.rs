//! Hypergeometric construction of candidate eigenfunctions for the
//! increasing binomial weights `w_n = binom(n + alpha, n)`, `alpha > 0`
//! (`alpha = 1` is the classical Dirichlet weight `n + 1`).
//!
//! For these weights the eigenvalue recurrence sums to a first-order ODE
//! with an inhomogeneous term, so eigenfunction candidates are no longer
//! elementary: the solution with `h(0) = 1` is
//!
//! `h(z) = F(z) / ((1 - z/c)^mu (1 - c z)^nu)`,
//!
//! where `F` is a two-variable hypergeometric series restricted to the
//! curve `(z/c, cz)` and `mu, nu` solve a linear system with
//! `mu + nu = 2 - alpha`. Whether any such candidate lies in the space is
//! open; this module builds the objects, checks them against the
//! recurrence, and reports norm-growth diagnostics without asserting a
//! verdict.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::series::{binomial_series_cpx, product, CoeffSeq};
use crate::weights::{make_weight, WeightKind, WeightSequence};

/// Tolerance for detecting the double-root configuration `c = +/-1`.
const DEGENERATE_TOL: f64 = 1e-12;

/// Norm-diagnostic terms stop once a single term exceeds this.
const NORM_TERM_GUARD: f64 = 1e280;

/// Parameters of the first-order ODE satisfied by eigenfunction candidates.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct OdeParams {
    pub alpha: f64,
    pub a_mod: f64,
    pub lambda: f64,
    /// `b = (a^2 + 1 - lambda)/a`.
    pub b: f64,
    /// Root of `z^2 - b z + 1` with `|c| >= 1` (on the unit circle when
    /// `|b| < 2`).
    pub c: Complex64,
    /// `mu = 1 + (alpha/a)(a - c)/(b c - 2)`.
    pub mu: Complex64,
    /// `nu = 1 - alpha - (alpha/a)(a - c)/(b c - 2)`; `mu + nu = 2 - alpha`.
    pub nu: Complex64,
}

/// The weight `w_n = binom(n + alpha, n)` as a ratio generator
/// `r_n = (n + 1 + alpha)/(n + 1)`.
pub fn dirichlet_weight(alpha: f64) -> Result<WeightSequence> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "the increasing binomial weight requires alpha > 0, got {alpha}"
        )));
    }
    make_weight(WeightKind::Custom {
        ratio: std::sync::Arc::new(move |n| (n as f64 + 1.0 + alpha) / (n as f64 + 1.0)),
        label: format!("dirichlet-binom:{alpha}"),
    })
}

fn reject_bad_zeta(zeta: Complex64) -> Result<()> {
    if zeta.im == 0.0 && zeta.re <= 0.0 && zeta.re == zeta.re.round() {
        return Err(Error::InvalidArgument(format!(
            "hypergeometric parameter zeta = {zeta} is a nonpositive integer"
        )));
    }
    Ok(())
}

/// Series coefficients `(beta)_n (gamma)_n / ((zeta)_n n!)` of the Gauss
/// hypergeometric function.
pub fn gauss_2f1(
    beta: Complex64,
    gamma: Complex64,
    zeta: Complex64,
    n_terms: usize,
) -> Result<CoeffSeq> {
    reject_bad_zeta(zeta)?;
    assert!(n_terms >= 1);
    let mut coeffs = Vec::with_capacity(n_terms);
    let mut c = Complex64::ONE;
    coeffs.push(c);
    for n in 0..n_terms - 1 {
        let nf = n as f64;
        c = c * (beta + nf) * (gamma + nf) / ((zeta + nf) * (nf + 1.0));
        coeffs.push(c);
    }
    Ok(CoeffSeq::new(coeffs))
}

/// Rising-factorial ladders `(gamma)_m x^m / m!` for `m < n`.
fn pochhammer_ladder(gamma: Complex64, x: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n);
    let mut v = Complex64::ONE;
    for m in 0..n {
        out.push(v);
        let mf = m as f64;
        v = v * (gamma + mf) * x / (mf + 1.0);
    }
    out
}

/// Truncated value of the double hypergeometric series
///
/// `F1(beta; gamma, gamma'; zeta; x, y)
///    = sum_{m,n} (beta)_{m+n} (gamma)_m (gamma')_n / (zeta)_{m+n}
///      x^m/m! y^n/n!`
///
/// over `m + n < n_terms`. Geometric domination of the tail requires
/// `|x|, |y| < 1`, which is enforced.
pub fn appell_f1(
    beta: Complex64,
    gamma: Complex64,
    gamma_p: Complex64,
    zeta: Complex64,
    x: Complex64,
    y: Complex64,
    n_terms: usize,
) -> Result<Complex64> {
    reject_bad_zeta(zeta)?;
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "series evaluation requires |x| < 1 and |y| < 1, got |x| = {}, |y| = {}",
            x.norm(),
            y.norm()
        )));
    }
    let diag = appell_f1_shell_sums(beta, gamma, gamma_p, zeta, x, y, n_terms);
    Ok(diag.coeffs().iter().sum())
}

/// Coefficient series of `F1(beta; gamma, gamma'; zeta; z/c, c z)` in `z`:
/// the two arguments share the variable, so index `s = m + n` collects
///
/// `f_s = (beta)_s/(zeta)_s * sum_{m+n=s} (gamma)_m (gamma')_n
///        c^(n-m) / (m! n!)`.
///
/// For `|c| > 1` the coefficients grow like `|c|^s` and may overflow f64 at
/// large `s`; callers that walk the series stop at the first non-finite
/// entry.
pub fn appell_f1_diag_series(
    beta: Complex64,
    gamma: Complex64,
    gamma_p: Complex64,
    zeta: Complex64,
    c: Complex64,
    n_terms: usize,
) -> Result<CoeffSeq> {
    reject_bad_zeta(zeta)?;
    if c.norm() == 0.0 {
        return Err(Error::InvalidArgument("curve parameter c must be nonzero".into()));
    }
    Ok(appell_f1_shell_sums(beta, gamma, gamma_p, zeta, c.inv(), c, n_terms))
}

/// Shared kernel: entry `s` holds `(beta)_s/(zeta)_s sum_{m+n=s} A_m B_n`
/// with `A_m = (gamma)_m x^m/m!`, `B_n = (gamma')_n y^n/n!`.
fn appell_f1_shell_sums(
    beta: Complex64,
    gamma: Complex64,
    gamma_p: Complex64,
    zeta: Complex64,
    x: Complex64,
    y: Complex64,
    n_terms: usize,
) -> CoeffSeq {
    assert!(n_terms >= 1);
    let a = pochhammer_ladder(gamma, x, n_terms);
    let b = pochhammer_ladder(gamma_p, y, n_terms);
    let mut out = Vec::with_capacity(n_terms);
    let mut ratio = Complex64::ONE; // (beta)_s / (zeta)_s
    for s in 0..n_terms {
        let mut conv = Complex64::ZERO;
        for m in 0..=s {
            conv += a[m] * b[s - m];
        }
        out.push(ratio * conv);
        let sf = s as f64;
        ratio = ratio * (beta + sf) / (zeta + sf);
    }
    CoeffSeq::new(out)
}

/// Solves the pole polynomial and the exponent system for a given
/// `(alpha, a, lambda)`. Signals the double root `c = +/-1`
/// (`lambda = (a -/+ 1)^2`) as degenerate.
pub fn dirichlet_params(alpha: f64, a_mod: f64, lambda: f64) -> Result<OdeParams> {
    if !(alpha > 0.0) || !(a_mod > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ODE parameters require alpha > 0 and a > 0, got alpha = {alpha}, a = {a_mod}"
        )));
    }
    let b = (a_mod * a_mod + 1.0 - lambda) / a_mod;
    if (b - 2.0).abs() < DEGENERATE_TOL || (b + 2.0).abs() < DEGENERATE_TOL {
        return Err(Error::Degenerate(format!(
            "double pole root c = {} at lambda = {lambda} (b = {b})",
            if b > 0.0 { 1 } else { -1 }
        )));
    }
    let disc = b * b - 4.0;
    let c = if disc >= 0.0 {
        // Real roots; pick the one outside the unit circle.
        let root = (b.abs() + disc.sqrt()) / 2.0;
        Complex64::new(b.signum() * root, 0.0)
    } else {
        // Conjugate pair on the unit circle.
        Complex64::new(b / 2.0, (-disc).sqrt() / 2.0)
    };
    let shared = (alpha / a_mod) * (a_mod - c) / (b * c - 2.0);
    let mu = 1.0 + shared;
    let nu = 1.0 - alpha - shared;
    Ok(OdeParams { alpha, a_mod, lambda, b, c, mu, nu })
}

/// Candidate eigenfunction with `h(0) = 1`:
/// the hypergeometric factor times `(1 - z/c)^(-mu) (1 - c z)^(-nu)`,
/// assembled as series products. Degenerate `c` and the untreated `nu = 0`
/// configuration are signaled rather than computed.
pub fn dirichlet_candidate(
    alpha: f64,
    a_mod: f64,
    lambda: f64,
    n_terms: usize,
) -> Result<CoeffSeq> {
    let params = dirichlet_params(alpha, a_mod, lambda)?;
    dirichlet_candidate_from(&params, n_terms)
}

/// Same construction from precomputed parameters.
///
/// Real pole configurations (`lambda` outside the essential interval) run
/// the whole series pipeline in double-double arithmetic: the shell sums
/// alternate and plain f64 loses six-plus digits to cancellation near the
/// interval's edges. The circle case `|c| = 1` keeps complex f64, which is
/// fine at diagnostic accuracy.
pub fn dirichlet_candidate_from(params: &OdeParams, n_terms: usize) -> Result<CoeffSeq> {
    if params.nu.norm() < DEGENERATE_TOL {
        return Err(Error::Degenerate(
            "integrating exponent nu = 0: candidate construction not defined here".into(),
        ));
    }
    if params.c.im == 0.0 {
        let coeffs = candidate_real_dd(params.alpha, params.a_mod, params.lambda, n_terms);
        return Ok(CoeffSeq::new(
            coeffs.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        ));
    }
    let alpha_c = Complex64::new(params.alpha, 0.0);
    let f = appell_f1_diag_series(
        alpha_c,
        Complex64::ONE - params.mu,
        Complex64::ONE - params.nu,
        alpha_c + 1.0,
        params.c,
        n_terms,
    )?;
    let inv_front = binomial_series_cpx(params.c.inv(), -params.mu, n_terms);
    let inv_back = binomial_series_cpx(params.c, -params.nu, n_terms);
    let quotient = product(&inv_front, &inv_back, n_terms);
    Ok(product(&f, &quotient, n_terms))
}

/// Double-double pipeline for real `c`: shell sums of the two-variable
/// series restricted to `(z/c, cz)`, the two binomial quotient ladders, and
/// the final convolutions. Identical formulas to the complex route.
fn candidate_real_dd(alpha: f64, a_mod: f64, lambda: f64, n_terms: usize) -> Vec<f64> {
    let one = Dd::ONE;
    let af = Dd::from_f64(a_mod);
    let alpha_d = Dd::from_f64(alpha);
    let b = af.mul(af).add(one).sub(Dd::from_f64(lambda)).div(af);
    let disc = b.mul(b).sub(Dd::from_f64(4.0));
    let root = disc.sqrt();
    let c_abs = b.abs().add(root).div(Dd::from_f64(2.0));
    let c = if b.hi < 0.0 { c_abs.neg() } else { c_abs };
    let shared = alpha_d
        .div(af)
        .mul(af.sub(c))
        .div(b.mul(c).sub(Dd::from_f64(2.0)));
    let mu = one.add(shared);
    let nu = one.sub(alpha_d).sub(shared);

    // Pochhammer ladders A_m = (1-mu)_m c^{-m}/m!, B_n = (1-nu)_n c^n/n!.
    let gamma = one.sub(mu);
    let gamma_p = one.sub(nu);
    let inv_c = one.div(c);
    let mut ladder_a = Vec::with_capacity(n_terms);
    let mut ladder_b = Vec::with_capacity(n_terms);
    let (mut va, mut vb) = (one, one);
    for k in 0..n_terms {
        ladder_a.push(va);
        ladder_b.push(vb);
        let kf = Dd::from_f64(k as f64);
        let kp1 = Dd::from_f64(k as f64 + 1.0);
        va = va.mul(gamma.add(kf)).mul(inv_c).div(kp1);
        vb = vb.mul(gamma_p.add(kf)).mul(c).div(kp1);
    }

    // f_s = (alpha)_s/(alpha+1)_s * sum_{m+n=s} A_m B_n; the prefactor
    // telescopes to alpha/(alpha+s).
    let mut f = Vec::with_capacity(n_terms);
    for s in 0..n_terms {
        let mut conv = Dd::ZERO;
        for m in 0..=s {
            conv = conv.add(ladder_a[m].mul(ladder_b[s - m]));
        }
        let prefactor = alpha_d.div(alpha_d.add(Dd::from_f64(s as f64)));
        f.push(prefactor.mul(conv));
    }

    // Binomial ladders for (1 - z/c)^{-mu} and (1 - c z)^{-nu}.
    let mut u = Vec::with_capacity(n_terms);
    let mut v = Vec::with_capacity(n_terms);
    let (mut uu, mut vv) = (one, one);
    for n in 0..n_terms {
        u.push(uu);
        v.push(vv);
        let nf = Dd::from_f64(n as f64);
        let np1 = Dd::from_f64(n as f64 + 1.0);
        uu = uu.mul(inv_c.neg()).mul(mu.neg().sub(nf)).div(np1);
        vv = vv.mul(c.neg()).mul(nu.neg().sub(nf)).div(np1);
    }

    let mut quotient = vec![Dd::ZERO; n_terms];
    for i in 0..n_terms {
        for j in 0..n_terms - i {
            quotient[i + j] = quotient[i + j].add(u[i].mul(v[j]));
        }
    }
    let mut h = vec![Dd::ZERO; n_terms];
    for i in 0..n_terms {
        for j in 0..n_terms - i {
            h[i + j] = h[i + j].add(f[i].mul(quotient[j]));
        }
    }
    h.into_iter().map(Dd::to_f64).collect()
}

/// Worst coefficient of the cleared-denominator ODE residual
///
/// `z P(z) h'(z) + h(z) (alpha - (b + alpha/a) z + 2 z^2) - alpha h(0)`
///
/// over the exactly-known prefix, each normalized by the magnitude of the
/// terms combining into it (candidate coefficients grow like `|c|^n`, so an
/// unnormalized residual scales with the data instead of the defect). Zero
/// to roundoff certifies that `h` formally solves the eigenvalue ODE.
pub fn ode_residual(params: &OdeParams, h: &CoeffSeq) -> f64 {
    let len = h.len();
    // h' is known exactly up to index len - 2; every residual coefficient
    // below len only reads exact entries.
    let mut hp = vec![Complex64::ZERO; len];
    for m in 0..len - 1 {
        hp[m] = (m as f64 + 1.0) * h.coeff(m + 1);
    }
    let hp = CoeffSeq::new(hp);
    let zp = CoeffSeq::new(vec![
        Complex64::ZERO,
        Complex64::ONE,
        Complex64::new(-params.b, 0.0),
        Complex64::ONE,
    ]);
    let t1 = product(&zp, &hp, len);
    let q = CoeffSeq::new(vec![
        Complex64::new(params.alpha, 0.0),
        Complex64::new(-(params.b + params.alpha / params.a_mod), 0.0),
        Complex64::new(2.0, 0.0),
    ]);
    let t2 = product(h, &q, len);
    let mut worst: f64 = 0.0;
    for k in 0..len {
        let mut r = t1.coeff(k) + t2.coeff(k);
        let mut scale = t1.coeff(k).norm().max(t2.coeff(k).norm());
        if k == 0 {
            let inhom = params.alpha * h.coeff(0);
            r -= inhom;
            scale = scale.max(inhom.norm());
        }
        worst = worst.max(r.norm() / scale.max(1.0));
    }
    worst
}

/// Weighted partial norms of the candidate under `w_n = binom(n+alpha, n)`.
///
/// Reported, never asserted: divergence or boundedness here is diagnostic
/// input to an open question, not a theorem check. The sequence stops early
/// if a term overflows the guard (coefficients grow like `|c|^n` whenever
/// `lambda` puts `c` off the unit circle).
pub fn dirichlet_norm_diagnostic(
    alpha: f64,
    a_mod: f64,
    lambda: f64,
    n_terms: usize,
) -> Result<Vec<f64>> {
    let h = dirichlet_candidate(alpha, a_mod, lambda, n_terms)?;
    let w = dirichlet_weight(alpha)?;
    let mut out = Vec::with_capacity(n_terms);
    let mut acc = 0.0;
    let mut wn = 1.0;
    for n in 0..h.len() {
        let term = h.coeff(n).norm_sqr() * wn;
        if !term.is_finite() || term > NORM_TERM_GUARD {
            break;
        }
        acc += term;
        out.push(acc);
        wn *= w.ratio(n);
    }
    Ok(out)
}
