//! Eigenvalues of real symmetric tridiagonal matrices.
//!
//! The workhorse is an implicit-shift QL iteration (Wilkinson shift, no
//! eigenvector accumulation). Sturm counts from the shifted LDL^T recurrence
//! locate eigenvalues relative to thresholds, and a characteristic-polynomial
//! bisection oracle covers dimensions up to 5 for cross-checks.

use crate::error::{Error, Result};
use crate::operator::SymTridiag;

/// Sweep cap per eigenvalue for the QL iteration.
const MAX_SWEEPS: usize = 50;

/// Relative interval width at which outlier bisection stops.
const OUTLIER_REFINE_REL: f64 = 1e-12;

/// Sorted eigenvalues of one section.
#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Ascending; length equals the matrix dimension.
    pub values: Vec<f64>,
    /// Absolute accuracy achieved, relative to the matrix inf-norm.
    pub achieved_tol: f64,
    /// Total QL sweeps taken.
    pub iterations: usize,
}

/// All eigenvalues of `t`, deterministic, to absolute accuracy
/// `tol * ||t||_inf` or better. The iteration itself converges to machine
/// precision; `tol` below machine epsilon is rejected.
pub fn eigenvalues(t: &SymTridiag, tol: f64) -> Result<EigenResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if tol < f64::EPSILON {
        return Err(Error::InvalidArgument(format!(
            "tolerance {tol} below achievable machine precision"
        )));
    }
    let n = t.dim();
    let mut d = t.diag.clone();
    // e[k] couples rows k and k+1; index n-1 is a zero sentinel.
    let mut e = t.offdiag.clone();
    e.push(0.0);

    let eps = f64::EPSILON;
    let mut total_sweeps = 0usize;

    for l in 0..n {
        let mut sweeps = 0usize;
        loop {
            // Find the first negligible coupling at or after l.
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            total_sweeps += 1;
            if sweeps > MAX_SWEEPS {
                let mut partial = d;
                partial.sort_by(|a, b| a.partial_cmp(b).unwrap());
                return Err(Error::NoConvergence { partial, iterations: total_sweeps });
            }

            // Wilkinson shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            if g < 0.0 {
                r = -r;
            }
            g = d[m] - d[l] + e[l] / (g + r);

            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            // Rotate back from row m-1 to row l.
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate: a zero rotation splits the problem here.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if i == l {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        }
    }

    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(EigenResult { values: d, achieved_tol: eps, iterations: total_sweeps })
}

/// Number of eigenvalues of `t` strictly below `x`, from the sign count of
/// the shifted LDL^T pivots. A zero pivot perturbs the threshold downward by
/// `1e-14 * ||t||_inf` and restarts.
pub fn sturm_count(t: &SymTridiag, x: f64) -> usize {
    let scale = t.inf_norm().max(f64::MIN_POSITIVE);
    let mut shift = x;
    'retry: for _ in 0..64 {
        let mut count = 0usize;
        let mut q = 1.0f64;
        for k in 0..t.dim() {
            let coupling = if k == 0 { 0.0 } else { t.offdiag[k - 1] };
            q = (t.diag[k] - shift) - coupling * coupling / q;
            if q == 0.0 {
                shift -= 1e-14 * scale;
                continue 'retry;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        return count;
    }
    unreachable!("pivot perturbation failed to separate the threshold from the spectrum")
}

/// Eigenvalues outside `[interval.0 - margin, interval.1 + margin]`,
/// located by Sturm-count bisection and returned as
/// `(below ascending, above ascending)`.
pub fn outliers(t: &SymTridiag, interval: [f64; 2], margin: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(margin > 0.0, "margin must be positive");
    let n = t.dim();
    let scale = t.inf_norm().max(f64::MIN_POSITIVE);
    let width_floor = OUTLIER_REFINE_REL * scale;
    let (glo, ghi) = t.gershgorin_bounds();
    let glo = glo - width_floor;
    let ghi = ghi + width_floor;

    let lo_thr = interval[0] - margin;
    let hi_thr = interval[1] + margin;

    // k-th smallest eigenvalue by bisection on the counting function within
    // a bracket known to contain it.
    let kth = |k: usize, mut left: f64, mut right: f64| -> f64 {
        while right - left > width_floor {
            let mid = 0.5 * (left + right);
            if sturm_count(t, mid) > k {
                right = mid;
            } else {
                left = mid;
            }
        }
        0.5 * (left + right)
    };

    let below_count = if lo_thr > glo { sturm_count(t, lo_thr) } else { 0 };
    let mut below = Vec::with_capacity(below_count);
    for k in 0..below_count {
        below.push(kth(k, glo, lo_thr));
    }

    let above_count = if hi_thr < ghi { n - sturm_count(t, hi_thr) } else { 0 };
    let mut above = Vec::with_capacity(above_count);
    for idx in 0..above_count {
        let k = n - above_count + idx;
        above.push(kth(k, hi_thr, ghi));
    }

    (below, above)
}

// ---------------------------------------------------------------------------
// Characteristic-polynomial oracle (dimension <= 5)

/// Eigenvalues via explicit characteristic-polynomial expansion and
/// Sturm-chain root isolation. Independent of the QL path; test oracle only.
pub fn charpoly_eigs_bruteforce(t: &SymTridiag) -> Result<Vec<f64>> {
    let n = t.dim();
    if n > 5 {
        return Err(Error::InvalidArgument(format!(
            "brute-force characteristic polynomial limited to dimension <= 5, got {n}"
        )));
    }
    let mut roots = Vec::with_capacity(n);
    // Zero couplings split the matrix into independent blocks.
    let mut start = 0usize;
    for k in 0..n {
        let boundary = k + 1 == n || t.offdiag[k] == 0.0;
        if boundary {
            let block = SymTridiag::new(
                t.diag[start..=k].to_vec(),
                if k > start { t.offdiag[start..k].to_vec() } else { vec![] },
            );
            roots.extend(block_charpoly_roots(&block));
            start = k + 1;
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(roots)
}

/// det(x I - T) coefficients (ascending powers) via the three-term
/// recurrence p_k = (x - d_{k-1}) p_{k-1} - e_{k-2}^2 p_{k-2}.
fn charpoly(t: &SymTridiag) -> Vec<f64> {
    let mut prev: Vec<f64> = vec![1.0]; // p_0
    let mut cur = vec![-t.diag[0], 1.0]; // p_1
    for k in 1..t.dim() {
        let d = t.diag[k];
        let e2 = t.offdiag[k - 1] * t.offdiag[k - 1];
        // p_{k+1} = (x - d) p_k - e^2 p_{k-1}
        let mut next = vec![0.0; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= d * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= e2 * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_deriv(p: &[f64]) -> Vec<f64> {
    p.iter().enumerate().skip(1).map(|(i, &c)| i as f64 * c).collect()
}

fn poly_trim(mut p: Vec<f64>, floor: f64) -> Vec<f64> {
    while p.len() > 1 && p.last().unwrap().abs() <= floor {
        p.pop();
    }
    p
}

/// Remainder of p divided by q (deg q >= 1).
fn poly_rem(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut r = p.to_vec();
    let dq = q.len() - 1;
    let lead = q[dq];
    while r.len() > dq {
        let dr = r.len() - 1;
        let factor = r[dr] / lead;
        for i in 0..=dq {
            r[dr - dq + i] -= factor * q[i];
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0.0);
    }
    r
}

/// Sturm chain of the polynomial, with each member rescaled to unit max
/// coefficient (positive scaling preserves the sign structure).
fn sturm_chain(p: &[f64]) -> Vec<Vec<f64>> {
    let scale_of = |p: &[f64]| p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let normalize = |mut p: Vec<f64>| {
        let s = scale_of(&p);
        if s > 0.0 {
            for c in &mut p {
                *c /= s;
            }
        }
        p
    };
    let floor = 1e-12;
    let mut chain = vec![normalize(poly_trim(p.to_vec(), 0.0))];
    if chain[0].len() > 1 {
        chain.push(normalize(poly_deriv(&chain[0])));
    }
    while chain.last().unwrap().len() > 1 {
        let k = chain.len();
        let rem = poly_rem(&chain[k - 2], &chain[k - 1]);
        let rem = poly_trim(rem, floor);
        if rem.len() == 1 && rem[0].abs() <= floor {
            break;
        }
        chain.push(normalize(rem.into_iter().map(|c| -c).collect()));
    }
    chain
}

fn sign_changes(chain: &[Vec<f64>], x: f64) -> usize {
    let mut changes = 0;
    let mut last = 0.0f64;
    for p in chain {
        let v = poly_eval(p, x);
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// All real roots of the block's characteristic polynomial with multiplicity
/// (an interval that refuses to split but still counts several roots is
/// reported as a numerically coincident cluster at its midpoint).
fn block_charpoly_roots(t: &SymTridiag) -> Vec<f64> {
    let n = t.dim();
    if n == 1 {
        return vec![t.diag[0]];
    }
    let p = charpoly(t);
    let chain = sturm_chain(&p);
    let scale = t.inf_norm().max(1.0);
    let (glo, ghi) = t.gershgorin_bounds();
    let lo = glo - 1e-8 * scale - 1e-12;
    let hi = ghi + 1e-8 * scale + 1e-12;
    let resolution = 1e-13 * scale;

    let mut roots = Vec::with_capacity(n);
    let mut stack = vec![(lo, hi)];
    while let Some((a, b)) = stack.pop() {
        let count = sign_changes(&chain, a).saturating_sub(sign_changes(&chain, b));
        if count == 0 {
            continue;
        }
        if b - a <= resolution {
            for _ in 0..count {
                roots.push(0.5 * (a + b));
            }
            continue;
        }
        if count == 1 {
            // Isolated: bisect on the chain count down to the width floor.
            let (mut left, mut right) = (a, b);
            let base = sign_changes(&chain, left);
            while right - left > resolution {
                let mid = 0.5 * (left + right);
                if sign_changes(&chain, mid) < base {
                    right = mid;
                } else {
                    left = mid;
                }
            }
            roots.push(0.5 * (left + right));
            continue;
        }
        let mid = 0.5 * (a + b);
        stack.push((a, mid));
        stack.push((mid, b));
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}
