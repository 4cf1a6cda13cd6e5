//! Weight sequences for weighted Hardy spaces and certification of the
//! standing assumptions (monotonicity, square-summable ratio gaps, the
//! sup-ratio constants C0/C1).
//!
//! A weight is a positive sequence `w_0 = 1, w_1, w_2, ...`; the space norm
//! is `||f||^2 = sum |f_n|^2 w_n`. Everything downstream consumes weights
//! through the consecutive ratios `r_n = w_{n+1}/w_n`, which stay O(1) even
//! where the weights themselves would overflow.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ratio-product switches to compensated log-space accumulation past this.
const LOG_SPACE_THRESHOLD: usize = 100_000;

/// Families of weight sequences.
#[derive(Clone)]
pub enum WeightKind {
    /// `w_n = binom(n - alpha, n)^{-1}` for `alpha < 1`; ratio
    /// `r_n = (n+1)/(n+1-alpha)`. `alpha = -1` is the Bergman weight
    /// `1/(n+1)`, `alpha = 0` the Hardy weight `1`.
    BergmanType { alpha: f64 },
    /// `w_n = (n+1)^alpha`.
    DirichletPower { alpha: f64 },
    /// Arbitrary ratio generator `n -> r_n`; must be positive and monotone
    /// on the range it is queried over.
    Custom {
        ratio: Arc<dyn Fn(usize) -> f64 + Send + Sync>,
        label: String,
    },
}

impl fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightKind::BergmanType { alpha } => write!(f, "BergmanType {{ alpha: {alpha} }}"),
            WeightKind::DirichletPower { alpha } => {
                write!(f, "DirichletPower {{ alpha: {alpha} }}")
            }
            WeightKind::Custom { label, .. } => write!(f, "Custom {{ label: {label:?} }}"),
        }
    }
}

/// A weight sequence, queried through `weight(n)` and `ratio(n)`.
///
/// Immutable after construction; all methods take `&self`.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    kind: WeightKind,
}

/// Certification of the standing assumptions for a weight, over a checked
/// index range.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    /// Partial sum of `sum (1 - r_n)^2` over the checked range.
    pub partial_sum: f64,
    /// Upper bound for the tail of that sum. Exact integral-comparison bound
    /// for the closed-form families; zero with `certified_tail = false` for
    /// custom weights.
    pub tail_bound: f64,
    pub is_valid: bool,
    /// `sup_n r_n` (exact for the closed-form families, max over the checked
    /// range otherwise).
    pub c0: f64,
    /// `sup_n 1/r_n`.
    pub c1: f64,
    /// `|1 - r_N|` at the largest checked index.
    pub ratio_limit_gap: f64,
    /// Whether `tail_bound` is a proven bound (closed-form families) or the
    /// report only certifies the checked range.
    pub certified_tail: bool,
    /// Populated when validity fails on the checked range.
    pub failure: Option<String>,
}

/// Builds a weight sequence, rejecting parameters that break positivity.
pub fn make_weight(kind: WeightKind) -> Result<WeightSequence> {
    if let WeightKind::BergmanType { alpha } = kind {
        if alpha >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "BergmanType weight requires alpha < 1, got {alpha}"
            )));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidArgument("alpha must be finite".into()));
        }
    }
    if let WeightKind::DirichletPower { alpha } = kind {
        if !alpha.is_finite() {
            return Err(Error::InvalidArgument("alpha must be finite".into()));
        }
    }
    Ok(WeightSequence { kind })
}

impl WeightSequence {
    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// Consecutive ratio `r_n = w_{n+1}/w_n`.
    pub fn ratio(&self, n: usize) -> f64 {
        match &self.kind {
            WeightKind::BergmanType { alpha } => {
                let n = n as f64;
                (n + 1.0) / (n + 1.0 - alpha)
            }
            WeightKind::DirichletPower { alpha } => {
                let n = n as f64;
                ((n + 2.0) / (n + 1.0)).powf(*alpha)
            }
            WeightKind::Custom { ratio, .. } => ratio(n),
        }
    }

    /// `w_n`, computed as the running product of ratios (`w_0 = 1`).
    /// Falls back to a compensated log-space sum for very large `n`.
    pub fn weight(&self, n: usize) -> f64 {
        if n > LOG_SPACE_THRESHOLD {
            return self.log_weight(n).exp();
        }
        let mut w = 1.0;
        for k in 0..n {
            w *= self.ratio(k);
        }
        w
    }

    /// `ln w_n` via Kahan-compensated summation of `ln r_k`.
    pub fn log_weight(&self, n: usize) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for k in 0..n {
            let term = self.ratio(k).ln() - comp;
            let next = sum + term;
            comp = (next - sum) - term;
            sum = next;
        }
        sum
    }

    /// `[w_0, ..., w_{n-1}]` in one pass.
    pub fn weights_upto(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n);
        let mut w = 1.0;
        for k in 0..n {
            out.push(w);
            w *= self.ratio(k);
        }
        out
    }

    /// Exact supremum constants `(c0, c1) = (sup r_n, sup 1/r_n)` for the
    /// closed-form families; `None` for custom weights.
    fn sup_constants(&self) -> Option<(f64, f64)> {
        match &self.kind {
            WeightKind::BergmanType { alpha } => {
                // r_n = (n+1)/(n+1-alpha) is monotone in n with limit 1, so
                // the suprema sit at n = 0 or at the limit.
                if *alpha > 0.0 {
                    Some((self.ratio(0), 1.0))
                } else {
                    Some((1.0, 1.0 / self.ratio(0)))
                }
            }
            WeightKind::DirichletPower { alpha } => {
                if *alpha > 0.0 {
                    Some((self.ratio(0), 1.0))
                } else {
                    Some((1.0, 1.0 / self.ratio(0)))
                }
            }
            WeightKind::Custom { .. } => None,
        }
    }

    /// Integral-comparison bound for `sum_{n >= start} (1 - r_n)^2`, when a
    /// closed form is available.
    fn tail_bound_from(&self, start: usize) -> Option<f64> {
        let n = start as f64;
        match &self.kind {
            WeightKind::BergmanType { alpha } => {
                // 1 - r_n = -alpha/(n+1-alpha); summand decreasing, so the
                // tail is at most the integral from start-1.
                Some(alpha * alpha / (n - alpha))
            }
            WeightKind::DirichletPower { alpha } => {
                // |1 - r_n| <= |alpha| * max(2^(alpha-1), 1) / (n+1) by the
                // mean value theorem on x -> (1+x)^alpha over (0, 1/(n+1)].
                let m = (2.0f64).powf(alpha - 1.0).max(1.0);
                Some(alpha * alpha * m * m / n)
            }
            WeightKind::Custom { .. } => None,
        }
    }
}

/// Certifies validity of a weight over `n < n_terms`: monotonicity of the
/// ratios, the partial sum of `(1 - r_n)^2` with a tail bound where a closed
/// form exists, and the constants C0/C1.
pub fn validity_report(w: &WeightSequence, n_terms: usize) -> ValidityReport {
    assert!(n_terms >= 1, "n_terms must be at least 1");
    let mut partial_sum = 0.0;
    let mut comp = 0.0;
    let mut max_ratio = f64::MIN;
    let mut max_inv_ratio = f64::MIN;
    let mut sign_up = false; // saw r_n > 1
    let mut sign_down = false; // saw r_n < 1
    let mut failure = None;
    let mut last_ratio = 1.0;
    for n in 0..n_terms {
        let r = w.ratio(n);
        last_ratio = r;
        if !(r > 0.0) || !r.is_finite() {
            failure = Some(format!("ratio r_{n} = {r} is not a positive finite number"));
            break;
        }
        if r > 1.0 {
            sign_up = true;
        }
        if r < 1.0 {
            sign_down = true;
        }
        max_ratio = max_ratio.max(r);
        max_inv_ratio = max_inv_ratio.max(1.0 / r);
        let gap = 1.0 - r;
        let term = gap * gap - comp;
        let next = partial_sum + term;
        comp = (next - partial_sum) - term;
        partial_sum = next;
    }
    if failure.is_none() && sign_up && sign_down {
        failure = Some("ratio sequence is not monotone about 1 on the checked range".into());
    }

    let (c0, c1) = match w.sup_constants() {
        Some((c0, c1)) => (c0, c1),
        None => (max_ratio.max(1.0), max_inv_ratio.max(1.0)),
    };
    let (tail_bound, certified_tail) = match w.tail_bound_from(n_terms) {
        Some(t) => (t, true),
        None => (0.0, false),
    };

    ValidityReport {
        partial_sum,
        tail_bound,
        is_valid: failure.is_none() && tail_bound.is_finite(),
        c0,
        c1,
        ratio_limit_gap: (1.0 - last_ratio).abs(),
        certified_tail,
        failure,
    }
}

/// Truncated diagonal of the reproducing kernel,
/// `kappa_z(z) = sum_{j < n_terms} r^(2j) / w_j` at `|z| = r`.
///
/// Grows toward the boundary like `(1-r)^(alpha-1)` for the binomial
/// weights; used as a growth-bound diagnostic.
pub fn kernel_diag(w: &WeightSequence, r: f64, n_terms: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "kernel diagonal requires 0 <= r < 1, got {r}"
        )));
    }
    let r2 = r * r;
    let mut sum = 0.0;
    let mut pow = 1.0; // r^(2j)
    let mut wn = 1.0; // w_j
    for j in 0..n_terms {
        sum += pow / wn;
        pow *= r2;
        wn *= w.ratio(j);
    }
    Ok(sum)
}
