//! Spectral experiment reports: the spectrum pipeline (weight, gauge,
//! section, eigensolve, outliers, prediction matching), the verification
//! grid, parameter sweeps, and JSON/CSV emission with full-precision floats.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolve::{eigenvalues, outliers};
use crate::error::{Error, Result};
use crate::operator::{essential_interval, jacobi_truncation};
use crate::pointspec::{
    eigenfunction_closed, eigenfunction_recurrence, forward_stability_window, point_spectrum,
    recurrence_residual, section_residual, Branch, PointEigen,
};
use crate::weights::{make_weight, WeightKind, WeightSequence};

/// Section dimensions up to which full eigenvalue lists are embedded in
/// reports (larger sections report outliers only).
const FULL_EIGS_LIMIT: usize = 64;

/// Weight families addressable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceFamily {
    /// `w_n = binom(n - alpha, n)^{-1}`, `alpha < 1`.
    Bergman,
    /// `w_n = (n + 1)^alpha`.
    DirichletPow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub family: SpaceFamily,
    pub alpha: f64,
}

impl SpaceSpec {
    /// Parses `bergman:ALPHA` or `dirichlet-pow:ALPHA`.
    pub fn parse(s: &str) -> Result<SpaceSpec> {
        let (family, alpha) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("space must be FAMILY:ALPHA, got {s:?}")))?;
        let alpha: f64 = alpha
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad alpha in space spec {s:?}")))?;
        let family = match family {
            "bergman" => SpaceFamily::Bergman,
            "dirichlet-pow" => SpaceFamily::DirichletPow,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown space family {other:?} (expected bergman or dirichlet-pow)"
                )))
            }
        };
        Ok(SpaceSpec { family, alpha })
    }

    pub fn weight(&self) -> Result<WeightSequence> {
        match self.family {
            SpaceFamily::Bergman => make_weight(WeightKind::BergmanType { alpha: self.alpha }),
            SpaceFamily::DirichletPow => {
                make_weight(WeightKind::DirichletPower { alpha: self.alpha })
            }
        }
    }

    /// Closed-form point spectra exist for the binomial family only.
    pub fn has_closed_forms(&self) -> bool {
        matches!(self.family, SpaceFamily::Bergman) && self.alpha < 1.0
    }

    pub fn label(&self) -> String {
        match self.family {
            SpaceFamily::Bergman => format!("bergman:{}", self.alpha),
            SpaceFamily::DirichletPow => format!("dirichlet-pow:{}", self.alpha),
        }
    }
}

/// Gauge parameter as given on the command line: modulus and phase, kept
/// polar so that `MOD@PHASE` inputs stay bit-exact in the modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AValue {
    pub modulus: f64,
    pub phase: f64,
}

impl AValue {
    pub fn from_complex(a: Complex64) -> AValue {
        let g = crate::operator::gauge_reduce(a);
        AValue { modulus: g.modulus, phase: g.phase }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.modulus, self.phase)
    }
}

/// Everything a spectrum run needs; embedded verbatim in the report so a
/// run can be reproduced from its own output.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RunParams {
    pub space: SpaceSpec,
    pub a: AValue,
    pub n: usize,
    pub jmax: usize,
    pub tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SectionInfo {
    pub dimension: usize,
    pub outliers_below: Vec<f64>,
    pub outliers_above: Vec<f64>,
    /// Present only for small sections; large runs report outliers only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<f64>>,
}

/// One predicted entry matched (or not) against a section eigenvalue.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MatchRecord {
    pub j: usize,
    pub branch: Branch,
    pub predicted: f64,
    pub section: Option<f64>,
    pub abs_delta: Option<f64>,
}

/// Diagnostics block from the hypergeometric layer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirichletBlock {
    pub params: crate::dirichlet::OdeParams,
    pub terms: usize,
    pub max_deviation_vs_recurrence: f64,
    pub ode_residual: f64,
    pub norm_terms_emitted: usize,
    pub norm_partial_sums: Vec<f64>,
    pub norm_last_increment: Option<f64>,
}

/// Full record of one spectrum run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    pub run_id: String,
    pub params: RunParams,
    pub essential: [f64; 2],
    pub predicted: Vec<PointEigen>,
    pub section: SectionInfo,
    pub matches: Vec<MatchRecord>,
    /// Section residuals of the predicted eigenpairs, aligned with `matches`.
    pub residuals: Vec<f64>,
    pub notes: Vec<String>,
    pub success: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DirichletBlock>,
}

/// Greedy nearest matching between valid predictions and section outliers:
/// minus-branch entries draw from the below-interval list, plus-branch from
/// the above list; smallest gaps claim first, ties to smaller `j`, each
/// section eigenvalue used at most once.
pub fn match_predictions(
    predicted: &[PointEigen],
    below: &[f64],
    above: &[f64],
) -> Vec<MatchRecord> {
    let valid: Vec<&PointEigen> = predicted.iter().filter(|e| e.valid).collect();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new(); // (delta, pred idx, section idx)
    for (pi, e) in valid.iter().enumerate() {
        let pool: &[f64] = match e.branch {
            Branch::Minus => below,
            Branch::Plus => above,
        };
        for (si, &v) in pool.iter().enumerate() {
            // Section indices offset so the two pools stay distinct.
            let gsi = match e.branch {
                Branch::Minus => si,
                Branch::Plus => below.len() + si,
            };
            pairs.push(((v - e.lambda).abs(), pi, gsi));
        }
    }
    pairs.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .unwrap()
            .then(valid[x.1].j.cmp(&valid[y.1].j))
    });
    let mut pred_taken = vec![false; valid.len()];
    let mut sect_taken = vec![false; below.len() + above.len()];
    let mut assignment: Vec<Option<usize>> = vec![None; valid.len()];
    for (_, pi, gsi) in pairs {
        if pred_taken[pi] || sect_taken[gsi] {
            continue;
        }
        pred_taken[pi] = true;
        sect_taken[gsi] = true;
        assignment[pi] = Some(gsi);
    }
    valid
        .iter()
        .enumerate()
        .map(|(pi, e)| {
            let section = assignment[pi].map(|gsi| {
                if gsi < below.len() {
                    below[gsi]
                } else {
                    above[gsi - below.len()]
                }
            });
            MatchRecord {
                j: e.j,
                branch: e.branch,
                predicted: e.lambda,
                section,
                abs_delta: section.map(|s| (s - e.lambda).abs()),
            }
        })
        .collect()
}

/// The full spectrum pipeline for one parameter set.
pub fn run_spectrum(params: &RunParams) -> Result<SpectralReport> {
    let w = params.space.weight()?;
    let a_mod = params.a.modulus;
    if !(params.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let a = Complex64::from_polar(a_mod, params.a.phase);
    let essential = essential_interval(Complex64::new(a_mod, 0.0));
    let t = jacobi_truncation(&w, a_mod, params.n)?;
    let (below, above) = outliers(&t, essential, params.tol);
    let solved = if params.n <= FULL_EIGS_LIMIT {
        Some(eigenvalues(&t, params.tol.min(1e-10))?.values)
    } else {
        None
    };

    let mut notes = Vec::new();
    if a_mod == 0.0 {
        notes.push(
            "a = 0: the operator is diagonal; the spectrum is the closure of the ratio sequence"
                .into(),
        );
    }
    if (a_mod - 1.0).abs() < 1e-12 {
        notes.push("|a| = 1: the essential interval reaches 0, so 0 lies in the spectrum".into());
    }

    let predicted = if params.space.has_closed_forms() && a_mod > 0.0 {
        if params.space.alpha == 0.0 {
            notes.push(
                "alpha = 0: empty point spectrum (self-adjoint Toeplitz operator)".into(),
            );
        }
        point_spectrum(params.space.alpha, a, params.jmax)?
    } else {
        if !params.space.has_closed_forms() {
            notes.push("no closed-form point spectrum for this weight family".into());
        }
        Vec::new()
    };

    let matches = match_predictions(&predicted, &below, &above);
    let mut residuals = Vec::with_capacity(matches.len());
    for e in predicted.iter().filter(|e| e.valid) {
        let h = eigenfunction_closed(params.space.alpha, a, e, params.n)?;
        residuals.push(section_residual(&t, &w, &h, e.lambda));
    }

    let success = matches
        .iter()
        .all(|m| m.abs_delta.map(|d| d <= params.tol).unwrap_or(false))
        || matches.is_empty();

    Ok(SpectralReport {
        run_id: run_id(params),
        params: *params,
        essential,
        predicted,
        section: SectionInfo {
            dimension: params.n,
            outliers_below: below,
            outliers_above: above,
            eigenvalues: solved,
        },
        matches,
        residuals,
        notes,
        success,
    diagnostics: None,
    })
}

fn run_id(params: &RunParams) -> String {
    format!(
        "spectrum_{}_a{}p{}_n{}_j{}",
        params.space.label(),
        params.a.modulus,
        params.a.phase,
        params.n,
        params.jmax
    )
}

// ---------------------------------------------------------------------------
// Verification grid

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyFailure {
    pub alpha: f64,
    pub a_mod: f64,
    pub j: usize,
    pub branch: Branch,
    pub check: String,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<VerifyFailure>,
}

pub const VERIFY_ALPHAS: [f64; 6] = [-2.0, -1.0, -0.5, 0.25, 0.5, 0.75];
pub const VERIFY_A_MODS: [f64; 4] = [0.3, 0.9, 1.1, 2.0];

/// Runs the closed-form-vs-recurrence and residual suites over a grid.
///
/// `perturb` shifts every predicted eigenvalue before the residual checks;
/// any nonzero shift must make them fail, which is how the pipeline's
/// sensitivity is itself verified.
pub fn verify_grid(
    alphas: &[f64],
    a_mods: &[f64],
    jmax: usize,
    coeff_terms: usize,
    section_n: usize,
    perturb: f64,
) -> Result<VerifyOutcome> {
    let mut failures = Vec::new();
    let mut cases = 0usize;
    let mut checks = 0usize;
    for &alpha in alphas {
        if alpha >= 1.0 {
            return Err(Error::InvalidArgument(format!(
                "verification grid requires alpha < 1, got {alpha}"
            )));
        }
        let w = make_weight(WeightKind::BergmanType { alpha })?;
        for &a_mod in a_mods {
            let t = jacobi_truncation(&w, a_mod, section_n)?;
            let spec = point_spectrum(alpha, Complex64::new(a_mod, 0.0), jmax)?;
            for e in spec.iter().filter(|e| e.valid) {
                cases += 1;
                let lambda = e.lambda + perturb;
                let mut fail = |check: &str, value: f64, threshold: f64| {
                    failures.push(VerifyFailure {
                        alpha,
                        a_mod,
                        j: e.j,
                        branch: e.branch,
                        check: check.into(),
                        value,
                        threshold,
                    });
                };

                let h = eigenfunction_closed(alpha, Complex64::new(a_mod, 0.0), e, coeff_terms + 1)?;

                checks += 1;
                let h0_dev = (h.coeff(0) - Complex64::ONE).norm();
                if h0_dev > 1e-13 {
                    fail("normalization", h0_dev, 1e-13);
                }

                checks += 1;
                let rel_res = recurrence_residual(&w, a_mod, lambda, &h, coeff_terms);
                if rel_res > 1e-10 {
                    fail("relation_residual", rel_res, 1e-10);
                }

                checks += 1;
                let rec = eigenfunction_recurrence(&w, a_mod, lambda, coeff_terms + 1)?;
                let window = forward_stability_window(e.pole, 1e-10).min(coeff_terms);
                let mut sup: f64 = 0.0;
                let mut worst = 0.0f64;
                for n in 0..=window {
                    sup = sup.max(h.coeff(n).norm());
                    worst = worst.max((h.coeff(n) - rec.coeff(n)).norm() / sup);
                }
                if worst > 1e-10 {
                    fail("literal_window", worst, 1e-10);
                }

                checks += 1;
                let h_section = eigenfunction_closed(
                    alpha,
                    Complex64::new(a_mod, 0.0),
                    e,
                    section_n,
                )?;
                let res = section_residual(&t, &w, &h_section, lambda);
                if res > 1e-8 {
                    fail("section_residual", res, 1e-8);
                }

                checks += 1;
                let b = (a_mod * a_mod + 1.0 - e.lambda) / a_mod;
                let signed_pole = match e.branch {
                    Branch::Minus => e.pole,
                    Branch::Plus => -e.pole,
                };
                let c = 1.0 / signed_pole;
                let pole_dev = (c + 1.0 / c - b).abs();
                if pole_dev > 1e-12 * b.abs().max(1.0) {
                    fail("pole_identity", pole_dev, 1e-12 * b.abs().max(1.0));
                }
            }
        }
    }
    Ok(VerifyOutcome { cases, checks, failures })
}

// ---------------------------------------------------------------------------
// Sweeps

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SweepRow {
    pub a_mod: f64,
    pub minus_predicted: usize,
    pub plus_predicted: usize,
    pub outliers_below: usize,
    pub outliers_above: usize,
}

/// One row per `a` over an inclusive range: counts of valid predicted
/// branches (from the closed forms) against detected section outliers.
/// Rows are computed in parallel and returned in order.
pub fn sweep(
    space: SpaceSpec,
    a_min: f64,
    a_max: f64,
    steps: usize,
    n: usize,
    jmax: usize,
    margin: f64,
) -> Result<Vec<SweepRow>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("sweep needs at least one step".into()));
    }
    if !(a_min.is_finite() && a_max.is_finite()) || a_min < 0.0 || a_max < a_min {
        return Err(Error::InvalidArgument(format!(
            "bad sweep range [{a_min}, {a_max}]"
        )));
    }
    let points: Vec<f64> = (0..steps)
        .map(|i| {
            if steps == 1 {
                a_min
            } else {
                a_min + (a_max - a_min) * i as f64 / (steps - 1) as f64
            }
        })
        .collect();
    points
        .par_iter()
        .map(|&a_mod| {
            let w = space.weight()?;
            let t = jacobi_truncation(&w, a_mod, n)?;
            let essential = essential_interval(Complex64::new(a_mod, 0.0));
            let (below, above) = outliers(&t, essential, margin);
            let (mut minus, mut plus) = (0usize, 0usize);
            if space.has_closed_forms() && a_mod > 0.0 {
                for e in point_spectrum(space.alpha, Complex64::new(a_mod, 0.0), jmax)? {
                    if e.valid {
                        match e.branch {
                            Branch::Minus => minus += 1,
                            Branch::Plus => plus += 1,
                        }
                    }
                }
            }
            Ok(SweepRow {
                a_mod,
                minus_predicted: minus,
                plus_predicted: plus,
                outliers_below: below.len(),
                outliers_above: above.len(),
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Output formatting

/// JSON serializer printing every float with 17 significant digits, enough
/// to reparse bit-identically.
struct Sig17Formatter;

impl serde_json::ser::Formatter for Sig17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes any report value to JSON with 17-significant-digit floats.
pub fn to_json(value: &impl Serialize) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17Formatter);
    value
        .serialize(&mut ser)
        .expect("report serialization cannot fail");
    String::from_utf8(out).expect("serialized JSON is UTF-8")
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Flat CSV: one row per datum with columns
/// `run_id,alpha,a_mod,a_phase,kind,j,branch,value`.
pub fn report_to_csv(r: &SpectralReport) -> String {
    let mut out = String::from("run_id,alpha,a_mod,a_phase,kind,j,branch,value\n");
    let prefix = format!(
        "{},{},{},{}",
        r.run_id,
        fmt17(r.params.space.alpha),
        fmt17(r.params.a.modulus),
        fmt17(r.params.a.phase)
    );
    let mut push = |kind: &str, j: Option<usize>, branch: Option<Branch>, value: f64| {
        let j = j.map(|v| v.to_string()).unwrap_or_default();
        let b = branch.map(|b| b.to_string()).unwrap_or_default();
        out.push_str(&format!("{prefix},{kind},{j},{b},{}\n", fmt17(value)));
    };
    push("essential_lo", None, None, r.essential[0]);
    push("essential_hi", None, None, r.essential[1]);
    for e in r.predicted.iter().filter(|e| e.valid) {
        push("predicted", Some(e.j), Some(e.branch), e.lambda);
    }
    for &v in &r.section.outliers_below {
        push("section", None, Some(Branch::Minus), v);
    }
    for &v in &r.section.outliers_above {
        push("section", None, Some(Branch::Plus), v);
    }
    for (m, &res) in r.matches.iter().zip(r.residuals.iter()) {
        push("residual", Some(m.j), Some(m.branch), res);
    }
    out
}

/// CSV for sweeps: `a_mod,minus_predicted,plus_predicted,outliers_below,outliers_above`.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out =
        String::from("a_mod,minus_predicted,plus_predicted,outliers_below,outliers_above\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt17(r.a_mod),
            r.minus_predicted,
            r.plus_predicted,
            r.outliers_below,
            r.outliers_above
        ));
    }
    out
}
