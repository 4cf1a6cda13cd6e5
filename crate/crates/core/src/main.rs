//! Command-line surface for spectral experiments.
//!
//! Subcommands: `spectrum` (section vs closed-form point spectrum),
//! `verify` (closed-form/recurrence/residual grid), `sweep` (branch and
//! outlier counts across a range of `a`), `inner` (multiplier inner test),
//! `dirichlet` (hypergeometric candidate diagnostics).
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 degenerate-parameter signal.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use specop::dirichlet::{
    dirichlet_candidate_from, dirichlet_norm_diagnostic, dirichlet_params, dirichlet_weight,
    ode_residual,
};
use specop::error::Error;
use specop::operator::{apply_poly_v, inner_check, INNER_CHECK_DEFAULT_TOL};
use specop::pointspec::eigenfunction_recurrence;
use specop::report::{
    report_to_csv, run_spectrum, sweep, sweep_to_csv, to_json, verify_grid, AValue, RunParams,
    SpaceSpec, SweepRow, VerifyOutcome, VERIFY_ALPHAS, VERIFY_A_MODS,
};
use specop::series::CoeffSeq;

#[derive(Parser)]
#[command(
    name = "specop",
    about = "Finite-section spectra of M*_(a-z) M_(a-z) on weighted Hardy spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one finite section and match it against predicted eigenvalues.
    Spectrum {
        /// Weight family, e.g. bergman:-1 or dirichlet-pow:0.5.
        #[arg(long)]
        space: String,
        /// Gauge parameter: RE[+IMi] or MOD@PHASE.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Section dimension.
        #[arg(long, default_value_t = 500)]
        n: usize,
        /// Largest predicted index per branch.
        #[arg(long, default_value_t = 5)]
        jmax: usize,
        /// Match tolerance and outlier margin.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the closed-form vs recurrence verification grid.
    Verify {
        /// Comma-separated alpha grid (default the built-in grid).
        #[arg(long, allow_hyphen_values = true)]
        alphas: Option<String>,
        /// Comma-separated |a| grid (default the built-in grid).
        #[arg(long, allow_hyphen_values = true)]
        a_mods: Option<String>,
        /// Largest eigenvalue index per branch.
        #[arg(long, default_value_t = 3)]
        jmax: usize,
        /// Coefficients compared per eigenfunction.
        #[arg(long, default_value_t = 50)]
        terms: usize,
        /// Section dimension for residual checks.
        #[arg(long, default_value_t = 500)]
        n: usize,
        /// Shift added to each predicted eigenvalue; any nonzero value must
        /// make the residual checks fail.
        #[arg(long, default_value_t = 0.0)]
        perturb: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Branch and outlier counts across a range of |a|.
    Sweep {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 0.5)]
        a_min: f64,
        #[arg(long, default_value_t = 1.5)]
        a_max: f64,
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[arg(long, default_value_t = 400)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        jmax: usize,
        /// Outlier margin.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Test whether a polynomial is inner for a space.
    Inner {
        #[arg(long)]
        space: String,
        /// Comma-separated complex coefficients, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = INNER_CHECK_DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Hypergeometric candidate diagnostics for the increasing binomial
    /// weights (alpha > 0).
    Dirichlet {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Gauge parameter: RE[+IMi] or MOD@PHASE (only |a| enters).
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        /// Series length for the candidate/recurrence comparison.
        #[arg(long, default_value_t = 30)]
        terms: usize,
        /// Length of the weighted-norm diagnostic series.
        #[arg(long, default_value_t = 500)]
        norm_terms: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{e}");
                    ExitCode::from(1)
                }
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("specop: {e}");
            let code = match e {
                Error::InvalidArgument(_) => 1,
                Error::NoConvergence { .. } => 2,
                Error::Degenerate(_) => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Spectrum { space, a, n, jmax, tol, output } => {
            let params = RunParams {
                space: SpaceSpec::parse(&space)?,
                a: parse_a(&a)?,
                n,
                jmax,
                tol,
            };
            let report = run_spectrum(&params)?;
            let text = match output.format {
                Format::Json => to_json(&report),
                Format::Csv => report_to_csv(&report),
            };
            emit(&output, &text)?;
            Ok(if report.success { 0 } else { 2 })
        }
        Cmd::Verify { alphas, a_mods, jmax, terms, n, perturb, output } => {
            let alphas = match alphas {
                Some(s) => parse_f64_list(&s)?,
                None => VERIFY_ALPHAS.to_vec(),
            };
            let a_mods = match a_mods {
                Some(s) => parse_f64_list(&s)?,
                None => VERIFY_A_MODS.to_vec(),
            };
            let outcome = verify_grid(&alphas, &a_mods, jmax, terms, n, perturb)?;
            let listed = VerifyOutcome {
                cases: outcome.cases,
                checks: outcome.checks,
                failures: outcome.failures.iter().take(10).cloned().collect(),
            };
            let text = match output.format {
                Format::Json => to_json(&serde_json::json!({
                    "cases": listed.cases,
                    "checks": listed.checks,
                    "failure_count": outcome.failures.len(),
                    "failures": listed.failures,
                })),
                Format::Csv => {
                    let mut s = String::from("check,alpha,a_mod,j,branch,value,threshold\n");
                    for f in &listed.failures {
                        s.push_str(&format!(
                            "{},{:.16e},{:.16e},{},{},{:.16e},{:.16e}\n",
                            f.check, f.alpha, f.a_mod, f.j, f.branch, f.value, f.threshold
                        ));
                    }
                    s
                }
            };
            emit(&output, &text)?;
            Ok(if outcome.failures.is_empty() { 0 } else { 2 })
        }
        Cmd::Sweep { space, a_min, a_max, steps, n, jmax, tol, output } => {
            let space = SpaceSpec::parse(&space)?;
            let rows = run_sweep_with_thread_cap(space, a_min, a_max, steps, n, jmax, tol)?;
            let text = match output.format {
                Format::Json => to_json(&rows),
                Format::Csv => sweep_to_csv(&rows),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Cmd::Inner { space, poly, tol, output } => {
            let space = SpaceSpec::parse(&space)?;
            let w = space.weight()?;
            let f = parse_poly(&poly)?;
            let image = apply_poly_v(&w, &f, &CoeffSeq::one(1));
            let is_inner = inner_check(&w, &f, tol);
            let mut deviation: f64 = (image.coeff(0) - Complex64::ONE).norm();
            for n in 1..image.len() {
                deviation = deviation.max(image.coeff(n).norm());
            }
            let text = match output.format {
                Format::Json => to_json(&serde_json::json!({
                    "space": space,
                    "poly": f.coeffs(),
                    "image_of_one": image.coeffs(),
                    "max_deviation": deviation,
                    "tol": tol,
                    "inner": is_inner,
                })),
                Format::Csv => {
                    let mut s = String::from("kind,index,re,im\n");
                    for (i, c) in f.coeffs().iter().enumerate() {
                        s.push_str(&format!("poly,{i},{:.16e},{:.16e}\n", c.re, c.im));
                    }
                    for (i, c) in image.coeffs().iter().enumerate() {
                        s.push_str(&format!("image,{i},{:.16e},{:.16e}\n", c.re, c.im));
                    }
                    s.push_str(&format!("verdict,,{},\n", if is_inner { 1 } else { 0 }));
                    s
                }
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Cmd::Dirichlet { alpha, a, lambda, terms, norm_terms, output } => {
            let a_mod = parse_a(&a)?.modulus;
            let params = dirichlet_params(alpha, a_mod, lambda)?;
            let candidate = dirichlet_candidate_from(&params, terms)?;
            let w = dirichlet_weight(alpha)?;
            let rec = eigenfunction_recurrence(&w, a_mod, lambda, terms)?;
            let mut deviation: f64 = 0.0;
            for n in 0..terms {
                let scale = rec.coeff(n).norm().max(1.0);
                deviation = deviation.max((candidate.coeff(n) - rec.coeff(n)).norm() / scale);
            }
            let residual = ode_residual(&params, &candidate);
            let norms = dirichlet_norm_diagnostic(alpha, a_mod, lambda, norm_terms)?;
            let last_increment = if norms.len() >= 2 {
                Some(norms[norms.len() - 1] - norms[norms.len() - 2])
            } else {
                None
            };
            let block = specop::report::DirichletBlock {
                params,
                terms,
                max_deviation_vs_recurrence: deviation,
                ode_residual: residual,
                norm_terms_emitted: norms.len(),
                norm_partial_sums: norms,
                norm_last_increment: last_increment,
            };
            let text = match output.format {
                Format::Json => to_json(&block),
                Format::Csv => {
                    let mut s = String::from("kind,index,value\n");
                    s.push_str(&format!("max_deviation,,{deviation:.16e}\n"));
                    s.push_str(&format!("ode_residual,,{residual:.16e}\n"));
                    for (i, v) in block.norm_partial_sums.iter().enumerate() {
                        s.push_str(&format!("norm_partial_sum,{i},{v:.16e}\n"));
                    }
                    s
                }
            };
            emit(&output, &text)?;
            Ok(0)
        }
    }
}

/// SPECOP_THREADS caps the sweep's worker pool; unset or unparsable values
/// fall back to the default pool.
fn run_sweep_with_thread_cap(
    space: SpaceSpec,
    a_min: f64,
    a_max: f64,
    steps: usize,
    n: usize,
    jmax: usize,
    margin: f64,
) -> Result<Vec<SweepRow>, Error> {
    let cap = std::env::var("SPECOP_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&k| k >= 1);
    match cap {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            pool.install(|| sweep(space, a_min, a_max, steps, n, jmax, margin))
        }
        None => sweep(space, a_min, a_max, steps, n, jmax, margin),
    }
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Error> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(format!("stdout: {e}"))),
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number {p:?} in list")))
        })
        .collect()
}

/// `RE[+IMi]` or `MOD@PHASE`. Polar inputs keep the modulus bit-exact.
fn parse_a(s: &str) -> Result<AValue, Error> {
    let s = s.trim();
    if let Some((m, p)) = s.split_once('@') {
        let modulus: f64 = m
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad modulus in {s:?}")))?;
        let phase: f64 = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad phase in {s:?}")))?;
        if modulus < 0.0 || !modulus.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "modulus must be finite and nonnegative, got {modulus}"
            )));
        }
        let tau = 2.0 * std::f64::consts::PI;
        return Ok(AValue { modulus, phase: phase.rem_euclid(tau) });
    }
    Ok(AValue::from_complex(parse_complex(s)?))
}

/// Complex literal: `1.5`, `-2`, `3i`, `-i`, `1+2i`, `0.5-0.25i`,
/// `1e-3+2.5e2i`.
fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::InvalidArgument("empty complex literal".into()));
    }
    let bad = |s: &str| Error::InvalidArgument(format!("bad complex literal {s:?}"));
    if !s.ends_with('i') && !s.ends_with('I') {
        return s.parse::<f64>().map(|x| Complex64::new(x, 0.0)).map_err(|_| bad(s));
    }
    let body = &s[..s.len() - 1];
    // Split at the last +/- that is not an exponent sign and not leading.
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
            break;
        }
    }
    let parse_imag = |t: &str| -> Result<f64, Error> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad(s)),
        }
    };
    match split {
        Some(i) => {
            let re: f64 = body[..i].parse().map_err(|_| bad(s))?;
            let im = parse_imag(&body[i..])?;
            Ok(Complex64::new(re, im))
        }
        None => Ok(Complex64::new(0.0, parse_imag(body)?)),
    }
}

/// Comma-separated complex coefficients, constant term first.
fn parse_poly(s: &str) -> Result<CoeffSeq, Error> {
    let coeffs: Result<Vec<Complex64>, Error> = s.split(',').map(parse_complex).collect();
    let coeffs = coeffs?;
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument("polynomial needs at least one coefficient".into()));
    }
    Ok(CoeffSeq::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let cases = [
            ("1.5", (1.5, 0.0)),
            ("-2", (-2.0, 0.0)),
            ("3i", (0.0, 3.0)),
            ("-i", (0.0, -1.0)),
            ("i", (0.0, 1.0)),
            ("1+2i", (1.0, 2.0)),
            ("0.5-0.25i", (0.5, -0.25)),
            ("1e-3+2.5e2i", (1e-3, 2.5e2)),
            ("-1.5e-2-2E-1i", (-1.5e-2, -0.2)),
        ];
        for (text, (re, im)) in cases {
            let z = parse_complex(text).unwrap();
            assert_eq!(z.re, re, "{text}");
            assert_eq!(z.im, im, "{text}");
        }
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("1 + 2i").is_err());
    }

    #[test]
    fn polar_inputs_keep_bitexact_modulus() {
        let a = parse_a("0.7@1.0471975511965976").unwrap();
        assert_eq!(a.modulus.to_bits(), 0.7f64.to_bits());
        let b = parse_a("0.7").unwrap();
        assert_eq!(b.modulus.to_bits(), 0.7f64.to_bits());
        assert_eq!(b.phase, 0.0);
        assert!(parse_a("-1@0").is_err());
        // Negative phases are normalized into [0, 2pi).
        let c = parse_a("1@-1.5707963267948966").unwrap();
        assert!((c.phase - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn poly_parsing() {
        let p = parse_poly("0,2.5").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff(1).re, 2.5);
        assert!(parse_poly("1,,2").is_err());
    }
}
