//! The `symcone` command line: `classify`, `gamma`, `det`, `sample`, `verify`.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or config error,
//! 3 unsupported capability (octonionic sampling).

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use crate::cone::classify_point;
use crate::error::{Error, Result};
use crate::jordan::{determinant, eigenvalues, AlgebraDescriptor, Element, FamilyKind};
use crate::riesz::{classify_measure, gamma_omega, riesz_density, MeasureVerdict};
use crate::sampling::{laplace_functional_mc, sample_tilted, sample_tilted_discrete, SampleBatch};
use crate::verify::config::{run_all, VerifyConfig, DEFAULT_SEED};
use crate::verify::report::{AggregateReport, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "symcone",
    version,
    about = "Symmetric cones, Riesz measures and identity checks"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    /// One JSON object per record.
    Machine,
}

#[derive(Debug, Clone, Args)]
pub struct AlgebraArgs {
    /// sym-real, herm-complex, herm-quaternion, herm-octonion or lorentz.
    #[arg(long)]
    pub algebra: FamilyKind,
    /// Matrix size m, or the dimension n for lorentz. Ignored for herm-octonion.
    #[arg(long, default_value_t = 3)]
    pub size: usize,
}

impl AlgebraArgs {
    pub fn descriptor(&self) -> Result<AlgebraDescriptor> {
        match self.algebra {
            FamilyKind::HermOctonion => Ok(AlgebraDescriptor::herm_octonion()),
            family => AlgebraDescriptor::new(family, self.size),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify R_α: positive measure, complex measure, or neither.
    Classify {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Real or complex, e.g. `1.5`, `0.9+0.1i`, `2-3i`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex64,
    },
    /// Evaluate Γ_Ω(α).
    Gamma {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Complex64,
    },
    /// Determinant, spectrum and cone membership of an element; with
    /// `--alpha`, also the Riesz density there.
    Det {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Orthonormal coordinates, comma separated.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            conflicts_with = "diag"
        )]
        coords: Option<Vec<f64>>,
        /// Diagonal entries (matrix families) or `x0,x1,…` (lorentz).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        diag: Option<Vec<f64>>,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        alpha: Option<Complex64>,
    },
    /// Draw from the tilted Riesz measure and write the samples.
    Sample {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(
            long,
            conflicts_with = "k",
            required_unless_present = "k",
            allow_hyphen_values = true
        )]
        alpha: Option<f64>,
        /// Rank of the discrete point `α = kd/2`.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        count: usize,
        #[arg(long, env = "SYMCONE_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Sample file; stdout gets only the self-check when given.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite (the built-in default matrix without `--config`).
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long, env = "SYMCONE_SEED")]
        seed: Option<u64>,
        /// Overrides the config-wide sample budget.
        #[arg(long)]
        samples: Option<usize>,
        /// Record runtimes in the reports.
        #[arg(long)]
        timings: bool,
        /// Directory receiving `report.txt` and `report.jsonl`.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

/// Parses `a`, `a+bi`, `a-bi`, `bi`, `i`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse {s:?} as a number of the form a+bi");
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(Complex64::from).map_err(|_| bad());
    };
    let split = body
        .char_indices()
        .rev()
        .find(|&(i, c)| {
            (c == '+' || c == '-') && i > 0 && !matches!(body.as_bytes()[i - 1], b'e' | b'E')
        })
        .map(|(i, _)| i);
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnsupportedSampler(_) => EXIT_UNSUPPORTED,
        Error::Numerical(_) | Error::StepTooLarge { .. } | Error::DegenerateSpectrum { .. } => {
            EXIT_CHECK_FAILED
        }
        _ => EXIT_USAGE,
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn describe(a: AlgebraDescriptor) -> String {
    format!("{a} (r={}, n={}, d={})", a.rank(), a.dim(), a.peirce_d())
}

fn reason(verdict: MeasureVerdict, alpha: Complex64, threshold: f64) -> String {
    match verdict {
        MeasureVerdict::NotAMeasure if alpha.im != 0.0 && alpha.re <= threshold => {
            format!("Re α = {} ≤ {threshold} and α is not real", alpha.re)
        }
        MeasureVerdict::NotAMeasure => {
            format!("α ≤ {threshold} and α is not a discrete point kd/2")
        }
        MeasureVerdict::DiracDelta => "α = 0".into(),
        MeasureVerdict::DiscreteWallach(k) => {
            format!("α = {k}·d/2, supported on rank-{k} elements")
        }
        MeasureVerdict::PositiveAbsolutelyContinuous => format!("real α > {threshold}"),
        MeasureVerdict::ComplexMeasureAC => format!("Re α > {threshold}, α not real"),
    }
}

fn cmd_classify(algebra: AlgebraDescriptor, alpha: Complex64, format: Format) -> String {
    let c = classify_measure(algebra, alpha);
    let why = reason(c.verdict, alpha, c.threshold);
    match format {
        Format::Human => format!(
            "algebra: {}\nalpha: {}\nthreshold: {}\nverdict: {}\nreason: {why}\n",
            describe(algebra),
            fmt_complex(alpha),
            c.threshold,
            c.verdict
        ),
        Format::Machine => {
            json!({
                "algebra": algebra,
                "alpha": fmt_complex(alpha),
                "threshold": c.threshold,
                "verdict": c.verdict.to_string(),
                "positive": c.verdict.is_positive(),
                "reason": why,
            })
            .to_string()
                + "\n"
        }
    }
}

fn cmd_gamma(algebra: AlgebraDescriptor, alpha: Complex64, format: Format) -> String {
    let value = gamma_omega(algebra, alpha);
    match format {
        Format::Human => format!(
            "algebra: {}\nalpha: {}\ngamma_omega: {value}\n",
            describe(algebra),
            fmt_complex(alpha)
        ),
        Format::Machine => {
            json!({
                "algebra": algebra,
                "alpha": fmt_complex(alpha),
                "re": value.re,
                "im": value.im,
                "is_pole": value.is_pole,
            })
            .to_string()
                + "\n"
        }
    }
}

fn element_from(
    algebra: AlgebraDescriptor,
    coords: Option<Vec<f64>>,
    diag: Option<Vec<f64>>,
) -> Result<Element> {
    match (coords, diag) {
        (Some(c), _) => Element::new(algebra, c),
        (None, Some(d)) if algebra.family() == FamilyKind::Lorentz => match d.split_first() {
            Some((x0, xbar)) => Element::lorentz(algebra, *x0, xbar),
            None => Err(Error::Usage("--diag needs at least one value".into())),
        },
        (None, Some(d)) => Element::from_diagonal(algebra, &d),
        (None, None) => Ok(Element::identity(algebra)),
    }
}

fn cmd_det(x: &Element, alpha: Option<Complex64>, format: Format) -> Result<String> {
    let algebra = x.algebra();
    let det = determinant(x);
    let eig = eigenvalues(x)?;
    let membership = classify_point(x)?;
    let density = alpha.map(|a| riesz_density(a, x)).transpose()?;
    Ok(match format {
        Format::Human => {
            let mut out = format!(
                "algebra: {}\ndet: {det}\neigenvalues: {eig:?}\nmembership: {:?}\n",
                describe(algebra),
                membership.verdict
            );
            if let (Some(a), Some(v)) = (alpha, density) {
                let _ = writeln!(
                    out,
                    "riesz_density(alpha={}): {}",
                    fmt_complex(a),
                    fmt_complex(v)
                );
            }
            out
        }
        Format::Machine => {
            let mut record = json!({
                "algebra": algebra,
                "coords": x.coords(),
                "det": det,
                "eigenvalues": eig,
                "membership": format!("{:?}", membership.verdict),
            });
            if let (Some(a), Some(v)) = (alpha, density) {
                record["alpha"] = json!(fmt_complex(a));
                record["density_re"] = json!(v.re);
                record["density_im"] = json!(v.im);
            }
            record.to_string() + "\n"
        }
    })
}

/// Laplace functional at `s = e` against `Δ(2e)^{−α} = 2^{−rα}`.
pub fn sample_self_check(batch: &SampleBatch) -> Result<VerificationReport> {
    let e = Element::identity(batch.algebra);
    let (estimate, se) = laplace_functional_mc(batch, &e)?;
    let target = determinant(&e.scale(2.0)).powf(-batch.alpha);
    let tolerance = 3.0 * se + 1e-3;
    Ok(VerificationReport::with_verdict(
        "sample_laplace_self_check",
        target,
        estimate,
        tolerance,
        (estimate - target).abs() <= tolerance,
    )
    .params(format!(
        "algebra={} alpha={} kind={} s=e",
        batch.algebra, batch.alpha, batch.kind
    ))
    .seed(batch.seed)
    .samples(batch.len() as u64)
    .std_error(se))
}

fn report_text(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Human => report.to_text(),
        Format::Machine => report.to_json() + "\n",
    }
}

fn aggregate_text(report: &AggregateReport, format: Format) -> String {
    match format {
        Format::Human => report.to_text(),
        Format::Machine => report.to_jsonl(),
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<VerifyConfig> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            VerifyConfig::from_toml(&text)
        }
        None => Ok(VerifyConfig::default_suite()),
    }
}

/// Executes a parsed command, writing results to `out`. Returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let format = cli.format;
    let text = match cli.command {
        Command::Classify { algebra, alpha } => cmd_classify(algebra.descriptor()?, alpha, format),
        Command::Gamma { algebra, alpha } => cmd_gamma(algebra.descriptor()?, alpha, format),
        Command::Det {
            algebra,
            coords,
            diag,
            alpha,
        } => cmd_det(
            &element_from(algebra.descriptor()?, coords, diag)?,
            alpha,
            format,
        )?,
        Command::Sample {
            algebra,
            alpha,
            k,
            count,
            seed,
            out: path,
        } => {
            let algebra = algebra.descriptor()?;
            let batch = match (alpha, k) {
                (_, Some(k)) => sample_tilted_discrete(algebra, k, count, seed)?,
                (Some(alpha), None) => sample_tilted(algebra, alpha, count, seed)?,
                (None, None) => {
                    return Err(Error::Usage("one of --alpha or --k is required".into()))
                }
            };
            let check = sample_self_check(&batch)?;
            let mut text = String::new();
            match path {
                Some(p) => std::fs::write(&p, batch.to_text())?,
                None => text.push_str(&batch.to_text()),
            }
            text.push_str(&report_text(&check, format));
            text
        }
        Command::Verify {
            config,
            seed,
            samples,
            timings,
            out: dir,
        } => {
            let mut config = load_config(config.as_ref())?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if let Some(samples) = samples {
                config.samples = samples;
            }
            config.timings |= timings;
            let report = run_all(&config);
            if let Some(dir) = dir {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("report.txt"), report.to_text())?;
                std::fs::write(dir.join("report.jsonl"), report.to_jsonl())?;
            }
            out.write_all(aggregate_text(&report, format).as_bytes())?;
            return Ok(if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            });
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command.
/// Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = match &e {
                Error::UnsupportedSampler(_) => writeln!(
                    err,
                    "symcone: {e} (no sampler is implemented for the exceptional algebra: octonionic matrices lack an associative Bartlett factorization)"
                ),
                _ => writeln!(err, "symcone: {e}"),
            };
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("symcone").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn complex_parsing() {
        let c = |s| parse_complex(s).unwrap();
        assert_eq!(c("1.5"), Complex64::new(1.5, 0.0));
        assert_eq!(c("0.9+0.1i"), Complex64::new(0.9, 0.1));
        assert_eq!(c("2-3i"), Complex64::new(2.0, -3.0));
        assert_eq!(c("-2-3i"), Complex64::new(-2.0, -3.0));
        assert_eq!(c("-i"), Complex64::new(0.0, -1.0));
        assert_eq!(c("4i"), Complex64::new(0.0, 4.0));
        assert_eq!(c("1e-3+2E+1i"), Complex64::new(1e-3, 20.0));
        assert_eq!(c(" 1 + 2i "), Complex64::new(1.0, 2.0));
        for bad in ["", "1,5", "x", "1+2j", "i+1"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn classify_examples() {
        let (code, out, _) = run_str(&[
            "classify",
            "--algebra",
            "sym-real",
            "--size",
            "3",
            "--alpha",
            "0.5",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("verdict: DiscreteWallach(1)"), "{out}");
        let (_, out, _) = run_str(&[
            "classify",
            "--algebra",
            "lorentz",
            "--size",
            "4",
            "--alpha",
            "1.0",
        ]);
        assert!(out.contains("DiscreteWallach(1)"), "{out}");
        let (_, out, _) = run_str(&[
            "--format",
            "machine",
            "classify",
            "--algebra",
            "herm-complex",
            "--size",
            "2",
            "--alpha",
            "0.9+0.1i",
        ]);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert_eq!(v["verdict"], "NotAMeasure");
        assert!(v["reason"].as_str().unwrap().contains("not real"));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(
            run_str(&["classify", "--algebra", "sym-real", "--alpha", "1x"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&["classify", "--algebra", "spin", "--alpha", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&[
                "classify",
                "--algebra",
                "sym-real",
                "--size",
                "0",
                "--alpha",
                "1"
            ])
            .0,
            EXIT_USAGE
        );
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn gamma_and_det() {
        let (_, out, _) = run_str(&[
            "--format",
            "machine",
            "gamma",
            "--algebra",
            "sym-real",
            "--size",
            "2",
            "--alpha",
            "2",
        ]);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert!((v["re"].as_f64().unwrap() - 2.221441469079183).abs() < 1e-12);
        let (_, out, _) = run_str(&[
            "gamma",
            "--algebra",
            "sym-real",
            "--size",
            "2",
            "--alpha",
            "0.5",
        ]);
        assert!(out.contains("gamma_omega: pole"), "{out}");
        let (code, out, _) = run_str(&[
            "det",
            "--algebra",
            "sym-real",
            "--size",
            "2",
            "--diag",
            "2,-3",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("det: -6"), "{out}");
        assert!(out.contains("Outside"), "{out}");
        let (_, out, _) = run_str(&[
            "--format",
            "machine",
            "det",
            "--algebra",
            "lorentz",
            "--size",
            "4",
            "--diag",
            "2,1,0,0",
            "--alpha",
            "3",
        ]);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        assert!((v["det"].as_f64().unwrap() - 3.0).abs() < 1e-12);
        assert!(v["density_re"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn octonionic_sampling_is_unsupported() {
        let (code, _, err) = run_str(&[
            "sample",
            "--algebra",
            "herm-octonion",
            "--alpha",
            "9",
            "--count",
            "10",
        ]);
        assert_eq!(code, EXIT_UNSUPPORTED);
        assert!(err.contains("octonion"), "{err}");
    }

    #[test]
    fn sample_needs_alpha_or_k() {
        assert_eq!(
            run_str(&["sample", "--algebra", "sym-real", "--size", "2"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&[
                "sample",
                "--algebra",
                "sym-real",
                "--alpha",
                "1",
                "--k",
                "1"
            ])
            .0,
            EXIT_USAGE
        );
    }
}
