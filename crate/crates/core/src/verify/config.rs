//! Declarative check matrix (TOML) and the runner.
//!
//! ```toml
//! seed = 7
//! samples = 1000000
//!
//! [[check]]
//! kind = "gamma_integral"
//! algebra = "sym-real:2"
//! alphas = [1.0, 1.5]
//!
//! [[check]]
//! kind = "stieltjes"
//! moments = [0, 1, 2]
//! ```

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{AlgebraDescriptor, Element};
use crate::rng::derive_seed;
use crate::sampling::convolution_check;
use crate::verify::cayley::{cayley_check, cayley_points, sign_obstruction_check};
use crate::verify::gamma_integral::{gamma_integral_mc, GammaIntegralParams, Route};
use crate::verify::integrability::integrability_scan;
use crate::verify::report::{AggregateReport, VerificationReport};
use crate::verify::stieltjes::{stieltjes_companion, stieltjes_moment};
use crate::verify::structure::{
    classification_check, discrete_support_check, equivariance_check, m_lambda_check, peirce_check,
};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Monte Carlo budget for every check that does not set its own.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Record wall-clock time in each report. Off by default so that reruns
    /// produce identical files.
    #[serde(default)]
    pub timings: bool,
    #[serde(default, rename = "check")]
    pub checks: Vec<CheckSpec>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteName {
    #[default]
    Importance,
    Laplace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    GammaIntegral {
        algebra: AlgebraDescriptor,
        alphas: Vec<f64>,
        /// `y = t·e` for each `t`.
        #[serde(default = "default_y_scales")]
        y_scales: Vec<f64>,
        #[serde(default)]
        route: RouteName,
        alpha0: Option<f64>,
        samples: Option<usize>,
        #[serde(default)]
        fault_exponent_shift: f64,
    },
    Cayley {
        algebra: AlgebraDescriptor,
        lambdas: Vec<f64>,
        #[serde(default = "default_random_points")]
        random_points: usize,
    },
    SignObstruction {
        algebra: AlgebraDescriptor,
        #[serde(default = "default_sign_count")]
        count: usize,
    },
    Convolution {
        algebra: AlgebraDescriptor,
        pairs: Vec<[f64; 2]>,
        /// Laplace functional evaluated at `s = t·e`.
        #[serde(default = "default_s_scale")]
        s_scale: f64,
        samples: Option<usize>,
    },
    DiscreteSupport {
        algebra: AlgebraDescriptor,
        /// All ranks `1 ≤ k < r` when absent.
        k: Option<Vec<usize>>,
        #[serde(default = "default_support_count")]
        count: usize,
    },
    Integrability {
        algebra: AlgebraDescriptor,
        lambdas: Vec<f64>,
        #[serde(default = "default_radius")]
        radius: f64,
        samples: Option<usize>,
    },
    Stieltjes {
        #[serde(default = "default_moments")]
        moments: Vec<u32>,
        /// Also check the companion integrals `√π e^{(n+1)²/4}`.
        #[serde(default)]
        companion: bool,
    },
    Classification {
        algebra: AlgebraDescriptor,
        #[serde(default = "default_real_points")]
        real_points: usize,
        #[serde(default = "default_complex_points")]
        complex_points: usize,
    },
    Structure {
        algebra: AlgebraDescriptor,
        #[serde(default = "default_structure_lambdas")]
        lambdas: Vec<f64>,
        #[serde(default = "default_pairs")]
        pairs: usize,
    },
}

fn default_y_scales() -> Vec<f64> {
    vec![1.0, 2.0]
}
fn default_random_points() -> usize {
    2
}
fn default_sign_count() -> usize {
    20
}
fn default_s_scale() -> f64 {
    0.5
}
fn default_support_count() -> usize {
    10_000
}
fn default_radius() -> f64 {
    2.0
}
fn default_moments() -> Vec<u32> {
    (0..=8).collect()
}
fn default_real_points() -> usize {
    200
}
fn default_complex_points() -> usize {
    50
}
fn default_structure_lambdas() -> Vec<f64> {
    vec![0.5, 2.0, 3.0]
}
fn default_pairs() -> usize {
    1000
}

impl CheckSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::GammaIntegral { .. } => "gamma_integral",
            Self::Cayley { .. } => "cayley",
            Self::SignObstruction { .. } => "sign_obstruction",
            Self::Convolution { .. } => "convolution",
            Self::DiscreteSupport { .. } => "discrete_support",
            Self::Integrability { .. } => "integrability",
            Self::Stieltjes { .. } => "stieltjes",
            Self::Classification { .. } => "classification",
            Self::Structure { .. } => "structure",
        }
    }

    fn algebra(&self) -> Option<AlgebraDescriptor> {
        match self {
            Self::GammaIntegral { algebra, .. }
            | Self::Cayley { algebra, .. }
            | Self::SignObstruction { algebra, .. }
            | Self::Convolution { algebra, .. }
            | Self::DiscreteSupport { algebra, .. }
            | Self::Integrability { algebra, .. }
            | Self::Classification { algebra, .. }
            | Self::Structure { algebra, .. } => Some(*algebra),
            Self::Stieltjes { .. } => None,
        }
    }

    /// Runs the check; `samples` is the config-wide budget.
    pub fn run(&self, samples: usize, seed: u64) -> Result<Vec<VerificationReport>> {
        match self {
            Self::GammaIntegral {
                algebra,
                alphas,
                y_scales,
                route,
                alpha0,
                samples: own,
                fault_exponent_shift,
            } => {
                let route = match route {
                    RouteName::Importance => Route::Importance { alpha0: *alpha0 },
                    RouteName::Laplace => Route::Laplace,
                };
                let mut out = Vec::new();
                let mut stream = 0;
                for &alpha in alphas {
                    for &t in y_scales {
                        let y = Element::identity(*algebra).scale(t);
                        let params = GammaIntegralParams {
                            alpha,
                            route,
                            samples: own.unwrap_or(samples),
                            seed: derive_seed(seed, stream),
                            fault_exponent_shift: *fault_exponent_shift,
                        };
                        stream += 1;
                        out.push(gamma_integral_mc(&y, &params)?);
                    }
                }
                Ok(out)
            }
            Self::Cayley {
                algebra,
                lambdas,
                random_points,
            } => cayley_check(lambdas, &cayley_points(*algebra, *random_points, seed)),
            Self::SignObstruction { algebra, count } => {
                sign_obstruction_check(*algebra, *count, seed)
            }
            Self::Convolution {
                algebra,
                pairs,
                s_scale,
                samples: own,
            } => {
                let s = Element::identity(*algebra).scale(*s_scale);
                pairs
                    .iter()
                    .enumerate()
                    .map(|(i, [a, b])| {
                        convolution_check(
                            *algebra,
                            *a,
                            *b,
                            &s,
                            own.unwrap_or(samples),
                            derive_seed(seed, i as u64),
                        )
                    })
                    .collect()
            }
            Self::DiscreteSupport { algebra, k, count } => {
                let ks = k.clone().unwrap_or_else(|| (1..algebra.rank()).collect());
                ks.iter()
                    .map(|&k| {
                        discrete_support_check(*algebra, k, *count, derive_seed(seed, k as u64))
                    })
                    .collect()
            }
            Self::Integrability {
                algebra,
                lambdas,
                radius,
                samples: own,
            } => integrability_scan(*algebra, lambdas, *radius, own.unwrap_or(samples), seed),
            Self::Stieltjes { moments, companion } => {
                let mut out = Vec::with_capacity(2 * moments.len());
                for &n in moments {
                    out.push(stieltjes_moment(n)?);
                }
                if *companion {
                    for &n in moments {
                        out.push(stieltjes_companion(n)?);
                    }
                }
                Ok(out)
            }
            Self::Classification {
                algebra,
                real_points,
                complex_points,
            } => Ok(vec![classification_check(
                *algebra,
                *real_points,
                *complex_points,
                seed,
            )]),
            Self::Structure {
                algebra,
                lambdas,
                pairs,
            } => {
                let mut out = vec![peirce_check(*algebra, derive_seed(seed, 0))?];
                out.extend(m_lambda_check(*algebra, lambdas, derive_seed(seed, 1))?);
                out.push(equivariance_check(*algebra, *pairs, derive_seed(seed, 2))?);
                Ok(out)
            }
        }
    }
}

impl VerifyConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    /// The standard matrix on `SymReal(2)`, `SymReal(3)`, `HermComplex(2)`
    /// and `Lorentz(4)`, plus the Stieltjes moments.
    pub fn default_suite() -> Self {
        let families = [
            AlgebraDescriptor::sym_real(2).expect("valid"),
            AlgebraDescriptor::sym_real(3).expect("valid"),
            AlgebraDescriptor::herm_complex(2).expect("valid"),
            AlgebraDescriptor::lorentz(4).expect("valid"),
        ];
        let mut checks = Vec::new();
        for algebra in families {
            let thr = algebra.threshold();
            let half_d = algebra.half_d();
            checks.push(CheckSpec::Classification {
                algebra,
                real_points: default_real_points(),
                complex_points: default_complex_points(),
            });
            checks.push(CheckSpec::Structure {
                algebra,
                lambdas: default_structure_lambdas(),
                pairs: default_pairs(),
            });
            checks.push(CheckSpec::GammaIntegral {
                algebra,
                alphas: vec![thr + 0.5, thr + 1.0],
                y_scales: default_y_scales(),
                route: RouteName::Importance,
                alpha0: None,
                samples: None,
                fault_exponent_shift: 0.0,
            });
            checks.push(CheckSpec::Cayley {
                algebra,
                lambdas: vec![1.0, 2.0, 3.0, 0.5, -0.25],
                random_points: default_random_points(),
            });
            checks.push(CheckSpec::SignObstruction {
                algebra,
                count: default_sign_count(),
            });
            checks.push(CheckSpec::Convolution {
                algebra,
                pairs: vec![
                    [half_d, half_d],
                    [half_d, thr + 1.0],
                    [thr + 0.5, thr + 0.5],
                ],
                s_scale: default_s_scale(),
                samples: None,
            });
            checks.push(CheckSpec::DiscreteSupport {
                algebra,
                k: None,
                count: default_support_count(),
            });
            if algebra.rank() == 2 {
                checks.push(CheckSpec::Integrability {
                    algebra,
                    lambdas: vec![0.5, 0.0, -0.5, -0.75, -0.95],
                    radius: default_radius(),
                    samples: Some(200_000),
                });
            }
        }
        checks.push(CheckSpec::Stieltjes {
            moments: default_moments(),
            companion: true,
        });
        Self {
            seed: DEFAULT_SEED,
            samples: DEFAULT_SAMPLES,
            timings: false,
            checks,
        }
    }
}

fn error_report(spec: &CheckSpec, err: &Error, seed: u64) -> VerificationReport {
    let algebra = spec
        .algebra()
        .map(|a| format!("algebra={a} "))
        .unwrap_or_default();
    VerificationReport::with_verdict(spec.kind(), f64::NAN, f64::NAN, 0.0, false)
        .params(format!("{algebra}error={err}"))
        .seed(seed)
}

/// Runs every check (in parallel) and concatenates the reports in config
/// order. Check `i` is seeded with `derive_seed(config.seed, i)`; a check
/// that errors contributes one failed report carrying the message.
pub fn run_all(config: &VerifyConfig) -> AggregateReport {
    let per_check: Vec<Vec<VerificationReport>> = config
        .checks
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let seed = derive_seed(config.seed, i as u64);
            let start = Instant::now();
            let mut reports = spec
                .run(config.samples, seed)
                .unwrap_or_else(|e| vec![error_report(spec, &e, seed)]);
            if config.timings {
                let ms = start.elapsed().as_secs_f64() * 1e3;
                reports = reports.into_iter().map(|r| r.runtime_ms(ms)).collect();
            }
            reports
        })
        .collect();
    AggregateReport::new(per_check.into_iter().flatten().collect())
}
