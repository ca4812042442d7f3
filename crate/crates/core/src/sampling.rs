//! Samplers for the exponentially tilted Riesz measures
//! `ν_α(dx) = Δ(e)^{α} e^{−(x|e)} R_α(dx)`, whose Laplace functional is
//! `E[e^{−(s|X)}] = Δ(e+s)^{−α}`.
//!
//! * Continuous range `α > (r−1)d/2`, matrix families: `X = TT*` with `T`
//!   lower triangular over the scalars, `T_ii² ~ Gamma(α − (i−1)d/2, 1)` and
//!   each real component of an off-diagonal entry `Normal(0, 1/2)`.
//! * Continuous range, Lorentz: in eigenvalue coordinates `u > v` the law is
//!   `∝ e^{−(u+v)}(uv)^{α−n/2}(u−v)^{n−2}`; with `S = u+v` and
//!   `w = ((u−v)/S)²` it factors as `S ~ Gamma(2α, 1)`,
//!   `w ~ Beta((n−1)/2, α−n/2+1)`, direction uniform.
//! * Discrete points `α = kd/2`: `X = Σ_{i≤k} vᵢvᵢ*` with Gaussian columns
//!   (components `Normal(0, 1/2)`); Lorentz `k = 1`: `X = (t, tω)` with
//!   `t ~ Gamma(n−2, rate 2)`.
//!
//! Octonionic sampling is unsupported. Samples are drawn in fixed-size
//! shards, each with its own stream, and concatenated shard-major, so a
//! batch depends only on `(algebra, α, count, seed)`.

use std::fmt::Write as _;
use std::str::FromStr;

use rand_distr::{Beta, Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::hermitian::SquareMatrix;
use crate::jordan::{determinant, AlgebraDescriptor, Element, FamilyKind};
use crate::riesz::discrete_index;
use crate::rng::{derive_seed, Stream};
use crate::scalars::DivisionScalar;
use crate::verify::report::VerificationReport;

pub const SHARD_SIZE: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleKind {
    Continuous,
    /// Rank-`k` boundary law at `α = kd/2`.
    Discrete(usize),
    /// `α = 0`: every sample is `0`.
    Dirac,
}

impl std::fmt::Display for SampleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Continuous => f.write_str("continuous"),
            Self::Discrete(k) => write!(f, "discrete:{k}"),
            Self::Dirac => f.write_str("dirac"),
        }
    }
}

impl FromStr for SampleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuous" => Ok(Self::Continuous),
            "dirac" => Ok(Self::Dirac),
            _ => s
                .strip_prefix("discrete:")
                .and_then(|k| k.parse().ok())
                .map(Self::Discrete)
                .ok_or_else(|| Error::Parse(format!("unknown sample kind '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub algebra: AlgebraDescriptor,
    pub alpha: f64,
    pub kind: SampleKind,
    pub elements: Vec<Element>,
    pub seed: u64,
}

fn check_supported(algebra: AlgebraDescriptor) -> Result<()> {
    if algebra.family() == FamilyKind::HermOctonion {
        return Err(Error::UnsupportedSampler(
            "octonionic (herm-octonion) sampling is not supported: the triangular construction needs associative scalars"
                .into(),
        ));
    }
    Ok(())
}

fn draw<F>(count: usize, seed: u64, sample_one: F) -> Vec<Element>
where
    F: Fn(&mut Stream) -> Element + Sync,
{
    let shards = count.div_ceil(SHARD_SIZE);
    let parts: Vec<Vec<Element>> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut stream = Stream::shard(seed, s as u64);
            let len = SHARD_SIZE.min(count - s * SHARD_SIZE);
            (0..len).map(|_| sample_one(&mut stream)).collect()
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// `count` draws from `ν_α`, `α > (r−1)d/2`.
pub fn sample_tilted_continuous(
    algebra: AlgebraDescriptor,
    alpha: f64,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    check_supported(algebra)?;
    if !(alpha > algebra.threshold()) || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "continuous sampler needs α > {}, got {alpha}",
            algebra.threshold()
        )));
    }
    let elements = match algebra.family() {
        FamilyKind::Lorentz => {
            let n = algebra.dim() as f64;
            let trace = Gamma::new(2.0 * alpha, 1.0).map_err(|e| Error::Domain(e.to_string()))?;
            let spread = Beta::new((n - 1.0) / 2.0, alpha - n / 2.0 + 1.0)
                .map_err(|e| Error::Domain(e.to_string()))?;
            draw(count, seed, |s| {
                let total = trace.sample(s);
                let w: f64 = spread.sample(s);
                let radius = total * w.sqrt() / 2.0;
                let xbar: Vec<f64> = s
                    .unit_sphere(algebra.dim() - 1)
                    .iter()
                    .map(|c| radius * c)
                    .collect();
                Element::lorentz(algebra, total / 2.0, &xbar).expect("dimension matches")
            })
        }
        _ => {
            let half_d = algebra.half_d();
            let diag = (0..algebra.size())
                .map(|i| {
                    Gamma::new(alpha - i as f64 * half_d, 1.0)
                        .map_err(|e| Error::Domain(e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            draw(count, seed, |s| bartlett(algebra, &diag, s))
        }
    };
    Ok(SampleBatch {
        algebra,
        alpha,
        kind: SampleKind::Continuous,
        elements,
        seed,
    })
}

fn gaussian_scalar(kind: crate::scalars::DivisionKind, s: &mut Stream) -> DivisionScalar {
    let coeffs: Vec<f64> = (0..kind.dim())
        .map(|_| s.normal(0.0, std::f64::consts::FRAC_1_SQRT_2))
        .collect();
    DivisionScalar::from_coeffs(kind, &coeffs).expect("length matches")
}

fn bartlett(algebra: AlgebraDescriptor, diag: &[Gamma<f64>], s: &mut Stream) -> Element {
    let kind = algebra.family().scalars().expect("matrix family");
    let m = algebra.size();
    let mut t = SquareMatrix::zeros(kind, m);
    for (i, law) in diag.iter().enumerate().take(m) {
        let g: f64 = law.sample(s);
        t.set(i, i, DivisionScalar::real(kind, g.sqrt()));
        for j in 0..i {
            t.set(i, j, gaussian_scalar(kind, s));
        }
    }
    Element::from_matrix(algebra, &t.matmul(&t.adjoint())).expect("hermitian by construction")
}

/// `count` draws from the rank-`k` law `ν_{kd/2}`, `1 ≤ k ≤ r−1`.
pub fn sample_tilted_discrete(
    algebra: AlgebraDescriptor,
    k: usize,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    check_supported(algebra)?;
    if k == 0 || k >= algebra.rank() {
        return Err(Error::Domain(format!(
            "discrete sampler needs 1 ≤ k ≤ {}, got {k}",
            algebra.rank() - 1
        )));
    }
    let elements = match algebra.family() {
        FamilyKind::Lorentz => {
            let n = algebra.dim();
            let radius =
                Gamma::new((n - 2) as f64, 0.5).map_err(|e| Error::Domain(e.to_string()))?;
            draw(count, seed, |s| {
                let t = radius.sample(s);
                let xbar: Vec<f64> = s.unit_sphere(n - 1).iter().map(|c| t * c).collect();
                Element::lorentz(algebra, t, &xbar).expect("dimension matches")
            })
        }
        _ => {
            let kind = algebra.family().scalars().expect("matrix family");
            let m = algebra.size();
            draw(count, seed, |s| {
                let mut v = SquareMatrix::zeros(kind, m);
                for col in 0..k {
                    for row in 0..m {
                        v.set(row, col, gaussian_scalar(kind, s));
                    }
                }
                Element::from_matrix(algebra, &v.matmul(&v.adjoint()))
                    .expect("hermitian by construction")
            })
        }
    };
    Ok(SampleBatch {
        algebra,
        alpha: k as f64 * algebra.half_d(),
        kind: SampleKind::Discrete(k),
        elements,
        seed,
    })
}

/// Dispatches on `α`: `0` gives the point mass at `0`, `kd/2` the discrete
/// sampler, anything above the threshold the continuous one.
pub fn sample_tilted(
    algebra: AlgebraDescriptor,
    alpha: f64,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    match discrete_index(algebra, alpha.into()) {
        Some(0) => Ok(SampleBatch {
            algebra,
            alpha: 0.0,
            kind: SampleKind::Dirac,
            elements: vec![Element::zero(algebra); count],
            seed,
        }),
        Some(k) => sample_tilted_discrete(algebra, k, count, seed),
        None => sample_tilted_continuous(algebra, alpha, count, seed),
    }
}

/// Sample mean of `e^{−(s|X)}` and its standard error.
pub fn laplace_functional_mc(batch: &SampleBatch, s: &Element) -> Result<(f64, f64)> {
    if batch.elements.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if s.algebra() != batch.algebra {
        return Err(Error::AlgebraMismatch {
            left: batch.algebra.to_string(),
            right: s.algebra().to_string(),
        });
    }
    let values: Vec<f64> = batch.elements.iter().map(|x| (-s.inner(x)).exp()).collect();
    Ok(mean_and_se(&values))
}

pub(crate) fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Elementwise sum of two independent batches of equal length.
pub fn merge_sum(a: &SampleBatch, b: &SampleBatch) -> Result<SampleBatch> {
    if a.algebra != b.algebra {
        return Err(Error::AlgebraMismatch {
            left: a.algebra.to_string(),
            right: b.algebra.to_string(),
        });
    }
    if a.elements.len() != b.elements.len() {
        return Err(Error::Usage(
            "batches to merge must have equal length".into(),
        ));
    }
    let elements = a
        .elements
        .iter()
        .zip(&b.elements)
        .map(|(x, y)| x + y)
        .collect();
    let alpha = a.alpha + b.alpha;
    let kind = match discrete_index(a.algebra, alpha.into()) {
        Some(0) => SampleKind::Dirac,
        Some(k) if a.kind != SampleKind::Continuous && b.kind != SampleKind::Continuous => {
            SampleKind::Discrete(k)
        }
        _ => SampleKind::Continuous,
    };
    Ok(SampleBatch {
        algebra: a.algebra,
        alpha,
        kind,
        elements,
        seed: a.seed,
    })
}

/// Draws `X ~ ν_α`, `Y ~ ν_β` independently and compares the Laplace
/// functional of `X + Y` at `s` with `Δ(e+s)^{−(α+β)}`.
/// Passes iff `|estimate − target| ≤ 3·se + 1e−3`.
pub fn convolution_check(
    algebra: AlgebraDescriptor,
    alpha: f64,
    beta: f64,
    s: &Element,
    count: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let x = sample_tilted(algebra, alpha, count, derive_seed(seed, 0xA))?;
    let y = sample_tilted(algebra, beta, count, derive_seed(seed, 0xB))?;
    let sum = merge_sum(&x, &y)?;
    let (estimate, se) = laplace_functional_mc(&sum, s)?;
    let shifted = s + &Element::identity(algebra);
    let target = determinant(&shifted).powf(-(alpha + beta));
    let tolerance = 3.0 * se + 1e-3;
    let passed = (estimate - target).abs() <= tolerance;
    Ok(
        VerificationReport::with_verdict("convolution", target, estimate, tolerance, passed)
            .params(format!(
                "algebra={algebra} alpha={alpha} beta={beta} s={:?}",
                s.coords()
            ))
            .seed(seed)
            .samples(count as u64)
            .std_error(se),
    )
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Header line followed by one element per line (orthonormal
    /// coordinates, shortest round-trip decimal form).
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.len() * self.algebra.dim() * 20 + 100);
        let _ = writeln!(
            out,
            "# symcone-samples algebra={} alpha={} kind={} seed={} count={}",
            self.algebra,
            self.alpha,
            self.kind,
            self.seed,
            self.len()
        );
        for x in &self.elements {
            let mut first = true;
            for c in x.coords() {
                if !first {
                    out.push(' ');
                }
                first = false;
                let _ = write!(out, "{c}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|h| h.strip_prefix("# symcone-samples "))
            .ok_or_else(|| Error::Parse("missing sample header".into()))?;
        let mut algebra = None;
        let mut alpha = None;
        let mut kind = None;
        let mut seed = None;
        let mut count = None;
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field '{field}'")))?;
            let bad = |_| Error::Parse(format!("bad value for {key}: '{value}'"));
            match key {
                "algebra" => algebra = Some(value.parse::<AlgebraDescriptor>()?),
                "alpha" => alpha = Some(value.parse::<f64>().map_err(|e| bad(e.to_string()))?),
                "kind" => kind = Some(value.parse::<SampleKind>()?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|e| bad(e.to_string()))?),
                "count" => count = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
                _ => return Err(Error::Parse(format!("unknown header field '{key}'"))),
            }
        }
        let missing = |k: &str| Error::Parse(format!("header lacks '{k}'"));
        let algebra = algebra.ok_or_else(|| missing("algebra"))?;
        let count = count.ok_or_else(|| missing("count"))?;
        let elements = lines
            .filter(|l| !l.trim().is_empty())
            .enumerate()
            .map(|(i, line)| {
                let coords = line
                    .split_whitespace()
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::Parse(format!("sample {}: {e}", i + 1)))?;
                Element::new(algebra, coords)
                    .map_err(|e| Error::Parse(format!("sample {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        if elements.len() != count {
            return Err(Error::Parse(format!(
                "header says {count} samples, found {}",
                elements.len()
            )));
        }
        Ok(Self {
            algebra,
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            kind: kind.ok_or_else(|| missing("kind"))?,
            elements,
            seed: seed.ok_or_else(|| missing("seed"))?,
        })
    }
}
