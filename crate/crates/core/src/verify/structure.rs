//! Structural checks: the measure classification truth table, Peirce
//! multiplicities, `Det(M_λ)`, `Δ`-equivariance under `P(a)`, and the rank
//! of discrete-point samples.

use num_complex::Complex64;

use crate::cone::{
    check_equivariance, classify_point, m_lambda_det, m_lambda_matrix, operator_det, Membership,
};
use crate::error::Result;
use crate::jordan::{
    peirce_multiplicities, spectral_frame, AlgebraDescriptor, Element, FamilyKind,
};
use crate::riesz::{classify_measure, sign_obstruction, MeasureVerdict, Obstruction};
use crate::rng::Stream;
use crate::sampling::sample_tilted_discrete;
use crate::verify::report::VerificationReport;

/// A grid point together with the verdict it must receive.
#[derive(Debug, Clone, Copy)]
struct Labelled {
    alpha: Complex64,
    expected: MeasureVerdict,
}

/// Labels come from how each point is built, not from a formula: the
/// discrete points `kd/2`, points strictly inside the gaps between them (and
/// below 0), points above the threshold, and off-axis complex points.
fn truth_table(
    algebra: AlgebraDescriptor,
    real_points: usize,
    complex_points: usize,
    stream: &mut Stream,
) -> Vec<Labelled> {
    let r = algebra.rank();
    let half_d = algebra.half_d();
    let thr = algebra.threshold();
    let mut out = Vec::with_capacity(real_points + complex_points);
    for k in 0..r {
        out.push(Labelled {
            alpha: (k as f64 * half_d).into(),
            expected: if k == 0 {
                MeasureVerdict::DiracDelta
            } else {
                MeasureVerdict::DiscreteWallach(k)
            },
        });
    }
    let interior = |s: &mut Stream| 0.001 + 0.998 * s.uniform();
    while out.len() < real_points {
        let (alpha, expected) = match out.len() % 3 {
            0 => {
                // inside a gap (k−1)d/2 < α < kd/2, or below 0
                let k = (stream.uniform() * r as f64) as i64;
                let lo = (k - 1) as f64 * half_d;
                (lo + half_d * interior(stream), MeasureVerdict::NotAMeasure)
            }
            1 => (-1.0 - 3.0 * stream.uniform(), MeasureVerdict::NotAMeasure),
            _ => (
                thr + 1e-6 + 3.0 * stream.uniform(),
                MeasureVerdict::PositiveAbsolutelyContinuous,
            ),
        };
        out.push(Labelled {
            alpha: alpha.into(),
            expected,
        });
    }
    for i in 0..complex_points {
        let im = (0.05 + 2.0 * stream.uniform()) * if i % 2 == 0 { 1.0 } else { -1.0 };
        let (re, expected) = if i % 2 == 0 {
            (
                thr + 1e-6 + 3.0 * stream.uniform(),
                MeasureVerdict::ComplexMeasureAC,
            )
        } else {
            // includes Re α on discrete points: still not a measure off the axis
            let re = if i % 5 == 1 {
                half_d
            } else {
                thr - 3.0 * stream.uniform()
            };
            (re, MeasureVerdict::NotAMeasure)
        };
        out.push(Labelled {
            alpha: Complex64::new(re, im),
            expected,
        });
    }
    out
}

/// Counts disagreements of `classify_measure` with the constructed labels
/// and with `sign_obstruction` on the real points. Passes iff zero.
pub fn classification_check(
    algebra: AlgebraDescriptor,
    real_points: usize,
    complex_points: usize,
    seed: u64,
) -> VerificationReport {
    let mut stream = Stream::new(seed);
    let table = truth_table(algebra, real_points, complex_points, &mut stream);
    let mut disagreements = 0usize;
    for point in &table {
        let verdict = classify_measure(algebra, point.alpha).verdict;
        if verdict != point.expected {
            disagreements += 1;
        }
        if point.alpha.im == 0.0 {
            let alpha = point.alpha.re;
            let obstruction = sign_obstruction(algebra, alpha);
            let inconsistent = match obstruction {
                Obstruction::Forbidden => verdict != MeasureVerdict::NotAMeasure,
                Obstruction::NoObstruction => {
                    alpha >= 0.0 && verdict == MeasureVerdict::NotAMeasure
                }
            };
            if inconsistent {
                disagreements += 1;
            }
        }
    }
    VerificationReport::with_verdict(
        "classification",
        0.0,
        disagreements as f64,
        0.0,
        disagreements == 0,
    )
    .params(format!(
        "algebra={algebra} real={real_points} complex={complex_points}"
    ))
    .seed(seed)
    .samples(table.len() as u64)
}

/// First idempotent of the frame of `diag(1, …, m)`, or of
/// `(1.5, (0.5, 0, …))` in the Lorentz family.
fn primitive_idempotent(algebra: AlgebraDescriptor) -> Result<Element> {
    let x = match algebra.family() {
        FamilyKind::Lorentz => {
            let mut xbar = vec![0.0; algebra.dim() - 1];
            xbar[0] = 0.5;
            Element::lorentz(algebra, 1.5, &xbar)?
        }
        _ => {
            let diag: Vec<f64> = (1..=algebra.size()).map(|i| i as f64).collect();
            Element::from_diagonal(algebra, &diag)?
        }
    };
    Ok(spectral_frame(&x)?.frame.swap_remove(0))
}

fn random_interior(algebra: AlgebraDescriptor, stream: &mut Stream) -> Element {
    let scale = 1.0 / (algebra.dim() as f64).sqrt();
    let coords: Vec<f64> = (0..algebra.dim())
        .map(|_| stream.uniform_in(-scale, scale))
        .collect();
    let b = Element::new(algebra, coords).expect("dimension matches");
    b.square().axpy(0.25, &Element::identity(algebra))
}

/// Peirce multiplicities `(1, (r−1)d, n−1−(r−1)d)` for a coordinate
/// idempotent and for every idempotent of a random Jordan frame.
pub fn peirce_check(algebra: AlgebraDescriptor, seed: u64) -> Result<VerificationReport> {
    let (r, n, d) = (algebra.rank(), algebra.dim(), algebra.peirce_d());
    let want = (1, (r - 1) * d, n - 1 - (r - 1) * d);
    let mut stream = Stream::new(seed);
    let mut idempotents = vec![primitive_idempotent(algebra)?];
    idempotents.extend(spectral_frame(&random_interior(algebra, &mut stream))?.frame);
    let mut mismatches = 0;
    for c in &idempotents {
        if peirce_multiplicities(c)? != want {
            mismatches += 1;
        }
    }
    Ok(VerificationReport::with_verdict(
        "peirce_multiplicities",
        0.0,
        mismatches as f64,
        0.0,
        mismatches == 0,
    )
    .params(format!("algebra={algebra} expected={want:?}"))
    .seed(seed)
    .samples(idempotents.len() as u64))
}

/// Numerical `Det(M_λ)` against `λ^{2n/r}` (1e−8 relative) over a random frame.
pub fn m_lambda_check(
    algebra: AlgebraDescriptor,
    lambdas: &[f64],
    seed: u64,
) -> Result<Vec<VerificationReport>> {
    let mut stream = Stream::new(seed);
    let frame = spectral_frame(&random_interior(algebra, &mut stream))?;
    lambdas
        .iter()
        .map(|&lambda| {
            let numeric = operator_det(&m_lambda_matrix(&frame, lambda)?);
            Ok(VerificationReport::relative(
                "m_lambda_det",
                m_lambda_det(algebra, lambda),
                numeric,
                1e-8,
            )
            .params(format!("algebra={algebra} lambda={lambda}"))
            .seed(seed))
        })
        .collect()
}

/// `Δ(P(a)x) = Det(P(a))^{r/n} Δ(x)` on `pairs` random interior pairs;
/// reports the largest relative error (pass iff ≤ 1e−8).
pub fn equivariance_check(
    algebra: AlgebraDescriptor,
    pairs: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut stream = Stream::new(seed);
    let mut worst = 0.0f64;
    for _ in 0..pairs {
        let a = random_interior(algebra, &mut stream);
        let x = random_interior(algebra, &mut stream);
        worst = worst.max(check_equivariance(&a, &x)?.rel_err);
    }
    Ok(
        VerificationReport::with_verdict("equivariance", 0.0, worst, 1e-8, worst <= 1e-8)
            .params(format!(
                "algebra={algebra} pairs={pairs} estimate=max_rel_err"
            ))
            .seed(seed)
            .samples(pairs as u64),
    )
}

/// Every sample of the rank-`k` sampler must classify as `BoundaryRank(k)`.
pub fn discrete_support_check(
    algebra: AlgebraDescriptor,
    k: usize,
    count: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let batch = sample_tilted_discrete(algebra, k, count, seed)?;
    let mut wrong = 0usize;
    for x in &batch.elements {
        if classify_point(x)?.verdict != Membership::BoundaryRank(k) {
            wrong += 1;
        }
    }
    Ok(
        VerificationReport::with_verdict("discrete_support", 0.0, wrong as f64, 0.0, wrong == 0)
            .params(format!("algebra={algebra} k={k}"))
            .seed(seed)
            .samples(count as u64),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn families() -> Vec<AlgebraDescriptor> {
        vec![
            AlgebraDescriptor::sym_real(2).unwrap(),
            AlgebraDescriptor::sym_real(3).unwrap(),
            AlgebraDescriptor::herm_complex(2).unwrap(),
            AlgebraDescriptor::herm_quaternion(2).unwrap(),
            AlgebraDescriptor::herm_octonion(),
            AlgebraDescriptor::lorentz(4).unwrap(),
            AlgebraDescriptor::lorentz(5).unwrap(),
        ]
    }

    #[test]
    fn truth_table_has_the_requested_shape() {
        let a = AlgebraDescriptor::sym_real(3).unwrap();
        let t = truth_table(a, 200, 50, &mut Stream::new(1));
        assert_eq!(t.len(), 250);
        assert_eq!(t.iter().filter(|p| p.alpha.im != 0.0).count(), 50);
        assert!(t
            .iter()
            .any(|p| p.expected == MeasureVerdict::DiscreteWallach(2)));
    }

    #[test]
    fn classification_has_no_disagreements() {
        for a in families() {
            let r = classification_check(a, 200, 50, 3);
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn a_wrong_classifier_would_be_caught() {
        // the labels are independent of classify_measure: flipping one
        // discrete label must register
        let a = AlgebraDescriptor::sym_real(3).unwrap();
        let mut t = truth_table(a, 20, 4, &mut Stream::new(2));
        t[1].expected = MeasureVerdict::NotAMeasure;
        let bad = t
            .iter()
            .filter(|p| classify_measure(a, p.alpha).verdict != p.expected)
            .count();
        assert_eq!(bad, 1);
    }

    #[test]
    fn structural_checks_pass() {
        for a in families() {
            assert!(peirce_check(a, 1).unwrap().passed, "{a}");
            for r in m_lambda_check(a, &[0.5, 2.0, 3.0], 2).unwrap() {
                assert!(r.passed, "{r:?}");
            }
            let r = equivariance_check(a, 50, 3).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn discrete_support_passes_for_supported_pairs() {
        let r =
            discrete_support_check(AlgebraDescriptor::sym_real(3).unwrap(), 2, 2_000, 4).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(discrete_support_check(AlgebraDescriptor::herm_octonion(), 1, 10, 4).is_err());
    }
}
