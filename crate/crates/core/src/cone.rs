//! The symmetric cone `Ω`, its boundary strata `Ω_k`, and the cone
//! automorphisms used by the checks: quadratic representations `P(a)` and
//! the one-parameter family `M_λ = P(c₁ + … + c_{r−1} + λc_r)`.
//!
//! Group elements are handled only through their action on `V`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jordan::{
    determinant, eigenvalues, operator_matrix, AlgebraDescriptor, Element, SpectralDecomposition,
};
use crate::verify::report::VerificationReport;

/// Where a point sits relative to `Ω̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    Interior,
    /// On `∂Ω` with exactly `k` positive eigenvalues (the stratum `Ω_k`).
    BoundaryRank(usize),
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeMembership {
    pub verdict: Membership,
    pub min_eigenvalue: f64,
    /// Number of eigenvalues with `|λ| > eig_tol`.
    pub rank: usize,
}

/// `1e−8·(1 + ‖x‖)`.
pub fn eig_tol(x: &Element) -> f64 {
    1e-8 * (1.0 + x.norm())
}

pub fn classify_point(x: &Element) -> Result<ConeMembership> {
    let tol = eig_tol(x);
    let ev = eigenvalues(x)?;
    let min_eigenvalue = *ev.last().expect("rank >= 1");
    let positive = ev.iter().filter(|l| **l > tol).count();
    let near_zero = ev.iter().filter(|l| l.abs() <= tol).count();
    let verdict = if positive == ev.len() {
        Membership::Interior
    } else if positive + near_zero == ev.len() {
        Membership::BoundaryRank(positive)
    } else {
        Membership::Outside
    };
    Ok(ConeMembership {
        verdict,
        min_eigenvalue,
        rank: ev.len() - near_zero,
    })
}

/// `x` if it lies in the open cone, otherwise [`Error::NotInCone`].
pub fn require_interior(x: &Element) -> Result<()> {
    let m = classify_point(x)?;
    match m.verdict {
        Membership::Interior => Ok(()),
        _ => Err(Error::NotInCone {
            min_eigenvalue: m.min_eigenvalue,
        }),
    }
}

/// `M_λ x = P(c₁ + … + c_{r−1} + λc_r) x`.
///
/// Acts as `λ²` on `V_rr`, as `λ` on `V_ir` (`i < r`) and as the identity
/// on the other Peirce spaces, so it fixes `e_k = c₁ + … + c_k` for `k < r`.
pub fn m_lambda_apply(frame: &SpectralDecomposition, lambda: f64, x: &Element) -> Result<Element> {
    let a = m_lambda_element(frame, lambda, x.algebra())?;
    Ok(a.quad_rep(x))
}

fn m_lambda_element(
    frame: &SpectralDecomposition,
    lambda: f64,
    algebra: AlgebraDescriptor,
) -> Result<Element> {
    let r = algebra.rank();
    if frame.frame.len() != r {
        return Err(Error::IncompleteFrame {
            got: frame.frame.len(),
            rank: r,
        });
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("M_λ needs λ > 0, got {lambda}")));
    }
    Ok(frame
        .partial_identity(r - 1)
        .axpy(lambda, &frame.frame[r - 1]))
}

/// Coordinate matrix of `M_λ`.
pub fn m_lambda_matrix(frame: &SpectralDecomposition, lambda: f64) -> Result<DMatrix<f64>> {
    let algebra = frame
        .frame
        .first()
        .map(Element::algebra)
        .ok_or(Error::IncompleteFrame { got: 0, rank: 1 })?;
    let a = m_lambda_element(frame, lambda, algebra)?;
    Ok(operator_matrix(algebra, |x| a.quad_rep(x)))
}

/// Closed form `Det(M_λ) = λ^{(r−1)d+2} = λ^{2n/r}`.
pub fn m_lambda_det(algebra: AlgebraDescriptor, lambda: f64) -> f64 {
    let exponent = (algebra.rank() - 1) * algebra.peirce_d() + 2;
    lambda.powi(exponent as i32)
}

/// Determinant of a linear map given by its coordinate matrix.
pub fn operator_det(matrix: &DMatrix<f64>) -> f64 {
    matrix.clone().lu().determinant()
}

/// Coordinate matrix of `P(a)`.
pub fn quad_rep_matrix(a: &Element) -> DMatrix<f64> {
    operator_matrix(a.algebra(), |x| a.quad_rep(x))
}

/// Compares `Δ(P(a)x)` with `Det(P(a))^{r/n}·Δ(x)`, `Det` computed
/// numerically from the coordinate matrix of `P(a)`. Passes at relative
/// error 1e−8.
pub fn check_equivariance(a: &Element, x: &Element) -> Result<VerificationReport> {
    require_interior(a)?;
    let algebra = a.algebra();
    let det_p = operator_det(&quad_rep_matrix(a));
    let r_over_n = algebra.rank() as f64 / algebra.dim() as f64;
    let target = det_p.powf(r_over_n) * determinant(x);
    let estimate = determinant(&a.quad_rep(x));
    Ok(
        VerificationReport::relative("equivariance", target, estimate, 1e-8)
            .params(format!("algebra={algebra}")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jordan::spectral_frame;
    use crate::jordan::test_support::*;
    use proptest::prelude::*;

    #[test]
    fn classify_examples() {
        let s3 = AlgebraDescriptor::sym_real(3).unwrap();
        assert_eq!(
            classify_point(&Element::identity(s3)).unwrap().verdict,
            Membership::Interior
        );
        let x = Element::from_diagonal(s3, &[1.0, 1.0, 0.0]).unwrap();
        let m = classify_point(&x).unwrap();
        assert_eq!(m.verdict, Membership::BoundaryRank(2));
        assert_eq!(m.rank, 2);
        let l = AlgebraDescriptor::lorentz(4).unwrap();
        let x = Element::lorentz(l, 1.0, &[2.0, 0.0, 0.0]).unwrap();
        let m = classify_point(&x).unwrap();
        assert_eq!(m.verdict, Membership::Outside);
        assert!((m.min_eigenvalue + 1.0).abs() < 1e-12);
        assert_eq!(
            classify_point(&Element::zero(l)).unwrap().verdict,
            Membership::BoundaryRank(0)
        );
        assert!(matches!(require_interior(&x), Err(Error::NotInCone { .. })));
    }

    #[test]
    fn m_lambda_examples() {
        let mut rng = rng(31);
        for a in all_families() {
            let sd = spectral_frame(&random_element(a, &mut rng)).unwrap();
            let x = random_element(a, &mut rng);
            assert_close(&m_lambda_apply(&sd, 1.0, &x).unwrap(), &x, 1e-8);
            let r = a.rank();
            let lam = 1.7;
            let e_rm1 = sd.partial_identity(r - 1);
            assert_close(&m_lambda_apply(&sd, lam, &e_rm1).unwrap(), &e_rm1, 1e-8);
            let cr = &sd.frame[r - 1];
            assert_close(
                &m_lambda_apply(&sd, lam, cr).unwrap(),
                &cr.scale(lam * lam),
                1e-8,
            );
        }
    }

    #[test]
    fn m_lambda_rejects_bad_input() {
        let a = AlgebraDescriptor::sym_real(2).unwrap();
        let sd = spectral_frame(&Element::from_diagonal(a, &[1.0, 2.0]).unwrap()).unwrap();
        let x = Element::identity(a);
        assert!(matches!(
            m_lambda_apply(&sd, 0.0, &x),
            Err(Error::Domain(_))
        ));
        let partial = SpectralDecomposition {
            eigenvalues: vec![2.0],
            frame: vec![sd.frame[0].clone()],
        };
        assert!(matches!(
            m_lambda_apply(&partial, 2.0, &x),
            Err(Error::IncompleteFrame { .. })
        ));
    }

    #[test]
    fn m_lambda_determinant_examples() {
        let s2 = AlgebraDescriptor::sym_real(2).unwrap();
        assert_eq!(m_lambda_det(s2, 2.0), 8.0);
        assert_eq!(m_lambda_det(s2, 1.0), 1.0);
        let l5 = AlgebraDescriptor::lorentz(5).unwrap();
        assert_eq!(m_lambda_det(l5, 3.0), 243.0);
        let mut rng = rng(32);
        for (a, lam) in [(s2, 2.0), (l5, 3.0)] {
            let sd = spectral_frame(&random_element(a, &mut rng)).unwrap();
            let numeric = operator_det(&m_lambda_matrix(&sd, lam).unwrap());
            let closed = m_lambda_det(a, lam);
            assert!(
                (numeric - closed).abs() <= 1e-8 * closed,
                "{a}: {numeric} vs {closed}"
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn m_lambda_keeps_partial_identities_in_their_stratum((a, seed) in family_and_seed(), lam in 0.05f64..20.0) {
            let sd = spectral_frame(&random_element(a, &mut rng(seed))).unwrap();
            for k in 0..a.rank() {
                let img = m_lambda_apply(&sd, lam, &sd.partial_identity(k)).unwrap();
                prop_assert_eq!(classify_point(&img).unwrap().rank, k, "{} k={} λ={}", a, k, lam);
            }
        }

        #[test]
        fn quad_rep_det_matches_power_of_jordan_det((alg, seed) in family_and_seed()) {
            let a = random_interior(alg, &mut rng(seed));
            let numeric = operator_det(&quad_rep_matrix(&a));
            let closed = determinant(&a).powf(2.0 * alg.n_over_r());
            prop_assert!((numeric - closed).abs() <= 1e-8 * closed, "{}", alg);
        }

        #[test]
        fn quad_rep_preserves_the_cone((alg, seed) in family_and_seed()) {
            let mut rng = rng(seed);
            let a = random_interior(alg, &mut rng);
            let y = random_interior(alg, &mut rng);
            prop_assert_eq!(classify_point(&a.quad_rep(&y)).unwrap().verdict, Membership::Interior);
        }

        #[test]
        fn determinant_is_equivariant((alg, seed) in family_and_seed()) {
            let mut rng = rng(seed);
            let a = random_interior(alg, &mut rng);
            let x = random_element(alg, &mut rng);
            let r = check_equivariance(&a, &x).unwrap();
            prop_assert!(r.passed, "{:?}", r);
        }
    }

    #[test]
    fn equivariance_examples() {
        let mut rng = rng(36);
        let s2 = AlgebraDescriptor::sym_real(2).unwrap();
        let x = random_element(s2, &mut rng);
        let r = check_equivariance(&Element::identity(s2), &x).unwrap();
        assert!(r.passed && r.rel_err < 1e-12);
        let a = Element::from_diagonal(s2, &[2.0, 1.0]).unwrap();
        let r = check_equivariance(&a, &x).unwrap();
        assert!(r.rel_err < 1e-9, "{r:?}");
        // matrix-model oracle: Δ(axa) = det(a)²Δ(x)
        let am = a.to_matrix().unwrap();
        let xm = x.to_matrix().unwrap();
        let axa = Element::from_matrix(s2, &am.matmul(&xm).matmul(&am)).unwrap();
        assert!((determinant(&axa) - 4.0 * determinant(&x)).abs() < 1e-12);

        let l4 = AlgebraDescriptor::lorentz(4).unwrap();
        for _ in 0..20 {
            let a = random_interior(l4, &mut rng);
            let x = random_element(l4, &mut rng);
            assert!(check_equivariance(&a, &x).unwrap().rel_err < 1e-9);
        }
        let outside = Element::lorentz(l4, 1.0, &[2.0, 0.0, 0.0]).unwrap();
        assert!(check_equivariance(&outside, &x).is_err());
    }
}
