//! Simple Euclidean Jordan algebras.
//!
//! Five families are supported: real symmetric, complex hermitian and
//! quaternionic hermitian matrices of any size, the 27-dimensional
//! octonionic hermitian 3×3 matrices, and the Lorentz (spin factor)
//! algebras `ℝ × ℝ^{n−1}`.
//!
//! Every element is stored as `n` reals in a basis that is orthonormal for
//! the trace form `(x|y) = tr(x ∘ y)`. For matrix families the diagonal
//! carries the matrix diagonal and off-diagonal components are scaled by
//! `√2`; for the Lorentz family every natural coordinate `(x₀, x̄)` is
//! scaled by `√2`.

pub mod hermitian;
pub mod peirce;
pub mod spectral;

use std::f64::consts::SQRT_2;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::DivisionKind;

pub use peirce::{peirce_multiplicities, peirce_project};
pub use spectral::{
    char_poly, char_poly_roots, determinant, eigenvalues, spectral_frame, SpectralDecomposition,
};

/// The five families of simple Euclidean Jordan algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    SymReal,
    HermComplex,
    HermQuaternion,
    HermOctonion,
    Lorentz,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::SymReal,
        FamilyKind::HermComplex,
        FamilyKind::HermQuaternion,
        FamilyKind::HermOctonion,
        FamilyKind::Lorentz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::SymReal => "sym-real",
            FamilyKind::HermComplex => "herm-complex",
            FamilyKind::HermQuaternion => "herm-quaternion",
            FamilyKind::HermOctonion => "herm-octonion",
            FamilyKind::Lorentz => "lorentz",
        }
    }

    /// Scalar algebra of a matrix family; `None` for Lorentz.
    pub fn scalars(self) -> Option<DivisionKind> {
        match self {
            FamilyKind::SymReal => Some(DivisionKind::Real),
            FamilyKind::HermComplex => Some(DivisionKind::Complex),
            FamilyKind::HermQuaternion => Some(DivisionKind::Quaternion),
            FamilyKind::HermOctonion => Some(DivisionKind::Octonion),
            FamilyKind::Lorentz => None,
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown algebra family {s:?} (expected sym-real, herm-complex, herm-quaternion, herm-octonion or lorentz)"
                ))
            })
    }
}

/// Structure constants of one simple Euclidean Jordan algebra.
///
/// `size` is the matrix size for matrix families and the total dimension
/// for Lorentz. Rank `r`, dimension `n` and Peirce parameter `d` always
/// satisfy `n = r + d·r(r−1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraDescriptor {
    family: FamilyKind,
    size: usize,
    rank: usize,
    dim: usize,
    peirce_d: usize,
}

impl AlgebraDescriptor {
    pub fn new(family: FamilyKind, size: usize) -> Result<Self> {
        let bad = |why: &str| {
            Err(Error::Usage(format!(
                "invalid size {size} for {}: {why}",
                family.name()
            )))
        };
        let (rank, dim, peirce_d) = match family {
            FamilyKind::SymReal if size >= 1 => (size, size * (size + 1) / 2, 1),
            FamilyKind::HermComplex if size >= 1 => (size, size * size, 2),
            FamilyKind::HermQuaternion if size >= 1 => (size, size * (2 * size - 1), 4),
            FamilyKind::HermOctonion if size == 3 => (3, 27, 8),
            FamilyKind::Lorentz if size >= 3 => (2, size, size - 2),
            FamilyKind::HermOctonion => {
                return bad("octonionic hermitian matrices exist only for size 3")
            }
            FamilyKind::Lorentz => return bad("need n >= 3"),
            _ => return bad("need size >= 1"),
        };
        Ok(Self {
            family,
            size,
            rank,
            dim,
            peirce_d,
        })
    }

    pub fn sym_real(m: usize) -> Result<Self> {
        Self::new(FamilyKind::SymReal, m)
    }

    pub fn herm_complex(m: usize) -> Result<Self> {
        Self::new(FamilyKind::HermComplex, m)
    }

    pub fn herm_quaternion(m: usize) -> Result<Self> {
        Self::new(FamilyKind::HermQuaternion, m)
    }

    pub fn herm_octonion() -> Self {
        Self::new(FamilyKind::HermOctonion, 3).expect("size 3 is valid")
    }

    pub fn lorentz(n: usize) -> Result<Self> {
        Self::new(FamilyKind::Lorentz, n)
    }

    pub fn family(&self) -> FamilyKind {
        self.family
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Rank `r`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Real dimension `n`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Peirce parameter `d`.
    pub fn peirce_d(&self) -> usize {
        self.peirce_d
    }

    pub fn half_d(&self) -> f64 {
        self.peirce_d as f64 / 2.0
    }

    /// `(r−1)·d/2`, the edge of the continuous part of the Wallach set.
    pub fn threshold(&self) -> f64 {
        (self.rank as f64 - 1.0) * self.half_d()
    }

    pub fn n_over_r(&self) -> f64 {
        self.dim as f64 / self.rank as f64
    }
}

impl fmt::Display for AlgebraDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            FamilyKind::HermOctonion => f.write_str(self.family.name()),
            _ => write!(f, "{}:{}", self.family.name(), self.size),
        }
    }
}

/// Parses `sym-real:3`, `lorentz:4`, `herm-octonion` (size optional only
/// for the octonionic family).
impl FromStr for AlgebraDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, size) = match s.split_once(':') {
            Some((name, size)) => {
                let size = size
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Usage(format!("bad algebra size in {s:?}")))?;
                (name.trim(), Some(size))
            }
            None => (s, None),
        };
        let family: FamilyKind = name.parse()?;
        match (family, size) {
            (FamilyKind::HermOctonion, None) => Ok(Self::herm_octonion()),
            (_, Some(size)) => Self::new(family, size),
            (_, None) => Err(Error::Usage(format!(
                "algebra {s:?} needs a size, e.g. {name}:2"
            ))),
        }
    }
}

impl Serialize for AlgebraDescriptor {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AlgebraDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the algebra in orthonormal coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    algebra: AlgebraDescriptor,
    coords: Vec<f64>,
}

impl Element {
    pub fn new(algebra: AlgebraDescriptor, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::Usage(format!(
                "{algebra} has dimension {}, got {} coordinates",
                algebra.dim(),
                coords.len()
            )));
        }
        Ok(Self { algebra, coords })
    }

    pub(crate) fn from_vec_unchecked(algebra: AlgebraDescriptor, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), algebra.dim());
        Self { algebra, coords }
    }

    pub fn zero(algebra: AlgebraDescriptor) -> Self {
        Self::from_vec_unchecked(algebra, vec![0.0; algebra.dim()])
    }

    /// The `k`-th orthonormal basis vector.
    pub fn basis(algebra: AlgebraDescriptor, k: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coords[k] = 1.0;
        e
    }

    /// The unit element `e`.
    pub fn identity(algebra: AlgebraDescriptor) -> Self {
        let mut e = Self::zero(algebra);
        match algebra.family() {
            FamilyKind::Lorentz => e.coords[0] = SQRT_2,
            _ => e.coords[..algebra.size()].fill(1.0),
        }
        e
    }

    /// Diagonal matrix (matrix families) with the given real diagonal.
    pub fn from_diagonal(algebra: AlgebraDescriptor, diag: &[f64]) -> Result<Self> {
        if algebra.family() == FamilyKind::Lorentz {
            return Err(Error::Usage(
                "diagonal construction needs a matrix family".into(),
            ));
        }
        if diag.len() != algebra.size() {
            return Err(Error::Usage(format!(
                "expected {} diagonal entries",
                algebra.size()
            )));
        }
        let mut e = Self::zero(algebra);
        e.coords[..diag.len()].copy_from_slice(diag);
        Ok(e)
    }

    /// Lorentz element from its natural coordinates `(x₀, x̄)`.
    pub fn lorentz(algebra: AlgebraDescriptor, x0: f64, xbar: &[f64]) -> Result<Self> {
        if algebra.family() != FamilyKind::Lorentz || xbar.len() + 1 != algebra.dim() {
            return Err(Error::Usage(format!(
                "lorentz coordinates need a lorentz algebra of dimension {}",
                xbar.len() + 1
            )));
        }
        let coords = std::iter::once(x0)
            .chain(xbar.iter().copied())
            .map(|v| v * SQRT_2)
            .collect();
        Ok(Self::from_vec_unchecked(algebra, coords))
    }

    /// Natural Lorentz coordinates `(x₀, x̄)`.
    pub fn lorentz_natural(&self) -> Option<(f64, Vec<f64>)> {
        (self.algebra.family() == FamilyKind::Lorentz).then(|| {
            let x0 = self.coords[0] / SQRT_2;
            (x0, self.coords[1..].iter().map(|v| v / SQRT_2).collect())
        })
    }

    /// Element represented by a hermitian matrix over the family's scalars.
    pub fn from_matrix(algebra: AlgebraDescriptor, mat: &hermitian::SquareMatrix) -> Result<Self> {
        match algebra.family().scalars() {
            Some(kind) if kind == mat.kind && mat.size == algebra.size() => Ok(
                Self::from_vec_unchecked(algebra, hermitian::matrix_to_coords(mat)),
            ),
            _ => Err(Error::Usage(format!(
                "matrix does not match algebra {algebra}"
            ))),
        }
    }

    /// Hermitian matrix of a matrix-family element.
    pub fn to_matrix(&self) -> Option<hermitian::SquareMatrix> {
        self.algebra
            .family()
            .scalars()
            .map(|kind| hermitian::coords_to_matrix(self.algebra.size(), kind, &self.coords))
    }

    pub fn algebra(&self) -> AlgebraDescriptor {
        self.algebra
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Euclidean norm `√(x|x)`.
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_vec_unchecked(self.algebra, self.coords.iter().map(|c| c * s).collect())
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &Self) -> Self {
        assert_same(self, other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + s * b)
            .collect();
        Self::from_vec_unchecked(self.algebra, coords)
    }

    /// Jordan product. Panics on algebra mismatch; see [`jordan_mul`] for
    /// the checked form.
    pub fn circ(&self, other: &Self) -> Self {
        assert_same(self, other);
        let a = self.algebra;
        let coords = match a.family().scalars() {
            Some(kind) => hermitian::jordan_product(a.size(), kind, &self.coords, &other.coords),
            None => lorentz_product(&self.coords, &other.coords),
        };
        Self::from_vec_unchecked(a, coords)
    }

    /// `x ∘ x`.
    pub fn square(&self) -> Self {
        self.circ(self)
    }

    /// Jordan power `x^k`, with `x⁰ = e`.
    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Element::identity(self.algebra);
        for _ in 0..k {
            acc = self.circ(&acc);
        }
        acc
    }

    /// Jordan trace.
    pub fn trace(&self) -> f64 {
        match self.algebra.family() {
            FamilyKind::Lorentz => SQRT_2 * self.coords[0],
            _ => self.coords[..self.algebra.size()].iter().sum(),
        }
    }

    /// Trace inner product `(x|y)`, equal to the coordinate dot product.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_same(self, other);
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Quadratic representation `P(self)x = 2a(ax) − a²x`.
    pub fn quad_rep(&self, x: &Self) -> Self {
        let ax = self.circ(x);
        let a_ax = self.circ(&ax);
        let a2x = self.square().circ(x);
        a_ax.scale(2.0).axpy(-1.0, &a2x)
    }

    pub fn max_abs_coord(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

fn assert_same(x: &Element, y: &Element) {
    assert!(
        x.algebra == y.algebra,
        "Jordan algebra mismatch: {} vs {}",
        x.algebra,
        y.algebra
    );
}

fn check_same(x: &Element, y: &Element) -> Result<()> {
    if x.algebra != y.algebra {
        return Err(Error::AlgebraMismatch {
            left: x.algebra.to_string(),
            right: y.algebra.to_string(),
        });
    }
    Ok(())
}

/// `(x∘y) = (x·y, x₀ȳ + y₀x̄)` in natural coordinates, rewritten for the
/// `√2`-scaled orthonormal coordinates.
fn lorentz_product(u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(u.len());
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    out.push(dot / SQRT_2);
    for i in 1..u.len() {
        out.push((u[0] * v[i] + v[0] * u[i]) / SQRT_2);
    }
    out
}

pub fn jordan_mul(x: &Element, y: &Element) -> Result<Element> {
    check_same(x, y)?;
    Ok(x.circ(y))
}

pub fn inner(x: &Element, y: &Element) -> Result<f64> {
    check_same(x, y)?;
    Ok(x.inner(y))
}

pub fn trace(x: &Element) -> f64 {
    x.trace()
}

/// `P(a)x`.
pub fn quadratic_rep_apply(a: &Element, x: &Element) -> Result<Element> {
    check_same(a, x)?;
    Ok(a.quad_rep(x))
}

/// Matrix of a linear map on `V` in the orthonormal coordinate basis;
/// column `k` is the image of basis vector `k`.
pub fn operator_matrix<F>(algebra: AlgebraDescriptor, f: F) -> DMatrix<f64>
where
    F: Fn(&Element) -> Element,
{
    let n = algebra.dim();
    let mut mat = DMatrix::zeros(n, n);
    for k in 0..n {
        let image = f(&Element::basis(algebra, k));
        for (i, v) in image.coords().iter().enumerate() {
            mat[(i, k)] = *v;
        }
    }
    mat
}

/// The multiplication operator `L(x): y ↦ x ∘ y`, symmetrized against
/// rounding (it is self-adjoint for the trace form).
pub fn multiplication_operator(x: &Element) -> DMatrix<f64> {
    let l = operator_matrix(x.algebra(), |y| x.circ(y));
    (&l + l.transpose()) * 0.5
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Mul<&Element> for f64 {
    type Output = Element;

    fn mul(self, rhs: &Element) -> Element {
        rhs.scale(self)
    }
}


#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn descriptors_follow_the_classification() {
        let cases = [
            (AlgebraDescriptor::sym_real(2).unwrap(), (2, 3, 1)),
            (AlgebraDescriptor::herm_complex(2).unwrap(), (2, 4, 2)),
            (AlgebraDescriptor::lorentz(4).unwrap(), (2, 4, 2)),
            (AlgebraDescriptor::herm_quaternion(3).unwrap(), (3, 15, 4)),
            (AlgebraDescriptor::herm_octonion(), (3, 27, 8)),
        ];
        for (a, (r, n, d)) in cases {
            assert_eq!((a.rank(), a.dim(), a.peirce_d()), (r, n, d), "{a}");
        }
    }

    #[test]
    fn dimension_audit_holds_for_every_constructible_descriptor() {
        let mut all = vec![AlgebraDescriptor::herm_octonion()];
        for m in 1..=8 {
            all.push(AlgebraDescriptor::sym_real(m).unwrap());
            all.push(AlgebraDescriptor::herm_complex(m).unwrap());
            all.push(AlgebraDescriptor::herm_quaternion(m).unwrap());
        }
        for n in 3..=20 {
            all.push(AlgebraDescriptor::lorentz(n).unwrap());
        }
        for a in all {
            let (r, n, d) = (a.rank(), a.dim(), a.peirce_d());
            assert_eq!(2 * n, 2 * r + d * r * (r - 1), "{a}");
        }
    }

    #[test]
    fn invalid_sizes_are_usage_errors() {
        assert!(matches!(
            AlgebraDescriptor::sym_real(0),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            AlgebraDescriptor::lorentz(2),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            AlgebraDescriptor::new(FamilyKind::HermOctonion, 2),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn descriptor_parses_and_prints() {
        for s in [
            "sym-real:3",
            "herm-complex:2",
            "herm-quaternion:2",
            "herm-octonion",
            "lorentz:5",
        ] {
            let a: AlgebraDescriptor = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert!("lorentz".parse::<AlgebraDescriptor>().is_err());
        assert!("spin:3".parse::<AlgebraDescriptor>().is_err());
    }

    #[test]
    fn identity_is_a_unit_with_trace_r() {
        let mut rng = rng(1);
        for a in all_families() {
            let e = Element::identity(a);
            let x = random_element(a, &mut rng);
            assert_close(&x.circ(&e), &x, 1e-14);
            assert!((e.trace() - a.rank() as f64).abs() < 1e-14);
            assert!((e.inner(&e) - a.rank() as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn lorentz_product_example() {
        let a = AlgebraDescriptor::lorentz(4).unwrap();
        let x = Element::lorentz(a, 1.0, &[1.0, 0.0, 0.0]).unwrap();
        let (x0, xbar) = x.square().lorentz_natural().unwrap();
        assert!((x0 - 2.0).abs() < 1e-14);
        assert!((xbar[0] - 2.0).abs() < 1e-14 && xbar[1] == 0.0 && xbar[2] == 0.0);
        // trace (x₀, x̄) = 2x₀
        let y = Element::lorentz(a, 0.7, &[0.3, -2.0, 1.0]).unwrap();
        assert!((y.trace() - 1.4).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_diagonal_idempotents_multiply_to_zero() {
        let a = AlgebraDescriptor::sym_real(2).unwrap();
        let p = Element::from_diagonal(a, &[1.0, 0.0]).unwrap();
        let q = Element::from_diagonal(a, &[0.0, 1.0]).unwrap();
        assert_eq!(p.circ(&q).max_abs_coord(), 0.0);
    }

    #[test]
    fn inner_is_trace_of_product() {
        let mut rng = rng(2);
        for a in all_families() {
            for _ in 0..5 {
                let x = random_element(a, &mut rng);
                let y = random_element(a, &mut rng);
                let lhs = x.inner(&y);
                let rhs = x.circ(&y).trace();
                assert!((lhs - rhs).abs() < 1e-12, "{a}: {lhs} vs {rhs}");
                assert!((x.inner(&x) - x.norm().powi(2)).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn jordan_identity_and_power_associativity((a, seed) in family_and_seed()) {
            let mut rng = rng(seed);
            let x = random_element(a, &mut rng);
            let y = random_element(a, &mut rng);
            let x2 = x.square();
            let jordan = (&x2.circ(&x.circ(&y)) - &x.circ(&x2.circ(&y))).max_abs_coord();
            prop_assert!(jordan <= 1e-10, "{a}: {jordan:e}");
            let power = (&x2.square() - &x.circ(&x.circ(&x.circ(&x)))).max_abs_coord();
            prop_assert!(power <= 1e-10, "{a}: {power:e}");
        }
    }

    #[test]
    fn sym_real_quadratic_rep_is_axa() {
        let mut rng = rng(4);
        let a = AlgebraDescriptor::sym_real(3).unwrap();
        for _ in 0..10 {
            let p = random_element(a, &mut rng);
            let x = random_element(a, &mut rng);
            let pm = p.to_matrix().unwrap();
            let xm = x.to_matrix().unwrap();
            let oracle = Element::from_matrix(a, &pm.matmul(&xm).matmul(&pm)).unwrap();
            assert_close(&p.quad_rep(&x), &oracle, 1e-13);
        }
        let e = Element::identity(a);
        let x = random_element(a, &mut rng);
        assert_close(&e.quad_rep(&x), &x, 1e-14);
    }

    #[test]
    fn quadratic_rep_is_self_adjoint() {
        let mut rng = rng(5);
        for alg in all_families() {
            let a = random_element(alg, &mut rng);
            let m = operator_matrix(alg, |x| a.quad_rep(x));
            assert!((&m - m.transpose()).amax() < 1e-12, "{alg}");
        }
    }

    #[test]
    fn mismatched_algebras_error() {
        let x = Element::identity(AlgebraDescriptor::sym_real(2).unwrap());
        let y = Element::identity(AlgebraDescriptor::lorentz(3).unwrap());
        assert!(matches!(
            jordan_mul(&x, &y),
            Err(Error::AlgebraMismatch { .. })
        ));
        assert!(inner(&x, &y).is_err());
        assert!(quadratic_rep_apply(&x, &y).is_err());
        assert!(Element::new(x.algebra(), vec![1.0]).is_err());
    }
}
