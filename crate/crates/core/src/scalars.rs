//! The four real normed division algebras ℝ, ℂ, ℍ, 𝕆.
//!
//! Elements are stored as up to eight reals in the Cayley–Dickson basis
//! `1, e₁, …, e₇`. Products follow the doubling rule
//!
//! ```text
//! (a, b)(c, d) = (ac − d̄b, da + bc̄)
//! ```
//!
//! applied recursively to halves, which fixes the octonion table (and
//! gives `i·j = k` for the quaternions).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which division algebra a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DivisionKind {
    Real,
    Complex,
    Quaternion,
    Octonion,
}

impl DivisionKind {
    /// Real dimension: 1, 2, 4 or 8.
    pub const fn dim(self) -> usize {
        match self {
            DivisionKind::Real => 1,
            DivisionKind::Complex => 2,
            DivisionKind::Quaternion => 4,
            DivisionKind::Octonion => 8,
        }
    }

    pub const fn is_associative(self) -> bool {
        !matches!(self, DivisionKind::Octonion)
    }
}

impl fmt::Display for DivisionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DivisionKind::Real => "R",
            DivisionKind::Complex => "C",
            DivisionKind::Quaternion => "H",
            DivisionKind::Octonion => "O",
        };
        f.write_str(s)
    }
}

/// A scalar of ℝ, ℂ, ℍ or 𝕆. Coefficients past `kind.dim()` are always zero.
#[derive(Clone, Copy, PartialEq)]
pub struct DivisionScalar {
    kind: DivisionKind,
    coeffs: [f64; 8],
}

impl DivisionScalar {
    pub fn zero(kind: DivisionKind) -> Self {
        Self {
            kind,
            coeffs: [0.0; 8],
        }
    }

    pub fn one(kind: DivisionKind) -> Self {
        Self::real(kind, 1.0)
    }

    /// The real number `value` embedded in `kind`.
    pub fn real(kind: DivisionKind, value: f64) -> Self {
        let mut s = Self::zero(kind);
        s.coeffs[0] = value;
        s
    }

    /// The basis unit `e_index` (index 0 is the real unit).
    ///
    /// # Panics
    /// If `index >= kind.dim()`.
    pub fn unit(kind: DivisionKind, index: usize) -> Self {
        assert!(
            index < kind.dim(),
            "basis index {index} out of range for {kind}"
        );
        let mut s = Self::zero(kind);
        s.coeffs[index] = 1.0;
        s
    }

    /// Builds a scalar from exactly `kind.dim()` coefficients.
    pub fn from_coeffs(kind: DivisionKind, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != kind.dim() {
            return Err(Error::Usage(format!(
                "{kind} scalar needs {} coefficients, got {}",
                kind.dim(),
                coeffs.len()
            )));
        }
        let mut s = Self::zero(kind);
        s.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(s)
    }

    pub fn kind(&self) -> DivisionKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..self.kind.dim()]
    }

    pub fn real_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Negates every non-real coefficient.
    pub fn conj(&self) -> Self {
        let mut out = *self;
        for c in &mut out.coeffs[1..self.kind.dim()] {
            *c = -*c;
        }
        out
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for c in &mut out.coeffs {
            *c *= s;
        }
        out
    }

    /// Product with a tag check. The `*` operator skips the check and is
    /// meant for code that already knows both operands share a kind.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::Usage(format!(
                "cannot multiply {} scalar by {} scalar",
                self.kind, other.kind
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.kind.dim();
        let mut out = Self::zero(self.kind);
        match d {
            1 => out.coeffs[0] = self.coeffs[0] * other.coeffs[0],
            _ => cd_mul(&self.coeffs[..d], &other.coeffs[..d], &mut out.coeffs[..d]),
        }
        out
    }

    /// The associator `(ab)c − a(bc)`; identically zero except for 𝕆.
    pub fn associator(a: &Self, b: &Self, c: &Self) -> Self {
        (*a * *b) * *c - *a * (*b * *c)
    }
}

/// Cayley–Dickson product on coefficient slices of length 2^k.
fn cd_mul(a: &[f64], b: &[f64], out: &mut [f64]) {
    let n = a.len();
    if n == 1 {
        out[0] = a[0] * b[0];
        return;
    }
    if n == 2 {
        out[0] = a[0] * b[0] - a[1] * b[1];
        out[1] = a[0] * b[1] + a[1] * b[0];
        return;
    }
    let h = n / 2;
    let (p, q) = a.split_at(h);
    let (r, s) = b.split_at(h);
    let conj = |x: &[f64]| {
        let mut c = [0.0; 4];
        c[..h].copy_from_slice(x);
        for v in &mut c[1..h] {
            *v = -*v;
        }
        c
    };
    let sc = conj(s);
    let rc = conj(r);
    let mut t1 = [0.0; 4];
    let mut t2 = [0.0; 4];
    // first half: p r − s̄ q
    cd_mul(p, r, &mut t1[..h]);
    cd_mul(&sc[..h], q, &mut t2[..h]);
    for i in 0..h {
        out[i] = t1[i] - t2[i];
    }
    // second half: s p + q r̄
    cd_mul(s, p, &mut t1[..h]);
    cd_mul(q, &rc[..h], &mut t2[..h]);
    for i in 0..h {
        out[h + i] = t1[i] + t2[i];
    }
}

impl Mul for DivisionScalar {
    type Output = DivisionScalar;

    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.kind, rhs.kind);
        self.mul_unchecked(&rhs)
    }
}

impl Add for DivisionScalar {
    type Output = DivisionScalar;

    fn add(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.kind, rhs.kind);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for DivisionScalar {
    type Output = DivisionScalar;

    fn sub(mut self, rhs: Self) -> Self {
        debug_assert_eq!(self.kind, rhs.kind);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for DivisionScalar {
    type Output = DivisionScalar;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl fmt::Debug for DivisionScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.kind, self.coeffs())
    }
}
