//! Hermitian-matrix model for the four matrix families.
//!
//! Coordinates of an `m × m` hermitian matrix over a division algebra of
//! real dimension `k` are laid out as
//!
//! * `m` diagonal entries (real), then
//! * one block of `k` reals per strictly upper pair `(i, j)`, pairs in
//!   row-major order `(0,1), (0,2), …, (1,2), …`, each block equal to
//!   `√2 · x_ij`.
//!
//! With this scaling `(x|y) = Re tr(x ∘ y)` is the plain dot product of
//! coordinates.

use std::f64::consts::SQRT_2;

use crate::scalars::{DivisionKind, DivisionScalar};

/// Dense square matrix over a division algebra (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    pub size: usize,
    pub kind: DivisionKind,
    pub entries: Vec<DivisionScalar>,
}

impl SquareMatrix {
    pub fn zeros(kind: DivisionKind, size: usize) -> Self {
        Self {
            size,
            kind,
            entries: vec![DivisionScalar::zero(kind); size * size],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> DivisionScalar {
        self.entries[i * self.size + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: DivisionScalar) {
        self.entries[i * self.size + j] = v;
    }

    /// Ordinary matrix product, entry products taken left to right.
    pub fn matmul(&self, other: &Self) -> Self {
        let m = self.size;
        let mut out = Self::zeros(self.kind, m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = DivisionScalar::zero(self.kind);
                for l in 0..m {
                    acc = acc + self.get(i, l) * other.get(l, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = self.size;
        let mut out = Self::zeros(self.kind, m);
        for i in 0..m {
            for j in 0..m {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }
}

/// Offset of the block for pair `i < j`.
pub(crate) fn pair_offset(m: usize, kind: DivisionKind, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < m);
    // pairs before row i: sum_{a<i} (m-1-a)
    let before = i * (2 * m - i - 1) / 2;
    m + (before + (j - i - 1)) * kind.dim()
}

pub(crate) fn coords_to_matrix(m: usize, kind: DivisionKind, coords: &[f64]) -> SquareMatrix {
    let k = kind.dim();
    let mut out = SquareMatrix::zeros(kind, m);
    for (i, &c) in coords.iter().take(m).enumerate() {
        out.set(i, i, DivisionScalar::real(kind, c));
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let off = pair_offset(m, kind, i, j);
            let mut buf = [0.0; 8];
            for (b, c) in buf.iter_mut().zip(&coords[off..off + k]) {
                *b = c / SQRT_2;
            }
            let x =
                DivisionScalar::from_coeffs(kind, &buf[..k]).expect("block length matches kind");
            out.set(i, j, x);
            out.set(j, i, x.conj());
        }
    }
    out
}

/// Reads the hermitian part of `mat` back into coordinates: real parts of
/// the diagonal and the upper triangle. Only meaningful when `mat` is
/// hermitian up to rounding.
pub(crate) fn matrix_to_coords(mat: &SquareMatrix) -> Vec<f64> {
    let m = mat.size;
    let kind = mat.kind;
    let k = kind.dim();
    let n = m + k * m * (m - 1) / 2;
    let mut coords = vec![0.0; n];
    for (i, c) in coords.iter_mut().enumerate().take(m) {
        *c = mat.get(i, i).real_part();
    }
    for i in 0..m {
        for j in (i + 1)..m {
            let off = pair_offset(m, kind, i, j);
            for (c, v) in coords[off..off + k].iter_mut().zip(mat.get(i, j).coeffs()) {
                *c = v * SQRT_2;
            }
        }
    }
    coords
}

/// `(XY + YX) / 2` in the matrix model.
pub(crate) fn jordan_product(m: usize, kind: DivisionKind, x: &[f64], y: &[f64]) -> Vec<f64> {
    let xm = coords_to_matrix(m, kind, x);
    let ym = coords_to_matrix(m, kind, y);
    let xy = xm.matmul(&ym);
    let yx = ym.matmul(&xm);
    let mut sum = SquareMatrix::zeros(kind, m);
    for (s, (a, b)) in sum
        .entries
        .iter_mut()
        .zip(xy.entries.iter().zip(&yx.entries))
    {
        *s = (*a + *b).scale(0.5);
    }
    matrix_to_coords(&sum)
}
