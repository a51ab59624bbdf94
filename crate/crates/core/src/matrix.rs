//! Small fixed-size complex matrices for 2×2 coin/gate and 4×4 register ops.

use core::ops::{Index, IndexMut, Mul};

use crate::math::{cabs, C64};

/// Dense `N×N` complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareMatrix<const N: usize> {
    pub entries: [[C64; N]; N],
}

pub type Mat2 = SquareMatrix<2>;
pub type Mat4 = SquareMatrix<4>;

impl<const N: usize> SquareMatrix<N> {
    pub const fn new(entries: [[C64; N]; N]) -> Self {
        SquareMatrix { entries }
    }

    pub fn zeros() -> Self {
        SquareMatrix { entries: [[C64::new(0.0, 0.0); N]; N] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.entries[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Build from real entries.
    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m.entries[i][j] = C64::new(x, 0.0);
            }
        }
        m
    }

    /// Build from column vectors.
    pub fn from_columns(cols: [[C64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for (j, col) in cols.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                m.entries[i][j] = z;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> [C64; N] {
        let mut c = [C64::new(0.0, 0.0); N];
        for (i, z) in c.iter_mut().enumerate() {
            *z = self.entries[i][j];
        }
        c
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[j][i] = self.entries[i][j].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        m.entries.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn apply(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [C64::new(0.0, 0.0); N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.entries[i].iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().flatten().zip(other.entries.iter().flatten()).map(|(a, b)| cabs(a - b)).fold(0.0, f64::max)
    }

    /// Entrywise distance of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    /// Exactly one unit entry per row and column, zeros elsewhere.
    pub fn is_permutation(&self) -> bool {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        (0..N).all(|i| {
            let row_ones = (0..N).filter(|&j| self.entries[i][j] == one).count();
            let col_ones = (0..N).filter(|&j| self.entries[j][i] == one).count();
            let rest_zero = (0..N).all(|j| self.entries[i][j] == one || self.entries[i][j] == zero);
            row_ones == 1 && col_ones == 1 && rest_zero
        })
    }
}

impl Mat2 {
    pub fn determinant(&self) -> C64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }
}

impl<const N: usize> Mul for SquareMatrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = (0..N).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum();
            }
        }
        m
    }
}

impl<const N: usize> Index<(usize, usize)> for SquareMatrix<N> {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for SquareMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i][j]
    }
}

/// Kronecker product of two 2×2 matrices, `a ⊗ b`.
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut m = Mat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m.entries[2 * i + k][2 * j + l] = a.entries[i][j] * b.entries[k][l];
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_ordering() {
        let x = Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]);
        let xi = kron2(&x, &Mat2::identity());
        // |0,a> <-> |1,a>
        assert_eq!(xi[(2, 0)], C64::new(1.0, 0.0));
        assert_eq!(xi[(3, 1)], C64::new(1.0, 0.0));
        assert!(xi.is_permutation());
    }

    #[test]
    fn columns_round_trip() {
        let m = Mat2::new([[C64::new(1.0, 2.0), C64::new(3.0, 0.0)], [C64::new(0.0, -1.0), C64::new(5.0, 5.0)]]);
        assert_eq!(Mat2::from_columns([m.column(0), m.column(1)]), m);
        assert_eq!(m.adjoint().adjoint(), m);
    }
}
