use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// Linear endomorphism of an `n`-dimensional coordinate space.
///
/// Column `j` of the matrix is the image of `e_j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EndoMap(Matrix);

impl EndoMap {
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), got: m.cols() });
        }
        Ok(EndoMap(m))
    }

    pub fn identity(n: usize) -> Self {
        EndoMap(Matrix::identity(n))
    }

    pub fn zero(n: usize) -> Self {
        EndoMap(Matrix::zeros(n, n))
    }

    /// Map sending `e_j` to `images[j]`.
    pub fn from_images(images: &[Vector]) -> Result<Self> {
        let n = images.len();
        if let Some(bad) = images.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: bad.len() });
        }
        Ok(EndoMap(Matrix::from_cols(images, n)))
    }

    /// Row-major integer entries.
    pub fn from_i64(n: usize, entries: &[i64]) -> Self {
        EndoMap(Matrix::from_i64(n, n, entries))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        self.0.get(r, c)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        self.0.apply(v)
    }

    pub fn image_of_basis(&self, j: usize) -> Vector {
        self.0.col(j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &EndoMap) -> EndoMap {
        EndoMap(self.0.mul(&other.0))
    }

    pub fn square(&self) -> EndoMap {
        self.compose(self)
    }

    pub fn add(&self, other: &EndoMap) -> EndoMap {
        EndoMap(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &EndoMap) -> EndoMap {
        EndoMap(self.0.sub(&other.0))
    }

    pub fn scale(&self, c: &Scalar) -> EndoMap {
        EndoMap(self.0.scale(c))
    }

    pub fn neg(&self) -> EndoMap {
        self.scale(&-Scalar::one())
    }

    /// `[self, other] = self∘other − other∘self`.
    pub fn commutator(&self, other: &EndoMap) -> EndoMap {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn inverse(&self) -> Result<EndoMap> {
        self.0.inverse().map(EndoMap).ok_or(Error::Singular)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.0.is_real()
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn trace(&self) -> Scalar {
        self.0.trace()
    }

    /// `J² = −Id`, exactly.
    pub fn squares_to_minus_identity(&self) -> bool {
        let sq = self.square();
        let n = self.dim();
        (0..n).all(|r| {
            (0..n).all(|c| {
                let x = sq.get(r, c);
                if r == c {
                    (x + &Scalar::one()).is_zero()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    pub fn is_nilpotent(&self) -> bool {
        let n = self.dim();
        self.0.pow(n as u32).is_zero()
    }

    pub fn conj(&self) -> EndoMap {
        EndoMap(self.0.conj())
    }

    /// Entries as floats, row-major; imaginary parts are dropped.
    pub fn to_f64(&self) -> Vec<f64> {
        self.0.entries().iter().map(Scalar::to_f64).collect()
    }

    /// Entries as display strings, row by row.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.dim()).map(|r| self.0.row(r).iter().map(ToString::to_string).collect()).collect()
    }

    /// Block-diagonal rotation `e_{2k} ↦ e_{2k+1}, e_{2k+1} ↦ −e_{2k}`.
    pub fn standard_rotation(n: usize) -> Result<EndoMap> {
        if n % 2 != 0 {
            return Err(Error::OddDimension(n));
        }
        let mut m = Matrix::zeros(n, n);
        for k in (0..n).step_by(2) {
            m.set(k + 1, k, Scalar::one());
            m.set(k, k + 1, -Scalar::one());
        }
        Ok(EndoMap(m))
    }
}

impl Serialize for EndoMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(serializer)
    }
}

impl fmt::Debug for EndoMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_squares_to_minus_identity() {
        let j = EndoMap::standard_rotation(4).unwrap();
        assert!(j.squares_to_minus_identity());
        assert_eq!(j.inverse().unwrap(), j.neg());
        assert!(EndoMap::standard_rotation(3).is_err());
    }

    #[test]
    fn from_images_puts_images_in_columns() {
        let e = |i: usize| crate::linalg::unit_vector(2, i);
        let j = EndoMap::from_images(&[e(1), e(0).iter().map(|x| -x).collect()]).unwrap();
        assert_eq!(j.apply(&e(0)), e(1));
        assert!(j.squares_to_minus_identity());
    }
}
