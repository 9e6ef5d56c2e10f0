//! Lie algebras given by structure constants.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::endo::EndoMap;
use crate::error::{Error, Result};
use crate::linalg::{axpy, is_zero_vector, unit_vector, zero_vector, Matrix, Subspace, Vector};
use crate::scalar::{Field, Scalar};

pub const MAX_DIM: usize = 32;

/// Finite-dimensional Lie algebra over `Q` or `Q(i)` stored as a dense
/// structure tensor: `structure(i, j)` is the coordinate vector of `[e_i, e_j]`.
///
/// Construction does not enforce the Lie axioms; use [`LieAlgebra::validate`].
#[derive(Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    field: Field,
    tensor: Vec<Vector>,
    labels: Vec<String>,
}

/// Violations found by [`LieAlgebra::validate`], with 1-based indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// `(i, j, k)` with `i <= j` and `C[i][j][k] + C[j][i][k] != 0`.
    pub antisymmetry: Vec<[usize; 3]>,
    /// `(i, j, k, l)` where the `e_l` coordinate of the Jacobi sum at `(e_i, e_j, e_k)` is nonzero.
    pub jacobi: Vec<[usize; 4]>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.antisymmetry.is_empty() && self.jacobi.is_empty()
    }
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim {}, {}", self.dim, self.field)?;
        for (i, j, v) in self.nonzero_brackets() {
            write!(f, ", [{},{}]=", self.labels[i], self.labels[j])?;
            let terms: Vec<String> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| format!("{c}·{}", self.labels[k]))
                .collect();
            write!(f, "{}", terms.join(" + "))?;
        }
        write!(f, ")")
    }
}

pub fn default_labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

impl LieAlgebra {
    /// Abelian algebra of dimension `n` (all brackets zero).
    pub fn abelian(n: usize, field: Field) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n));
        }
        Ok(LieAlgebra {
            dim: n,
            field,
            tensor: vec![zero_vector(n); n * n],
            labels: default_labels("e", n),
        })
    }

    /// Builds an algebra from `tensor[i][j] = [e_i, e_j]` without checking the Lie axioms.
    pub fn from_tensor(field: Field, tensor: Vec<Vec<Vector>>) -> Result<Self> {
        let n = tensor.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange(n));
        }
        let mut flat = Vec::with_capacity(n * n);
        for row in tensor {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            for v in row {
                if v.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: v.len() });
                }
                if field == Field::Q && !v.iter().all(Scalar::is_real) {
                    return Err(Error::WrongField(field));
                }
                flat.push(v);
            }
        }
        Ok(LieAlgebra { dim: n, field, tensor: flat, labels: default_labels("e", n) })
    }

    /// Sets `[e_i, e_j] = v` and `[e_j, e_i] = −v` (0-based indices).
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Vector) -> Result<()> {
        self.check_vector(&v)?;
        if i >= self.dim || j >= self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: i.max(j) + 1 });
        }
        let neg: Vector = v.iter().map(|x| -x).collect();
        self.tensor[j * self.dim + i] = neg;
        self.tensor[i * self.dim + j] = v;
        Ok(())
    }

    /// Sets only `[e_i, e_j] = v`, leaving `[e_j, e_i]` untouched.
    pub fn set_raw(&mut self, i: usize, j: usize, v: Vector) -> Result<()> {
        self.check_vector(&v)?;
        self.tensor[i * self.dim + j] = v;
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub(crate) fn with_field_unchecked(mut self, field: Field) -> Self {
        self.field = field;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[e_i, e_j]` (0-based).
    pub fn structure(&self, i: usize, j: usize) -> &Vector {
        &self.tensor[i * self.dim + j]
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.tensor[i * self.dim + j][k]
    }

    /// Pairs `i < j` with nonzero `[e_i, e_j]`.
    pub fn nonzero_brackets(&self) -> impl Iterator<Item = (usize, usize, &Vector)> + '_ {
        let n = self.dim;
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, self.structure(i, j)))
            .filter(|(_, _, v)| !is_zero_vector(v))
    }

    pub fn is_abelian(&self) -> bool {
        self.tensor.iter().all(|v| is_zero_vector(v))
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        unit_vector(self.dim, i)
    }

    pub fn check_vector(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        if self.field == Field::Q && !v.iter().all(Scalar::is_real) {
            return Err(Error::WrongField(Field::Q));
        }
        Ok(())
    }

    pub fn check_map(&self, m: &EndoMap) -> Result<()> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: m.dim() });
        }
        if self.field == Field::Q && !m.is_real() {
            return Err(Error::WrongField(Field::Q));
        }
        Ok(())
    }

    /// Bracket without field or length checks.
    pub(crate) fn bracket_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let n = self.dim;
        let mut out = zero_vector(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = &self.tensor[i * n + j];
                if is_zero_vector(c) {
                    continue;
                }
                axpy(&mut out, &(xi * yj), c);
            }
        }
        out
    }

    /// `[x, y] = Σ x_i y_j C[i][j]`.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    /// Checks antisymmetry and the Jacobi identity on all basis tuples.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let mut report = ValidationReport::default();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if !(self.constant(i, j, k) + self.constant(j, i, k)).is_zero() {
                        report.antisymmetry.push([i + 1, j + 1, k + 1]);
                    }
                }
            }
        }
        // [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut sum = zero_vector(n);
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.structure(a, b);
                        if is_zero_vector(inner) {
                            continue;
                        }
                        for (m, coef) in inner.iter().enumerate() {
                            if !coef.is_zero() {
                                axpy(&mut sum, coef, self.structure(m, c));
                            }
                        }
                    }
                    for (l, x) in sum.iter().enumerate() {
                        if !x.is_zero() {
                            report.jacobi.push([i + 1, j + 1, k + 1, l + 1]);
                        }
                    }
                }
            }
        }
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// `ad x`, the map `y ↦ [x, y]`.
    pub fn adjoint(&self, x: &[Scalar]) -> Result<EndoMap> {
        self.check_vector(x)?;
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| self.bracket_unchecked(x, &unit_vector(self.dim, j)))
            .collect();
        EndoMap::from_images(&cols)
    }

    /// `ad e_i`.
    pub fn adjoint_basis(&self, i: usize) -> EndoMap {
        let cols: Vec<Vector> = (0..self.dim).map(|j| self.structure(i, j).clone()).collect();
        EndoMap::from_images(&cols).expect("square by construction")
    }

    /// Structure constants in the basis `P e_1, …, P e_n`.
    pub fn change_basis(&self, p: &EndoMap) -> Result<LieAlgebra> {
        self.check_map(p)?;
        let inv = p.inverse()?;
        let n = self.dim;
        let images: Vec<Vector> = (0..n).map(|i| p.image_of_basis(i)).collect();
        let mut tensor = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let b = self.bracket_unchecked(&images[i], &images[j]);
                tensor.push(inv.apply(&b));
            }
        }
        Ok(LieAlgebra { dim: n, field: self.field, tensor, labels: self.labels.clone() })
    }

    /// Span of all `[s, t]`, `s ∈ a`, `t ∈ b`.
    pub fn bracket_subspaces(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vectors = Vec::new();
        for s in a.basis() {
            for t in b.basis() {
                let v = self.bracket_unchecked(s, t);
                if !is_zero_vector(&v) {
                    vectors.push(v);
                }
            }
        }
        Subspace::span(self.dim, vectors)
    }

    pub fn derived_algebra(&self) -> Subspace {
        let full = Subspace::full(self.dim);
        self.bracket_subspaces(&full, &full)
    }

    /// `{z : [e_i, z] = 0 for all i}`.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let rows: Vec<Vector> = (0..n)
            .flat_map(|i| {
                let ad = self.adjoint_basis(i);
                (0..n).map(move |r| ad.matrix().row(r).to_vec()).collect::<Vec<_>>()
            })
            .collect();
        Subspace::span(n, Matrix::from_rows(rows).kernel())
    }

    fn check_subspace(&self, s: &Subspace) -> Result<()> {
        if s.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: s.ambient_dim() });
        }
        Ok(())
    }

    /// `[S, S] ⊆ S`.
    pub fn is_subalgebra(&self, s: &Subspace) -> Result<bool> {
        self.check_subspace(s)?;
        Ok(s.contains_subspace(&self.bracket_subspaces(s, s)))
    }

    /// `[g, S] ⊆ S`.
    pub fn is_ideal(&self, s: &Subspace) -> Result<bool> {
        self.check_subspace(s)?;
        let full = Subspace::full(self.dim);
        Ok(s.contains_subspace(&self.bracket_subspaces(&full, s)))
    }

    /// The algebra induced on `span(basis)`, expressed in that basis.
    ///
    /// Fails with [`Error::NotSubalgebra`] if the span is not closed.
    pub fn subalgebra_structure(&self, basis: &[Vector]) -> Result<LieAlgebra> {
        for v in basis {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        let k = basis.len();
        let cols = Matrix::from_cols(basis, self.dim);
        if cols.rank() != k {
            return Err(Error::InvalidArgument("basis vectors are linearly dependent".into()));
        }
        let field = if basis.iter().flatten().all(Scalar::is_real) { self.field } else { Field::Qi };
        let mut tensor = vec![vec![zero_vector(k); k]; k];
        for i in 0..k {
            for j in 0..k {
                let b = self.bracket_unchecked(&basis[i], &basis[j]);
                tensor[i][j] = solve_in_basis(&cols, &b).ok_or(Error::NotSubalgebra)?;
            }
        }
        LieAlgebra::from_tensor(field, tensor)
    }
}

/// Coordinates `c` with `cols · c = v`, if any.
pub(crate) fn solve_in_basis(cols: &Matrix, v: &[Scalar]) -> Option<Vector> {
    let k = cols.cols();
    let mut aug_cols: Vec<Vector> = (0..k).map(|c| cols.col(c)).collect();
    aug_cols.push(v.to_vec());
    let aug = Matrix::from_cols(&aug_cols, cols.rows());
    let (r, pivots) = aug.rref();
    if pivots.contains(&k) {
        return None;
    }
    let mut out = zero_vector(k);
    for (row, &p) in pivots.iter().enumerate() {
        out[p] = r.get(row, k).clone();
    }
    Some(out)
}

/// Block sum `a ⊕ b`; the basis of `b` follows the basis of `a`.
pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Result<LieAlgebra> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let n = a.dim + b.dim;
    if n > MAX_DIM {
        return Err(Error::DimensionOutOfRange(n));
    }
    let mut tensor = vec![zero_vector(n); n * n];
    for i in 0..a.dim {
        for j in 0..a.dim {
            let v = &mut tensor[i * n + j];
            v[..a.dim].clone_from_slice(a.structure(i, j));
        }
    }
    for i in 0..b.dim {
        for j in 0..b.dim {
            let v = &mut tensor[(a.dim + i) * n + a.dim + j];
            v[a.dim..].clone_from_slice(b.structure(i, j));
        }
    }
    let mut labels: Vec<String> = a.labels.iter().chain(&b.labels).cloned().collect();
    let mut seen = std::collections::HashSet::new();
    if !labels.iter().all(|l| seen.insert(l.clone())) {
        labels = default_labels("X", n);
    }
    Ok(LieAlgebra { dim: n, field: a.field, tensor, labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn h3() -> LieAlgebra {
        let mut g = LieAlgebra::abelian(3, Field::Q).unwrap();
        g.set_bracket(0, 1, v(&[0, 0, 1])).unwrap();
        g
    }

    /// `[X1, Xi] = X(i+1)`.
    fn model_filiform(n: usize) -> LieAlgebra {
        let mut g = LieAlgebra::abelian(n, Field::Q).unwrap();
        for i in 1..n - 1 {
            g.set_bracket(0, i, unit_vector(n, i + 1)).unwrap();
        }
        g
    }

    #[test]
    fn heisenberg_bracket() {
        let g = h3();
        assert_eq!(g.bracket(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap(), v(&[0, 0, 1]));
        let x = v(&[2, -1, 5]);
        assert!(is_zero_vector(&g.bracket(&x, &x).unwrap()));
    }

    #[test]
    fn bracket_expands_bilinearly() {
        // Brute-force contraction: [X1, X2 + X3] = C[0][1] + C[0][2].
        let g = model_filiform(4);
        let y = v(&[0, 1, 1, 0]);
        let mut oracle = zero_vector(4);
        for j in 0..4 {
            for k in 0..4 {
                oracle[k] += &(&y[j] * g.constant(0, j, k));
            }
        }
        assert_eq!(oracle, v(&[0, 0, 1, 1]));
        assert_eq!(g.bracket(&v(&[1, 0, 0, 0]), &y).unwrap(), oracle);
    }

    #[test]
    fn bracket_rejects_bad_input() {
        let g = h3();
        assert!(matches!(g.bracket(&v(&[1, 0]), &v(&[1, 0, 0])), Err(Error::DimensionMismatch { .. })));
        let complex = vec![Scalar::i(), Scalar::zero(), Scalar::zero()];
        assert_eq!(g.bracket(&complex, &v(&[1, 0, 0])), Err(Error::WrongField(Field::Q)));
    }

    #[test]
    fn validate_reports_antisymmetry_violation() {
        let mut g = LieAlgebra::abelian(3, Field::Q).unwrap();
        g.set_raw(0, 1, v(&[0, 0, 1])).unwrap();
        g.set_raw(1, 0, v(&[0, 0, 1])).unwrap();
        let report = g.validate();
        assert!(report.antisymmetry.contains(&[1, 2, 3]));
    }

    #[test]
    fn validate_reports_jacobi_violation() {
        // [e1,e2]=e3, [e1,e3]=e1: the cyclic sum at (e1,e2,e3) is -e3.
        let mut g = LieAlgebra::abelian(3, Field::Q).unwrap();
        g.set_bracket(0, 1, v(&[0, 0, 1])).unwrap();
        g.set_bracket(0, 2, v(&[1, 0, 0])).unwrap();
        let report = g.validate();
        assert!(report.antisymmetry.is_empty());
        assert!(report.jacobi.contains(&[1, 2, 3, 3]));
    }

    #[test]
    fn two_dimensional_abelian_ideal_extension_is_valid() {
        // [e1,e2]=e1, [e2,e3]=e3 is a semidirect product, so Jacobi holds.
        let mut g = LieAlgebra::abelian(3, Field::Q).unwrap();
        g.set_bracket(0, 1, v(&[1, 0, 0])).unwrap();
        g.set_bracket(1, 2, v(&[0, 0, 1])).unwrap();
        assert!(g.validate().is_valid());
    }

    #[test]
    fn adjoint_matches_brackets() {
        let g = h3();
        let ad = g.adjoint(&v(&[1, 0, 0])).unwrap();
        assert_eq!(ad.image_of_basis(1), v(&[0, 0, 1]));
        assert!(is_zero_vector(&ad.image_of_basis(0)));
        assert!(is_zero_vector(&ad.image_of_basis(2)));
        assert_eq!(ad.rank(), 1);

        let l4 = model_filiform(4);
        let shift = l4.adjoint(&v(&[1, 0, 0, 0])).unwrap();
        assert_eq!(shift.image_of_basis(1), v(&[0, 0, 1, 0]));
        assert_eq!(shift.image_of_basis(2), v(&[0, 0, 0, 1]));
        assert!(is_zero_vector(&shift.image_of_basis(3)));
        assert!(is_zero_vector(&shift.image_of_basis(0)));

        let ab = LieAlgebra::abelian(4, Field::Q).unwrap();
        assert!(ab.adjoint(&v(&[1, 2, 3, 4])).unwrap().is_zero());
    }

    #[test]
    fn change_basis_examples() {
        let g = h3();
        assert_eq!(g.change_basis(&EndoMap::identity(3)).unwrap(), g);

        let swap = EndoMap::from_i64(3, &[0, 1, 0, 1, 0, 0, 0, 0, 1]);
        let s = g.change_basis(&swap).unwrap();
        assert_eq!(s.structure(0, 1), &v(&[0, 0, -1]));

        // Y1 = X1, Yi = 2 Xi keeps [Y1, Yi] = Y(i+1).
        let l4 = model_filiform(4);
        let p = EndoMap::from_i64(4, &[1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 2]);
        assert_eq!(l4.change_basis(&p).unwrap(), l4);

        let singular = EndoMap::zero(3);
        assert_eq!(g.change_basis(&singular), Err(Error::Singular));
    }

    #[test]
    fn subalgebras_and_ideals() {
        let g = h3();
        let center = Subspace::coordinate(3, &[2]);
        assert!(g.is_ideal(&center).unwrap());
        assert_eq!(g.center(), center);

        let l4 = model_filiform(4);
        assert!(l4.is_subalgebra(&Subspace::coordinate(4, &[0, 3])).unwrap());
        assert!(!l4.is_ideal(&Subspace::coordinate(4, &[0])).unwrap());
        assert!(l4.is_subalgebra(&Subspace::coordinate(4, &[0])).unwrap());
    }

    #[test]
    fn direct_sum_blocks() {
        let g = direct_sum(&h3(), &h3()).unwrap();
        assert_eq!(g.dim(), 6);
        assert_eq!(g.structure(0, 1), &v(&[0, 0, 1, 0, 0, 0]));
        assert_eq!(g.structure(3, 4), &v(&[0, 0, 0, 0, 0, 1]));
        assert!(g.is_ideal(&Subspace::coordinate(6, &[0, 1, 2])).unwrap());
        assert!(g.is_ideal(&Subspace::coordinate(6, &[3, 4, 5])).unwrap());

        let a1 = LieAlgebra::abelian(1, Field::Q).unwrap();
        assert!(direct_sum(&a1, &a1).unwrap().is_abelian());
        let c = LieAlgebra::abelian(1, Field::Qi).unwrap();
        assert_eq!(direct_sum(&a1, &c), Err(Error::FieldMismatch(Field::Q, Field::Qi)));
    }

    #[test]
    fn subalgebra_structure_in_given_basis() {
        let g = h3();
        let basis = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 2])];
        let s = g.subalgebra_structure(&basis).unwrap();
        let half = vec![Scalar::zero(), Scalar::zero(), Scalar::from_frac(1, 2)];
        assert_eq!(s.structure(0, 1), &half);
        assert_eq!(g.subalgebra_structure(&basis[..2]), Err(Error::NotSubalgebra));
    }
}
