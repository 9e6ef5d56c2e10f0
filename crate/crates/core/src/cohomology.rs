//! Degree-one Chevalley coboundary and the transported law `μ_J`.

use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::endo::EndoMap;
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, is_zero_vector, sub_vectors, Vector};
use crate::nilpotent::is_filiform;
use crate::scalar::Field;
use crate::structures::is_invariant_cs;

/// Bilinear antisymmetric map `g × g → g`, stored on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoCochain {
    dim: usize,
    values: Vec<Vector>,
}

impl TwoCochain {
    fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Vector) -> Self {
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i, j));
            }
        }
        TwoCochain { dim: n, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Value on `(e_i, e_j)`, 0-based.
    pub fn at(&self, i: usize, j: usize) -> &Vector {
        &self.values[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| is_zero_vector(v))
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| is_zero_vector(&add_vectors(self.at(i, j), self.at(j, i)))))
    }

    /// First basis pair `(i, j)`, `i < j`, where two cochains differ.
    pub fn first_difference(&self, other: &TwoCochain) -> Option<(usize, usize)> {
        let n = self.dim;
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| self.at(i, j) != other.at(i, j))
    }

    /// Reads the cochain as a bracket; fails if it is not antisymmetric.
    pub fn as_algebra(&self, field: Field) -> Result<LieAlgebra> {
        let n = self.dim;
        let tensor = (0..n).map(|i| (0..n).map(|j| self.at(i, j).clone()).collect()).collect();
        LieAlgebra::from_tensor(field, tensor)
    }
}

fn field_of(alg: &LieAlgebra, t: &EndoMap) -> Field {
    if alg.field() == Field::Qi || !t.is_real() {
        Field::Qi
    } else {
        Field::Q
    }
}

/// `(δT)(x, y) = [Tx, y] + [x, Ty] − T[x, y]`.
pub fn coboundary1(alg: &LieAlgebra, t: &EndoMap) -> Result<TwoCochain> {
    alg.check_map(t)?;
    let n = alg.dim();
    Ok(TwoCochain::from_fn(n, |i, j| {
        let ti = t.image_of_basis(i);
        let tj = t.image_of_basis(j);
        let a = alg.bracket_unchecked(&ti, &alg.basis_vector(j));
        let b = alg.bracket_unchecked(&alg.basis_vector(i), &tj);
        sub_vectors(&add_vectors(&a, &b), &t.apply(alg.structure(i, j)))
    }))
}

/// `μ_J(x, y) = J⁻¹[Jx, Jy]`; uses `J⁻¹ = −J` when `J² = −Id`.
pub fn transported_law(alg: &LieAlgebra, j: &EndoMap) -> Result<TwoCochain> {
    alg.check_map(j)?;
    let inv = if j.squares_to_minus_identity() { j.neg() } else { j.inverse()? };
    let n = alg.dim();
    Ok(TwoCochain::from_fn(n, |a, b| inv.apply(&alg.bracket_unchecked(&j.image_of_basis(a), &j.image_of_basis(b)))))
}

/// `δJ = μ_J` for an invariant complex structure `J`.
///
/// Errors with [`Error::NotComplexStructure`] or [`Error::NotInvariant`] when
/// `J` is outside the range where the identity is claimed.
pub fn verify_coboundary_identity(alg: &LieAlgebra, j: &EndoMap) -> Result<bool> {
    alg.check_map(j)?;
    if !j.squares_to_minus_identity() {
        return Err(Error::NotComplexStructure);
    }
    if !is_invariant_cs(alg, j)? {
        return Err(Error::NotInvariant);
    }
    Ok(coboundary1(alg, j)? == transported_law(alg, j)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CandidateOutcome {
    /// `J² ≠ −Id`.
    Rejected,
    /// `δJ ≠ μ_J`, first differing basis pair (1-based).
    IdentityFails { pair: (usize, usize) },
    /// `δJ = μ_J` and `μ_J` is a Lie law: contradicts the filiform nonexistence result.
    Satisfied,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corollary2Report {
    pub outcomes: Vec<CandidateOutcome>,
}

impl Corollary2Report {
    pub fn rejected(&self) -> usize {
        self.outcomes.iter().filter(|o| **o == CandidateOutcome::Rejected).count()
    }

    /// Indices of candidates that would contradict the theorem.
    pub fn escalations(&self) -> Vec<usize> {
        self.outcomes.iter().enumerate().filter(|(_, o)| **o == CandidateOutcome::Satisfied).map(|(k, _)| k).collect()
    }
}

/// On a filiform algebra no `J` with `J² = −Id` satisfies `δJ = μ_J`.
pub fn corollary2_scan(alg: &LieAlgebra, candidates: &[EndoMap]) -> Result<Corollary2Report> {
    if !is_filiform(alg) {
        return Err(Error::NotFiliform);
    }
    let mut outcomes = Vec::with_capacity(candidates.len());
    for j in candidates {
        alg.check_map(j)?;
        if !j.squares_to_minus_identity() {
            outcomes.push(CandidateOutcome::Rejected);
            continue;
        }
        let delta = coboundary1(alg, j)?;
        let law = transported_law(alg, j)?;
        let outcome = match delta.first_difference(&law) {
            Some((a, b)) => CandidateOutcome::IdentityFails { pair: (a + 1, b + 1) },
            None => {
                if law.as_algebra(field_of(alg, j)).map(|g| g.is_valid()).unwrap_or(false) {
                    CandidateOutcome::Satisfied
                } else {
                    CandidateOutcome::IdentityFails { pair: (0, 0) }
                }
            }
        };
        outcomes.push(outcome);
    }
    Ok(Corollary2Report { outcomes })
}
