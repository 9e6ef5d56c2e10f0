//! Complexification, the conjugation `σ`, `±i` eigenspaces of `J`, and the
//! decomposition / grading checkers.
//!
//! The complexification keeps the real basis, so `σ` is componentwise
//! conjugation of coordinates.

use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::endo::EndoMap;
use crate::error::{Error, Result};
use crate::linalg::{conj_vector, Subspace, Vector};
use crate::scalar::{Field, Scalar};

/// `g ⊗ C`: the same structure constants read over `Q(i)`.
pub fn complexify(alg: &LieAlgebra) -> Result<LieAlgebra> {
    match alg.field() {
        Field::Q => Ok(alg.clone().with_field_unchecked(Field::Qi)),
        Field::Qi => Err(Error::AlreadyComplex),
    }
}

/// Lifts an algebra to `Q(i)` whether or not it already is.
pub(crate) fn over_qi(alg: &LieAlgebra) -> LieAlgebra {
    alg.clone().with_field_unchecked(Field::Qi)
}

pub fn sigma(v: &[Scalar]) -> Vector {
    conj_vector(v)
}

pub fn sigma_subspace(s: &Subspace) -> Subspace {
    s.conj()
}

fn check_structure(alg: &LieAlgebra, j: &EndoMap) -> Result<()> {
    alg.check_map(j)?;
    if !j.squares_to_minus_identity() {
        return Err(Error::NotComplexStructure);
    }
    Ok(())
}

/// `(ker(J − i), ker(J + i))` over `Q(i)`.
pub fn eigenspace_split(alg: &LieAlgebra, j: &EndoMap) -> Result<(Subspace, Subspace)> {
    if j.dim() != alg.dim() {
        return Err(Error::DimensionMismatch { expected: alg.dim(), got: j.dim() });
    }
    if !j.squares_to_minus_identity() {
        return Err(Error::NotComplexStructure);
    }
    let n = alg.dim();
    let shifted = |eps: Scalar| {
        let id = EndoMap::identity(n).scale(&eps);
        Subspace::span(n, j.sub(&id).matrix().kernel())
    };
    Ok((shifted(Scalar::i()), shifted(-Scalar::i())))
}

fn check_half(alg: &LieAlgebra, h: &Subspace) -> Result<()> {
    let n = alg.dim();
    if h.ambient_dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: h.ambient_dim() });
    }
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    Ok(())
}

/// `h` is a subalgebra of half dimension with `h ⊕ σ(h)` the whole space.
pub fn check_subalgebra_decomposition(alg: &LieAlgebra, h: &Subspace) -> Result<bool> {
    check_half(alg, h)?;
    let alg = over_qi(alg);
    Ok(h.dim() * 2 == alg.dim() && h.is_complement(&sigma_subspace(h)) && alg.is_subalgebra(h)?)
}

/// `I` and `σ(I)` are complementary ideals; also confirms `[I, σ(I)] = 0`.
pub fn check_ideal_decomposition(alg: &LieAlgebra, i: &Subspace) -> Result<bool> {
    check_half(alg, i)?;
    let alg = over_qi(alg);
    let si = sigma_subspace(i);
    if i.dim() * 2 != alg.dim() || !i.is_complement(&si) {
        return Ok(false);
    }
    if !(alg.is_ideal(i)? && alg.is_ideal(&si)?) {
        return Ok(false);
    }
    let cross = alg.bracket_subspaces(i, &si);
    assert_eq!(cross.dim(), 0, "complementary ideals must commute");
    Ok(true)
}

/// `[g0,g0] ⊆ g0`, `[g1,g1] ⊆ g0`, `[g0,g1] ⊆ g1`.
pub fn z2_grading_check(alg: &LieAlgebra, g0: &Subspace, g1: &Subspace) -> Result<bool> {
    for s in [g0, g1] {
        if s.ambient_dim() != alg.dim() {
            return Err(Error::DimensionMismatch { expected: alg.dim(), got: s.ambient_dim() });
        }
    }
    if !g0.is_complement(g1) {
        return Err(Error::NotDirectSum);
    }
    Ok(g0.contains_subspace(&alg.bracket_subspaces(g0, g0))
        && g0.contains_subspace(&alg.bracket_subspaces(g1, g1))
        && g1.contains_subspace(&alg.bracket_subspaces(g0, g1)))
}

/// Outcome of checking the eigenspaces of one `J` against integrability and bi-invariance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenspaceReport {
    pub h_dim: usize,
    pub h_subalgebra: bool,
    pub h_ideal: bool,
    pub h_commutes_with_conjugate: bool,
}

pub fn eigenspace_report(alg: &LieAlgebra, j: &EndoMap) -> Result<EigenspaceReport> {
    check_structure(alg, j)?;
    let (h, hbar) = eigenspace_split(alg, j)?;
    let a = over_qi(alg);
    Ok(EigenspaceReport {
        h_dim: h.dim(),
        h_subalgebra: a.is_subalgebra(&h)?,
        h_ideal: a.is_ideal(&h)?,
        h_commutes_with_conjugate: a.bracket_subspaces(&h, &hbar).dim() == 0,
    })
}
