//! Invariant and bi-invariant complex structures: exact checkers, the
//! commutant of the adjoint representation, nonexistence obstructions and the
//! two search procedures.

mod bi_invariant;
mod numeric;
pub mod rounding;

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::complexify::over_qi;
use crate::endo::EndoMap;
use crate::error::{Error, Result};
use crate::linalg::{is_zero_vector, scale_vector, sub_vectors, zero_vector, Matrix, Subspace, Vector};
use crate::nilpotent::{characteristic_sequence, is_filiform, is_nilpotent, pairing_pattern_holds};
use crate::scalar::{Field, Scalar};

pub use bi_invariant::solve_bi_invariant;
pub use numeric::{numeric_invariant_search, NumericOptions, DEFAULT_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Exists,
    NotExists,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Exists => "Exists",
            Status::NotExists => "NotExists",
            Status::Unknown => "Unknown",
        };
        f.write_str(s)
    }
}

/// Why the commutant cannot contain a square root of `−Id`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Exhaustion {
    /// A subspace of odd dimension is stable under the whole commutant, so any
    /// `J` would restrict to it with `J² = −Id`.
    OddInvariantSubspace { source: String, dim: usize },
    /// A simple factor `M_k(D)` of the semisimple quotient, with `D ⊗ R` a
    /// product of copies of `R`, occurs with odd `k`.
    OddRealBlock { residue_degree: usize, multiplicity: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    FiliformTheorem,
    PairingObstruction { sequence: Vec<usize> },
    CommutantExhausted(Exhaustion),
    ExplicitWitness,
    ResidualFloor { min_residual: f64, restarts: usize, below_tolerance: bool },
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::FiliformTheorem => "FiliformTheorem",
            Certificate::PairingObstruction { .. } => "PairingObstruction",
            Certificate::CommutantExhausted(_) => "CommutantExhausted",
            Certificate::ExplicitWitness => "ExplicitWitness",
            Certificate::ResidualFloor { .. } => "ResidualFloor",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<EndoMap>,
    pub certificate: Option<Certificate>,
}

impl Verdict {
    pub fn exists(witness: EndoMap) -> Self {
        Verdict { status: Status::Exists, witness: Some(witness), certificate: Some(Certificate::ExplicitWitness) }
    }

    pub fn not_exists(certificate: Certificate) -> Self {
        Verdict { status: Status::NotExists, witness: None, certificate: Some(certificate) }
    }

    pub fn unknown() -> Self {
        Verdict { status: Status::Unknown, witness: None, certificate: None }
    }

    pub fn is_decided(&self) -> bool {
        self.status != Status::Unknown
    }
}

/// Values of `N_J(e_i, e_j)` on basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NijenhuisResidual {
    dim: usize,
    values: Vec<Vector>,
}

impl NijenhuisResidual {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `N(e_i, e_j)`, 0-based.
    pub fn at(&self, i: usize, j: usize) -> &Vector {
        &self.values[i * self.dim + j]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| is_zero_vector(v))
    }

    /// First `(i, j)` with `i < j` and nonzero value.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        let n = self.dim;
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !is_zero_vector(self.at(i, j)))
    }

    /// Squared Frobenius norm, as a float.
    pub fn norm_sqr_f64(&self) -> f64 {
        self.values.iter().flatten().map(|c| c.norm_sqr().to_f64().unwrap_or(f64::INFINITY)).sum()
    }
}

/// `N(X,Y) = [JX,JY] − [X,Y] − J[JX,Y] − J[X,JY]` on all basis pairs.
pub fn nijenhuis_residual(alg: &LieAlgebra, j: &EndoMap) -> Result<NijenhuisResidual> {
    alg.check_map(j)?;
    let n = alg.dim();
    let cols: Vec<Vector> = (0..n).map(|i| j.image_of_basis(i)).collect();
    let mut values = vec![zero_vector(n); n * n];
    for a in 0..n {
        for b in a + 1..n {
            let ea = alg.basis_vector(a);
            let eb = alg.basis_vector(b);
            let mut v = alg.bracket_unchecked(&cols[a], &cols[b]);
            v = sub_vectors(&v, alg.structure(a, b));
            v = sub_vectors(&v, &j.apply(&alg.bracket_unchecked(&cols[a], &eb)));
            v = sub_vectors(&v, &j.apply(&alg.bracket_unchecked(&ea, &cols[b])));
            values[b * n + a] = scale_vector(&-Scalar::from_int(1), &v);
            values[a * n + b] = v;
        }
    }
    Ok(NijenhuisResidual { dim: n, values })
}

fn check_even(alg: &LieAlgebra) -> Result<()> {
    if alg.dim() % 2 != 0 {
        return Err(Error::OddDimension(alg.dim()));
    }
    Ok(())
}

/// `J² = −Id` and the Nijenhuis residual vanishes.
pub fn is_invariant_cs(alg: &LieAlgebra, j: &EndoMap) -> Result<bool> {
    check_even(alg)?;
    alg.check_map(j)?;
    Ok(j.squares_to_minus_identity() && nijenhuis_residual(alg, j)?.is_zero())
}

/// `J² = −Id` and `J` commutes with every `ad e_i`.
pub fn is_bi_invariant_cs(alg: &LieAlgebra, j: &EndoMap) -> Result<bool> {
    check_even(alg)?;
    alg.check_map(j)?;
    Ok(j.squares_to_minus_identity() && (0..alg.dim()).all(|i| j.commutator(&alg.adjoint_basis(i)).is_zero()))
}

/// Basis of `{T : T ad e_i = ad e_i T for all i}` over the algebra's field.
pub fn commutant(alg: &LieAlgebra) -> Vec<EndoMap> {
    let n = alg.dim();
    let ads: Vec<EndoMap> = (0..n).map(|i| alg.adjoint_basis(i)).collect();
    let mut reduced: Vec<Vector> = Vec::new();
    for ad in &ads {
        let a = ad.matrix();
        let mut rows = std::mem::take(&mut reduced);
        // (T A − A T)[r][c] = Σ_k T[r][k] A[k][c] − A[r][k] T[k][c]
        for r in 0..n {
            for c in 0..n {
                let mut row = zero_vector(n * n);
                for k in 0..n {
                    let akc = a.get(k, c);
                    if !akc.is_zero() {
                        row[r * n + k] += akc;
                    }
                    let ark = a.get(r, k);
                    if !ark.is_zero() {
                        row[k * n + c] -= ark;
                    }
                }
                if !is_zero_vector(&row) {
                    rows.push(row);
                }
            }
        }
        if !rows.is_empty() {
            reduced = Subspace::span(n * n, rows).basis().to_vec();
        }
    }
    let kernel = if reduced.is_empty() {
        (0..n * n).map(|k| crate::linalg::unit_vector(n * n, k)).collect()
    } else {
        Matrix::from_rows(reduced).kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            let rows = v.chunks(n).map(<[Scalar]>::to_vec).collect();
            EndoMap::new(Matrix::from_rows(rows)).expect("square")
        })
        .collect()
}

/// Necessary condition for bi-invariant structures on nilpotent algebras:
/// the characteristic sequence must pair up.
pub fn bi_invariant_pairing_obstruction(alg: &LieAlgebra) -> Result<Verdict> {
    let (c, _) = characteristic_sequence(alg)?;
    if pairing_pattern_holds(&c) {
        Ok(Verdict::unknown())
    } else {
        Ok(Verdict::not_exists(Certificate::PairingObstruction { sequence: c.parts().to_vec() }))
    }
}

/// Filiform algebras carry no invariant (hence no bi-invariant) structure.
pub fn filiform_obstruction(alg: &LieAlgebra) -> Result<Verdict> {
    check_even(alg)?;
    if is_filiform(alg) {
        Ok(Verdict::not_exists(Certificate::FiliformTheorem))
    } else {
        Ok(Verdict::unknown())
    }
}

/// Exact decision for invariant structures without numerics: the filiform
/// obstruction, a bi-invariant witness, or the standard rotation.
pub fn exact_invariant_verdict(alg: &LieAlgebra) -> Result<Verdict> {
    let obstruction = filiform_obstruction(alg)?;
    if obstruction.is_decided() {
        return Ok(obstruction);
    }
    if alg.field() == Field::Q {
        let bi = solve_bi_invariant(alg)?;
        if let Some(w) = bi.witness {
            return Ok(Verdict::exists(w));
        }
    }
    let j0 = EndoMap::standard_rotation(alg.dim())?;
    if is_invariant_cs(alg, &j0)? {
        return Ok(Verdict::exists(j0));
    }
    Ok(Verdict::unknown())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub direct_sum: bool,
    pub first_subalgebra: bool,
    pub second_subalgebra: bool,
    pub first_filiform: bool,
    pub second_filiform: bool,
}

impl SplitReport {
    /// Both halves are filiform subalgebras in direct sum.
    pub fn is_filiform_split(&self) -> bool {
        self.direct_sum && self.first_subalgebra && self.second_subalgebra && self.first_filiform && self.second_filiform
    }
}

/// Examines `g = g1 ⊕ g2` for a filiform algebra (lifted to `Q(i)`).
pub fn filiform_split_check(alg: &LieAlgebra, g1: &Subspace, g2: &Subspace) -> Result<SplitReport> {
    let n = alg.dim();
    for s in [g1, g2] {
        if s.ambient_dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: s.ambient_dim() });
        }
    }
    if !is_filiform(alg) {
        return Err(Error::NotFiliform);
    }
    let a = over_qi(alg);
    let filiform_half = |s: &Subspace, sub: bool| -> bool {
        sub && a.subalgebra_structure(s.basis()).map(|h| is_filiform(&h)).unwrap_or(false)
    };
    let first_subalgebra = a.is_subalgebra(g1)?;
    let second_subalgebra = a.is_subalgebra(g2)?;
    Ok(SplitReport {
        direct_sum: g1.is_complement(g2),
        first_subalgebra,
        second_subalgebra,
        first_filiform: filiform_half(g1, first_subalgebra),
        second_filiform: filiform_half(g2, second_subalgebra),
    })
}

/// Nilpotency check used to pick obstructions for the bi-invariant solver.
pub(crate) fn nilpotent_obstructions(alg: &LieAlgebra) -> Result<Option<Verdict>> {
    if !is_nilpotent(alg) {
        return Ok(None);
    }
    let pairing = bi_invariant_pairing_obstruction(alg)?;
    if pairing.is_decided() {
        return Ok(Some(pairing));
    }
    let filiform = filiform_obstruction(alg)?;
    Ok(filiform.is_decided().then_some(filiform))
}
