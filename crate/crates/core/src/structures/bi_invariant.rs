//! Exact search for `J` with `J² = −Id` inside the commutant `A` of the
//! adjoint representation.
//!
//! `A` is an associative algebra. The identity is split into orthogonal
//! primitive idempotents (Fitting projectors of probe elements with rational
//! eigenvalues), isomorphic blocks are paired off by `u − (vu)⁻¹v`, and a single
//! leftover block is handled through its residue field. Nonexistence is only
//! claimed when it also holds over the reals.

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::algebra::LieAlgebra;
use crate::endo::EndoMap;
use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Matrix, Subspace, Vector};
use crate::nilpotent::lower_central_series;
use crate::poly::minimal_polynomial;
use crate::sampling;
use crate::scalar::{Field, Rational, Scalar};

use super::{commutant, is_bi_invariant_cs, nilpotent_obstructions, Certificate, Exhaustion, Verdict};

const PROBE_SEED: u64 = 0xB1_1A_71A4;
const RANDOM_PROBES: usize = 12;

pub fn solve_bi_invariant(alg: &LieAlgebra) -> Result<Verdict> {
    let n = alg.dim();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    if alg.field() != Field::Q {
        return Err(Error::InvalidArgument("the bi-invariant solver needs an algebra over Q".into()));
    }
    if let Some(v) = nilpotent_obstructions(alg)? {
        return Ok(v);
    }
    let basis: Vec<Matrix> = commutant(alg).into_iter().map(EndoMap::into_matrix).collect();
    if let Some(ex) = odd_invariant_subspace(alg, &basis) {
        return Ok(Verdict::not_exists(Certificate::CommutantExhausted(ex)));
    }
    match Decomposer::new(n, &basis).run() {
        Outcome::Witness(j) => {
            let j = EndoMap::new(j)?;
            if is_bi_invariant_cs(alg, &j)? {
                Ok(Verdict::exists(j))
            } else {
                Ok(Verdict::unknown())
            }
        }
        Outcome::Obstructed(ex) => Ok(Verdict::not_exists(Certificate::CommutantExhausted(ex))),
        Outcome::Inconclusive => Ok(Verdict::unknown()),
    }
}

fn flatten(m: &Matrix) -> Vector {
    m.entries().to_vec()
}

fn unflatten(v: &[Scalar], n: usize) -> Matrix {
    Matrix::from_rows(v.chunks(n).map(<[Scalar]>::to_vec).collect())
}

fn linear_span(n: usize, mats: impl IntoIterator<Item = Matrix>) -> Vec<Matrix> {
    Subspace::span(n * n, mats.into_iter().map(|m| flatten(&m))).basis().iter().map(|v| unflatten(v, n)).collect()
}

/// Kernel of the trace form `(x, y) ↦ tr(xy)`; in characteristic zero this is
/// the Jacobson radical of an algebra acting faithfully.
fn radical(basis: &[Matrix]) -> Vec<Matrix> {
    let m = basis.len();
    if m == 0 {
        return Vec::new();
    }
    let rows: Vec<Vector> =
        (0..m).map(|k| (0..m).map(|l| basis[k].mul(&basis[l]).trace()).collect()).collect();
    let n = basis[0].rows();
    Matrix::from_rows(rows)
        .kernel()
        .into_iter()
        .map(|coef| {
            coef.iter().zip(basis).fold(Matrix::zeros(n, n), |acc, (c, b)| acc.add(&b.scale(c)))
        })
        .collect()
}

fn stable_under_all(s: &Subspace, basis: &[Matrix]) -> bool {
    basis.iter().all(|b| s.is_invariant_under(b))
}

fn upper_central_series(alg: &LieAlgebra) -> Vec<Subspace> {
    let n = alg.dim();
    let mut out = Vec::new();
    let mut current = Subspace::zero(n);
    loop {
        // Z_{k+1} = {x : [g, x] ⊆ Z_k}
        let mut rows = Vec::new();
        let quotient_rows = complement_equations(&current);
        for i in 0..n {
            let ad = alg.adjoint_basis(i);
            for q in &quotient_rows {
                rows.push((0..n).map(|c| (0..n).map(|r| &q[r] * ad.get(r, c)).fold(Scalar::zero(), |a, b| a + b)).collect());
            }
        }
        let next = if rows.is_empty() { Subspace::full(n) } else { Subspace::span(n, Matrix::from_rows(rows).kernel()) };
        if next.dim() == current.dim() {
            break;
        }
        out.push(next.clone());
        current = next;
    }
    out
}

/// Linear functionals whose common kernel is `s`.
fn complement_equations(s: &Subspace) -> Vec<Vector> {
    let n = s.ambient_dim();
    if s.dim() == 0 {
        return (0..n).map(|i| unit_vector(n, i)).collect();
    }
    Matrix::from_rows(s.basis().to_vec()).kernel()
}

fn derived_series(alg: &LieAlgebra) -> Vec<Subspace> {
    let mut out = Vec::new();
    let mut current = Subspace::full(alg.dim());
    loop {
        let next = alg.bracket_subspaces(&current, &current);
        if next.dim() == current.dim() {
            break;
        }
        out.push(next.clone());
        if next.dim() == 0 {
            break;
        }
        current = next;
    }
    out
}

/// Searches a list of canonical subspaces for an odd-dimensional one stable
/// under the whole commutant.
fn odd_invariant_subspace(alg: &LieAlgebra, basis: &[Matrix]) -> Option<Exhaustion> {
    let n = alg.dim();
    let mut candidates: Vec<(String, Subspace)> = Vec::new();
    for (k, s) in lower_central_series(alg).subspaces.into_iter().enumerate().skip(1) {
        candidates.push((format!("lower central series term {k}"), s));
    }
    candidates.push(("center".into(), alg.center()));
    for (k, s) in upper_central_series(alg).into_iter().enumerate() {
        candidates.push((format!("upper central series term {}", k + 1), s));
    }
    for (k, s) in derived_series(alg).into_iter().enumerate() {
        candidates.push((format!("derived series term {}", k + 1), s));
    }
    for i in 0..n {
        let e = unit_vector(n, i);
        candidates.push((format!("cyclic submodule of e{}", i + 1), Subspace::span(n, basis.iter().map(|b| b.apply(&e)))));
    }
    let rad = radical(basis);
    let rad_image = Subspace::span(n, rad.iter().flat_map(|r| (0..n).map(move |c| r.col(c))));
    candidates.push(("image of the commutant radical".into(), rad_image));
    let rad_kernel = if rad.is_empty() {
        Subspace::full(n)
    } else {
        let rows: Vec<Vector> = rad.iter().flat_map(|r| (0..n).map(move |k| r.row(k).to_vec())).collect();
        Subspace::span(n, Matrix::from_rows(rows).kernel())
    };
    candidates.push(("kernel of the commutant radical".into(), rad_kernel));

    candidates
        .into_iter()
        .find(|(_, s)| s.dim() % 2 == 1 && stable_under_all(s, basis))
        .map(|(source, s)| Exhaustion::OddInvariantSubspace { source, dim: s.dim() })
}

enum Outcome {
    Witness(Matrix),
    Obstructed(Exhaustion),
    Inconclusive,
}

#[derive(Clone)]
enum Residue {
    Rational,
    /// Residue field `Q[y]/(t² + bt + c)`.
    Quadratic { y: Matrix, b: Rational, c: Rational },
    Unresolved,
}

/// Corner `eAe` of an idempotent `e`, with coordinates on `im e`.
struct Block {
    e: Matrix,
    /// Columns: basis of `im e` (n × r).
    embed: Matrix,
    /// Left inverse of `embed` on `im e` (r × n).
    coords: Matrix,
    corner: Vec<Matrix>,
}

impl Block {
    fn new(e: Matrix, algebra: &[Matrix]) -> Block {
        let n = e.rows();
        let image = e.column_space();
        let embed = Matrix::from_cols(image.basis(), n);
        let r = image.dim();
        let (_, rows) = embed.transpose().rref();
        let selected = Matrix::from_rows(rows.iter().map(|&k| embed.row(k).to_vec()).collect());
        let inv = selected.inverse().expect("pivot rows are independent");
        let mut select = Matrix::zeros(r, n);
        for (k, &row) in rows.iter().enumerate() {
            select.set(k, row, Scalar::one());
        }
        let coords = inv.mul(&select);
        let corner = linear_span(n, algebra.iter().map(|a| e.mul(a).mul(&e)));
        Block { e, embed, coords, corner }
    }

    fn rank(&self) -> usize {
        self.embed.cols()
    }

    fn restrict(&self, t: &Matrix) -> Matrix {
        self.coords.mul(t).mul(&self.embed)
    }

    fn extend(&self, c: &Matrix) -> Matrix {
        self.embed.mul(c).mul(&self.coords).mul(&self.e)
    }

    fn probes(&self, seed: u64) -> Vec<Matrix> {
        let n = self.e.rows();
        let mut out = self.corner.clone();
        for i in 0..self.corner.len() {
            for j in i + 1..self.corner.len() {
                out.push(self.corner[i].add(&self.corner[j]));
            }
        }
        let mut rng = sampling::rng(seed);
        for _ in 0..RANDOM_PROBES {
            let mut m = Matrix::zeros(n, n);
            for b in &self.corner {
                m = m.add(&b.scale(&Scalar::from_int(rng.gen_range(-3..=3))));
            }
            out.push(m);
        }
        out
    }

    /// A proper idempotent `f ∈ eAe`, from the Fitting decomposition of a probe
    /// at a rational eigenvalue.
    fn split(&self, seed: u64) -> Option<Matrix> {
        let r = self.rank();
        for y in self.probes(seed) {
            let c = self.restrict(&y);
            let q = minimal_polynomial(&c).squarefree();
            if q.degree() < Some(2) {
                continue;
            }
            let Some(root) = q.rational_roots().into_iter().next() else { continue };
            let shifted = c.sub(&Matrix::identity(r).scale(&Scalar::real(root)));
            let power = shifted.pow(r as u32);
            let kernel = power.kernel();
            let image = power.column_space();
            if kernel.is_empty() || image.dim() == 0 {
                continue;
            }
            let mut cols = kernel.clone();
            cols.extend(image.basis().iter().cloned());
            let basis = Matrix::from_cols(&cols, r);
            let mut diag = Matrix::zeros(r, r);
            for k in 0..kernel.len() {
                diag.set(k, k, Scalar::one());
            }
            let p = basis.mul(&diag).mul(&basis.inverse().expect("Fitting decomposition is direct"));
            return Some(self.extend(&p));
        }
        None
    }

    fn residue(&self) -> Residue {
        let rad = radical(&self.corner);
        let d = self.corner.len() - rad.len();
        match d {
            1 => Residue::Rational,
            2 => {
                let n = self.e.rows();
                let base = Subspace::span(n * n, std::iter::once(flatten(&self.e)).chain(rad.iter().map(flatten)));
                let Some(y) = self.corner.iter().find(|y| !base.contains(&flatten(y))) else {
                    return Residue::Unresolved;
                };
                let q = minimal_polynomial(&self.restrict(y)).squarefree();
                if q.degree() != Some(2) {
                    return Residue::Unresolved;
                }
                let k = q.coeffs();
                Residue::Quadratic { y: y.clone(), b: k[1].clone(), c: k[0].clone() }
            }
            _ => Residue::Unresolved,
        }
    }

    /// Inverse inside the corner, if any.
    fn inverse(&self, t: &Matrix) -> Option<Matrix> {
        self.restrict(t).inverse().map(|inv| self.extend(&inv))
    }

    /// `j ∈ eAe` with `j² = −e`, from a quadratic residue field containing `i`.
    fn quadratic_unit(&self, y: &Matrix, b: &Rational, c: &Rational) -> Option<Matrix> {
        let neg_disc = Rational::from_integer(4.into()) * c - b * b;
        if !neg_disc.is_positive() {
            return None;
        }
        let s = rational_sqrt(&neg_disc)?;
        let two = Scalar::from_int(2);
        let mut j = y.scale(&two).add(&self.e.scale(&Scalar::real(b.clone()))).scale(&Scalar::real(s.recip()));
        let minus_e = self.e.scale(&-Scalar::one());
        for _ in 0..=usize::BITS {
            if j.mul(&j) == minus_e {
                return Some(j);
            }
            let inv = self.inverse(&j)?;
            j = j.sub(&inv).scale(&Scalar::from_frac(1, 2));
        }
        None
    }
}

fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| Rational::new(n, d))
}

struct Decomposer<'a> {
    n: usize,
    algebra: &'a [Matrix],
}

impl<'a> Decomposer<'a> {
    fn new(n: usize, algebra: &'a [Matrix]) -> Self {
        Decomposer { n, algebra }
    }

    fn primitive_blocks(&self) -> Vec<Block> {
        let mut pending = vec![Matrix::identity(self.n)];
        let mut done = Vec::new();
        let mut round = 0u64;
        while let Some(e) = pending.pop() {
            round += 1;
            let block = Block::new(e, self.algebra);
            match block.split(PROBE_SEED ^ round) {
                Some(f) => {
                    pending.push(block.e.sub(&f));
                    pending.push(f);
                }
                None => done.push(block),
            }
        }
        done
    }

    /// Maps `u ∈ e_k A e_i`, `v ∈ e_i A e_k` with `vu` invertible on `im e_i`.
    fn linking_pair(&self, bi: &Block, bk: &Block) -> Option<(Matrix, Matrix)> {
        let us = linear_span(self.n, self.algebra.iter().map(|a| bk.e.mul(a).mul(&bi.e)));
        let vs = linear_span(self.n, self.algebra.iter().map(|a| bi.e.mul(a).mul(&bk.e)));
        for u in &us {
            for v in &vs {
                if bi.restrict(&v.mul(u)).rank() == bi.rank() {
                    return Some((u.clone(), v.clone()));
                }
            }
        }
        None
    }

    fn run(&self) -> Outcome {
        let blocks = self.primitive_blocks();
        let residues: Vec<Residue> = blocks.iter().map(Block::residue).collect();

        // Isomorphism classes of primitive idempotents.
        let mut class: Vec<usize> = (0..blocks.len()).collect();
        for i in 0..blocks.len() {
            for k in 0..i {
                if class[k] == k && self.linking_pair(&blocks[k], &blocks[i]).is_some() {
                    class[i] = k;
                    break;
                }
            }
        }

        let mut j = Matrix::zeros(self.n, self.n);
        let mut leftover = None;
        for root in 0..blocks.len() {
            let members: Vec<usize> = (0..blocks.len()).filter(|&i| class[i] == root).collect();
            if members.is_empty() {
                continue;
            }
            for pair in members.chunks(2) {
                if let [a, b] = *pair {
                    let (bi, bk) = (&blocks[a], &blocks[b]);
                    let Some((u, v)) = self.linking_pair(bi, bk) else { return Outcome::Inconclusive };
                    let Some(vu_inv) = bi.inverse(&v.mul(&u)) else { return Outcome::Inconclusive };
                    let v_prime = vu_inv.mul(&v);
                    j = j.add(&u.sub(&v_prime));
                }
            }
            if members.len() % 2 == 1 {
                let last = *members.last().expect("nonempty");
                let multiplicity = members.len();
                match &residues[last] {
                    Residue::Rational => {
                        leftover.get_or_insert(Exhaustion::OddRealBlock { residue_degree: 1, multiplicity });
                    }
                    Residue::Quadratic { y, b, c } => {
                        let disc = b * b - Rational::from_integer(4.into()) * c;
                        if disc.is_positive() {
                            leftover.get_or_insert(Exhaustion::OddRealBlock { residue_degree: 2, multiplicity });
                        } else if let Some(unit) = blocks[last].quadratic_unit(y, b, c) {
                            j = j.add(&unit);
                        } else {
                            return Outcome::Inconclusive;
                        }
                    }
                    Residue::Unresolved => return Outcome::Inconclusive,
                }
            }
        }
        if let Some(ex) = leftover {
            if residues.iter().all(|r| !matches!(r, Residue::Unresolved)) {
                return Outcome::Obstructed(ex);
            }
            return Outcome::Inconclusive;
        }
        if j.mul(&j) == Matrix::identity(self.n).scale(&-Scalar::one()) {
            Outcome::Witness(j)
        } else {
            Outcome::Inconclusive
        }
    }
}
