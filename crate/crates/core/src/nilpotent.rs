//! Lower central series, filiform detection, Jordan profiles of nilpotent
//! operators and characteristic sequences.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::LieAlgebra;
use crate::endo::EndoMap;
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, unit_vector, Subspace, Vector};
use crate::sampling;

/// Seed of the three random probes used when maximizing over `g − [g,g]`.
pub const CHAR_SEQUENCE_SEED: u64 = 0x5EC0_0E5C;

/// Non-increasing partition of the dimension, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct CharSequence(Vec<usize>);

impl CharSequence {
    /// Sorts `parts` into non-increasing order.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CharSequence(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for CharSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `C⁰g = g, C¹g = [g,g], C^{i+1}g = [g, C^i g]`, stopped at stabilization.
#[derive(Clone, Debug)]
pub struct SeriesProfile {
    pub subspaces: Vec<Subspace>,
    pub dims: Vec<usize>,
}

impl SeriesProfile {
    pub fn is_nilpotent(&self) -> bool {
        self.dims.last() == Some(&0)
    }
}

pub fn lower_central_series(alg: &LieAlgebra) -> SeriesProfile {
    let full = Subspace::full(alg.dim());
    let mut subspaces = vec![full.clone()];
    let mut dims = vec![alg.dim()];
    loop {
        let last = subspaces.last().expect("nonempty");
        if last.dim() == 0 {
            break;
        }
        let next = alg.bracket_subspaces(&full, last);
        if next.dim() == last.dim() {
            break;
        }
        dims.push(next.dim());
        subspaces.push(next);
    }
    SeriesProfile { subspaces, dims }
}

pub fn is_nilpotent(alg: &LieAlgebra) -> bool {
    lower_central_series(alg).is_nilpotent()
}

/// `dim C¹ = n − 2` and `dim C^i = n − i − 1` for `2 ≤ i ≤ n − 1`.
///
/// Algebras of dimension below 3 are reported as not filiform.
pub fn is_filiform(alg: &LieAlgebra) -> bool {
    let n = alg.dim();
    if n < 3 {
        return false;
    }
    let dims = lower_central_series(alg).dims;
    if dims.len() != n || dims[1] != n - 2 {
        return false;
    }
    (2..n).all(|i| dims[i] == n - i - 1)
}

/// Jordan block sizes of a nilpotent map, read off from the ranks of its powers:
/// the number of blocks of size at least `k` is `rank(N^{k−1}) − rank(N^k)`.
pub fn jordan_profile(map: &EndoMap) -> Result<CharSequence> {
    let n = map.dim();
    let mut ranks = vec![n];
    let mut power = EndoMap::identity(n);
    while *ranks.last().expect("nonempty") > 0 {
        if ranks.len() > n {
            return Err(Error::NotNilpotent);
        }
        power = power.compose(map);
        let r = power.rank();
        if r == *ranks.last().expect("nonempty") {
            return Err(Error::NotNilpotent);
        }
        ranks.push(r);
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut parts = Vec::with_capacity(n);
    for (k, &count) in at_least.iter().enumerate() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        parts.extend(std::iter::repeat(k + 1).take(count - next));
    }
    Ok(CharSequence::new(parts))
}

/// Deterministic sample of `g − [g,g]`: basis vectors, pairwise sums of basis
/// vectors, then three seeded integer vectors with entries in `[−3, 3]`.
pub fn generic_sample(alg: &LieAlgebra) -> Vec<Vector> {
    let n = alg.dim();
    let derived = alg.derived_algebra();
    let mut out = Vec::new();
    for i in 0..n {
        out.push(unit_vector(n, i));
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push(add_vectors(&unit_vector(n, i), &unit_vector(n, j)));
        }
    }
    let mut rng = sampling::rng(CHAR_SEQUENCE_SEED);
    let mut drawn = 0;
    let mut attempts = 0;
    while drawn < 3 && attempts < 64 {
        attempts += 1;
        let v = sampling::int_vector(&mut rng, n, 3);
        if !derived.contains(&v) {
            out.push(v);
            drawn += 1;
        }
    }
    out.retain(|v| !derived.contains(v));
    out
}

/// `c(g)`: the lexicographically largest Jordan profile of `ad x` over the
/// generic sample, with the first sample vector attaining it.
pub fn characteristic_sequence(alg: &LieAlgebra) -> Result<(CharSequence, Vector)> {
    if !is_nilpotent(alg) {
        return Err(Error::AlgebraNotNilpotent);
    }
    let sample = generic_sample(alg);
    let profiles: Vec<CharSequence> = sample
        .par_iter()
        .map(|x| jordan_profile(&alg.adjoint(x).expect("sample has algebra dimension")))
        .collect::<Result<_>>()?;
    let best = profiles.iter().max().expect("sample is nonempty for nonzero algebras").clone();
    let idx = profiles.iter().position(|p| *p == best).expect("max is attained");
    Ok((best, sample[idx].clone()))
}

pub fn find_characteristic_vector(alg: &LieAlgebra) -> Result<Vector> {
    characteristic_sequence(alg).map(|(_, x)| x)
}

/// `x` is characteristic when the Jordan profile of `ad x` equals `c(g)`.
pub fn is_characteristic_vector(alg: &LieAlgebra, x: &[crate::scalar::Scalar]) -> Result<bool> {
    let (c, _) = characteristic_sequence(alg)?;
    Ok(jordan_profile(&alg.adjoint(x)?)? == c)
}

/// Parts can be grouped into pairs of equal values: `(c1,c1,c2,c2,…,1,1)`.
pub fn pairing_pattern_holds(c: &CharSequence) -> bool {
    let p = c.parts();
    p.len() % 2 == 0 && p.chunks(2).all(|w| w[0] == w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Field, Scalar};

    fn model_filiform(n: usize) -> LieAlgebra {
        let mut g = LieAlgebra::abelian(n, Field::Q).unwrap();
        for i in 1..n - 1 {
            g.set_bracket(0, i, unit_vector(n, i + 1)).unwrap();
        }
        g
    }

    fn h3() -> LieAlgebra {
        let mut g = LieAlgebra::abelian(3, Field::Q).unwrap();
        g.set_bracket(0, 1, unit_vector(3, 2)).unwrap();
        g
    }

    #[test]
    fn series_dims() {
        assert_eq!(lower_central_series(&model_filiform(4)).dims, vec![4, 2, 1, 0]);
        assert_eq!(lower_central_series(&LieAlgebra::abelian(6, Field::Q).unwrap()).dims, vec![6, 0]);
    }

    #[test]
    fn series_stabilizes_on_non_nilpotent() {
        let mut r2 = LieAlgebra::abelian(2, Field::Q).unwrap();
        r2.set_bracket(0, 1, unit_vector(2, 0)).unwrap();
        let s = lower_central_series(&r2);
        assert_eq!(s.dims, vec![2, 1]);
        assert!(!s.is_nilpotent());
        assert_eq!(characteristic_sequence(&r2), Err(Error::AlgebraNotNilpotent));
    }

    #[test]
    fn filiform_detection() {
        for n in 3..=8 {
            assert!(is_filiform(&model_filiform(n)), "L{n}");
        }
        assert!(is_filiform(&h3()));
        let hh = crate::algebra::direct_sum(&h3(), &h3()).unwrap();
        assert!(!is_filiform(&hh));
        assert!(!is_filiform(&LieAlgebra::abelian(2, Field::Q).unwrap()));
    }

    #[test]
    fn jordan_profiles() {
        assert_eq!(jordan_profile(&EndoMap::zero(3)).unwrap().parts(), &[1, 1, 1]);
        let l4 = model_filiform(4);
        assert_eq!(jordan_profile(&l4.adjoint_basis(0)).unwrap().parts(), &[3, 1]);
        assert_eq!(jordan_profile(&EndoMap::identity(2)), Err(Error::NotNilpotent));
    }

    #[test]
    fn characteristic_sequences_of_models() {
        for n in 2..=5 {
            let (c, x) = characteristic_sequence(&model_filiform(2 * n)).unwrap();
            assert_eq!(c.parts(), &[2 * n - 1, 1]);
            assert!(!model_filiform(2 * n).derived_algebra().contains(&x));
        }
        let (c, _) = characteristic_sequence(&LieAlgebra::abelian(2, Field::Q).unwrap()).unwrap();
        assert_eq!(c.parts(), &[1, 1]);
    }

    #[test]
    fn characteristic_vectors_of_l6() {
        let l6 = model_filiform(6);
        let e = |i| unit_vector(6, i);
        assert!(is_characteristic_vector(&l6, &e(0)).unwrap());
        assert!(!is_characteristic_vector(&l6, &e(1)).unwrap());
        assert_eq!(jordan_profile(&l6.adjoint(&e(1)).unwrap()).unwrap().parts(), &[2, 1, 1, 1, 1]);
        assert!(is_characteristic_vector(&l6, &add_vectors(&e(0), &e(1))).unwrap());
    }

    #[test]
    fn pairing_pattern() {
        assert!(pairing_pattern_holds(&CharSequence::new(vec![2, 2, 1, 1])));
        assert!(pairing_pattern_holds(&CharSequence::new(vec![1, 1])));
        for n in 2..6 {
            assert!(!pairing_pattern_holds(&CharSequence::new(vec![2 * n - 1, 1])));
        }
        assert!(!pairing_pattern_holds(&CharSequence::new(vec![1, 1, 1])));
    }

    #[test]
    fn profile_is_scale_invariant() {
        let l6 = model_filiform(6);
        let x: Vector = [1, 2, 0, -1, 0, 3].iter().map(|&k| Scalar::from_int(k)).collect();
        let base = jordan_profile(&l6.adjoint(&x).unwrap()).unwrap();
        for lam in [Scalar::from_frac(-3, 7), Scalar::from_int(5)] {
            let y: Vector = x.iter().map(|c| &lam * c).collect();
            assert_eq!(jordan_profile(&l6.adjoint(&y).unwrap()).unwrap(), base);
        }
    }
}
