use filicheck_core::catalog::builtin;
use filicheck_core::cohomology::{coboundary1, corollary2_scan, transported_law, verify_coboundary_identity, CandidateOutcome};
use filicheck_core::complexify::{
    check_ideal_decomposition, check_subalgebra_decomposition, eigenspace_split, sigma, sigma_subspace,
};
use filicheck_core::linalg::{add_vectors, scale_vector, Subspace};
use filicheck_core::nilpotent::{characteristic_sequence, lower_central_series};
use filicheck_core::sampling;
use filicheck_core::scalar::Scalar;
use filicheck_core::structures::{
    is_bi_invariant_cs, is_invariant_cs, nijenhuis_residual, solve_bi_invariant, Status,
};
use filicheck_core::{EndoMap, LieAlgebra};
use proptest::prelude::*;

const KEYS: [&str; 10] = ["g4_1", "h3", "h3+h3", "g6_2", "g8_3", "g8_4", "r2_2", "r4_2", "L4", "L6"];
const EVEN_KEYS: [&str; 9] = ["g4_1", "h3+h3", "g6_2", "g8_2", "g8_3", "g8_4", "r4_2", "r2_2+r2_2", "L6"];

fn alg(key: &str) -> LieAlgebra {
    builtin(key).unwrap().algebra
}

/// Invariant but not bi-invariant on r4².
fn r4_2_integrable() -> EndoMap {
    let m = filicheck_core::Matrix::from_rows(
        [["0", "-1", "0", "0"], ["1", "0", "0", "0"], ["0", "11/49", "0", "-1"], ["11/49", "0", "1", "0"]]
            .iter()
            .map(|row| row.iter().map(|c| c.parse::<Scalar>().unwrap()).collect())
            .collect(),
    );
    EndoMap::new(m).unwrap()
}

/// Structures to feed the oracles: solver witnesses where they exist, plus
/// seeded conjugates of the block rotation (rarely invariant).
fn structures(g: &LieAlgebra, seed: u64) -> Vec<EndoMap> {
    let n = g.dim();
    let mut rng = sampling::rng(seed);
    let mut out: Vec<EndoMap> = (0..2).map(|_| sampling::conjugated_rotation(&mut rng, n, 1)).collect();
    if let Some(w) = solve_bi_invariant(g).ok().and_then(|v| v.witness) {
        out.push(w);
    }
    if *g == filicheck_core::catalog::r4_2() {
        out.push(r4_2_integrable());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn bracket_is_bilinear_and_antisymmetric(k in 0..KEYS.len(), seed in any::<u64>(), c in -3i64..=3) {
        let g = alg(KEYS[k]);
        let n = g.dim();
        let mut rng = sampling::rng(seed);
        let (x, y, z) = (
            sampling::rational_vector(&mut rng, n, 3, 4),
            sampling::rational_vector(&mut rng, n, 3, 4),
            sampling::rational_vector(&mut rng, n, 3, 4),
        );
        let c = Scalar::from_int(c);
        let lhs = g.bracket(&add_vectors(&x, &scale_vector(&c, &z)), &y).unwrap();
        let rhs = add_vectors(&g.bracket(&x, &y).unwrap(), &scale_vector(&c, &g.bracket(&z, &y).unwrap()));
        prop_assert_eq!(lhs, rhs);
        let yx = g.bracket(&y, &x).unwrap();
        prop_assert_eq!(g.bracket(&x, &y).unwrap(), scale_vector(&Scalar::from_int(-1), &yx));
    }

    #[test]
    fn basis_change_round_trips(k in 0..KEYS.len(), seed in any::<u64>()) {
        let g = alg(KEYS[k]);
        let mut rng = sampling::rng(seed);
        let p = sampling::invertible_matrix(&mut rng, g.dim(), 2);
        let h = g.change_basis(&p).unwrap();
        prop_assert!(h.is_valid());
        prop_assert_eq!(h.change_basis(&p.inverse().unwrap()).unwrap(), g);
    }

    #[test]
    fn invariance_is_basis_independent(k in 0..EVEN_KEYS.len(), seed in any::<u64>()) {
        let g = alg(EVEN_KEYS[k]);
        let mut rng = sampling::rng(seed ^ 1);
        let p = sampling::invertible_matrix(&mut rng, g.dim(), 1);
        let h = g.change_basis(&p).unwrap();
        let inv = p.inverse().unwrap();
        for j in structures(&g, seed) {
            let moved = inv.compose(&j).compose(&p);
            prop_assert_eq!(is_invariant_cs(&g, &j).unwrap(), is_invariant_cs(&h, &moved).unwrap());
            prop_assert_eq!(is_bi_invariant_cs(&g, &j).unwrap(), is_bi_invariant_cs(&h, &moved).unwrap());
        }
    }

    #[test]
    fn eigenspace_oracles_agree(k in 0..EVEN_KEYS.len(), seed in any::<u64>()) {
        let g = alg(EVEN_KEYS[k]);
        for j in structures(&g, seed) {
            let (h, hbar) = eigenspace_split(&g, &j).unwrap();
            prop_assert_eq!(&hbar, &sigma_subspace(&h));
            let integrable = nijenhuis_residual(&g, &j).unwrap().is_zero();
            prop_assert_eq!(integrable, check_subalgebra_decomposition(&g, &h).unwrap());
            prop_assert_eq!(integrable, is_invariant_cs(&g, &j).unwrap());
            let bi = is_bi_invariant_cs(&g, &j).unwrap();
            prop_assert_eq!(bi, check_ideal_decomposition(&g, &h).unwrap());
            if bi {
                prop_assert!(integrable);
                prop_assert!(check_ideal_decomposition(&g, &hbar).unwrap());
            }
            if integrable {
                prop_assert!(verify_coboundary_identity(&g, &j).unwrap());
            }
        }
    }

    #[test]
    fn sigma_is_an_involution(n in 1usize..8, seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let v = sampling::gaussian_vector(&mut rng, n, 5);
        prop_assert_eq!(sigma(&sigma(&v)), v.clone());
        let s = Subspace::span(n, [v, sampling::gaussian_vector(&mut rng, n, 5)]);
        prop_assert_eq!(sigma_subspace(&sigma_subspace(&s)), s);
    }

    #[test]
    fn coboundary_is_linear_and_kills_inner_derivations(k in 0..KEYS.len(), seed in any::<u64>(), c in -3i64..=3) {
        let g = alg(KEYS[k]);
        let n = g.dim();
        let mut rng = sampling::rng(seed);
        let s = sampling::int_matrix(&mut rng, n, 2);
        let t = sampling::int_matrix(&mut rng, n, 2);
        let c = Scalar::from_int(c);
        let lhs = coboundary1(&g, &s.add(&t.scale(&c))).unwrap();
        let (ds, dt) = (coboundary1(&g, &s).unwrap(), coboundary1(&g, &t).unwrap());
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(lhs.at(a, b), &add_vectors(ds.at(a, b), &scale_vector(&c, dt.at(a, b))));
            }
        }
        let x = sampling::int_vector(&mut rng, n, 3);
        prop_assert!(coboundary1(&g, &g.adjoint(&x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn lower_central_terms_are_ideals(k in 0..KEYS.len(), seed in any::<u64>()) {
        let g = alg(KEYS[k]);
        let n = g.dim();
        let mut rng = sampling::rng(seed);
        let random = Subspace::span(n, (0..2).map(|_| sampling::int_vector(&mut rng, n, 2)));
        let mut ideals = vec![g.derived_algebra(), g.center()];
        ideals.extend(lower_central_series(&g).subspaces);
        for s in &ideals {
            prop_assert!(g.is_ideal(s).unwrap());
        }
        for s in ideals.iter().chain([&random]) {
            if g.is_ideal(s).unwrap() {
                prop_assert!(g.is_subalgebra(s).unwrap());
            }
        }
    }
}

#[test]
fn transported_law_of_invariant_structures_is_a_lie_law() {
    for key in ["g4_1", "g6_2", "g8_2", "g8_3", "g8_4", "r4_2"] {
        let g = alg(key);
        let j = solve_bi_invariant(&g).unwrap().witness.unwrap();
        assert!(verify_coboundary_identity(&g, &j).unwrap(), "{key}");
        let law = transported_law(&g, &j).unwrap();
        assert!(law.is_antisymmetric());
        assert!(law.as_algebra(g.field()).unwrap().is_valid());
    }
}

#[test]
fn no_candidate_satisfies_the_identity_on_filiform() {
    for n in [4, 6] {
        let g = alg(&format!("L{n}"));
        let mut rng = sampling::rng(0xC0C1 + n as u64);
        let candidates: Vec<EndoMap> = (0..100)
            .map(|k| if k % 10 == 9 { sampling::int_matrix(&mut rng, n, 2) } else { sampling::conjugated_rotation(&mut rng, n, 1) })
            .collect();
        let report = corollary2_scan(&g, &candidates).unwrap();
        assert_eq!(report.outcomes.len(), 100);
        assert!(report.escalations().is_empty());
        assert!(report.rejected() >= 10);
        assert!(report.outcomes.iter().any(|o| matches!(o, CandidateOutcome::IdentityFails { .. })));
    }
}

/// Jordan type of a nilpotent matrix from ranks of its powers.
fn jordan_type(m: &EndoMap) -> Vec<usize> {
    let n = m.dim();
    let mut ranks = vec![n];
    let mut p = EndoMap::identity(n);
    while *ranks.last().unwrap() > 0 {
        p = p.compose(m);
        ranks.push(p.rank());
    }
    let mut parts = Vec::new();
    for k in 1..ranks.len() {
        let at_least_k = ranks[k - 1] - ranks[k];
        let at_least_next = if k + 1 < ranks.len() { ranks[k] - ranks[k + 1] } else { 0 };
        parts.extend(std::iter::repeat(k).take(at_least_k - at_least_next));
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

#[test]
fn characteristic_sequence_matches_brute_force() {
    for key in ["h3", "g4_1", "L4", "L5", "h3+h3", "g6_2", "L6", "g8_3"] {
        let g = alg(key);
        let n = g.dim();
        let derived = g.derived_algebra();
        let mut best: Vec<usize> = Vec::new();
        for code in 0..3usize.pow(n as u32) {
            let x: Vec<Scalar> = (0..n).map(|k| Scalar::from_int((code / 3usize.pow(k as u32) % 3) as i64 - 1)).collect();
            if derived.contains(&x) {
                continue;
            }
            best = best.max(jordan_type(&g.adjoint(&x).unwrap()));
        }
        let (c, x) = characteristic_sequence(&g).unwrap();
        assert_eq!(c.parts(), &best[..], "{key}");
        assert_eq!(jordan_type(&g.adjoint(&x).unwrap()), best, "{key}");
    }
}

#[test]
fn solver_witnesses_always_reverify() {
    for key in filicheck_core::catalog::catalog_keys() {
        let g = alg(&key);
        if g.dim() % 2 != 0 {
            continue;
        }
        let v = solve_bi_invariant(&g).unwrap();
        match v.status {
            Status::Exists => assert!(is_bi_invariant_cs(&g, v.witness.as_ref().unwrap()).unwrap(), "{key}"),
            _ => assert!(v.witness.is_none(), "{key}"),
        }
    }
}
