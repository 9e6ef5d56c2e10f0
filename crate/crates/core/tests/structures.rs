use filicheck_core::catalog::{builtin, g6_2, g8_3, g8_4, model_filiform, r4_2};
use filicheck_core::complexify::{check_ideal_decomposition, complexify, sigma_subspace, z2_grading_check};
use filicheck_core::format::parse;
use filicheck_core::linalg::{add_vectors, unit_vector, Subspace, Vector};
use filicheck_core::nilpotent::{characteristic_sequence, is_filiform, pairing_pattern_holds};
use filicheck_core::sampling;
use filicheck_core::scalar::Scalar;
use filicheck_core::structures::{
    filiform_split_check, is_bi_invariant_cs, is_invariant_cs, nijenhuis_residual, solve_bi_invariant, Certificate,
    Status,
};
use filicheck_core::{EndoMap, LieAlgebra};

fn bi_oracle(g: &LieAlgebra, j: &EndoMap) -> bool {
    let n = g.dim();
    j.squares_to_minus_identity()
        && (0..n).all(|a| {
            (0..n).all(|b| {
                let (x, y) = (g.basis_vector(a), g.basis_vector(b));
                let lhs = j.apply(&g.bracket(&x, &y).unwrap());
                lhs == g.bracket(&j.apply(&x), &y).unwrap()
            })
        })
}

#[test]
fn bi_invariant_verdicts() {
    let exists = ["g2_1", "g4_1", "g6_1", "g8_1", "g6_2", "g8_2", "g8_3", "g8_4", "r4_2"];
    for key in exists {
        let g = builtin(key).unwrap().algebra;
        let v = solve_bi_invariant(&g).unwrap();
        assert_eq!(v.status, Status::Exists, "{key}");
        let j = v.witness.unwrap();
        assert!(bi_oracle(&g, &j), "{key}");
        assert!(is_invariant_cs(&g, &j).unwrap());
    }
    for key in ["h3+h3", "r2_2", "r2_2+r2_2", "r2_2+g2_1", "r2_2+r4_2"] {
        let v = solve_bi_invariant(&builtin(key).unwrap().algebra).unwrap();
        assert_eq!(v.status, Status::NotExists, "{key}: {v:?}");
        assert!(v.witness.is_none());
    }
    for n in [4, 6, 8, 10] {
        let v = solve_bi_invariant(&model_filiform(n).unwrap()).unwrap();
        assert_eq!(v.status, Status::NotExists);
        assert!(matches!(
            v.certificate,
            Some(Certificate::PairingObstruction { .. }) | Some(Certificate::FiliformTheorem)
        ));
    }
}

/// `J X1 = aX1 + bX2`, `J X2 = −bX1 + aX2`, and on `span{X3, X4}` the rotation
/// `s·b`: `J X3 = aX3 + s·bX4`, `J X4 = −s·bX3 + aX4`.
fn ab_structure(a: &Scalar, b: &Scalar, s: i64) -> EndoMap {
    let z = Scalar::from_int(0);
    let c = b.clone() * Scalar::from_int(s);
    let rows = vec![
        vec![a.clone(), -b.clone(), z.clone(), z.clone()],
        vec![b.clone(), a.clone(), z.clone(), z.clone()],
        vec![z.clone(), z.clone(), a.clone(), -c.clone()],
        vec![z.clone(), z.clone(), c, a.clone()],
    ];
    EndoMap::new(filicheck_core::Matrix::from_rows(rows)).unwrap()
}

#[test]
fn r4_2_family_on_the_hyperbola() {
    let g = r4_2();
    let mut rng = sampling::rng(5);
    let mut seen = 0;
    while seen < 10 {
        use rand::Rng;
        let (p, q): (i64, i64) = (rng.gen_range(1..=9), rng.gen_range(1..=9));
        if p == q {
            continue;
        }
        // b − a = t, b + a = 1/t with t = p/q
        let t = Scalar::from_frac(p, q);
        let ti = Scalar::from_frac(q, p);
        let half = Scalar::from_frac(1, 2);
        let b = (t.clone() + ti.clone()) * half.clone();
        let a = (ti - t) * half;
        assert_eq!(b.clone() * b.clone() - a.clone() * a.clone(), Scalar::from_int(1));
        for s in [1, -1] {
            let j = ab_structure(&a, &b, s);
            assert!(!j.squares_to_minus_identity());
            assert!(!is_bi_invariant_cs(&g, &j).unwrap());
            assert!(!bi_oracle(&g, &j));
        }
        seen += 1;
    }
    let zero = Scalar::from_int(0);
    for b in [1, -1] {
        let b = Scalar::from_int(b);
        // [X2, X3] = −X4 forces J X3 = J[X1, X3] = [J X1, X3] = −bX4
        let j = ab_structure(&zero, &b, -1);
        assert!(is_bi_invariant_cs(&g, &j).unwrap());
        assert!(bi_oracle(&g, &j));
        assert!(nijenhuis_residual(&g, &j).unwrap().is_zero());
        let same_turn = ab_structure(&zero, &b, 1);
        assert!(same_turn.squares_to_minus_identity());
        assert!(!is_bi_invariant_cs(&g, &same_turn).unwrap());
    }
    let w = solve_bi_invariant(&g).unwrap().witness.unwrap();
    let b = w.get(1, 0).clone();
    assert!(b == Scalar::from_int(1) || b == Scalar::from_int(-1));
    assert_eq!(w, ab_structure(&zero, &b, -1));
}

#[test]
fn g6_2_complexification_splits_into_two_heisenberg_ideals() {
    let g = g6_2();
    let gc = complexify(&g).unwrap();
    let x = |l: usize| unit_vector(6, l - 1);
    let y = |l: usize| unit_vector(6, l + 2);
    // X_l + eps Y_l
    let w = |l: usize, eps: &Scalar| add_vectors(&x(l), &y(l).iter().map(|c| c.clone() * eps.clone()).collect::<Vector>());
    let (minus_i, plus_i) = (-Scalar::i(), Scalar::i());
    let ideal = Subspace::span(6, (1..=3).map(|l| w(l, &minus_i)));
    assert_eq!(sigma_subspace(&ideal), Subspace::span(6, (1..=3).map(|l| w(l, &plus_i))));
    assert!(check_ideal_decomposition(&g, &ideal).unwrap());

    let two = Scalar::from_int(2);
    for eps in [minus_i, plus_i] {
        let basis = vec![w(2, &eps), w(3, &eps), w(1, &eps).iter().map(|c| c.clone() * two.clone()).collect()];
        let h = gc.subalgebra_structure(&basis).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let expected = match (a, b) {
                    (0, 1) => unit_vector(3, 2),
                    (1, 0) => unit_vector(3, 2).iter().map(|c| -c.clone()).collect(),
                    _ => vec![Scalar::from_int(0); 3],
                };
                assert_eq!(*h.structure(a, b), expected, "[{a},{b}]");
            }
        }
    }
}

#[test]
fn z2_gradings() {
    let coord = |n: usize, idx: &[usize]| Subspace::coordinate(n, idx);
    assert!(z2_grading_check(&g6_2(), &coord(6, &[0, 1, 2]), &coord(6, &[3, 4, 5])).unwrap());
    assert!(z2_grading_check(&g8_3(), &coord(8, &[0, 1, 2, 3]), &coord(8, &[4, 5, 6, 7])).unwrap());
    // [X2, X4] = Y1 rules out the plain X/Y split for g8⁴; X4 and Y4 trade places.
    assert!(!z2_grading_check(&g8_4(), &coord(8, &[0, 1, 2, 3]), &coord(8, &[4, 5, 6, 7])).unwrap());
    assert!(z2_grading_check(&g8_4(), &coord(8, &[0, 1, 2, 7]), &coord(8, &[4, 5, 6, 3])).unwrap());
}

const L6_DEFORMED: &str = "\
# L6 with two extra brackets
dim 6
field Q
bracket 1 2 : e3
bracket 1 3 : e4
bracket 1 4 : e5
bracket 1 5 : e6
bracket 2 5 : e6
bracket 3 4 : -1 e6
";

#[test]
fn deformed_l6_from_file_is_filiform() {
    let g = parse(L6_DEFORMED).unwrap();
    assert!(g.is_valid());
    assert!(is_filiform(&g));
    assert_ne!(g, model_filiform(6).unwrap().with_labels(g.labels().to_vec()).unwrap());
    let (c, _) = characteristic_sequence(&g).unwrap();
    assert_eq!(c.parts(), &[5, 1]);
    assert!(!pairing_pattern_holds(&c));
    assert_eq!(solve_bi_invariant(&g).unwrap().status, Status::NotExists);
}

#[test]
fn filiform_never_splits_into_filiform_halves() {
    let l4 = model_filiform(4).unwrap();
    let r = filiform_split_check(&l4, &Subspace::coordinate(4, &[0, 3]), &Subspace::coordinate(4, &[1, 2])).unwrap();
    assert!(r.direct_sum && r.first_subalgebra && r.second_subalgebra);
    assert!(!r.first_filiform && !r.second_filiform);

    let l6 = model_filiform(6).unwrap();
    let r = filiform_split_check(&l6, &Subspace::coordinate(6, &[0, 1, 2]), &Subspace::coordinate(6, &[3, 4, 5])).unwrap();
    // [X1, X3] = X4 leaves the first half; the second is abelian
    assert!(r.direct_sum && !r.first_subalgebra && r.second_subalgebra && !r.second_filiform);
    assert!(!r.is_filiform_split());

    for n in [6, 8] {
        let g = model_filiform(n).unwrap();
        let mut rng = sampling::rng(11 + n as u64);
        for _ in 0..500 {
            let half = |rng: &mut _| Subspace::span(n, (0..n / 2).map(|_| sampling::gaussian_vector(rng, n, 2)));
            let (a, b) = (half(&mut rng), half(&mut rng));
            assert!(!filiform_split_check(&g, &a, &b).unwrap().is_filiform_split());
        }
    }
}

#[test]
fn coordinate_splits_of_l6() {
    let g = model_filiform(6).unwrap();
    for mask in 0u32..64 {
        if mask.count_ones() != 3 {
            continue;
        }
        let (a, b): (Vec<usize>, Vec<usize>) = (0..6).partition(|k| mask & (1 << k) != 0);
        let r = filiform_split_check(&g, &Subspace::coordinate(6, &a), &Subspace::coordinate(6, &b)).unwrap();
        assert!(r.direct_sum);
        assert!(!r.is_filiform_split(), "{a:?} {b:?}");
    }
}

#[test]
fn g6_2_sequence_pairs_up() {
    let (c, x) = characteristic_sequence(&g6_2()).unwrap();
    assert_eq!(c.parts(), &[2, 2, 1, 1]);
    assert!(pairing_pattern_holds(&c));
    assert!(!g6_2().derived_algebra().contains(&x));
}
