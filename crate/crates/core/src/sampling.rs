//! Seeded generators for exact test inputs (vectors, invertible maps, complex structures).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::endo::EndoMap;
use crate::linalg::Vector;
use crate::scalar::Scalar;

pub const DEFAULT_SEED: u64 = 0x00F1_11F0_4A11;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for the `index`-th task derived from `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

pub fn int_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vector {
    (0..n).map(|_| Scalar::from_int(rng.gen_range(-bound..=bound))).collect()
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vector {
    (0..n)
        .map(|_| Scalar::gaussian(rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)))
        .collect()
}

/// Rational vector with numerators in `[-bound, bound]` and denominators in `1..=den`.
pub fn rational_vector<R: Rng>(rng: &mut R, n: usize, bound: i64, den: i64) -> Vector {
    (0..n)
        .map(|_| Scalar::from_frac(rng.gen_range(-bound..=bound), rng.gen_range(1..=den)))
        .collect()
}

pub fn int_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> EndoMap {
    let entries: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-bound..=bound)).collect();
    EndoMap::from_i64(n, &entries)
}

/// Invertible integer matrix, redrawn until nonsingular.
pub fn invertible_matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> EndoMap {
    loop {
        let m = int_matrix(rng, n, bound);
        if m.rank() == n {
            return m;
        }
    }
}

/// `P J0 P⁻¹` for the standard block rotation `J0` and a random invertible `P`.
pub fn conjugated_rotation<R: Rng>(rng: &mut R, n: usize, bound: i64) -> EndoMap {
    let j0 = EndoMap::standard_rotation(n).expect("even dimension");
    let p = invertible_matrix(rng, n, bound);
    let inv = p.inverse().expect("invertible");
    p.compose(&j0).compose(&inv)
}

/// Integer matrix `P = Π L U` with unit triangular `L`, `U` (entries in
/// `{-1, 0, 1}`) and a random permutation `Π`, returned with its integer
/// inverse, both row-major.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize) -> (Vec<i64>, Vec<i64>) {
    let mut l = vec![0i64; n * n];
    let mut u = vec![0i64; n * n];
    for i in 0..n {
        l[i * n + i] = 1;
        u[i * n + i] = 1;
        for j in 0..i {
            l[i * n + j] = rng.gen_range(-1..=1);
            u[j * n + i] = rng.gen_range(-1..=1);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    // forward substitution on unit triangular factors stays integral
    let lower_inverse = |l: &[i64]| {
        let mut inv = vec![0i64; n * n];
        for c in 0..n {
            for r in 0..n {
                let e = i64::from(r == c);
                inv[r * n + c] = e - (0..r).map(|k| l[r * n + k] * inv[k * n + c]).sum::<i64>();
            }
        }
        inv
    };
    let transpose = |a: &[i64]| {
        let mut t = vec![0i64; n * n];
        for r in 0..n {
            for c in 0..n {
                t[c * n + r] = a[r * n + c];
            }
        }
        t
    };
    let mul = |a: &[i64], b: &[i64]| {
        let mut m = vec![0i64; n * n];
        for r in 0..n {
            for c in 0..n {
                m[r * n + c] = (0..n).map(|k| a[r * n + k] * b[k * n + c]).sum();
            }
        }
        m
    };
    let lu = mul(&l, &u);
    let mut p = vec![0i64; n * n];
    for r in 0..n {
        p[perm[r] * n..(perm[r] + 1) * n].copy_from_slice(&lu[r * n..(r + 1) * n]);
    }
    let u_inv = transpose(&lower_inverse(&transpose(&u)));
    let lu_inv = mul(&u_inv, &lower_inverse(&l));
    let mut inv = vec![0i64; n * n];
    for c in 0..n {
        for r in 0..n {
            inv[r * n + perm[c]] = lu_inv[r * n + c];
        }
    }
    (p, inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unimodular_inverse_is_exact() {
        let mut r = rng(3);
        for n in [1, 2, 5, 8] {
            let (p, inv) = unimodular(&mut r, n);
            let prod = EndoMap::from_i64(n, &p).compose(&EndoMap::from_i64(n, &inv));
            assert_eq!(prod, EndoMap::identity(n));
        }
    }
}
