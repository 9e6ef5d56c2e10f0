//! Univariate polynomials over Q: minimal polynomials of matrices, squarefree
//! parts and rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().clone();
        Poly(self.0.iter().map(|c| c / &l).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(k.into())).collect())
    }

    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().expect("nonzero");
        let mut r = self.0.clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().expect("nonempty") / d.lead();
            for (k, c) in d.0.iter().enumerate() {
                r[shift + k] -= &f * c;
            }
            q[shift] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(m).add(&Matrix::identity(n).scale(&Scalar::real(c.clone())));
        }
        acc
    }

    /// Distinct rational roots, ascending. Gives up (returns what it has) when
    /// the integer coefficients are too large to enumerate divisors.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let mut coeffs = self.0.clone();
        if coeffs[0].is_zero() {
            roots.push(Rational::zero());
            while coeffs.first().is_some_and(Zero::is_zero) {
                coeffs.remove(0);
            }
        }
        let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        if ints.len() > 1 {
            let (Some(p), Some(q)) = (divisors(&ints[0]), divisors(ints.last().expect("nonempty"))) else {
                return roots;
            };
            let reduced = Poly::new(coeffs);
            for a in &p {
                for b in &q {
                    for sign in [1, -1] {
                        let x = Rational::new(BigInt::from(sign * a), BigInt::from(*b));
                        if reduced.eval(&x).is_zero() && !roots.contains(&x) {
                            roots.push(x);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

const DIVISOR_LIMIT: i64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Option<Vec<i64>> {
    let n = n.abs().to_i64().filter(|&v| v <= DIVISOR_LIMIT)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Minimal polynomial of a square matrix with rational entries, monic.
///
/// Panics if the matrix has non-real entries.
pub fn minimal_polynomial(m: &Matrix) -> Poly {
    assert!(m.is_real(), "minimal polynomial is computed over Q");
    let n = m.rows();
    let mut powers = vec![Matrix::identity(n)];
    loop {
        let next = powers.last().expect("nonempty").mul(m);
        powers.push(next);
        let cols: Vec<Vec<Scalar>> = powers.iter().map(|p| p.entries().to_vec()).collect();
        let kernel = Matrix::from_cols(&cols, n * n).kernel();
        if let Some(rel) = kernel.first() {
            let coeffs = rel.iter().map(|c| c.re().clone()).collect();
            return Poly::new(coeffs).monic();
        }
    }
}
