//! Floating-point discovery of invariant complex structures with exact
//! certification of anything it finds.
//!
//! Minimizes `R(J) = ‖J² + I‖² + ‖N_J‖²` by Levenberg–Marquardt over the box
//! `|J_ij| ≤ ENTRY_BOUND`, from seeded random starts `P J₀ P⁻¹` with unimodular
//! `P`. A minimizer below tolerance is rounded to rationals (continued
//! fractions, denominators ≤ 64), first directly and then by fixing one entry at
//! a time and re-solving for the rest.

use rand::Rng;
use rayon::prelude::*;

use crate::algebra::LieAlgebra;
use crate::endo::EndoMap;
use crate::error::{Error, Result};
use crate::sampling;
use crate::scalar::Field;

use super::rounding::{round_matrix, MAX_DENOMINATOR};
use super::{is_invariant_cs, Certificate, Status, Verdict};

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct NumericOptions {
    pub restarts: usize,
    /// Threshold on the squared Frobenius residual.
    pub tol: f64,
    pub seed: u64,
    pub max_iterations: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions { restarts: 50, tol: DEFAULT_TOL, seed: sampling::DEFAULT_SEED, max_iterations: 200 }
    }
}

/// Certification attempts, taken in order of increasing residual.
const MAX_CERTIFICATIONS: usize = 8;
/// Search box `|J_ij| ≤ ENTRY_BOUND`.
pub const ENTRY_BOUND: f64 = 8.0;
/// A step counts as a stall when it lowers the residual by less than this fraction.
const STALL_RATIO: f64 = 1e-3;
const FIX_DENOMINATORS: [i64; 7] = [1, 2, 4, 8, 16, 32, 64];
/// A frozen entry moves by at most `FIX_RADIUS / den`.
const FIX_RADIUS: f64 = 0.5;
const FIX_ATTEMPTS: usize = 3;
/// Fix-and-resolve passes per candidate; passes after the first perturb the order.
const CERTIFY_ORDERINGS: u64 = 4;
const CERTIFY_SALT: u64 = 0xCE57_1F1E;

pub fn numeric_invariant_search(alg: &LieAlgebra, options: &NumericOptions) -> Result<Verdict> {
    let n = alg.dim();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    if !(options.tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", options.tol)));
    }
    if alg.field() != Field::Q {
        return Err(Error::InvalidArgument("numeric search needs an algebra over Q".into()));
    }
    if options.restarts == 0 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let problem = Problem::new(alg);
    let mut runs: Vec<(f64, usize, Vec<f64>)> = (0..options.restarts)
        .into_par_iter()
        .map(|idx| {
            let mut rng = sampling::stream(options.seed, idx as u64);
            let start = problem.random_start(&mut rng);
            let free = vec![true; n * n];
            let (x, f) = problem.minimize(start, &free, options.max_iterations, options.tol * 1e-6);
            (f, idx, x)
        })
        .collect();
    runs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let min_residual = runs[0].0;

    for (f, _, x) in runs.iter().take(MAX_CERTIFICATIONS) {
        if *f >= options.tol {
            break;
        }
        if let Some(j) = problem.certify(alg, x, options) {
            return Ok(Verdict::exists(j));
        }
    }
    Ok(Verdict {
        status: Status::Unknown,
        witness: None,
        certificate: Some(Certificate::ResidualFloor {
            min_residual,
            restarts: options.restarts,
            below_tolerance: min_residual < options.tol,
        }),
    })
}

struct Problem {
    n: usize,
    /// Nonzero structure constants `(a, b, k, c)` with `[e_a, e_b] = Σ c e_k`.
    constants: Vec<(usize, usize, usize, f64)>,
    /// `[e_i, e_j]` as dense float vectors.
    brackets: Vec<Vec<f64>>,
}

impl Problem {
    fn new(alg: &LieAlgebra) -> Self {
        let n = alg.dim();
        let mut constants = Vec::new();
        let mut brackets = vec![vec![0.0; n]; n * n];
        for a in 0..n {
            for b in 0..n {
                for k in 0..n {
                    let c = alg.constant(a, b, k).to_f64();
                    if c != 0.0 {
                        constants.push((a, b, k, c));
                        brackets[a * n + b][k] = c;
                    }
                }
            }
        }
        Problem { n, constants, brackets }
    }

    fn residual_len(&self) -> usize {
        let n = self.n;
        n * n + n * n * (n - 1) / 2
    }

    /// Bilinear part `Q(A, B)` of the residual, so that
    /// `r(J) = Q(J, J) + (I, −[e_i, e_j])` and `Dr(J)[E] = Q(E, J) + Q(J, E)`.
    fn quad(&self, a: &[f64], b: &[f64], out: &mut [f64]) {
        let n = self.n;
        for r in 0..n {
            for c in 0..n {
                out[r * n + c] += (0..n).map(|m| a[r * n + m] * b[m * n + c]).sum::<f64>();
            }
        }
        // N(i,j) pieces: [A e_i, B e_j] − A [B e_i, e_j] − A [e_i, B e_j]
        let mut t = vec![0.0; n];
        let mut offset = n * n;
        for i in 0..n {
            for j in i + 1..n {
                let block = &mut out[offset..offset + n];
                t.iter_mut().for_each(|x| *x = 0.0);
                for &(p, q, k, c) in &self.constants {
                    block[k] += a[p * n + i] * b[q * n + j] * c;
                    if q == j {
                        t[k] += b[p * n + i] * c;
                    }
                    if p == i {
                        t[k] += b[q * n + j] * c;
                    }
                }
                for (k, slot) in block.iter_mut().enumerate() {
                    *slot -= (0..n).map(|m| a[k * n + m] * t[m]).sum::<f64>();
                }
                offset += n;
            }
        }
    }

    fn residual(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut r = vec![0.0; self.residual_len()];
        self.quad(x, x, &mut r);
        for k in 0..n {
            r[k * n + k] += 1.0;
        }
        let mut offset = n * n;
        for i in 0..n {
            for j in i + 1..n {
                for k in 0..n {
                    r[offset + k] -= self.brackets[i * n + j][k];
                }
                offset += n;
            }
        }
        r
    }

    /// Jacobian restricted to the free variables, row-major `len × free.len()`.
    ///
    /// For `E = E_pq`, with `B(a, b) = [e_a, J e_b]`:
    /// `Q(E, J)` is row `q` of `J` placed in row `p`, plus `δ_qi B(p, j)` and
    /// `−t_ij[q] e_p` on pair `(i, j)`, where `t_ij = B(i, j) − B(j, i)`;
    /// `Q(J, E)` is column `p` of `J` placed in column `q`, plus
    /// `−δ_qj B(p, i) − J(δ_qi [e_p, e_j] + δ_qj [e_i, e_p])`.
    fn jacobian(&self, x: &[f64], free: &[usize]) -> Vec<f64> {
        let n = self.n;
        let m = free.len();
        let mut jac = vec![0.0; self.residual_len() * m];
        // b[(a * n + c) * n + k] = [e_a, J e_c]_k
        let mut b = vec![0.0; n * n * n];
        for &(a, d, k, c) in &self.constants {
            for col in 0..n {
                b[(a * n + col) * n + k] += c * x[d * n + col];
            }
        }
        // jb[(a * n + c) * n + k] = (J [e_a, e_c])_k
        let mut jb = vec![0.0; n * n * n];
        for &(a, d, k, c) in &self.constants {
            for r in 0..n {
                jb[(a * n + d) * n + r] += x[r * n + k] * c;
            }
        }
        let mut pair_offset = vec![0; n * n];
        let mut offset = n * n;
        for i in 0..n {
            for j in i + 1..n {
                pair_offset[i * n + j] = offset;
                offset += n;
            }
        }
        for (col, &v) in free.iter().enumerate() {
            let (p, q) = (v / n, v % n);
            let mut put = |row: usize, value: f64| jac[row * m + col] += value;
            for c in 0..n {
                put(p * n + c, x[q * n + c]);
                put(c * n + q, x[c * n + p]);
            }
            for i in 0..n {
                for j in i + 1..n {
                    let o = pair_offset[i * n + j];
                    put(o + p, -(b[(i * n + j) * n + q] - b[(j * n + i) * n + q]));
                    if q == i {
                        for k in 0..n {
                            put(o + k, b[(p * n + j) * n + k] - jb[(p * n + j) * n + k]);
                        }
                    }
                    if q == j {
                        for k in 0..n {
                            put(o + k, -b[(p * n + i) * n + k] - jb[(i * n + p) * n + k]);
                        }
                    }
                }
            }
        }
        jac
    }

    /// `P J₀ P⁻¹` for a unimodular `P`, redrawn until inside the search box.
    fn random_start<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.n;
        let h = n / 2;
        loop {
            let (p, inv) = sampling::unimodular(rng, n);
            // J₀ e_k = e_{k+h}, J₀ e_{k+h} = −e_k
            let mut pj = vec![0i64; n * n];
            for r in 0..n {
                for k in 0..h {
                    pj[r * n + k] = p[r * n + k + h];
                    pj[r * n + k + h] = -p[r * n + k];
                }
            }
            let x: Vec<f64> = (0..n * n)
                .map(|idx| {
                    let (r, c) = (idx / n, idx % n);
                    (0..n).map(|k| pj[r * n + k] * inv[k * n + c]).sum::<i64>() as f64
                })
                .collect();
            if x.iter().all(|v| v.abs() <= ENTRY_BOUND) {
                return x;
            }
        }
    }

    /// Levenberg–Marquardt over the variables flagged in `mask`.
    fn minimize(&self, mut x: Vec<f64>, mask: &[bool], max_iterations: usize, target: f64) -> (Vec<f64>, f64) {
        let free: Vec<usize> = (0..x.len()).filter(|&v| mask[v]).collect();
        let sq = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
        let mut r = self.residual(&x);
        let mut f = sq(&r);
        if free.is_empty() {
            return (x, f);
        }
        let mut lambda = 1e-3;
        let mut stalls = 0;
        for _ in 0..max_iterations {
            if f <= target {
                break;
            }
            let jac = self.jacobian(&x, &free);
            let m = free.len();
            let mut h = vec![0.0; m * m];
            let mut g = vec![0.0; m];
            let mut nonzero = Vec::with_capacity(m);
            for (row, &rv) in jac.chunks_exact(m).zip(&r) {
                nonzero.clear();
                nonzero.extend(row.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(a, v)| (a, *v)));
                for &(a, u) in &nonzero {
                    g[a] += u * rv;
                    for &(b, w) in &nonzero {
                        h[a * m + b] += u * w;
                    }
                }
            }
            let mut improved = false;
            while lambda < 1e12 {
                let mut damped = h.clone();
                for a in 0..m {
                    damped[a * m + a] += lambda * (h[a * m + a] + 1e-9);
                }
                let Some(step) = cholesky_solve(&damped, &g, m) else {
                    lambda *= 4.0;
                    continue;
                };
                let mut trial = x.clone();
                for (a, &v) in free.iter().enumerate() {
                    trial[v] = (trial[v] - step[a]).clamp(-ENTRY_BOUND, ENTRY_BOUND);
                }
                let rt = self.residual(&trial);
                let ft = sq(&rt);
                if ft < f {
                    stalls = if (f - ft) <= STALL_RATIO * f { stalls + 1 } else { 0 };
                    x = trial;
                    r = rt;
                    f = ft;
                    lambda = (lambda / 3.0).max(1e-12);
                    improved = true;
                    break;
                }
                lambda *= 4.0;
            }
            if !improved || stalls >= 5 {
                break;
            }
        }
        (x, f)
    }

    fn exact_candidate(&self, alg: &LieAlgebra, x: &[f64]) -> Option<EndoMap> {
        let j = round_matrix(x, self.n, MAX_DENOMINATOR)?;
        is_invariant_cs(alg, &j).ok()?.then_some(j)
    }

    /// Direct rounding, then fix-and-resolve: repeatedly freeze one entry at a
    /// nearby rational, smallest denominators first, and re-minimize the rest.
    fn certify(&self, alg: &LieAlgebra, x: &[f64], options: &NumericOptions) -> Option<EndoMap> {
        if let Some(j) = self.exact_candidate(alg, x) {
            return Some(j);
        }
        (0..CERTIFY_ORDERINGS).find_map(|attempt| {
            let mut rng = sampling::stream(options.seed ^ CERTIFY_SALT, attempt);
            self.fix_and_resolve(alg, x, options, &mut rng, attempt > 0)
        })
    }

    fn fix_and_resolve<R: Rng>(
        &self,
        alg: &LieAlgebra,
        x: &[f64],
        options: &NumericOptions,
        rng: &mut R,
        jitter: bool,
    ) -> Option<EndoMap> {
        let mut x = x.to_vec();
        let mut mask = vec![true; x.len()];
        while mask.iter().any(|&m| m) {
            let mut accepted = false;
            'dens: for den in FIX_DENOMINATORS {
                let d = den as f64;
                let mut ranked: Vec<(f64, usize, f64)> = (0..x.len())
                    .filter(|&v| mask[v])
                    .map(|v| {
                        let value = (x[v] * d).round() / d;
                        let weight = if jitter { rng.gen_range(1.0..8.0) } else { 1.0 };
                        ((x[v] - value).abs() * weight, v, value)
                    })
                    .filter(|c| c.0 <= FIX_RADIUS / d)
                    .collect();
                ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                for &(_, v, value) in ranked.iter().take(FIX_ATTEMPTS) {
                    let mut trial = x.clone();
                    trial[v] = value;
                    mask[v] = false;
                    let (y, f) = self.minimize(trial, &mask, options.max_iterations, options.tol * 1e-6);
                    if f < options.tol * 1e-3 {
                        x = y;
                        accepted = true;
                        break 'dens;
                    }
                    mask[v] = true;
                }
            }
            if !accepted {
                return None;
            }
            if let Some(j) = self.exact_candidate(alg, &x) {
                return Some(j);
            }
        }
        None
    }
}

/// Solves `A x = b` for symmetric positive definite `A` (row-major `m × m`).
fn cholesky_solve(a: &[f64], b: &[f64], m: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * m + k] * l[j * m + k]).sum();
            if i == j {
                let d = a[i * m + i] - s;
                if !(d > 0.0) {
                    return None;
                }
                l[i * m + i] = d.sqrt();
            } else {
                l[i * m + j] = (a[i * m + j] - s) / l[j * m + j];
            }
        }
    }
    let mut y = vec![0.0; m];
    for i in 0..m {
        y[i] = (b[i] - (0..i).map(|k| l[i * m + k] * y[k]).sum::<f64>()) / l[i * m + i];
    }
    let mut x = vec![0.0; m];
    for i in (0..m).rev() {
        x[i] = (y[i] - (i + 1..m).map(|k| l[k * m + i] * x[k]).sum::<f64>()) / l[i * m + i];
    }
    Some(x)
}

/// Exact residual `R(J)` of a rational candidate, as a float.
#[cfg(test)]
fn exact_residual(alg: &LieAlgebra, j: &EndoMap) -> Result<f64> {
    let n = alg.dim();
    let sq = j.square().add(&EndoMap::identity(n));
    let a: f64 = sq.matrix().entries().iter().map(|c| c.to_f64().powi(2)).sum();
    Ok(a + super::nijenhuis_residual(alg, j)?.norm_sqr_f64() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vector;

    fn l4() -> LieAlgebra {
        let mut g = LieAlgebra::abelian(4, Field::Q).unwrap();
        g.set_bracket(0, 1, unit_vector(4, 2)).unwrap();
        g.set_bracket(0, 2, unit_vector(4, 3)).unwrap();
        g
    }

    #[test]
    fn float_residual_matches_exact() {
        let g = l4();
        let mut rng = sampling::rng(7);
        let p = Problem::new(&g);
        for _ in 0..5 {
            let j = sampling::int_matrix(&mut rng, 4, 2);
            let r = p.residual(&j.to_f64());
            let f: f64 = r.iter().map(|v| v * v).sum();
            let exact = exact_residual(&g, &j).unwrap();
            assert!((f - exact).abs() <= 1e-9 * exact.max(1.0), "{f} vs {exact}");
        }
    }

    #[test]
    fn jacobian_matches_differences() {
        let g = l4();
        let p = Problem::new(&g);
        let x: Vec<f64> = (0..16).map(|k| ((k * 7 % 5) as f64 - 2.0) / 3.0).collect();
        let free: Vec<usize> = (0..16).collect();
        let jac = p.jacobian(&x, &free);
        let h = 1e-6;
        for v in [0, 5, 11] {
            let mut xp = x.clone();
            xp[v] += h;
            let mut xm = x.clone();
            xm[v] -= h;
            let (rp, rm) = (p.residual(&xp), p.residual(&xm));
            for k in 0..rp.len() {
                let fd = (rp[k] - rm[k]) / (2.0 * h);
                assert!((fd - jac[k * 16 + v]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn cholesky() {
        let x = cholesky_solve(&[4.0, 2.0, 2.0, 3.0], &[2.0, 1.0], 2).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-12 && x[1].abs() < 1e-12);
        assert!(cholesky_solve(&[0.0], &[1.0], 1).is_none());
    }

    #[test]
    fn abelian_certifies() {
        let g = LieAlgebra::abelian(4, Field::Q).unwrap();
        let opts = NumericOptions { restarts: 10, ..Default::default() };
        let v = numeric_invariant_search(&g, &opts).unwrap();
        assert_eq!(v.status, Status::Exists);
        assert!(is_invariant_cs(&g, v.witness.as_ref().unwrap()).unwrap());
    }
}
