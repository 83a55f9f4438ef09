//! Numerical search for Toeplitz factorizations by Levenberg–Marquardt on
//! the realified residual `T_1 ⋯ T_s - M`.
//!
//! A small residual is evidence, not proof: products of Toeplitz matrices
//! need not form a closed set, so a residual sequence tending to zero is
//! compatible with `M` having no exact factorization. Nonexistence is only
//! decided by Gröbner bases or certificates.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::exactnum::{GaussianRational, Rational};
use crate::factorize::{verify_decomposition, ToeplitzDecomposition};
use crate::matrices::DenseMatrix;
use crate::toeplitz::ToeplitzMatrix;

type C = Complex64;

pub const CLOSURE_NOTE: &str =
    "a small residual does not show that an exact factorization exists; only a Groebner basis or certificate decides nonexistence";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gauge {
    /// Pin the bottom-left coefficient of every factor but the last to 1.
    FixLeading,
    Free,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub s: usize,
    pub starts: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub tol_residual: f64,
    pub tol_step: f64,
    pub damping_init: f64,
    /// Damping is multiplied by this on an accepted step and divided by it
    /// on a rejected one.
    pub damping_decay: f64,
    pub gauge: Gauge,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            s: 2,
            starts: 64,
            seed: 0,
            max_iters: 400,
            tol_residual: 1e-10,
            tol_step: 1e-15,
            damping_init: 1e-3,
            damping_decay: 0.3,
            gauge: Gauge::FixLeading,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::BadParameter(m.into()));
        if self.s == 0 {
            return bad("factor count must be positive");
        }
        if self.starts == 0 {
            return bad("need at least one start");
        }
        if !(self.tol_residual > 0.0 && self.tol_step > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.damping_init > 0.0) || !(self.damping_decay > 0.0 && self.damping_decay < 1.0) {
            return bad("damping must be positive with decay in (0, 1)");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StartLog {
    pub start: usize,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub factors: Vec<ToeplitzMatrix<C>>,
    /// Frobenius norm of `∏T - M`, recomputed from `factors`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    pub best_start: usize,
    pub starts: Vec<StartLog>,
    pub note: &'static str,
}

impl SearchResult {
    pub fn decomposition(&self) -> ToeplitzDecomposition<C> {
        ToeplitzDecomposition::new(None, self.factors.clone(), "lm-search")
    }
}

fn product(factors: &[ToeplitzMatrix<C>], n: usize) -> DenseMatrix<C> {
    factors.iter().fold(DenseMatrix::identity(n), |acc, t| {
        acc.multiply(&t.to_dense()).expect("conformable")
    })
}

/// Residual `vec(∏T - m)` (row-major) and its complex Jacobian with one
/// column per coefficient `x_{k,j}`, factor-major.
pub fn residual_and_jacobian(factors: &[ToeplitzMatrix<C>], m: &DenseMatrix<C>) -> Result<(Vec<C>, DenseMatrix<C>)> {
    let n = m.rows();
    if !m.is_square() || factors.iter().any(|t| t.size() != n) {
        return Err(Error::DimensionMismatch("factors and target must share the size".into()));
    }
    let s = factors.len();
    let dense: Vec<DenseMatrix<C>> = factors.iter().map(|t| t.to_dense()).collect();
    // prefix[k] = T_1⋯T_k, suffix[k] = T_{k+1}⋯T_s
    let mut prefix = vec![DenseMatrix::identity(n)];
    for d in &dense {
        let next = prefix.last().expect("nonempty").multiply(d)?;
        prefix.push(next);
    }
    let mut suffix = vec![DenseMatrix::identity(n); s + 1];
    for k in (0..s).rev() {
        suffix[k] = dense[k].multiply(&suffix[k + 1])?;
    }
    let r: Vec<C> = prefix[s].sub(m)?.entries().to_vec();
    let w = 2 * n - 1;
    let mut jac = DenseMatrix::zeros(n * n, s * w);
    for k in 0..s {
        let (l, rr) = (&prefix[k], &suffix[k + 1]);
        for j in 0..w {
            let off = j as isize - (n as isize - 1);
            for a in 0..n {
                for b in 0..n {
                    // Σ_p L[a,p] R[p+off, b]
                    let mut acc = C::new(0.0, 0.0);
                    for p in 0..n {
                        let q = p as isize + off;
                        if q >= 0 && (q as usize) < n {
                            acc += l.get(a, p) * rr.get(q as usize, b);
                        }
                    }
                    jac.set(a * n + b, k * w + j, acc);
                }
            }
        }
    }
    Ok((r, jac))
}

fn norm(v: &[C]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

struct Problem<'a> {
    m: &'a DenseMatrix<C>,
    n: usize,
    s: usize,
    /// Global coefficient indices that are optimized.
    free: Vec<usize>,
}

impl Problem<'_> {
    fn factors(&self, x: &[C]) -> Vec<ToeplitzMatrix<C>> {
        let w = 2 * self.n - 1;
        (0..self.s)
            .map(|k| ToeplitzMatrix::new(self.n, x[k * w..(k + 1) * w].to_vec()).expect("length"))
            .collect()
    }

    fn residual(&self, x: &[C]) -> f64 {
        let p = product(&self.factors(x), self.n);
        norm(p.sub(self.m).expect("conformable").entries())
    }

    /// Realified residual `[Re r; Im r]` and Jacobian over `[Re x_free; Im x_free]`.
    fn real_system(&self, x: &[C]) -> (DVector<f64>, DMatrix<f64>) {
        let (r, j) = residual_and_jacobian(&self.factors(x), self.m).expect("conformable");
        let (rows, f) = (r.len(), self.free.len());
        let rv = DVector::from_fn(2 * rows, |i, _| if i < rows { r[i].re } else { r[i - rows].im });
        let jm = DMatrix::from_fn(2 * rows, 2 * f, |i, c| {
            let z = j.get(i % rows, self.free[c % f]);
            match (i < rows, c < f) {
                (true, true) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
                (false, false) => z.re,
            }
        });
        (rv, jm)
    }

    fn apply(&self, x: &[C], delta: &DVector<f64>) -> Vec<C> {
        let f = self.free.len();
        let mut y = x.to_vec();
        for (c, &g) in self.free.iter().enumerate() {
            y[g] += C::new(delta[c], delta[c + f]);
        }
        y
    }
}

fn run_start(p: &Problem<'_>, x0: Vec<C>, cfg: &SearchConfig) -> (Vec<C>, f64, usize) {
    let mut x = x0;
    let mut res = p.residual(&x);
    let mut lambda = cfg.damping_init;
    let mut iters = 0;
    while iters < cfg.max_iters && res > cfg.tol_residual {
        let (r, j) = p.real_system(&x);
        let jt = j.transpose();
        let jtj = &jt * &j;
        let g = &jt * &r;
        let scale = jtj.diagonal().iter().cloned().fold(0.0f64, f64::max).max(1e-300);
        // undamped Gauss–Newton first, then damped steps until one improves
        let mut accepted = false;
        if let Ok(gn) = j.clone().svd(true, true).solve(&(-&r), 1e-12 * scale.sqrt()) {
            let y = p.apply(&x, &gn);
            let ry = p.residual(&y);
            if ry.is_finite() && ry < res {
                let small = gn.norm() <= cfg.tol_step * (1.0 + x.iter().map(|z| z.norm()).fold(0.0, f64::max));
                x = y;
                res = ry;
                iters += 1;
                lambda = (lambda * cfg.damping_decay).max(1e-16);
                accepted = true;
                if small {
                    break;
                }
            }
        }
        while !accepted {
            if lambda > 1e16 {
                return (x, res, iters);
            }
            let mut a = jtj.clone();
            for d in 0..a.nrows() {
                a[(d, d)] += lambda * scale;
            }
            let Some(ch) = a.cholesky() else {
                lambda /= cfg.damping_decay;
                continue;
            };
            let delta = ch.solve(&(-&g));
            let y = p.apply(&x, &delta);
            let ry = p.residual(&y);
            if ry.is_finite() && ry < res {
                let small = delta.norm() <= cfg.tol_step * (1.0 + x.iter().map(|z| z.norm()).fold(0.0, f64::max));
                x = y;
                res = ry;
                iters += 1;
                lambda = (lambda * cfg.damping_decay).max(1e-16);
                accepted = true;
                if small {
                    return (x, res, iters);
                }
            } else {
                lambda /= cfg.damping_decay;
            }
        }
    }
    (x, res, iters)
}

/// Starting coefficients for start `k`: complex standard normal entries
/// (unit variance), from a stream that depends only on `(seed, k)`.
pub fn start_point(seed: u64, k: usize, n: usize, s: usize) -> Vec<C> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    (0..s * (2 * n - 1))
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C::new(re * h, im * h)
        })
        .collect()
}

/// Starts are run in batches of this size.
pub const START_BATCH: usize = 8;

/// Multi-start Levenberg–Marquardt. The best start (smallest residual,
/// lowest index on ties) is returned; the outcome does not depend on how
/// starts are scheduled.
pub fn lm_search(m: &DenseMatrix<C>, cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::DimensionMismatch("expected a nonempty square matrix".into()));
    }
    let n = m.rows();
    let (s, w) = (cfg.s, 2 * n - 1);
    let pinned: Vec<usize> = match cfg.gauge {
        Gauge::FixLeading if s > 1 => (0..s - 1).map(|k| k * w).collect(),
        _ => Vec::new(),
    };
    let problem = Problem {
        m,
        n,
        s,
        free: (0..s * w).filter(|g| !pinned.contains(g)).collect(),
    };
    let one_start = |k: usize| {
        let mut x0 = start_point(cfg.seed, k, n, s);
        for &g in &pinned {
            x0[g] = C::new(1.0, 0.0);
        }
        let (x, res, iters) = run_start(&problem, x0, cfg);
        (x, res, iters)
    };
    // fixed-size batches, stopping after the first batch with a converged
    // start; the set of starts run does not depend on scheduling
    let mut runs: Vec<(Vec<C>, f64, usize)> = Vec::with_capacity(cfg.starts);
    for lo in (0..cfg.starts).step_by(START_BATCH) {
        let hi = (lo + START_BATCH).min(cfg.starts);
        #[cfg(feature = "parallel")]
        let batch: Vec<(Vec<C>, f64, usize)> = {
            use rayon::prelude::*;
            (lo..hi).into_par_iter().map(one_start).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let batch: Vec<(Vec<C>, f64, usize)> = (lo..hi).map(one_start).collect();
        let done = batch.iter().any(|r| r.1 <= cfg.tol_residual);
        runs.extend(batch);
        if done {
            break;
        }
    }

    let starts: Vec<StartLog> = runs
        .iter()
        .enumerate()
        .map(|(k, (_, res, it))| StartLog {
            start: k,
            residual: *res,
            iterations: *it,
            converged: *res <= cfg.tol_residual,
        })
        .collect();
    let best = (0..runs.len())
        .min_by(|&a, &b| runs[a].1.total_cmp(&runs[b].1).then(a.cmp(&b)))
        .expect("starts >= 1");
    let factors = problem.factors(&runs[best].0);
    let residual = norm(product(&factors, n).sub(m)?.entries());
    Ok(SearchResult {
        factors,
        residual,
        iterations: runs[best].2,
        converged: residual <= cfg.tol_residual,
        best_start: best,
        starts,
        note: CLOSURE_NOTE,
    })
}

/// Rounds every coefficient to a Gaussian rational with denominators at
/// most `max_denom` and keeps the result only if its product is exactly `m`.
pub fn rationalize(
    factors: &[ToeplitzMatrix<C>],
    m: &DenseMatrix<GaussianRational>,
    max_denom: u64,
) -> Option<ToeplitzDecomposition<GaussianRational>> {
    let round = |x: f64| Rational::approximate(x, max_denom);
    let exact: Option<Vec<ToeplitzMatrix<GaussianRational>>> = factors
        .iter()
        .map(|t| {
            let coeffs: Option<Vec<GaussianRational>> = t
                .coeffs()
                .iter()
                .map(|z| Some(GaussianRational::new(round(z.re)?, round(z.im)?)))
                .collect();
            ToeplitzMatrix::new(t.size(), coeffs?).ok()
        })
        .collect();
    let d = ToeplitzDecomposition::new(None, exact?, "lm-search-rationalized");
    verify_decomposition(m, &d, 0.0).ok().map(|_| d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_factors(seed: u64, n: usize, s: usize) -> Vec<ToeplitzMatrix<C>> {
        let x = start_point(seed, 0, n, s);
        let w = 2 * n - 1;
        (0..s).map(|k| ToeplitzMatrix::new(n, x[k * w..(k + 1) * w].to_vec()).unwrap()).collect()
    }

    #[test]
    fn linear_jacobian_is_incidence() {
        let n = 4;
        let t = random_factors(1, n, 1);
        let m = DenseMatrix::zeros(n, n);
        let (_, j) = residual_and_jacobian(&t, &m).unwrap();
        for col in 0..2 * n - 1 {
            let off = col as isize - (n as isize - 1);
            let ones = (0..n * n).filter(|&r| j.get(r, col) == &C::new(1.0, 0.0)).count();
            let zeros = (0..n * n).filter(|&r| j.get(r, col) == &C::new(0.0, 0.0)).count();
            assert_eq!(ones, n - off.unsigned_abs());
            assert_eq!(ones + zeros, n * n);
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let mut worst = 0.0f64;
        for trial in 0..50u64 {
            let n = 2 + (trial % 3) as usize;
            let s = 1 + (trial % 3) as usize;
            let t = random_factors(100 + trial, n, s);
            let m = DenseMatrix::from_fn(n, n, |i, j| C::new(i as f64, j as f64));
            let (_, jac) = residual_and_jacobian(&t, &m).unwrap();
            let w = 2 * n - 1;
            let h = 1e-6;
            for k in 0..s {
                for j in 0..w {
                    let bump = |d: f64| {
                        let mut f = t.clone();
                        let mut c = f[k].coeffs().to_vec();
                        c[j] += C::new(d, 0.0);
                        f[k] = ToeplitzMatrix::new(n, c).unwrap();
                        residual_and_jacobian(&f, &m).unwrap().0
                    };
                    let (rp, rm) = (bump(h), bump(-h));
                    for r in 0..n * n {
                        let fd = (rp[r] - rm[r]) / (2.0 * h);
                        let an = *jac.get(r, k * w + j);
                        let rel = (fd - an).norm() / (1.0 + an.norm());
                        worst = worst.max(rel);
                    }
                }
            }
        }
        assert!(worst <= 1e-5, "worst relative error {worst}");
    }

    #[test]
    fn zero_residual_at_exact_point() {
        let t = random_factors(5, 3, 2);
        let m = product(&t, 3);
        let (r, _) = residual_and_jacobian(&t, &m).unwrap();
        assert!(norm(&r) < 1e-12);
    }

    #[test]
    fn linear_target_in_one_step() {
        let t = ToeplitzMatrix::new(3, [1.0, 2.0, 3.0, 4.0, 5.0].iter().map(|&v| C::new(v, -v)).collect()).unwrap();
        let cfg = SearchConfig {
            s: 1,
            starts: 1,
            ..SearchConfig::default()
        };
        let r = lm_search(&t.to_dense(), &cfg).unwrap();
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn generic_three_by_three_two_factors() {
        let x = start_point(42, 0, 3, 3);
        let m = DenseMatrix::from_fn(3, 3, |i, j| x[i * 3 + j]);
        let cfg = SearchConfig {
            s: 2,
            starts: 64,
            seed: 7,
            ..SearchConfig::default()
        };
        let r = lm_search(&m, &cfg).unwrap();
        assert!(r.residual < 1e-8, "residual {}", r.residual);
        assert!(r.starts.len() <= 64 && r.starts.len().is_multiple_of(START_BATCH));
        assert_eq!(r.note, CLOSURE_NOTE);
        // pinned gauge
        assert_eq!(r.factors[0].coeffs()[0], C::new(1.0, 0.0));
    }

    #[test]
    fn diagonal_four_three_factors() {
        let m = DenseMatrix::diag(&[1.0, 2.0, 3.0, 4.0].map(|v| C::new(v, 0.0)));
        let cfg = SearchConfig {
            s: 3,
            starts: 64,
            seed: 7,
            ..SearchConfig::default()
        };
        let r = lm_search(&m, &cfg).unwrap();
        assert!(r.residual < 1e-8, "residual {}", r.residual);
    }

    #[test]
    fn seed_determinism() {
        let m = DenseMatrix::from_fn(3, 3, |i, j| C::new((i * 3 + j) as f64, 1.0));
        let cfg = SearchConfig {
            starts: 6,
            seed: 11,
            max_iters: 30,
            ..SearchConfig::default()
        };
        let a = lm_search(&m, &cfg).unwrap();
        let b = lm_search(&m, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(start_point(3, 2, 3, 2), start_point(3, 2, 3, 2));
        assert_ne!(start_point(3, 2, 3, 2), start_point(3, 1, 3, 2));
    }

    #[test]
    fn monotone_accepted_steps() {
        let x = start_point(9, 0, 3, 3);
        let m = DenseMatrix::from_fn(3, 3, |i, j| x[i * 3 + j]);
        let problem = Problem {
            m: &m,
            n: 3,
            s: 2,
            free: (1..10).collect(),
        };
        let mut x0 = start_point(1, 0, 3, 2);
        x0[0] = C::new(1.0, 0.0);
        let mut last = problem.residual(&x0);
        for iters in 1..15 {
            let cfg = SearchConfig {
                max_iters: iters,
                ..SearchConfig::default()
            };
            let (_, res, _) = run_start(&problem, x0.clone(), &cfg);
            assert!(res <= last);
            last = res;
        }
    }

    #[test]
    fn rationalize_recovers_exact_factors() {
        let t1 = ToeplitzMatrix::new(3, [1.0, 0.5, 2.0, 0.0, -1.0].iter().map(|&v| C::new(v, 0.0)).collect()).unwrap();
        let t2 = ToeplitzMatrix::new(3, [0.25, 1.0, 3.0, 1.0, 0.0].iter().map(|&v| C::new(v, 1.0)).collect()).unwrap();
        let exact = product(&[t1.clone(), t2.clone()], 3).map(|z| {
            GaussianRational::new(Rational::approximate(z.re, 100).unwrap(), Rational::approximate(z.im, 100).unwrap())
        });
        let noisy: Vec<_> = [t1, t2]
            .iter()
            .map(|t| ToeplitzMatrix::new(3, t.coeffs().iter().map(|z| z + C::new(1e-11, -1e-11)).collect()).unwrap())
            .collect();
        assert!(rationalize(&noisy, &exact, 10_000).is_some());
        let wrong = DenseMatrix::identity(3);
        assert!(rationalize(&noisy, &wrong, 10_000).is_none());
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig { starts: 0, ..SearchConfig::default() }.validate().is_err());
        assert!(SearchConfig { tol_residual: 0.0, ..SearchConfig::default() }.validate().is_err());
        assert!(SearchConfig::default().validate().is_ok());
    }
}
