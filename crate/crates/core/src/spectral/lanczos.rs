//! Symmetric Lanczos with full reorthogonalisation, restricted to the
//! complement of the all-ones vector.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{SpectralError, SpectralOptions};
use crate::graph::Graph;

pub(super) struct Extremes {
    pub max: f64,
    pub min: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn matvec(g: &Graph, x: &[f64], y: &mut [f64]) {
    let kernel = |(v, out): (usize, &mut f64)| {
        let mut s = 0.0;
        for &w in g.neighbors(v as u32) {
            s += x[w as usize];
        }
        *out = s;
    };
    if rayon::current_num_threads() > 1 && rayon::current_thread_index().is_some() {
        y.par_iter_mut().enumerate().with_min_len(1024).for_each(kernel);
    } else {
        y.iter_mut().enumerate().for_each(kernel);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn remove_mean(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    for xi in x.iter_mut() {
        *xi -= mean;
    }
}

fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

fn tridiagonal(alpha: &[f64], beta: &[f64]) -> SymmetricEigen<f64, nalgebra::Dyn> {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    SymmetricEigen::new(t)
}

/// Explicit residual `‖A y − θ y‖` of the Ritz vector `y = Q s`.
fn ritz_residual(g: &Graph, basis: &[Vec<f64>], s: &[f64], theta: f64) -> f64 {
    let n = g.n();
    let mut y = vec![0.0; n];
    for (q, &c) in basis.iter().zip(s) {
        axpy(c, q, &mut y);
    }
    let ny = norm(&y);
    let mut ay = vec![0.0; n];
    matvec(g, &y, &mut ay);
    axpy(-theta, &y, &mut ay);
    norm(&ay) / ny
}

pub(super) fn extreme_pair(
    g: &Graph,
    degree: u32,
    opts: &SpectralOptions,
) -> Result<Extremes, SpectralError> {
    let n = g.n();
    if n < 2 {
        return Ok(Extremes {
            max: 0.0,
            min: 0.0,
            residual: 0.0,
            iterations: 0,
        });
    }
    let dim = n - 1;
    let cap = opts
        .max_iter
        .unwrap_or_else(|| (10.0 * (n as f64).sqrt()).ceil() as usize)
        .clamp(1, dim);
    let scale = (degree as f64).max(1.0);
    let target = opts.tol * scale;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    remove_mean(&mut q);
    let nq = norm(&q);
    q.iter_mut().for_each(|x| *x /= nq);

    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut next_check = 8usize;

    loop {
        let j = basis.len() - 1;
        matvec(g, &basis[j], &mut w);
        remove_mean(&mut w);
        let a = dot(&basis[j], &w);
        axpy(-a, &basis[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        // two passes of classical Gram-Schmidt keep the basis orthogonal to
        // working precision
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                axpy(-c, q, &mut w);
            }
            remove_mean(&mut w);
        }
        alpha.push(a);
        let b = norm(&w);
        let steps = alpha.len();
        let breakdown = b <= 1e-12 * scale;
        let exhausted = steps >= cap;

        if breakdown || exhausted || steps >= next_check {
            next_check = steps + (steps / 5).max(4);
            let eig = tridiagonal(&alpha, &beta);
            let vals = &eig.eigenvalues;
            let (mut imax, mut imin) = (0, 0);
            for i in 0..vals.len() {
                if vals[i] > vals[imax] {
                    imax = i;
                }
                if vals[i] < vals[imin] {
                    imin = i;
                }
            }
            let estimate = |i: usize| (b * eig.eigenvectors[(steps - 1, i)]).abs();
            let residual_now = if breakdown || (estimate(imax) <= target && estimate(imin) <= target) {
                let residual = [imax, imin]
                    .iter()
                    .map(|&i| {
                        let s: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
                        ritz_residual(g, &basis, &s, vals[i])
                    })
                    .fold(0.0, f64::max);
                if residual <= target || breakdown {
                    return Ok(Extremes {
                        max: vals[imax],
                        min: vals[imin],
                        residual,
                        iterations: steps,
                    });
                }
                residual
            } else {
                estimate(imax).max(estimate(imin))
            };
            if exhausted {
                return Err(SpectralError::NoConvergence {
                    iterations: steps,
                    residual: residual_now,
                    target,
                });
            }
        }
        beta.push(b);
        let next: Vec<f64> = w.iter().map(|x| x / b).collect();
        basis.push(next);
    }
}
