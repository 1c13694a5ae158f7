//! Second adjacency eigenvalue `λ(G) = max(|λ₂|, |λₙ|)` and the bounds built
//! on it: expander mixing and the additive deletion rule.

mod dense;
mod lanczos;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};

pub use dense::{adjacency_matrix, dense_spectrum, DENSE_MAX_ORDER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("dense eigensolver limited to n <= {DENSE_MAX_ORDER}, got n = {0}")]
    DenseTooLarge(usize),
    #[error("operation requires a regular graph")]
    NotRegular,
    #[error("Lanczos did not converge in {iterations} iterations (residual {residual:.3e}, target {target:.3e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        target: f64,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Lanczos,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dense => "dense",
            Method::Lanczos => "lanczos",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dense" => Ok(Method::Dense),
            "lanczos" => Ok(Method::Lanczos),
            other => Err(format!("unknown method {other:?} (expected dense|lanczos)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOptions {
    pub method: Method,
    /// Relative residual target: Lanczos stops once `‖Ax − θx‖ ≤ tol·d` for
    /// both extreme Ritz pairs.
    pub tol: f64,
    /// Defaults to `⌈10·√n⌉`, clamped to `n − 1`.
    pub max_iter: Option<usize>,
    /// Worker threads for the matrix-vector product. Results are identical
    /// for any value: each output entry is summed in a fixed order.
    pub threads: usize,
    /// Seed of the Lanczos start vector.
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            method: Method::Lanczos,
            tol: 1e-6,
            max_iter: None,
            threads: 1,
            seed: 0x5eed_1a2c,
        }
    }
}

impl SpectralOptions {
    pub fn dense() -> Self {
        SpectralOptions {
            method: Method::Dense,
            ..Default::default()
        }
    }

    pub fn lanczos(tol: f64) -> Self {
        SpectralOptions {
            tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    /// `max(|λ₂|, |λₙ|)`.
    pub lambda: f64,
    /// Largest eigenvalue orthogonal to the all-ones vector (`λ₂`).
    pub lambda_second: f64,
    /// Smallest eigenvalue (`λₙ`).
    pub lambda_min: f64,
    pub method: Method,
    /// Largest eigen-residual norm among the reported extreme pairs; zero for
    /// the dense path.
    pub residual: f64,
    pub iterations: usize,
    pub tolerance: f64,
    pub regular_degree: Option<u32>,
}

/// Computes `λ(G)`.
///
/// The dense path accepts any graph with `n ≤ 4096` and reads `λ₂`, `λₙ`
/// off the full spectrum. The Lanczos path needs a regular graph: it works on
/// the orthogonal complement of the all-ones vector, which the adjacency
/// operator of a regular graph preserves.
pub fn lambda(g: &Graph, opts: &SpectralOptions) -> Result<SpectralReport, SpectralError> {
    let regular = g.regular_degree();
    match opts.method {
        Method::Dense => {
            let spectrum = dense_spectrum(g)?;
            let n = spectrum.len();
            let (second, min) = if n >= 2 {
                (spectrum[1], spectrum[n - 1])
            } else {
                (0.0, 0.0)
            };
            Ok(SpectralReport {
                lambda: second.abs().max(min.abs()),
                lambda_second: second,
                lambda_min: min,
                method: Method::Dense,
                residual: 0.0,
                iterations: 0,
                tolerance: opts.tol,
                regular_degree: regular,
            })
        }
        Method::Lanczos => {
            let d = regular.ok_or(SpectralError::NotRegular)?;
            let run = || lanczos::extreme_pair(g, d, opts);
            let out = if opts.threads > 1 {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(opts.threads)
                    .build()
                    .map_err(|e| SpectralError::ThreadPool(e.to_string()))?
                    .install(run)?
            } else {
                run()?
            };
            Ok(SpectralReport {
                lambda: out.max.abs().max(out.min.abs()),
                lambda_second: out.max,
                lambda_min: out.min,
                method: Method::Lanczos,
                residual: out.residual,
                iterations: out.iterations,
                tolerance: opts.tol,
                regular_degree: regular,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixingDeviation {
    /// Ordered-pair edge count `e(S, T)`.
    pub e_st: u64,
    /// `(d/n)·|S|·|T|`.
    pub expected: f64,
    pub deviation: f64,
    /// `deviation / (λ·sqrt(|S||T|))`; the mixing lemma says this is `≤ 1`.
    pub bound_ratio: f64,
}

/// Measures how far `e(S, T)` strays from its density prediction, relative to
/// the mixing-lemma allowance `λ·sqrt(|S||T|)`.
pub fn mixing_deviation(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    lambda: f64,
) -> Result<MixingDeviation, SpectralError> {
    let d = g.regular_degree().ok_or(SpectralError::NotRegular)?;
    let e_st = g.edges_between(s, t)?;
    t.mask(g.n())?;
    let size = s.len() as f64 * t.len() as f64;
    let expected = if g.n() == 0 {
        0.0
    } else {
        d as f64 / g.n() as f64 * size
    };
    let deviation = (e_st as f64 - expected).abs();
    let allowance = lambda * size.sqrt();
    let bound_ratio = if allowance > 0.0 {
        deviation / allowance
    } else if deviation == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(MixingDeviation {
        e_st,
        expected,
        deviation,
        bound_ratio,
    })
}

/// Pseudorandomness parameters of a graph: its eigenvalue bound `λ` and its
/// bijumbledness `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PseudorandomBounds {
    pub lambda: f64,
    pub beta: f64,
}

/// Deleting a subgraph of maximum degree `Δ(F)` worsens both `λ` (when the
/// result is regular) and `β` by at most `Δ(F)`.
pub fn deletion_bounds(base: PseudorandomBounds, max_deleted_degree: u32) -> PseudorandomBounds {
    PseudorandomBounds {
        lambda: base.lambda + max_deleted_degree as f64,
        beta: base.beta + max_deleted_degree as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{complete, cycle, petersen};

    fn both(g: &Graph) -> (SpectralReport, SpectralReport) {
        let opts = SpectralOptions {
            tol: 1e-10,
            max_iter: Some(g.n()),
            ..Default::default()
        };
        (
            lambda(g, &SpectralOptions::dense()).unwrap(),
            lambda(g, &opts).unwrap(),
        )
    }

    #[test]
    fn complete_graph() {
        let (d, l) = both(&complete(4));
        assert!((d.lambda - 1.0).abs() < 1e-12);
        assert!((l.lambda - 1.0).abs() < 1e-9);
    }

    #[test]
    fn five_cycle() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let (d, l) = both(&cycle(5));
        assert!((d.lambda - golden).abs() < 1e-12);
        assert!((l.lambda - golden).abs() < 1e-9);
        assert!((d.lambda_min + golden).abs() < 1e-12);
    }

    #[test]
    fn petersen_graph() {
        // A² + A − 2I = J, so on 1⊥ every eigenvalue solves x² + x − 2 = 0.
        let p = petersen();
        let a = adjacency_matrix(&p).unwrap();
        let lhs = &a * &a + &a - nalgebra::DMatrix::<f64>::identity(10, 10) * 2.0;
        assert!(lhs.iter().all(|&x| x == 1.0));
        let (d, l) = both(&p);
        assert!((d.lambda - 2.0).abs() < 1e-12);
        assert!((d.lambda_second - 1.0).abs() < 1e-12);
        assert!((l.lambda - 2.0).abs() < 1e-9);
        assert!(l.residual <= 1e-10 * 3.0);
    }

    #[test]
    fn lanczos_requires_regular() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(lambda(&g, &SpectralOptions::default()), Err(SpectralError::NotRegular));
        // dense handles it via the full spectrum {1, 0, -1}
        let r = lambda(&g, &SpectralOptions::dense()).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dense_size_limit() {
        let g = Graph::empty(DENSE_MAX_ORDER + 1);
        assert_eq!(
            lambda(&g, &SpectralOptions::dense()),
            Err(SpectralError::DenseTooLarge(DENSE_MAX_ORDER + 1))
        );
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(9);
        let g = crate::graph::generators::random_regular(300, 6, &mut rng);
        let one = lambda(&g, &SpectralOptions::lanczos(1e-8)).unwrap();
        let four = lambda(
            &g,
            &SpectralOptions {
                threads: 4,
                ..SpectralOptions::lanczos(1e-8)
            },
        )
        .unwrap();
        assert_eq!(one.lambda.to_bits(), four.lambda.to_bits());
    }

    #[test]
    fn mixing_examples() {
        let k4 = complete(4);
        let all = VertexSet::full(4);
        let m = mixing_deviation(&k4, &all, &all, 1.0).unwrap();
        assert_eq!(m.e_st, 12);
        assert_eq!(m.expected, 12.0);
        assert_eq!(m.deviation, 0.0);
        let m = mixing_deviation(&k4, &VertexSet::new(vec![0]), &VertexSet::new(vec![1, 2]), 1.0)
            .unwrap();
        assert_eq!(m.e_st, 2);
        assert_eq!(m.expected, 1.5);
        assert_eq!(m.deviation, 0.5);
        assert!(m.bound_ratio <= 1.0);
        assert!(mixing_deviation(&k4, &VertexSet::new(vec![9]), &all, 1.0).is_err());
        assert!(mixing_deviation(&k4, &all, &VertexSet::new(vec![9]), 1.0).is_err());
    }

    #[test]
    fn deletion_rule() {
        let b = PseudorandomBounds { lambda: 10.0, beta: 3.0 };
        assert_eq!(deletion_bounds(b, 0), b);
        let b = PseudorandomBounds { lambda: 156.25, beta: 0.0 };
        assert_eq!(deletion_bounds(b, 40).lambda, 196.25);
    }
}
