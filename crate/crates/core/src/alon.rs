//! Alon's triangle-free Cayley graph on GF(2)^{3k}.
//!
//! With `F = GF(2^k)` and `3 ∤ k`, split the nonzero elements of `F` by the
//! top bit of `a^7` (a bijection of `F*` because `gcd(7, 2^k - 1) = 1`):
//! `W0` gets the `2^{k-1} - 1` elements whose seventh power has top bit 0,
//! `W1` the `2^{k-1}` whose seventh power has top bit 1. Each `a` lifts to
//! `(a, a^3, a^5) ∈ F^3`, and the generator set is every sum of one lift from
//! `W0` and one from `W1`. Vertices are the `2^{3k}` vectors of `F^3`, with
//! `u ~ v` iff `u ⊕ v` is a generator.
//!
//! Any six distinct nonzero lifts are linearly independent (they are columns
//! of a parity-check matrix of the distance-7 binary BCH code), which is what
//! makes the generator set sum-free on triples, i.e. the graph triangle-free.

use std::collections::HashSet;
use std::io::{self, Write};

use serde::Serialize;
use thiserror::Error;

use crate::gf2k::{FieldCtx, FieldElem, FieldError};
use crate::graph::{Graph, GraphError, Vertex, VertexSet};

/// Values of `k` with a verified generator construction.
pub const SUPPORTED_K: [u32; 4] = [2, 4, 5, 7];

/// Largest adjacency (`N·D` entries) that [`build_alon`] will materialise.
/// `k = 7` needs about 8.5e9 entries and is only reachable through
/// [`alon_generators`] and [`cayley_spectrum`].
pub const MAX_ADJACENCY_ENTRIES: usize = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlonError {
    #[error("k={0} is divisible by 3; the construction needs 3 ∤ k")]
    DivisibleByThree(u32),
    #[error("k={0} is not supported (supported: 2, 4, 5, 7)")]
    Unsupported(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("k={k}: {entries} adjacency entries exceed the in-memory limit")]
    TooLarge { k: u32, entries: usize },
    #[error("construction fidelity: {0}")]
    Fidelity(String),
}

/// Parameters of the base graph for a given `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlonSpec {
    pub k: u32,
    /// Vertex count `2^{3k}`.
    pub order: usize,
    /// Degree `2^{k-1} (2^{k-1} - 1)`.
    pub degree: usize,
    /// Closed-form eigenvalue bound `9·2^k + 3·2^{k/2} + 1/4`.
    pub lambda_bound: f64,
}

impl AlonSpec {
    pub fn new(k: u32) -> Result<Self, AlonError> {
        if k.is_multiple_of(3) {
            return Err(AlonError::DivisibleByThree(k));
        }
        if k == 0 || 3 * k > 63 {
            return Err(AlonError::Unsupported(k));
        }
        let half = 1usize << (k - 1);
        Ok(AlonSpec {
            k,
            order: 1usize << (3 * k),
            degree: half * (half - 1),
            lambda_bound: 9.0 * 2f64.powi(k as i32) + 3.0 * 2f64.powf(k as f64 / 2.0) + 0.25,
        })
    }

    /// Second-moment floor `sqrt(D (N - D) / (N - 1))` that any `D`-regular
    /// graph on `N` vertices must meet.
    pub fn lambda_floor(&self) -> f64 {
        let (n, d) = (self.order as f64, self.degree as f64);
        (d * (n - d) / (n - 1.0)).sqrt()
    }
}

/// Generators as packed `3k`-bit vectors `a | a^3 << k | a^5 << 2k`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    k: u32,
    vectors: Vec<u64>,
}

impl GeneratorSet {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn vectors(&self) -> &[u64] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// First triple `(a, b, a ^ b)` of generators summing to zero, scanning
    /// all pairs with a membership lookup.
    pub fn zero_sum_triple(&self) -> Option<[u64; 3]> {
        for (i, &a) in self.vectors.iter().enumerate() {
            for &b in &self.vectors[i + 1..] {
                if self.vectors.binary_search(&(a ^ b)).is_ok() {
                    return Some([a, b, a ^ b]);
                }
            }
        }
        None
    }

    /// Dump format: `<k>` on the first line, then one zero-padded lowercase
    /// hex vector per line.
    pub fn write_dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        let width = (3 * self.k as usize).div_ceil(4);
        writeln!(w, "{}", self.k)?;
        for v in &self.vectors {
            writeln!(w, "{v:0width$x}")?;
        }
        w.flush()
    }
}

fn lift(ctx: &FieldCtx, a: FieldElem) -> u64 {
    let k = ctx.k();
    a.bits() as u64
        | (ctx.pow(a, 3).bits() as u64) << k
        | (ctx.pow(a, 5).bits() as u64) << (2 * k)
}

pub fn generator_set(ctx: &FieldCtx) -> Result<GeneratorSet, AlonError> {
    let k = ctx.k();
    if k.is_multiple_of(3) {
        return Err(AlonError::DivisibleByThree(k));
    }
    if k < 2 {
        return Err(AlonError::Unsupported(k));
    }
    let spec = AlonSpec::new(k)?;
    let top = 1u32 << (k - 1);
    let (mut w0, mut w1) = (Vec::new(), Vec::new());
    for a in ctx.elements().skip(1) {
        if ctx.pow(a, 7).bits() & top == 0 {
            w0.push(lift(ctx, a));
        } else {
            w1.push(lift(ctx, a));
        }
    }
    let mut vectors: Vec<u64> = w0
        .iter()
        .flat_map(|&x| w1.iter().map(move |&y| x ^ y))
        .collect();
    vectors.sort_unstable();
    let before = vectors.len();
    vectors.dedup();
    if vectors.len() != before || vectors.len() != spec.degree {
        return Err(AlonError::Fidelity(format!(
            "expected {} distinct generators, got {} ({} before dedup)",
            spec.degree,
            vectors.len(),
            before
        )));
    }
    if vectors.first() == Some(&0) {
        return Err(AlonError::Fidelity("zero vector among generators".into()));
    }
    Ok(GeneratorSet { k, vectors })
}

/// Generator set for `k` with its parameters, after the sum-freeness check.
pub fn alon_generators(k: u32) -> Result<(GeneratorSet, AlonSpec), AlonError> {
    if k.is_multiple_of(3) {
        return Err(AlonError::DivisibleByThree(k));
    }
    if !SUPPORTED_K.contains(&k) {
        return Err(AlonError::Unsupported(k));
    }
    let spec = AlonSpec::new(k)?;
    let gens = generator_set(&FieldCtx::new(k)?)?;
    if let Some(t) = gens.zero_sum_triple() {
        return Err(AlonError::Fidelity(format!(
            "generators {:#x} + {:#x} + {:#x} = 0",
            t[0], t[1], t[2]
        )));
    }
    Ok((gens, spec))
}

/// Materialises the Cayley graph and checks regularity and sum-freeness.
///
/// The eigenvalue half of the contract is checked separately by
/// [`check_lambda`], since it needs a spectral solve.
pub fn build_alon(k: u32) -> Result<(Graph, AlonSpec), AlonError> {
    let (gens, spec) = alon_generators(k)?;
    let entries = spec.order * spec.degree;
    if entries > MAX_ADJACENCY_ENTRIES {
        return Err(AlonError::TooLarge { k, entries });
    }
    Ok((cayley_graph(spec.order, &gens), spec))
}

pub fn cayley_graph(order: usize, gens: &GeneratorSet) -> Graph {
    let rows = (0..order as u64)
        .map(|u| {
            let mut row: Vec<Vertex> = gens.vectors().iter().map(|&s| (u ^ s) as Vertex).collect();
            row.sort_unstable();
            row
        })
        .collect();
    Graph::from_sorted_adjacency(rows)
}

/// The Cayley graph induced on `x`, relabelled so that the `i`-th smallest
/// member of `x` becomes vertex `i`. Never materialises the full graph.
pub fn induced_cayley(order: usize, gens: &GeneratorSet, x: &VertexSet) -> Result<Graph, GraphError> {
    let mask = x.mask(order)?;
    let mut rank = vec![Vertex::MAX; order];
    for (i, v) in x.iter().enumerate() {
        rank[v as usize] = i as Vertex;
    }
    let rows = x
        .iter()
        .map(|u| {
            let mut row: Vec<Vertex> = gens
                .vectors()
                .iter()
                .map(|&s| (u as u64 ^ s) as usize)
                .filter(|&w| mask[w])
                .map(|w| rank[w])
                .collect();
            row.sort_unstable();
            row
        })
        .collect();
    Ok(Graph::from_sorted_adjacency(rows))
}

/// Extreme nontrivial eigenvalues of a Cayley graph on `GF(2)^m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CayleySpectrum {
    pub lambda: f64,
    pub lambda_second: f64,
    pub lambda_min: f64,
}

/// Exact spectrum of the Cayley graph on `order = 2^m` vertices: the
/// eigenvalue for the character `x ↦ (-1)^{u·x}` is `Σ_s (-1)^{u·s}`, so a
/// Walsh-Hadamard transform of the generator indicator yields all of them.
pub fn cayley_spectrum(order: usize, gens: &GeneratorSet) -> CayleySpectrum {
    assert!(order.is_power_of_two() && order >= 2);
    let mut a = vec![0i64; order];
    for &s in gens.vectors() {
        a[s as usize] += 1;
    }
    let mut h = 1;
    while h < order {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (p, q) = (*x + *y, *x - *y);
                *x = p;
                *y = q;
            }
        }
        h *= 2;
    }
    let rest = &a[1..];
    let second = *rest.iter().max().unwrap() as f64;
    let min = *rest.iter().min().unwrap() as f64;
    CayleySpectrum {
        lambda: second.abs().max(min.abs()),
        lambda_second: second,
        lambda_min: min,
    }
}

/// Checks a computed eigenvalue against the closed-form bound and the
/// regular-graph floor.
pub fn check_lambda(spec: &AlonSpec, lambda: f64, tol: f64) -> Result<(), AlonError> {
    if lambda > spec.lambda_bound + tol {
        return Err(AlonError::Fidelity(format!(
            "lambda {lambda} exceeds bound {}",
            spec.lambda_bound
        )));
    }
    if lambda + tol < spec.lambda_floor() {
        return Err(AlonError::Fidelity(format!(
            "lambda {lambda} below the regular-graph floor {}",
            spec.lambda_floor()
        )));
    }
    Ok(())
}

/// Vertex-transitivity witness: true iff the translation `x ↦ x ⊕ u ⊕ v`
/// maps `N(u)` onto `N(v)`.
pub fn translation_maps_neighborhood(g: &Graph, u: Vertex, v: Vertex) -> bool {
    let shift = u ^ v;
    let mapped: HashSet<Vertex> = g.neighbors(u).iter().map(|&x| x ^ shift).collect();
    mapped.len() == g.neighbors(v).len() && g.neighbors(v).iter().all(|x| mapped.contains(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn spec_formulas() {
        let s = AlonSpec::new(4).unwrap();
        assert_eq!((s.order, s.degree), (4096, 56));
        assert!((s.lambda_bound - 156.25).abs() < 1e-12);
        let s = AlonSpec::new(5).unwrap();
        assert_eq!((s.order, s.degree), (32768, 240));
        assert!((s.lambda_bound - (288.0 + 3.0 * 32f64.sqrt() + 0.25)).abs() < 1e-12);
        assert!((s.lambda_bound - 305.2206).abs() < 1e-4);
        assert!((AlonSpec::new(4).unwrap().lambda_floor() - (56.0f64 * 4040.0 / 4095.0).sqrt()).abs() < 1e-12);
        assert_eq!(AlonSpec::new(3), Err(AlonError::DivisibleByThree(3)));
    }

    #[test]
    fn generator_counts() {
        for (k, d) in [(2, 2), (4, 56), (5, 240), (7, 4032)] {
            let g = generator_set(&FieldCtx::new(k).unwrap()).unwrap();
            assert_eq!(g.len(), d);
            assert!(g.vectors().iter().all(|&v| v != 0 && v >> (3 * k) == 0));
            assert!(g.vectors().windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(
            generator_set(&FieldCtx::new(3).unwrap()),
            Err(AlonError::DivisibleByThree(3))
        );
        assert_eq!(generator_set(&FieldCtx::new(1).unwrap()), Err(AlonError::Unsupported(1)));
    }

    #[test]
    fn generator_sets_are_sum_free() {
        // brute force over unordered triples, independent of the pair scan
        for k in [2, 4, 5] {
            let g = generator_set(&FieldCtx::new(k).unwrap()).unwrap();
            let set: HashSet<u64> = g.vectors().iter().copied().collect();
            let v = g.vectors();
            for i in 0..v.len() {
                for j in i + 1..v.len() {
                    let c = v[i] ^ v[j];
                    assert!(!set.contains(&c), "k={k}");
                }
            }
            assert_eq!(g.zero_sum_triple(), None);
        }
    }

    #[test]
    fn small_base_graph() {
        let (g, spec) = build_alon(2).unwrap();
        assert_eq!((g.n(), spec.degree), (64, 2));
        assert_eq!(g.regular_degree(), Some(2));
        assert_eq!(g.triangle_count(), 0);
        assert_eq!(build_alon(3), Err(AlonError::DivisibleByThree(3)));
        assert_eq!(build_alon(8), Err(AlonError::Unsupported(8)));
        assert_eq!(build_alon(1), Err(AlonError::Unsupported(1)));
        assert!(matches!(build_alon(7), Err(AlonError::TooLarge { k: 7, .. })));
    }

    #[test]
    fn k4_base_graph_structure() {
        let (g, spec) = build_alon(4).unwrap();
        assert_eq!(g.n(), 4096);
        assert_eq!(g.regular_degree(), Some(56));
        assert_eq!(g.triangle_count(), 0);
        assert!(g.m() == spec.order * spec.degree / 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let u = rng.random_range(0..4096);
            let v = rng.random_range(0..4096);
            assert!(translation_maps_neighborhood(&g, u, v));
        }
    }

    #[test]
    fn dump_format() {
        let g = generator_set(&FieldCtx::new(2).unwrap()).unwrap();
        let mut buf = Vec::new();
        g.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "2");
        assert!(lines[1..].iter().all(|l| l.len() == 2));
        for l in &lines[1..] {
            assert!(g.vectors().contains(&u64::from_str_radix(l, 16).unwrap()));
        }
    }

    #[test]
    fn lambda_check_bounds() {
        let spec = AlonSpec::new(4).unwrap();
        assert!(check_lambda(&spec, 56.0, 1e-6).is_ok());
        assert!(check_lambda(&spec, 157.0, 1e-6).is_err());
        assert!(check_lambda(&spec, 5.0, 1e-6).is_err());
    }

    #[test]
    fn induced_matches_graph_induced() {
        let (gens, spec) = alon_generators(4).unwrap();
        let full = cayley_graph(spec.order, &gens);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let x: VertexSet = (0..700).map(|_| rng.random_range(0..4096)).collect();
        let (expect, _) = full.induced(&x).unwrap();
        assert_eq!(induced_cayley(spec.order, &gens, &x).unwrap(), expect);
        let everything = VertexSet::full(spec.order);
        assert_eq!(induced_cayley(spec.order, &gens, &everything).unwrap(), full);
    }

    #[test]
    fn character_sums_on_small_cases() {
        // C4 as the Cayley graph of GF(2)^2 with generators {01, 10}: spectrum {2, 0, 0, -2}
        let gens = GeneratorSet { k: 0, vectors: vec![1, 2] };
        let sp = cayley_spectrum(4, &gens);
        assert_eq!((sp.lambda_second, sp.lambda_min, sp.lambda), (0.0, -2.0, 2.0));
        let (gens, spec) = alon_generators(2).unwrap();
        let sp = cayley_spectrum(spec.order, &gens);
        assert!(sp.lambda <= spec.lambda_bound);
    }
}
