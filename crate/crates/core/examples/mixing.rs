//! Expander mixing on the k=2 base graph: edge counts between random vertex
//! sets stay within `λ·sqrt(|S||T|)` of the density prediction. Also shows the
//! additive effect of deleting a bounded-degree subgraph on `λ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfreg::alon::build_alon;
use tfreg::graph::{Graph, OverlayMode, Vertex, VertexSet};
use tfreg::spectral::{deletion_bounds, lambda, mixing_deviation, PseudorandomBounds, SpectralOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k: u32 = std::env::args().nth(1).map_or(Ok(2), |s| s.parse())?;
    let (g, _) = build_alon(k)?;
    let lam = lambda(&g, &SpectralOptions::dense())?.lambda;
    println!("base graph: n = {}, d = {:?}, lambda = {lam:.4}", g.n(), g.regular_degree());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0f64;
    for _ in 0..200 {
        let pick = |rng: &mut ChaCha8Rng| -> VertexSet {
            (0..g.n() as Vertex).filter(|_| rng.random_bool(0.3)).collect()
        };
        let (s, t) = (pick(&mut rng), pick(&mut rng));
        worst = worst.max(mixing_deviation(&g, &s, &t, lam)?.bound_ratio);
    }
    println!("worst bound ratio over 200 pairs: {worst:.4} (at most 1)");

    // Remove a perfect matching made of generator-0 edges: x ~ x ^ s0.
    let s0 = g.neighbors(0)[0];
    let matching: Vec<(Vertex, Vertex)> = (0..g.n() as Vertex)
        .filter(|&x| x < x ^ s0)
        .map(|x| (x, x ^ s0))
        .collect();
    let m = Graph::from_edges(g.n(), matching)?;
    let pruned = g.overlay(&m, OverlayMode::Remove)?;
    let after = lambda(&pruned, &SpectralOptions::dense())?.lambda;
    let bound = deletion_bounds(PseudorandomBounds { lambda: lam, beta: lam }, m.max_degree());
    println!("after deleting a perfect matching: lambda = {after:.4} <= {:.4}", bound.lambda);
    Ok(())
}
