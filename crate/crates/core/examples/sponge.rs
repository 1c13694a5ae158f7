//! Mine a C5 sponge inside a random induced subgraph of the k=4 base graph and
//! use it to lower degrees by exact even amounts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfreg::alon::{alon_generators, induced_cayley};
use tfreg::graph::{Vertex, VertexSet};
use tfreg::sponge::{build_sponge, SpongeConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n: usize = std::env::args().nth(1).map_or(Ok(3500), |s| s.parse())?;
    let (gens, spec) = alon_generators(4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let x: VertexSet = rand::seq::index::sample(&mut rng, spec.order, n)
        .into_iter()
        .map(|i| i as Vertex)
        .collect();
    let g = induced_cayley(spec.order, &gens, &x)?;
    let pn = spec.degree as f64 * n as f64 / spec.order as f64;
    println!("A[X]: n = {n}, expected degree {pn:.1}, min {} max {}", g.min_degree(), g.max_degree());

    let cfg = SpongeConfig::desk(pn);
    let sp = build_sponge(&g, &cfg, 1)?;
    sp.audit(&g)?;
    let fewest = (0..n as Vertex).map(|v| sp.anchored(v).len()).min().unwrap_or(0);
    println!(
        "{} pentagons, |R| = {}, |S| = {}, max degree of R+S = {}, fewest anchored at a vertex = {fewest}",
        sp.pentagon_count(),
        sp.r.m(),
        sp.s.m(),
        sp.union().max_degree()
    );

    let f: Vec<u32> = (0..n as Vertex)
        .map(|v| rng.random_range(0..=sp.anchored(v).len() as u32))
        .collect();
    let h = sp.reduce(&f)?;
    let exact = (0..n as Vertex).all(|v| h.degree(v) + 2 * f[v as usize] == sp.s.degree(v));
    println!("random reduction: |H| = {}, d_H = d_S - 2f everywhere: {exact}", h.m());

    let p = sp.pentagons().next().expect("sponge is non-empty");
    println!("a pentagon anchored at {}: cycle {:?}", p.anchor(), p.cycle());
    Ok(())
}
