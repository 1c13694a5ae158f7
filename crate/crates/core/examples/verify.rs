//! Load an edge-list file and report the properties `tfreg verify` checks.
//!
//! ```text
//! cargo run --release --bin tfreg -- synth --n 3500 --seed 1 --profile desk --out g.el --cert c.json
//! cargo run --release --example verify -- g.el
//! ```

use std::path::PathBuf;

use tfreg::graph::io::load;
use tfreg::spectral::{lambda, Method, SpectralOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path: PathBuf = std::env::args()
        .nth(1)
        .ok_or("usage: verify <graph.el>")?
        .into();
    let g = load(&path)?;
    let stats = g.degree_stats();
    println!("{}: n = {}, m = {}", path.display(), g.n(), g.m());
    println!("degrees: min {} max {}, histogram {:?}", stats.min, stats.max, stats.histogram);
    println!("triangles: {} (first: {:?})", g.triangle_count(), g.triangles(3));
    println!("components: {}", g.components().len());
    let method = if g.regular_degree().is_some() { Method::Lanczos } else { Method::Dense };
    let r = lambda(&g, &SpectralOptions { method, tol: 1e-9, ..Default::default() })?;
    println!(
        "lambda = {:.6} (lambda_2 {:.6}, lambda_min {:.6}) by {}",
        r.lambda, r.lambda_second, r.lambda_min, r.method
    );
    Ok(())
}
