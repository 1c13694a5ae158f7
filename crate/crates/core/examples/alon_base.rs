//! Build the Cayley base graph for `k`, check regularity and triangle-freeness,
//! and read its exact spectrum off the characters of Z_2^{3k}.
//!
//! ```text
//! cargo run --release --example alon_base -- 5
//! cargo run --release --example alon_base -- 4 base.el gens.txt
//! ```
//!
//! For `k = 7` only the generators and the spectrum are computed; the graph
//! itself is too large to hold in memory.

use std::path::Path;

use tfreg::alon::{alon_generators, build_alon, cayley_spectrum, check_lambda, AlonError};
use tfreg::graph::io::save;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let k: u32 = args.next().map_or(Ok(4), |s| s.parse())?;
    let (gens, spec) = alon_generators(k)?;
    println!("k = {k}: N = {}, D = {}, bound = {:.2}", spec.order, spec.degree, spec.lambda_bound);
    println!("{} generators, zero-sum triple: {:?}", gens.len(), gens.zero_sum_triple());

    let sp = cayley_spectrum(spec.order, &gens);
    println!(
        "character sums: lambda_2 = {}, lambda_min = {}, lambda = {}",
        sp.lambda_second, sp.lambda_min, sp.lambda
    );
    check_lambda(&spec, sp.lambda, 1e-9)?;
    println!("floor {:.3} <= lambda <= bound {:.3}", spec.lambda_floor(), spec.lambda_bound);

    match build_alon(k) {
        Ok((g, _)) => {
            println!(
                "materialised: m = {}, regular degree {:?}, triangles {}, components {}",
                g.m(),
                g.regular_degree(),
                g.triangle_count(),
                g.components().len()
            );
            if let Some(path) = args.next() {
                save(&g, Path::new(&path))?;
                println!("wrote {path}");
            }
            if let Some(path) = args.next() {
                gens.write_dump(std::fs::File::create(&path)?)?;
                println!("wrote {path}");
            }
        }
        Err(e @ AlonError::TooLarge { .. }) => println!("not materialised: {e}"),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}
