//! Second adjacency eigenvalue of small classic graphs and of a random regular
//! graph, by the dense solver and by Lanczos.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tfreg::graph::generators::{complete, cycle, petersen, random_regular};
use tfreg::graph::Graph;
use tfreg::spectral::{dense_spectrum, lambda, SpectralOptions};

fn show(name: &str, g: &Graph) -> Result<(), Box<dyn std::error::Error>> {
    let dense = lambda(g, &SpectralOptions::dense())?;
    let lz = lambda(g, &SpectralOptions::lanczos(1e-10))?;
    println!(
        "{name:<22} dense {:>10.6}   lanczos {:>10.6}  ({} iterations, residual {:.1e})",
        dense.lambda, lz.lambda, lz.iterations, lz.residual
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    show("K4", &complete(4))?;
    show("C5", &cycle(5))?;
    show("Petersen", &petersen())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let g = random_regular(400, 7, &mut rng);
    show("random 7-regular, 400", &g)?;
    // Alon-Boppana: lambda of a random d-regular graph sits near 2 sqrt(d-1)
    println!("2*sqrt(d-1) = {:.6}", 2.0 * 6f64.sqrt());

    let ev = dense_spectrum(&petersen())?;
    println!("Petersen spectrum: {ev:.3?}");
    Ok(())
}
