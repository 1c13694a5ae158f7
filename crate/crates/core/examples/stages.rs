//! The four regularisation steps on the Petersen graph with two sponge edges
//! at vertex 0: trimming excess degree, routing what is left through a
//! prescribed subgraph, a bounded-degree spanning tree and a parity
//! correction inside it.

use tfreg::graph::generators::petersen;
use tfreg::graph::Graph;
use tfreg::regularize::{bounded_spanning_tree, parity_subgraph, prescribed_subgraph, trim_excess};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g0 = petersen();
    let s = Graph::from_edges(10, [(0, 2), (0, 3)])?;
    let total = |g: &Graph| -> Vec<u32> { (0..10).map(|v| g.degree(v) + s.degree(v)).collect() };
    println!("d(G0 + S) = {:?}", total(&g0));

    let trim = trim_excess(&g0, &s, 3)?;
    println!("trim to 3 removed {:?}; excess left h = {:?}", trim.removed, trim.h);

    let f = prescribed_subgraph(&trim.g1, &trim.w, &trim.h, 1)?;
    let g2 = trim.g1.difference(&f);
    println!("prescribed F = {:?}", f.edges().collect::<Vec<_>>());
    println!("d(G2 + S) = {:?}", total(&g2));

    let t = bounded_spanning_tree(&g2, 3)?;
    println!("spanning tree, max degree {}: {:?}", t.max_degree(), t.edges().collect::<Vec<_>>());

    let target: Vec<bool> = total(&g2).iter().map(|d| d % 2 == 1).collect();
    let t2 = parity_subgraph(&t, &target)?;
    let g3 = g2.difference(&t2);
    println!("removed T' = {:?}", t2.edges().collect::<Vec<_>>());
    println!("d(G* + S) = {:?}, all even", total(&g3));
    Ok(())
}
