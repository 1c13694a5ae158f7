//! Synthesise a triangle-free regular graph and print its certificate summary.
//!
//! ```text
//! cargo run --release --example synthesize -- 3500 42
//! cargo run --release --example synthesize -- 4000 7 loss_mean=10 bundle_target=4
//! ```

use tfreg::regularize::{plan_with, synthesize, Profile};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(3500), |s| s.parse())?;
    let seed: u64 = args.next().map_or(Ok(42), |s| s.parse())?;

    let overrides: Vec<(String, String)> = args
        .map(|kv| match kv.split_once('=') {
            Some((k, v)) => Ok((k.to_string(), v.to_string())),
            None => Err(format!("expected key=value, got {kv:?}")),
        })
        .collect::<Result<_, _>>()?;

    let plan = plan_with(n, Profile::Desk, &overrides)?;
    let out = synthesize(&plan, seed, 1)?;
    let c = &out.certificate;
    println!("n = {}, base k = {} (N = {}, D = {})", c.n, c.k, c.order, c.degree);
    println!("d' = {}  regular = {}  triangles = {}", c.d_prime, c.regular, c.triangle_count);
    println!(
        "lambda' = {:.4} <= {:.4} = lambda(base) {} + deleted max degree {}",
        c.lambda_final.computed, c.lambda_final.bound, c.lambda_base.computed, c.max_deleted_degree
    );
    println!(
        "d'/n^(2/3) = {:.4}, lambda'/sqrt(d' ln n) = {:.4}",
        c.measured.degree_ratio, c.measured.lambda_ratio
    );
    println!("attempt {} of {}", c.seeds.attempt, plan.retry_cap);
    for r in &c.stage_log {
        println!(
            "  {:<14} -{:<6} +{:<6} max degree change {}",
            r.stage.to_string(),
            r.edges_removed,
            r.edges_added,
            r.max_degree_delta
        );
    }
    println!("{}", serde_json::to_string(&c.measured)?);
    Ok(())
}
