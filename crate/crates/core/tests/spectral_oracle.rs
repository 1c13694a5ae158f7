//! Checks the iterative eigenvalue solver on the Cayley base graphs against
//! their spectrum computed directly from characters, one eigenvalue at a time.

use tfreg::alon::{alon_generators, build_alon};
use tfreg::spectral::{lambda, SpectralOptions};

/// `(λ₂, λₙ)` from `μ_u = Σ_s (−1)^{popcount(u ∧ s)}` over all `u ≠ 0`.
fn character_extremes(k: u32) -> (f64, f64) {
    let (gens, spec) = alon_generators(k).unwrap();
    let (mut hi, mut lo) = (i64::MIN, i64::MAX);
    for u in 1..spec.order as u64 {
        let mu: i64 = gens
            .vectors()
            .iter()
            .map(|&s| if (u & s).count_ones() % 2 == 0 { 1 } else { -1 })
            .sum();
        hi = hi.max(mu);
        lo = lo.min(mu);
    }
    (hi as f64, lo as f64)
}

fn check(k: u32) {
    let (g, spec) = build_alon(k).unwrap();
    let (second, min) = character_extremes(k);
    let r = lambda(&g, &SpectralOptions::lanczos(1e-9)).unwrap();
    assert!(r.residual <= 1e-9 * spec.degree as f64);
    assert!((r.lambda_second - second).abs() < 1e-6, "k={k}: {} vs {second}", r.lambda_second);
    assert!((r.lambda_min - min).abs() < 1e-6, "k={k}: {} vs {min}", r.lambda_min);
    assert!((r.lambda - second.abs().max(min.abs())).abs() < 1e-6);
    assert!(r.lambda <= spec.lambda_bound);
}

#[test]
fn k2_matches_characters() {
    check(2);
}

#[test]
fn k4_matches_characters() {
    check(4);
}

#[test]
fn k5_matches_characters() {
    check(5);
}
