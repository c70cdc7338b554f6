#![allow(dead_code)]

pub mod oracle;

use anharmonic::intelligent::GisLabel;
use anharmonic::{FockVector, ModelParams};
use num_complex::Complex64 as C64;
use proptest::test_runner::{Config, RngSeed};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Deterministic property-test configuration.
pub fn proptest_config(cases: u32, seed: u64) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn crel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Largest relative amplitude difference for n ≤ n_max after removing the
/// phase of c₀ from each state.
pub fn gauge_diff(a: &FockVector, b: &FockVector, n_max: usize) -> f64 {
    let ph = |v: &FockVector| v.amplitudes()[0] / v.amplitudes()[0].norm();
    let (pa, pb) = (ph(a), ph(b));
    (0..=n_max)
        .filter(|&n| b.amplitudes()[n].norm() > 1e-300)
        .map(|n| crel(a.amplitudes()[n] / pa, b.amplitudes()[n] / pb))
        .fold(0.0, f64::max)
}

/// A normalized state with `dim` random complex amplitudes.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize, params: ModelParams) -> FockVector {
    let a = (0..dim)
        .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    FockVector::new(a, params).unwrap().normalized().unwrap()
}

/// Twelve (λ, z, ε) points covering real, unimodular and general complex λ.
pub fn gis_grid() -> Vec<(GisLabel, f64)> {
    let c = C64::new;
    vec![
        (GisLabel::new(c(1.0, 0.0), c(1.0, 0.0)), 0.1),
        (GisLabel::new(c(0.5, 0.0), c(1.0, 0.0)), 0.1),
        (GisLabel::new(c(2.0, 0.0), c(1.0, 0.0)), 0.1),
        (GisLabel::new(c(0.3, 0.0), c(0.0, 2.0)), 0.05),
        (GisLabel::new(c(2.0, 1.0), c(1.0, 0.0)), 0.05),
        (GisLabel::new(c(2.0, 1.0), c(0.0, 2.0)), 0.3),
        (GisLabel::new(c(0.8, 0.6), c(0.5, -1.2)), 0.1),
        (GisLabel::new(c(0.6, -0.8), c(-1.5, 0.4)), 0.3),
        (GisLabel::new(c(1.5, -0.7), c(0.7, 0.7)), 0.05),
        (GisLabel::new(c(0.3, 0.2), c(-0.4, 0.9)), 0.1),
        (GisLabel::new(c(4.0, 0.0), c(2.0, -1.0)), 0.3),
        (GisLabel::new(c(1.0, 0.0), c(-2.5, 1.5)), 0.05),
    ]
}
