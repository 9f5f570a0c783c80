#![allow(dead_code)]

use qmc::{Mode, QuasiMetric};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Strongly connected random digraph closure on `n` points with integer
/// weights in `1..=max_weight`: a random Hamiltonian cycle plus each other
/// arc with probability `density`.
pub fn random_quasi_metric(rng: &mut ChaCha8Rng, n: usize, density: f64, max_weight: u32) -> QuasiMetric {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        if n > 1 {
            edges.push((order[i], order[(i + 1) % n], rng.gen_range(1..=max_weight) as f64));
        }
    }
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(1..=max_weight) as f64));
            }
        }
    }
    QuasiMetric::from_digraph(n, &edges, Mode::Strict).expect("cycle makes the digraph strongly connected")
}

/// Deterministic corpus of `count` strict instances with `lo..=hi` points.
pub fn corpus(seed: u64, count: usize, lo: usize, hi: usize) -> Vec<QuasiMetric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            let density = rng.gen_range(0.05..0.6);
            let max_weight = rng.gen_range(1..=12);
            random_quasi_metric(&mut rng, n, density, max_weight)
        })
        .collect()
}

/// Distinct finite off-diagonal distances, ascending.
pub fn realized_distances(m: &QuasiMetric) -> Vec<f64> {
    let mut v: Vec<f64> = m.to_rows().into_iter().flatten().filter(|d| d.is_finite() && *d > 0.0).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}
