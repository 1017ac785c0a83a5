//! Seeded point-set generators for tests, benchmarks and the CLI.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::Point;

fn push_distinct(out: &mut Vec<Point>, seen: &mut HashSet<(i64, i64)>, x: i64, y: i64) {
    if seen.insert((x, y)) {
        out.push(Point::ints(x, y));
    }
}

/// `n` distinct integer points, uniform in `[0, side)²`.
pub fn uniform(n: usize, side: i64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut seen = HashSet::new();
    while out.len() < n {
        let (x, y) = (rng.gen_range(0..side), rng.gen_range(0..side));
        push_distinct(&mut out, &mut seen, x, y);
    }
    out
}

/// `n` distinct integer points in a few tight clusters plus sparse
/// background noise, so that many homothets hold most of the set.
pub fn clustered(n: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(2..=4);
    let centers: Vec<(i64, i64, i64)> =
        (0..k).map(|_| (rng.gen_range(0..10_000), rng.gen_range(0..10_000), rng.gen_range(100..800))).collect();
    let mut out = Vec::with_capacity(n);
    let mut seen = HashSet::new();
    while out.len() < n {
        if rng.gen_bool(0.1) {
            let (x, y) = (rng.gen_range(-2_000..12_000), rng.gen_range(-2_000..12_000));
            push_distinct(&mut out, &mut seen, x, y);
        } else {
            let (cx, cy, r) = centers[rng.gen_range(0..k)];
            let (x, y) = (cx + rng.gen_range(-r..=r), cy + rng.gen_range(-r..=r));
            push_distinct(&mut out, &mut seen, x, y);
        }
    }
    out
}
