//! Seeded random graphs and instances.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instance::{Instance, Score};

fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Uniform simple graph with `n` vertices and `m` edges, edges sorted.
pub fn gnm(n: usize, m: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    let total = n * n.saturating_sub(1) / 2;
    if m > total {
        return Err(Error::Generator(format!("{m} edges do not fit on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = if 2 * m > total {
        let mut all: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        all.shuffle(&mut rng);
        all.truncate(m);
        all
    } else {
        let mut seen = HashSet::with_capacity(m);
        while seen.len() < m {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v {
                seen.insert(norm(u, v));
            }
        }
        seen.into_iter().collect()
    };
    edges.sort_unstable();
    Ok(edges)
}

/// Random simple 3-regular graph on `n` vertices (pairing model with
/// rejection), edges sorted.
pub fn cubic(n: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    if n % 2 == 1 || n < 4 {
        return Err(Error::Generator(format!("no cubic graph on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
    'attempt: for _ in 0..100_000 {
        points.shuffle(&mut rng);
        let mut seen = HashSet::with_capacity(3 * n / 2);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !seen.insert(norm(u, v)) {
                continue 'attempt;
            }
        }
        let mut edges: Vec<_> = seen.into_iter().collect();
        edges.sort_unstable();
        return Ok(edges);
    }
    Err(Error::Generator(format!("pairing model kept failing for n = {n}")))
}

/// `k` disjoint copies of K5 on vertices `5i..5i+5`.
pub fn union_k5(k: usize) -> Vec<(usize, usize)> {
    (0..k)
        .flat_map(|b| (0..5).flat_map(move |u| (u + 1..5).map(move |v| (5 * b + u, 5 * b + v))))
        .collect()
}

/// Random instance on a `gnm` graph with every score drawn from `lo..=hi`.
pub fn random_csp(n: usize, m: usize, r: usize, lo: Score, hi: Score, seed: u64) -> Result<Instance> {
    let edges = gnm(n, m, seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut inst = Instance::new(n, r)?;
    inst.set_niladic(rng.gen_range(lo..=hi));
    for v in 0..n {
        inst.set_monadic(v, (0..r).map(|_| rng.gen_range(lo..=hi)).collect())?;
    }
    for (u, v) in edges {
        inst.add_edge(u, v, (0..r * r).map(|_| rng.gen_range(lo..=hi)).collect())?;
    }
    Ok(inst)
}
