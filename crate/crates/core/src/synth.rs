//! Seeded synthetic inputs: Erdős–Rényi graphs and random control partitions.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::Partition;
use crate::graph::Graph;

/// Uniform random graph with `round(n * mean_degree / 2)` distinct edges
/// (capped at the complete graph), deterministic in `seed`.
pub fn erdos_renyi(n: usize, mean_degree: f64, seed: u64) -> Graph {
    let max_edges = n * n.saturating_sub(1) / 2;
    let m = ((n as f64 * mean_degree / 2.0).round() as usize).min(max_edges);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_edge_list(n, &edges).expect("generated indices are in range")
}

/// Random assignment with the same ball sizes as `p`: nodes are shuffled
/// and dealt into balls in order.
pub fn random_assignment_like(p: &Partition, seed: u64) -> Vec<usize> {
    let mut nodes: Vec<usize> = (0..p.node_count()).collect();
    nodes.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut assignment = vec![0; nodes.len()];
    let mut next = nodes.into_iter();
    for (b, ball) in p.balls.iter().enumerate() {
        for v in next.by_ref().take(ball.len()) {
            assignment[v] = b;
        }
    }
    assignment
}

/// `count` seeded ER graphs with `n` in `[min_nodes, max_nodes]` and mean
/// degree in `[2, 8]`.
pub fn er_collection(count: usize, min_nodes: usize, max_nodes: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(min_nodes..=max_nodes);
            let degree = rng.gen_range(2.0..=8.0);
            erdos_renyi(n, degree, seed.wrapping_mul(1_000_003).wrapping_add(i as u64))
        })
        .collect()
}
