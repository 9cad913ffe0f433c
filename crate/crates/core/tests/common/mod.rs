#![allow(dead_code)]

use dynevo::problems::{Graph, KnapsackInstance, TspInstance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn knapsack(seed: u64, n: usize, max_item: i64, capacity: i64) -> KnapsackInstance {
    let mut r = rng(seed);
    let items: Vec<(i64, i64)> = (0..n)
        .map(|_| (r.gen_range(1..=max_item), r.gen_range(1..=max_item)))
        .collect();
    KnapsackInstance::from_items(&items, capacity).unwrap()
}

pub fn tsp(seed: u64, n: usize, max_weight: i64) -> TspInstance {
    let mut r = rng(seed);
    let mut w = vec![vec![0; n]; n];
    for u in 0..n {
        for v in u + 1..n {
            let x = r.gen_range(1..=max_weight);
            w[u][v] = x;
            w[v][u] = x;
        }
    }
    TspInstance::new(w).unwrap()
}

/// Random spanning tree plus each remaining pair with probability `p`.
pub fn connected_graph(seed: u64, n: usize, p: f64, max_weight: i64) -> Graph {
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[r.gen_range(0..i)];
        edges.push((parent, order[i], r.gen_range(1..=max_weight)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v, r.gen_range(1..=max_weight)));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Any graph, possibly disconnected.
pub fn sparse_graph(seed: u64, n: usize, p: f64, max_weight: i64) -> Graph {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v, r.gen_range(1..=max_weight)));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}
