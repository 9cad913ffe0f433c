//! Seeded instance generators. The same parameters and seed always produce
//! the same instance.

use dynevo::problems::{Graph, KnapsackInstance, TspInstance};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::instance::{Instance, ProblemKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    /// Items (knapsack) or vertices.
    pub size: usize,
    /// Weights drawn from `1..=max_weight`; TSP metric grids span `0..=max_weight`.
    pub max_weight: i64,
    /// Knapsack profits drawn from `1..=max_profit`.
    pub max_profit: i64,
    /// Knapsack capacity; half the total weight when absent.
    pub capacity: Option<i64>,
    /// TSP: Manhattan distances between random grid points.
    pub metric: bool,
    /// Graphs: probability of each extra edge beyond a random spanning tree.
    pub edge_prob: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            size: 8,
            max_weight: 20,
            max_profit: 20,
            capacity: None,
            metric: false,
            edge_prob: 0.3,
        }
    }
}

fn invalid(msg: String) -> HarnessError {
    HarnessError::Validation(msg)
}

pub fn knapsack(params: &GenParams, seed: u64) -> Result<KnapsackInstance> {
    if params.size == 0 || params.max_weight < 1 || params.max_profit < 1 {
        return Err(invalid(format!(
            "knapsack generator needs size ≥ 1 and positive ranges, got {params:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items: Vec<(i64, i64)> = (0..params.size)
        .map(|_| {
            (
                rng.gen_range(1..=params.max_weight),
                rng.gen_range(1..=params.max_profit),
            )
        })
        .collect();
    let capacity = params
        .capacity
        .unwrap_or_else(|| items.iter().map(|it| it.0).sum::<i64>() / 2);
    Ok(KnapsackInstance::from_items(&items, capacity)?)
}

pub fn tsp(params: &GenParams, seed: u64) -> Result<TspInstance> {
    let n = params.size;
    if n < 3 || params.max_weight < 1 {
        return Err(invalid(format!(
            "TSP generator needs size ≥ 3 and max weight ≥ 1, got {params:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![vec![0i64; n]; n];
    if params.metric {
        let points: Vec<(i64, i64)> = (0..n)
            .map(|_| {
                (
                    rng.gen_range(0..=params.max_weight),
                    rng.gen_range(0..=params.max_weight),
                )
            })
            .collect();
        for u in 0..n {
            for v in 0..n {
                w[u][v] = (points[u].0 - points[v].0).abs() + (points[u].1 - points[v].1).abs();
            }
        }
    } else {
        for u in 0..n {
            for v in u + 1..n {
                let x = rng.gen_range(1..=params.max_weight);
                w[u][v] = x;
                w[v][u] = x;
            }
        }
    }
    Ok(TspInstance::new(w)?)
}

/// Random spanning tree plus independent extra edges, so always connected.
pub fn connected_graph(params: &GenParams, seed: u64) -> Result<Graph> {
    let n = params.size;
    if n == 0 || params.max_weight < 1 || !(0.0..=1.0).contains(&params.edge_prob) {
        return Err(invalid(format!(
            "graph generator needs size ≥ 1, max weight ≥ 1 and edge probability in [0, 1], got {params:?}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent, order[i], rng.gen_range(1..=params.max_weight)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(params.edge_prob) {
                edges.push((u, v, rng.gen_range(1..=params.max_weight)));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges)?)
}

pub fn generate(kind: ProblemKind, params: &GenParams, seed: u64) -> Result<Instance> {
    Ok(match kind {
        ProblemKind::Knapsack => Instance::Knapsack(knapsack(params, seed)?),
        ProblemKind::Tsp => Instance::Tsp(tsp(params, seed)?),
        ProblemKind::Sssp | ProblemKind::Apsp => Instance::Graph(connected_graph(params, seed)?),
    })
}
