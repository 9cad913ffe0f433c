//! Reference solvers used to check engine output on small instances.
//!
//! Nothing here calls into the DP, the EA or the adapters' transition
//! logic: objectives, feasibility and dominance are recomputed from the raw
//! instance data. Everything is exponential or textbook-quadratic on
//! purpose.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};
use crate::problems::{Graph, KnapsackInstance, TspInstance};

pub const MAX_KNAPSACK_ITEMS: usize = 22;
pub const MAX_TSP_VERTICES: usize = 10;
pub const MAX_PARETO_STATES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub optimum: i64,
    /// Item indices (knapsack) or a vertex order starting at 0 (TSP).
    pub witness: Vec<usize>,
    /// Knapsack only: best profit for each exactly-reachable total weight
    /// up to the capacity.
    pub frontier: Option<BTreeMap<i64, i64>>,
}

fn knapsack_sums(instance: &KnapsackInstance, items: usize, mask: u32) -> (i64, i64) {
    (0..items)
        .filter(|i| mask & (1 << i) != 0)
        .fold((0, 0), |(w, p), i| {
            (w + instance.weights[i], p + instance.profits[i])
        })
}

/// Per-weight best profit over subsets of the first `items` items with
/// weight at most the capacity.
pub fn knapsack_frontier(instance: &KnapsackInstance, items: usize) -> Result<BTreeMap<i64, i64>> {
    if items > MAX_KNAPSACK_ITEMS || items > instance.weights.len() {
        return Err(Error::InstanceTooLarge {
            what: "knapsack oracle items",
            size: items,
            limit: MAX_KNAPSACK_ITEMS.min(instance.weights.len()),
        });
    }
    let mut frontier = BTreeMap::new();
    for mask in 0..1u32 << items {
        let (w, p) = knapsack_sums(instance, items, mask);
        if w <= instance.capacity {
            let best = frontier.entry(w).or_insert(p);
            *best = (*best).max(p);
        }
    }
    Ok(frontier)
}

/// Enumerates all `2^n` subsets.
pub fn knapsack_bruteforce(instance: &KnapsackInstance) -> Result<OracleResult> {
    let n = instance.weights.len();
    if n > MAX_KNAPSACK_ITEMS {
        return Err(Error::InstanceTooLarge {
            what: "knapsack oracle items",
            size: n,
            limit: MAX_KNAPSACK_ITEMS,
        });
    }
    let mut best = (0i64, 0u32);
    for mask in 0..1u32 << n {
        let (w, p) = knapsack_sums(instance, n, mask);
        if w <= instance.capacity && p > best.0 {
            best = (p, mask);
        }
    }
    let witness: Vec<usize> = (0..n).filter(|i| best.1 & (1 << i) != 0).collect();
    let result = OracleResult {
        optimum: best.0,
        witness,
        frontier: Some(knapsack_frontier(instance, n)?),
    };
    debug_assert_eq!(
        result
            .witness
            .iter()
            .map(|&i| instance.profits[i])
            .sum::<i64>(),
        result.optimum
    );
    Ok(result)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Enumerates the `(n-1)!` tours that start at vertex 0.
pub fn tsp_bruteforce(instance: &TspInstance) -> Result<OracleResult> {
    let w = &instance.weights;
    let n = w.len();
    if n > MAX_TSP_VERTICES {
        return Err(Error::InstanceTooLarge {
            what: "TSP oracle vertices",
            size: n,
            limit: MAX_TSP_VERTICES,
        });
    }
    if n < 2 {
        return Err(Error::InvalidInstance(
            "TSP oracle needs at least 2 vertices".into(),
        ));
    }
    let length = |rest: &[usize]| -> i64 {
        let mut total = w[0][rest[0]] + w[rest[rest.len() - 1]][0];
        for pair in rest.windows(2) {
            total += w[pair[0]][pair[1]];
        }
        total
    };
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = (length(&rest), rest.clone());
    while next_permutation(&mut rest) {
        let l = length(&rest);
        if l < best.0 {
            best = (l, rest.clone());
        }
    }
    let mut witness = vec![0];
    witness.extend(best.1);
    Ok(OracleResult {
        optimum: best.0,
        witness,
        frontier: None,
    })
}

/// Dijkstra with a binary heap. `None` marks unreachable vertices.
pub fn sssp_reference(graph: &Graph, source: usize) -> Vec<Option<i64>> {
    let n = graph.len();
    let mut dist: Vec<Option<i64>> = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = Some(0);
    heap.push(Reverse((0i64, source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if dist[u].is_some_and(|best| d > best) {
            continue;
        }
        for v in 0..n {
            if let Some(w) = graph.weight(u, v) {
                let cand = d + w;
                if dist[v].is_none_or(|cur| cand < cur) {
                    dist[v] = Some(cand);
                    heap.push(Reverse((cand, v)));
                }
            }
        }
    }
    dist
}

/// Floyd–Warshall.
pub fn apsp_reference(graph: &Graph) -> Vec<Vec<Option<i64>>> {
    let n = graph.len();
    let mut d: Vec<Vec<Option<i64>>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| if u == v { Some(0) } else { graph.weight(u, v) })
                .collect()
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k] else { continue };
            for j in 0..n {
                if let Some(kj) = d[k][j] {
                    if d[i][j].is_none_or(|cur| ik + kj < cur) {
                        d[i][j] = Some(ik + kj);
                    }
                }
            }
        }
    }
    d
}

/// Size of a minimal dominating subset of `states` under the preorder
/// `le(a, b)` ("b is at least as good as a"): the number of equivalence
/// classes among maximal elements.
pub fn pareto_bruteforce<S>(states: &[S], le: impl Fn(&S, &S) -> bool) -> Result<usize> {
    if states.len() > MAX_PARETO_STATES {
        return Err(Error::InstanceTooLarge {
            what: "pareto oracle states",
            size: states.len(),
            limit: MAX_PARETO_STATES,
        });
    }
    let maximal: Vec<&S> = states
        .iter()
        .filter(|a| !states.iter().any(|b| le(a, b) && !le(b, a)))
        .collect();
    let mut representatives: Vec<&S> = Vec::new();
    for a in maximal {
        if !representatives.iter().any(|r| le(a, r) && le(r, a)) {
            representatives.push(a);
        }
    }
    Ok(representatives.len())
}
