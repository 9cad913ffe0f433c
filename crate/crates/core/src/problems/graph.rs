use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected graph with positive integer edge weights, 0-based vertices.
/// Parallel edges collapse to the lightest one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Option<i64>>,
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize, i64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut adjacency = vec![None; n * n];
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) references a vertex outside 1..={n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::InvalidInstance(format!(
                    "self-loop at vertex {}",
                    u + 1
                )));
            }
            if w <= 0 {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) has non-positive weight {w}",
                    u + 1,
                    v + 1
                )));
            }
            if w.checked_mul(n as i64).is_none() {
                return Err(Error::InvalidInstance(
                    "path lengths overflow 64-bit integers".into(),
                ));
            }
            for (a, b) in [(u, v), (v, u)] {
                let slot = &mut adjacency[a * n + b];
                *slot = Some(slot.map_or(w, |old: i64| old.min(w)));
            }
        }
        Ok(Graph { n, adjacency })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<i64> {
        self.adjacency[u * self.n + v]
    }

    /// Edges with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if let Some(w) = self.weight(u, v) {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        (0..self.n).filter_map(move |v| self.weight(u, v).map(|w| (v, w)))
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for (v, _) in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}
