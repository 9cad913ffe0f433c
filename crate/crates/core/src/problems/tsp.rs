//! Held–Karp as a phased dynamic program.
//!
//! Vertices are 0-based and tours start at vertex 0. A state is a path from
//! vertex 0; phase `i` appends one more vertex, so `T_i` holds the shortest
//! path per (end vertex, visited set) with `i` visited vertices besides the
//! start. Closing the tour happens after the DP in [`TspSpec::best_tour`].

use serde::{Deserialize, Serialize};

use crate::dp::{ProblemSpec, Trace};
use crate::error::{Error, Result};

pub const MAX_TSP_VERTICES: usize = 24;

/// Complete graph given as a full weight matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TspInstance {
    pub weights: Vec<Vec<i64>>,
}

impl TspInstance {
    pub fn new(weights: Vec<Vec<i64>>) -> Result<Self> {
        let instance = TspInstance { weights };
        instance.validate()?;
        Ok(instance)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, u: usize, v: usize) -> i64 {
        self.weights[u][v]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.weights.len();
        if n < 3 {
            return Err(Error::InvalidInstance(format!(
                "TSP needs at least 3 vertices, got {n}"
            )));
        }
        if n > MAX_TSP_VERTICES {
            return Err(Error::InstanceTooLarge {
                what: "TSP vertices",
                size: n,
                limit: MAX_TSP_VERTICES,
            });
        }
        for (u, row) in self.weights.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "row {} has {} entries, expected {n}",
                    u + 1,
                    row.len()
                )));
            }
            for (v, &w) in row.iter().enumerate() {
                if u != v && w < 0 {
                    return Err(Error::InvalidInstance(format!(
                        "incomplete graph: edge ({}, {}) missing or negative",
                        u + 1,
                        v + 1
                    )));
                }
            }
        }
        let max = self.weights.iter().flatten().copied().max().unwrap_or(0);
        if max.checked_mul(n as i64).is_none() {
            return Err(Error::InvalidInstance(
                "tour lengths overflow 64-bit integers".into(),
            ));
        }
        Ok(())
    }

    /// Length of the closed tour visiting `order` (starting anywhere).
    pub fn tour_length(&self, order: &[usize]) -> i64 {
        let n = order.len();
        (0..n)
            .map(|i| self.weights[order[i]][order[(i + 1) % n]])
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TspState {
    /// Visited vertices other than 0, bit `v` for vertex `v`.
    pub mask: u32,
    pub end: u8,
    pub length: i64,
    /// False once a vertex was appended twice.
    pub simple: bool,
}

#[derive(Clone, Debug)]
pub struct TspSpec {
    instance: TspInstance,
}

impl TspSpec {
    pub fn new(instance: TspInstance) -> Result<Self> {
        instance.validate()?;
        Ok(TspSpec { instance })
    }

    pub fn instance(&self) -> &TspInstance {
        &self.instance
    }

    fn full_mask(&self) -> u32 {
        let n = self.instance.len() as u32;
        ((1u64 << n) - 2) as u32
    }

    /// Declared `|T_i| = i · C(n-1, i)` for `i >= 1`.
    pub fn expected_kept(&self, phase: usize) -> u64 {
        phase as u64 * binomial(self.instance.len() as u64 - 1, phase as u64)
    }

    /// Shortest closed tour among final Hamiltonian paths: `(length, path)`.
    pub fn best_tour<'a>(
        &self,
        finals: impl IntoIterator<Item = &'a TspState>,
    ) -> Option<(i64, TspState)> {
        finals
            .into_iter()
            .filter(|s| self.is_final_feasible(s))
            .map(|s| (s.length + self.instance.weight(s.end as usize, 0), *s))
            .min_by_key(|&(len, s)| (len, s.end))
    }

    /// Vertex order encoded by a trace, starting with vertex 0.
    pub fn tour_of(trace: &Trace) -> Vec<usize> {
        std::iter::once(0)
            .chain(trace.decisions().into_iter().map(|t| t + 1))
            .collect()
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl ProblemSpec for TspSpec {
    type State = TspState;
    type Key = (u8, u32, bool);

    fn phases(&self) -> usize {
        self.instance.len() - 1
    }

    fn initial_states(&self) -> Vec<TspState> {
        vec![TspState {
            mask: 0,
            end: 0,
            length: 0,
            simple: true,
        }]
    }

    fn transition_count(&self, _phase: usize) -> usize {
        self.instance.len() - 1
    }

    fn apply(&self, _phase: usize, transition: usize, s: &TspState) -> TspState {
        let v = transition + 1;
        let bit = 1u32 << v;
        TspState {
            mask: s.mask | bit,
            end: v as u8,
            length: s.length + self.instance.weight(s.end as usize, v),
            simple: s.simple && s.mask & bit == 0,
        }
    }

    fn consistency(&self, _phase: usize, s: &TspState) -> i64 {
        if s.simple {
            0
        } else {
            1
        }
    }

    // Non-simple sequences only compare among themselves, which keeps
    // dominance transfer literal on the extended space.
    fn dominated_by(&self, a: &TspState, b: &TspState) -> bool {
        a.simple == b.simple && a.end == b.end && a.mask == b.mask && b.length <= a.length
    }

    fn dominance_key(&self, _phase: usize, s: &TspState) -> (u8, u32, bool) {
        (s.end, s.mask, s.simple)
    }

    fn is_final_feasible(&self, s: &TspState) -> bool {
        s.simple && s.mask == self.full_mask()
    }

    fn value(&self, s: &TspState) -> i64 {
        s.length
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::{dp_solve, simplified_dp_enumerate};

    fn square() -> TspInstance {
        TspInstance::new(vec![
            vec![0, 1, 5, 1],
            vec![1, 0, 1, 5],
            vec![5, 1, 0, 1],
            vec![1, 5, 1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn validation() {
        assert!(TspInstance::new(vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(TspInstance::new(vec![vec![0, 1, 1], vec![1, 0, -1], vec![1, 1, 0]]).is_err());
        assert!(TspInstance::new(vec![vec![0, 1, 1], vec![1, 0], vec![1, 1, 0]]).is_err());
        let big = vec![vec![1; 25]; 25];
        assert!(matches!(
            TspInstance::new(big),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn square_tour() {
        let spec = TspSpec::new(square()).unwrap();
        let sol = dp_solve(&spec).unwrap();
        let (len, state) = spec.best_tour(sol.final_set().states()).unwrap();
        assert_eq!(len, 4);
        let entry = sol.final_set().get(&(state.end, state.mask, true)).unwrap();
        let tour = TspSpec::tour_of(&entry.trace);
        assert_eq!(tour.len(), 4);
        assert_eq!(spec.instance().tour_length(&tour), 4);
        assert_eq!(sol.kept_per_phase()[2], 6);
    }

    #[test]
    fn triangle_single_tour() {
        let spec = TspSpec::new(
            TspInstance::new(vec![vec![0, 2, 9], vec![2, 0, 4], vec![9, 4, 0]]).unwrap(),
        )
        .unwrap();
        let sol = dp_solve(&spec).unwrap();
        assert_eq!(spec.best_tour(sol.final_set().states()).unwrap().0, 15);
        let layers = simplified_dp_enumerate(&spec, 100).unwrap();
        // both Hamiltonian paths from vertex 0
        assert_eq!(layers[2].len(), 2);
        assert!(layers[2].iter().all(|s| spec.is_final_feasible(s)));
    }

    #[test]
    fn append_vertex() {
        let spec = TspSpec::new(square()).unwrap();
        let start = spec.initial_states()[0];
        let one = spec.apply(1, 0, &start);
        let s = spec.apply(2, 2, &one);
        assert_eq!(
            (s.end, s.mask, s.length, s.simple),
            (3, 0b1010, 1 + 5, true)
        );
        let again = spec.apply(3, 2, &s);
        assert!(!again.simple);
        assert_eq!(spec.consistency(3, &again), 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(8, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(23, 11), 1352078);
    }
}
