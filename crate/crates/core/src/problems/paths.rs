//! Single-source and all-pairs shortest paths as phased dynamic programs.
//!
//! States are vertex sequences. The transition family is the same at every
//! phase: the identity (index 0) and "append vertex `v`" for every vertex
//! (index `v + 1`). A sequence is consistent iff it is a simple path in the
//! graph. Graphs with unreachable vertices are accepted; kept states then
//! only cover the reachable pairs.

use crate::dp::ProblemSpec;
use crate::error::{Error, Result};

use super::Graph;

pub const MAX_PATH_VERTICES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathState {
    pub vertices: Vec<u16>,
    pub length: i64,
}

impl PathState {
    fn single(v: usize) -> Self {
        PathState {
            vertices: vec![v as u16],
            length: 0,
        }
    }

    pub fn first(&self) -> usize {
        self.vertices[0] as usize
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("paths are non-empty") as usize
    }
}

fn check_size(graph: &Graph) -> Result<()> {
    if graph.len() > MAX_PATH_VERTICES {
        return Err(Error::InstanceTooLarge {
            what: "path graph vertices",
            size: graph.len(),
            limit: MAX_PATH_VERTICES,
        });
    }
    Ok(())
}

fn append(graph: &Graph, transition: usize, s: &PathState) -> PathState {
    if transition == 0 {
        return s.clone();
    }
    let v = transition - 1;
    let mut vertices = Vec::with_capacity(s.vertices.len() + 1);
    vertices.extend_from_slice(&s.vertices);
    vertices.push(v as u16);
    PathState {
        // a missing edge makes the sequence invalid; its length is irrelevant
        length: s.length + graph.weight(s.last(), v).unwrap_or(0),
        vertices,
    }
}

/// Whether the sequence is a simple path of `graph`.
pub fn is_simple_path(graph: &Graph, vertices: &[u16]) -> bool {
    let mut seen = 0u64;
    for (i, &v) in vertices.iter().enumerate() {
        let v = v as usize;
        if v >= graph.len() || seen & (1 << v) != 0 {
            return false;
        }
        seen |= 1 << v;
        if i > 0 && graph.weight(vertices[i - 1] as usize, v).is_none() {
            return false;
        }
    }
    !vertices.is_empty()
}

fn validity(graph: &Graph, s: &PathState) -> i64 {
    if is_simple_path(graph, &s.vertices) {
        -1
    } else {
        1
    }
}

// Invalid sequences sit below valid ones of the same ends and length bound;
// a valid path never sits below an invalid one.
fn shorter_same_ends(graph: &Graph, a: &PathState, b: &PathState) -> bool {
    a.first() == b.first()
        && a.last() == b.last()
        && b.length <= a.length
        && (!is_simple_path(graph, &a.vertices) || is_simple_path(graph, &b.vertices))
}

#[derive(Clone, Debug)]
pub struct SsspSpec {
    graph: Graph,
    source: usize,
}

impl SsspSpec {
    /// `source` is 0-based.
    pub fn new(graph: Graph, source: usize) -> Result<Self> {
        check_size(&graph)?;
        if source >= graph.len() {
            return Err(Error::InvalidInstance(format!(
                "source {} outside 1..={}",
                source + 1,
                graph.len()
            )));
        }
        Ok(SsspSpec { graph, source })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn source(&self) -> usize {
        self.source
    }

    /// Shortest length to each vertex among `states`; `None` when unreached.
    pub fn distances<'a>(
        &self,
        states: impl IntoIterator<Item = &'a PathState>,
    ) -> Vec<Option<i64>> {
        let mut out = vec![None; self.graph.len()];
        for s in states {
            if self.is_final_feasible(s) {
                let slot = &mut out[s.last()];
                *slot = Some(slot.map_or(s.length, |d: i64| d.min(s.length)));
            }
        }
        out
    }
}

impl ProblemSpec for SsspSpec {
    type State = PathState;
    type Key = (usize, bool);

    fn phases(&self) -> usize {
        self.graph.len()
    }

    fn initial_states(&self) -> Vec<PathState> {
        vec![PathState::single(self.source)]
    }

    fn transition_count(&self, _phase: usize) -> usize {
        self.graph.len() + 1
    }

    fn apply(&self, _phase: usize, transition: usize, s: &PathState) -> PathState {
        append(&self.graph, transition, s)
    }

    fn consistency(&self, _phase: usize, s: &PathState) -> i64 {
        if s.first() != self.source {
            return 1;
        }
        validity(&self.graph, s)
    }

    fn dominated_by(&self, a: &PathState, b: &PathState) -> bool {
        shorter_same_ends(&self.graph, a, b)
    }

    fn dominance_key(&self, _phase: usize, s: &PathState) -> (usize, bool) {
        (s.last(), self.is_final_feasible(s))
    }

    fn is_final_feasible(&self, s: &PathState) -> bool {
        s.first() == self.source && is_simple_path(&self.graph, &s.vertices)
    }

    fn value(&self, s: &PathState) -> i64 {
        s.length
    }

    fn is_homogeneous(&self) -> bool {
        true
    }

    fn declared_width(&self) -> Option<u64> {
        Some(self.graph.len() as u64)
    }
}

#[derive(Clone, Debug)]
pub struct ApspSpec {
    graph: Graph,
}

impl ApspSpec {
    pub fn new(graph: Graph) -> Result<Self> {
        check_size(&graph)?;
        Ok(ApspSpec { graph })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `d[u][v]` over `states`; `None` when no path was kept.
    pub fn distances<'a>(
        &self,
        states: impl IntoIterator<Item = &'a PathState>,
    ) -> Vec<Vec<Option<i64>>> {
        let n = self.graph.len();
        let mut out = vec![vec![None; n]; n];
        for s in states {
            if self.is_final_feasible(s) {
                let slot = &mut out[s.first()][s.last()];
                *slot = Some(slot.map_or(s.length, |d: i64| d.min(s.length)));
            }
        }
        out
    }
}

impl ProblemSpec for ApspSpec {
    type State = PathState;
    type Key = (usize, usize, bool);

    fn phases(&self) -> usize {
        self.graph.len()
    }

    fn initial_states(&self) -> Vec<PathState> {
        (0..self.graph.len()).map(PathState::single).collect()
    }

    fn transition_count(&self, _phase: usize) -> usize {
        self.graph.len() + 1
    }

    fn apply(&self, _phase: usize, transition: usize, s: &PathState) -> PathState {
        append(&self.graph, transition, s)
    }

    fn consistency(&self, _phase: usize, s: &PathState) -> i64 {
        validity(&self.graph, s)
    }

    fn dominated_by(&self, a: &PathState, b: &PathState) -> bool {
        shorter_same_ends(&self.graph, a, b)
    }

    fn dominance_key(&self, _phase: usize, s: &PathState) -> (usize, usize, bool) {
        (
            s.first(),
            s.last(),
            is_simple_path(&self.graph, &s.vertices),
        )
    }

    fn is_final_feasible(&self, s: &PathState) -> bool {
        is_simple_path(&self.graph, &s.vertices)
    }

    fn value(&self, s: &PathState) -> i64 {
        s.length
    }

    fn is_homogeneous(&self) -> bool {
        true
    }

    fn declared_width(&self) -> Option<u64> {
        let n = self.graph.len() as u64;
        Some(n * n)
    }
}
