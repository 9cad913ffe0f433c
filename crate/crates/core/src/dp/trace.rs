use std::sync::Arc;

/// Predecessor chain of a state: the index of the initial state it grew from
/// followed by the transition index applied at each phase.
///
/// Cloning is O(1); extending shares the parent chain.
#[derive(Clone, Debug)]
pub struct Trace(Arc<Node>);

#[derive(Debug)]
struct Node {
    // origin index when `parent` is None, transition index otherwise
    label: usize,
    depth: usize,
    parent: Option<Arc<Node>>,
}

impl Drop for Node {
    // Long chains would otherwise be dropped recursively.
    fn drop(&mut self) {
        let mut next = self.parent.take();
        while let Some(arc) = next {
            match Arc::try_unwrap(arc) {
                Ok(mut node) => next = node.parent.take(),
                Err(_) => break,
            }
        }
    }
}

impl Trace {
    pub fn origin(initial_index: usize) -> Self {
        Trace(Arc::new(Node {
            label: initial_index,
            depth: 0,
            parent: None,
        }))
    }

    pub fn then(&self, transition: usize) -> Self {
        Trace(Arc::new(Node {
            label: transition,
            depth: self.0.depth + 1,
            parent: Some(Arc::clone(&self.0)),
        }))
    }

    /// Number of transitions applied since the initial state.
    pub fn len(&self) -> usize {
        self.0.depth
    }

    pub fn is_empty(&self) -> bool {
        self.0.depth == 0
    }

    pub fn origin_index(&self) -> usize {
        let mut node = &self.0;
        while let Some(parent) = &node.parent {
            node = parent;
        }
        node.label
    }

    /// Transition indices in application order (phase 1 first).
    pub fn decisions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.0.depth);
        let mut node = &self.0;
        while let Some(parent) = &node.parent {
            out.push(node.label);
            node = parent;
        }
        out.reverse();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decisions_in_phase_order() {
        let t = Trace::origin(3).then(1).then(0).then(4);
        assert_eq!(t.origin_index(), 3);
        assert_eq!(t.decisions(), vec![1, 0, 4]);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn shared_prefix_survives_branch_drop() {
        let base = Trace::origin(0).then(2);
        let a = base.then(5);
        drop(base);
        let b = a.then(7);
        drop(a);
        assert_eq!(b.decisions(), vec![2, 5, 7]);
    }

    #[test]
    fn deep_chain_drops_without_overflow() {
        let mut t = Trace::origin(0);
        for i in 0..1_000_000 {
            t = t.then(i % 3);
        }
        assert_eq!(t.len(), 1_000_000);
        drop(t);
    }
}
