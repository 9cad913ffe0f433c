use std::collections::HashMap;

use super::{DpMetrics, ProblemSpec, Trace};

/// A kept state together with its predecessor chain.
#[derive(Clone, Debug)]
pub struct Entry<S> {
    pub state: S,
    pub trace: Trace,
}

/// Outcome of offering a state to a [`DominatingSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Offer {
    Inserted,
    Replaced,
    Rejected,
}

/// Minimal-by-inclusion dominating subset of the states produced at one
/// phase, one representative per dominance key.
///
/// Entries keep their slot when replaced, so slot order is insertion order
/// of the key classes and is independent of hash seeds.
#[derive(Clone, Debug)]
pub struct DominatingSet<S, K> {
    phase: usize,
    entries: Vec<Entry<S>>,
    index: HashMap<K, usize>,
}

impl<S, K> DominatingSet<S, K>
where
    S: Clone,
    K: Eq + std::hash::Hash + Clone,
{
    pub fn new(phase: usize) -> Self {
        DominatingSet {
            phase,
            entries: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn phase(&self) -> usize {
        self.phase
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry<S>] {
        &self.entries
    }

    pub fn states(&self) -> impl Iterator<Item = &S> + '_ {
        self.entries.iter().map(|e| &e.state)
    }

    pub fn get(&self, key: &K) -> Option<&Entry<S>> {
        self.index.get(key).map(|&slot| &self.entries[slot])
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> + '_ {
        self.index.keys()
    }

    /// Offers a feasible state. It is rejected when a kept state of the same
    /// key dominates it (equivalence included, so the incumbent wins ties);
    /// otherwise it takes over the key's slot.
    pub fn offer<P>(&mut self, spec: &P, state: S, trace: Trace, metrics: &mut DpMetrics) -> Offer
    where
        P: ProblemSpec<State = S, Key = K> + ?Sized,
    {
        let key = spec.dominance_key(self.phase, &state);
        match self.index.get(&key) {
            Some(&slot) => {
                metrics.dominance_checks += 1;
                let incumbent = &self.entries[slot].state;
                if spec.dominated_by(&state, incumbent) {
                    Offer::Rejected
                } else {
                    // Key classes are totally quasi-ordered, so the incumbent
                    // is strictly below the newcomer.
                    debug_assert!(spec.dominated_by(incumbent, &state));
                    self.entries[slot] = Entry { state, trace };
                    Offer::Replaced
                }
            }
            None => {
                self.index.insert(key, self.entries.len());
                self.entries.push(Entry { state, trace });
                Offer::Inserted
            }
        }
    }

    /// Whether some kept state dominates `state`.
    pub fn covers<P>(&self, spec: &P, state: &S) -> bool
    where
        P: ProblemSpec<State = S, Key = K> + ?Sized,
    {
        let key = spec.dominance_key(self.phase, state);
        self.get(&key)
            .is_some_and(|e| spec.dominated_by(state, &e.state))
    }
}
