use std::collections::{BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

use crate::dp::Trace;
use crate::error::{Error, Result};

/// An EA individual: a phase-tagged state plus its construction history.
#[derive(Clone, Debug)]
pub struct Individual<S> {
    pub phase: usize,
    pub state: S,
    pub trace: Trace,
}

/// The comparison an EA population is organised by.
///
/// Individuals in one bucket with equal keys must be totally ordered by
/// [`EaOrder::le`]; individuals with different keys or buckets are
/// incomparable unless one of them is infeasible.
pub trait EaOrder {
    type State: Clone;
    type Key: Clone + Eq + Hash + Ord + Debug;

    fn infeasible(&self, phase: usize, state: &Self::State) -> bool;

    fn key(&self, phase: usize, state: &Self::State) -> Result<Self::Key>;

    /// `a ⪯ b` for two feasible states sharing a key.
    fn le(&self, a: &Self::State, b: &Self::State) -> bool;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insertion {
    Inserted { bucket: usize, slot: usize },
    Replaced { bucket: usize, slot: usize },
    Rejected,
}

impl Insertion {
    pub fn position(self) -> Option<(usize, usize)> {
        match self {
            Insertion::Inserted { bucket, slot } | Insertion::Replaced { bucket, slot } => {
                Some((bucket, slot))
            }
            Insertion::Rejected => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Bucket<S, K> {
    members: Vec<Individual<S>>,
    index: HashMap<K, usize>,
}

impl<S, K> Default for Bucket<S, K> {
    fn default() -> Self {
        Bucket {
            members: Vec::new(),
            index: HashMap::new(),
        }
    }
}

/// Keyed population with at most one individual per (bucket, key).
///
/// In phase-tagged mode bucket `i` holds the phase-`i` individuals; in
/// phase-free mode a single bucket holds everyone.
#[derive(Clone, Debug)]
pub struct Population<S, K> {
    buckets: Vec<Bucket<S, K>>,
    // buckets that may be selected, in the order they became non-empty
    selectable: Vec<usize>,
    final_phase: usize,
    phase_free: bool,
}

impl<S: Clone, K: Clone + Eq + Hash + Ord> Population<S, K> {
    pub fn new(final_phase: usize, phase_free: bool) -> Self {
        let count = if phase_free { 1 } else { final_phase + 1 };
        Population {
            buckets: (0..count).map(|_| Bucket::default()).collect(),
            selectable: Vec::new(),
            final_phase,
            phase_free,
        }
    }

    pub fn is_phase_free(&self) -> bool {
        self.phase_free
    }

    pub fn final_phase(&self) -> usize {
        self.final_phase
    }

    pub fn bucket_of(&self, phase: usize) -> usize {
        if self.phase_free {
            0
        } else {
            phase
        }
    }

    /// Bucket holding the individuals `out_EA` reports.
    pub fn final_bucket(&self) -> usize {
        self.bucket_of(self.final_phase)
    }

    pub fn len(&self) -> usize {
        self.buckets.iter().map(|b| b.members.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bucket(&self, bucket: usize) -> &[Individual<S>] {
        &self.buckets[bucket].members
    }

    pub fn individual(&self, bucket: usize, slot: usize) -> &Individual<S> {
        &self.buckets[bucket].members[slot]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Individual<S>> + '_ {
        self.buckets.iter().flat_map(|b| b.members.iter())
    }

    pub fn keys(&self, bucket: usize) -> BTreeSet<K> {
        self.buckets[bucket].index.keys().cloned().collect()
    }

    pub fn get(&self, bucket: usize, key: &K) -> Option<&Individual<S>> {
        let b = &self.buckets[bucket];
        b.index.get(key).map(|&slot| &b.members[slot])
    }

    /// Phases `<= n-1` currently represented (phase-tagged mode).
    pub fn represented_phases(&self) -> Vec<usize> {
        let mut phases = self.selectable.clone();
        phases.sort_unstable();
        phases
    }

    /// Strict-dominance insertion: the newcomer is dropped only if some
    /// member is strictly better; otherwise it replaces the member of its
    /// key (strictly worse or equivalent) or opens a new key.
    pub fn insert<O>(&mut self, order: &O, individual: Individual<S>) -> Result<Insertion>
    where
        O: EaOrder<State = S, Key = K>,
    {
        // An infeasible individual is strictly below every feasible member,
        // and members are always feasible.
        if order.infeasible(individual.phase, &individual.state) {
            if self.is_empty() {
                return Err(Error::InvalidInstance(
                    "infeasible individual offered to an empty population".into(),
                ));
            }
            return Ok(Insertion::Rejected);
        }
        let key = order.key(individual.phase, &individual.state)?;
        let bucket_id = self.bucket_of(individual.phase);
        let bucket = &mut self.buckets[bucket_id];
        let outcome = match bucket.index.get(&key) {
            Some(&slot) => {
                let incumbent = &bucket.members[slot].state;
                let strictly_worse = order.le(&individual.state, incumbent)
                    && !order.le(incumbent, &individual.state);
                if strictly_worse {
                    Insertion::Rejected
                } else {
                    bucket.members[slot] = individual;
                    Insertion::Replaced {
                        bucket: bucket_id,
                        slot,
                    }
                }
            }
            None => {
                let slot = bucket.members.len();
                bucket.index.insert(key, slot);
                bucket.members.push(individual);
                if slot == 0 && (self.phase_free || bucket_id < self.final_phase) {
                    self.selectable.push(bucket_id);
                }
                Insertion::Inserted {
                    bucket: bucket_id,
                    slot,
                }
            }
        };
        Ok(outcome)
    }

    /// Two-stage uniform selection: a represented phase `<= n-1`, then an
    /// individual of that phase. Phase-free populations select uniformly.
    pub fn select<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<&Individual<S>> {
        if self.selectable.is_empty() {
            return Err(Error::NoExtendableIndividuals);
        }
        let bucket = self.selectable[rng.gen_range(0..self.selectable.len())];
        let members = &self.buckets[bucket].members;
        Ok(&members[rng.gen_range(0..members.len())])
    }
}
