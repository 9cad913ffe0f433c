//! Generic phased dynamic program.
//!
//! A problem is described by a [`ProblemSpec`]: initial states, a finite
//! family of transition functions per phase, a signed consistency check and
//! a dominance quasi-order. [`dp_solve`] keeps, phase by phase, a
//! minimal-by-inclusion dominating subset of the feasible images of the
//! previous phase's kept states.

pub mod conditions;
mod set;
mod trace;

use std::collections::{BTreeMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use set::{DominatingSet, Entry, Offer};
pub use trace::Trace;

/// A problem adapter for the phased dynamic program.
///
/// Phases run `1..=phases()`; phase 0 holds the initial states. Transition
/// indices are stable per phase and feed [`Trace`] back-tracking.
pub trait ProblemSpec {
    type State: Clone + Eq + Hash + Debug;
    type Key: Clone + Eq + Hash + Ord + Debug;

    /// Number of phases `n`.
    fn phases(&self) -> usize;

    fn initial_states(&self) -> Vec<Self::State>;

    /// `|F_phase|`, for `phase` in `1..=n`.
    fn transition_count(&self, phase: usize) -> usize;

    /// Applies transition `transition` of phase `phase`.
    fn apply(&self, phase: usize, transition: usize, state: &Self::State) -> Self::State;

    /// Signed consistency value; `<= 0` means the state belongs to the
    /// search space at `phase`.
    fn consistency(&self, phase: usize, state: &Self::State) -> i64;

    fn is_feasible(&self, phase: usize, state: &Self::State) -> bool {
        self.consistency(phase, state) <= 0
    }

    /// `a ⪯_dom b`: `b` is at least as good as `a`.
    fn dominated_by(&self, a: &Self::State, b: &Self::State) -> bool;

    /// Two feasible states at `phase` are comparable iff their keys match.
    fn dominance_key(&self, phase: usize, state: &Self::State) -> Self::Key;

    /// Membership in the set of feasible final solutions.
    fn is_final_feasible(&self, state: &Self::State) -> bool;

    /// Scalar compared inside a key class (profit, path length, ...).
    fn value(&self, state: &Self::State) -> i64;

    /// All phases share one transition family and one consistency function,
    /// and the family contains the identity.
    fn is_homogeneous(&self) -> bool {
        false
    }

    /// Maximum antichain size of the dominance order, when known analytically.
    fn declared_width(&self) -> Option<u64> {
        None
    }
}

/// Operation counters for one solve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DpMetrics {
    pub transition_evals: u64,
    pub consistency_evals: u64,
    pub dominance_checks: u64,
    pub states_kept_per_phase: Vec<usize>,
    pub dp_size: usize,
}

impl DpMetrics {
    fn record_phase(&mut self, kept: usize) {
        self.states_kept_per_phase.push(kept);
        self.dp_size += kept;
    }
}

/// All dominating sets `T_0..T_n` of a solve plus its counters.
#[derive(Clone, Debug)]
pub struct DpSolution<S, K> {
    pub phases: Vec<DominatingSet<S, K>>,
    pub metrics: DpMetrics,
}

impl<S: Clone, K: Eq + Hash + Clone> DpSolution<S, K> {
    /// `T_n`.
    pub fn final_set(&self) -> &DominatingSet<S, K> {
        self.phases.last().expect("a solution holds at least T_0")
    }

    pub fn kept_per_phase(&self) -> &[usize] {
        &self.metrics.states_kept_per_phase
    }

    pub fn dp_size(&self) -> usize {
        self.metrics.dp_size
    }
}

/// Builds `T_0` from the initial states.
pub fn initialize_dominating_set<P>(
    initial_states: &[P::State],
    spec: &P,
    metrics: &mut DpMetrics,
) -> Result<DominatingSet<P::State, P::Key>>
where
    P: ProblemSpec + ?Sized,
{
    if initial_states.is_empty() {
        return Err(Error::EmptyInitialStates);
    }
    let mut set = DominatingSet::new(0);
    for (index, state) in initial_states.iter().enumerate() {
        metrics.consistency_evals += 1;
        if !spec.is_feasible(0, state) {
            return Err(Error::InfeasibleInitialState { index });
        }
        set.offer(spec, state.clone(), Trace::origin(index), metrics);
    }
    Ok(set)
}

/// Computes `T_i` from `T_{i-1}`, visiting (state, transition) pairs in
/// natural order.
pub fn phase_step<P>(
    prev: &DominatingSet<P::State, P::Key>,
    phase: usize,
    spec: &P,
    metrics: &mut DpMetrics,
) -> DominatingSet<P::State, P::Key>
where
    P: ProblemSpec + ?Sized,
{
    let family = spec.transition_count(phase);
    let order = (0..prev.len()).flat_map(|s| (0..family).map(move |f| (s, f)));
    phase_step_in_order(prev, phase, spec, metrics, order)
}

/// Computes `T_i` visiting the (entry slot, transition index) pairs in the
/// given order.
pub fn phase_step_in_order<P, I>(
    prev: &DominatingSet<P::State, P::Key>,
    phase: usize,
    spec: &P,
    metrics: &mut DpMetrics,
    order: I,
) -> DominatingSet<P::State, P::Key>
where
    P: ProblemSpec + ?Sized,
    I: IntoIterator<Item = (usize, usize)>,
{
    let mut next = DominatingSet::new(phase);
    for (slot, transition) in order {
        let parent = &prev.entries()[slot];
        let image = spec.apply(phase, transition, &parent.state);
        metrics.transition_evals += 1;
        metrics.consistency_evals += 1;
        if spec.consistency(phase, &image) <= 0 {
            next.offer(spec, image, parent.trace.then(transition), metrics);
        }
    }
    next
}

fn check_families<P: ProblemSpec + ?Sized>(spec: &P) -> Result<()> {
    for phase in 1..=spec.phases() {
        if spec.transition_count(phase) == 0 {
            return Err(Error::InvalidInstance(format!(
                "empty transition family at phase {phase}"
            )));
        }
    }
    Ok(())
}

/// Runs the phased dynamic program and returns every `T_i`.
pub fn dp_solve<P>(spec: &P) -> Result<DpSolution<P::State, P::Key>>
where
    P: ProblemSpec + ?Sized,
{
    solve_with(spec, |prev, _| {
        let family = spec.transition_count(prev.phase() + 1);
        (0..prev.len())
            .flat_map(|s| (0..family).map(move |f| (s, f)))
            .collect()
    })
}

/// Same as [`dp_solve`] but visits the (state, transition) pairs of every
/// phase in a random order. Kept representatives may differ; set sizes may not.
pub fn dp_solve_shuffled<P, R>(spec: &P, rng: &mut R) -> Result<DpSolution<P::State, P::Key>>
where
    P: ProblemSpec + ?Sized,
    R: Rng + ?Sized,
{
    let initial = spec.initial_states();
    let mut order_rng = |prev: &DominatingSet<P::State, P::Key>, _: usize| {
        let family = spec.transition_count(prev.phase() + 1);
        let mut pairs: Vec<(usize, usize)> = (0..prev.len())
            .flat_map(|s| (0..family).map(move |f| (s, f)))
            .collect();
        pairs.shuffle(rng);
        pairs
    };
    solve_from(spec, &initial, &mut order_rng)
}

fn solve_with<P, O>(spec: &P, mut order: O) -> Result<DpSolution<P::State, P::Key>>
where
    P: ProblemSpec + ?Sized,
    O: FnMut(&DominatingSet<P::State, P::Key>, usize) -> Vec<(usize, usize)>,
{
    let initial = spec.initial_states();
    solve_from(spec, &initial, &mut order)
}

fn solve_from<P, O>(
    spec: &P,
    initial: &[P::State],
    order: &mut O,
) -> Result<DpSolution<P::State, P::Key>>
where
    P: ProblemSpec + ?Sized,
    O: FnMut(&DominatingSet<P::State, P::Key>, usize) -> Vec<(usize, usize)>,
{
    check_families(spec)?;
    let mut metrics = DpMetrics::default();
    let first = initialize_dominating_set(initial, spec, &mut metrics)?;
    metrics.record_phase(first.len());
    let mut phases = vec![first];
    for phase in 1..=spec.phases() {
        let prev = phases.last().expect("T_0 present");
        let pairs = order(prev, phase);
        let next = phase_step_in_order(prev, phase, spec, &mut metrics, pairs);
        metrics.record_phase(next.len());
        phases.push(next);
    }
    Ok(DpSolution { phases, metrics })
}

/// Untrimmed per-phase state sets `S_0..S_n`, each deduplicated by value.
///
/// Exponential; meant for cross-checking [`dp_solve`] on small instances.
pub fn simplified_dp_enumerate<P>(spec: &P, max_states: usize) -> Result<Vec<Vec<P::State>>>
where
    P: ProblemSpec + ?Sized,
{
    check_families(spec)?;
    let initial = spec.initial_states();
    if initial.is_empty() {
        return Err(Error::EmptyInitialStates);
    }
    let mut layers = vec![dedup(initial)];
    if layers[0].len() > max_states {
        return Err(Error::StateExplosion {
            phase: 0,
            budget: max_states,
        });
    }
    for phase in 1..=spec.phases() {
        let prev = layers.last().expect("S_0 present");
        let mut seen = HashSet::new();
        let mut layer = Vec::new();
        for state in prev {
            for transition in 0..spec.transition_count(phase) {
                let image = spec.apply(phase, transition, state);
                if spec.consistency(phase, &image) <= 0 && seen.insert(image.clone()) {
                    layer.push(image);
                    if layer.len() > max_states {
                        return Err(Error::StateExplosion {
                            phase,
                            budget: max_states,
                        });
                    }
                }
            }
        }
        layers.push(layer);
    }
    Ok(layers)
}

fn dedup<S: Clone + Eq + Hash>(states: Vec<S>) -> Vec<S> {
    let mut seen = HashSet::new();
    states
        .into_iter()
        .filter(|s| seen.insert(s.clone()))
        .collect()
}

/// Key-class values of a state collection, e.g. the Pareto values of `T_n`.
pub fn pareto_values<'a, P, I>(spec: &P, phase: usize, states: I) -> BTreeMap<P::Key, i64>
where
    P: ProblemSpec + ?Sized,
    P::State: 'a,
    I: IntoIterator<Item = &'a P::State>,
{
    states
        .into_iter()
        .map(|s| (spec.dominance_key(phase, s), spec.value(s)))
        .collect()
}
