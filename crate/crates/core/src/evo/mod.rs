//! The DP-simulating evolutionary algorithm.
//!
//! Individuals are `(phase, state)` pairs. Each iteration selects a phase
//! uniformly among the represented phases `<= n-1`, then an individual of
//! that phase uniformly, applies a uniformly chosen transition of the next
//! phase, and inserts the offspring unless a member is strictly better.
//!
//! In homogeneous mode the phase is ignored by comparison and selection;
//! it survives on individuals only as a generation counter.

mod population;

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dp::{ProblemSpec, Trace};
use crate::error::{Error, Result};

pub use population::{EaOrder, Individual, Insertion, Population};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EaMode {
    Standard,
    Homogeneous { width_hint: Option<u64> },
}

impl EaMode {
    pub fn is_homogeneous(self) -> bool {
        matches!(self, EaMode::Homogeneous { .. })
    }
}

/// Verdict of comparing two individuals under the EA order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// `a ⪯ b` only.
    Below,
    /// `b ⪯ a` only.
    Above,
    Equivalent,
    Incomparable,
}

impl Comparison {
    fn from_pair(a_le_b: bool, b_le_a: bool) -> Self {
        match (a_le_b, b_le_a) {
            (true, true) => Comparison::Equivalent,
            (true, false) => Comparison::Below,
            (false, true) => Comparison::Above,
            (false, false) => Comparison::Incomparable,
        }
    }
}

fn consistency_phase<P: ProblemSpec + ?Sized>(spec: &P, homogeneous: bool, phase: usize) -> usize {
    if homogeneous {
        spec.phases().min(1)
    } else {
        phase
    }
}

/// Reference comparison between two individuals.
///
/// Standard: `a ⪯ b` iff same phase and `a.state ⪯_dom b.state`, or `a` is
/// infeasible at its own phase. Homogeneous: the phase test is dropped.
pub fn ea_compare<P>(
    a: &Individual<P::State>,
    b: &Individual<P::State>,
    spec: &P,
    mode: EaMode,
) -> Comparison
where
    P: ProblemSpec + ?Sized,
{
    let homogeneous = mode.is_homogeneous();
    let le = |x: &Individual<P::State>, y: &Individual<P::State>| {
        let h = consistency_phase(spec, homogeneous, x.phase);
        let related = homogeneous || x.phase == y.phase;
        (related && spec.dominated_by(&x.state, &y.state)) || spec.consistency(h, &x.state) > 0
    };
    Comparison::from_pair(le(a, b), le(b, a))
}

/// [`EaOrder`] induced by the adapter's dominance order.
#[derive(Clone, Copy, Debug)]
pub struct DominanceOrder<'a, P: ?Sized> {
    spec: &'a P,
    homogeneous: bool,
}

impl<'a, P: ProblemSpec + ?Sized> DominanceOrder<'a, P> {
    pub fn new(spec: &'a P, mode: EaMode) -> Self {
        DominanceOrder {
            spec,
            homogeneous: mode.is_homogeneous(),
        }
    }
}

impl<P: ProblemSpec + ?Sized> EaOrder for DominanceOrder<'_, P> {
    type State = P::State;
    type Key = P::Key;

    fn infeasible(&self, phase: usize, state: &P::State) -> bool {
        let h = consistency_phase(self.spec, self.homogeneous, phase);
        self.spec.consistency(h, state) > 0
    }

    fn key(&self, phase: usize, state: &P::State) -> Result<P::Key> {
        let phase = if self.homogeneous {
            self.spec.phases()
        } else {
            phase
        };
        Ok(self.spec.dominance_key(phase, state))
    }

    fn le(&self, a: &P::State, b: &P::State) -> bool {
        self.spec.dominated_by(a, b)
    }
}

/// Draws an individual by two-stage uniform selection.
pub fn select<'p, S, K, R>(
    population: &'p Population<S, K>,
    rng: &mut R,
) -> Result<&'p Individual<S>>
where
    S: Clone,
    K: Clone + Eq + std::hash::Hash + Ord,
    R: Rng + ?Sized,
{
    population.select(rng)
}

/// Applies a uniformly drawn transition of the parent's next phase.
pub fn mutate<P, R>(
    parent: &Individual<P::State>,
    spec: &P,
    homogeneous: bool,
    rng: &mut R,
) -> Individual<P::State>
where
    P: ProblemSpec + ?Sized,
    R: Rng + ?Sized,
{
    let family_phase = if homogeneous { 1 } else { parent.phase + 1 };
    let transition = rng.gen_range(0..spec.transition_count(family_phase));
    Individual {
        phase: parent.phase + 1,
        state: spec.apply(family_phase, transition, &parent.state),
        trace: parent.trace.then(transition),
    }
}

/// What one iteration did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub offspring_phase: usize,
    pub insertion: Insertion,
}

/// A running instance of the evolutionary loop, advanced one iteration at a
/// time.
pub struct EvolutionaryRun<'a, P: ?Sized, O: EaOrder> {
    spec: &'a P,
    order: O,
    population: Population<O::State, O::Key>,
    rng: ChaCha8Rng,
    homogeneous: bool,
    initial_count: usize,
    iterations: u64,
    transition_evals: u64,
}

impl<'a, P, O> EvolutionaryRun<'a, P, O>
where
    P: ProblemSpec + ?Sized,
    O: EaOrder<State = P::State>,
{
    /// Seeds the population with `{0} × S_0`, inserting in order.
    pub fn new(spec: &'a P, order: O, homogeneous: bool, seed: u64) -> Result<Self> {
        let initial = spec.initial_states();
        if initial.is_empty() {
            return Err(Error::EmptyInitialStates);
        }
        let mut population = Population::new(spec.phases(), homogeneous);
        for (index, state) in initial.iter().enumerate() {
            if order.infeasible(0, state) {
                return Err(Error::InfeasibleInitialState { index });
            }
            population.insert(
                &order,
                Individual {
                    phase: 0,
                    state: state.clone(),
                    trace: Trace::origin(index),
                },
            )?;
        }
        Ok(EvolutionaryRun {
            spec,
            order,
            population,
            rng: ChaCha8Rng::seed_from_u64(seed),
            homogeneous,
            initial_count: initial.len(),
            iterations: 0,
            transition_evals: 0,
        })
    }

    pub fn population(&self) -> &Population<O::State, O::Key> {
        &self.population
    }

    pub fn order(&self) -> &O {
        &self.order
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn transition_evals(&self) -> u64 {
        self.transition_evals
    }

    pub fn initial_count(&self) -> usize {
        self.initial_count
    }

    /// One select–mutate–insert iteration.
    pub fn step(&mut self) -> Result<StepOutcome> {
        let parent = self.population.select(&mut self.rng)?;
        let child = mutate(parent, self.spec, self.homogeneous, &mut self.rng);
        self.iterations += 1;
        self.transition_evals += 1;
        let offspring_phase = child.phase;
        let insertion = self.population.insert(&self.order, child)?;
        Ok(StepOutcome {
            offspring_phase,
            insertion,
        })
    }
}

/// When [`ea_run`] stops.
#[derive(Clone, Debug)]
pub enum StopPolicy<S> {
    /// Stop once the final bucket dominates every reference state (typically
    /// `T_n` from the exact DP), or after `budget` iterations.
    TargetReached { reference: Vec<S>, budget: u64 },
    /// Run exactly `budget` iterations.
    Budget(u64),
    /// Stop at the first final-feasible individual in the final bucket.
    FirstFinalFeasible { budget: u64 },
}

impl<S> StopPolicy<S> {
    fn budget(&self) -> u64 {
        match self {
            StopPolicy::TargetReached { budget, .. }
            | StopPolicy::Budget(budget)
            | StopPolicy::FirstFinalFeasible { budget } => *budget,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EaRunReport<S> {
    pub iterations: u64,
    /// `|S_0|` plus the iteration count.
    pub objective_evaluations: u64,
    pub success: bool,
    pub final_states: Vec<S>,
    pub transition_evals: u64,
    pub population_size: usize,
}

/// Incremental count of reference states already dominated by the final
/// bucket. Domination is never lost: a member is only ever replaced by an
/// equivalent or better state of the same key.
struct TargetTracker<S, K> {
    reference: HashMap<K, S>,
    covered: usize,
    covered_keys: std::collections::HashSet<K>,
}

impl<S, K: Clone + Eq + std::hash::Hash> TargetTracker<S, K> {
    fn new<P>(spec: &P, reference: Vec<S>) -> Self
    where
        P: ProblemSpec<State = S, Key = K> + ?Sized,
    {
        let phase = spec.phases();
        let reference = reference
            .into_iter()
            .map(|s| (spec.dominance_key(phase, &s), s))
            .collect();
        TargetTracker {
            reference,
            covered: 0,
            covered_keys: Default::default(),
        }
    }

    fn observe<P>(&mut self, spec: &P, state: &S)
    where
        P: ProblemSpec<State = S, Key = K> + ?Sized,
    {
        let key = spec.dominance_key(spec.phases(), state);
        if self.covered_keys.contains(&key) {
            return;
        }
        if let Some(target) = self.reference.get(&key) {
            if spec.dominated_by(target, state) {
                self.covered_keys.insert(key);
                self.covered += 1;
            }
        }
    }

    fn done(&self) -> bool {
        self.covered == self.reference.len()
    }
}

/// Runs the evolutionary algorithm under `stop`, seeded by `seed`.
pub fn ea_run<P>(
    spec: &P,
    mode: EaMode,
    stop: StopPolicy<P::State>,
    seed: u64,
) -> Result<EaRunReport<P::State>>
where
    P: ProblemSpec + ?Sized,
{
    let homogeneous = mode.is_homogeneous();
    if homogeneous && !spec.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let order = DominanceOrder::new(spec, mode);
    let mut run = EvolutionaryRun::new(spec, order, homogeneous, seed)?;
    let final_bucket = run.population().final_bucket();
    let budget = stop.budget();

    let mut tracker = match &stop {
        StopPolicy::TargetReached { reference, .. } => {
            let mut t = TargetTracker::new(spec, reference.clone());
            for ind in run.population().bucket(final_bucket) {
                t.observe(spec, &ind.state);
            }
            Some(t)
        }
        _ => None,
    };
    let first_final = matches!(stop, StopPolicy::FirstFinalFeasible { .. });
    let mut found_final = first_final
        && run
            .population()
            .bucket(final_bucket)
            .iter()
            .any(|i| spec.is_final_feasible(&i.state));

    let success = loop {
        if tracker.as_ref().is_some_and(|t| t.done()) || found_final {
            break true;
        }
        if run.iterations() >= budget {
            break matches!(stop, StopPolicy::Budget(_));
        }
        let outcome = match run.step() {
            Ok(o) => o,
            Err(Error::NoExtendableIndividuals) => break matches!(stop, StopPolicy::Budget(_)),
            Err(e) => return Err(e),
        };
        if let Some((bucket, slot)) = outcome.insertion.position() {
            if bucket == final_bucket {
                let state = &run.population().individual(bucket, slot).state;
                if let Some(t) = tracker.as_mut() {
                    t.observe(spec, state);
                }
                if first_final && spec.is_final_feasible(state) {
                    found_final = true;
                }
            }
        }
    };

    Ok(EaRunReport {
        iterations: run.iterations(),
        objective_evaluations: run.iterations() + run.initial_count() as u64,
        success,
        final_states: out_ea(run.population(), spec),
        transition_evals: run.transition_evals(),
        population_size: run.population().len(),
    })
}

/// Final-feasible states of the final bucket with phase tags stripped.
pub fn out_ea<P>(population: &Population<P::State, P::Key>, spec: &P) -> Vec<P::State>
where
    P: ProblemSpec + ?Sized,
{
    population
        .bucket(population.final_bucket())
        .iter()
        .filter(|i| spec.is_final_feasible(&i.state))
        .map(|i| i.state.clone())
        .collect()
}

/// Adapter-declared width of the dominance order.
pub fn width_of<P: ProblemSpec + ?Sized>(spec: &P) -> Result<u64> {
    spec.declared_width().ok_or(Error::WidthUnknown)
}
