//! Sampled checks of the conditions that make dominance pruning exact.
//!
//! States are drawn by random walks through the extended state space
//! (images are kept even when inconsistent), grouped by phase and dominance
//! key, and compared pairwise. Every adapter can be audited the same way.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ProblemSpec;

/// Violation counts over the sampled tuples. Transfer and feasibility counts
/// only include tuples whose pair was comparable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub tuples: u64,
    /// `S ⪯ S'` but `F(S) ⪯ F(S')` fails.
    pub transfer_violations: u64,
    /// `S ⪯ S'`, `S` consistent, `S'` not.
    pub feasibility_violations: u64,
    /// Same key, neither state dominates the other.
    pub totality_violations: u64,
    pub first_violation: Option<String>,
}

impl ConditionReport {
    pub fn violations(&self) -> u64 {
        self.transfer_violations + self.feasibility_violations + self.totality_violations
    }

    fn record(&mut self, what: impl FnOnce() -> String) {
        if self.first_violation.is_none() {
            self.first_violation = Some(what());
        }
    }
}

/// `(phase, state)` pairs reached by `walks` random walks from `S_0`. Half
/// of the steps prefer a consistent image when one exists, so the pool is
/// not swamped by dead sequences.
pub fn sample_state_pool<P, R>(spec: &P, walks: usize, rng: &mut R) -> Vec<(usize, P::State)>
where
    P: ProblemSpec + ?Sized,
    R: Rng + ?Sized,
{
    let initial = spec.initial_states();
    let n = spec.phases();
    let mut pool = Vec::with_capacity(walks * (n + 1));
    if initial.is_empty() {
        return pool;
    }
    for _ in 0..walks {
        let mut state = initial.choose(rng).expect("non-empty").clone();
        let length = rng.gen_range(0..=n);
        pool.push((0, state.clone()));
        for phase in 1..=length {
            let count = spec.transition_count(phase);
            if count == 0 {
                break;
            }
            let mut next = spec.apply(phase, rng.gen_range(0..count), &state);
            if rng.gen_bool(0.5) {
                for _ in 0..8 {
                    if spec.consistency(phase, &next) <= 0 {
                        break;
                    }
                    next = spec.apply(phase, rng.gen_range(0..count), &state);
                }
            }
            state = next;
            pool.push((phase, state.clone()));
        }
    }
    pool
}

/// Dominance transfer for one ordered pair `a ⪯ b` of phase `phase - 1` and
/// one transition of `F_phase`.
pub fn transfer_holds<P>(
    spec: &P,
    phase: usize,
    transition: usize,
    a: &P::State,
    b: &P::State,
) -> bool
where
    P: ProblemSpec + ?Sized,
{
    spec.dominated_by(
        &spec.apply(phase, transition, a),
        &spec.apply(phase, transition, b),
    )
}

/// Feasibility preservation for one ordered pair `a ⪯ b` under `H_phase`.
pub fn feasibility_holds<P>(spec: &P, phase: usize, a: &P::State, b: &P::State) -> bool
where
    P: ProblemSpec + ?Sized,
{
    spec.consistency(phase, a) > 0 || spec.consistency(phase, b) <= 0
}

/// Samples `tuples` (pair, transition) tuples and checks dominance transfer,
/// feasibility preservation and key-class totality on each.
pub fn check_conditions<P>(spec: &P, tuples: u64, seed: u64) -> ConditionReport
where
    P: ProblemSpec + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.phases();
    let mut report = ConditionReport::default();

    let pool = sample_state_pool(spec, 2048, &mut rng);
    let mut groups: BTreeMap<(usize, P::Key), Vec<P::State>> = BTreeMap::new();
    for (phase, state) in pool {
        let key = spec.dominance_key(phase, &state);
        let group = groups.entry((phase, key)).or_default();
        if !group.contains(&state) {
            group.push(state);
        }
    }
    let classes: Vec<(usize, Vec<P::State>)> = groups
        .into_iter()
        .filter(|(_, g)| g.len() >= 2)
        .map(|((phase, _), g)| (phase, g))
        .collect();
    if classes.is_empty() {
        return report;
    }

    while report.tuples < tuples {
        report.tuples += 1;
        let (phase, class) = &classes[rng.gen_range(0..classes.len())];
        let phase = *phase;
        let i = rng.gen_range(0..class.len());
        let mut j = rng.gen_range(0..class.len() - 1);
        if j >= i {
            j += 1;
        }
        let (x, y) = (&class[i], &class[j]);
        let (a, b) = if spec.dominated_by(x, y) {
            (x, y)
        } else if spec.dominated_by(y, x) {
            (y, x)
        } else {
            report.totality_violations += 1;
            report.record(|| {
                format!("phase {phase}: {x:?} and {y:?} share a key but are incomparable")
            });
            continue;
        };
        let h_phase = phase.max(1).min(n.max(1));
        if !feasibility_holds(spec, h_phase, a, b) {
            report.feasibility_violations += 1;
            report.record(|| {
                format!("phase {h_phase}: {a:?} ⪯ {b:?} but only the first is consistent")
            });
        }
        if phase < n {
            let next = phase + 1;
            let count = spec.transition_count(next);
            if count == 0 {
                continue;
            }
            let t = rng.gen_range(0..count);
            if !transfer_holds(spec, next, t, a, b) {
                report.transfer_violations += 1;
                report.record(|| {
                    format!(
                        "phase {next}, transition {t}: {a:?} ⪯ {b:?} but {:?} ⋠ {:?}",
                        spec.apply(next, t, a),
                        spec.apply(next, t, b)
                    )
                });
            }
        }
    }
    report
}
