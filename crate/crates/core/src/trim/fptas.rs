use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{choose_params, BoxGrid, BoxIndex, DpBenevolent, TrimParams};
use crate::dp::{Entry, Trace};
use crate::error::{Error, Result};

/// Result of the trimmed dynamic program.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrimmedOutcome<Sol> {
    pub value: u64,
    pub solution: Sol,
    pub params: TrimParams,
    /// States kept at phases `0..=n`; after phase 0 this equals the number of
    /// non-empty boxes.
    pub kept_per_phase: Vec<usize>,
    pub transition_evals: u64,
}

struct BoxedSet<S> {
    entries: Vec<Entry<S>>,
    index: HashMap<BoxIndex, usize>,
}

/// Trimmed dynamic program: per phase and Δ-box, keeps one `⪯_qua`-best
/// state; returns the best final state's backtracked solution.
pub fn dp_trimmed<B>(spec: &B, epsilon: f64) -> Result<TrimmedOutcome<B::Solution>>
where
    B: DpBenevolent + ?Sized,
{
    let params = choose_params(epsilon, spec)?;
    let grid = BoxGrid::new(&params, &spec.degree_vector());

    let initial = spec.initial_states();
    if initial.is_empty() {
        return Err(Error::EmptyInitialStates);
    }
    let mut current: Vec<Entry<B::State>> = initial
        .into_iter()
        .enumerate()
        .map(|(i, state)| Entry {
            state,
            trace: Trace::origin(i),
        })
        .collect();
    let mut kept_per_phase = vec![current.len()];
    let mut transition_evals = 0u64;

    for phase in 1..=spec.phases() {
        let mut next = BoxedSet {
            entries: Vec::new(),
            index: HashMap::new(),
        };
        for parent in &current {
            for transition in 0..spec.transition_count(phase) {
                let image = spec.apply(phase, transition, &parent.state);
                transition_evals += 1;
                if spec.consistency(phase, &image) > 0 {
                    continue;
                }
                let cell = grid.index(&spec.coordinates(&image))?;
                let trace = parent.trace.then(transition);
                match next.index.get(&cell) {
                    Some(&slot) => {
                        if !spec.qua_le(&image, &next.entries[slot].state) {
                            next.entries[slot] = Entry {
                                state: image,
                                trace,
                            };
                        }
                    }
                    None => {
                        next.index.insert(cell, next.entries.len());
                        next.entries.push(Entry {
                            state: image,
                            trace,
                        });
                    }
                }
            }
        }
        kept_per_phase.push(next.entries.len());
        current = next.entries;
    }

    let sense = spec.sense();
    let best = current
        .iter()
        .filter(|e| spec.is_final_feasible(&e.state))
        .fold(None::<(&Entry<B::State>, u64)>, |best, e| {
            let g = spec.objective(&e.state);
            match best {
                Some((_, v)) if !sense.improves(g, v) => best,
                _ => Some((e, g)),
            }
        });
    let (entry, value) = best.ok_or(Error::NoFeasibleState)?;
    Ok(TrimmedOutcome {
        value,
        solution: spec.backtrack(&entry.trace),
        params,
        kept_per_phase,
        transition_evals,
    })
}
