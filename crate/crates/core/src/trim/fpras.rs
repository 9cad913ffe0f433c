use serde::{Deserialize, Serialize};

use super::{choose_params, BoxGrid, BoxIndex, DpBenevolent, TrimParams};
use crate::error::{Error, Result};
use crate::evo::{EaOrder, EvolutionaryRun};

/// `⪯_Δ`: same phase, same Δ-box, then `⪯_qua`; infeasible individuals sit
/// below everything.
pub struct BoxOrder<'a, B: ?Sized> {
    spec: &'a B,
    grid: BoxGrid,
}

impl<'a, B: DpBenevolent + ?Sized> BoxOrder<'a, B> {
    pub fn new(spec: &'a B, params: TrimParams) -> Self {
        BoxOrder {
            spec,
            grid: BoxGrid::new(&params, &spec.degree_vector()),
        }
    }
}

impl<B: DpBenevolent + ?Sized> EaOrder for BoxOrder<'_, B> {
    type State = B::State;
    type Key = BoxIndex;

    fn infeasible(&self, phase: usize, state: &B::State) -> bool {
        self.spec.consistency(phase, state) > 0
    }

    fn key(&self, _phase: usize, state: &B::State) -> Result<BoxIndex> {
        self.grid.index(&self.spec.coordinates(state))
    }

    fn le(&self, a: &B::State, b: &B::State) -> bool {
        self.spec.qua_le(a, b)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FprasOutcome<Sol> {
    /// Best objective among final-phase individuals, if any exist.
    pub value: Option<u64>,
    pub solution: Option<Sol>,
    pub params: TrimParams,
    pub iterations: u64,
    pub success: bool,
    pub population_size: usize,
}

/// Trimmed evolutionary algorithm, stopped after exactly `τ` iterations.
pub fn ea_fpras<B>(spec: &B, epsilon: f64, seed: u64) -> Result<FprasOutcome<B::Solution>>
where
    B: DpBenevolent + ?Sized,
{
    let params = choose_params(epsilon, spec)?;
    run_for(spec, params.clone(), params.tau, seed)
}

/// Trimmed evolutionary algorithm with an explicit iteration count.
pub fn run_for<B>(
    spec: &B,
    params: TrimParams,
    iterations: u64,
    seed: u64,
) -> Result<FprasOutcome<B::Solution>>
where
    B: DpBenevolent + ?Sized,
{
    let order = BoxOrder::new(spec, params.clone());
    let mut run = EvolutionaryRun::new(spec, order, false, seed)?;
    while run.iterations() < iterations {
        match run.step() {
            Ok(_) => {}
            Err(Error::NoExtendableIndividuals) => break,
            Err(e) => return Err(e),
        }
    }
    let population = run.population();
    let sense = spec.sense();
    let mut best = None;
    for ind in population.bucket(population.final_bucket()) {
        if !spec.is_final_feasible(&ind.state) {
            continue;
        }
        let g = spec.objective(&ind.state);
        match best {
            Some((_, v)) if !sense.improves(g, v) => {}
            _ => best = Some((ind, g)),
        }
    }
    Ok(FprasOutcome {
        value: best.map(|(_, v)| v),
        solution: best.map(|(ind, _)| spec.backtrack(&ind.trace)),
        params,
        iterations: run.iterations(),
        success: best.is_some(),
        population_size: population.len(),
    })
}
