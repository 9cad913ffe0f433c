//! Seeded trial campaigns.

use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use dynevo::dp::{dp_solve, dp_solve_shuffled, pareto_values};
use dynevo::oracles::{knapsack_bruteforce, MAX_KNAPSACK_ITEMS};
use dynevo::problems::{ApspSpec, KnapsackInstance, KnapsackSpec, SsspSpec, TspSpec};
use dynevo::trim::{choose_params, dp_trimmed, ea_fpras};
use dynevo::{ea_run, EaMode, ProblemSpec, StopPolicy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound::{theoretical_bound, weighted_transitions};
use crate::error::{HarnessError, Result};
use crate::generate::{generate, GenParams};
use crate::instance::{read_instance, Instance, ProblemKind};
use crate::report::{build_report, Format, Report, TrialRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Dp,
    EaStandard,
    EaHomogeneous,
    DpTrimmed,
    EaFpras,
}

impl Algorithm {
    pub fn is_approximate(self) -> bool {
        matches!(self, Algorithm::DpTrimmed | Algorithm::EaFpras)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceSource {
    File { path: PathBuf },
    Generated { params: GenParams, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub instance: InstanceSource,
    pub algorithm: Algorithm,
    pub epsilon: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Iteration budget as a multiple of the expected-time bound.
    pub budget_mult: f64,
    /// SSSP source, 1-based.
    pub source: usize,
    pub format: Format,
}

pub const DEFAULT_BUDGET_MULT: f64 = 50.0;

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(HarnessError::Validation(m));
        if self.trials < 1 {
            return fail("trials must be at least 1".into());
        }
        if !(self.budget_mult.is_finite() && self.budget_mult >= 1.0) {
            return fail(format!(
                "budget multiplier must be ≥ 1, got {}",
                self.budget_mult
            ));
        }
        if self.algorithm.is_approximate() {
            if self.problem != ProblemKind::Knapsack {
                return fail(format!(
                    "{:?} needs a benevolence certificate; only knapsack has one",
                    self.algorithm
                ));
            }
            match self.epsilon {
                Some(e) if e > 0.0 && e < 1.0 => {}
                other => return fail(format!("epsilon in (0, 1) required, got {other:?}")),
            }
        }
        if self.algorithm == Algorithm::EaHomogeneous
            && !matches!(self.problem, ProblemKind::Sssp | ProblemKind::Apsp)
        {
            return fail(format!(
                "{} transitions are not homogeneous",
                self.problem.name()
            ));
        }
        if self.source < 1 {
            return fail("source vertex is 1-based".into());
        }
        Ok(())
    }
}

/// Per-trial seeds drawn from a master generator seeded with `seed`.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..trials).map(|_| master.gen()).collect()
}

/// One number summarizing a set of final states.
pub trait Summary: ProblemSpec {
    fn summary_value(&self, finals: &[Self::State]) -> Option<i64>;
}

impl Summary for KnapsackSpec {
    /// Best profit.
    fn summary_value(&self, finals: &[Self::State]) -> Option<i64> {
        Some(KnapsackSpec::best_profit(
            finals.iter().filter(|s| self.is_final_feasible(s)),
        ))
    }
}

impl Summary for TspSpec {
    /// Shortest closed tour.
    fn summary_value(&self, finals: &[Self::State]) -> Option<i64> {
        self.best_tour(finals).map(|(len, _)| len)
    }
}

impl Summary for SsspSpec {
    /// Sum of distances to reached vertices.
    fn summary_value(&self, finals: &[Self::State]) -> Option<i64> {
        Some(self.distances(finals).into_iter().flatten().sum())
    }
}

impl Summary for ApspSpec {
    /// Sum of distances over reached ordered pairs.
    fn summary_value(&self, finals: &[Self::State]) -> Option<i64> {
        Some(self.distances(finals).into_iter().flatten().flatten().sum())
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn sorted(mut records: Vec<TrialRecord>) -> Vec<TrialRecord> {
    records.sort_by_key(|r| r.seed);
    records
}

/// EA trials stopped when the final population dominates `T_n`, or after
/// `budget_mult` times the expected-time bound.
pub fn run_ea_trials<P>(
    spec: &P,
    mode: EaMode,
    seeds: &[u64],
    budget_mult: f64,
) -> Result<Vec<TrialRecord>>
where
    P: Summary + Sync,
    P::State: Send + Sync,
    P::Key: Send + Sync,
{
    let sol = dp_solve(spec)?;
    let bound = theoretical_bound(spec, &sol, mode)?;
    let budget = (budget_mult * bound).ceil() as u64;
    let n = spec.phases();
    let reference: Vec<P::State> = sol.final_set().states().cloned().collect();
    let expected = pareto_values(
        spec,
        n,
        reference.iter().filter(|s| spec.is_final_feasible(s)),
    );

    let records = seeds
        .par_iter()
        .map(|&seed| {
            let start = Instant::now();
            let stop = StopPolicy::TargetReached {
                reference: reference.clone(),
                budget,
            };
            let report = ea_run(spec, mode, stop, seed)?;
            let wallclock_ms = elapsed_ms(start);
            if report.success && pareto_values(spec, n, &report.final_states) != expected {
                return Err(HarnessError::Integrity(format!(
                    "seed {seed}: final population values differ from the DP reference"
                )));
            }
            Ok(TrialRecord {
                seed,
                iterations: report.iterations,
                evals: report.objective_evaluations,
                success: report.success,
                value: spec.summary_value(&report.final_states),
                bound,
                ratio: (bound > 0.0).then(|| report.iterations as f64 / bound),
                wallclock_ms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sorted(records))
}

/// Exact DP with a seeded iteration order; success means the kept values
/// match the unshuffled run.
pub fn run_dp_trials<P>(spec: &P, seeds: &[u64]) -> Result<Vec<TrialRecord>>
where
    P: Summary + Sync,
    P::State: Send + Sync,
    P::Key: Send + Sync,
{
    let reference = dp_solve(spec)?;
    let n = spec.phases();
    let expected = pareto_values(spec, n, reference.final_set().states());
    let bound = weighted_transitions(spec, &reference) as f64;
    let records = seeds
        .par_iter()
        .map(|&seed| {
            let start = Instant::now();
            let sol = dp_solve_shuffled(spec, &mut ChaCha8Rng::seed_from_u64(seed))?;
            let wallclock_ms = elapsed_ms(start);
            let finals: Vec<P::State> = sol.final_set().states().cloned().collect();
            let iterations = sol.metrics.transition_evals;
            Ok(TrialRecord {
                seed,
                iterations,
                evals: iterations + spec.initial_states().len() as u64,
                success: pareto_values(spec, n, &finals) == expected,
                value: spec.summary_value(&finals),
                bound,
                ratio: (bound > 0.0).then(|| iterations as f64 / bound),
                wallclock_ms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sorted(records))
}

/// Optimal knapsack profit: enumeration when small, exact DP otherwise.
pub fn knapsack_optimum(instance: &KnapsackInstance) -> Result<i64> {
    if instance.len() <= MAX_KNAPSACK_ITEMS {
        return Ok(knapsack_bruteforce(instance)?.optimum);
    }
    let spec = KnapsackSpec::exact(instance.clone())?;
    Ok(KnapsackSpec::best_profit(
        dp_solve(&spec)?.final_set().states(),
    ))
}

/// FPTAS or FPRAS trials; success means a `(1+ε)`-approximation of the
/// optimum.
pub fn run_approx_trials(
    instance: &KnapsackInstance,
    algorithm: Algorithm,
    epsilon: f64,
    seeds: &[u64],
) -> Result<Vec<TrialRecord>> {
    let spec = KnapsackSpec::benevolent(instance.clone())?;
    let optimum = knapsack_optimum(instance)?;
    let params = choose_params(epsilon, &spec)?;
    let family: u64 = (1..=spec.phases())
        .map(|i| spec.transition_count(i) as u64)
        .sum();
    let approximates = |v: u64| v as f64 * (1.0 + epsilon) >= optimum as f64;
    let records = seeds
        .par_iter()
        .map(|&seed| {
            let start = Instant::now();
            let record = match algorithm {
                Algorithm::DpTrimmed => {
                    let out = dp_trimmed(&spec, epsilon)?;
                    let bound = params.box_count_bound() * family as f64;
                    TrialRecord {
                        seed,
                        iterations: out.transition_evals,
                        evals: out.transition_evals + 1,
                        success: approximates(out.value),
                        value: Some(out.value as i64),
                        bound,
                        ratio: Some(out.transition_evals as f64 / bound),
                        wallclock_ms: 0.0,
                    }
                }
                Algorithm::EaFpras => {
                    let out = ea_fpras(&spec, epsilon, seed)?;
                    let bound = out.params.tau as f64;
                    TrialRecord {
                        seed,
                        iterations: out.iterations,
                        evals: out.iterations + 1,
                        success: out.value.is_some_and(approximates),
                        value: out.value.map(|v| v as i64),
                        bound,
                        ratio: (bound > 0.0).then(|| out.iterations as f64 / bound),
                        wallclock_ms: 0.0,
                    }
                }
                other => {
                    return Err(HarnessError::Validation(format!(
                        "{other:?} is not an approximation scheme"
                    )))
                }
            };
            Ok(TrialRecord {
                wallclock_ms: elapsed_ms(start),
                ..record
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(sorted(records))
}

pub fn load_instance(config: &ExperimentConfig) -> Result<Instance> {
    match &config.instance {
        InstanceSource::File { path } => read_instance(config.problem, path),
        InstanceSource::Generated { params, seed } => generate(config.problem, params, *seed),
    }
}

fn mode_of(algorithm: Algorithm) -> EaMode {
    match algorithm {
        Algorithm::EaHomogeneous => EaMode::Homogeneous { width_hint: None },
        _ => EaMode::Standard,
    }
}

fn run_exact<P>(spec: &P, config: &ExperimentConfig, seeds: &[u64]) -> Result<Vec<TrialRecord>>
where
    P: Summary + Sync,
    P::State: Send + Sync,
    P::Key: Send + Sync,
{
    match config.algorithm {
        Algorithm::Dp => run_dp_trials(spec, seeds),
        a => run_ea_trials(spec, mode_of(a), seeds, config.budget_mult),
    }
}

/// Runs the campaign described by `config` on `instance`.
pub fn run_on(config: &ExperimentConfig, instance: &Instance) -> Result<Report> {
    config.validate()?;
    let seeds = trial_seeds(config.seed, config.trials);
    let records = match (config.problem, instance) {
        (ProblemKind::Knapsack, Instance::Knapsack(k)) if config.algorithm.is_approximate() => {
            run_approx_trials(
                k,
                config.algorithm,
                config.epsilon.unwrap_or_default(),
                &seeds,
            )?
        }
        (ProblemKind::Knapsack, Instance::Knapsack(k)) => {
            run_exact(&KnapsackSpec::exact(k.clone())?, config, &seeds)?
        }
        (ProblemKind::Tsp, Instance::Tsp(t)) => {
            run_exact(&TspSpec::new(t.clone())?, config, &seeds)?
        }
        (ProblemKind::Sssp, Instance::Graph(g)) => {
            let spec = SsspSpec::new(g.clone(), config.source - 1)?;
            run_exact(&spec, config, &seeds)?
        }
        (ProblemKind::Apsp, Instance::Graph(g)) => {
            run_exact(&ApspSpec::new(g.clone())?, config, &seeds)?
        }
        (kind, _) => {
            return Err(HarnessError::Validation(format!(
                "instance does not match problem {}",
                kind.name()
            )))
        }
    };
    Ok(build_report(config, records))
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let instance = load_instance(config)?;
    run_on(config, &instance)
}
