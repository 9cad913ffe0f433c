//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or engine error, 2 a run or trial
//! missed its target, 3 I/O error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dynevo::dp::dp_solve;
use dynevo::oracles::{apsp_reference, knapsack_bruteforce, sssp_reference, tsp_bruteforce};
use dynevo::problems::{ApspSpec, KnapsackSpec, SsspSpec, TspSpec};
use dynevo::trim::{dp_trimmed, ea_fpras};
use dynevo::{ea_run, EaMode, ProblemSpec, StopPolicy};
use serde_json::{json, Value};

use crate::bound::theoretical_bound;
use crate::error::{HarnessError, Result};
use crate::experiment::{
    run_experiment, Algorithm, ExperimentConfig, InstanceSource, Summary, DEFAULT_BUDGET_MULT,
};
use crate::generate::{generate, GenParams};
use crate::instance::{read_instance, render_instance, write_output, Instance, ProblemKind};
use crate::report::{emit_report, Format};

#[derive(Parser, Debug)]
#[command(
    name = "dynevo",
    version,
    about = "Phased DP, its evolutionary simulation and Δ-box approximation schemes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve exactly with the phased dynamic program.
    Dp(SolveArgs),
    /// Run the evolutionary algorithm until it matches the DP result.
    Ea(EaArgs),
    /// Trimmed DP (deterministic approximation, knapsack).
    Fptas(ApproxArgs),
    /// Trimmed EA (randomized approximation, knapsack).
    Fpras(ApproxArgs),
    /// Brute-force or textbook reference solution.
    Oracle(SolveArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
    /// Run a seeded multi-trial campaign and write a report.
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    #[arg(long)]
    pub instance: PathBuf,
    /// SSSP source vertex (1-based).
    #[arg(long, default_value_t = 1)]
    pub source: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Standard,
    Homogeneous,
}

#[derive(Args, Debug)]
pub struct EaArgs {
    #[command(flatten)]
    pub solve: SolveArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Standard)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET_MULT)]
    pub budget_mult: f64,
}

#[derive(Args, Debug)]
pub struct ApproxArgs {
    #[arg(long, value_enum, default_value_t = ProblemKind::Knapsack)]
    pub problem: ProblemKind,
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct GenFlags {
    /// Items or vertices.
    #[arg(long, default_value_t = 8)]
    pub size: usize,
    #[arg(long, default_value_t = 20)]
    pub max_weight: i64,
    #[arg(long, default_value_t = 20)]
    pub max_profit: i64,
    /// Knapsack capacity (default: half the total weight).
    #[arg(long)]
    pub capacity: Option<i64>,
    /// TSP: Manhattan distances between random grid points.
    #[arg(long)]
    pub metric: bool,
    /// Graphs: probability of each edge beyond a random spanning tree.
    #[arg(long, default_value_t = 0.3)]
    pub edge_prob: f64,
}

impl GenFlags {
    fn params(&self) -> GenParams {
        GenParams {
            size: self.size,
            max_weight: self.max_weight,
            max_profit: self.max_profit,
            capacity: self.capacity,
            metric: self.metric,
            edge_prob: self.edge_prob,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    #[command(flatten)]
    pub gen: GenFlags,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    /// Instance file; a generated instance is used when absent.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[command(flatten)]
    pub gen: GenFlags,
    /// Generator seed (default: --seed).
    #[arg(long)]
    pub gen_seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Algorithm::EaStandard)]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_BUDGET_MULT)]
    pub budget_mult: f64,
    #[arg(long, default_value_t = 1)]
    pub source: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    s
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn sssp_spec(g: &dynevo::problems::Graph, source: usize) -> Result<SsspSpec> {
    if source < 1 || source > g.len() {
        return Err(HarnessError::Validation(format!(
            "source {source} outside 1..={}",
            g.len()
        )));
    }
    Ok(SsspSpec::new(g.clone(), source - 1)?)
}

fn load(problem: ProblemKind, path: &std::path::Path) -> Result<Instance> {
    read_instance(problem, path)
}

fn dp_command(args: &SolveArgs) -> Result<Value> {
    let instance = load(args.problem, &args.instance)?;
    let out = match (args.problem, &instance) {
        (ProblemKind::Knapsack, Instance::Knapsack(k)) => {
            let spec = KnapsackSpec::exact(k.clone())?;
            let sol = dp_solve(&spec)?;
            let best = sol
                .final_set()
                .entries()
                .iter()
                .max_by_key(|e| (e.state.profit, std::cmp::Reverse(e.state.weight)))
                .expect("the empty selection is always kept");
            json!({
                "value": best.state.profit,
                "weight": best.state.weight,
                "items": one_based(&KnapsackSpec::items_of(&best.trace)),
                "kept_per_phase": sol.kept_per_phase(),
                "dp_size": sol.dp_size(),
                "metrics": sol.metrics,
            })
        }
        (ProblemKind::Tsp, Instance::Tsp(t)) => {
            let spec = TspSpec::new(t.clone())?;
            let sol = dp_solve(&spec)?;
            let (len, best) = spec
                .best_tour(sol.final_set().states())
                .ok_or(dynevo::Error::NoFeasibleState)?;
            let entry = sol
                .final_set()
                .get(&spec.dominance_key(spec.phases(), &best))
                .expect("best tour comes from the final set");
            json!({
                "value": len,
                "tour": one_based(&TspSpec::tour_of(&entry.trace)),
                "kept_per_phase": sol.kept_per_phase(),
                "dp_size": sol.dp_size(),
                "metrics": sol.metrics,
            })
        }
        (ProblemKind::Sssp, Instance::Graph(g)) => {
            let spec = sssp_spec(g, args.source)?;
            let sol = dp_solve(&spec)?;
            let finals: Vec<_> = sol.final_set().states().cloned().collect();
            json!({
                "value": spec.summary_value(&finals),
                "distances": spec.distances(&finals),
                "kept_per_phase": sol.kept_per_phase(),
                "dp_size": sol.dp_size(),
                "metrics": sol.metrics,
            })
        }
        (ProblemKind::Apsp, Instance::Graph(g)) => {
            let spec = ApspSpec::new(g.clone())?;
            let sol = dp_solve(&spec)?;
            let finals: Vec<_> = sol.final_set().states().cloned().collect();
            json!({
                "value": spec.summary_value(&finals),
                "distances": spec.distances(&finals),
                "kept_per_phase": sol.kept_per_phase(),
                "dp_size": sol.dp_size(),
                "metrics": sol.metrics,
            })
        }
        _ => unreachable!("instance kind follows the problem"),
    };
    Ok(out)
}

fn ea_single<P>(spec: &P, mode: EaMode, seed: u64, budget_mult: f64) -> Result<(Value, bool)>
where
    P: Summary,
{
    let sol = dp_solve(spec)?;
    let bound = theoretical_bound(spec, &sol, mode)?;
    let budget = (budget_mult * bound).ceil() as u64;
    let reference = sol.final_set().states().cloned().collect();
    let report = ea_run(
        spec,
        mode,
        StopPolicy::TargetReached { reference, budget },
        seed,
    )?;
    let value = json!({
        "seed": seed,
        "success": report.success,
        "iterations": report.iterations,
        "evals": report.objective_evaluations,
        "transition_evals": report.transition_evals,
        "population_size": report.population_size,
        "bound": bound,
        "budget": budget,
        "ratio": if bound > 0.0 { Some(report.iterations as f64 / bound) } else { None },
        "value": spec.summary_value(&report.final_states),
    });
    Ok((value, report.success))
}

fn ea_command(args: &EaArgs) -> Result<(Value, bool)> {
    let s = &args.solve;
    let mode = match args.mode {
        ModeArg::Standard => EaMode::Standard,
        ModeArg::Homogeneous => EaMode::Homogeneous { width_hint: None },
    };
    if !(args.budget_mult.is_finite() && args.budget_mult >= 1.0) {
        return Err(HarnessError::Validation(format!(
            "budget multiplier must be ≥ 1, got {}",
            args.budget_mult
        )));
    }
    let instance = load(s.problem, &s.instance)?;
    match (s.problem, &instance) {
        (ProblemKind::Knapsack, Instance::Knapsack(k)) => ea_single(
            &KnapsackSpec::exact(k.clone())?,
            mode,
            args.seed,
            args.budget_mult,
        ),
        (ProblemKind::Tsp, Instance::Tsp(t)) => {
            ea_single(&TspSpec::new(t.clone())?, mode, args.seed, args.budget_mult)
        }
        (ProblemKind::Sssp, Instance::Graph(g)) => {
            ea_single(&sssp_spec(g, s.source)?, mode, args.seed, args.budget_mult)
        }
        (ProblemKind::Apsp, Instance::Graph(g)) => ea_single(
            &ApspSpec::new(g.clone())?,
            mode,
            args.seed,
            args.budget_mult,
        ),
        _ => unreachable!("instance kind follows the problem"),
    }
}

fn knapsack_only(args: &ApproxArgs) -> Result<dynevo::problems::KnapsackInstance> {
    if args.problem != ProblemKind::Knapsack {
        return Err(HarnessError::Validation(
            "approximation schemes need a benevolence certificate; only knapsack has one".into(),
        ));
    }
    match load(args.problem, &args.instance)? {
        Instance::Knapsack(k) => Ok(k),
        _ => unreachable!("instance kind follows the problem"),
    }
}

fn fptas_command(args: &ApproxArgs) -> Result<Value> {
    let inst = knapsack_only(args)?;
    let out = dp_trimmed(&KnapsackSpec::benevolent(inst)?, args.epsilon)?;
    Ok(json!({
        "value": out.value,
        "items": one_based(&out.solution),
        "params": out.params,
        "kept_per_phase": out.kept_per_phase,
        "transition_evals": out.transition_evals,
    }))
}

fn fpras_command(args: &ApproxArgs) -> Result<(Value, bool)> {
    let inst = knapsack_only(args)?;
    let out = ea_fpras(&KnapsackSpec::benevolent(inst)?, args.epsilon, args.seed)?;
    let found = out.value.is_some();
    Ok((
        json!({
            "seed": args.seed,
            "value": out.value,
            "items": out.solution.as_deref().map(one_based),
            "params": out.params,
            "iterations": out.iterations,
            "population_size": out.population_size,
        }),
        found,
    ))
}

fn oracle_command(args: &SolveArgs) -> Result<Value> {
    let instance = load(args.problem, &args.instance)?;
    Ok(match (args.problem, &instance) {
        (ProblemKind::Knapsack, Instance::Knapsack(k)) => {
            let r = knapsack_bruteforce(k)?;
            json!({ "optimum": r.optimum, "items": one_based(&r.witness) })
        }
        (ProblemKind::Tsp, Instance::Tsp(t)) => {
            let r = tsp_bruteforce(t)?;
            json!({ "optimum": r.optimum, "tour": one_based(&r.witness) })
        }
        (ProblemKind::Sssp, Instance::Graph(g)) => {
            let spec = sssp_spec(g, args.source)?;
            json!({ "distances": sssp_reference(g, spec.source()) })
        }
        (ProblemKind::Apsp, Instance::Graph(g)) => json!({ "distances": apsp_reference(g) }),
        _ => unreachable!("instance kind follows the problem"),
    })
}

fn experiment_config(args: &ExperimentArgs) -> ExperimentConfig {
    let instance = match &args.instance {
        Some(path) => InstanceSource::File { path: path.clone() },
        None => InstanceSource::Generated {
            params: args.gen.params(),
            seed: args.gen_seed.unwrap_or(args.seed),
        },
    };
    ExperimentConfig {
        problem: args.problem,
        instance,
        algorithm: args.algorithm,
        epsilon: args.epsilon,
        trials: args.trials,
        seed: args.seed,
        budget_mult: args.budget_mult,
        source: args.source,
        format: args.format,
    }
}

/// Executes a parsed command and returns the process exit code.
pub fn execute(cli: &Cli) -> Result<i32> {
    let ok = |success: bool| if success { 0 } else { 2 };
    match &cli.command {
        Command::Dp(a) => {
            write_output(a.out.as_deref(), &json_text(&dp_command(a)?))?;
            Ok(0)
        }
        Command::Ea(a) => {
            let (value, success) = ea_command(a)?;
            write_output(a.solve.out.as_deref(), &json_text(&value))?;
            Ok(ok(success))
        }
        Command::Fptas(a) => {
            write_output(a.out.as_deref(), &json_text(&fptas_command(a)?))?;
            Ok(0)
        }
        Command::Fpras(a) => {
            let (value, success) = fpras_command(a)?;
            write_output(a.out.as_deref(), &json_text(&value))?;
            Ok(ok(success))
        }
        Command::Oracle(a) => {
            write_output(a.out.as_deref(), &json_text(&oracle_command(a)?))?;
            Ok(0)
        }
        Command::Gen(a) => {
            let instance = generate(a.problem, &a.gen.params(), a.seed)?;
            write_output(a.out.as_deref(), &render_instance(&instance))?;
            Ok(0)
        }
        Command::Experiment(a) => {
            let config = experiment_config(a);
            let report = run_experiment(&config)?;
            write_output(a.out.as_deref(), &emit_report(&report, a.format)?)?;
            Ok(ok(report.aggregate.successes == report.aggregate.trials))
        }
    }
}

/// Parses `std::env::args`, runs, and reports errors on stderr.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
