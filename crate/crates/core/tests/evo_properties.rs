mod common;

use std::collections::{BTreeSet, HashMap};

use dynevo::dp::{dp_solve, pareto_values};
use dynevo::evo::{ea_run, DominanceOrder, EaMode, EaOrder, EvolutionaryRun, StopPolicy};
use dynevo::problems::{ApspSpec, KnapsackSpec, SsspSpec, TspSpec};
use dynevo::ProblemSpec;
use proptest::prelude::*;

/// `|S_0| + n · ln|DP| · Σ_{i<n} |T_i| |F_{i+1}|`.
fn expected_time_bound<P: ProblemSpec>(spec: &P) -> f64 {
    let sol = dp_solve(spec).unwrap();
    let kept = sol.kept_per_phase();
    let n = spec.phases();
    let sum: usize = (0..n).map(|i| kept[i] * spec.transition_count(i + 1)).sum();
    spec.initial_states().len() as f64 + n as f64 * (sol.dp_size() as f64).ln() * sum as f64
}

fn run_checked<P: ProblemSpec>(spec: &P, mode: EaMode, iterations: u64, seed: u64) {
    let homogeneous = matches!(mode, EaMode::Homogeneous { .. });
    let order = DominanceOrder::new(spec, mode);
    let mut run = EvolutionaryRun::new(spec, order, homogeneous, seed).unwrap();
    for it in 0..iterations {
        let outcome = run.step().unwrap();
        if let Some((bucket, slot)) = outcome.insertion.position() {
            let ind = run.population().individual(bucket, slot);
            assert!(
                !run.order().infeasible(ind.phase, &ind.state),
                "infeasible insertion {ind:?}"
            );
        }
        if it % 4096 == 0 || it + 1 == iterations {
            let pop = run.population();
            for b in 0..=pop.final_bucket() {
                let members = pop.bucket(b);
                for (i, x) in members.iter().enumerate() {
                    for y in &members[i + 1..] {
                        assert!(
                            !run.order().le(&x.state, &y.state)
                                && !run.order().le(&y.state, &x.state),
                            "comparable individuals coexist: {x:?} {y:?}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn no_infeasible_insertions_and_unique_classes() {
    let knap = KnapsackSpec::exact(common::knapsack(3, 10, 12, 40)).unwrap();
    run_checked(&knap, EaMode::Standard, 100_000, 1);
    let tsp = TspSpec::new(common::tsp(3, 6, 30)).unwrap();
    run_checked(&tsp, EaMode::Standard, 100_000, 2);
    let g = common::connected_graph(3, 6, 0.4, 9);
    let sssp = SsspSpec::new(g.clone(), 0).unwrap();
    run_checked(&sssp, EaMode::Standard, 100_000, 3);
    run_checked(&sssp, EaMode::Homogeneous { width_hint: None }, 100_000, 4);
    let apsp = ApspSpec::new(g).unwrap();
    run_checked(&apsp, EaMode::Standard, 100_000, 5);
    run_checked(&apsp, EaMode::Homogeneous { width_hint: None }, 100_000, 6);
}

/// Once phase `i` dominates `T_i`, the keys of its individuals never change.
fn stages_are_monotone<P: ProblemSpec>(spec: &P, seed: u64) {
    let sol = dp_solve(spec).unwrap();
    let order = DominanceOrder::new(spec, EaMode::Standard);
    let mut run = EvolutionaryRun::new(spec, order, false, seed).unwrap();
    let n = spec.phases();
    let mut frozen: HashMap<usize, BTreeSet<P::Key>> = HashMap::new();
    let budget = (50.0 * expected_time_bound(spec)) as u64;
    while frozen.len() <= n && run.iterations() < budget {
        let pop = run.population();
        for (phase, keys) in &frozen {
            assert_eq!(
                &pop.keys(pop.bucket_of(*phase)),
                keys,
                "phase {phase} changed after completion"
            );
        }
        for phase in 0..=n {
            if frozen.contains_key(&phase) {
                continue;
            }
            let b = pop.bucket_of(phase);
            let done = sol.phases[phase].states().all(|t| {
                pop.get(b, &spec.dominance_key(phase, t))
                    .is_some_and(|ind| spec.dominated_by(t, &ind.state))
            });
            if done {
                frozen.insert(phase, pop.keys(b));
            }
        }
        if run.step().is_err() {
            break;
        }
    }
    assert_eq!(
        frozen.len(),
        n + 1,
        "not every stage completed within the budget"
    );
}

#[test]
fn stage_completion_is_permanent() {
    for seed in 0..5 {
        stages_are_monotone(
            &KnapsackSpec::exact(common::knapsack(seed, 6, 10, 20)).unwrap(),
            seed,
        );
        stages_are_monotone(&TspSpec::new(common::tsp(seed, 5, 20)).unwrap(), seed);
        let g = common::connected_graph(seed, 5, 0.5, 9);
        stages_are_monotone(&SsspSpec::new(g, 0).unwrap(), seed);
    }
}

fn reaches_reference<P: ProblemSpec>(spec: &P, mode: EaMode, seed: u64) {
    let sol = dp_solve(spec).unwrap();
    let reference: Vec<P::State> = sol.final_set().states().cloned().collect();
    let budget = (50.0 * expected_time_bound(spec)).ceil() as u64;
    let report = ea_run(
        spec,
        mode,
        StopPolicy::TargetReached {
            reference: reference.clone(),
            budget,
        },
        seed,
    )
    .unwrap();
    assert!(report.success, "budget {budget} exhausted");
    assert_eq!(
        report.objective_evaluations,
        report.iterations + spec.initial_states().len() as u64
    );
    let n = spec.phases();
    let expected = pareto_values(
        spec,
        n,
        reference.iter().filter(|s| spec.is_final_feasible(s)),
    );
    assert_eq!(pareto_values(spec, n, &report.final_states), expected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ea_simulates_dp(seed: u64, n in 1usize..=7) {
        reaches_reference(&KnapsackSpec::exact(common::knapsack(seed, n, 10, 3 * n as i64)).unwrap(), EaMode::Standard, seed);
        if n >= 3 {
            reaches_reference(&TspSpec::new(common::tsp(seed, n.min(6), 25)).unwrap(), EaMode::Standard, seed);
        }
        let g = common::connected_graph(seed, n.min(5), 0.4, 9);
        let sssp = SsspSpec::new(g.clone(), 0).unwrap();
        reaches_reference(&sssp, EaMode::Standard, seed);
        reaches_reference(&sssp, EaMode::Homogeneous { width_hint: None }, seed);
        let apsp = ApspSpec::new(g).unwrap();
        reaches_reference(&apsp, EaMode::Homogeneous { width_hint: None }, seed);
    }

    #[test]
    fn budget_policy_runs_exactly(seed: u64, budget in 0u64..2000) {
        let spec = KnapsackSpec::exact(common::knapsack(seed, 5, 10, 15)).unwrap();
        let report = ea_run(&spec, EaMode::Standard, StopPolicy::Budget(budget), seed).unwrap();
        prop_assert_eq!(report.iterations, budget);
        prop_assert_eq!(report.objective_evaluations, budget + 1);
        prop_assert!(report.success);
    }
}

#[test]
fn homogeneous_mode_requires_homogeneous_adapter() {
    let spec = KnapsackSpec::exact(common::knapsack(1, 3, 5, 5)).unwrap();
    let err = ea_run(
        &spec,
        EaMode::Homogeneous { width_hint: None },
        StopPolicy::Budget(10),
        1,
    );
    assert!(err.is_err());
}

#[test]
fn same_seed_same_run() {
    let spec = TspSpec::new(common::tsp(9, 6, 30)).unwrap();
    let a = ea_run(&spec, EaMode::Standard, StopPolicy::Budget(5000), 77).unwrap();
    let b = ea_run(&spec, EaMode::Standard, StopPolicy::Budget(5000), 77).unwrap();
    assert_eq!(a.final_states, b.final_states);
    assert_eq!(a.population_size, b.population_size);
}
