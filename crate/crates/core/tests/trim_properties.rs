mod common;

use dynevo::oracles::knapsack_bruteforce;
use dynevo::problems::KnapsackSpec;
use dynevo::trim::{box_index, choose_params, dp_trimmed, ea_fpras, is_close, run_for, TrimParams};
use proptest::prelude::*;

fn params(delta: f64, levels: u64) -> TrimParams {
    TrimParams {
        epsilon: 0.5,
        delta,
        levels,
        tau: 0,
        beta: 1,
        zero_degree: 0,
        pi2: 1,
    }
}

#[test]
fn boxes_tile_the_integers() {
    let pairs = [
        (1.01, 300),
        (1.025, 200),
        (1.05, 150),
        (1.1, 80),
        (1.125, 60),
        (1.2, 50),
        (1.25, 40),
        (1.3, 35),
        (1.333, 30),
        (1.5, 25),
        (1.618, 20),
        (1.75, 18),
        (2.0, 16),
        (2.5, 12),
        (3.0, 10),
        (1.07, 120),
        (1.15, 70),
        (1.4, 28),
        (1.9, 15),
        (4.0, 8),
    ];
    for (delta, levels) in pairs {
        let p = params(delta, levels);
        let top = p.power(levels).floor() as u64;
        // ranges in level order cover 0..=top without gaps or overlaps
        let mut next = 0u64;
        for k in 0..=levels {
            if let Some((lo, hi)) = p.level_range(k) {
                assert_eq!(lo, next, "Δ={delta} L={levels} k={k}");
                next = hi + 1;
            }
        }
        assert_eq!(next, top + 1);
        for v in 0..=top {
            let k = p.level_of(v).unwrap();
            let (lo, hi) = p.level_range(k).unwrap();
            assert!(lo <= v && v <= hi, "Δ={delta} v={v} k={k}");
        }
        assert_eq!(p.level_of(top + 1), None);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn same_box_points_are_close(
        delta in 1.001f64..4.0,
        a in (0u64..1_000_000, 0u64..1_000_000),
        jitter in (0.0f64..1.0, 0.0f64..1.0),
    ) {
        let levels = (2e6f64.ln() / delta.ln()).ceil() as u64;
        let p = TrimParams { beta: 2, ..params(delta, levels) };
        let degrees = [1, 1];
        let cell = box_index(&[a.0, a.1], &degrees, &p).unwrap();
        // a second point drawn from the same box
        let pick = |k: u64, t: f64| {
            let (lo, hi) = p.level_range(k).unwrap();
            lo + ((hi - lo) as f64 * t) as u64
        };
        let b = [pick(cell.0[0], jitter.0), pick(cell.0[1], jitter.1)];
        prop_assert_eq!(&box_index(&b, &degrees, &p).unwrap(), &cell);
        prop_assert!(is_close(&[a.0, a.1], &b, &degrees, delta).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fptas_guarantee_and_box_bound(seed: u64, n in 1usize..=15, cap in 1i64..=60) {
        let inst = common::knapsack(seed, n, 30, cap);
        let opt = knapsack_bruteforce(&inst).unwrap().optimum as f64;
        let spec = KnapsackSpec::benevolent(inst.clone()).unwrap();
        for eps in [0.1, 0.5] {
            let out = dp_trimmed(&spec, eps).unwrap();
            prop_assert!(out.value as f64 * (1.0 + eps) >= opt, "ε={} value {} OPT {}", eps, out.value, opt);
            let bound = out.params.box_count_bound();
            for &k in &out.kept_per_phase {
                prop_assert!(k as f64 <= bound);
            }
            let taken: i64 = out.solution.iter().map(|&i| inst.profits[i]).sum();
            let weight: i64 = out.solution.iter().map(|&i| inst.weights[i]).sum();
            prop_assert_eq!(taken as u64, out.value);
            prop_assert!(weight <= inst.capacity);
        }
    }

    #[test]
    fn levels_fall_and_tau_grows(seed: u64, n in 1usize..=12, e1 in 0.05f64..0.95, e2 in 0.05f64..0.95) {
        let inst = common::knapsack(seed, n, 30, 40);
        let spec = KnapsackSpec::benevolent(inst).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let (a, b) = (choose_params(lo, &spec).unwrap(), choose_params(hi, &spec).unwrap());
        prop_assert!(a.levels >= b.levels);
        prop_assert!(a.tau >= b.tau);
    }
}

#[test]
fn fpras_on_two_items() {
    let inst = dynevo::problems::KnapsackInstance::from_items(&[(2, 3), (3, 4)], 5).unwrap();
    let spec = KnapsackSpec::benevolent(inst).unwrap();
    let mut hits = 0;
    for seed in 0..10 {
        let out = ea_fpras(&spec, 0.9, seed).unwrap();
        assert_eq!(out.iterations, out.params.tau);
        if out.value.is_some_and(|v| v as f64 * 1.9 >= 7.0) {
            hits += 1;
        }
    }
    assert!(hits >= 8, "{hits}/10");
}

#[test]
fn fpras_runs_requested_iterations() {
    let inst = common::knapsack(4, 6, 10, 20);
    let spec = KnapsackSpec::benevolent(inst).unwrap();
    let p = choose_params(0.5, &spec).unwrap();
    let out = run_for(&spec, p, 1234, 9).unwrap();
    assert_eq!(out.iterations, 1234);
}
