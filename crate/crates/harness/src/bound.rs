//! Expected optimization-time bounds, evaluated without hidden constants
//! (natural logarithm, additive `|S_0|` term).

use dynevo::dp::DpSolution;
use dynevo::evo::width_of;
use dynevo::{EaMode, Error, ProblemSpec};

/// `|S_0| + n · ln|DP| · Σ_{i<n} |T_i| |F_{i+1}|`.
pub fn standard_bound(initial: usize, phases: usize, dp_size: usize, weighted_sum: u64) -> f64 {
    initial as f64 + phases as f64 * (dp_size as f64).ln() * weighted_sum as f64
}

/// `|S_0| + W ln W · n · |F|`.
pub fn homogeneous_bound(initial: usize, width: u64, phases: usize, family: usize) -> f64 {
    let w = width as f64;
    initial as f64 + w * w.ln() * phases as f64 * family as f64
}

/// `Σ_{i<n} |T_i| |F_{i+1}|` from a finished DP run.
pub fn weighted_transitions<P: ProblemSpec + ?Sized>(
    spec: &P,
    solution: &DpSolution<P::State, P::Key>,
) -> u64 {
    let kept = solution.kept_per_phase();
    (0..spec.phases())
        .map(|i| kept[i] as u64 * spec.transition_count(i + 1) as u64)
        .sum()
}

/// Bound for the EA variant `mode`, using the counts of `solution`.
pub fn theoretical_bound<P: ProblemSpec + ?Sized>(
    spec: &P,
    solution: &DpSolution<P::State, P::Key>,
    mode: EaMode,
) -> dynevo::Result<f64> {
    let initial = spec.initial_states().len();
    match mode {
        EaMode::Standard => Ok(standard_bound(
            initial,
            spec.phases(),
            solution.dp_size(),
            weighted_transitions(spec, solution),
        )),
        EaMode::Homogeneous { width_hint } => {
            if !spec.is_homogeneous() {
                return Err(Error::NotHomogeneous);
            }
            let width = match width_hint {
                Some(w) => w,
                None => width_of(spec)?,
            };
            Ok(homogeneous_bound(
                initial,
                width,
                spec.phases(),
                spec.transition_count(1),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dynevo::dp::dp_solve;
    use dynevo::problems::{Graph, KnapsackInstance, KnapsackSpec, SsspSpec};

    #[test]
    fn two_item_toy() {
        let inst = KnapsackInstance::from_items(&[(2, 3), (3, 4)], 5).unwrap();
        let spec = KnapsackSpec::exact(inst).unwrap();
        let sol = dp_solve(&spec).unwrap();
        assert_eq!(sol.dp_size(), 7);
        assert_eq!(weighted_transitions(&spec, &sol), 6);
        let b = theoretical_bound(&spec, &sol, EaMode::Standard).unwrap();
        assert!((b - (2.0 * 7f64.ln() * 6.0 + 1.0)).abs() < 1e-9);
        assert!(theoretical_bound(&spec, &sol, EaMode::Homogeneous { width_hint: None }).is_err());
    }

    #[test]
    fn sssp_uses_declared_width() {
        let g = Graph::from_edges(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        let spec = SsspSpec::new(g, 0).unwrap();
        let sol = dp_solve(&spec).unwrap();
        let b = theoretical_bound(&spec, &sol, EaMode::Homogeneous { width_hint: None }).unwrap();
        assert!((b - homogeneous_bound(1, 4, 4, 5)).abs() < 1e-9);
    }

    #[test]
    fn single_phase_single_transition() {
        // n = 1, |F_1| = 1: n · ln|DP| · |T_0| + |S_0|
        assert!((standard_bound(1, 1, 2, 1) - (2f64.ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_each_argument() {
        let base = standard_bound(1, 4, 30, 50);
        assert!(standard_bound(1, 5, 30, 50) > base);
        assert!(standard_bound(1, 4, 31, 50) > base);
        assert!(standard_bound(1, 4, 30, 51) > base);
    }
}
