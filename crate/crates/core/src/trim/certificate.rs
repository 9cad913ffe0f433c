//! Sampled checks of a benevolence certificate: the closeness-based
//! conditions that make Δ-box trimming lose at most a factor `Δ^γ` per phase.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{box_index, is_close, BoxIndex, DpBenevolent, Sense, TrimParams};
use crate::dp::conditions::sample_state_pool;

/// Violation counts per condition over same-box (hence close) pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub tuples: u64,
    /// Images neither close-and-`⪯_qua`-ordered nor `⪯_dom`-ordered.
    pub close_transfer_violations: u64,
    /// `H(S') > H(S)` for a close pair with `S ⪯_qua S'`.
    pub close_feasibility_violations: u64,
    /// Objective lost more than a factor `Δ^γ` on a close pair.
    pub precision_violations: u64,
    /// Two states in one Δ-box that are not close.
    pub box_violations: u64,
    pub first_violation: Option<String>,
}

impl CertificateReport {
    pub fn violations(&self) -> u64 {
        self.close_transfer_violations
            + self.close_feasibility_violations
            + self.precision_violations
            + self.box_violations
    }

    fn record(&mut self, what: impl FnOnce() -> String) {
        if self.first_violation.is_none() {
            self.first_violation = Some(what());
        }
    }
}

const DELTAS: [f64; 4] = [1.05, 1.25, 1.5, 2.0];

fn params_covering(delta: f64, max_coordinate: u64, spec_beta: usize) -> TrimParams {
    let levels = ((max_coordinate as f64 + 1.0).ln() / delta.ln()).ceil() as u64 + 1;
    TrimParams {
        epsilon: 0.0,
        delta,
        levels,
        tau: 0,
        beta: spec_beta,
        zero_degree: 0,
        pi2: 1,
    }
}

/// Samples `tuples` close, `⪯_qua`-ordered pairs with a transition each and
/// checks the closeness transfer, feasibility and precision conditions of the
/// certificate of `spec`.
pub fn check_certificate<B>(spec: &B, tuples: u64, seed: u64) -> CertificateReport
where
    B: DpBenevolent + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = spec.phases();
    let degrees = spec.degree_vector();
    let mut report = CertificateReport::default();

    let pool = sample_state_pool(spec, 2048, &mut rng);
    let max_coordinate = pool
        .iter()
        .flat_map(|(_, s)| spec.coordinates(s))
        .max()
        .unwrap_or(0);

    let mut grids = Vec::new();
    for delta in DELTAS {
        let params = params_covering(delta, max_coordinate, degrees.len());
        let mut boxes: BTreeMap<(usize, BoxIndex), Vec<B::State>> = BTreeMap::new();
        for (phase, state) in &pool {
            let Ok(cell) = box_index(&spec.coordinates(state), &degrees, &params) else {
                continue;
            };
            let group = boxes.entry((*phase, cell)).or_default();
            if !group.contains(state) {
                group.push(state.clone());
            }
        }
        let classes: Vec<(usize, Vec<B::State>)> = boxes
            .into_iter()
            .filter(|(_, g)| g.len() >= 2)
            .map(|((phase, _), g)| (phase, g))
            .collect();
        if !classes.is_empty() {
            grids.push((delta, classes));
        }
    }
    if grids.is_empty() {
        return report;
    }

    let close = |a: &B::State, b: &B::State, delta: f64| {
        is_close(&spec.coordinates(a), &spec.coordinates(b), &degrees, delta).unwrap_or(false)
    };
    let gamma = spec.gamma() as i32;

    while report.tuples < tuples {
        report.tuples += 1;
        let (delta, classes) = &grids[rng.gen_range(0..grids.len())];
        let delta = *delta;
        let (phase, class) = &classes[rng.gen_range(0..classes.len())];
        let phase = *phase;
        let i = rng.gen_range(0..class.len());
        let mut j = rng.gen_range(0..class.len() - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = if spec.qua_le(&class[i], &class[j]) {
            (&class[i], &class[j])
        } else {
            (&class[j], &class[i])
        };
        if !close(a, b, delta) {
            report.box_violations += 1;
            report.record(|| format!("Δ={delta}: {a:?} and {b:?} share a box but are not close"));
            continue;
        }

        let h_phase = phase.max(1).min(n.max(1));
        if spec.consistency(h_phase, b) > spec.consistency(h_phase, a) {
            report.close_feasibility_violations += 1;
            report.record(|| format!("Δ={delta}: H({b:?}) > H({a:?})"));
        }

        let (ga, gb) = (spec.objective(a) as f64, spec.objective(b) as f64);
        let slack = delta.powi(gamma) * (1.0 + 1e-12);
        let c3 = match spec.sense() {
            Sense::Maximize => ga <= slack * gb,
            Sense::Minimize => gb <= slack * ga,
        };
        let c3_dom = !spec.dominated_by(a, b) || !spec.sense().improves(ga as u64, gb as u64);
        if !c3 || !c3_dom {
            report.precision_violations += 1;
            report.record(|| format!("Δ={delta}: G({a:?}) = {ga}, G({b:?}) = {gb}"));
        }

        if phase < n {
            let next = phase + 1;
            let count = spec.transition_count(next);
            if count == 0 {
                continue;
            }
            let t = rng.gen_range(0..count);
            let (fa, fb) = (spec.apply(next, t, a), spec.apply(next, t, b));
            let ordered = spec.qua_le(&fa, &fb) && close(&fa, &fb, delta);
            if !ordered && !spec.dominated_by(&fa, &fb) {
                report.close_transfer_violations += 1;
                report.record(|| {
                    format!("Δ={delta}, phase {next}, transition {t}: {fa:?} vs {fb:?}")
                });
            }
        }
    }
    report
}
