//! State-space trimming for DP-benevolent problems.
//!
//! States are integer vectors. Coordinates with a positive degree are
//! bucketed geometrically into Δ-boxes; zero-degree coordinates must match
//! exactly. Keeping one representative per box bounds the number of states
//! per phase polynomially, which yields the trimmed dynamic program
//! ([`dp_trimmed`], an FPTAS) and the trimmed evolutionary algorithm
//! ([`ea_fpras`], an FPRAS).

mod boxes;
pub mod certificate;
mod fpras;
mod fptas;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::dp::{ProblemSpec, Trace};
use crate::error::{Error, Result};

pub use boxes::{box_index, is_close, BoxGrid, BoxIndex};
pub use fpras::{ea_fpras, run_for, BoxOrder, FprasOutcome};
pub use fptas::{dp_trimmed, TrimmedOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Whether `candidate` is strictly better than `incumbent`.
    pub fn improves(self, candidate: u64, incumbent: u64) -> bool {
        match self {
            Sense::Minimize => candidate < incumbent,
            Sense::Maximize => candidate > incumbent,
        }
    }

    /// `(1+ε)`-approximation test of `value` against `optimum`.
    pub fn within(self, value: u64, optimum: u64, epsilon: f64) -> bool {
        match self {
            Sense::Minimize => value as f64 <= (1.0 + epsilon) * optimum as f64,
            Sense::Maximize => value as f64 * (1.0 + epsilon) >= optimum as f64,
        }
    }
}

/// Certificate that an adapter's dynamic program admits trimming.
///
/// The adapter vouches for the closeness-preservation and precision
/// conditions; they are spot-checked by tests, not proven here.
pub trait DpBenevolent: ProblemSpec {
    type Solution: Clone + Debug;

    /// The state as a point of `ℕ₀^β`.
    fn coordinates(&self, state: &Self::State) -> Vec<u64>;

    /// Degree vector `D`, one entry per coordinate.
    fn degree_vector(&self) -> Vec<u32>;

    /// `a ⪯_qua b`: total order extending the dominance order.
    fn qua_le(&self, a: &Self::State, b: &Self::State) -> bool;

    /// Objective value `G(S)` of the solution a final state encodes.
    fn objective(&self, state: &Self::State) -> u64;

    /// Precision-loss exponent `γ`.
    fn gamma(&self) -> u32;

    /// `π₁`: every reachable coordinate is at most `e^{π₁}`.
    fn pi1(&self) -> f64;

    /// `π₂`: number of values a zero-degree coordinate can take.
    fn pi2(&self) -> u64;

    fn sense(&self) -> Sense;

    /// Rebuilds the solution encoded by a final state's history.
    fn backtrack(&self, trace: &Trace) -> Self::Solution;
}

/// Trimming parameters derived from `ε` and the certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrimParams {
    pub epsilon: f64,
    /// `Δ = 1 + ε / (2γn)`.
    pub delta: f64,
    /// `L = ⌈π₁ / ln Δ⌉`.
    pub levels: u64,
    /// `τ = 4n (L π₂)^β Σ|F_i|`.
    pub tau: u64,
    pub beta: usize,
    /// Coordinates with degree 0.
    pub zero_degree: usize,
    pub pi2: u64,
}

impl TrimParams {
    /// Recomputes the parameters from raw inputs.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        epsilon: f64,
        phases: usize,
        gamma: u32,
        pi1: f64,
        pi2: u64,
        degree_vector: &[u32],
        family_total: u64,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        if gamma == 0 {
            return Err(Error::InvalidParameters("γ must be at least 1".into()));
        }
        if phases == 0 {
            return Err(Error::InvalidParameters(
                "at least one phase required".into(),
            ));
        }
        if !(pi1.is_finite() && pi1 > 0.0) || pi2 == 0 {
            return Err(Error::InvalidParameters(format!(
                "π₁ = {pi1} and π₂ = {pi2} must be positive"
            )));
        }
        let delta = 1.0 + epsilon / (2.0 * gamma as f64 * phases as f64);
        let levels = ((pi1 / delta.ln()).ceil() as u64).max(1);
        if !delta.powf(levels as f64).is_finite() {
            return Err(Error::InvalidParameters(format!(
                "Δ^L overflows for Δ = {delta}, L = {levels}"
            )));
        }
        let beta = degree_vector.len();
        let per_axis = (levels as u128)
            .checked_mul(pi2 as u128)
            .ok_or_else(|| Error::InvalidParameters("L·π₂ overflows".into()))?;
        let tau = (4 * phases as u128)
            .checked_mul(family_total as u128)
            .and_then(|t| (0..beta).try_fold(t, |acc, _| acc.checked_mul(per_axis)))
            .filter(|&t| t <= u64::MAX as u128)
            .ok_or_else(|| Error::InvalidParameters("τ exceeds u64".into()))?
            as u64;
        Ok(TrimParams {
            epsilon,
            delta,
            levels,
            tau,
            beta,
            zero_degree: degree_vector.iter().filter(|&&d| d == 0).count(),
            pi2,
        })
    }

    /// `Δ^k`.
    pub fn power(&self, k: u64) -> f64 {
        self.delta.powf(k as f64)
    }

    /// Bound on non-empty boxes per phase: `(L+1)^{|L₁|} · π₂^{|L₀|}`
    /// (box index 0 holds the zero coordinate).
    pub fn box_count_bound(&self) -> f64 {
        let positive = (self.beta - self.zero_degree) as i32;
        ((self.levels + 1) as f64).powi(positive) * (self.pi2 as f64).powi(self.zero_degree as i32)
    }
}

/// Chooses `Δ`, `L` and `τ` for `spec` at precision `epsilon`.
pub fn choose_params<B: DpBenevolent + ?Sized>(epsilon: f64, spec: &B) -> Result<TrimParams> {
    let family_total = (1..=spec.phases())
        .map(|i| spec.transition_count(i) as u64)
        .sum();
    TrimParams::from_parts(
        epsilon,
        spec.phases(),
        spec.gamma(),
        spec.pi1(),
        spec.pi2(),
        &spec.degree_vector(),
        family_total,
    )
}
