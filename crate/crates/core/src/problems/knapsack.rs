//! 0/1 knapsack as a phased dynamic program.
//!
//! Phase `i` decides item `i`: transition 0 skips it, transition 1 adds its
//! weight and profit. A state is `(weight, profit)`; it is feasible while the
//! weight stays within capacity.

use serde::{Deserialize, Serialize};

use crate::dp::{ProblemSpec, Trace};
use crate::error::{Error, Result};
use crate::trim::{DpBenevolent, Sense};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    pub weights: Vec<i64>,
    pub profits: Vec<i64>,
    pub capacity: i64,
}

impl KnapsackInstance {
    pub fn new(weights: Vec<i64>, profits: Vec<i64>, capacity: i64) -> Result<Self> {
        let instance = KnapsackInstance {
            weights,
            profits,
            capacity,
        };
        instance.validate()?;
        Ok(instance)
    }

    pub fn from_items(items: &[(i64, i64)], capacity: i64) -> Result<Self> {
        Self::new(
            items.iter().map(|&(w, _)| w).collect(),
            items.iter().map(|&(_, p)| p).collect(),
            capacity,
        )
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(Error::InvalidInstance(
                "knapsack needs at least one item".into(),
            ));
        }
        if self.weights.len() != self.profits.len() {
            return Err(Error::InvalidInstance(format!(
                "{} weights but {} profits",
                self.weights.len(),
                self.profits.len()
            )));
        }
        if let Some(i) = self.weights.iter().position(|&w| w <= 0) {
            return Err(Error::InvalidInstance(format!(
                "weight of item {} is not positive",
                i + 1
            )));
        }
        if let Some(i) = self.profits.iter().position(|&p| p <= 0) {
            return Err(Error::InvalidInstance(format!(
                "profit of item {} is not positive",
                i + 1
            )));
        }
        if self.capacity < 0 {
            return Err(Error::InvalidInstance("capacity is negative".into()));
        }
        let overflow = |xs: &[i64]| {
            xs.iter()
                .try_fold(0i64, |acc, &x| acc.checked_add(x))
                .is_none()
        };
        if overflow(&self.weights) || overflow(&self.profits) {
            return Err(Error::InvalidInstance(
                "item totals overflow 64-bit integers".into(),
            ));
        }
        Ok(())
    }

    /// Total binary length of every numeric field of the instance.
    pub fn bit_length(&self) -> u64 {
        fn bits(x: i64) -> u64 {
            (64 - (x.max(1) as u64).leading_zeros()) as u64
        }
        self.weights
            .iter()
            .chain(&self.profits)
            .map(|&x| bits(x))
            .sum::<u64>()
            + bits(self.capacity)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KnapsackState {
    pub weight: i64,
    pub profit: i64,
}

/// Which dominance order the adapter exposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KnapsackDominance {
    /// Same weight, profit no larger: one kept state per weight.
    Exact,
    /// Equality only; used together with the trimming certificate.
    Trivial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KnapsackKey {
    Weight(i64),
    State(KnapsackState),
}

#[derive(Clone, Debug)]
pub struct KnapsackSpec {
    instance: KnapsackInstance,
    dominance: KnapsackDominance,
}

impl KnapsackSpec {
    pub fn new(instance: KnapsackInstance, dominance: KnapsackDominance) -> Result<Self> {
        instance.validate()?;
        Ok(KnapsackSpec {
            instance,
            dominance,
        })
    }

    pub fn exact(instance: KnapsackInstance) -> Result<Self> {
        Self::new(instance, KnapsackDominance::Exact)
    }

    pub fn benevolent(instance: KnapsackInstance) -> Result<Self> {
        Self::new(instance, KnapsackDominance::Trivial)
    }

    pub fn instance(&self) -> &KnapsackInstance {
        &self.instance
    }

    pub fn dominance(&self) -> KnapsackDominance {
        self.dominance
    }

    /// Largest profit among `states`, 0 when empty.
    pub fn best_profit<'a>(states: impl IntoIterator<Item = &'a KnapsackState>) -> i64 {
        states.into_iter().map(|s| s.profit).max().unwrap_or(0)
    }

    /// Selected items (0-based) encoded by a trace.
    pub fn items_of(trace: &Trace) -> Vec<usize> {
        trace
            .decisions()
            .iter()
            .enumerate()
            .filter(|&(_, &t)| t == 1)
            .map(|(i, _)| i)
            .collect()
    }
}

impl ProblemSpec for KnapsackSpec {
    type State = KnapsackState;
    type Key = KnapsackKey;

    fn phases(&self) -> usize {
        self.instance.len()
    }

    fn initial_states(&self) -> Vec<KnapsackState> {
        vec![KnapsackState {
            weight: 0,
            profit: 0,
        }]
    }

    fn transition_count(&self, _phase: usize) -> usize {
        2
    }

    fn apply(&self, phase: usize, transition: usize, s: &KnapsackState) -> KnapsackState {
        match transition {
            0 => *s,
            _ => KnapsackState {
                weight: s.weight + self.instance.weights[phase - 1],
                profit: s.profit + self.instance.profits[phase - 1],
            },
        }
    }

    fn consistency(&self, _phase: usize, s: &KnapsackState) -> i64 {
        s.weight - self.instance.capacity
    }

    fn dominated_by(&self, a: &KnapsackState, b: &KnapsackState) -> bool {
        match self.dominance {
            KnapsackDominance::Exact => a.weight == b.weight && a.profit <= b.profit,
            KnapsackDominance::Trivial => a == b,
        }
    }

    fn dominance_key(&self, _phase: usize, s: &KnapsackState) -> KnapsackKey {
        match self.dominance {
            KnapsackDominance::Exact => KnapsackKey::Weight(s.weight),
            KnapsackDominance::Trivial => KnapsackKey::State(*s),
        }
    }

    fn is_final_feasible(&self, s: &KnapsackState) -> bool {
        s.weight <= self.instance.capacity
    }

    fn value(&self, s: &KnapsackState) -> i64 {
        s.profit
    }

    fn declared_width(&self) -> Option<u64> {
        match self.dominance {
            KnapsackDominance::Exact => Some(self.instance.capacity as u64 + 1),
            KnapsackDominance::Trivial => None,
        }
    }
}

impl DpBenevolent for KnapsackSpec {
    type Solution = Vec<usize>;

    fn coordinates(&self, s: &KnapsackState) -> Vec<u64> {
        vec![s.weight as u64, s.profit as u64]
    }

    fn degree_vector(&self) -> Vec<u32> {
        vec![1, 1]
    }

    /// Lighter is better.
    fn qua_le(&self, a: &KnapsackState, b: &KnapsackState) -> bool {
        a.weight >= b.weight
    }

    fn objective(&self, s: &KnapsackState) -> u64 {
        s.profit as u64
    }

    fn gamma(&self) -> u32 {
        1
    }

    fn pi1(&self) -> f64 {
        self.instance.bit_length() as f64 * std::f64::consts::LN_2
    }

    fn pi2(&self) -> u64 {
        1
    }

    fn sense(&self) -> Sense {
        Sense::Maximize
    }

    fn backtrack(&self, trace: &Trace) -> Vec<usize> {
        Self::items_of(trace)
    }
}
