//! Phased dynamic programming over user-defined state spaces, the
//! evolutionary algorithm that simulates it, and a Δ-box trimming layer
//! that turns both into approximation schemes.
//!
//! The crate is organised bottom-up:
//!
//! - [`dp`]: the [`ProblemSpec`] contract, dominating sets and the exact
//!   phased solver.
//! - [`evo`]: the phase-tagged evolutionary algorithm (standard and
//!   homogeneous variants).
//! - [`trim`]: Δ-box partitions, the trimmed DP (an FPTAS) and the trimmed
//!   EA (an FPRAS) for problems that supply a [`trim::DpBenevolent`]
//!   certificate.
//! - [`problems`]: knapsack, Held–Karp TSP, single-source and all-pairs
//!   shortest path adapters.
//! - [`oracles`]: brute-force and textbook reference solvers, written
//!   without reusing engine code.

pub mod dp;
pub mod error;
pub mod evo;
pub mod oracles;
pub mod problems;
pub mod trim;

pub use dp::{dp_solve, DominatingSet, DpMetrics, DpSolution, ProblemSpec, Trace};
pub use error::{Error, Result};
pub use evo::{ea_run, EaMode, EaRunReport, Individual, StopPolicy};
