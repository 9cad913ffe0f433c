//! Problem adapters.

mod graph;
pub mod knapsack;
pub mod paths;
pub mod tsp;

pub use graph::Graph;
pub use knapsack::{KnapsackDominance, KnapsackInstance, KnapsackKey, KnapsackSpec, KnapsackState};
pub use paths::{is_simple_path, ApspSpec, PathState, SsspSpec};
pub use tsp::{TspInstance, TspSpec, TspState};
