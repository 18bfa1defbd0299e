//! Exact solvers for Max 2-CSP built on score-preserving reductions.

pub mod algo_a;
pub mod algo_b;
pub mod encode;
pub mod error;
pub mod forest;
pub mod formats;
pub mod generate;
pub mod graph;
pub mod instance;
pub mod lp;
pub mod mis;
pub mod oracle;
pub mod reduce;
pub mod treewidth;
pub mod solution;

pub use error::{Error, Result};
pub use instance::{score_assignment, Assignment, Color, Instance, Score};
pub use solution::{SolveStats, Solution};
