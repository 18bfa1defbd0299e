use std::time::Duration;

use crate::instance::{Assignment, Score};
use crate::reduce::Kind;

/// Counters collected by every solver.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Number of III-reductions in the sequence or tree.
    pub iii_count: usize,
    /// Largest number of III-reductions on one search path.
    pub iii_depth: usize,
    /// Reductions performed while building the plan, indexed by [`Kind`].
    pub by_kind: [usize; 4],
    /// Colors tried at III-reductions during the search.
    pub color_branches: u64,
    pub elapsed: Duration,
}

impl SolveStats {
    pub(crate) fn count_kinds(&mut self, kinds: impl IntoIterator<Item = Kind>) {
        for k in kinds {
            self.by_kind[k as usize] += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub score: Score,
    pub assignment: Assignment,
    pub stats: SolveStats,
}
