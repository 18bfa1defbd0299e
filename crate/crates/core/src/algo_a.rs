//! Algorithm A: a graph-only pass fixes the order of reductions, a
//! depth-first search over the colors of the III-vertices finds the optimal
//! score, and a second search stops at the first optimal leaf and backtracks
//! to color every vertex.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{MutableGraph, Policy};
use crate::instance::{Assignment, Instance, Score};
use crate::reduce::{self, extend_coloring, Kind, ReductionRecord};
use crate::solution::{SolveStats, Solution};

/// Reduction vertices in the order they are eliminated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReductionSequence {
    pub steps: Vec<(usize, Kind)>,
    pub iii_count: usize,
    /// III steps may fall on vertices of degree below 3 (induced-forest plans).
    pub(crate) relaxed: bool,
}

impl ReductionSequence {
    pub(crate) fn new(steps: Vec<(usize, Kind)>, relaxed: bool) -> Self {
        let iii_count = steps.iter().filter(|s| s.1 == Kind::Three).count();
        ReductionSequence {
            steps,
            iii_count,
            relaxed,
        }
    }
}

/// Simulate the reductions on the constraint graph alone under policy A.
pub fn phase1_sequence(inst: &Instance) -> ReductionSequence {
    let mut g = MutableGraph::from_instance(inst);
    let mut steps = Vec::with_capacity(inst.num_vertices());
    while let Some((v, kind)) = g.pick_reduction_vertex(Policy::A) {
        if kind == Kind::Two {
            g.contract(v);
        } else {
            g.remove_vertex(v);
        }
        steps.push((v, kind));
    }
    ReductionSequence::new(steps, false)
}

/// Replays a sequence in place, branching over colors at III steps.
pub(crate) struct Search<'a> {
    inst: &'a mut Instance,
    g: MutableGraph,
    seq: &'a ReductionSequence,
    pub(crate) branches: u64,
}

impl<'a> Search<'a> {
    pub(crate) fn new(inst: &'a mut Instance, seq: &'a ReductionSequence) -> Self {
        let g = MutableGraph::from_instance(inst);
        Search {
            inst,
            g,
            seq,
            branches: 0,
        }
    }

    fn apply(&mut self, y: usize, kind: Kind, color: usize) -> Result<ReductionRecord> {
        if kind == Kind::Three && self.seq.relaxed {
            reduce::branch_on_vertex(self.inst, &mut self.g, y, color)
        } else {
            reduce::reduce(self.inst, &mut self.g, y, kind, color)
        }
    }

    /// Apply the 0/I/II steps from `i` up to the next III step.
    fn chain(&mut self, mut i: usize) -> Result<(usize, Vec<ReductionRecord>)> {
        let mut recs = Vec::new();
        while let Some(&(y, kind)) = self.seq.steps.get(i) {
            if kind == Kind::Three {
                break;
            }
            recs.push(self.apply(y, kind, 0)?);
            i += 1;
        }
        Ok((i, recs))
    }

    fn unwind(&mut self, recs: &[ReductionRecord]) -> Result<()> {
        for rec in recs.iter().rev() {
            reduce::reverse(self.inst, &mut self.g, rec)?;
        }
        Ok(())
    }

    pub(crate) fn best(&mut self, i: usize) -> Result<Score> {
        let (j, recs) = self.chain(i)?;
        let value = match self.seq.steps.get(j) {
            None => self.inst.niladic(),
            Some(&(y, _)) => {
                let mut best = None;
                for c in 0..self.inst.r() {
                    self.branches += 1;
                    let rec = self.apply(y, Kind::Three, c)?;
                    let s = self.best(j + 1)?;
                    reduce::reverse(self.inst, &mut self.g, &rec)?;
                    best = best.max(Some(s));
                }
                best.expect("r >= 2")
            }
        };
        self.unwind(&recs)?;
        Ok(value)
    }

    /// Search until a leaf scores `target`, coloring vertices on the way out.
    pub(crate) fn find(&mut self, i: usize, target: Score, phi: &mut Assignment) -> Result<bool> {
        let (j, recs) = self.chain(i)?;
        let found = match self.seq.steps.get(j) {
            None => self.inst.niladic() == target,
            Some(&(y, _)) => {
                let mut found = false;
                for c in 0..self.inst.r() {
                    self.branches += 1;
                    let rec = self.apply(y, Kind::Three, c)?;
                    found = self.find(j + 1, target, phi)?;
                    reduce::reverse(self.inst, &mut self.g, &rec)?;
                    if found {
                        phi.set(y, c);
                        break;
                    }
                }
                found
            }
        };
        for rec in recs.iter().rev() {
            reduce::reverse(self.inst, &mut self.g, rec)?;
            if found {
                phi.set(rec.vertex(), extend_coloring(rec, phi)?);
            }
        }
        Ok(found)
    }
}

/// Optimal score, leaving `inst` as it was.
pub fn phase2_score(inst: &mut Instance, seq: &ReductionSequence) -> Result<Score> {
    Search::new(inst, seq).best(0)
}

/// An assignment scoring `target`, which must be the optimum.
pub fn phase3_coloring(
    inst: &mut Instance,
    seq: &ReductionSequence,
    target: Score,
) -> Result<Assignment> {
    let mut phi = Assignment::with_capacity(inst.num_slots());
    if Search::new(inst, seq).find(0, target, &mut phi)? {
        Ok(phi)
    } else {
        Err(Error::Invariant(format!("no leaf reaches score {target}")))
    }
}

pub(crate) fn run_sequence(inst: &Instance, seq: &ReductionSequence, start: Instant) -> Result<Solution> {
    let mut work = inst.clone();
    let mut search = Search::new(&mut work, seq);
    let score = search.best(0)?;
    let mut assignment = Assignment::with_capacity(inst.num_slots());
    if !search.find(0, score, &mut assignment)? {
        return Err(Error::Invariant(format!("no leaf reaches score {score}")));
    }
    let mut stats = SolveStats {
        iii_count: seq.iii_count,
        iii_depth: seq.iii_count,
        color_branches: search.branches,
        ..SolveStats::default()
    };
    stats.count_kinds(seq.steps.iter().map(|s| s.1));
    stats.elapsed = start.elapsed();
    Ok(Solution {
        score,
        assignment,
        stats,
    })
}

pub fn solve_a(inst: &Instance) -> Result<Solution> {
    let start = Instant::now();
    let seq = phase1_sequence(inst);
    run_sequence(inst, &seq, start)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::encode_max_cut;
    use crate::instance::score_assignment;

    fn k5() -> Vec<(usize, usize)> {
        (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect()
    }

    #[test]
    fn k5_sequence_has_two_branchings() {
        let inst = encode_max_cut(5, &k5(), None).unwrap();
        let seq = phase1_sequence(&inst);
        assert_eq!(seq.steps.len(), 5);
        assert_eq!(seq.iii_count, 2);
    }

    #[test]
    fn k5_phases() {
        let mut inst = encode_max_cut(5, &k5(), None).unwrap();
        let before = inst.clone();
        let seq = phase1_sequence(&inst);
        assert_eq!(phase2_score(&mut inst, &seq), Ok(6));
        assert_eq!(inst, before);
        let phi = phase3_coloring(&mut inst, &seq, 6).unwrap();
        assert_eq!(inst, before);
        assert_eq!(score_assignment(&inst, &phi), Ok(6));
        assert!(phase3_coloring(&mut inst, &seq, 7).is_err());
    }

    #[test]
    fn empty_instance_is_its_niladic() {
        let mut inst = Instance::new(0, 2).unwrap();
        inst.set_niladic(5);
        let sol = solve_a(&inst).unwrap();
        assert_eq!(sol.score, 5);
        assert!(sol.assignment.is_empty());
    }

    #[test]
    fn path_and_tree() {
        let inst = encode_max_cut(4, &[(0, 1), (1, 2), (2, 3)], None).unwrap();
        let sol = solve_a(&inst).unwrap();
        assert_eq!((sol.score, sol.stats.iii_count), (3, 0));
        assert_eq!(sol.stats.color_branches, 0);

        let star = encode_max_cut(6, &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)], None).unwrap();
        let sol = solve_a(&star).unwrap();
        assert_eq!((sol.score, sol.stats.iii_count), (5, 0));
        assert_eq!(score_assignment(&star, &sol.assignment), Ok(5));
    }

    #[test]
    fn three_disjoint_k5() {
        let edges: Vec<_> = (0..3)
            .flat_map(|b| k5().into_iter().map(move |(u, v)| (u + 5 * b, v + 5 * b)))
            .collect();
        let inst = encode_max_cut(15, &edges, None).unwrap();
        let sol = solve_a(&inst).unwrap();
        assert_eq!((sol.score, sol.stats.iii_count), (18, 6));
        assert_eq!(score_assignment(&inst, &sol.assignment), Ok(18));
    }
}
