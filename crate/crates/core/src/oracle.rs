//! Exhaustive enumeration, used as the correctness oracle for every solver.

use crate::error::{Error, Result};
use crate::instance::{Assignment, Instance, Score};

/// Default cap on the number of enumerated assignments.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Number of assignments `r^n`, saturating at `u64::MAX`.
pub fn assignment_count(r: usize, n: usize) -> u64 {
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(r as u64);
    }
    total
}

pub fn brute_force_solve(inst: &Instance) -> Result<(Score, Assignment)> {
    brute_force_solve_with_budget(inst, DEFAULT_BUDGET)
}

/// Enumerate all `r^n` assignments of the live vertices in lexicographic
/// order and return the best score with the first assignment attaining it.
pub fn brute_force_solve_with_budget(inst: &Instance, budget: u64) -> Result<(Score, Assignment)> {
    let r = inst.r();
    let verts: Vec<usize> = inst.vertices().collect();
    let n = verts.len();
    if assignment_count(r, n) > budget {
        return Err(Error::BudgetExceeded { r, n, budget });
    }
    let mut pos = vec![usize::MAX; inst.num_slots()];
    for (i, &v) in verts.iter().enumerate() {
        pos[v] = i;
    }
    let edges: Vec<(usize, usize, &[Score])> = inst
        .edges()
        .map(|((u, v), t)| (pos[u], pos[v], t))
        .collect();
    let monadic: Vec<&[Score]> = verts.iter().map(|&v| inst.monadic(v)).collect();

    let mut colors = vec![0usize; n];
    let mut best: Option<(i128, Vec<usize>)> = None;
    loop {
        let mut s = inst.niladic() as i128;
        for (i, t) in monadic.iter().enumerate() {
            s += t[colors[i]] as i128;
        }
        for &(a, b, t) in &edges {
            s += t[colors[a] * r + colors[b]] as i128;
        }
        if best.as_ref().is_none_or(|(b, _)| s > *b) {
            best = Some((s, colors.clone()));
        }
        // odometer, last vertex fastest
        let mut i = n;
        loop {
            if i == 0 {
                let (s, cs) = best.expect("at least one assignment");
                let score = Score::try_from(s).map_err(|_| Error::Overflow)?;
                let mut phi = Assignment::with_capacity(inst.num_slots());
                for (k, &v) in verts.iter().enumerate() {
                    phi.set(v, cs[k]);
                }
                return Ok((score, phi));
            }
            i -= 1;
            colors[i] += 1;
            if colors[i] < r {
                break;
            }
            colors[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::encode_max_cut;
    use crate::instance::score_assignment;

    #[test]
    fn single_vertex_table_max() {
        let mut inst = Instance::new(1, 2).unwrap();
        inst.set_monadic(0, vec![3, 7]).unwrap();
        let (s, phi) = brute_force_solve(&inst).unwrap();
        assert_eq!(s, 7);
        assert_eq!(phi.get(0), Some(1));
    }

    #[test]
    fn first_maximizer_is_lexicographic() {
        let inst = encode_max_cut(3, &[(0, 1), (1, 2), (0, 2)], None).unwrap();
        let (s, phi) = brute_force_solve(&inst).unwrap();
        assert_eq!(s, 2);
        assert_eq!(phi.to_colors(), vec![0, 0, 1]);
        assert_eq!(score_assignment(&inst, &phi), Ok(2));
    }

    #[test]
    fn budget_guard() {
        let inst = Instance::new(30, 2).unwrap();
        assert!(matches!(
            brute_force_solve(&inst),
            Err(Error::BudgetExceeded { r: 2, n: 30, .. })
        ));
        assert!(brute_force_solve_with_budget(&Instance::new(3, 2).unwrap(), 8).is_ok());
        assert!(brute_force_solve_with_budget(&Instance::new(3, 2).unwrap(), 7).is_err());
    }
}
