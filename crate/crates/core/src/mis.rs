//! Maximum-weight independent set: branch on high-degree vertices, hand the
//! rest to Algorithm B through the CSP encoding.

use crate::algo_b::solve_b;
use crate::encode::encode_mis;
use crate::error::{Error, Result};
use crate::graph::MutableGraph;
use crate::instance::Score;

/// Optimal weight and an optimal independent set (sorted ids).
pub fn solve_mis(n: usize, edges: &[(usize, usize)], weights: &[Score]) -> Result<(Score, Vec<usize>)> {
    if weights.len() != n {
        return Err(Error::TableLength {
            what: "vertex weights".into(),
            got: weights.len(),
            expected: n,
        });
    }
    // validates the graph and the weights
    encode_mis(n, edges, weights)?;
    let mut g = MutableGraph::from_edges(n, edges);
    let (score, mut set) = branch(&mut g, weights)?;
    set.sort_unstable();
    Ok((score, set))
}

fn branch(g: &mut MutableGraph, weights: &[Score]) -> Result<(Score, Vec<usize>)> {
    let pick = g
        .vertices()
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .filter(|&v| g.degree(v) >= 5);
    let Some(v) = pick else {
        return solve_small_degree(g, weights);
    };

    let nbrs = g.remove_vertex(v);
    let without = branch(g, weights)?;
    for &u in &nbrs {
        g.remove_vertex(u);
    }
    let (s, mut set) = branch(g, weights)?;
    for &u in nbrs.iter().rev() {
        g.restore_vertex(u);
    }
    g.restore_vertex(v);

    let with = s.checked_add(weights[v]).ok_or(Error::Overflow)?;
    if with > without.0 {
        set.push(v);
        Ok((with, set))
    } else {
        Ok(without)
    }
}

fn solve_small_degree(g: &MutableGraph, weights: &[Score]) -> Result<(Score, Vec<usize>)> {
    let verts: Vec<usize> = g.vertices().collect();
    let mut pos = vec![usize::MAX; g.num_slots()];
    for (i, &v) in verts.iter().enumerate() {
        pos[v] = i;
    }
    let edges: Vec<(usize, usize)> = g.edge_list().into_iter().map(|(u, v)| (pos[u], pos[v])).collect();
    let w: Vec<Score> = verts.iter().map(|&v| weights[v]).collect();
    let sol = solve_b(&encode_mis(verts.len(), &edges, &w)?)?;
    let set = (0..verts.len())
        .filter(|&i| sol.assignment.get(i) == Some(1))
        .map(|i| verts[i])
        .collect();
    Ok((sol.score, set))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let c5 = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)];
        assert_eq!(solve_mis(5, &c5, &[1; 5]).unwrap().0, 2);
        let star: Vec<_> = (1..7).map(|v| (0, v)).collect();
        assert_eq!(solve_mis(7, &star, &[1; 7]).unwrap(), (6, vec![1, 2, 3, 4, 5, 6]));
        let (s, set) = solve_mis(7, &star, &[7, 1, 1, 1, 1, 1, 1]).unwrap();
        assert_eq!((s, set), (7, vec![0]));
    }

    #[test]
    fn rejects_negative_weight() {
        assert!(matches!(
            solve_mis(2, &[(0, 1)], &[1, -3]),
            Err(Error::NegativeWeight { vertex: 1, weight: -3 })
        ));
    }
}
