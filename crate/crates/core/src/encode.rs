//! Encoders from classical problems into Max 2-CSP.

use crate::error::{Error, Result};
use crate::instance::{Instance, Score};

/// A literal of a 2-SAT clause: variable index plus polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    /// The color that satisfies this literal (color 1 = true).
    fn satisfying_color(self) -> usize {
        usize::from(self.positive)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub lits: Vec<Lit>,
    pub weight: Score,
}

impl Clause {
    pub fn new(lits: Vec<Lit>, weight: Score) -> Self {
        Clause { lits, weight }
    }
}

fn check_simple(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in edges {
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
        }
    }
    Ok(())
}

/// Max Cut with optional integer edge weights (default 1): `r = 2`,
/// `s_uv(C, D) = w·[C ≠ D]`.
pub fn encode_max_cut(
    n: usize,
    edges: &[(usize, usize)],
    weights: Option<&[Score]>,
) -> Result<Instance> {
    check_simple(n, edges)?;
    let mut inst = Instance::new(n, 2)?;
    for (i, &(u, v)) in edges.iter().enumerate() {
        let w = weights.map_or(1, |ws| ws[i]);
        inst.add_edge(u, v, vec![0, w, w, 0])?;
    }
    Ok(inst)
}

/// Max Dicut: an arc `u → v` scores 1 when `u` gets color 0 and `v` color 1.
/// Antiparallel arcs share one table.
pub fn encode_max_dicut(n: usize, arcs: &[(usize, usize)]) -> Result<Instance> {
    let mut inst = Instance::new(n, 2)?;
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in arcs {
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        if !seen.insert((u, v)) {
            return Err(Error::DuplicateEdge(u, v));
        }
        inst.add_to_dyadic(u, v, 0, 1, 1)?;
    }
    Ok(inst)
}

/// Weighted Max 2-SAT with color 1 = true.
pub fn encode_max_2sat(num_vars: usize, clauses: &[Clause]) -> Result<Instance> {
    let mut inst = Instance::new(num_vars, 2)?;
    for clause in clauses {
        if clause.weight < 0 {
            return Err(Error::NegativeWeight {
                vertex: clause.lits.first().map_or(0, |l| l.var),
                weight: clause.weight,
            });
        }
        let w = clause.weight;
        match clause.lits.as_slice() {
            [a] => inst.add_to_monadic(a.var, a.satisfying_color(), w)?,
            [a, b] if a.var == b.var => {
                if a.positive == b.positive {
                    inst.add_to_monadic(a.var, a.satisfying_color(), w)?;
                } else {
                    inst.add_niladic(w)?;
                }
            }
            [a, b] => {
                for ca in 0..2 {
                    for cb in 0..2 {
                        if ca == a.satisfying_color() || cb == b.satisfying_color() {
                            inst.add_to_dyadic(a.var, b.var, ca, cb, w)?;
                        }
                    }
                }
            }
            lits => return Err(Error::ClauseArity(lits.len())),
        }
    }
    Ok(inst)
}

/// Weighted maximum independent set: color 1 = in the set, `s_v(1) = w(v)`,
/// and `s_uv(1, 1) = -(w(u) + w(v) + 1)` so no optimum takes both endpoints.
pub fn encode_mis(n: usize, edges: &[(usize, usize)], weights: &[Score]) -> Result<Instance> {
    check_simple(n, edges)?;
    if let Some((v, &w)) = weights.iter().enumerate().find(|(_, &w)| w < 0) {
        return Err(Error::NegativeWeight { vertex: v, weight: w });
    }
    let mut inst = Instance::new(n, 2)?;
    for (v, &w) in weights.iter().enumerate() {
        inst.set_monadic(v, vec![0, w])?;
    }
    for &(u, v) in edges {
        let penalty = weights[u]
            .checked_add(weights[v])
            .and_then(|s| s.checked_add(1))
            .ok_or(Error::Overflow)?;
        inst.add_edge(u, v, vec![0, 0, 0, -penalty])?;
    }
    Ok(inst)
}
