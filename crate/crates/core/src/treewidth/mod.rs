//! Tree decompositions read off a reduction tree, their validation, and
//! dynamic programming over them.

mod dp;
mod pace;

use std::collections::VecDeque;
use std::fmt;

pub use dp::{dp_solution, dp_solve, to_nice, NiceDecomposition, NiceKind, NiceNode, DP_TABLE_LIMIT};
pub use pace::{export_pace, parse_pace};

use std::time::Instant;

use crate::algo_b::{build_reduction_tree, iii_depth, ReductionTree};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::reduce::Kind;
use crate::solution::{SolveStats, Solution};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Sorted vertex ids per bag.
    pub bags: Vec<Vec<usize>>,
    /// Tree edges between bag indices.
    pub edges: Vec<(usize, usize)>,
    /// Number of vertex slots of the underlying graph.
    pub num_vertices: usize,
}

impl TreeDecomposition {
    /// Largest bag size minus one (0 when there are no vertices).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    NotATree,
    UnknownVertex(usize),
    UncoveredVertex(usize),
    UncoveredEdge(usize, usize),
    DisconnectedTrace(usize),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NotATree => write!(f, "bag graph is not a tree"),
            TdViolation::UnknownVertex(v) => write!(f, "bag holds vertex {v}, which is not in the instance"),
            TdViolation::UncoveredVertex(v) => write!(f, "vertex {v} is in no bag"),
            TdViolation::UncoveredEdge(u, v) => write!(f, "edge {u}-{v} is in no bag"),
            TdViolation::DisconnectedTrace(v) => write!(f, "bags holding vertex {v} are not connected"),
        }
    }
}

fn is_tree(td: &TreeDecomposition) -> bool {
    let b = td.bags.len();
    if b == 0 {
        return td.edges.is_empty();
    }
    if td.edges.len() != b - 1 || td.edges.iter().any(|&(x, y)| x >= b || y >= b || x == y) {
        return false;
    }
    let adj = td.adjacency();
    let mut seen = vec![false; b];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut count = 1;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    count == b
}

/// Check the three defining properties plus the tree shape. Empty = valid.
pub fn validate_decomposition(inst: &Instance, td: &TreeDecomposition) -> Vec<TdViolation> {
    let mut out = Vec::new();
    let tree = is_tree(td);
    if !tree {
        out.push(TdViolation::NotATree);
    }
    let n = inst.num_slots();
    let mut holders = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v < n && inst.is_live(v) {
                holders[v].push(i);
            } else {
                out.push(TdViolation::UnknownVertex(v));
            }
        }
    }
    for v in inst.vertices() {
        if holders[v].is_empty() {
            out.push(TdViolation::UncoveredVertex(v));
        }
    }
    for ((u, v), _) in inst.edges() {
        let together = holders[u].iter().any(|b| td.bags[*b].binary_search(&v).is_ok());
        if !together {
            out.push(TdViolation::UncoveredEdge(u, v));
        }
    }
    if tree {
        let adj = td.adjacency();
        let mut mark = vec![usize::MAX; td.bags.len()];
        for v in inst.vertices() {
            let Some(&start) = holders[v].first() else { continue };
            for &b in &holders[v] {
                mark[b] = v;
            }
            let mut reached = 1;
            let mut queue = VecDeque::from([start]);
            mark[start] = usize::MAX - 1;
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if mark[y] == v {
                        mark[y] = usize::MAX - 1;
                        reached += 1;
                        queue.push_back(y);
                    }
                }
            }
            if reached != holders[v].len() {
                out.push(TdViolation::DisconnectedTrace(v));
            }
            for &b in &holders[v] {
                mark[b] = usize::MAX;
            }
        }
    }
    out
}

struct Builder {
    bags: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn add(&mut self, mut bag: Vec<usize>, link: Option<usize>) -> usize {
        bag.sort_unstable();
        let i = self.bags.len();
        self.bags.push(bag);
        if let Some(j) = link {
            self.edges.push((j, i));
        }
        i
    }

    fn find(&self, comp: &[usize], want: &[usize]) -> Option<usize> {
        comp.iter()
            .copied()
            .find(|&b| want.iter().all(|v| self.bags[b].binary_search(v).is_ok()))
    }
}

/// Replay the reduction tree bottom up. 0: a bag `{v}`. I: a bag `{x, v}`
/// hung off a bag holding `x`. II: when the child part has width ≤ 1 and a
/// single bag `{x, z}` and the new edge was not merged, that bag is split
/// into `{x, v}` and `{v, z}`; otherwise a bag `{x, z, v}` hangs off a bag
/// holding `x` and `z`. III: `v` joins every bag of every child part, and a
/// bag `{v}` connects the parts.
pub fn decomposition_from_reduction_tree(inst: &Instance, tree: &ReductionTree) -> Result<TreeDecomposition> {
    for v in inst.vertices() {
        if tree.kind(v).is_none() {
            return Err(Error::TreeMismatch(format!("vertex {v} is missing from the tree")));
        }
    }
    if tree.order().len() != inst.num_vertices() {
        return Err(Error::TreeMismatch("tree has vertices the instance lacks".into()));
    }
    let mut b = Builder {
        bags: Vec::new(),
        edges: Vec::new(),
    };
    let mut comp: Vec<Vec<usize>> = vec![Vec::new(); inst.num_slots()];
    let missing = |what: &str, v: usize| Error::TreeMismatch(format!("no bag holds {what} of vertex {v}"));
    for &v in tree.order().iter().rev() {
        let nbrs = tree.neighbors_at_reduction(v);
        let parts: Vec<Vec<usize>> = tree
            .children(v)
            .iter()
            .map(|&c| std::mem::take(&mut comp[c]))
            .collect();
        let mut own: Vec<usize> = parts.concat();
        match tree.kind(v).expect("checked above") {
            Kind::Zero => {
                own.push(b.add(vec![v], None));
            }
            Kind::One => {
                let x = nbrs[0];
                let at = b.find(&own, &[x]).ok_or_else(|| missing("the neighbor", v))?;
                own.push(b.add(vec![x, v], Some(at)));
            }
            Kind::Two => {
                let (x, z) = (nbrs[0], nbrs[1]);
                let pair = [x.min(z), x.max(z)];
                let exact: Vec<usize> = own.iter().copied().filter(|&i| b.bags[i] == pair).collect();
                let thin = own.iter().all(|&i| b.bags[i].len() <= 2);
                if !tree.merged(v) && thin && exact.len() == 1 {
                    let split = exact[0];
                    b.bags[split] = vec![x.min(v), x.max(v)];
                    let new = b.add(vec![v, z], Some(split));
                    // bags that reached z through the old bag now hang off the new one
                    for e in b.edges.iter_mut() {
                        let other = if e.0 == split { e.1 } else if e.1 == split { e.0 } else { continue };
                        if other != new && b.bags[other].binary_search(&z).is_ok() {
                            *e = (new, other);
                        }
                    }
                    own.push(new);
                } else {
                    let at = b.find(&own, &pair).ok_or_else(|| missing("both neighbors", v))?;
                    own.push(b.add(vec![x, z, v], Some(at)));
                }
            }
            Kind::Three => {
                for &i in &own {
                    let bag = &mut b.bags[i];
                    let pos = bag.binary_search(&v).unwrap_err();
                    bag.insert(pos, v);
                }
                let join = b.add(vec![v], None);
                for part in &parts {
                    b.edges.push((join, part[0]));
                }
                own.push(join);
            }
        }
        comp[v] = own;
    }
    let mut td = TreeDecomposition {
        bags: b.bags,
        edges: b.edges,
        num_vertices: inst.num_slots(),
    };
    let first: Vec<usize> = tree.roots().iter().filter_map(|&r| comp[r].first().copied()).collect();
    for w in first.windows(2) {
        td.edges.push((first[0], w[1]));
    }
    Ok(td)
}

/// Solve by DP over the decomposition read off the policy-B reduction tree.
/// Also returns that decomposition.
pub fn solve_dp(inst: &Instance) -> Result<(Solution, TreeDecomposition)> {
    let start = Instant::now();
    let tree = build_reduction_tree(inst);
    let td = decomposition_from_reduction_tree(inst, &tree)?;
    let (score, assignment) = dp_solution(inst, &td)?;
    let mut stats = SolveStats {
        iii_count: tree.iii_count(),
        iii_depth: iii_depth(&tree),
        ..SolveStats::default()
    };
    stats.count_kinds(tree.order().iter().filter_map(|&v| tree.kind(v)));
    stats.elapsed = start.elapsed();
    Ok((
        Solution {
            score,
            assignment,
            stats,
        },
        td,
    ))
}
