//! Algorithm B: reductions organized into a tree that follows the component
//! structure, so independent components are searched one after another
//! instead of multiplying each other's branching.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{MutableGraph, Policy};
use crate::instance::{score_assignment, sub, Assignment, Color, Instance, Score};
use crate::reduce::{self, extend_coloring, Kind, ReductionRecord};
use crate::solution::{SolveStats, Solution};

/// Rooted forest over the vertices. The subtree of a node is the vertex set
/// of its component once all of its ancestors have been reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTree {
    order: Vec<usize>,
    kind: Vec<Option<Kind>>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    roots: Vec<usize>,
    nbrs: Vec<Vec<usize>>,
    merged: Vec<bool>,
    depth: Vec<usize>,
}

impl ReductionTree {
    /// Vertices in the order the forward pass reduced them.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn kind(&self, v: usize) -> Option<Kind> {
        self.kind.get(v).copied().flatten()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Neighbors of `v` in the graph at the moment it was reduced.
    pub fn neighbors_at_reduction(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    /// For a II node: whether the new edge coincided with an existing one.
    pub fn merged(&self, v: usize) -> bool {
        self.merged[v]
    }

    /// III-depth of the subtree rooted at `v`.
    pub fn node_depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn iii_count(&self) -> usize {
        self.kind.iter().filter(|k| **k == Some(Kind::Three)).count()
    }

    /// Vertices of the subtree rooted at `v`, in depth-first preorder.
    pub fn subtree(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            out.push(u);
            stack.extend(self.children[u].iter().rev());
        }
        out
    }

    fn preorder(&self) -> Vec<usize> {
        self.roots.iter().flat_map(|&r| self.subtree(r)).collect()
    }
}

/// Maximum number of III nodes on a root-to-leaf path.
pub fn iii_depth(tree: &ReductionTree) -> usize {
    tree.roots.iter().map(|&r| tree.depth[r]).max().unwrap_or(0)
}

/// Forward pass under policy B, then a backward pass gluing subtrees.
///
/// A III-reduction is followed at once by reductions on its neighbors that
/// had degree 3, in ascending id order, each using whatever kind its degree
/// now calls for.
pub fn build_reduction_tree(inst: &Instance) -> ReductionTree {
    let slots = inst.num_slots();
    let mut g = MutableGraph::from_instance(inst);
    let mut order = Vec::with_capacity(inst.num_vertices());
    let mut kind = vec![None; slots];
    let mut nbrs = vec![Vec::new(); slots];
    let mut merged = vec![false; slots];
    let mut follow_ups: Vec<usize> = Vec::new();
    loop {
        let (v, k) = if follow_ups.is_empty() {
            match g.pick_reduction_vertex(Policy::B) {
                Some(p) => p,
                None => break,
            }
        } else {
            let u = follow_ups.remove(0);
            (u, Kind::for_degree(g.degree(u)))
        };
        let ns: Vec<usize> = g.neighbors(v).collect();
        if k == Kind::Three {
            follow_ups = ns.iter().copied().filter(|&x| g.degree(x) == 3).collect();
            follow_ups.sort_unstable();
        }
        if k == Kind::Two {
            merged[v] = g.contract(v).merged;
        } else {
            g.remove_vertex(v);
        }
        kind[v] = Some(k);
        nbrs[v] = ns;
        order.push(v);
    }

    // Backward pass: `up` links each vertex towards the root of its current
    // tree; roots point at themselves.
    const NONE: usize = usize::MAX;
    let mut up = vec![NONE; slots];
    let find = |up: &mut Vec<usize>, mut v: usize| {
        let mut r = v;
        while up[r] != r {
            r = up[r];
        }
        while up[v] != r {
            let next = up[v];
            up[v] = r;
            v = next;
        }
        r
    };
    let mut parent = vec![None; slots];
    let mut children = vec![Vec::new(); slots];
    for &v in order.iter().rev() {
        let mut kids: Vec<usize> = match kind[v] {
            Some(Kind::Zero) => Vec::new(),
            Some(Kind::One) | Some(Kind::Two) => vec![find(&mut up, nbrs[v][0])],
            _ => nbrs[v].iter().map(|&x| find(&mut up, x)).collect(),
        };
        kids.sort_unstable();
        kids.dedup();
        for &c in &kids {
            parent[c] = Some(v);
            up[c] = v;
        }
        up[v] = v;
        children[v] = kids;
    }
    let roots: Vec<usize> = order.iter().copied().filter(|&v| parent[v].is_none()).collect();

    let mut depth = vec![0; slots];
    for &v in order.iter().rev() {
        let below = children[v].iter().map(|&c| depth[c]).max().unwrap_or(0);
        depth[v] = below + usize::from(kind[v] == Some(Kind::Three));
    }
    ReductionTree {
        order,
        kind,
        parent,
        children,
        roots,
        nbrs,
        merged,
        depth,
    }
}

struct TreeSearch<'a> {
    inst: &'a mut Instance,
    g: MutableGraph,
    tree: &'a ReductionTree,
    branches: u64,
}

impl<'a> TreeSearch<'a> {
    fn new(inst: &'a mut Instance, tree: &'a ReductionTree) -> Self {
        let g = MutableGraph::from_instance(inst);
        TreeSearch {
            inst,
            g,
            tree,
            branches: 0,
        }
    }

    fn apply(&mut self, v: usize, color: Color) -> Result<ReductionRecord> {
        let kind = self
            .tree
            .kind(v)
            .ok_or_else(|| Error::TreeMismatch(format!("vertex {v} is not in the tree")))?;
        if !self.g.is_live(v) {
            return Err(Error::TreeMismatch(format!("vertex {v} is already reduced")));
        }
        reduce::reduce(self.inst, &mut self.g, v, kind, color)
    }

    /// Apply the I/II reductions from `v` down to the first 0 or III node,
    /// which is returned unreduced.
    fn chain(&mut self, mut v: usize) -> Result<(usize, Vec<ReductionRecord>)> {
        let mut recs = Vec::new();
        while matches!(self.tree.kind(v), Some(Kind::One | Kind::Two)) {
            recs.push(self.apply(v, 0)?);
            v = self.tree.children[v][0];
        }
        Ok((v, recs))
    }

    fn unwind(&mut self, recs: &[ReductionRecord]) -> Result<()> {
        for rec in recs.iter().rev() {
            reduce::reverse(self.inst, &mut self.g, rec)?;
        }
        Ok(())
    }

    /// Score of branching on III node `w` with `color`, relative to `base`.
    fn branch_value(&mut self, w: usize, color: Color, base: Score) -> Result<Score> {
        self.branches += 1;
        let rec = self.apply(w, color)?;
        let mut total = sub(self.inst.niladic(), base)?;
        for &c in &self.tree.children[w] {
            total = total.checked_add(self.score(c)?).ok_or(Error::Overflow)?;
        }
        reduce::reverse(self.inst, &mut self.g, &rec)?;
        Ok(total)
    }

    /// Best color at III node `w` (smallest on ties) and its value.
    fn best_branch(&mut self, w: usize, base: Score) -> Result<(Score, Color)> {
        let mut best = (self.branch_value(w, 0, base)?, 0);
        for c in 1..self.inst.r() {
            let s = self.branch_value(w, c, base)?;
            if s > best.0 {
                best = (s, c);
            }
        }
        Ok(best)
    }

    /// Optimal niladic gain from reducing the whole component of `v`.
    fn score(&mut self, v: usize) -> Result<Score> {
        let base = self.inst.niladic();
        let (w, recs) = self.chain(v)?;
        let value = if self.tree.kind(w) == Some(Kind::Zero) {
            let rec = self.apply(w, 0)?;
            let s = sub(self.inst.niladic(), base)?;
            reduce::reverse(self.inst, &mut self.g, &rec)?;
            s
        } else {
            self.best_branch(w, base)?.0
        };
        self.unwind(&recs)?;
        Ok(value)
    }

    /// Fix the color of every III node below `v`, top down.
    fn fix_colors(&mut self, v: usize, colors: &mut [Option<Color>]) -> Result<()> {
        let base = self.inst.niladic();
        let (w, recs) = self.chain(v)?;
        if self.tree.kind(w) == Some(Kind::Three) {
            let (_, c) = self.best_branch(w, base)?;
            colors[w] = Some(c);
            let rec = self.apply(w, c)?;
            for &child in &self.tree.children[w] {
                self.fix_colors(child, colors)?;
            }
            reduce::reverse(self.inst, &mut self.g, &rec)?;
        }
        self.unwind(&recs)
    }
}

/// Optimal score of the component of `v`, counting only what its reduction
/// adds to the niladic score. `inst` must be reduced on all ancestors of `v`
/// and is left unchanged.
pub fn score_subtree(inst: &mut Instance, tree: &ReductionTree, v: usize) -> Result<Score> {
    TreeSearch::new(inst, tree).score(v)
}

fn total_score(search: &mut TreeSearch<'_>) -> Result<Score> {
    let mut total = search.inst.niladic();
    for &r in search.tree.roots() {
        total = total.checked_add(search.score(r)?).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

fn color_with(search: &mut TreeSearch<'_>) -> Result<Assignment> {
    let tree = search.tree;
    let mut colors = vec![None; search.inst.num_slots()];
    for &r in tree.roots() {
        search.fix_colors(r, &mut colors)?;
    }
    let mut recs = Vec::with_capacity(tree.order.len());
    for v in tree.preorder() {
        recs.push(search.apply(v, colors[v].unwrap_or(0))?);
    }
    let mut phi = Assignment::with_capacity(search.inst.num_slots());
    for rec in recs.iter().rev() {
        reduce::reverse(search.inst, &mut search.g, rec)?;
        let y = rec.vertex();
        let c = match colors[y] {
            Some(c) => c,
            None => extend_coloring(rec, &phi)?,
        };
        phi.set(y, c);
    }
    Ok(phi)
}

/// Optimal assignment: III colors chosen top down, the rest by extension.
pub fn color_tree(inst: &mut Instance, tree: &ReductionTree) -> Result<Assignment> {
    color_with(&mut TreeSearch::new(inst, tree))
}

pub fn solve_b(inst: &Instance) -> Result<Solution> {
    let start = Instant::now();
    let tree = build_reduction_tree(inst);
    let mut work = inst.clone();
    let mut search = TreeSearch::new(&mut work, &tree);
    let score = total_score(&mut search)?;
    let assignment = color_with(&mut search)?;
    let branches = search.branches;
    let rescored = score_assignment(inst, &assignment)?;
    if rescored != score {
        return Err(Error::Invariant(format!(
            "coloring scores {rescored}, search found {score}"
        )));
    }
    let mut stats = SolveStats {
        iii_count: tree.iii_count(),
        iii_depth: iii_depth(&tree),
        color_branches: branches,
        ..SolveStats::default()
    };
    stats.count_kinds(tree.order.iter().filter_map(|&v| tree.kind(v)));
    stats.elapsed = start.elapsed();
    Ok(Solution {
        score,
        assignment,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::encode_max_cut;

    fn complete(n: usize, offset: usize) -> Vec<(usize, usize)> {
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u + offset, v + offset)))
            .collect()
    }

    #[test]
    fn k5_depth_two() {
        let inst = encode_max_cut(5, &complete(5, 0), None).unwrap();
        let tree = build_reduction_tree(&inst);
        assert_eq!(iii_depth(&tree), 2);
        let sol = solve_b(&inst).unwrap();
        assert_eq!((sol.score, sol.stats.iii_depth), (6, 2));
    }

    #[test]
    fn components_are_parallel() {
        let edges: Vec<_> = complete(5, 0).into_iter().chain(complete(5, 5)).collect();
        let inst = encode_max_cut(10, &edges, None).unwrap();
        let tree = build_reduction_tree(&inst);
        assert_eq!((iii_depth(&tree), tree.iii_count()), (2, 4));
        assert_eq!(tree.roots().len(), 2);
    }

    #[test]
    fn trees_need_no_branching() {
        let inst = encode_max_cut(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (4, 5)], None).unwrap();
        let sol = solve_b(&inst).unwrap();
        assert_eq!((sol.score, sol.stats.iii_depth, sol.stats.color_branches), (5, 0, 0));
    }

    #[test]
    fn two_triangles() {
        let inst = encode_max_cut(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], None).unwrap();
        let mut work = inst.clone();
        let tree = build_reduction_tree(&inst);
        let phi = color_tree(&mut work, &tree).unwrap();
        assert_eq!(work, inst);
        assert_eq!(score_assignment(&inst, &phi), Ok(4));
    }

    #[test]
    fn subtree_of_a_leaf_zero_node() {
        let mut inst = Instance::new(1, 2).unwrap();
        inst.set_monadic(0, vec![3, 7]).unwrap();
        let tree = build_reduction_tree(&inst);
        assert_eq!(score_subtree(&mut inst, &tree, 0), Ok(7));
    }
}
