//! Solver parametrized by the number of vertices: branch on everything
//! outside a large induced forest, then finish the forest without branching.

use std::collections::VecDeque;
use std::time::Instant;

use crate::algo_a::{run_sequence, ReductionSequence};
use crate::error::Result;
use crate::graph::{MutableGraph, Policy};
use crate::instance::Instance;
use crate::reduce::Kind;
use crate::solution::Solution;

fn adjacency(g: &MutableGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.num_slots()];
    for v in g.vertices() {
        adj[v] = g.neighbors(v).collect();
    }
    adj
}

/// Vertices with at least one incident edge that is not a bridge, i.e. the
/// vertices lying on some cycle.
fn on_cycle(adj: &[Vec<usize>], present: &[bool]) -> Vec<bool> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut cyclic = vec![false; n];
    let mut time = 0;
    for root in 0..n {
        if !present[root] || disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbor index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(top) = stack.last_mut() {
            let (v, parent, idx) = *top;
            if let Some(&w) = adj[v].get(idx) {
                top.2 += 1;
                if !present[w] || w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                    cyclic[v] = true;
                    cyclic[w] = true;
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] <= disc[parent] {
                        cyclic[v] = true;
                        cyclic[parent] = true;
                    }
                }
            }
        }
    }
    cyclic
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut v: usize) -> usize {
        while self.0[v] != v {
            self.0[v] = self.0[self.0[v]];
            v = self.0[v];
        }
        v
    }
}

/// Greedy maximal induced forest: while a cycle remains, delete a vertex of
/// maximum degree among those on a cycle (smallest id on ties), then add
/// back every deleted vertex that keeps the set acyclic. Returns sorted ids.
pub fn find_induced_forest(g: &MutableGraph) -> Vec<usize> {
    let adj = adjacency(g);
    let n = adj.len();
    let mut present: Vec<bool> = (0..n).map(|v| g.is_live(v)).collect();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut deleted = Vec::new();
    loop {
        let cyclic = on_cycle(&adj, &present);
        let pick = (0..n)
            .filter(|&v| cyclic[v])
            .max_by_key(|&v| (degree[v], std::cmp::Reverse(v)));
        let Some(v) = pick else { break };
        present[v] = false;
        for &w in &adj[v] {
            degree[w] -= 1;
        }
        deleted.push(v);
    }

    let mut dsu = Dsu((0..n).collect());
    for v in 0..n {
        if present[v] {
            for &w in &adj[v] {
                if w < v && present[w] {
                    let (a, b) = (dsu.find(v), dsu.find(w));
                    dsu.0[a] = b;
                }
            }
        }
    }
    deleted.sort_unstable();
    for v in deleted {
        let mut roots: Vec<usize> = adj[v]
            .iter()
            .filter(|&&w| present[w])
            .map(|&w| dsu.find(w))
            .collect();
        let k = roots.len();
        roots.sort_unstable();
        roots.dedup();
        if roots.len() == k {
            present[v] = true;
            for r in roots {
                dsu.0[r] = v;
            }
        }
    }
    (0..n).filter(|&v| present[v]).collect()
}

/// Whether `x` and `z` are joined by a path avoiding `blocked` vertices.
fn connected_avoiding(g: &MutableGraph, x: usize, z: usize, blocked: &[bool]) -> bool {
    let mut seen = vec![false; g.num_slots()];
    seen[x] = true;
    let mut queue = VecDeque::from([x]);
    while let Some(u) = queue.pop_front() {
        if u == z {
            return true;
        }
        for w in g.neighbors(u) {
            if !seen[w] && !blocked[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Reduction plan for a given induced forest. Vertices outside it are taken
/// in ascending order: degree ≥ 3 branches, degree ≤ 1 is reduced, and a
/// degree-2 vertex is contracted only when that cannot close a cycle in the
/// part of the graph that is already acyclic; otherwise it branches too.
/// The forest part is then reduced under policy A, which never branches.
pub(crate) fn forest_sequence(inst: &Instance, forest: &[usize]) -> ReductionSequence {
    let mut g = MutableGraph::from_instance(inst);
    let mut pending = vec![false; g.num_slots()];
    for v in g.vertices() {
        pending[v] = true;
    }
    for &v in forest {
        pending[v] = false;
    }
    let outside: Vec<usize> = (0..g.num_slots()).filter(|&v| pending[v]).collect();
    let mut steps = Vec::with_capacity(g.num_vertices());
    for y in outside {
        pending[y] = false;
        let kind = match g.degree(y) {
            0 => Kind::Zero,
            1 => Kind::One,
            2 => {
                let nb: Vec<usize> = g.neighbors(y).collect();
                let (x, z) = (nb[0], nb[1]);
                pending[y] = true;
                let closes = !pending[x] && !pending[z] && connected_avoiding(&g, x, z, &pending);
                pending[y] = false;
                if closes {
                    Kind::Three
                } else {
                    Kind::Two
                }
            }
            _ => Kind::Three,
        };
        if kind == Kind::Two {
            g.contract(y);
        } else {
            g.remove_vertex(y);
        }
        steps.push((y, kind));
    }
    while let Some((v, kind)) = g.pick_reduction_vertex(Policy::A) {
        debug_assert_ne!(kind, Kind::Three, "remaining graph is not a forest");
        if kind == Kind::Two {
            g.contract(v);
        } else {
            g.remove_vertex(v);
        }
        steps.push((v, kind));
    }
    ReductionSequence::new(steps, true)
}

/// Branch on every vertex outside a greedy induced forest. The number of
/// III-reductions is at most `n` minus the forest size.
pub fn solve_via_induced_forest(inst: &Instance) -> Result<Solution> {
    let start = Instant::now();
    let forest = find_induced_forest(&MutableGraph::from_instance(inst));
    let seq = forest_sequence(inst, &forest);
    run_sequence(inst, &seq, start)
}
