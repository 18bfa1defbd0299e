//! Table-passing dynamic programming over a nice tree decomposition.

use super::{validate_decomposition, TreeDecomposition};
use crate::error::{Error, Result};
use crate::instance::{add, sub, Assignment, Color, Instance, Score};

/// Largest number of entries allowed in one DP table.
pub const DP_TABLE_LIMIT: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    Introduce { v: usize, child: usize },
    Forget { v: usize, child: usize },
    Join { left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    /// Sorted.
    pub bag: Vec<usize>,
    pub kind: NiceKind,
}

/// Nodes are stored children first; the last node is the root, whose bag
/// is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NiceDecomposition {
    pub nodes: Vec<NiceNode>,
}

impl NiceDecomposition {
    fn push(&mut self, bag: Vec<usize>, kind: NiceKind) -> usize {
        self.nodes.push(NiceNode { bag, kind });
        self.nodes.len() - 1
    }

    /// Turn node `at` (with bag `from`) into a node with bag `to` by
    /// forgetting then introducing single vertices.
    fn morph(&mut self, mut at: usize, to: &[usize]) -> usize {
        let from = self.nodes[at].bag.clone();
        let mut bag = from.clone();
        for v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            bag.retain(|u| u != v);
            at = self.push(bag.clone(), NiceKind::Forget { v: *v, child: at });
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            let pos = bag.binary_search(&v).unwrap_err();
            bag.insert(pos, v);
            at = self.push(bag.clone(), NiceKind::Introduce { v, child: at });
        }
        at
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// Nice form of `td` rooted at bag 0, with binary joins and an empty root.
pub fn to_nice(td: &TreeDecomposition) -> NiceDecomposition {
    let mut nice = NiceDecomposition::default();
    if td.bags.is_empty() {
        nice.push(Vec::new(), NiceKind::Leaf);
        return nice;
    }
    let bags: Vec<Vec<usize>> = td
        .bags
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b.dedup();
            b
        })
        .collect();
    let adj = td.adjacency();
    // iterative post-order from bag 0
    let mut parent = vec![usize::MAX; td.bags.len()];
    let mut order = Vec::with_capacity(td.bags.len());
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(t) = stack.pop() {
        order.push(t);
        for &c in &adj[t] {
            if parent[c] == usize::MAX {
                parent[c] = t;
                stack.push(c);
            }
        }
    }
    let mut top = vec![usize::MAX; td.bags.len()];
    for &t in order.iter().rev() {
        let bag = &bags[t];
        let kids: Vec<usize> = adj[t].iter().copied().filter(|&c| c != 0 && parent[c] == t).collect();
        let mut node: Option<usize> = None;
        for c in kids {
            let here = nice.morph(top[c], bag);
            node = Some(match node {
                None => here,
                Some(prev) => nice.push(bag.clone(), NiceKind::Join { left: prev, right: here }),
            });
        }
        let node = node.unwrap_or_else(|| {
            let leaf = nice.push(Vec::new(), NiceKind::Leaf);
            nice.morph(leaf, bag)
        });
        top[t] = node;
    }
    nice.morph(top[0], &[]);
    nice
}

fn entries(r: usize, k: usize) -> Result<usize> {
    let total = (r as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > DP_TABLE_LIMIT as u128 {
        return Err(Error::TableTooLarge {
            entries: total,
            limit: DP_TABLE_LIMIT,
        });
    }
    Ok(total as usize)
}

/// Colors of the bag vertices for table index `idx`, first vertex most
/// significant.
fn decode(mut idx: usize, k: usize, r: usize, out: &mut Vec<Color>) {
    out.clear();
    out.resize(k, 0);
    for i in (0..k).rev() {
        out[i] = idx % r;
        idx /= r;
    }
}

fn encode(colors: impl Iterator<Item = Color>, r: usize) -> usize {
    colors.fold(0, |acc, c| acc * r + c)
}

/// Monadic scores of the bag plus all dyadic scores inside it.
fn bag_score(inst: &Instance, bag: &[usize], colors: &[Color]) -> Result<Score> {
    let mut s = 0;
    for (i, &u) in bag.iter().enumerate() {
        s = add(s, inst.monadic(u)[colors[i]])?;
        for (j, &w) in bag.iter().enumerate().skip(i + 1) {
            if let Some(d) = inst.dyadic(u, w, colors[i], colors[j]) {
                s = add(s, d)?;
            }
        }
    }
    Ok(s)
}

fn tables(inst: &Instance, nice: &NiceDecomposition) -> Result<Vec<Vec<Score>>> {
    let r = inst.r();
    let mut out: Vec<Vec<Score>> = Vec::with_capacity(nice.nodes.len());
    let mut colors = Vec::new();
    for node in &nice.nodes {
        let bag = &node.bag;
        let size = entries(r, bag.len())?;
        let table = match node.kind {
            NiceKind::Leaf => vec![0; size],
            NiceKind::Introduce { v, child } => {
                let p = bag.binary_search(&v).expect("introduced vertex in bag");
                let mut t = Vec::with_capacity(size);
                for idx in 0..size {
                    decode(idx, bag.len(), r, &mut colors);
                    let cv = colors[p];
                    let below = encode(colors.iter().enumerate().filter(|e| e.0 != p).map(|e| *e.1), r);
                    let mut s = add(out[child][below], inst.monadic(v)[cv])?;
                    for (i, &u) in bag.iter().enumerate() {
                        if i != p {
                            if let Some(d) = inst.dyadic(u, v, colors[i], cv) {
                                s = add(s, d)?;
                            }
                        }
                    }
                    t.push(s);
                }
                t
            }
            NiceKind::Forget { v, child } => {
                let child_bag = &nice.nodes[child].bag;
                let p = child_bag.binary_search(&v).expect("forgotten vertex in child bag");
                let mut t = Vec::with_capacity(size);
                for idx in 0..size {
                    decode(idx, bag.len(), r, &mut colors);
                    colors.insert(p, 0);
                    let best = (0..r)
                        .map(|c| {
                            colors[p] = c;
                            out[child][encode(colors.iter().copied(), r)]
                        })
                        .max()
                        .expect("r >= 2");
                    t.push(best);
                }
                t
            }
            NiceKind::Join { left, right } => {
                let mut t = Vec::with_capacity(size);
                for (idx, (&a, &b)) in out[left].iter().zip(&out[right]).enumerate() {
                    decode(idx, bag.len(), r, &mut colors);
                    let twice = add(a, b)?;
                    t.push(sub(twice, bag_score(inst, bag, &colors)?)?);
                }
                t
            }
        };
        out.push(table);
    }
    Ok(out)
}

/// Optimal score and an optimal assignment by DP over `td`.
pub fn dp_solution(inst: &Instance, td: &TreeDecomposition) -> Result<(Score, Assignment)> {
    let problems = validate_decomposition(inst, td);
    if let Some(p) = problems.first() {
        return Err(Error::TreeMismatch(format!("invalid decomposition: {p}")));
    }
    entries(inst.r(), td.bags.iter().map(Vec::len).max().unwrap_or(0))?;
    let nice = to_nice(td);
    let tabs = tables(inst, &nice)?;
    let root = nice.root();
    let score = add(tabs[root][0], inst.niladic())?;

    // walk back down, fixing each vertex where it is forgotten
    let r = inst.r();
    let mut chosen = vec![usize::MAX; nice.nodes.len()];
    chosen[root] = 0;
    let mut phi = Assignment::with_capacity(inst.num_slots());
    let mut colors = Vec::new();
    for t in (0..nice.nodes.len()).rev() {
        let idx = chosen[t];
        if idx == usize::MAX {
            continue;
        }
        let bag = &nice.nodes[t].bag;
        match nice.nodes[t].kind {
            NiceKind::Leaf => {}
            NiceKind::Introduce { v, child } => {
                decode(idx, bag.len(), r, &mut colors);
                let p = bag.binary_search(&v).expect("in bag");
                colors.remove(p);
                chosen[child] = encode(colors.iter().copied(), r);
            }
            NiceKind::Forget { v, child } => {
                decode(idx, bag.len(), r, &mut colors);
                let p = nice.nodes[child].bag.binary_search(&v).expect("in child bag");
                colors.insert(p, 0);
                let mut best = (Score::MIN, 0, 0);
                for c in 0..r {
                    colors[p] = c;
                    let i = encode(colors.iter().copied(), r);
                    if tabs[child][i] > best.0 {
                        best = (tabs[child][i], c, i);
                    }
                }
                phi.set(v, best.1);
                chosen[child] = best.2;
            }
            NiceKind::Join { left, right } => {
                chosen[left] = idx;
                chosen[right] = idx;
            }
        }
    }
    Ok((score, phi))
}

pub fn dp_solve(inst: &Instance, td: &TreeDecomposition) -> Result<Score> {
    dp_solution(inst, td).map(|s| s.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::encode_max_cut;
    use crate::instance::score_assignment;

    fn triangle_td() -> TreeDecomposition {
        TreeDecomposition {
            bags: vec![vec![0, 1, 2]],
            edges: vec![],
            num_vertices: 3,
        }
    }

    #[test]
    fn triangle() {
        let inst = encode_max_cut(3, &[(0, 1), (1, 2), (0, 2)], None).unwrap();
        let (s, phi) = dp_solution(&inst, &triangle_td()).unwrap();
        assert_eq!(s, 2);
        assert_eq!(score_assignment(&inst, &phi), Ok(2));
    }

    #[test]
    fn path_with_join() {
        // star centered at 0 with three bags hanging off a middle bag
        let inst = encode_max_cut(4, &[(0, 1), (0, 2), (0, 3)], None).unwrap();
        let td = TreeDecomposition {
            bags: vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            edges: vec![(0, 1), (0, 2), (0, 3)],
            num_vertices: 4,
        };
        let nice = to_nice(&td);
        assert!(nice.nodes.iter().any(|n| matches!(n.kind, NiceKind::Join { .. })));
        assert!(nice.nodes[nice.root()].bag.is_empty());
        let (s, phi) = dp_solution(&inst, &td).unwrap();
        assert_eq!(s, 3);
        assert_eq!(score_assignment(&inst, &phi), Ok(3));
    }

    #[test]
    fn niladic_and_empty() {
        let mut inst = Instance::new(0, 3).unwrap();
        inst.set_niladic(-4);
        assert_eq!(dp_solve(&inst, &TreeDecomposition::default()), Ok(-4));
    }

    #[test]
    fn invalid_decomposition_is_rejected() {
        let inst = encode_max_cut(3, &[(0, 1), (1, 2), (0, 2)], None).unwrap();
        let td = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2]],
            edges: vec![(0, 1)],
            num_vertices: 3,
        };
        assert!(matches!(dp_solve(&inst, &td), Err(Error::TreeMismatch(_))));
    }

    #[test]
    fn wide_bags_are_refused() {
        let inst = Instance::new(30, 2).unwrap();
        let td = TreeDecomposition {
            bags: vec![(0..30).collect()],
            edges: vec![],
            num_vertices: 30,
        };
        assert!(matches!(dp_solve(&inst, &td), Err(Error::TableTooLarge { .. })));
    }
}
