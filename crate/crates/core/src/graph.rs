//! Mutable constraint graph with reversible vertex deletion, parallel-edge
//! coalescing and degree-class buckets for choosing the next reduction.
//!
//! Incidence lists are doubly linked lists of half-edges stored in an arena;
//! each half-edge points at its twin in the other endpoint's list. Removing a
//! vertex unlinks the twins of its half-edges but leaves the removed nodes'
//! own `prev`/`next` pointers untouched, so restoring in LIFO order relinks
//! everything exactly where it was (the dancing-links trick).

use std::collections::VecDeque;

use crate::instance::Instance;
use crate::reduce::Kind;

const NIL: u32 = u32::MAX;
const NO_CLASS: u8 = u8::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Half {
    from: u32,
    to: u32,
    twin: u32,
    prev: u32,
    next: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Node {
    head: u32,
    prev: u32,
    next: u32,
    degree: u32,
    alive: bool,
}

/// Which reduction-vertex preference order to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Policy {
    /// Degree 0, 1, 2, then III on degree ≥5, 4, 3.
    A,
    /// Degree 0, 1, 2, then III on: degree ≥6; degree 5 with a neighbor of
    /// degree 3 or 4; degree 5 otherwise; degree 4 with a degree-3 neighbor;
    /// degree 4 otherwise; degree 3.
    B,
}

impl Policy {
    fn num_classes(self) -> usize {
        match self {
            Policy::A => 6,
            Policy::B => 9,
        }
    }
}

/// Result of contracting a degree-2 vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub x: usize,
    pub z: usize,
    /// The new edge `xz` coincided with an existing one and was coalesced.
    pub merged: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Buckets {
    policy: Policy,
    class: Vec<u8>,
    heads: Vec<u32>,
    prev: Vec<u32>,
    next: Vec<u32>,
}

impl Buckets {
    fn new(policy: Policy, slots: usize) -> Self {
        Buckets {
            policy,
            class: vec![NO_CLASS; slots],
            heads: vec![NIL; policy.num_classes()],
            prev: vec![NIL; slots],
            next: vec![NIL; slots],
        }
    }

    fn unlink(&mut self, v: usize) {
        let c = self.class[v];
        if c == NO_CLASS {
            return;
        }
        let (p, n) = (self.prev[v], self.next[v]);
        if p == NIL {
            self.heads[c as usize] = n;
        } else {
            self.next[p as usize] = n;
        }
        if n != NIL {
            self.prev[n as usize] = p;
        }
        self.class[v] = NO_CLASS;
    }

    fn push(&mut self, v: usize, c: u8) {
        let h = self.heads[c as usize];
        self.prev[v] = NIL;
        self.next[v] = h;
        if h != NIL {
            self.prev[h as usize] = v as u32;
        }
        self.heads[c as usize] = v as u32;
        self.class[v] = c;
    }

    fn members(&self, c: u8) -> Vec<usize> {
        let mut out = Vec::new();
        let mut v = self.heads[c as usize];
        while v != NIL {
            out.push(v as usize);
            v = self.next[v as usize];
        }
        out
    }
}

/// Simple undirected graph over vertex slots `0..num_slots()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutableGraph {
    nodes: Vec<Node>,
    halves: Vec<Half>,
    first: u32,
    live: usize,
    edges: usize,
    mark: Vec<u32>,
    buckets: Option<Buckets>,
}

impl MutableGraph {
    /// `n` isolated vertices.
    pub fn new(n: usize) -> Self {
        let nodes = (0..n)
            .map(|v| Node {
                head: NIL,
                prev: if v == 0 { NIL } else { v as u32 - 1 },
                next: if v + 1 == n { NIL } else { v as u32 + 1 },
                degree: 0,
                alive: true,
            })
            .collect();
        MutableGraph {
            nodes,
            halves: Vec::new(),
            first: if n == 0 { NIL } else { 0 },
            live: n,
            edges: 0,
            mark: vec![NIL; n],
            buckets: None,
        }
    }

    /// Simple graph from edge pairs; panics on loops or repeated pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = MutableGraph::new(n);
        for &(u, v) in edges {
            assert!(g.add_edge(u, v), "edge {u}-{v} is a loop or repeated");
        }
        g
    }

    /// The constraint graph of `inst`; dead slots stay dead.
    pub fn from_instance(inst: &Instance) -> Self {
        let n = inst.num_slots();
        let mut g = MutableGraph::new(n);
        for v in (0..n).rev() {
            if !inst.is_live(v) {
                g.unlink_node(v);
                g.nodes[v].alive = false;
                g.live -= 1;
            }
        }
        for ((u, v), _) in inst.edges() {
            g.push_edge(u, v);
        }
        g
    }

    pub fn num_slots(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.live
    }

    pub fn num_edges(&self) -> usize {
        self.edges
    }

    pub fn is_live(&self, v: usize) -> bool {
        self.nodes.get(v).is_some_and(|n| n.alive)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nodes[v].degree as usize
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Live vertices in list order.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        let mut v = self.first;
        std::iter::from_fn(move || {
            if v == NIL {
                return None;
            }
            let cur = v as usize;
            v = self.nodes[cur].next;
            Some(cur)
        })
    }

    /// Neighbors of `v` in incidence-list order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let mut h = self.nodes[v].head;
        std::iter::from_fn(move || {
            if h == NIL {
                return None;
            }
            let half = &self.halves[h as usize];
            h = half.next;
            Some(half.to as usize)
        })
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        self.neighbors(a).any(|x| x == b)
    }

    /// Edge list with `u < v`, sorted.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .vertices()
            .flat_map(|u| self.neighbors(u).filter(move |&v| u < v).map(move |v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Add edge `uv` unless it is a loop or already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v || !self.is_live(u) || !self.is_live(v) || self.has_edge(u, v) {
            return false;
        }
        self.push_edge(u, v);
        self.refresh(u, true);
        self.refresh(v, true);
        true
    }

    /// Delete `y` and its incident edges; returns the former neighbors.
    /// Reversible with [`MutableGraph::restore_vertex`] in LIFO order.
    pub fn remove_vertex(&mut self, y: usize) -> Vec<usize> {
        assert!(self.is_live(y), "vertex {y} is not live");
        let mut nbrs = Vec::with_capacity(self.degree(y));
        let mut h = self.nodes[y].head;
        while h != NIL {
            let half = self.halves[h as usize].clone();
            self.unlink_half(half.twin);
            self.nodes[half.to as usize].degree -= 1;
            nbrs.push(half.to as usize);
            h = half.next;
        }
        self.edges -= nbrs.len();
        self.unlink_node(y);
        self.nodes[y].alive = false;
        self.live -= 1;
        self.refresh(y, true);
        for &x in &nbrs {
            self.refresh(x, true);
        }
        nbrs
    }

    /// Undo the most recent [`MutableGraph::remove_vertex`] still in effect.
    pub fn restore_vertex(&mut self, y: usize) {
        assert!(!self.nodes[y].alive, "vertex {y} is live");
        self.relink_node(y);
        self.nodes[y].alive = true;
        self.live += 1;
        let mut hs = Vec::with_capacity(self.degree(y));
        let mut h = self.nodes[y].head;
        while h != NIL {
            hs.push(h);
            h = self.halves[h as usize].next;
        }
        for &h in hs.iter().rev() {
            let half = self.halves[h as usize].clone();
            self.relink_half(half.twin);
            self.nodes[half.to as usize].degree += 1;
        }
        self.edges += hs.len();
        self.refresh(y, true);
        for &h in hs.iter().rev() {
            let to = self.halves[h as usize].to as usize;
            self.refresh(to, true);
        }
    }

    /// Remove the most recently added edge, which must be `uv`.
    pub fn remove_last_edge(&mut self, u: usize, v: usize) {
        let len = self.halves.len();
        assert!(len >= 2, "no edge to remove");
        let (a, b) = (len - 2, len - 1);
        let (ha, hb) = (&self.halves[a], &self.halves[b]);
        assert!(
            ha.twin as usize == b
                && ((ha.from as usize, hb.from as usize) == (u, v)
                    || (ha.from as usize, hb.from as usize) == (v, u)),
            "last edge is not {u}-{v}"
        );
        self.unlink_half(a as u32);
        self.unlink_half(b as u32);
        self.nodes[u].degree -= 1;
        self.nodes[v].degree -= 1;
        self.halves.truncate(a);
        self.edges -= 1;
        self.refresh(u, true);
        self.refresh(v, true);
    }

    /// Graph-only II-reduction: delete `y` and join its two neighbors,
    /// coalescing the new edge with an existing one. Not reversible.
    pub fn contract(&mut self, y: usize) -> Contraction {
        assert_eq!(self.degree(y), 2, "contracting vertex {y} of degree != 2");
        let nbrs = self.remove_vertex(y);
        let (x, z) = (nbrs[0], nbrs[1]);
        assert_ne!(x, z, "vertex {y} has a doubled edge");
        self.push_edge(x, z);
        self.refresh(x, true);
        self.refresh(z, true);
        let merged = self.coalesce_parallel(x, |_, _| {}) > 0;
        Contraction { x, z, merged }
    }

    /// Merge parallel edges at `v`, calling `on_merge(v, u)` once per removed
    /// duplicate so callers can sum the corresponding score tables. Returns
    /// the number of merges.
    pub fn coalesce_parallel(&mut self, v: usize, mut on_merge: impl FnMut(usize, usize)) -> usize {
        let mut merged = Vec::new();
        let mut h = self.nodes[v].head;
        while h != NIL {
            let half = self.halves[h as usize].clone();
            let u = half.to as usize;
            if self.mark[u] == NIL {
                self.mark[u] = h;
            } else {
                self.unlink_half(h);
                self.unlink_half(half.twin);
                self.nodes[v].degree -= 1;
                self.nodes[u].degree -= 1;
                self.edges -= 1;
                on_merge(v, u);
                merged.push(u);
            }
            h = half.next;
        }
        let mut h = self.nodes[v].head;
        while h != NIL {
            let half = &self.halves[h as usize];
            self.mark[half.to as usize] = NIL;
            h = half.next;
        }
        for &u in &merged {
            self.mark[u] = NIL;
        }
        if !merged.is_empty() {
            self.refresh(v, true);
            for &u in &merged {
                self.refresh(u, true);
            }
        }
        merged.len()
    }

    /// Preference class of `v` under `policy`; lower is preferred.
    pub fn preference_class(&self, v: usize, policy: Policy) -> u8 {
        let d = self.degree(v);
        match policy {
            Policy::A => match d {
                0..=2 => d as u8,
                3 => 5,
                4 => 4,
                _ => 3,
            },
            Policy::B => match d {
                0..=2 => d as u8,
                3 => 8,
                4 => {
                    if self.neighbors(v).any(|u| self.degree(u) == 3) {
                        6
                    } else {
                        7
                    }
                }
                5 => {
                    if self.neighbors(v).any(|u| matches!(self.degree(u), 3 | 4)) {
                        4
                    } else {
                        5
                    }
                }
                _ => 3,
            },
        }
    }

    /// Highest-preference vertex under `policy` and the reduction its degree
    /// calls for, or `None` once the graph is empty. LIFO within a class.
    pub fn pick_reduction_vertex(&mut self, policy: Policy) -> Option<(usize, Kind)> {
        if self.buckets.as_ref().is_none_or(|b| b.policy != policy) {
            self.build_buckets(policy);
        }
        let b = self.buckets.as_ref().expect("buckets built");
        let v = b.heads.iter().copied().find(|&h| h != NIL)? as usize;
        Some((v, Kind::for_degree(self.degree(v))))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.nodes.len()];
        let mut out = Vec::new();
        for s in 0..self.nodes.len() {
            if !self.nodes[s].alive || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Full rescan of every structural invariant.
    pub fn check_consistency(&self) -> Result<(), String> {
        let mut live = 0;
        let mut half_count = 0;
        let mut prev = NIL;
        let mut v = self.first;
        while v != NIL {
            let node = &self.nodes[v as usize];
            if !node.alive {
                return Err(format!("dead vertex {v} in vertex list"));
            }
            if node.prev != prev {
                return Err(format!("vertex list back-link broken at {v}"));
            }
            live += 1;
            prev = v;
            v = node.next;
        }
        if live != self.live || live != self.nodes.iter().filter(|n| n.alive).count() {
            return Err("live vertex count mismatch".into());
        }
        for v in self.vertices() {
            let mut seen = std::collections::HashSet::new();
            let mut deg = 0;
            let mut prev = NIL;
            let mut h = self.nodes[v].head;
            while h != NIL {
                let half = &self.halves[h as usize];
                let twin = &self.halves[half.twin as usize];
                if half.from as usize != v || half.prev != prev {
                    return Err(format!("incidence list of {v} is corrupt"));
                }
                if twin.twin != h || twin.from != half.to || twin.to as usize != v {
                    return Err(format!("twin link broken on edge {v}-{}", half.to));
                }
                if !self.nodes[half.to as usize].alive {
                    return Err(format!("edge {v}-{} reaches a dead vertex", half.to));
                }
                if half.to as usize == v || !seen.insert(half.to) {
                    return Err(format!("vertex {v} has a loop or parallel edge"));
                }
                deg += 1;
                prev = h;
                h = half.next;
            }
            if deg != self.degree(v) {
                return Err(format!("cached degree of {v} is stale"));
            }
            half_count += deg;
        }
        if half_count != 2 * self.edges {
            return Err("edge count mismatch".into());
        }
        if let Some(b) = &self.buckets {
            for c in 0..b.heads.len() as u8 {
                for v in b.members(c) {
                    if !self.is_live(v) || b.class[v] != c {
                        return Err(format!("vertex {v} misfiled in bucket {c}"));
                    }
                }
            }
            for v in self.vertices() {
                let want = self.preference_class(v, b.policy);
                if b.class[v] != want || !b.members(want).contains(&v) {
                    return Err(format!("vertex {v} should be in bucket {want}"));
                }
            }
        }
        Ok(())
    }

    fn build_buckets(&mut self, policy: Policy) {
        let mut b = Buckets::new(policy, self.nodes.len());
        let verts: Vec<usize> = self.vertices().collect();
        for v in verts {
            b.push(v, self.preference_class(v, policy));
        }
        self.buckets = Some(b);
    }

    /// Re-file `v` after a change at `v`; under policy B also re-file its
    /// neighbors, whose class depends on `v`'s degree.
    fn refresh(&mut self, v: usize, moved: bool) {
        let Some(policy) = self.buckets.as_ref().map(|b| b.policy) else {
            return;
        };
        self.refile(v, moved);
        if policy == Policy::B && self.nodes[v].alive {
            let nbrs: Vec<usize> = self.neighbors(v).collect();
            for u in nbrs {
                if self.degree(u) <= 5 {
                    self.refile(u, false);
                }
            }
        }
    }

    fn refile(&mut self, v: usize, moved: bool) {
        let alive = self.nodes[v].alive;
        let class = if alive {
            let policy = self.buckets.as_ref().expect("buckets").policy;
            self.preference_class(v, policy)
        } else {
            NO_CLASS
        };
        let b = self.buckets.as_mut().expect("buckets");
        if b.class[v] == class && !moved {
            return;
        }
        b.unlink(v);
        if class != NO_CLASS {
            b.push(v, class);
        }
    }

    fn push_edge(&mut self, u: usize, v: usize) {
        let a = self.halves.len() as u32;
        let b = a + 1;
        for (h, from, to, twin) in [(a, u, v, b), (b, v, u, a)] {
            let head = self.nodes[from].head;
            self.halves.push(Half {
                from: from as u32,
                to: to as u32,
                twin,
                prev: NIL,
                next: head,
            });
            if head != NIL {
                self.halves[head as usize].prev = h;
            }
            self.nodes[from].head = h;
            self.nodes[from].degree += 1;
        }
        self.edges += 1;
    }

    fn unlink_half(&mut self, h: u32) {
        let Half {
            from, prev, next, ..
        } = self.halves[h as usize];
        if prev == NIL {
            self.nodes[from as usize].head = next;
        } else {
            self.halves[prev as usize].next = next;
        }
        if next != NIL {
            self.halves[next as usize].prev = prev;
        }
    }

    fn relink_half(&mut self, h: u32) {
        let Half {
            from, prev, next, ..
        } = self.halves[h as usize];
        if prev == NIL {
            self.nodes[from as usize].head = h;
        } else {
            self.halves[prev as usize].next = h;
        }
        if next != NIL {
            self.halves[next as usize].prev = h;
        }
    }

    fn unlink_node(&mut self, v: usize) {
        let (p, n) = (self.nodes[v].prev, self.nodes[v].next);
        if p == NIL {
            self.first = n;
        } else {
            self.nodes[p as usize].next = n;
        }
        if n != NIL {
            self.nodes[n as usize].prev = p;
        }
    }

    fn relink_node(&mut self, v: usize) {
        let (p, n) = (self.nodes[v].prev, self.nodes[v].next);
        if p == NIL {
            self.first = v as u32;
        } else {
            self.nodes[p as usize].next = v as u32;
        }
        if n != NIL {
            self.nodes[n as usize].prev = v as u32;
        }
    }
}
