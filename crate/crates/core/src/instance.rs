//! Max (r,2)-CSP instances, assignments and exact scoring.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Exact score value. All arithmetic on scores is checked.
pub type Score = i64;

/// A color in `0..r`.
pub type Color = usize;

#[inline]
pub(crate) fn add(a: Score, b: Score) -> Result<Score> {
    a.checked_add(b).ok_or(Error::Overflow)
}

#[inline]
pub(crate) fn sub(a: Score, b: Score) -> Result<Score> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

/// Transpose an `r x r` row-major table.
pub fn transpose(table: &[Score], r: usize) -> Vec<Score> {
    let mut out = vec![0; r * r];
    for a in 0..r {
        for b in 0..r {
            out[b * r + a] = table[a * r + b];
        }
    }
    out
}

/// A Max (r,2)-CSP instance: a niladic constant, one monadic table per live
/// vertex and one dyadic table per edge of a simple constraint graph.
///
/// Vertex ids are slots `0..num_slots()`; reductions kill slots in place and
/// reversal revives them, so ids never shift. Dyadic tables are stored once
/// per unordered pair under the key `(min, max)`, row-major and indexed by
/// `(color of min, color of max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    r: usize,
    niladic: Score,
    monadic: Vec<Vec<Score>>,
    alive: Vec<bool>,
    edges: BTreeMap<(usize, usize), Vec<Score>>,
}

impl Instance {
    /// `n` live vertices with all-zero monadic tables, no edges, niladic 0.
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::DomainTooSmall(r));
        }
        Ok(Instance {
            r,
            niladic: 0,
            monadic: vec![vec![0; r]; n],
            alive: vec![true; n],
            edges: BTreeMap::new(),
        })
    }

    /// Assemble an instance without any checks. Used for diagnostics; run
    /// [`validate_instance`] on the result before solving it.
    pub fn from_raw_parts(
        r: usize,
        niladic: Score,
        monadic: Vec<Vec<Score>>,
        alive: Vec<bool>,
        edges: BTreeMap<(usize, usize), Vec<Score>>,
    ) -> Self {
        Instance {
            r,
            niladic,
            monadic,
            alive,
            edges,
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Number of vertex slots, live or not.
    pub fn num_slots(&self) -> usize {
        self.alive.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn niladic(&self) -> Score {
        self.niladic
    }

    pub fn set_niladic(&mut self, value: Score) {
        self.niladic = value;
    }

    pub fn add_niladic(&mut self, value: Score) -> Result<()> {
        self.niladic = add(self.niladic, value)?;
        Ok(())
    }

    pub fn is_live(&self, v: usize) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter_map(|(v, &a)| a.then_some(v))
    }

    pub fn monadic(&self, v: usize) -> &[Score] {
        &self.monadic[v]
    }

    pub(crate) fn monadic_mut(&mut self, v: usize) -> &mut Vec<Score> {
        &mut self.monadic[v]
    }

    pub fn set_monadic(&mut self, v: usize, table: Vec<Score>) -> Result<()> {
        self.check_vertex(v)?;
        if table.len() != self.r {
            return Err(Error::TableLength {
                what: format!("vertex {v}"),
                got: table.len(),
                expected: self.r,
            });
        }
        self.monadic[v] = table;
        Ok(())
    }

    pub fn add_to_monadic(&mut self, v: usize, color: Color, value: Score) -> Result<()> {
        self.check_vertex(v)?;
        let cell = &mut self.monadic[v][color];
        *cell = add(*cell, value)?;
        Ok(())
    }

    /// Stored table of edge `{u, v}` in `(min, max)` orientation.
    pub fn edge(&self, u: usize, v: usize) -> Option<&[Score]> {
        self.edges.get(&(u.min(v), u.max(v))).map(|t| t.as_slice())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains_key(&(u.min(v), u.max(v)))
    }

    /// `s_uv(cu, cv)`, respecting storage orientation.
    pub fn dyadic(&self, u: usize, v: usize, cu: Color, cv: Color) -> Option<Score> {
        let r = self.r;
        if u < v {
            self.edges.get(&(u, v)).map(|t| t[cu * r + cv])
        } else {
            self.edges.get(&(v, u)).map(|t| t[cv * r + cu])
        }
    }

    /// Edges as `((u, v), table)` with `u < v`, in ascending key order.
    pub fn edges(&self) -> impl Iterator<Item = ((usize, usize), &[Score])> + '_ {
        self.edges.iter().map(|(&k, t)| (k, t.as_slice()))
    }

    /// Add a new edge whose table is given in `(u, v)` orientation.
    pub fn add_edge(&mut self, u: usize, v: usize, table: Vec<Score>) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        if table.len() != self.r * self.r {
            return Err(Error::TableLength {
                what: format!("edge {u}-{v}"),
                got: table.len(),
                expected: self.r * self.r,
            });
        }
        let key = (u.min(v), u.max(v));
        if self.edges.contains_key(&key) {
            return Err(Error::DuplicateEdge(key.0, key.1));
        }
        let table = if u < v { table } else { transpose(&table, self.r) };
        self.edges.insert(key, table);
        Ok(())
    }

    /// Add `value` to `s_uv(cu, cv)`, creating an all-zero table if needed.
    pub fn add_to_dyadic(
        &mut self,
        u: usize,
        v: usize,
        cu: Color,
        cv: Color,
        value: Score,
    ) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::LoopEdge(u));
        }
        let r = self.r;
        let (key, idx) = if u < v {
            ((u, v), cu * r + cv)
        } else {
            ((v, u), cv * r + cu)
        };
        let table = self.edges.entry(key).or_insert_with(|| vec![0; r * r]);
        table[idx] = add(table[idx], value)?;
        Ok(())
    }

    pub(crate) fn kill_vertex(&mut self, v: usize) {
        self.alive[v] = false;
    }

    pub(crate) fn revive_vertex(&mut self, v: usize) {
        self.alive[v] = true;
    }

    pub(crate) fn remove_edge_table(&mut self, u: usize, v: usize) -> Option<Vec<Score>> {
        self.edges.remove(&(u.min(v), u.max(v)))
    }

    /// Insert or replace a table stored in `(min, max)` orientation.
    pub(crate) fn put_edge_table(&mut self, u: usize, v: usize, table: Vec<Score>) {
        self.edges.insert((u.min(v), u.max(v)), table);
    }

    /// Sum of absolute values of every input score. No score produced by the
    /// solvers exceeds this in absolute value.
    pub fn magnitude_bound(&self) -> u128 {
        let abs = |s: &Score| s.unsigned_abs() as u128;
        let mut total = abs(&self.niladic);
        for v in self.vertices() {
            total += self.monadic[v].iter().map(abs).sum::<u128>();
        }
        for t in self.edges.values() {
            total += t.iter().map(abs).sum::<u128>();
        }
        total
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.alive.len() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.alive.len(),
            });
        }
        if !self.alive[v] {
            return Err(Error::DeadVertex(v));
        }
        Ok(())
    }
}

/// Colors for a set of vertices, indexed by vertex id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    colors: Vec<Option<Color>>,
}

impl Assignment {
    pub fn with_capacity(n: usize) -> Self {
        Assignment {
            colors: vec![None; n],
        }
    }

    pub fn from_colors(colors: Vec<Color>) -> Self {
        Assignment {
            colors: colors.into_iter().map(Some).collect(),
        }
    }

    pub fn get(&self, v: usize) -> Option<Color> {
        self.colors.get(v).copied().flatten()
    }

    pub fn set(&mut self, v: usize, c: Color) {
        if v >= self.colors.len() {
            self.colors.resize(v + 1, None);
        }
        self.colors[v] = Some(c);
    }

    pub fn is_total_for(&self, inst: &Instance) -> bool {
        inst.vertices().all(|v| self.get(v).is_some())
    }

    /// Colors in vertex order; unassigned slots read as 0.
    pub fn to_colors(&self) -> Vec<Color> {
        self.colors.iter().map(|c| c.unwrap_or(0)).collect()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }
}

/// `s_∅ + Σ_v s_v(φ(v)) + Σ_uv s_uv(φ(u), φ(v))` over the live part of `inst`.
pub fn score_assignment(inst: &Instance, phi: &Assignment) -> Result<Score> {
    let color = |v: usize| -> Result<Color> {
        let c = phi.get(v).ok_or(Error::MissingVertex(v))?;
        if c >= inst.r {
            return Err(Error::ColorOutOfRange {
                vertex: v,
                color: c,
                r: inst.r,
            });
        }
        Ok(c)
    };
    let mut total = inst.niladic;
    for v in inst.vertices() {
        total = add(total, inst.monadic[v][color(v)?])?;
    }
    for (&(u, v), table) in &inst.edges {
        total = add(total, table[color(u)? * inst.r + color(v)?])?;
    }
    Ok(total)
}

/// One broken [`Instance`] invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DomainTooSmall(usize),
    SlotCountMismatch { monadic: usize, alive: usize },
    MonadicLength { vertex: usize, len: usize },
    LoopEdge(usize),
    MisorientedEdge(usize, usize),
    EdgeToDeadVertex(usize, usize),
    DyadicLength { edge: (usize, usize), len: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DomainTooSmall(r) => write!(f, "domain size {r} < 2"),
            Violation::SlotCountMismatch { monadic, alive } => {
                write!(f, "{monadic} monadic tables for {alive} vertex slots")
            }
            Violation::MonadicLength { vertex, len } => {
                write!(f, "vertex {vertex} has a monadic table of length {len}")
            }
            Violation::LoopEdge(v) => write!(f, "loop at vertex {v}"),
            Violation::MisorientedEdge(u, v) => write!(f, "edge key ({u}, {v}) is not ascending"),
            Violation::EdgeToDeadVertex(u, v) => write!(f, "edge {u}-{v} touches a deleted vertex"),
            Violation::DyadicLength { edge, len } => {
                write!(f, "edge {}-{} has a table of length {len}", edge.0, edge.1)
            }
        }
    }
}

/// Check every [`Instance`] invariant; an empty report means valid.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let r = inst.r;
    if r < 2 {
        out.push(Violation::DomainTooSmall(r));
    }
    if inst.monadic.len() != inst.alive.len() {
        out.push(Violation::SlotCountMismatch {
            monadic: inst.monadic.len(),
            alive: inst.alive.len(),
        });
    }
    for v in inst.vertices() {
        match inst.monadic.get(v) {
            Some(t) if t.len() == r => {}
            Some(t) => out.push(Violation::MonadicLength {
                vertex: v,
                len: t.len(),
            }),
            None => out.push(Violation::MonadicLength { vertex: v, len: 0 }),
        }
    }
    for (&(u, v), table) in &inst.edges {
        if u == v {
            out.push(Violation::LoopEdge(u));
        } else if u > v {
            out.push(Violation::MisorientedEdge(u, v));
        }
        if !inst.is_live(u) || !inst.is_live(v) {
            out.push(Violation::EdgeToDeadVertex(u, v));
        }
        if table.len() != r * r {
            out.push(Violation::DyadicLength {
                edge: (u, v),
                len: table.len(),
            });
        }
    }
    out
}
