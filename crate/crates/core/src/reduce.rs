//! The score-preserving reductions 0, I, II and III, applied in place to an
//! instance and its constraint graph, and their exact reversal.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::MutableGraph;
use crate::instance::{add, transpose, Assignment, Color, Instance, Score};

/// Reduction type, determined by the degree of the reduced vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Zero,
    One,
    Two,
    Three,
}

impl Kind {
    pub fn for_degree(degree: usize) -> Kind {
        match degree {
            0 => Kind::Zero,
            1 => Kind::One,
            2 => Kind::Two,
            _ => Kind::Three,
        }
    }

    /// Whether `degree` is what this kind of reduction requires.
    pub fn accepts(self, degree: usize) -> bool {
        Kind::for_degree(degree) == self
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Zero => "0",
            Kind::One => "I",
            Kind::Two => "II",
            Kind::Three => "III",
        })
    }
}

/// Everything needed to undo one reduction and to color its vertex later.
/// Edge tables are kept exactly as stored, i.e. in `(min, max)` orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionRecord {
    Zero {
        y: usize,
        table_y: Vec<Score>,
        niladic: Score,
    },
    One {
        y: usize,
        x: usize,
        table_y: Vec<Score>,
        edge_xy: Vec<Score>,
        monadic_x: Vec<Score>,
    },
    Two {
        y: usize,
        x: usize,
        z: usize,
        table_y: Vec<Score>,
        edge_xy: Vec<Score>,
        edge_yz: Vec<Score>,
        /// Table of `xz` before the reduction, if that edge already existed.
        prior_xz: Option<Vec<Score>>,
    },
    Three {
        y: usize,
        color: Color,
        table_y: Vec<Score>,
        niladic: Score,
        /// `(x, stored table of xy, monadic table of x before)` per neighbor.
        neighbors: Vec<(usize, Vec<Score>, Vec<Score>)>,
    },
}

impl ReductionRecord {
    pub fn kind(&self) -> Kind {
        match self {
            ReductionRecord::Zero { .. } => Kind::Zero,
            ReductionRecord::One { .. } => Kind::One,
            ReductionRecord::Two { .. } => Kind::Two,
            ReductionRecord::Three { .. } => Kind::Three,
        }
    }

    pub fn vertex(&self) -> usize {
        match *self {
            ReductionRecord::Zero { y, .. }
            | ReductionRecord::One { y, .. }
            | ReductionRecord::Two { y, .. }
            | ReductionRecord::Three { y, .. } => y,
        }
    }

    /// `merged` flag of a II-reduction: the new `xz` edge joined an old one.
    pub fn merged(&self) -> bool {
        matches!(
            self,
            ReductionRecord::Two {
                prior_xz: Some(_),
                ..
            }
        )
    }
}

/// `s_ab(ca, cb)` read from a table stored in `(min(a,b), max(a,b))` order.
#[inline]
fn at(table: &[Score], a: usize, b: usize, ca: Color, cb: Color, r: usize) -> Score {
    if a < b {
        table[ca * r + cb]
    } else {
        table[cb * r + ca]
    }
}

/// Maximum of `f(F)` over colors, with the smallest maximizing color.
fn best_color(r: usize, mut f: impl FnMut(Color) -> Result<Score>) -> Result<(Score, Color)> {
    let mut best = (f(0)?, 0);
    for c in 1..r {
        let v = f(c)?;
        if v > best.0 {
            best = (v, c);
        }
    }
    Ok(best)
}

fn expect_degree(g: &MutableGraph, y: usize, kind: Kind) -> Result<()> {
    if !g.is_live(y) {
        return Err(Error::DeadVertex(y));
    }
    let degree = g.degree(y);
    if kind.accepts(degree) {
        Ok(())
    } else {
        Err(Error::DegreeMismatch {
            kind,
            vertex: y,
            degree,
        })
    }
}

fn edge_table(inst: &Instance, u: usize, v: usize) -> Result<Vec<Score>> {
    inst.edge(u, v)
        .map(<[Score]>::to_vec)
        .ok_or_else(|| Error::Invariant(format!("graph edge {u}-{v} has no score table")))
}

/// Reduction 0: delete isolated `y`, adding `max_C s_y(C)` to the niladic score.
pub fn reduce0(inst: &mut Instance, g: &mut MutableGraph, y: usize) -> Result<ReductionRecord> {
    expect_degree(g, y, Kind::Zero)?;
    let table_y = inst.monadic(y).to_vec();
    let (best, _) = best_color(inst.r(), |c| Ok(table_y[c]))?;
    let niladic = inst.niladic();
    inst.set_niladic(add(niladic, best)?);
    inst.kill_vertex(y);
    g.remove_vertex(y);
    Ok(ReductionRecord::Zero {
        y,
        table_y,
        niladic,
    })
}

/// Reduction I: fold pendant `y` into its neighbor `x` via
/// `s'_x(C) = s_x(C) + max_D {s_xy(C, D) + s_y(D)}`.
pub fn reduce1(inst: &mut Instance, g: &mut MutableGraph, y: usize) -> Result<ReductionRecord> {
    expect_degree(g, y, Kind::One)?;
    let r = inst.r();
    let x = g.neighbors(y).next().expect("degree 1");
    let table_y = inst.monadic(y).to_vec();
    let edge_xy = edge_table(inst, x, y)?;
    let monadic_x = inst.monadic(x).to_vec();
    let mut new_x = Vec::with_capacity(r);
    for (c, &own) in monadic_x.iter().enumerate() {
        let (best, _) = best_color(r, |d| add(at(&edge_xy, x, y, c, d, r), table_y[d]))?;
        new_x.push(add(own, best)?);
    }
    *inst.monadic_mut(x) = new_x;
    inst.remove_edge_table(x, y);
    inst.kill_vertex(y);
    g.remove_vertex(y);
    Ok(ReductionRecord::One {
        y,
        x,
        table_y,
        edge_xy,
        monadic_x,
    })
}

/// Reduction II: replace the path `x - y - z` by the edge `xz` with
/// `s'_xz(C, D) = [s_xz(C, D)] + max_F {s_xy(C, F) + s_yz(F, D) + s_y(F)}`,
/// summing into an existing `xz` table when there is one.
pub fn reduce2(inst: &mut Instance, g: &mut MutableGraph, y: usize) -> Result<ReductionRecord> {
    expect_degree(g, y, Kind::Two)?;
    let r = inst.r();
    let nbrs: Vec<usize> = g.neighbors(y).collect();
    let (x, z) = (nbrs[0], nbrs[1]);
    if x == z {
        return Err(Error::RepeatedNeighbor(y));
    }
    let table_y = inst.monadic(y).to_vec();
    let edge_xy = edge_table(inst, x, y)?;
    let edge_yz = edge_table(inst, y, z)?;
    let prior_xz = inst.edge(x, z).map(<[Score]>::to_vec);

    // New table in (min(x,z), max(x,z)) orientation.
    let (lo, hi) = (x.min(z), x.max(z));
    let mut table = vec![0; r * r];
    for c in 0..r {
        for d in 0..r {
            let (best, _) = best_color(r, |f| {
                add(
                    add(at(&edge_xy, x, y, c, f, r), at(&edge_yz, y, z, f, d, r))?,
                    table_y[f],
                )
            })?;
            table[c * r + d] = best;
        }
    }
    if lo != x {
        table = transpose(&table, r);
    }
    if let Some(prior) = &prior_xz {
        for (t, p) in table.iter_mut().zip(prior) {
            *t = add(*t, *p)?;
        }
    }

    inst.remove_edge_table(x, y);
    inst.remove_edge_table(y, z);
    inst.kill_vertex(y);
    g.remove_vertex(y);
    if prior_xz.is_none() {
        g.add_edge(x, z);
    }
    inst.put_edge_table(lo, hi, table);
    Ok(ReductionRecord::Two {
        y,
        x,
        z,
        table_y,
        edge_xy,
        edge_yz,
        prior_xz,
    })
}

/// Reduction III with color `color` on `y` (degree ≥ 3): `s_∅ += s_y(C)` and
/// each neighbor gets `s'_x(D) = s_x(D) + s_xy(D, C)`.
pub fn reduce3(
    inst: &mut Instance,
    g: &mut MutableGraph,
    y: usize,
    color: Color,
) -> Result<ReductionRecord> {
    expect_degree(g, y, Kind::Three)?;
    branch_on_vertex(inst, g, y, color)
}

/// The III-reduction formula applied at any degree. Only the induced-forest
/// solver uses this, for vertices outside the forest whose degree has dropped.
pub fn branch_on_vertex(
    inst: &mut Instance,
    g: &mut MutableGraph,
    y: usize,
    color: Color,
) -> Result<ReductionRecord> {
    if !g.is_live(y) {
        return Err(Error::DeadVertex(y));
    }
    let r = inst.r();
    if color >= r {
        return Err(Error::ColorOutOfRange { vertex: y, color, r });
    }
    let table_y = inst.monadic(y).to_vec();
    let niladic = inst.niladic();
    let new_niladic = add(niladic, table_y[color])?;
    let mut neighbors = Vec::with_capacity(g.degree(y));
    let mut updated = Vec::with_capacity(g.degree(y));
    for x in g.neighbors(y) {
        let edge = edge_table(inst, x, y)?;
        let old = inst.monadic(x).to_vec();
        let new = (0..r)
            .map(|d| add(old[d], at(&edge, x, y, d, color, r)))
            .collect::<Result<Vec<_>>>()?;
        updated.push(new);
        neighbors.push((x, edge, old));
    }
    inst.set_niladic(new_niladic);
    for ((x, _, _), new) in neighbors.iter().zip(updated) {
        *inst.monadic_mut(*x) = new;
        inst.remove_edge_table(*x, y);
    }
    inst.kill_vertex(y);
    g.remove_vertex(y);
    Ok(ReductionRecord::Three {
        y,
        color,
        table_y,
        niladic,
        neighbors,
    })
}

/// Apply the reduction its degree calls for; III uses `color`.
pub fn reduce(
    inst: &mut Instance,
    g: &mut MutableGraph,
    y: usize,
    kind: Kind,
    color: Color,
) -> Result<ReductionRecord> {
    match kind {
        Kind::Zero => reduce0(inst, g, y),
        Kind::One => reduce1(inst, g, y),
        Kind::Two => reduce2(inst, g, y),
        Kind::Three => reduce3(inst, g, y, color),
    }
}

/// Undo `rec`, which must be the most recent reduction still in effect.
pub fn reverse(inst: &mut Instance, g: &mut MutableGraph, rec: &ReductionRecord) -> Result<()> {
    let y = rec.vertex();
    if inst.is_live(y) || g.is_live(y) {
        return Err(Error::StaleRecord(y));
    }
    match rec {
        ReductionRecord::Zero { niladic, .. } => {
            inst.set_niladic(*niladic);
        }
        ReductionRecord::One {
            x,
            edge_xy,
            monadic_x,
            ..
        } => {
            if !g.is_live(*x) {
                return Err(Error::StaleRecord(y));
            }
            *inst.monadic_mut(*x) = monadic_x.clone();
            inst.put_edge_table(*x, y, edge_xy.clone());
        }
        ReductionRecord::Two {
            x,
            z,
            edge_xy,
            edge_yz,
            prior_xz,
            ..
        } => {
            if !g.is_live(*x) || !g.is_live(*z) || !inst.has_edge(*x, *z) {
                return Err(Error::StaleRecord(y));
            }
            match prior_xz {
                Some(t) => inst.put_edge_table(*x, *z, t.clone()),
                None => {
                    g.remove_last_edge(*x, *z);
                    inst.remove_edge_table(*x, *z);
                }
            }
            inst.put_edge_table(*x, y, edge_xy.clone());
            inst.put_edge_table(y, *z, edge_yz.clone());
        }
        ReductionRecord::Three {
            niladic, neighbors, ..
        } => {
            if neighbors.iter().any(|(x, _, _)| !g.is_live(*x)) {
                return Err(Error::StaleRecord(y));
            }
            inst.set_niladic(*niladic);
            for (x, edge, old) in neighbors {
                *inst.monadic_mut(*x) = old.clone();
                inst.put_edge_table(*x, y, edge.clone());
            }
        }
    }
    inst.revive_vertex(y);
    g.restore_vertex(y);
    Ok(())
}

/// Optimal color for the vertex of a 0/I/II-reduction given colors for the
/// vertices it was folded into. Ties go to the smallest color.
pub fn extend_coloring(rec: &ReductionRecord, phi: &Assignment) -> Result<Color> {
    let color = |v: usize| phi.get(v).ok_or(Error::MissingVertex(v));
    match rec {
        ReductionRecord::Zero { table_y, .. } => {
            Ok(best_color(table_y.len(), |c| Ok(table_y[c]))?.1)
        }
        ReductionRecord::One {
            y,
            x,
            table_y,
            edge_xy,
            ..
        } => {
            let r = table_y.len();
            let cx = color(*x)?;
            Ok(best_color(r, |f| add(at(edge_xy, *x, *y, cx, f, r), table_y[f]))?.1)
        }
        ReductionRecord::Two {
            y,
            x,
            z,
            table_y,
            edge_xy,
            edge_yz,
            ..
        } => {
            let r = table_y.len();
            let (cx, cz) = (color(*x)?, color(*z)?);
            Ok(best_color(r, |f| {
                add(
                    add(at(edge_xy, *x, *y, cx, f, r), at(edge_yz, *y, *z, f, cz, r))?,
                    table_y[f],
                )
            })?
            .1)
        }
        ReductionRecord::Three { .. } => Err(Error::NotExtendable),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::encode_max_cut;
    use crate::oracle::brute_force_solve;

    fn setup(n: usize, edges: &[(usize, usize)]) -> (Instance, MutableGraph) {
        let inst = encode_max_cut(n, edges, None).unwrap();
        let g = MutableGraph::from_instance(&inst);
        (inst, g)
    }

    #[test]
    fn zero_reduction() {
        let mut inst = Instance::new(1, 2).unwrap();
        inst.set_monadic(0, vec![3, 7]).unwrap();
        let mut g = MutableGraph::from_instance(&inst);
        let before = (inst.clone(), g.clone());
        let rec = reduce0(&mut inst, &mut g, 0).unwrap();
        assert_eq!(inst.niladic(), 7);
        assert_eq!(extend_coloring(&rec, &Assignment::default()), Ok(1));
        reverse(&mut inst, &mut g, &rec).unwrap();
        assert_eq!((inst, g), before);

        let mut inst = Instance::new(1, 2).unwrap();
        inst.set_monadic(0, vec![-2, -9]).unwrap();
        let mut g = MutableGraph::from_instance(&inst);
        reduce0(&mut inst, &mut g, 0).unwrap();
        assert_eq!(inst.niladic(), -2);
    }

    #[test]
    fn one_reduction_on_pendant_cut_edge() {
        let (mut inst, mut g) = setup(2, &[(0, 1)]);
        let rec = reduce1(&mut inst, &mut g, 1).unwrap();
        assert_eq!(inst.monadic(0), &[1, 1]);
        assert_eq!(inst.num_edges(), 0);
        let phi = Assignment::from_colors(vec![0]);
        assert_eq!(extend_coloring(&rec, &phi), Ok(1));
    }

    #[test]
    fn one_reduction_constant_shift() {
        let mut inst = Instance::new(2, 2).unwrap();
        inst.set_monadic(0, vec![2, -1]).unwrap();
        inst.set_monadic(1, vec![5, 0]).unwrap();
        inst.add_edge(0, 1, vec![0; 4]).unwrap();
        let mut g = MutableGraph::from_instance(&inst);
        reduce1(&mut inst, &mut g, 1).unwrap();
        assert_eq!(inst.monadic(0), &[7, 4]);
    }

    #[test]
    fn two_reduction_on_path() {
        let (mut inst, mut g) = setup(3, &[(0, 1), (1, 2)]);
        let before = (inst.clone(), g.clone());
        let rec = reduce2(&mut inst, &mut g, 1).unwrap();
        assert_eq!(inst.edge(0, 2), Some(&[2, 1, 1, 2][..]));
        assert!(!rec.merged());
        let phi = Assignment::from_colors(vec![0, 0, 0]);
        assert_eq!(extend_coloring(&rec, &phi), Ok(1));
        reverse(&mut inst, &mut g, &rec).unwrap();
        assert_eq!((inst, g), before);
    }

    #[test]
    fn two_reduction_merges_into_existing_edge() {
        let (mut inst, mut g) = setup(3, &[(0, 1), (1, 2), (0, 2)]);
        let before = (inst.clone(), g.clone());
        let rec = reduce2(&mut inst, &mut g, 1).unwrap();
        assert_eq!(inst.edge(0, 2), Some(&[2, 2, 2, 2][..]));
        assert!(rec.merged());
        g.check_consistency().unwrap();
        assert_eq!(g.edge_list(), vec![(0, 2)]);
        reverse(&mut inst, &mut g, &rec).unwrap();
        assert_eq!((inst, g), before);
    }

    #[test]
    fn three_reduction_on_k4() {
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let (mut inst, mut g) = setup(4, &k4);
        let before = (inst.clone(), g.clone());
        let rec = reduce3(&mut inst, &mut g, 0, 0).unwrap();
        assert_eq!(inst.niladic(), 0);
        for x in 1..4 {
            assert_eq!(inst.monadic(x), &[0, 1]);
        }
        assert_eq!(extend_coloring(&rec, &Assignment::default()), Err(Error::NotExtendable));
        reverse(&mut inst, &mut g, &rec).unwrap();
        assert_eq!((inst.clone(), g.clone()), before);
        let rec = reduce3(&mut inst, &mut g, 0, 1).unwrap();
        reverse(&mut inst, &mut g, &rec).unwrap();
        assert_eq!((inst, g), before);
    }

    #[test]
    fn wrong_degree_is_rejected() {
        let (mut inst, mut g) = setup(3, &[(0, 1), (1, 2)]);
        assert!(matches!(
            reduce3(&mut inst, &mut g, 1, 0),
            Err(Error::DegreeMismatch { kind: Kind::Three, vertex: 1, degree: 2 })
        ));
        assert!(matches!(reduce0(&mut inst, &mut g, 0), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(reduce2(&mut inst, &mut g, 0), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn stale_record_is_rejected() {
        let (mut inst, mut g) = setup(3, &[(0, 1), (1, 2)]);
        let rec = reduce1(&mut inst, &mut g, 0).unwrap();
        reverse(&mut inst, &mut g, &rec).unwrap();
        assert_eq!(reverse(&mut inst, &mut g, &rec), Err(Error::StaleRecord(0)));
    }

    #[test]
    fn optimum_preserved_on_triangle_with_tail() {
        let (mut inst, mut g) = setup(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]);
        let opt = brute_force_solve(&inst).unwrap().0;
        let rec = reduce1(&mut inst, &mut g, 3).unwrap();
        assert_eq!(brute_force_solve(&inst).unwrap().0, opt);
        let rec2 = reduce2(&mut inst, &mut g, 1).unwrap();
        assert_eq!(brute_force_solve(&inst).unwrap().0, opt);
        reverse(&mut inst, &mut g, &rec2).unwrap();
        reverse(&mut inst, &mut g, &rec).unwrap();
    }
}
