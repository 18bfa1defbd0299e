//! Reduction-effect tables: one row per reduction type, one column per
//! resource it destroys, and the search depth it costs.

use std::fmt::Write;

use num_traits::Signed;

use super::Rational;
use crate::error::{Error, Result};

pub const COLUMNS: [&str; 5] = ["e", "d4", "d3", "d2", "d1"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectRow {
    pub label: String,
    /// Edges and vertices of degree 4, 3, 2, 1 destroyed.
    pub destroys: [Rational; 5],
    pub forces: Option<Rational>,
    pub depth: Rational,
}

impl EffectRow {
    /// Constraint coefficients: the destroys vector, then forces if present.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut c = self.destroys.to_vec();
        c.extend(self.forces.clone());
        c
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectTable {
    pub name: String,
    pub rows: Vec<EffectRow>,
}

impl EffectTable {
    pub fn has_forces(&self) -> bool {
        self.rows.first().is_some_and(|r| r.forces.is_some())
    }

    /// Number of LP constraints: the edge equality plus one per other column.
    pub fn num_constraints(&self) -> usize {
        5 + usize::from(self.has_forces())
    }

    pub fn row(&self, label: &str) -> Option<&EffectRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("label");
        for c in COLUMNS {
            out.push('\t');
            out.push_str(c);
        }
        if self.has_forces() {
            out.push_str("\tforces");
        }
        out.push_str("\tdepth\n");
        for row in &self.rows {
            out.push_str(&row.label);
            for v in row.coefficients() {
                write!(out, "\t{v}").unwrap();
            }
            writeln!(out, "\t{}", row.depth).unwrap();
        }
        out
    }
}

fn q(s: &str) -> Rational {
    s.parse().expect("valid rational literal")
}

/// `entries` is "e d4 d3 d2 d1 [forces] depth", all rational.
fn row(label: &str, entries: &str) -> EffectRow {
    let v: Vec<Rational> = entries.split_whitespace().map(q).collect();
    let (destroys, forces) = match v.len() {
        6 => (&v[..5], None),
        7 => (&v[..5], Some(v[5].clone())),
        n => panic!("row {label} has {n} entries"),
    };
    EffectRow {
        label: label.to_string(),
        destroys: destroys.to_vec().try_into().expect("five entries"),
        forces,
        depth: v.last().expect("depth").clone(),
    }
}

fn table(name: &str, rows: &[(&str, &str)]) -> EffectTable {
    EffectTable {
        name: name.to_string(),
        rows: rows.iter().map(|&(l, s)| row(l, s)).collect(),
    }
}

/// Algorithm A: III-reductions on degree-4 and degree-3 vertices (labels give
/// the numbers of neighbors of degree 4, 3, 2, 1), II, and half-edges.
pub fn table_a() -> EffectTable {
    table(
        "A",
        &[
            ("4|4000", "4 5 -4 0 0 1"),
            ("4|3100", "4 4 -2 -1 0 1"),
            ("4|2200", "4 3 0 -2 0 1"),
            ("4|1300", "4 2 2 -3 0 1"),
            ("4|0400", "4 1 4 -4 0 1"),
            ("3|0300", "3 0 4 -3 0 1"),
            ("II", "1 0 0 1 0 0"),
            ("half@4", "1/2 1 -1 0 0 0"),
            ("half@3", "1/2 0 1 -1 0 0"),
            ("half@2", "1/2 0 0 1 -1 0"),
            ("half@1", "1/2 0 0 0 1 0"),
        ],
    )
}

const B_DEGREE5: &[(&str, &str)] = &[
    ("5|005", "10 0 5 0 0 0 1"),
    ("5|014", "9 1 3 0 0 0 1"),
    ("5|023", "8 2 1 0 0 0 1"),
    ("5|032", "7 3 -1 0 0 0 1"),
    ("5|041", "6 4 -3 0 0 0 1"),
    ("5|050", "5 5 -5 0 0 0 1"),
    ("5|104", "9 -1 4 0 0 0 1"),
    ("5|113", "8 0 2 0 0 0 1"),
    ("5|122", "7 1 0 0 0 0 1"),
    ("5|131", "6 2 -2 0 0 0 1"),
    ("5|140", "5 3 -4 0 0 0 1"),
    ("5|203", "8 -2 3 0 0 0 1"),
    ("5|212", "7 -1 1 0 0 0 1"),
    ("5|221", "6 0 -1 0 0 0 1"),
    ("5|230", "5 1 -3 0 0 0 1"),
    ("5|302", "7 -3 2 0 0 0 1"),
    ("5|311", "6 -2 0 0 0 0 1"),
    ("5|320", "5 -1 -2 0 0 0 1"),
    ("5|401", "6 -4 1 0 0 0 1"),
    ("5|410", "5 -3 -1 0 0 0 1"),
    ("5|500 once", "5 -5 0 0 0 0 0"),
    ("5+5", "15 -5 5 0 0 0 2"),
    ("5|500 forcing", "5 -5 0 0 0 -1 1"),
];

const B_DEGREE4: &[(&str, &str)] = &[
    ("4|004", "8 1 4 0 0 0 1"),
    ("4|013", "7 2 2 0 0 0 1"),
    ("4|022", "6 3 0 0 0 0 1"),
    ("4|031", "5 4 -2 0 0 0 1"),
    ("4|040 once", "4 5 -4 0 0 0 0"),
    ("4+4", "12 6 0 0 0 0 2"),
    ("4|040 forcing", "4 5 -4 0 0 -1 1"),
];

const B_CUBIC: (&str, &str) = ("3|003", "6 0 4 0 0 0 1");

const B_TAIL_HALF5: (&str, &str) = ("half@5", "1/2 -1 0 0 0 1/2 0");

const B_TAIL: &[(&str, &str)] = &[
    ("II", "1 0 0 1 0 1 0"),
    ("half@4", "1/2 1 -1 0 0 1/2 0"),
    ("half@3", "1/2 0 1 -1 0 1/2 0"),
    ("half@2", "1/2 0 0 1 -1 1/2 0"),
    ("half@1", "1/2 0 0 0 1 1/2 0"),
];

fn assemble(name: &str, with_degree5: bool, cubic: EffectRow) -> EffectTable {
    let mut rows: Vec<(&str, &str)> = Vec::new();
    if with_degree5 {
        rows.extend_from_slice(B_DEGREE5);
    }
    rows.extend_from_slice(B_DEGREE4);
    let mut t = table(name, &rows);
    t.rows.push(cubic);
    let mut tail = vec![B_TAIL[0]];
    if with_degree5 {
        tail.push(B_TAIL_HALF5);
    }
    tail.extend_from_slice(&B_TAIL[1..]);
    t.rows.extend(tail.into_iter().map(|(l, s)| row(l, s)));
    t
}

/// Algorithm B, with the paired and discounted rows for bad reductions and
/// the forces column. 37 rows.
pub fn table_b() -> EffectTable {
    assemble("B", true, row(B_CUBIC.0, B_CUBIC.1))
}

/// [`table_b`] without the rows involving degree-5 vertices. 13 rows.
pub fn table_b4() -> EffectTable {
    assemble("B4", false, row(B_CUBIC.0, B_CUBIC.1))
}

fn cubic_oracle_row(alpha: &Rational) -> Result<EffectRow> {
    if alpha.is_negative() {
        return Err(Error::AlphaOutOfRange(alpha.to_string()));
    }
    let mut r = row("cubic", "1 0 2/3 0 0 0 0");
    r.depth = alpha.clone();
    Ok(r)
}

/// [`table_b`] with the cubic III row replaced by a row that finishes a
/// cubic graph at cost `alpha` per edge.
pub fn lp_alpha_table(alpha: &Rational) -> Result<EffectTable> {
    Ok(assemble("B(alpha)", true, cubic_oracle_row(alpha)?))
}

/// The same replacement applied to [`table_b4`].
pub fn lp_alpha_table4(alpha: &Rational) -> Result<EffectTable> {
    Ok(assemble("B4(alpha)", false, cubic_oracle_row(alpha)?))
}
