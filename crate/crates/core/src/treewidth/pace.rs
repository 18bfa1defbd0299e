//! PACE `.td` text format: 1-based bags and tree edges.

use std::fmt::Write;

use super::TreeDecomposition;
use crate::error::{Error, Result};

pub fn export_pace(td: &TreeDecomposition) -> String {
    let max_bag = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.bags.len(), max_bag, td.num_vertices);
    for (i, bag) in td.bags.iter().enumerate() {
        write!(out, "b {}", i + 1).unwrap();
        for v in bag {
            write!(out, " {}", v + 1).unwrap();
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        writeln!(out, "{} {}", a + 1, b + 1).unwrap();
    }
    out
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| err(line, format!("expected a number, got {tok:?}")))
}

fn one_based(tok: &str, line: usize, bound: usize, what: &str) -> Result<usize> {
    let x = num(tok, line)?;
    if x == 0 || x > bound {
        return Err(err(line, format!("{what} {x} outside 1..={bound}")));
    }
    Ok(x - 1)
}

pub fn parse_pace(text: &str) -> Result<TreeDecomposition> {
    let mut td: Option<TreeDecomposition> = None;
    let mut filled = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => continue,
            Some(&"s") => {
                if td.is_some() {
                    return Err(err(line, "second solution line"));
                }
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(err(line, "expected `s td <bags> <max bag> <vertices>`"));
                }
                let bags = num(toks[2], line)?;
                num(toks[3], line)?;
                filled = vec![false; bags];
                td = Some(TreeDecomposition {
                    bags: vec![Vec::new(); bags],
                    edges: Vec::new(),
                    num_vertices: num(toks[4], line)?,
                });
            }
            Some(first) => {
                let t = td.as_mut().ok_or_else(|| err(line, "missing `s td` line"))?;
                if *first == "b" {
                    if toks.len() < 2 {
                        return Err(err(line, "bag line without an index"));
                    }
                    let b = one_based(toks[1], line, t.bags.len(), "bag")?;
                    if filled[b] {
                        return Err(err(line, format!("bag {} given twice", b + 1)));
                    }
                    filled[b] = true;
                    let mut bag = toks[2..]
                        .iter()
                        .map(|x| one_based(x, line, t.num_vertices, "vertex"))
                        .collect::<Result<Vec<_>>>()?;
                    bag.sort_unstable();
                    bag.dedup();
                    t.bags[b] = bag;
                } else {
                    if toks.len() != 2 {
                        return Err(err(line, "expected a tree edge `i j`"));
                    }
                    let a = one_based(toks[0], line, t.bags.len(), "bag")?;
                    let b = one_based(toks[1], line, t.bags.len(), "bag")?;
                    t.edges.push((a, b));
                }
            }
        }
    }
    td.ok_or_else(|| err(0, "missing `s td` line"))
}
