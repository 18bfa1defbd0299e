//! Text formats: native CSP, DIMACS edge lists (Max Cut and MIS) and WCNF.
//! All ids are 1-based on disk.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

use crate::encode::{encode_max_2sat, encode_max_cut, encode_mis, Clause, Lit};
use crate::error::{Error, Result};
use crate::instance::{Instance, Score};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csp,
    MaxcutDimacs,
    Wcnf,
    Mis,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csp" => Ok(Format::Csp),
            "maxcut-dimacs" | "dimacs" => Ok(Format::MaxcutDimacs),
            "wcnf" => Ok(Format::Wcnf),
            "mis" => Ok(Format::Mis),
            _ => Err(format!("unknown format {s:?} (expected csp, maxcut-dimacs, wcnf or mis)")),
        }
    }
}

pub fn parse(format: Format, text: &str) -> Result<Instance> {
    match format {
        Format::Csp => parse_csp(text),
        Format::MaxcutDimacs => {
            let g = parse_dimacs(text)?;
            encode_max_cut(g.n, &g.edges, Some(&g.weights))
        }
        Format::Wcnf => {
            let (vars, clauses) = parse_wcnf(text)?;
            encode_max_2sat(vars, &clauses)
        }
        Format::Mis => {
            let m = parse_mis(text)?;
            encode_mis(m.n, &m.edges, &m.weights)
        }
    }
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn int<T: FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| err(line, format!("bad number {tok:?}")))
}

/// A 1-based id in `1..=n`, returned 0-based.
fn id(tok: &str, line: usize, n: usize) -> Result<usize> {
    let x: usize = int(tok, line)?;
    if x == 0 || x > n {
        return Err(err(line, format!("vertex {x} outside 1..={n}")));
    }
    Ok(x - 1)
}

/// Non-empty, non-comment lines as (1-based line number, tokens).
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty() && t[0] != "c" && !t[0].starts_with('#'))
}

fn scores(toks: &[&str], line: usize, expected: usize, what: &str) -> Result<Vec<Score>> {
    if toks.len() != expected {
        return Err(err(line, format!("{what} needs {expected} scores, got {}", toks.len())));
    }
    toks.iter().map(|t| int(t, line)).collect()
}

/// Native format: `p csp n r`, then optional `s`, `n` and `e` lines.
pub fn parse_csp(text: &str) -> Result<Instance> {
    let mut inst: Option<Instance> = None;
    let mut seen_s = false;
    let mut seen_n = Vec::new();
    for (line, t) in lines(text) {
        if t[0] == "p" {
            if inst.is_some() {
                return Err(err(line, "second header line"));
            }
            if t.len() != 4 || t[1] != "csp" {
                return Err(err(line, "expected `p csp <n> <r>`"));
            }
            let n: usize = int(t[2], line)?;
            let r: usize = int(t[3], line)?;
            inst = Some(Instance::new(n, r).map_err(|e| err(line, e.to_string()))?);
            seen_n = vec![false; n];
            continue;
        }
        let i = inst.as_mut().ok_or_else(|| err(line, "missing `p csp` header"))?;
        let (n, r) = (i.num_slots(), i.r());
        match t[0] {
            "s" => {
                if seen_s {
                    return Err(err(line, "second `s` line"));
                }
                seen_s = true;
                let s = scores(&t[1..], line, 1, "niladic line")?;
                i.set_niladic(s[0]);
            }
            "n" => {
                if t.len() < 2 {
                    return Err(err(line, "`n` line without a vertex"));
                }
                let v = id(t[1], line, n)?;
                if std::mem::replace(&mut seen_n[v], true) {
                    return Err(err(line, format!("second `n` line for vertex {}", v + 1)));
                }
                i.set_monadic(v, scores(&t[2..], line, r, "monadic line")?)?;
            }
            "e" => {
                if t.len() < 3 {
                    return Err(err(line, "`e` line needs two vertices"));
                }
                let (u, v) = (id(t[1], line, n)?, id(t[2], line, n)?);
                if u >= v {
                    return Err(err(line, "edge lines need u < v"));
                }
                if i.has_edge(u, v) {
                    return Err(err(line, format!("second `e` line for {} {}", u + 1, v + 1)));
                }
                i.add_edge(u, v, scores(&t[3..], line, r * r, "edge line")?)?;
            }
            other => return Err(err(line, format!("unknown line type {other:?}"))),
        }
    }
    inst.ok_or_else(|| err(0, "missing `p csp` header"))
}

/// Canonical native text: header, `s` line, one `n` line per slot, edges in
/// increasing order.
pub fn emit_csp(inst: &Instance) -> String {
    let mut out = format!("p csp {} {}\ns {}\n", inst.num_slots(), inst.r(), inst.niladic());
    for v in 0..inst.num_slots() {
        write!(out, "n {}", v + 1).unwrap();
        for s in inst.monadic(v) {
            write!(out, " {s}").unwrap();
        }
        out.push('\n');
    }
    for ((u, v), table) in inst.edges() {
        write!(out, "e {} {}", u + 1, v + 1).unwrap();
        for s in table {
            write!(out, " {s}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// An undirected graph read from DIMACS edge format.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    /// One per edge, 1 when the line gives none.
    pub weights: Vec<Score>,
}

/// `p edge n m` then `e u v [w]`. The edge count in the header is not
/// enforced; loops and repeated pairs are rejected.
pub fn parse_dimacs(text: &str) -> Result<EdgeList> {
    parse_graph(text, false).map(|(g, _)| g)
}

/// [`parse_dimacs`] plus `w v weight` lines (vertex weights default to 1).
pub fn parse_mis(text: &str) -> Result<MisInput> {
    let (g, w) = parse_graph(text, true)?;
    Ok(MisInput {
        n: g.n,
        edges: g.edges,
        weights: w,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MisInput {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub weights: Vec<Score>,
}

fn parse_graph(text: &str, vertex_weights: bool) -> Result<(EdgeList, Vec<Score>)> {
    let mut g: Option<EdgeList> = None;
    let mut vw = Vec::new();
    let mut seen = BTreeMap::new();
    for (line, t) in lines(text) {
        if t[0] == "p" {
            if g.is_some() {
                return Err(err(line, "second header line"));
            }
            if !(3..=4).contains(&t.len()) || !matches!(t[1], "edge" | "col") {
                return Err(err(line, "expected `p edge <n> <m>`"));
            }
            let n = int(t[2], line)?;
            g = Some(EdgeList {
                n,
                ..EdgeList::default()
            });
            vw = vec![1; n];
            continue;
        }
        let g = g.as_mut().ok_or_else(|| err(line, "missing `p edge` header"))?;
        match t[0] {
            "e" => {
                if !(3..=4).contains(&t.len()) {
                    return Err(err(line, "expected `e <u> <v> [weight]`"));
                }
                let (u, v) = (id(t[1], line, g.n)?, id(t[2], line, g.n)?);
                if u == v {
                    return Err(err(line, format!("loop at vertex {}", u + 1)));
                }
                if seen.insert((u.min(v), u.max(v)), line).is_some() {
                    return Err(err(line, format!("repeated edge {} {}", u + 1, v + 1)));
                }
                g.edges.push((u, v));
                g.weights.push(if t.len() == 4 { int(t[3], line)? } else { 1 });
            }
            "w" if vertex_weights => {
                if t.len() != 3 {
                    return Err(err(line, "expected `w <v> <weight>`"));
                }
                let v = id(t[1], line, g.n)?;
                vw[v] = int(t[2], line)?;
            }
            other => return Err(err(line, format!("unknown line type {other:?}"))),
        }
    }
    let g = g.ok_or_else(|| err(0, "missing `p edge` header"))?;
    Ok((g, vw))
}

pub fn emit_dimacs(n: usize, edges: &[(usize, usize)]) -> String {
    let mut out = format!("p edge {n} {}\n", edges.len());
    for &(u, v) in edges {
        writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Weighted CNF with clauses of one or two literals. Accepts the classic
/// `p wcnf vars clauses [top]` layout, where weights of at least `top` mark
/// hard clauses, and the newer header-less layout with `h` for hard clauses.
/// Hard clauses get weight one more than the total soft weight.
pub fn parse_wcnf(text: &str) -> Result<(usize, Vec<Clause>)> {
    let mut vars: Option<usize> = None;
    let mut top: Option<Score> = None;
    let mut soft = Vec::new();
    let mut hard = Vec::new();
    let mut max_var = 0;
    for (line, t) in lines(text) {
        if t[0] == "p" {
            if vars.is_some() {
                return Err(err(line, "second header line"));
            }
            if !(4..=5).contains(&t.len()) || t[1] != "wcnf" {
                return Err(err(line, "expected `p wcnf <vars> <clauses> [top]`"));
            }
            vars = Some(int(t[2], line)?);
            top = t.get(4).map(|x| int(x, line)).transpose()?;
            continue;
        }
        let (weight, rest) = if t[0] == "h" {
            (None, &t[1..])
        } else {
            let w: Score = int(t[0], line)?;
            if w <= 0 {
                return Err(err(line, "clause weights must be positive"));
            }
            (Some(w).filter(|&w| top.is_none_or(|top| w < top)), &t[1..])
        };
        let Some((&"0", lits)) = rest.split_last() else {
            return Err(err(line, "clause must end with 0"));
        };
        if lits.is_empty() {
            return Err(err(line, "empty clause"));
        }
        if lits.len() > 2 {
            return Err(Error::ClauseArity(lits.len()));
        }
        let mut clause = Vec::with_capacity(2);
        for l in lits {
            let x: i64 = int(l, line)?;
            let var = x.unsigned_abs() as usize;
            if x == 0 || vars.is_some_and(|n| var > n) {
                return Err(err(line, format!("literal {x} out of range")));
            }
            max_var = max_var.max(var);
            clause.push(if x > 0 { Lit::pos(var - 1) } else { Lit::neg(var - 1) });
        }
        match weight {
            Some(w) => soft.push(Clause::new(clause, w)),
            None => hard.push(clause),
        }
    }
    let total = soft
        .iter()
        .try_fold(0 as Score, |acc, c| acc.checked_add(c.weight))
        .and_then(|s| s.checked_add(1))
        .ok_or(Error::Overflow)?;
    soft.extend(hard.into_iter().map(|lits| Clause::new(lits, total)));
    Ok((vars.unwrap_or(max_var), soft))
}
