//! Text formats for graphs, degree constraints, and tree decompositions.
//!
//! Graph: header `p af <n> <m>`, then one `e <u> <v>` line per edge,
//! vertices 1-indexed. Constraints: one `x <v> <k> <d1> ... <dk>` line per
//! constrained vertex; vertices without a line are unconstrained. Tree
//! decomposition (PACE style): header `s td <#bags> <width+1> <n>`, bag
//! lines `b <id> <v...>`, then one `<id1> <id2>` line per tree edge, all
//! ids 1-indexed. Lines starting with `c` are comments everywhere.

use antifactor::{DegreeConstraints, MultiGraph, TreeDecomposition};
use std::fmt::{self, Write as _};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-indexed line the error was detected on; 0 for whole-file errors.
    pub line: usize,
    pub msg: String,
}

impl ParseError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        ParseError { line, msg: msg.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.msg)
        } else {
            write!(f, "line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ParseError {}

/// Comment and blank lines removed, with original 1-indexed line numbers.
fn meaningful_lines(input: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    input.lines().enumerate().filter_map(|(i, raw)| {
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => None,
            _ => Some((i + 1, toks)),
        }
    })
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::at(line, format!("expected {what}, got {tok:?}")))
}

fn parse_u32(tok: &str, line: usize, what: &str) -> Result<u32, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::at(line, format!("expected {what}, got {tok:?}")))
}

/// A 1-indexed vertex token, returned 0-indexed.
fn parse_vertex(tok: &str, line: usize, n: usize) -> Result<usize, ParseError> {
    let v = parse_usize(tok, line, "a vertex id")?;
    if v == 0 || v > n {
        return Err(ParseError::at(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_graph(input: &str) -> Result<MultiGraph, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for (line, toks) in meaningful_lines(input) {
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(ParseError::at(line, "duplicate problem line"));
                }
                if toks.len() != 4 || toks[1] != "af" {
                    return Err(ParseError::at(line, "problem line must be `p af <n> <m>`"));
                }
                let n = parse_usize(toks[2], line, "a vertex count")?;
                let m = parse_usize(toks[3], line, "an edge count")?;
                header = Some((n, m, line));
            }
            "e" => {
                let (n, ..) = header
                    .ok_or_else(|| ParseError::at(line, "edge before the problem line"))?;
                if toks.len() != 3 {
                    return Err(ParseError::at(line, "edge line must be `e <u> <v>`"));
                }
                let u = parse_vertex(toks[1], line, n)?;
                let v = parse_vertex(toks[2], line, n)?;
                edges.push((u, v, line));
            }
            other => {
                return Err(ParseError::at(line, format!("unrecognized line type {other:?}")));
            }
        }
    }
    let (n, m, hline) = header.ok_or_else(|| ParseError::at(0, "missing `p af <n> <m>` line"))?;
    if edges.len() != m {
        return Err(ParseError::at(
            hline,
            format!("problem line promises {m} edges, file has {}", edges.len()),
        ));
    }
    let mut g = MultiGraph::new(n);
    for (u, v, line) in edges {
        g.add_edge(u, v).map_err(|e| ParseError::at(line, e.to_string()))?;
    }
    Ok(g)
}

pub fn write_graph(g: &MultiGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p af {} {}", g.n(), g.m());
    for (_, u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

pub fn parse_constraints(input: &str, n: usize) -> Result<DegreeConstraints, ParseError> {
    let mut lists: Vec<Option<Vec<u32>>> = vec![None; n];
    for (line, toks) in meaningful_lines(input) {
        if toks[0] != "x" {
            return Err(ParseError::at(line, format!("unrecognized line type {:?}", toks[0])));
        }
        if toks.len() < 3 {
            return Err(ParseError::at(line, "constraint line must be `x <v> <k> <d...>`"));
        }
        let v = parse_vertex(toks[1], line, n)?;
        let k = parse_usize(toks[2], line, "a list length")?;
        if toks.len() != 3 + k {
            return Err(ParseError::at(
                line,
                format!("list length {k} does not match {} values", toks.len() - 3),
            ));
        }
        if lists[v].is_some() {
            return Err(ParseError::at(line, format!("vertex {} constrained twice", v + 1)));
        }
        let mut ex = Vec::with_capacity(k);
        for tok in &toks[3..] {
            ex.push(parse_u32(tok, line, "an excluded degree")?);
        }
        lists[v] = Some(ex);
    }
    Ok(DegreeConstraints::new(lists.into_iter().map(Option::unwrap_or_default).collect()))
}

pub fn write_constraints(c: &DegreeConstraints) -> String {
    let mut out = String::new();
    for v in 0..c.len() {
        let ex = c.excluded(v);
        if ex.is_empty() {
            continue;
        }
        let _ = write!(out, "x {} {}", v + 1, ex.len());
        for d in ex {
            let _ = write!(out, " {d}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_td(input: &str) -> Result<TreeDecomposition, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    for (line, toks) in meaningful_lines(input) {
        match toks[0] {
            "s" => {
                if header.is_some() {
                    return Err(ParseError::at(line, "duplicate solution line"));
                }
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(ParseError::at(
                        line,
                        "solution line must be `s td <#bags> <width+1> <n>`",
                    ));
                }
                let nb = parse_usize(toks[2], line, "a bag count")?;
                let w1 = parse_usize(toks[3], line, "a width bound")?;
                let n = parse_usize(toks[4], line, "a vertex count")?;
                bags = vec![None; nb];
                header = Some((nb, w1, n));
            }
            "b" => {
                let (nb, w1, n) =
                    header.ok_or_else(|| ParseError::at(line, "bag before the solution line"))?;
                if toks.len() < 2 {
                    return Err(ParseError::at(line, "bag line must be `b <id> <v...>`"));
                }
                let id = parse_usize(toks[1], line, "a bag id")?;
                if id == 0 || id > nb {
                    return Err(ParseError::at(line, format!("bag id {id} out of range 1..={nb}")));
                }
                if bags[id - 1].is_some() {
                    return Err(ParseError::at(line, format!("bag {id} given twice")));
                }
                let mut bag = Vec::with_capacity(toks.len() - 2);
                for tok in &toks[2..] {
                    bag.push(parse_vertex(tok, line, n)?);
                }
                if bag.len() > w1 {
                    return Err(ParseError::at(
                        line,
                        format!("bag of {} vertices exceeds declared width+1 = {w1}", bag.len()),
                    ));
                }
                bags[id - 1] = Some(bag);
            }
            _ => {
                let (nb, ..) = header
                    .ok_or_else(|| ParseError::at(line, "tree edge before the solution line"))?;
                if toks.len() != 2 {
                    return Err(ParseError::at(line, "tree edge line must be `<id1> <id2>`"));
                }
                let mut ids = [0usize; 2];
                for (slot, tok) in ids.iter_mut().zip(&toks) {
                    let id = parse_usize(tok, line, "a bag id")?;
                    if id == 0 || id > nb {
                        return Err(ParseError::at(
                            line,
                            format!("bag id {id} out of range 1..={nb}"),
                        ));
                    }
                    *slot = id - 1;
                }
                tree_edges.push((ids[0], ids[1]));
            }
        }
    }
    if header.is_none() {
        return Err(ParseError::at(0, "missing `s td <#bags> <width+1> <n>` line"));
    }
    let bags = bags.into_iter().map(Option::unwrap_or_default).collect();
    Ok(TreeDecomposition::new(bags, tree_edges))
}

/// `n` is the vertex count of the decomposed graph; the decomposition itself
/// does not store it but the header needs it.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let mut out = String::new();
    let nb = td.bags().len();
    let w1 = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let _ = writeln!(out, "s td {nb} {w1} {n}");
    for (i, bag) in td.bags().iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for (a, b) in td.tree_edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}
