//! Reproducible random instances. All randomness flows through a caller-owned
//! ChaCha stream, so one seed fixes every byte of the output files.

use antifactor::{DegreeConstraints, MultiGraph};
use rand::Rng;
use std::collections::BTreeSet;

/// Caps for random excluded-degree lists: each vertex gets between 0 and
/// `max_size` distinct values drawn from `0..=max_value`.
#[derive(Debug, Clone, Copy)]
pub struct ExFamily {
    pub max_size: usize,
    pub max_value: u32,
}

impl Default for ExFamily {
    fn default() -> Self {
        ExFamily { max_size: 2, max_value: 3 }
    }
}

/// Erdős–Rényi G(n, m): m distinct non-loop edges drawn uniformly.
pub fn er_graph(rng: &mut impl Rng, n: usize, m: usize) -> Result<MultiGraph, String> {
    let cap = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > cap {
        return Err(format!("{m} edges do not fit in a simple graph on {n} vertices"));
    }
    let mut g = MultiGraph::new(n);
    let mut seen = BTreeSet::new();
    while seen.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            g.add_edge(key.0, key.1).expect("checked non-loop in range");
        }
    }
    Ok(g)
}

/// Grid of `rows` x `cols` vertices; vertex (r, c) is r*cols + c. Edges go
/// right then down from each cell, in row-major order.
pub fn grid_graph(rows: usize, cols: usize) -> MultiGraph {
    let mut g = MultiGraph::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                g.add_edge(v, v + 1).expect("in range");
            }
            if r + 1 < rows {
                g.add_edge(v, v + cols).expect("in range");
            }
        }
    }
    g
}

pub fn random_constraints(rng: &mut impl Rng, n: usize, fam: ExFamily) -> DegreeConstraints {
    let mut lists = Vec::with_capacity(n);
    for _ in 0..n {
        let size = rng.gen_range(0..=fam.max_size);
        let mut ex = BTreeSet::new();
        while ex.len() < size.min(fam.max_value as usize + 1) {
            ex.insert(rng.gen_range(0..=fam.max_value));
        }
        lists.push(ex.into_iter().collect());
    }
    DegreeConstraints::new(lists)
}
