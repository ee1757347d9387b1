//! Instance representation: multigraph, excluded-degree sets, conversions.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

/// Undirected multigraph on vertices `0..n`. Parallel edges are permitted and
/// each carries its own dense `EdgeId` in `0..m`; self-loops are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph { n, edges: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, Error> {
        let mut g = MultiGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds an edge and returns its id. Endpoints may repeat across edges
    /// (parallel edges) but an edge may not connect a vertex to itself.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, Error> {
        if u >= self.n {
            return Err(Error::VertexOutOfRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(Error::VertexOutOfRange { v, n: self.n });
        }
        if u == v {
            return Err(Error::SelfLoop { v: u });
        }
        self.edges.push((u, v));
        Ok(self.edges.len() - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<(VertexId, VertexId), Error> {
        self.edges.get(e).copied().ok_or(Error::EdgeOutOfRange { e, m: self.edges.len() })
    }

    /// Edges as `(id, u, v)` in id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().enumerate().map(|(e, &(u, v))| (e, u, v))
    }

    /// Number of incident edge entries; parallel edges each count once.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Incident edge ids of `v`, ascending.
    pub fn incident(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .enumerate()
            .filter(|&(_, &(a, b))| a == v || b == v)
            .map(|(e, _)| e)
            .collect()
    }

    fn edge_set_mask(&self, s: &[EdgeId]) -> Result<Vec<bool>, Error> {
        let mut mask = vec![false; self.edges.len()];
        for &e in s {
            if e >= self.edges.len() {
                return Err(Error::EdgeOutOfRange { e, m: self.edges.len() });
            }
            mask[e] = true;
        }
        Ok(mask)
    }

    /// Degrees induced by the edge set `s` (duplicates in `s` collapse).
    pub fn induced_degrees(&self, s: &[EdgeId]) -> Result<Vec<u32>, Error> {
        let mask = self.edge_set_mask(s)?;
        let mut deg = vec![0u32; self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if mask[e] {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        Ok(deg)
    }
}

/// Per-vertex finite excluded-degree sets `Ex_v`, stored sorted and
/// duplicate-free. An empty list means the vertex is unconstrained. Values
/// above `deg(v)` are retained; they are inert.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeConstraints {
    excluded: Vec<Vec<u32>>,
}

impl DegreeConstraints {
    pub fn new(mut lists: Vec<Vec<u32>>) -> Self {
        for l in &mut lists {
            l.sort_unstable();
            l.dedup();
        }
        DegreeConstraints { excluded: lists }
    }

    /// All vertices unconstrained.
    pub fn unconstrained(n: usize) -> Self {
        DegreeConstraints { excluded: vec![Vec::new(); n] }
    }

    /// The same excluded set on every vertex.
    pub fn uniform(n: usize, ex: &[u32]) -> Self {
        let mut l: Vec<u32> = ex.to_vec();
        l.sort_unstable();
        l.dedup();
        DegreeConstraints { excluded: vec![l; n] }
    }

    pub fn len(&self) -> usize {
        self.excluded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.excluded.is_empty()
    }

    pub fn excluded(&self, v: VertexId) -> &[u32] {
        &self.excluded[v]
    }

    pub fn is_excluded(&self, v: VertexId, d: u32) -> bool {
        self.excluded[v].binary_search(&d).is_ok()
    }

    /// `max Ex`: the largest value in any list, 0 if all lists are empty.
    pub fn max_excluded(&self) -> u32 {
        self.excluded.iter().filter_map(|l| l.last().copied()).max().unwrap_or(0)
    }

    /// `ex`: the largest list length.
    pub fn max_list_len(&self) -> usize {
        self.excluded.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// The allowed-degree (factor) formulation converted to excluded degrees:
/// `Ex_v = [0, deg(v)] \ B`. Since `deg_S(v) <= deg(v)`, an edge set satisfies
/// the B-factor constraint iff it satisfies the returned constraints.
pub fn factor_to_antifactor(graph: &MultiGraph, b: &[u32]) -> Result<DegreeConstraints, Error> {
    if b.is_empty() {
        return Err(Error::EmptyAllowedSet);
    }
    let mut lists = Vec::with_capacity(graph.n());
    for v in 0..graph.n() {
        let deg = graph.degree(v) as u32;
        lists.push((0..=deg).filter(|d| !b.contains(d)).collect());
    }
    Ok(DegreeConstraints::new(lists))
}

/// `deg_S(v)` for each listed vertex.
pub fn degree_vector(
    graph: &MultiGraph,
    s: &[EdgeId],
    vertices: &[VertexId],
) -> Result<Vec<u32>, Error> {
    let deg = graph.induced_degrees(s)?;
    let mut out = Vec::with_capacity(vertices.len());
    for &v in vertices {
        if v >= graph.n() {
            return Err(Error::VertexOutOfRange { v, n: graph.n() });
        }
        out.push(deg[v]);
    }
    Ok(out)
}

/// A problem instance: graph plus constraints covering exactly its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: MultiGraph,
    pub constraints: DegreeConstraints,
}

impl Instance {
    pub fn new(graph: MultiGraph, constraints: DegreeConstraints) -> Result<Self, Error> {
        if constraints.len() != graph.n() {
            return Err(Error::ConstraintCount { got: constraints.len(), expected: graph.n() });
        }
        Ok(Instance { graph, constraints })
    }

    /// True iff `deg_S(v) ∉ Ex_v` for every vertex.
    pub fn is_solution(&self, s: &[EdgeId]) -> Result<bool, Error> {
        let deg = self.graph.induced_degrees(s)?;
        Ok(deg.iter().enumerate().all(|(v, &d)| !self.constraints.is_excluded(v, d)))
    }
}
