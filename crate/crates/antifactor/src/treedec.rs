//! Tree decompositions: validation, width accessors, conversion to nice form,
//! and a min-fill heuristic constructor.
//!
//! A nice decomposition is a rooted tree of typed nodes (Leaf, IntroduceVertex,
//! IntroduceEdge, Forget, Join) with an empty root bag; every graph edge is
//! introduced at exactly one IntroduceEdge node. Edge placement is
//! deterministic: each edge goes directly above the highest node whose bag
//! contains both endpoints, ties broken by smallest node id, parallel edges
//! chained in id order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::graph::{EdgeId, MultiGraph, VertexId};

/// A rootless tree decomposition: bags plus tree edges over bag indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<VertexId>>,
    edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Bags are sorted and deduplicated on construction.
    pub fn new(mut bags: Vec<Vec<VertexId>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    pub fn bags(&self) -> &[Vec<VertexId>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `max |bag| - 1`, floored at 0 so the empty graph reports width 0.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// True iff the bag tree is a simple path (trivially true up to one bag).
    pub fn is_path(&self) -> bool {
        let b = self.bags.len();
        if b <= 1 {
            return self.edges.is_empty();
        }
        if self.edges.len() != b - 1 {
            return false;
        }
        let mut deg = vec![0usize; b];
        let mut adj = vec![Vec::new(); b];
        for &(x, y) in &self.edges {
            if x >= b || y >= b {
                return false;
            }
            deg[x] += 1;
            deg[y] += 1;
            adj[x].push(y);
            adj[y].push(x);
        }
        if deg.iter().any(|&d| d > 2) {
            return false;
        }
        // b-1 edges and connected makes it a tree; with max degree 2, a path.
        let mut seen = vec![false; b];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == b
    }

    /// Checks the three decomposition axioms against `g` and reports the
    /// first violation: vertex coverage, edge coverage, bag connectivity.
    pub fn validate(&self, g: &MultiGraph) -> Result<(), Error> {
        let b = self.bags.len();
        for (i, bag) in self.bags.iter().enumerate() {
            if let Some(&v) = bag.iter().find(|&&v| v >= g.n()) {
                return Err(Error::InvalidDecomposition(format!(
                    "bag {i} contains vertex {v}, graph has n={}",
                    g.n()
                )));
            }
        }
        for &(x, y) in &self.edges {
            if x >= b || y >= b {
                return Err(Error::InvalidDecomposition(format!(
                    "tree edge ({x},{y}) out of range, {b} bags"
                )));
            }
        }
        if b > 0 {
            if self.edges.len() != b - 1 {
                return Err(Error::InvalidDecomposition(format!(
                    "{} tree edges on {b} bags, expected {}",
                    self.edges.len(),
                    b - 1
                )));
            }
            let mut adj = vec![Vec::new(); b];
            for &(x, y) in &self.edges {
                adj[x].push(y);
                adj[y].push(x);
            }
            let mut seen = vec![false; b];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            if count != b {
                return Err(Error::InvalidDecomposition(format!(
                    "bag tree is disconnected ({count} of {b} bags reachable)"
                )));
            }
        } else if g.n() > 0 {
            return Err(Error::InvalidDecomposition(format!(
                "no bags but graph has n={}",
                g.n()
            )));
        }

        for v in 0..g.n() {
            if !self.bags.iter().any(|bag| bag.binary_search(&v).is_ok()) {
                return Err(Error::InvalidDecomposition(format!("vertex {v} not covered")));
            }
        }
        for (e, u, v) in g.edges() {
            let covered = self
                .bags
                .iter()
                .any(|bag| bag.binary_search(&u).is_ok() && bag.binary_search(&v).is_ok());
            if !covered {
                return Err(Error::InvalidDecomposition(format!(
                    "edge {e} ({u},{v}) not covered by any bag"
                )));
            }
        }
        // Connectivity: the bags holding v must induce a connected subtree.
        if b > 0 {
            let mut adj = vec![Vec::new(); b];
            for &(x, y) in &self.edges {
                adj[x].push(y);
                adj[y].push(x);
            }
            for v in 0..g.n() {
                let holders: Vec<usize> = (0..b)
                    .filter(|&i| self.bags[i].binary_search(&v).is_ok())
                    .collect();
                let inset: BTreeSet<usize> = holders.iter().copied().collect();
                let mut seen = BTreeSet::new();
                let mut stack = vec![holders[0]];
                seen.insert(holders[0]);
                while let Some(x) = stack.pop() {
                    for &y in &adj[x] {
                        if inset.contains(&y) && seen.insert(y) {
                            stack.push(y);
                        }
                    }
                }
                if seen.len() != holders.len() {
                    return Err(Error::InvalidDecomposition(format!(
                        "bags containing vertex {v} are disconnected"
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    IntroduceVertex(VertexId),
    IntroduceEdge(EdgeId),
    Forget(VertexId),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted bag contents; the coordinate order used by all DP tables.
    pub bag: Vec<VertexId>,
    pub children: Vec<usize>,
}

/// Rooted nice tree decomposition; the root bag is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
    root: usize,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &NiceNode {
        &self.nodes[id]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|t| t.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Node ids with every child listed before its parent; ends at the root.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(t) = stack.pop() {
            out.push(t);
            stack.extend_from_slice(&self.nodes[t].children);
        }
        out.reverse();
        out
    }

    /// Nodes grouped by height above the leaves; level 0 holds the leaves.
    /// All nodes in one level depend only on earlier levels.
    pub fn levels(&self) -> Vec<Vec<usize>> {
        let mut height = vec![0usize; self.nodes.len()];
        for &t in &self.post_order() {
            height[t] = self.nodes[t]
                .children
                .iter()
                .map(|&c| height[c] + 1)
                .max()
                .unwrap_or(0);
        }
        let top = height.iter().max().copied().unwrap_or(0);
        let mut levels = vec![Vec::new(); top + 1];
        for (t, &h) in height.iter().enumerate() {
            levels[h].push(t);
        }
        levels
    }

    /// Structural validity of the nice form against `g`: local bag
    /// transitions, empty root bag, one IntroduceEdge per graph edge, one
    /// Forget per vertex, and per-vertex bag connectivity.
    pub fn validate_nice(&self, g: &MultiGraph) -> Result<(), Error> {
        let fail = |msg: alloc::string::String| Err(Error::DecompositionMismatch(msg));
        if !self.nodes[self.root].bag.is_empty() {
            return fail(format!("root bag not empty: {:?}", self.nodes[self.root].bag));
        }
        let mut edge_seen = vec![0usize; g.m()];
        let mut forget_seen = vec![0usize; g.n()];
        for (t, node) in self.nodes.iter().enumerate() {
            let kids = &node.children;
            let kid_bag = |i: usize| &self.nodes[kids[i]].bag;
            match node.kind {
                NodeKind::Leaf => {
                    if !kids.is_empty() || !node.bag.is_empty() {
                        return fail(format!("leaf node {t} malformed"));
                    }
                }
                NodeKind::IntroduceVertex(v) => {
                    if kids.len() != 1 || node.bag.binary_search(&v).is_err() {
                        return fail(format!("introduce-vertex node {t} malformed"));
                    }
                    let mut expect = node.bag.clone();
                    expect.retain(|&x| x != v);
                    if kid_bag(0) != &expect {
                        return fail(format!("introduce-vertex node {t} bag transition wrong"));
                    }
                }
                NodeKind::IntroduceEdge(e) => {
                    if kids.len() != 1 || kid_bag(0) != &node.bag {
                        return fail(format!("introduce-edge node {t} malformed"));
                    }
                    let (u, v) = g.endpoints(e)?;
                    if node.bag.binary_search(&u).is_err() || node.bag.binary_search(&v).is_err()
                    {
                        return fail(format!("introduce-edge node {t}: endpoints not in bag"));
                    }
                    edge_seen[e] += 1;
                }
                NodeKind::Forget(v) => {
                    if kids.len() != 1 || node.bag.binary_search(&v).is_ok() {
                        return fail(format!("forget node {t} malformed"));
                    }
                    let mut expect = kid_bag(0).clone();
                    expect.retain(|&x| x != v);
                    if expect != node.bag || kid_bag(0).binary_search(&v).is_err() {
                        return fail(format!("forget node {t} bag transition wrong"));
                    }
                    forget_seen[v] += 1;
                }
                NodeKind::Join => {
                    if kids.len() != 2 || kid_bag(0) != &node.bag || kid_bag(1) != &node.bag {
                        return fail(format!("join node {t} malformed"));
                    }
                }
            }
        }
        for (e, c) in edge_seen.iter().enumerate() {
            if *c != 1 {
                return fail(format!("edge {e} introduced {c} times"));
            }
        }
        for (v, c) in forget_seen.iter().enumerate() {
            if *c != 1 {
                return fail(format!("vertex {v} forgotten {c} times"));
            }
        }
        // Bags containing a vertex must form one connected subtree.
        let mut parent = vec![usize::MAX; self.nodes.len()];
        for (t, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                parent[c] = t;
            }
        }
        for v in 0..g.n() {
            let holders: Vec<usize> = (0..self.nodes.len())
                .filter(|&t| self.nodes[t].bag.binary_search(&v).is_ok())
                .collect();
            if holders.is_empty() {
                return fail(format!("vertex {v} never appears in a bag"));
            }
            let inset: BTreeSet<usize> = holders.iter().copied().collect();
            // Count holders whose parent is not a holder; exactly one such
            // top node means the holders are connected.
            let tops = holders
                .iter()
                .filter(|&&t| parent[t] == usize::MAX || !inset.contains(&parent[t]))
                .count();
            if tops != 1 {
                return fail(format!("bags containing vertex {v} form {tops} subtrees"));
            }
        }
        Ok(())
    }
}

/// Builder state shared by the conversion passes.
struct NiceBuilder {
    nodes: Vec<NiceNode>,
}

impl NiceBuilder {
    fn push(&mut self, kind: NodeKind, bag: Vec<VertexId>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Leaf, then introduce the bag's vertices in ascending order.
    fn leaf_chain(&mut self, bag: &[VertexId]) -> usize {
        let mut cur = self.push(NodeKind::Leaf, Vec::new(), Vec::new());
        let mut acc: Vec<VertexId> = Vec::new();
        for &v in bag {
            let pos = acc.binary_search(&v).unwrap_err();
            acc.insert(pos, v);
            cur = self.push(NodeKind::IntroduceVertex(v), acc.clone(), vec![cur]);
        }
        cur
    }

    /// Transition from the bag on top of `cur` to `target`: forget the extra
    /// vertices in descending order, then introduce the missing ones in
    /// ascending order.
    fn transition(&mut self, mut cur: usize, from: &[VertexId], target: &[VertexId]) -> usize {
        let mut acc: Vec<VertexId> = from.to_vec();
        let drop: Vec<VertexId> =
            from.iter().copied().filter(|v| target.binary_search(v).is_err()).collect();
        for &v in drop.iter().rev() {
            acc.retain(|&x| x != v);
            cur = self.push(NodeKind::Forget(v), acc.clone(), vec![cur]);
        }
        for &v in target.iter().filter(|v| from.binary_search(v).is_err()) {
            let pos = acc.binary_search(&v).unwrap_err();
            acc.insert(pos, v);
            cur = self.push(NodeKind::IntroduceVertex(v), acc.clone(), vec![cur]);
        }
        cur
    }
}

/// Converts a validated decomposition into nice form of identical width.
pub fn make_nice(td: &TreeDecomposition, g: &MultiGraph) -> Result<NiceTreeDecomposition, Error> {
    td.validate(g)?;
    let mut b = NiceBuilder { nodes: Vec::new() };
    let bags = td.bags();

    let top = if bags.is_empty() {
        b.push(NodeKind::Leaf, Vec::new(), Vec::new())
    } else {
        // Root the bag tree at index 0 and convert bottom-up.
        let nb = bags.len();
        let mut adj = vec![Vec::new(); nb];
        for &(x, y) in td.tree_edges() {
            adj[x].push(y);
            adj[y].push(x);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let mut order = Vec::with_capacity(nb);
        let mut kids = vec![Vec::new(); nb];
        let mut seen = vec![false; nb];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    kids[x].push(y);
                    stack.push(y);
                }
            }
        }
        let mut top_of = vec![usize::MAX; nb];
        for &x in order.iter().rev() {
            let mut converted: Vec<usize> = Vec::new();
            for &c in &kids[x] {
                let t = b.transition(top_of[c], &bags[c].clone(), &bags[x].clone());
                converted.push(t);
            }
            top_of[x] = match converted.len() {
                0 => b.leaf_chain(&bags[x]),
                1 => converted[0],
                _ => {
                    let bag = bags[x].clone();
                    let mut t = converted[0];
                    for &c in &converted[1..] {
                        t = b.push(NodeKind::Join, bag.clone(), vec![t, c]);
                    }
                    t
                }
            };
        }
        // Forget the root bag down to empty, descending.
        b.transition(top_of[0], &bags[0].clone(), &[])
    };
    let root = top;

    // Place every edge directly above the highest node containing both
    // endpoints (ties: smallest node id), chaining parallel edges in id order.
    let mut depth = vec![0usize; b.nodes.len()];
    let mut stack = vec![root];
    while let Some(t) = stack.pop() {
        for &c in &b.nodes[t].children {
            depth[c] = depth[t] + 1;
            stack.push(c);
        }
    }
    let mut parent = vec![usize::MAX; b.nodes.len()];
    for (t, node) in b.nodes.iter().enumerate() {
        for &c in &node.children {
            parent[c] = t;
        }
    }
    let mut at: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for (e, u, v) in g.edges() {
        let host = (0..b.nodes.len())
            .filter(|&t| {
                b.nodes[t].bag.binary_search(&u).is_ok()
                    && b.nodes[t].bag.binary_search(&v).is_ok()
            })
            .min_by_key(|&t| (depth[t], t))
            .expect("validated decomposition covers every edge");
        at.entry(host).or_default().push(e);
    }
    for (host, edges) in at {
        let bag = b.nodes[host].bag.clone();
        let p = parent[host];
        let mut cur = host;
        for e in edges {
            cur = b.push(NodeKind::IntroduceEdge(e), bag.clone(), vec![cur]);
        }
        let slot = b.nodes[p]
            .children
            .iter()
            .position(|&c| c == host)
            .expect("host is a child of its parent");
        b.nodes[p].children[slot] = cur;
    }

    let out = NiceTreeDecomposition { nodes: b.nodes, root };
    debug_assert!(out.validate_nice(g).is_ok());
    Ok(out)
}

/// Min-fill elimination ordering heuristic. Always valid, no width guarantee.
pub fn heuristic_decomposition(g: &MultiGraph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition::new(Vec::new(), Vec::new());
    }
    let mut adj: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); n];
    for (_, u, v) in g.edges() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let mut alive = vec![true; n];
    let mut bags: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    let mut pos = vec![usize::MAX; n];
    let mut elim: Vec<VertexId> = Vec::with_capacity(n);
    for step in 0..n {
        let mut best: Option<(usize, VertexId)> = None;
        for v in (0..n).filter(|&v| alive[v]) {
            let nb: Vec<VertexId> = adj[v].iter().copied().collect();
            let mut fill = 0usize;
            for i in 0..nb.len() {
                for j in i + 1..nb.len() {
                    if !adj[nb[i]].contains(&nb[j]) {
                        fill += 1;
                    }
                }
            }
            if best.is_none_or(|(bf, _)| fill < bf) {
                best = Some((fill, v));
            }
        }
        let (_, v) = best.expect("some vertex is alive");
        let nb: Vec<VertexId> = adj[v].iter().copied().collect();
        let mut bag = nb.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        pos[v] = step;
        elim.push(v);
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                adj[nb[i]].insert(nb[j]);
                adj[nb[j]].insert(nb[i]);
            }
        }
        for &u in &nb {
            adj[u].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for step in 0..n {
        let v = elim[step];
        let next = bags[step]
            .iter()
            .copied()
            .filter(|&u| u != v)
            .map(|u| pos[u])
            .min();
        match next {
            Some(p) => edges.push((step, p)),
            // No surviving neighbors: chain to keep the bag tree connected.
            None if step + 1 < n => edges.push((step, step + 1)),
            None => {}
        }
    }
    // The last elimination never has neighbors, so exactly one bag (the last)
    // emitted no edge and the result is a tree.
    TreeDecomposition::new(bags, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> MultiGraph {
        MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn path_decomposition_validates() {
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            vec![(0, 1), (1, 2)],
        );
        assert!(td.validate(&path4()).is_ok());
        assert_eq!(td.width(), 1);
        assert!(td.is_path());
    }

    #[test]
    fn missing_bag_reports_uncovered_edge() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![(0, 1)]);
        let err = td.validate(&path4()).unwrap_err();
        match err {
            Error::InvalidDecomposition(msg) => assert!(msg.contains("edge 1")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn split_vertex_occurrences_report_disconnected() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 3)]).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![2], vec![0, 3]],
            vec![(0, 1), (1, 2)],
        );
        let err = td.validate(&g).unwrap_err();
        match err {
            Error::InvalidDecomposition(msg) => assert!(msg.contains("vertex 0")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn single_bag_single_edge_gives_the_canonical_chain() {
        let g = MultiGraph::from_edges(2, &[(0, 1)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        let ntd = make_nice(&td, &g).unwrap();
        // Walk root-down and collect kinds.
        let mut kinds = Vec::new();
        let mut t = ntd.root();
        loop {
            kinds.push(ntd.node(t).kind);
            match ntd.node(t).children.as_slice() {
                [] => break,
                [c] => t = *c,
                _ => panic!("chain expected"),
            }
        }
        kinds.reverse();
        assert_eq!(
            kinds,
            vec![
                NodeKind::Leaf,
                NodeKind::IntroduceVertex(0),
                NodeKind::IntroduceVertex(1),
                NodeKind::IntroduceEdge(0),
                NodeKind::Forget(1),
                NodeKind::Forget(0),
            ]
        );
        assert!(ntd.validate_nice(&g).is_ok());
    }

    #[test]
    fn triangle_gets_three_edge_introductions() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2]], vec![]);
        let ntd = make_nice(&td, &g).unwrap();
        let ie = ntd
            .nodes()
            .iter()
            .filter(|t| matches!(t.kind, NodeKind::IntroduceEdge(_)))
            .count();
        assert_eq!(ie, 3);
        assert_eq!(ntd.width(), 2);
        assert!(ntd.validate_nice(&g).is_ok());
    }

    #[test]
    fn parallel_edges_are_introduced_separately() {
        let g = MultiGraph::from_edges(2, &[(0, 1), (0, 1)]).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        let ntd = make_nice(&td, &g).unwrap();
        let ie: Vec<EdgeId> = ntd
            .nodes()
            .iter()
            .filter_map(|t| match t.kind {
                NodeKind::IntroduceEdge(e) => Some(e),
                _ => None,
            })
            .collect();
        assert_eq!(ie.len(), 2);
        assert!(ntd.validate_nice(&g).is_ok());
    }

    #[test]
    fn make_nice_keeps_width_and_passes_the_nice_validator() {
        let g = path4();
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            vec![(0, 1), (1, 2)],
        );
        let ntd = make_nice(&td, &g).unwrap();
        assert_eq!(ntd.width(), td.width());
        assert!(ntd.validate_nice(&g).is_ok());
        assert!(ntd.node(ntd.root()).bag.is_empty());
        let po = ntd.post_order();
        assert_eq!(po.len(), ntd.len());
        assert_eq!(*po.last().unwrap(), ntd.root());
    }

    #[test]
    fn joins_appear_for_branching_decompositions() {
        // Star: center 0 in every bag, three branch bags.
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2)],
        );
        let ntd = make_nice(&td, &g).unwrap();
        assert!(ntd.validate_nice(&g).is_ok());
        let joins = ntd.nodes().iter().filter(|t| matches!(t.kind, NodeKind::Join)).count();
        assert!(joins >= 1);
        assert_eq!(ntd.width(), 1);
    }

    #[test]
    fn empty_graph_produces_a_single_leaf() {
        let g = MultiGraph::new(0);
        let td = TreeDecomposition::new(vec![], vec![]);
        assert_eq!(td.width(), 0);
        let ntd = make_nice(&td, &g).unwrap();
        assert_eq!(ntd.len(), 1);
        assert_eq!(ntd.node(ntd.root()).kind, NodeKind::Leaf);
    }

    #[test]
    fn heuristic_on_a_tree_has_width_one() {
        let g = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)]).unwrap();
        let td = heuristic_decomposition(&g);
        assert!(td.validate(&g).is_ok());
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn heuristic_on_k4_has_width_three() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let td = heuristic_decomposition(&g);
        assert!(td.validate(&g).is_ok());
        assert_eq!(td.width(), 3);
    }

    #[test]
    fn heuristic_on_c5_has_width_two() {
        let g = MultiGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let td = heuristic_decomposition(&g);
        assert!(td.validate(&g).is_ok());
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn heuristic_handles_isolated_vertices_and_multi_edges() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 1)]).unwrap();
        let td = heuristic_decomposition(&g);
        assert!(td.validate(&g).is_ok());
        let ntd = make_nice(&td, &g).unwrap();
        assert!(ntd.validate_nice(&g).is_ok());
    }

    #[test]
    fn star_of_bags_is_not_a_path() {
        let td = TreeDecomposition::new(
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        assert!(!td.is_path());
    }
}
