//! Decision and optimization through representative sets.
//!
//! Partial solutions at a decomposition node are summarized by the exact
//! degree vector they induce on the bag. Unpruned, these tables can blow up;
//! a table slot (one node, one solution size) is therefore reduced to a
//! *representative* subset that preserves extendability: every way of
//! finishing some removed partial solution also finishes a kept one.
//!
//! The certificate is linear algebra. A degree vector embeds as the iterated
//! Kronecker product of monomial columns `(1, u, .., u^a)` over a prime
//! field, where `a` bounds the excluded-list lengths and `u = d+1` injects
//! degrees into the field. Extension tests become inner products with
//! polynomial partner vectors, so any spanning subset of the embedded columns
//! is representative and slots never need more than `(a+1)^k` vectors for a
//! bag of size `k`. A greedy Gaussian elimination keeps the lexicographically
//! first basis, which makes the whole pipeline deterministic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::graph::{DegreeConstraints, EdgeId, Instance, MultiGraph, VertexId};
use crate::treedec::{NiceTreeDecomposition, NodeKind};

/// Smallest prime strictly above `n`.
pub fn smallest_prime_above(n: u64) -> u64 {
    crate::modarith::smallest_prime_above(n)
}

/// The solver's field order: big enough to embed every vertex id and every
/// attainable degree injectively.
pub fn default_prime(g: &MultiGraph) -> u64 {
    smallest_prime_above((g.n() as u64 + 1).max(g.max_degree() as u64 + 1))
}

/// The per-coordinate rank `a+1`, where `a` bounds the excluded-list sizes.
pub fn default_rank(c: &DegreeConstraints) -> u32 {
    c.max_list_len() as u32 + 1
}

/// Arithmetic in `F_p` for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// `p` must be prime.
    pub fn new(p: u64) -> Self {
        assert!(crate::modarith::is_prime(p), "field order must be prime");
        PrimeField { p }
    }

    pub fn order(self) -> u64 {
        self.p
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        self.add(a % self.p, self.p - b % self.p)
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        crate::modarith::mul_mod(a % self.p, b % self.p, self.p)
    }

    pub fn pow(self, a: u64, e: u64) -> u64 {
        crate::modarith::pow_mod(a % self.p, e, self.p)
    }

    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "zero has no inverse");
        self.pow(a, self.p - 2)
    }
}

/// The Kronecker-product monomial embedding of a degree vector. Coordinate 0
/// is the most significant block; each coordinate contributes the column
/// `(1, u, .., u^{rank-1})` with `u = d+1`.
pub fn monomial_vector(degrees: &[u32], rank: u32, field: PrimeField) -> Vec<u64> {
    let mut v = vec![1u64];
    for &d in degrees {
        let u = (d as u64 + 1) % field.order();
        let mut pows = Vec::with_capacity(rank as usize);
        let mut cur = 1u64;
        for _ in 0..rank {
            pows.push(cur);
            cur = field.mul(cur, u);
        }
        let mut next = Vec::with_capacity(v.len() * rank as usize);
        for &a in &v {
            for &b in &pows {
                next.push(field.mul(a, b));
            }
        }
        v = next;
    }
    v
}

/// Determinant over the field, by elimination. For the compatibility
/// arguments in tests; rows must form a square matrix.
pub fn det_mod(mut mat: Vec<Vec<u64>>, field: PrimeField) -> u64 {
    let n = mat.len();
    for row in &mat {
        assert_eq!(row.len(), n, "determinant needs a square matrix");
    }
    let p = field.order();
    let mut det = 1u64 % p;
    for col in 0..n {
        let Some(pr) = (col..n).find(|&r| !mat[r][col].is_multiple_of(p)) else {
            return 0;
        };
        if pr != col {
            mat.swap(pr, col);
            det = field.sub(0, det);
        }
        det = field.mul(det, mat[col][col]);
        let inv = field.inv(mat[col][col]);
        for r in col + 1..n {
            let f = field.mul(mat[r][col], inv);
            if f == 0 {
                continue;
            }
            let (top, rest) = mat.split_at_mut(col + 1);
            let pivot_row = &top[col];
            for (x, &pv) in rest[r - col - 1][col..].iter_mut().zip(&pivot_row[col..]) {
                *x = field.sub(*x, field.mul(f, pv));
            }
        }
    }
    det
}

/// Incremental Gaussian elimination over F_p. Basis rows are kept reduced
/// with leading coefficient 1 and ordered by pivot position, so a candidate
/// is reduced in one ascending pass. Small fields take a lazy path that
/// accumulates unreduced sums in u64.
struct Eliminator {
    dim: usize,
    field: PrimeField,
    rows: Vec<(usize, Vec<u32>)>,
    lazy: bool,
}

impl Eliminator {
    fn new(dim: usize, field: PrimeField) -> Self {
        let p = field.order();
        assert!(p <= u32::MAX as u64, "eliminator supports field orders up to 2^32");
        // v[i] grows by at most (p-1)^2 per basis row; stay lazy only when
        // dim rows cannot overflow the accumulator.
        let lazy = p.checked_mul(p).and_then(|pp| pp.checked_mul(dim as u64 + 2)).is_some();
        Eliminator { dim, field, rows: Vec::new(), lazy }
    }

    fn full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Inserts the vector if independent of the basis; reports whether it was.
    fn try_insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let p = self.field.order();
        for (pivot, row) in &self.rows {
            let c = v[*pivot] % p;
            if c == 0 {
                continue;
            }
            let cm = p - c;
            if self.lazy {
                for (vi, &ri) in v[*pivot..].iter_mut().zip(&row[*pivot..]) {
                    *vi += cm * ri as u64;
                }
            } else {
                for (vi, &ri) in v[*pivot..].iter_mut().zip(&row[*pivot..]) {
                    *vi = ((*vi % p) as u128 + (cm as u128 * ri as u128) % p as u128) as u64 % p;
                }
            }
        }
        let mut pivot = None;
        for (i, x) in v.iter_mut().enumerate() {
            *x %= p;
            if pivot.is_none() && *x != 0 {
                pivot = Some(i);
            }
        }
        let Some(q) = pivot else { return false };
        let inv = self.field.inv(v[q]);
        let row: Vec<u32> = v.iter().map(|&x| self.field.mul(x, inv) as u32).collect();
        let at = self.rows.partition_point(|(qq, _)| *qq < q);
        self.rows.insert(at, (q, row));
        true
    }
}

/// Greedily keeps the lexicographically first independent subset of the
/// embedded vectors, returned as indices into `vectors` in ascending order.
/// Once the basis is full every later vector is dependent and is skipped
/// without elimination work.
pub fn compute_representative_indices(
    vectors: &[Vec<u32>],
    rank: u32,
    field: PrimeField,
) -> Result<Vec<usize>, Error> {
    assert!(rank >= 1, "rank must be positive");
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let k = vectors[0].len();
    let mut max_entry = 0u32;
    for v in vectors {
        assert_eq!(v.len(), k, "vectors must share a length");
        for &d in v {
            max_entry = max_entry.max(d);
        }
    }
    if field.order() <= max_entry as u64 + 1 {
        return Err(Error::FieldTooSmall { p: field.order(), needed: max_entry as u64 + 1 });
    }
    let dim = (rank as u64)
        .checked_pow(k as u32)
        .and_then(|d| usize::try_from(d).ok())
        .ok_or(Error::StateSpaceTooLarge { radix: rank as u64, bag: k })?;
    let mut elim = Eliminator::new(dim, field);
    let mut kept = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        if elim.full() {
            break;
        }
        if elim.try_insert(monomial_vector(v, rank, field)) {
            kept.push(idx);
        }
    }
    Ok(kept)
}

/// As [`compute_representative_indices`], returning the kept vectors.
pub fn compute_representative(
    vectors: &[Vec<u32>],
    rank: u32,
    field: PrimeField,
) -> Result<Vec<Vec<u32>>, Error> {
    let kept = compute_representative_indices(vectors, rank, field)?;
    Ok(kept.into_iter().map(|i| vectors[i].clone()).collect())
}

/// Where a table entry came from, for witness reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Prov {
    Leaf,
    Child { s: usize, idx: usize },
    ChildEdge { s: usize, idx: usize, e: EdgeId },
    Join { s1: usize, i1: usize, i2: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct SizeSlot {
    vecs: Vec<Vec<u32>>,
    prov: Vec<Prov>,
}

impl SizeSlot {
    fn retain_indices(&mut self, kept: &[usize]) {
        let mut vecs = Vec::with_capacity(kept.len());
        let mut prov = Vec::with_capacity(kept.len());
        for &i in kept {
            vecs.push(core::mem::take(&mut self.vecs[i]));
            prov.push(self.prov[i]);
        }
        self.vecs = vecs;
        self.prov = prov;
    }
}

/// Partial solutions of one node, grouped by size. Vectors within a size are
/// lexicographically sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialTable {
    bag: Vec<VertexId>,
    sizes: BTreeMap<usize, SizeSlot>,
}

impl PartialTable {
    pub fn bag(&self) -> &[VertexId] {
        &self.bag
    }

    pub fn vectors(&self, s: usize) -> Option<&[Vec<u32>]> {
        self.sizes.get(&s).map(|slot| slot.vecs.as_slice())
    }

    pub fn sizes(&self) -> impl Iterator<Item = (usize, &[Vec<u32>])> {
        self.sizes.iter().map(|(&s, slot)| (s, slot.vecs.as_slice()))
    }

    pub fn total_vectors(&self) -> usize {
        self.sizes.values().map(|s| s.vecs.len()).sum()
    }
}

/// The table of an empty leaf: the empty solution of size 0.
pub fn ps_leaf() -> PartialTable {
    let slot = SizeSlot { vecs: vec![Vec::new()], prov: vec![Prov::Leaf] };
    let mut sizes = BTreeMap::new();
    sizes.insert(0, slot);
    PartialTable { bag: Vec::new(), sizes }
}

/// Extends every vector with degree 0 for the new vertex.
pub fn ps_introduce_vertex(child: &PartialTable, v: VertexId) -> Result<PartialTable, Error> {
    if child.bag.binary_search(&v).is_ok() {
        return Err(Error::DecompositionMismatch(alloc::format!(
            "introduce: vertex {v} already in bag"
        )));
    }
    let pos = child.bag.binary_search(&v).unwrap_err();
    let mut bag = child.bag.clone();
    bag.insert(pos, v);
    let mut sizes = BTreeMap::new();
    for (&s, slot) in &child.sizes {
        let mut vecs = Vec::with_capacity(slot.vecs.len());
        let mut prov = Vec::with_capacity(slot.vecs.len());
        for (idx, vec) in slot.vecs.iter().enumerate() {
            let mut w = vec.clone();
            w.insert(pos, 0);
            vecs.push(w);
            prov.push(Prov::Child { s, idx });
        }
        // inserting a constant at a fixed position preserves lex order
        sizes.insert(s, SizeSlot { vecs, prov });
    }
    Ok(PartialTable { bag, sizes })
}

/// Branches on edge `e = (u, v)`: skipped (vector and size unchanged) or
/// taken (both endpoint degrees and the size go up by one). When both
/// branches reach the same vector the skip derivation is kept.
pub fn ps_introduce_edge(
    child: &PartialTable,
    e: EdgeId,
    u: VertexId,
    v: VertexId,
) -> Result<PartialTable, Error> {
    let (pu, pv) = match (child.bag.binary_search(&u), child.bag.binary_search(&v)) {
        (Ok(a), Ok(b)) => (a, b),
        _ => {
            return Err(Error::DecompositionMismatch(alloc::format!(
                "introduce-edge: endpoints {u},{v} not both in bag"
            )))
        }
    };
    let mut out_sizes: BTreeSet<usize> = child.sizes.keys().copied().collect();
    out_sizes.extend(child.sizes.keys().map(|s| s + 1));
    let mut sizes = BTreeMap::new();
    for s_out in out_sizes {
        let skip = child.sizes.get(&s_out);
        let take = s_out.checked_sub(1).and_then(|s| child.sizes.get(&s));
        // bumping two fixed positions by one preserves lex order, so both
        // candidate streams are sorted and merge linearly
        let taken: Vec<Vec<u32>> = take
            .map(|slot| {
                slot.vecs
                    .iter()
                    .map(|vec| {
                        let mut w = vec.clone();
                        w[pu] += 1;
                        w[pv] += 1;
                        w
                    })
                    .collect()
            })
            .unwrap_or_default();
        let skip_n = skip.map_or(0, |s| s.vecs.len());
        let mut vecs = Vec::with_capacity(skip_n + taken.len());
        let mut prov = Vec::with_capacity(skip_n + taken.len());
        let (mut i, mut j) = (0usize, 0usize);
        while i < skip_n || j < taken.len() {
            let pick_skip = if i == skip_n {
                false
            } else if j == taken.len() {
                true
            } else {
                skip.unwrap().vecs[i] <= taken[j]
            };
            if pick_skip {
                let sv = &skip.unwrap().vecs[i];
                if j < taken.len() && *sv == taken[j] {
                    j += 1; // same vector from both branches: keep the skip
                }
                vecs.push(sv.clone());
                prov.push(Prov::Child { s: s_out, idx: i });
                i += 1;
            } else {
                vecs.push(taken[j].clone());
                prov.push(Prov::ChildEdge { s: s_out - 1, idx: j, e });
                j += 1;
            }
        }
        if !vecs.is_empty() {
            sizes.insert(s_out, SizeSlot { vecs, prov });
        }
    }
    Ok(PartialTable { bag: child.bag.clone(), sizes })
}

/// Drops vertex `v`, filtering on its now-final degree: vectors with
/// `deg(v) ∈ Ex_v` die here. Collapsing vectors keep their first derivation.
pub fn ps_forget(child: &PartialTable, v: VertexId, ex_v: &[u32]) -> Result<PartialTable, Error> {
    let pos = child.bag.binary_search(&v).map_err(|_| {
        Error::DecompositionMismatch(alloc::format!("forget: vertex {v} not in bag"))
    })?;
    let mut bag = child.bag.clone();
    bag.remove(pos);
    let mut sizes = BTreeMap::new();
    for (&s, slot) in &child.sizes {
        let mut map: BTreeMap<Vec<u32>, Prov> = BTreeMap::new();
        for (idx, vec) in slot.vecs.iter().enumerate() {
            if ex_v.binary_search(&vec[pos]).is_ok() {
                continue;
            }
            let mut w = vec.clone();
            w.remove(pos);
            map.entry(w).or_insert(Prov::Child { s, idx });
        }
        if !map.is_empty() {
            let mut vecs = Vec::with_capacity(map.len());
            let mut prov = Vec::with_capacity(map.len());
            for (w, p) in map {
                vecs.push(w);
                prov.push(p);
            }
            sizes.insert(s, SizeSlot { vecs, prov });
        }
    }
    Ok(PartialTable { bag, sizes })
}

/// Combines two children over the same bag: degree vectors add (the edge
/// sets below the children are disjoint), sizes add.
pub fn ps_join(a: &PartialTable, b: &PartialTable) -> Result<PartialTable, Error> {
    if a.bag != b.bag {
        return Err(Error::BagMismatch);
    }
    let mut acc: BTreeMap<usize, BTreeMap<Vec<u32>, Prov>> = BTreeMap::new();
    for (&s1, sl1) in &a.sizes {
        for (i1, v1) in sl1.vecs.iter().enumerate() {
            for (&s2, sl2) in &b.sizes {
                for (i2, v2) in sl2.vecs.iter().enumerate() {
                    let sum: Vec<u32> = v1.iter().zip(v2).map(|(&x, &y)| x + y).collect();
                    acc.entry(s1 + s2).or_default().entry(sum).or_insert(Prov::Join {
                        s1,
                        i1,
                        i2,
                    });
                }
            }
        }
    }
    let mut sizes = BTreeMap::new();
    for (s, map) in acc {
        let mut vecs = Vec::with_capacity(map.len());
        let mut prov = Vec::with_capacity(map.len());
        for (w, p) in map {
            vecs.push(w);
            prov.push(p);
        }
        sizes.insert(s, SizeSlot { vecs, prov });
    }
    Ok(PartialTable { bag: a.bag.clone(), sizes })
}

/// One recorded prune: how large the slot was and what remained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneEvent {
    pub node: usize,
    pub size: usize,
    pub bag_len: usize,
    pub before: usize,
    pub after: usize,
}

/// A fully materialized prune, for auditing representativity on small bags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneSample {
    pub node: usize,
    pub size: usize,
    pub bag: Vec<VertexId>,
    /// Excluded lists of the bag vertices, in bag order.
    pub exs: Vec<Vec<u32>>,
    pub rank: u32,
    pub before: Vec<Vec<u32>>,
    pub after: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Audit {
    pub events: Vec<PruneEvent>,
    pub samples: Vec<PruneSample>,
}

/// Gates full-vector sampling: only bags up to `sample_max_bag`, at most
/// `sample_limit` samples overall. Size-only events are always recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditConfig {
    pub sample_max_bag: usize,
    pub sample_limit: usize,
}

/// When tables get pruned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneSchedule {
    /// After every node. Keeps every intermediate table at the rank bound.
    EveryNode,
    /// Only after forget and join nodes, letting introduce chains grow.
    ForgetJoinOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    /// Is there a solution with exactly this many edges?
    Decide(usize),
    Minimize,
    Maximize,
    AllSizes,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    pub schedule: PruneSchedule,
    /// Retain all tables and reconstruct an edge set for the chosen size.
    pub witness: bool,
    pub audit: Option<AuditConfig>,
    /// Prune size slots on a thread pool (needs the `parallel` feature).
    pub parallel: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            schedule: PruneSchedule::EveryNode,
            witness: false,
            audit: None,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    /// Sizes feasible at the root, restricted to the explored window (for
    /// [`Goal::Decide`] that window is the single requested size).
    pub feasible_sizes: Vec<usize>,
    /// The size answering the goal, if any.
    pub chosen: Option<usize>,
    pub witness: Option<Vec<EdgeId>>,
    pub audit: Audit,
    pub max_table_vectors: usize,
}

/// Prunes every oversized slot of the table, one event per slot pruned.
pub fn prune_table(
    table: &mut PartialTable,
    node: usize,
    rank: u32,
    field: PrimeField,
) -> Result<Vec<PruneEvent>, Error> {
    prune_table_opt(table, node, rank, field, false)
}

fn prune_table_opt(
    table: &mut PartialTable,
    node: usize,
    rank: u32,
    field: PrimeField,
    parallel: bool,
) -> Result<Vec<PruneEvent>, Error> {
    let k = table.bag.len();
    // slots at or below the rank bound are representative as they stand
    let cap = (rank as u64).checked_pow(k as u32);
    let todo: Vec<usize> = table
        .sizes
        .iter()
        .filter(|(_, slot)| match cap {
            Some(c) => slot.vecs.len() as u64 > c,
            None => false,
        })
        .map(|(&s, _)| s)
        .collect();
    let kept_sets = run_prunes(table, &todo, rank, field, parallel)?;
    let mut events = Vec::with_capacity(todo.len());
    for (s, kept) in todo.into_iter().zip(kept_sets) {
        let slot = table.sizes.get_mut(&s).expect("slot listed");
        let before = slot.vecs.len();
        slot.retain_indices(&kept);
        events.push(PruneEvent { node, size: s, bag_len: k, before, after: slot.vecs.len() });
    }
    Ok(events)
}

#[cfg(feature = "parallel")]
fn run_prunes(
    table: &PartialTable,
    todo: &[usize],
    rank: u32,
    field: PrimeField,
    parallel: bool,
) -> Result<Vec<Vec<usize>>, Error> {
    use rayon::prelude::*;
    if parallel && todo.len() > 1 {
        todo.par_iter()
            .map(|s| compute_representative_indices(&table.sizes[s].vecs, rank, field))
            .collect()
    } else {
        todo.iter()
            .map(|s| compute_representative_indices(&table.sizes[s].vecs, rank, field))
            .collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_prunes(
    table: &PartialTable,
    todo: &[usize],
    rank: u32,
    field: PrimeField,
    _parallel: bool,
) -> Result<Vec<Vec<usize>>, Error> {
    todo.iter()
        .map(|s| compute_representative_indices(&table.sizes[s].vecs, rank, field))
        .collect()
}

/// Runs the representative-set DP over the decomposition.
pub fn solve(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    goal: Goal,
    opts: &SolveOptions,
) -> Result<SolveReport, Error> {
    ntd.validate_nice(&inst.graph)?;
    let m = inst.graph.m();
    let rank = default_rank(&inst.constraints);
    let field = PrimeField::new(default_prime(&inst.graph));

    let mut below = vec![0usize; ntd.len()];
    for t in ntd.post_order() {
        let mut b = usize::from(matches!(ntd.node(t).kind, NodeKind::IntroduceEdge(_)));
        for &c in &ntd.node(t).children {
            b += below[c];
        }
        below[t] = b;
    }
    let (goal_lo, goal_hi) = match goal {
        Goal::Decide(s) => (s, s),
        _ => (0, m),
    };

    let mut slots: Vec<Option<PartialTable>> = (0..ntd.len()).map(|_| None).collect();
    let mut audit = Audit::default();
    let mut max_vecs = 0usize;

    for t in ntd.post_order() {
        let node = ntd.node(t);
        let child = |i: usize| slots[node.children[i]].as_ref().expect("child computed");
        let mut table = match node.kind {
            NodeKind::Leaf => ps_leaf(),
            NodeKind::IntroduceVertex(v) => ps_introduce_vertex(child(0), v)?,
            NodeKind::IntroduceEdge(e) => {
                let (u, v) = inst.graph.endpoints(e)?;
                ps_introduce_edge(child(0), e, u, v)?
            }
            NodeKind::Forget(v) => ps_forget(child(0), v, inst.constraints.excluded(v))?,
            NodeKind::Join => ps_join(child(0), child(1))?,
        };

        // sizes that cannot reach a goal-window size at the root: a subtree
        // holds below[t] of the edges, the rest of the tree the remainder
        let lo = goal_lo.saturating_sub(m - below[t]);
        let hi = below[t].min(goal_hi);
        table.sizes.retain(|&s, _| lo <= s && s <= hi);

        let do_prune = match opts.schedule {
            PruneSchedule::EveryNode => true,
            PruneSchedule::ForgetJoinOnly => {
                matches!(node.kind, NodeKind::Forget(_) | NodeKind::Join)
            }
        };
        if do_prune {
            let snapshot: Option<BTreeMap<usize, Vec<Vec<u32>>>> = match &opts.audit {
                Some(cfg)
                    if table.bag.len() <= cfg.sample_max_bag
                        && audit.samples.len() < cfg.sample_limit =>
                {
                    Some(
                        table
                            .sizes
                            .iter()
                            .map(|(&s, slot)| (s, slot.vecs.clone()))
                            .collect(),
                    )
                }
                _ => None,
            };
            let events = prune_table_opt(&mut table, t, rank, field, opts.parallel)?;
            if let (Some(cfg), Some(snap)) = (&opts.audit, snapshot) {
                for ev in &events {
                    if audit.samples.len() >= cfg.sample_limit {
                        break;
                    }
                    audit.samples.push(PruneSample {
                        node: t,
                        size: ev.size,
                        bag: table.bag.clone(),
                        exs: table
                            .bag
                            .iter()
                            .map(|&v| inst.constraints.excluded(v).to_vec())
                            .collect(),
                        rank,
                        before: snap[&ev.size].clone(),
                        after: table.sizes[&ev.size].vecs.clone(),
                    });
                }
            }
            audit.events.extend(events);
        }

        max_vecs = max_vecs.max(table.total_vectors());
        if !opts.witness {
            for &c in &node.children {
                slots[c] = None;
            }
        }
        slots[t] = Some(table);
    }

    let root = slots[ntd.root()].as_ref().expect("root computed");
    let feasible_sizes: Vec<usize> = root.sizes.keys().copied().collect();
    let chosen = match goal {
        Goal::Decide(s) => feasible_sizes.binary_search(&s).ok().map(|_| s),
        Goal::Minimize => feasible_sizes.first().copied(),
        Goal::Maximize => feasible_sizes.last().copied(),
        Goal::AllSizes => None,
    };
    let witness = match (opts.witness, chosen) {
        (true, Some(size)) => {
            let w = extract_witness(ntd, &slots, size);
            if !inst.is_solution(&w)? {
                return Err(Error::InvalidWitness(alloc::format!(
                    "reconstructed edge set of size {} fails the constraints",
                    w.len()
                )));
            }
            Some(w)
        }
        _ => None,
    };
    Ok(SolveReport { feasible_sizes, chosen, witness, audit, max_table_vectors: max_vecs })
}

fn extract_witness(
    ntd: &NiceTreeDecomposition,
    slots: &[Option<PartialTable>],
    size: usize,
) -> Vec<EdgeId> {
    let mut edges = Vec::new();
    // the root bag is empty, so its slot holds exactly one vector
    let mut stack = vec![(ntd.root(), size, 0usize)];
    while let Some((t, s, idx)) = stack.pop() {
        let table = slots[t].as_ref().expect("witness mode retains tables");
        let slot = &table.sizes[&s];
        let children = &ntd.node(t).children;
        match slot.prov[idx] {
            Prov::Leaf => {}
            Prov::Child { s: cs, idx: ci } => stack.push((children[0], cs, ci)),
            Prov::ChildEdge { s: cs, idx: ci, e } => {
                edges.push(e);
                stack.push((children[0], cs, ci));
            }
            Prov::Join { s1, i1, i2 } => {
                stack.push((children[0], s1, i1));
                stack.push((children[1], s - s1, i2));
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Is any solution of exactly `s` edges present?
pub fn decide(inst: &Instance, ntd: &NiceTreeDecomposition, s: usize) -> Result<bool, Error> {
    Ok(solve(inst, ntd, Goal::Decide(s), &SolveOptions::default())?.chosen.is_some())
}

/// Smallest solution size, if the instance is feasible at all.
pub fn minimize(inst: &Instance, ntd: &NiceTreeDecomposition) -> Result<Option<usize>, Error> {
    Ok(solve(inst, ntd, Goal::Minimize, &SolveOptions::default())?.chosen)
}

/// Largest solution size, if the instance is feasible at all.
pub fn maximize(inst: &Instance, ntd: &NiceTreeDecomposition) -> Result<Option<usize>, Error> {
    Ok(solve(inst, ntd, Goal::Maximize, &SolveOptions::default())?.chosen)
}

/// Every feasible solution size.
pub fn feasible_sizes(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
) -> Result<Vec<usize>, Error> {
    Ok(solve(inst, ntd, Goal::AllSizes, &SolveOptions::default())?.feasible_sizes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DegreeConstraints, MultiGraph};
    use crate::treedec::{make_nice, TreeDecomposition};

    fn nice_for(g: &MultiGraph, bags: Vec<Vec<usize>>, tree: Vec<(usize, usize)>) -> NiceTreeDecomposition {
        make_nice(&TreeDecomposition::new(bags, tree), g).unwrap()
    }

    #[test]
    fn singleton_universe_keeps_the_empty_vector() {
        let field = PrimeField::new(2);
        let kept = compute_representative_indices(&[vec![]], 1, field).unwrap();
        assert_eq!(kept, vec![0]);
    }

    #[test]
    fn rank_two_line_keeps_the_first_two_points() {
        let field = PrimeField::new(smallest_prime_above(4));
        assert_eq!(field.order(), 5);
        let vectors: Vec<Vec<u32>> = (0..4).map(|d| vec![d]).collect();
        let kept = compute_representative_indices(&vectors, 2, field).unwrap();
        assert_eq!(kept, vec![0, 1]);
    }

    #[test]
    fn antidiagonal_triple_survives_pruning() {
        let field = PrimeField::new(5);
        let vectors = vec![vec![0, 2], vec![1, 1], vec![2, 0]];
        let kept = compute_representative(&vectors, 3, field).unwrap();
        assert_eq!(kept, vectors);
    }

    #[test]
    fn pruning_is_idempotent() {
        let field = PrimeField::new(7);
        let vectors: Vec<Vec<u32>> =
            (0..4).flat_map(|a| (0..4).map(move |b| vec![a, b])).collect();
        let once = compute_representative(&vectors, 2, field).unwrap();
        assert!(once.len() <= 4);
        let twice = compute_representative(&once, 2, field).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn too_small_fields_are_rejected() {
        let field = PrimeField::new(3);
        let err = compute_representative_indices(&[vec![4]], 2, field).unwrap_err();
        assert_eq!(err, Error::FieldTooSmall { p: 3, needed: 5 });
    }

    #[test]
    fn vandermonde_compatibility_observation() {
        // det [v_a | v_b1 | v_b2] vanishes exactly when a collides with B
        let field = PrimeField::new(11);
        for a in 0u32..5 {
            for b1 in 0u32..5 {
                for b2 in (b1 + 1)..5 {
                    let mat = vec![
                        monomial_vector(&[a], 3, field),
                        monomial_vector(&[b1], 3, field),
                        monomial_vector(&[b2], 3, field),
                    ];
                    let det = det_mod(mat, field);
                    assert_eq!(det != 0, a != b1 && a != b2, "a={a} B={{{b1},{b2}}}");
                }
            }
        }
    }

    #[test]
    fn perfect_matchings_of_k4_decide_by_size() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let inst =
            Instance::new(g.clone(), DegreeConstraints::uniform(4, &[0, 2, 3])).unwrap();
        let ntd = nice_for(&g, vec![vec![0, 1, 2, 3]], vec![]);
        assert!(decide(&inst, &ntd, 2).unwrap());
        assert!(!decide(&inst, &ntd, 3).unwrap());
        assert!(!decide(&inst, &ntd, 0).unwrap());
    }

    #[test]
    fn k4_witness_is_a_perfect_matching() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let inst =
            Instance::new(g.clone(), DegreeConstraints::uniform(4, &[0, 2, 3])).unwrap();
        let ntd = nice_for(&g, vec![vec![0, 1, 2, 3]], vec![]);
        let opts = SolveOptions { witness: true, ..SolveOptions::default() };
        let report = solve(&inst, &ntd, Goal::Decide(2), &opts).unwrap();
        assert_eq!(report.chosen, Some(2));
        let w = report.witness.unwrap();
        assert_eq!(w.len(), 2);
        assert!(inst.is_solution(&w).unwrap());
    }

    #[test]
    fn triangle_edge_cover_bounds() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(3, &[0])).unwrap();
        let ntd = nice_for(&g, vec![vec![0, 1, 2]], vec![]);
        assert_eq!(minimize(&inst, &ntd).unwrap(), Some(2));
        assert_eq!(maximize(&inst, &ntd).unwrap(), Some(3));
        assert_eq!(feasible_sizes(&inst, &ntd).unwrap(), vec![2, 3]);
    }

    #[test]
    fn unconstrained_instances_allow_every_size() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = Instance::new(g.clone(), DegreeConstraints::unconstrained(3)).unwrap();
        let ntd = nice_for(&g, vec![vec![0, 1, 2]], vec![]);
        assert_eq!(minimize(&inst, &ntd).unwrap(), Some(0));
        assert_eq!(maximize(&inst, &ntd).unwrap(), Some(3));
    }

    #[test]
    fn infeasible_isolated_vertex() {
        let g = MultiGraph::new(1);
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(1, &[0])).unwrap();
        let ntd = nice_for(&g, vec![vec![0]], vec![]);
        assert_eq!(minimize(&inst, &ntd).unwrap(), None);
        assert!(!decide(&inst, &ntd, 0).unwrap());
    }

    #[test]
    fn prune_schedules_agree() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(4, &[1])).unwrap();
        let ntd = nice_for(&g, vec![vec![0, 1], vec![0, 2], vec![0, 3]], vec![(0, 1), (0, 2)]);
        let every = solve(&inst, &ntd, Goal::AllSizes, &SolveOptions::default()).unwrap();
        let lazy_opts = SolveOptions {
            schedule: PruneSchedule::ForgetJoinOnly,
            ..SolveOptions::default()
        };
        let lazy = solve(&inst, &ntd, Goal::AllSizes, &lazy_opts).unwrap();
        assert_eq!(every.feasible_sizes, lazy.feasible_sizes);
    }

    #[test]
    fn rank_one_pruning_records_events_and_stays_exact() {
        // no constraints anywhere: rank 1, every slot collapses to a single
        // representative, and every size must remain feasible
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = Instance::new(g.clone(), DegreeConstraints::unconstrained(3)).unwrap();
        let ntd = nice_for(&g, vec![vec![0, 1, 2]], vec![]);
        let opts = SolveOptions {
            audit: Some(AuditConfig { sample_max_bag: 3, sample_limit: 100 }),
            ..SolveOptions::default()
        };
        let report = solve(&inst, &ntd, Goal::AllSizes, &opts).unwrap();
        assert_eq!(report.feasible_sizes, vec![0, 1, 2, 3]);
        assert!(!report.audit.events.is_empty());
        for ev in &report.audit.events {
            assert_eq!(ev.after, 1);
            assert!(ev.before > ev.after);
        }
        assert!(!report.audit.samples.is_empty());
        for sample in &report.audit.samples {
            assert!(sample.bag.len() <= 3);
            assert_eq!(sample.rank, 1);
        }
    }

    #[test]
    fn decide_matches_counting_on_a_path() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(4, &[2])).unwrap();
        let ntd = nice_for(
            &g,
            vec![vec![0, 1], vec![1, 2], vec![2, 3]],
            vec![(0, 1), (1, 2)],
        );
        let counts = crate::countdp::run(&inst, &ntd, crate::countdp::JoinAlgo::Naive).unwrap();
        for (s, c) in counts.iter().enumerate() {
            use num_traits::Zero;
            assert_eq!(decide(&inst, &ntd, s).unwrap(), !c.is_zero(), "size {s}");
        }
    }
}
