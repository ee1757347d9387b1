//! Structural analysis of excluded-degree sets.
//!
//! The shape of an excluded set decides how hard the instance class is: sets
//! without two consecutive elements are polynomial, intervals `[1, k]` peel
//! away greedily, and sets containing a long arithmetic progression admit a
//! half-induced matching, the combinatorial gadget behind lower bounds. This
//! module computes those quantities, builds and verifies the witnesses, and
//! constructs the hard vector families a half-induced matching induces.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::graph::{DegreeConstraints, EdgeId, MultiGraph, VertexId};

/// A set of naturals, either listed or described by its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetDescriptor {
    Finite(Vec<u32>),
    ComplementOfFinite(Vec<u32>),
}

/// Length of the longest run of consecutive integers missing from the set,
/// counted strictly between its members. Finite sets ignore the horizon; a
/// cofinite set needs `horizon >= max(excluded) + 2` so the run past the last
/// excluded value is provably closed.
pub fn maxgap(desc: &SetDescriptor, horizon: u32) -> Result<u32, Error> {
    let members: Vec<u32> = match desc {
        SetDescriptor::Finite(xs) => {
            let mut v = xs.clone();
            v.sort_unstable();
            v.dedup();
            v
        }
        SetDescriptor::ComplementOfFinite(xs) => {
            let out: BTreeSet<u32> = xs.iter().copied().collect();
            let needed = out.iter().next_back().map_or(0, |&mx| mx + 2);
            if horizon < needed {
                return Err(Error::HorizonTooSmall { horizon, needed });
            }
            // beyond max(excluded)+1 the set is an unbroken run
            (0..=needed.saturating_sub(1)).filter(|d| !out.contains(d)).collect()
        }
    };
    let mut gap = 0;
    for w in members.windows(2) {
        gap = gap.max(w[1] - w[0] - 1);
    }
    Ok(gap)
}

/// The longest arithmetic progression inside a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LongestAp {
    pub len: usize,
    pub start: Option<u32>,
    /// `None` when the progression has fewer than two elements.
    pub diff: Option<u32>,
}

/// Exhaustive scan over differences and starting points. Ties prefer the
/// smallest difference, then the smallest start.
pub fn longest_ap(ex: &[u32]) -> LongestAp {
    let mut elems = ex.to_vec();
    elems.sort_unstable();
    elems.dedup();
    let Some(&min) = elems.first() else {
        return LongestAp { len: 0, start: None, diff: None };
    };
    let max = *elems.last().expect("nonempty");
    let set: BTreeSet<u64> = elems.iter().map(|&x| x as u64).collect();
    let mut best = LongestAp { len: 1, start: Some(min), diff: None };
    for d in 1..=(max - min).max(1) as u64 {
        for &a in &elems {
            let mut len = 1usize;
            while set.contains(&(a as u64 + len as u64 * d)) {
                len += 1;
            }
            if len > best.len {
                best = LongestAp { len, start: Some(a), diff: Some(d as u32) };
            }
        }
    }
    best
}

/// Sequences `a_1 < .. < a_t` and `b_1 > .. > b_t` with every diagonal sum
/// `a_i + b_i` outside the set and every upper sum `a_i + b_j` (i < j)
/// inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfInducedMatching {
    pub pairs: Vec<(u32, u32)>,
}

impl HalfInducedMatching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }
}

pub fn verify_him(ex: &[u32], him: &HalfInducedMatching) -> bool {
    let set: BTreeSet<u64> = ex.iter().map(|&x| x as u64).collect();
    let t = him.pairs.len();
    for i in 0..t {
        let (ai, bi) = him.pairs[i];
        if i + 1 < t {
            let (an, bn) = him.pairs[i + 1];
            if ai >= an || bi <= bn {
                return false;
            }
        }
        if set.contains(&(ai as u64 + bi as u64)) {
            return false;
        }
        for j in i + 1..t {
            let bj = him.pairs[j].1;
            if !set.contains(&(ai as u64 + bj as u64)) {
                return false;
            }
        }
    }
    true
}

/// Builds a half-induced matching of size `len+1` out of the longest
/// arithmetic progression `a, a+d, .., a+(len-1)d`: take `a_i = d(i-1)` and
/// `b_i = a + (len+1-i)d`. Maximality of the progression puts the diagonal
/// sum `a + len*d` outside the set, and every upper sum lands inside it.
pub fn him_from_ap(ex: &[u32]) -> Result<HalfInducedMatching, Error> {
    let ap = longest_ap(ex);
    let Some(a) = ap.start else {
        return Err(Error::UnsupportedConstraints("empty excluded set has no arithmetic progression".to_string()));
    };
    let l = ap.len as u64;
    let d = ap.diff.unwrap_or(1) as u64;
    let mut pairs = Vec::with_capacity(ap.len + 1);
    for i in 1..=l + 1 {
        let ai = d * (i - 1);
        let bi = a as u64 + (l + 1 - i) * d;
        let (Ok(ai), Ok(bi)) = (u32::try_from(ai), u32::try_from(bi)) else {
            return Err(Error::UnsupportedConstraints("excluded values too large for a matching witness".to_string()));
        };
        pairs.push((ai, bi));
    }
    let him = HalfInducedMatching { pairs };
    if !verify_him(ex, &him) {
        return Err(Error::InvalidWitness("progression-derived matching failed verification".to_string()));
    }
    Ok(him)
}

/// Backtracking search for a half-induced matching of exactly `target` pairs
/// with all values at most `value_bound`. Enumeration is lexicographic over
/// `(a_1, b_1, a_2, b_2, ..)`, so the first hit is deterministic. Bounds
/// above 16 are refused.
pub fn him_exhaustive(
    ex: &[u32],
    value_bound: u32,
    target: usize,
) -> Result<Option<HalfInducedMatching>, Error> {
    if value_bound > 16 {
        return Err(Error::BudgetExceeded { size: value_bound as usize, budget: 16 });
    }
    let set: BTreeSet<u64> = ex.iter().map(|&x| x as u64).collect();
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(target);
    if search_him(&set, value_bound, target, &mut pairs) {
        Ok(Some(HalfInducedMatching { pairs }))
    } else {
        Ok(None)
    }
}

fn search_him(
    set: &BTreeSet<u64>,
    bound: u32,
    target: usize,
    pairs: &mut Vec<(u32, u32)>,
) -> bool {
    if pairs.len() == target {
        return true;
    }
    let a_from = pairs.last().map_or(0, |&(a, _)| a + 1);
    let b_below = pairs.last().map_or(bound + 1, |&(_, b)| b);
    for a in a_from..=bound {
        'b: for b in 0..b_below {
            // every earlier row must see this column inside the set
            for &(aj, _) in pairs.iter() {
                if !set.contains(&(aj as u64 + b as u64)) {
                    continue 'b;
                }
            }
            if set.contains(&(a as u64 + b as u64)) {
                continue;
            }
            pairs.push((a, b));
            if search_him(set, bound, target, pairs) {
                return true;
            }
            pairs.pop();
        }
    }
    false
}

/// The vector family a half-induced matching pins down: among index vectors
/// of `A^k` grouped by index sum, the largest group together with per-vector
/// partner vectors from the B side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardRepset {
    /// The index sum whose group is largest (smallest such on ties).
    pub q_star: usize,
    pub vectors: Vec<Vec<u32>>,
    /// `partners[i]` is compatible with `vectors[i]` and with no other
    /// vector of the family.
    pub partners: Vec<Vec<u32>>,
}

/// Index sums are 1-based: the vector `(a_{i_1}, .., a_{i_k})` lands in group
/// `i_1 + .. + i_k`, and its partner is `(b_{i_1}, .., b_{i_k})`. Any two
/// distinct vectors of one group differ by an index drop somewhere, which an
/// upper sum of the matching turns into an excluded degree.
pub fn build_hard_repset(
    ex: &[u32],
    him: &HalfInducedMatching,
    k: usize,
) -> Result<HardRepset, Error> {
    assert!(k >= 1, "vector arity must be positive");
    if him.pairs.len() < 2 || !verify_him(ex, him) {
        return Err(Error::InvalidWitness("hard families need a verified matching of size at least 2".to_string()));
    }
    let l = him.pairs.len();
    let total = (l as u64).checked_pow(k as u32);
    match total {
        Some(t) if t <= 1_000_000 => {}
        _ => {
            return Err(Error::BudgetExceeded {
                size: total.and_then(|t| usize::try_from(t).ok()).unwrap_or(usize::MAX),
                budget: 1_000_000,
            })
        }
    }
    // enumerate index tuples of [1, l]^k lexicographically
    let mut groups: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    let mut idx = vec![1usize; k];
    loop {
        groups.entry(idx.iter().sum()).or_default().push(idx.clone());
        let mut pos = k;
        while pos > 0 {
            if idx[pos - 1] < l {
                idx[pos - 1] += 1;
                break;
            }
            idx[pos - 1] = 1;
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
    }
    let (&q_star, tuples) = groups
        .iter()
        .max_by(|(qa, ta), (qb, tb)| ta.len().cmp(&tb.len()).then(qb.cmp(qa)))
        .expect("at least one group");
    let vectors = tuples
        .iter()
        .map(|t| t.iter().map(|&i| him.pairs[i - 1].0).collect())
        .collect();
    let partners = tuples
        .iter()
        .map(|t| t.iter().map(|&i| him.pairs[i - 1].1).collect())
        .collect();
    Ok(HardRepset { q_star, vectors, partners })
}

/// Complexity-class indicators for one excluded set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassTag {
    /// 0 is allowed, so the empty edge set is always a solution.
    TrivialDecision,
    /// No two consecutive excluded values.
    PolyCornuejols,
    /// The set is exactly the interval `[1, k]`.
    PolyMaxInterval { k: u32 },
    /// Two consecutive excluded values and not an interval `[1, k]`; the
    /// matching lower bound is attached.
    HardCandidate { him_lower: usize },
}

fn interval_from_one(ex: &[u32]) -> Option<u32> {
    let first = *ex.first()?;
    if first != 1 {
        return None;
    }
    for w in ex.windows(2) {
        if w[1] != w[0] + 1 {
            return None;
        }
    }
    Some(*ex.last().expect("nonempty"))
}

/// All tags that apply, in a fixed order.
pub fn classify(ex: &[u32]) -> Vec<ClassTag> {
    let mut elems = ex.to_vec();
    elems.sort_unstable();
    elems.dedup();
    let mut tags = Vec::new();
    if elems.binary_search(&0).is_err() {
        tags.push(ClassTag::TrivialDecision);
    }
    let consecutive = elems.windows(2).any(|w| w[1] == w[0] + 1);
    if !consecutive {
        tags.push(ClassTag::PolyCornuejols);
    }
    let interval = interval_from_one(&elems);
    if let Some(k) = interval {
        tags.push(ClassTag::PolyMaxInterval { k });
    }
    if consecutive && interval.is_none() {
        tags.push(ClassTag::HardCandidate { him_lower: longest_ap(&elems).len + 1 });
    }
    tags
}

/// Everything the analyzers know about one set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetProfile {
    pub ex: Vec<u32>,
    pub longest_ap: LongestAp,
    pub tags: Vec<ClassTag>,
    pub him: Option<HalfInducedMatching>,
}

pub fn profile(ex: &[u32]) -> SetProfile {
    let mut elems = ex.to_vec();
    elems.sort_unstable();
    elems.dedup();
    let him = him_from_ap(&elems).ok();
    SetProfile { longest_ap: longest_ap(&elems), tags: classify(&elems), ex: elems, him }
}

/// When every vertex excludes exactly the same interval `[1, k]`, that `k`.
pub fn as_max_interval(c: &DegreeConstraints) -> Option<u32> {
    let mut common: Option<u32> = None;
    for v in 0..c.len() {
        let k = interval_from_one(c.excluded(v))?;
        match common {
            None => common = Some(k),
            Some(c0) if c0 == k => {}
            _ => return None,
        }
    }
    common
}

/// Maximum solution for the interval exclusion `[1, k]`: keep the unique
/// largest edge set in which every vertex has degree 0 or at least `k+1`.
/// Peeling (repeatedly dropping all edges at a vertex with degree in
/// `[1, k]`) reaches it from any scan order.
pub fn peel_max_interval(g: &MultiGraph, k: u32) -> Vec<EdgeId> {
    let order: Vec<VertexId> = (0..g.n()).collect();
    peel_with_order(g, k, &order).expect("identity order is valid")
}

/// As [`peel_max_interval`] with an explicit vertex scan order, repeated
/// until a clean pass. The fixpoint does not depend on the order.
pub fn peel_with_order(
    g: &MultiGraph,
    k: u32,
    order: &[VertexId],
) -> Result<Vec<EdgeId>, Error> {
    for &v in order {
        if v >= g.n() {
            return Err(Error::VertexOutOfRange { v, n: g.n() });
        }
    }
    let mut alive = vec![true; g.m()];
    let mut deg = vec![0u32; g.n()];
    for (_, u, v) in g.edges() {
        deg[u] += 1;
        deg[v] += 1;
    }
    loop {
        let mut changed = false;
        for &v in order {
            if deg[v] >= 1 && deg[v] <= k {
                for e in g.incident(v) {
                    if alive[e] {
                        alive[e] = false;
                        let (x, y) = g.endpoints(e).expect("edge exists");
                        deg[x] -= 1;
                        deg[y] -= 1;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok((0..g.m()).filter(|&e| alive[e]).collect())
}
