//! Brute-force ground truth: exact per-size solution counts, min/max, and a
//! deterministic witness, by iterating all 2^m edge subsets.
//!
//! Deliberately free of cleverness beyond Gray-code incremental updates; this
//! module is the reference everything else is tested against.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::Error;
use crate::graph::{EdgeId, Instance};

/// Hard cap on the edge count accepted by [`enumerate`].
pub const DEFAULT_EDGE_BUDGET: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Exact number of solutions of each size `0..=m`.
    pub counts_by_size: Vec<BigUint>,
    pub total: BigUint,
    pub min_size: Option<usize>,
    pub max_size: Option<usize>,
    /// Lexicographically least solution of maximum size, as sorted edge ids.
    pub witness: Option<Vec<EdgeId>>,
}

/// Iterates all subsets of the edge set (Gray code, incremental degrees) and
/// tallies exact counts per size. Refuses when `m > edge_budget`.
pub fn enumerate(inst: &Instance, edge_budget: usize) -> Result<OracleReport, Error> {
    let g = &inst.graph;
    let m = g.m();
    // Masks are u64, so 63 is a hard ceiling regardless of the budget asked for.
    if m > edge_budget.min(63) {
        return Err(Error::BudgetExceeded { size: m, budget: edge_budget.min(63) });
    }

    let ends: Vec<(usize, usize)> =
        (0..m).map(|e| g.endpoints(e).expect("dense edge ids")).collect();
    let mut deg = vec![0u32; g.n()];
    // Number of vertices whose current degree is excluded.
    let mut bad =
        (0..g.n()).filter(|&v| inst.constraints.is_excluded(v, 0)).count();

    let mut counts = vec![BigUint::zero(); m + 1];
    let mut size = 0usize;
    let mut mask = 0u64;
    let mut best: Option<(usize, u64)> = None;

    let mut record = |size: usize, mask: u64, counts: &mut Vec<BigUint>| {
        counts[size] += 1u32;
        match best {
            Some((bs, bm)) => {
                if size > bs {
                    best = Some((size, mask));
                } else if size == bs && mask != bm {
                    // Equal-size edge sets compare lexicographically by their
                    // sorted id sequences: the set containing the lowest
                    // differing id is the smaller one.
                    let low = (mask ^ bm) & (mask ^ bm).wrapping_neg();
                    if mask & low != 0 {
                        best = Some((size, mask));
                    }
                }
            }
            None => best = Some((size, mask)),
        }
    };

    if bad == 0 {
        record(0, 0, &mut counts);
    }
    for i in 1u64..(1u64 << m) {
        let j = i.trailing_zeros() as usize;
        mask ^= 1 << j;
        let inserted = mask >> j & 1 == 1;
        let (u, v) = ends[j];
        for w in [u, v] {
            if inst.constraints.is_excluded(w, deg[w]) {
                bad -= 1;
            }
            if inserted {
                deg[w] += 1;
            } else {
                deg[w] -= 1;
            }
            if inst.constraints.is_excluded(w, deg[w]) {
                bad += 1;
            }
        }
        if inserted {
            size += 1;
        } else {
            size -= 1;
        }
        if bad == 0 {
            record(size, mask, &mut counts);
        }
    }

    let total: BigUint = counts.iter().sum();
    let min_size = counts.iter().position(|c| !c.is_zero());
    let max_size = counts.iter().rposition(|c| !c.is_zero());
    let witness = best.map(|(_, bm)| (0..m).filter(|e| bm >> e & 1 == 1).collect());
    Ok(OracleReport { counts_by_size: counts, total, min_size, max_size, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DegreeConstraints, MultiGraph};

    fn inst(n: usize, edges: &[(usize, usize)], ex: &[u32]) -> Instance {
        let g = MultiGraph::from_edges(n, edges).unwrap();
        Instance::new(g, DegreeConstraints::uniform(n, ex)).unwrap()
    }

    fn big(v: &[u32]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn triangle_edge_covers() {
        let r = enumerate(&inst(3, &[(0, 1), (1, 2), (0, 2)], &[0]), 25).unwrap();
        assert_eq!(r.counts_by_size, big(&[0, 0, 3, 1]));
        assert_eq!(r.total, BigUint::from(4u32));
        assert_eq!(r.min_size, Some(2));
        assert_eq!(r.max_size, Some(3));
        assert_eq!(r.witness, Some(vec![0, 1, 2]));
    }

    #[test]
    fn path_edge_cover_is_unique() {
        let r = enumerate(&inst(3, &[(0, 1), (1, 2)], &[0]), 25).unwrap();
        assert_eq!(r.total, BigUint::from(1u32));
        assert_eq!(r.min_size, Some(2));
        assert_eq!(r.max_size, Some(2));
        assert_eq!(r.witness, Some(vec![0, 1]));
    }

    #[test]
    fn k4_perfect_matchings() {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let r = enumerate(&inst(4, &edges, &[0, 2, 3]), 25).unwrap();
        assert_eq!(r.total, BigUint::from(3u32));
        assert_eq!(r.counts_by_size[2], BigUint::from(3u32));
        assert_eq!(r.min_size, Some(2));
        assert_eq!(r.max_size, Some(2));
        // The three matchings are {0,5}, {1,4}, {2,3}; the first is least.
        assert_eq!(r.witness, Some(vec![0, 5]));
    }

    #[test]
    fn infeasible_instance_has_no_witness() {
        let r = enumerate(&inst(1, &[], &[0]), 25).unwrap();
        assert!(r.total.is_zero());
        assert_eq!(r.min_size, None);
        assert_eq!(r.max_size, None);
        assert_eq!(r.witness, None);
    }

    #[test]
    fn budget_refusal() {
        let i = inst(3, &[(0, 1), (1, 2)], &[]);
        assert_eq!(enumerate(&i, 1), Err(Error::BudgetExceeded { size: 2, budget: 1 }));
    }

    #[test]
    fn unconstrained_counts_are_binomials() {
        let r = enumerate(&inst(3, &[(0, 1), (1, 2), (0, 2)], &[]), 25).unwrap();
        assert_eq!(r.counts_by_size, big(&[1, 3, 3, 1]));
        assert_eq!(r.witness, Some(vec![0, 1, 2]));
    }

    #[test]
    fn witness_is_lex_least_among_ties() {
        // Path on three vertices, middle vertex excludes degree 2: the max
        // size is 1, reached by {0} and {1}, and {0} must win.
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let c = DegreeConstraints::new(vec![vec![], vec![2], vec![]]);
        let r = enumerate(&Instance::new(g, c).unwrap(), 25).unwrap();
        assert_eq!(r.max_size, Some(1));
        assert_eq!(r.witness, Some(vec![0]));
    }
}
