//! Exact counting of solutions by size over a nice tree decomposition.
//!
//! Per-node tables map a state vector over `U = [0,M] ∪ {⊤}` (M is the global
//! maximum excluded value, ⊤ encoded as M+1) and a size `s` to the exact
//! number of partial solutions. ⊤ means "degree already exceeds M", which is
//! safe forever since excluded sets are finite.
//!
//! Join nodes can be evaluated naively (iterate entry pairs under the
//! saturating ⊕) or through the zeta transform, where for each fixed subset of
//! coordinates pinned to ⊤ the transformed tables combine by *exact*
//! coordinate sums and Möbius inversion recovers the result. The inner
//! convolution has a reference nested-loop form and an optional exact
//! number-theoretic-transform form ([`JoinAlgo::ZetaNtt`]); all three produce
//! identical tables.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{CheckedSub, Zero};

use crate::error::Error;
use crate::graph::{Instance, VertexId};
use crate::treedec::{NiceTreeDecomposition, NodeKind};

/// Join evaluation strategy. All strategies are exact and interchangeable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JoinAlgo {
    /// Direct iteration over entry pairs.
    Naive,
    /// Zeta transform, per-⊤-subset exact convolution by nested loops, Möbius.
    Zeta,
    /// Like `Zeta`, but the inner convolution runs through number-theoretic
    /// transforms with CRT recombination. Slower at desk scale; kept as an
    /// independently implemented cross-check.
    ZetaNtt,
}

/// Sparse per-node table: packed state vector -> counts by size.
///
/// States pack in radix `M+2` with coordinate `i` (position in the sorted
/// bag) at digit `i`. The size dimension is a dense vector whose length never
/// exceeds the number of edges introduced below the node, trailing zeros
/// trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub bag: Vec<VertexId>,
    map: BTreeMap<u64, Vec<BigUint>>,
}

/// Zeta-transformed tables have the same shape.
pub type ZetaTable = CountTable;

impl CountTable {
    pub fn new(bag: Vec<VertexId>) -> Self {
        CountTable { bag, map: BTreeMap::new() }
    }

    /// Number of distinct states stored.
    pub fn states(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &Vec<BigUint>)> {
        self.map.iter()
    }

    /// The count at (unpacked state `f`, size `s`); zero when absent.
    pub fn get(&self, dp: &Dp, f: &[u32], s: usize) -> BigUint {
        let key = dp.pack(f);
        self.map
            .get(&key)
            .and_then(|v| v.get(s))
            .cloned()
            .unwrap_or_else(BigUint::zero)
    }

    /// Adds `value` at (state `f`, size `s`).
    pub fn add(&mut self, dp: &Dp, f: &[u32], s: usize, value: BigUint) {
        debug_assert_eq!(f.len(), self.bag.len());
        let key = dp.pack(f);
        add_at(self.map.entry(key).or_default(), s, &value);
    }

    /// Drops all-zero entries and trailing zero counts, making equal tables
    /// structurally equal.
    fn normalize(&mut self) {
        self.map.retain(|_, v| {
            while v.last().is_some_and(Zero::is_zero) {
                v.pop();
            }
            !v.is_empty()
        });
    }

}

fn add_at(dst: &mut Vec<BigUint>, s: usize, value: &BigUint) {
    if dst.len() <= s {
        dst.resize(s + 1, BigUint::zero());
    }
    dst[s] += value;
}

/// Adds `src` into `dst` shifted up by `shift` sizes.
fn add_shifted(dst: &mut Vec<BigUint>, src: &[BigUint], shift: usize) {
    if dst.len() < src.len() + shift {
        dst.resize(src.len() + shift, BigUint::zero());
    }
    for (s, c) in src.iter().enumerate() {
        dst[s + shift] += c;
    }
}

/// DP context: the ceiling `M` and packing radix `M+2`.
#[derive(Debug, Clone, Copy)]
pub struct Dp {
    m: u32,
}

impl Dp {
    pub fn with_max(m: u32) -> Self {
        Dp { m }
    }

    /// Uses the instance-global `max Ex`. Degrees above it are excluded
    /// nowhere, so one shared ⊤ is sound even with heterogeneous lists.
    pub fn for_instance(inst: &Instance) -> Self {
        Dp { m: inst.constraints.max_excluded() }
    }

    pub fn max_ex(&self) -> u32 {
        self.m
    }

    /// The encoding of ⊤.
    pub fn top(&self) -> u32 {
        self.m + 1
    }

    fn radix(&self) -> u64 {
        self.m as u64 + 2
    }

    /// Errors out when `(M+2)^bag_len` does not fit the packed key type.
    pub fn check_capacity(&self, bag_len: usize) -> Result<(), Error> {
        let ok = u32::try_from(bag_len)
            .ok()
            .and_then(|b| self.radix().checked_pow(b))
            .is_some();
        if ok {
            Ok(())
        } else {
            Err(Error::StateSpaceTooLarge { radix: self.radix(), bag: bag_len })
        }
    }

    pub fn pack(&self, f: &[u32]) -> u64 {
        let mut key = 0u64;
        for &d in f.iter().rev() {
            debug_assert!(d <= self.top());
            key = key * self.radix() + d as u64;
        }
        key
    }

    pub fn unpack(&self, mut key: u64, len: usize) -> Vec<u32> {
        let mut f = Vec::with_capacity(len);
        for _ in 0..len {
            f.push((key % self.radix()) as u32);
            key /= self.radix();
        }
        f
    }

    fn digit(&self, key: u64, pos: usize) -> u32 {
        (key / self.radix().pow(pos as u32) % self.radix()) as u32
    }

    /// Saturating increment: d+1 if d+1 <= M, otherwise ⊤ (⊤ stays ⊤).
    fn succ(&self, d: u32) -> u32 {
        if d >= self.m {
            self.top()
        } else {
            d + 1
        }
    }

    /// The ⊕ operator: ⊤ absorbs, sums above M saturate to ⊤.
    fn oplus(&self, a: u32, b: u32) -> u32 {
        if a == self.top() || b == self.top() || a + b > self.m {
            self.top()
        } else {
            a + b
        }
    }

    /// The table of an empty leaf: one empty partial solution of size 0.
    pub fn leaf_table(&self) -> CountTable {
        let mut t = CountTable::new(Vec::new());
        t.map.insert(0, vec![BigUint::from(1u32)]);
        t
    }

    /// Extends every state with `f(v) = 0`; counts are untouched.
    pub fn introduce_vertex(&self, child: CountTable, v: VertexId) -> Result<CountTable, Error> {
        if child.bag.binary_search(&v).is_ok() {
            return Err(Error::DecompositionMismatch(alloc::format!(
                "introduce: vertex {v} already in bag"
            )));
        }
        let pos = child.bag.binary_search(&v).unwrap_err();
        let mut bag = child.bag;
        bag.insert(pos, v);
        self.check_capacity(bag.len())?;
        let below = self.radix().pow(pos as u32);
        let mut out = CountTable::new(bag);
        for (key, vec) in child.map {
            let nk = key % below + (key / below) * (below * self.radix());
            out.map.insert(nk, vec);
        }
        Ok(out)
    }

    /// Either the edge is skipped (state and size unchanged) or taken, in
    /// which case both endpoint coordinates advance by the saturating
    /// increment and the size by one. Scattering forward realizes the
    /// predecessor sets of the recurrence: d has predecessor d-1, ⊤ has {M,⊤}.
    pub fn introduce_edge(
        &self,
        child: CountTable,
        u: VertexId,
        v: VertexId,
    ) -> Result<CountTable, Error> {
        let (pu, pv) = match (child.bag.binary_search(&u), child.bag.binary_search(&v)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                return Err(Error::DecompositionMismatch(alloc::format!(
                    "introduce-edge: endpoints {u},{v} not both in bag"
                )))
            }
        };
        let mut out = CountTable::new(child.bag.clone());
        let (wu, wv) = (self.radix().pow(pu as u32), self.radix().pow(pv as u32));
        for (key, vec) in child.map {
            let du = self.digit(key, pu);
            let dv = self.digit(key, pv);
            let skey = key - du as u64 * wu - dv as u64 * wv
                + self.succ(du) as u64 * wu
                + self.succ(dv) as u64 * wv;
            add_shifted(out.map.entry(skey).or_default(), &vec, 1);
            add_shifted(out.map.entry(key).or_default(), &vec, 0);
        }
        out.normalize();
        Ok(out)
    }

    /// Sums out coordinate `v` over its allowed values: every d ∉ Ex_v plus ⊤
    /// (degrees beyond M are excluded nowhere).
    pub fn forget(
        &self,
        child: CountTable,
        v: VertexId,
        ex_v: &[u32],
    ) -> Result<CountTable, Error> {
        let pos = child.bag.binary_search(&v).map_err(|_| {
            Error::DecompositionMismatch(alloc::format!("forget: vertex {v} not in bag"))
        })?;
        let mut bag = child.bag;
        bag.remove(pos);
        let below = self.radix().pow(pos as u32);
        let mut out = CountTable::new(bag);
        for (key, vec) in child.map {
            let d = self.digit(key, pos);
            if d != self.top() && ex_v.binary_search(&d).is_ok() {
                continue;
            }
            let nk = key % below + key / (below * self.radix()) * below;
            match out.map.get_mut(&nk) {
                Some(dst) => add_shifted(dst, &vec, 0),
                None => {
                    out.map.insert(nk, vec);
                }
            }
        }
        out.normalize();
        Ok(out)
    }

    /// The join recurrence by direct iteration:
    /// `c[f,s] = Σ_{f1 ⊕ f2 = f} Σ_{s1+s2=s} c1[f1,s1] · c2[f2,s2]`.
    pub fn join_naive(&self, a: &CountTable, b: &CountTable) -> Result<CountTable, Error> {
        if a.bag != b.bag {
            return Err(Error::BagMismatch);
        }
        let k = a.bag.len();
        let mut out = CountTable::new(a.bag.clone());
        for (&k1, v1) in &a.map {
            let f1 = self.unpack(k1, k);
            for (&k2, v2) in &b.map {
                let f2 = self.unpack(k2, k);
                let f: Vec<u32> =
                    f1.iter().zip(&f2).map(|(&x, &y)| self.oplus(x, y)).collect();
                let dst = out.map.entry(self.pack(&f)).or_default();
                convolve_into(dst, v1, v2);
            }
        }
        out.normalize();
        Ok(out)
    }

    /// Coordinate-wise zeta transform: `ζ(c)(f,s) = Σ_{g ⪯ f} c[g,s]` where
    /// `g ⪯ f` holds coordinate-wise via `u ⪯ u` and `u ⪯ ⊤`. Only ⊤ rows
    /// change: per coordinate, the ⊤ row gains the sum of all finite rows.
    pub fn zeta(&self, t: &CountTable) -> ZetaTable {
        let mut out = t.clone();
        let top = self.top() as u64;
        for pos in 0..out.bag.len() {
            let w = self.radix().pow(pos as u32);
            let keys: Vec<u64> = out.map.keys().copied().collect();
            for key in keys {
                let d = self.digit(key, pos);
                if d != self.top() {
                    let src = out.map[&key].clone();
                    let tkey = key - d as u64 * w + top * w;
                    add_shifted(out.map.entry(tkey).or_default(), &src, 0);
                }
            }
        }
        out
    }

    /// Coordinate-wise Möbius inversion, the inverse of [`Dp::zeta`]. Panics
    /// if the input is not a genuine zeta image (counts would go negative).
    pub fn mobius(&self, t: &ZetaTable) -> CountTable {
        let mut out = t.clone();
        let top = self.top() as u64;
        for pos in 0..out.bag.len() {
            let w = self.radix().pow(pos as u32);
            let keys: Vec<u64> = out.map.keys().copied().collect();
            for key in keys {
                let d = self.digit(key, pos);
                if d != self.top() {
                    let src = out.map[&key].clone();
                    let tkey = key - d as u64 * w + top * w;
                    let dst = out.map.entry(tkey).or_default();
                    for (s, c) in src.iter().enumerate() {
                        if !c.is_zero() {
                            let cur = dst.get(s).cloned().unwrap_or_else(BigUint::zero);
                            dst[s] = cur.checked_sub(c).expect("not a zeta image");
                        }
                    }
                }
            }
        }
        out.normalize();
        out
    }

    /// The zeta-transform join. Transforms both tables, combines them per
    /// fixed ⊤-subset by exact (non-saturating) sums on the free coordinates,
    /// and inverts. Output is identical to [`Dp::join_naive`].
    pub fn join_zeta(&self, a: &CountTable, b: &CountTable) -> Result<CountTable, Error> {
        self.join_zeta_impl(a, b, false)
    }

    /// [`Dp::join_zeta`] with the transform-based inner convolution.
    pub fn join_zeta_ntt(&self, a: &CountTable, b: &CountTable) -> Result<CountTable, Error> {
        self.join_zeta_impl(a, b, true)
    }

    fn join_zeta_impl(
        &self,
        a: &CountTable,
        b: &CountTable,
        use_ntt: bool,
    ) -> Result<CountTable, Error> {
        if a.bag != b.bag {
            return Err(Error::BagMismatch);
        }
        let k = a.bag.len();
        let za = self.zeta(a);
        let zb = self.zeta(b);
        let ga = self.group_by_top_mask(&za, k);
        let gb = self.group_by_top_mask(&zb, k);
        let mut zout = CountTable::new(a.bag.clone());
        for (mask, ea) in &ga {
            let Some(eb) = gb.get(mask) else { continue };
            if use_ntt {
                ntt::convolve_group(self, *mask, k, ea, eb, &mut zout);
            } else {
                // Reference inner loop: free coordinates add exactly; sums
                // above M fall outside this ⊤-subset's slice and are dropped.
                for &(k1, ref v1) in ea {
                    let f1 = self.unpack(k1, k);
                    'pair: for &(k2, ref v2) in eb {
                        let f2 = self.unpack(k2, k);
                        let mut f = vec![0u32; k];
                        for i in 0..k {
                            if mask >> i & 1 == 1 {
                                f[i] = self.top();
                            } else {
                                f[i] = f1[i] + f2[i];
                                if f[i] > self.m {
                                    continue 'pair;
                                }
                            }
                        }
                        let dst = zout.map.entry(self.pack(&f)).or_default();
                        convolve_into(dst, v1, v2);
                    }
                }
            }
        }
        Ok(self.mobius(&zout))
    }

    fn group_by_top_mask(
        &self,
        t: &ZetaTable,
        k: usize,
    ) -> BTreeMap<u32, Vec<(u64, Vec<BigUint>)>> {
        let mut groups: BTreeMap<u32, Vec<(u64, Vec<BigUint>)>> = BTreeMap::new();
        for (&key, vec) in &t.map {
            let mut mask = 0u32;
            for pos in 0..k {
                if self.digit(key, pos) == self.top() {
                    mask |= 1 << pos;
                }
            }
            groups.entry(mask).or_default().push((key, vec.clone()));
        }
        groups
    }
}

fn convolve_into(dst: &mut Vec<BigUint>, v1: &[BigUint], v2: &[BigUint]) {
    if v1.is_empty() || v2.is_empty() {
        return;
    }
    if dst.len() < v1.len() + v2.len() - 1 {
        dst.resize(v1.len() + v2.len() - 1, BigUint::zero());
    }
    for (s1, c1) in v1.iter().enumerate() {
        if c1.is_zero() {
            continue;
        }
        for (s2, c2) in v2.iter().enumerate() {
            if !c2.is_zero() {
                dst[s1 + s2] += c1 * c2;
            }
        }
    }
}

/// Full run output: counts plus the observed table-size peak.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    /// Exact number of solutions of each size `0..=m`.
    pub counts_by_size: Vec<BigUint>,
    /// Largest number of states in any node table.
    pub max_table_states: usize,
}

/// Counts solutions of every size over the decomposition.
pub fn run(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    algo: JoinAlgo,
) -> Result<Vec<BigUint>, Error> {
    run_detailed(inst, ntd, algo, false).map(|o| o.counts_by_size)
}

enum NodeInput {
    None,
    One(CountTable),
    Two(CountTable, CountTable),
}

/// As [`run`], with table-size statistics. With the `parallel` feature and
/// `parallel = true`, independent nodes of one level are evaluated on a
/// thread pool; tables are pure functions of their children, so the result
/// is identical to the sequential one.
pub fn run_detailed(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    algo: JoinAlgo,
    parallel: bool,
) -> Result<RunOutput, Error> {
    ntd.validate_nice(&inst.graph)?;
    let dp = Dp::for_instance(inst);
    let width_plus = ntd.nodes().iter().map(|t| t.bag.len()).max().unwrap_or(0);
    dp.check_capacity(width_plus)?;

    let compute = |t: usize, input: NodeInput| -> Result<CountTable, Error> {
        match (ntd.node(t).kind, input) {
            (NodeKind::Leaf, NodeInput::None) => Ok(dp.leaf_table()),
            (NodeKind::IntroduceVertex(v), NodeInput::One(c)) => dp.introduce_vertex(c, v),
            (NodeKind::IntroduceEdge(e), NodeInput::One(c)) => {
                let (u, v) = inst.graph.endpoints(e)?;
                dp.introduce_edge(c, u, v)
            }
            (NodeKind::Forget(v), NodeInput::One(c)) => {
                dp.forget(c, v, inst.constraints.excluded(v))
            }
            (NodeKind::Join, NodeInput::Two(c1, c2)) => match algo {
                JoinAlgo::Naive => dp.join_naive(&c1, &c2),
                JoinAlgo::Zeta => dp.join_zeta(&c1, &c2),
                JoinAlgo::ZetaNtt => dp.join_zeta_ntt(&c1, &c2),
            },
            _ => Err(Error::DecompositionMismatch(alloc::format!(
                "node {t}: child count does not match its kind"
            ))),
        }
    };

    let mut slots: Vec<Option<CountTable>> = (0..ntd.len()).map(|_| None).collect();
    let mut max_states = 0usize;
    for level in ntd.levels() {
        let mut batch: Vec<(usize, NodeInput)> = Vec::with_capacity(level.len());
        for &t in &level {
            let kids = &ntd.node(t).children;
            let input = match kids.len() {
                0 => NodeInput::None,
                1 => NodeInput::One(slots[kids[0]].take().expect("child level done")),
                _ => NodeInput::Two(
                    slots[kids[0]].take().expect("child level done"),
                    slots[kids[1]].take().expect("child level done"),
                ),
            };
            batch.push((t, input));
        }
        let results = run_batch(&compute, batch, parallel)?;
        for (t, table) in results {
            max_states = max_states.max(table.states());
            slots[t] = Some(table);
        }
    }

    let root = slots[ntd.root()].take().expect("root computed");
    let mut counts = root.map.get(&0).cloned().unwrap_or_default();
    counts.resize(inst.graph.m() + 1, BigUint::zero());
    Ok(RunOutput { counts_by_size: counts, max_table_states: max_states })
}

#[cfg(feature = "parallel")]
fn run_batch<F>(
    compute: &F,
    batch: Vec<(usize, NodeInput)>,
    parallel: bool,
) -> Result<Vec<(usize, CountTable)>, Error>
where
    F: Fn(usize, NodeInput) -> Result<CountTable, Error> + Sync,
{
    use rayon::prelude::*;
    if parallel && batch.len() > 1 {
        batch
            .into_par_iter()
            .map(|(t, input)| compute(t, input).map(|table| (t, table)))
            .collect()
    } else {
        batch.into_iter().map(|(t, input)| compute(t, input).map(|table| (t, table))).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn run_batch<F>(
    compute: &F,
    batch: Vec<(usize, NodeInput)>,
    _parallel: bool,
) -> Result<Vec<(usize, CountTable)>, Error>
where
    F: Fn(usize, NodeInput) -> Result<CountTable, Error>,
{
    batch.into_iter().map(|(t, input)| compute(t, input).map(|table| (t, table))).collect()
}

/// Exact convolution through number-theoretic transforms. Cyclic dimensions
/// of length M+1 carry the free coordinates, one ordinary dimension carries
/// the coordinate-sum norm F (which filters the cyclic wrap-arounds, since a
/// wrapped coordinate inflates the norm), and one carries the size.
/// Residue results from enough NTT-friendly primes recombine by CRT below an
/// a-priori value bound, so the big-integer output is exact.
mod ntt {
    use super::*;
    use crate::modarith::{is_prime, mul_mod, pow_mod, prime_factors};

    pub(super) fn convolve_group(
        dp: &Dp,
        mask: u32,
        k: usize,
        ea: &[(u64, Vec<BigUint>)],
        eb: &[(u64, Vec<BigUint>)],
        zout: &mut CountTable,
    ) {
        let free: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 0).collect();
        let c = dp.max_ex() as usize + 1;
        let smax_a = ea.iter().map(|(_, v)| v.len()).max().unwrap_or(1).saturating_sub(1);
        let smax_b = eb.iter().map(|(_, v)| v.len()).max().unwrap_or(1).saturating_sub(1);
        let fmax = free.len() * dp.max_ex() as usize;
        let len_f = (2 * fmax + 1).next_power_of_two();
        let len_s = (smax_a + smax_b + 1).next_power_of_two();

        // dims: one cyclic of length c per free coordinate, then F, then s.
        let mut dims: Vec<usize> = vec![c; free.len()];
        dims.push(len_f);
        dims.push(len_s);
        let total: usize = dims.iter().product();

        let fill = |entries: &[(u64, Vec<BigUint>)]| -> Vec<BigUint> {
            let mut arr = vec![BigUint::zero(); total];
            for &(key, ref svec) in entries {
                let mut idx = 0usize;
                let mut norm = 0usize;
                for &pos in &free {
                    let d = dp.digit(key, pos) as usize;
                    idx = idx * c + d;
                    norm += d;
                }
                idx = (idx * len_f + norm) * len_s;
                for (s, val) in svec.iter().enumerate() {
                    arr[idx + s] = val.clone();
                }
            }
            arr
        };
        let arr_a = fill(ea);
        let arr_b = fill(eb);

        // Value bound: any output cell is at most (sum of a) * (sum of b).
        let mass = |entries: &[(u64, Vec<BigUint>)]| -> BigUint {
            let mut acc = BigUint::zero();
            for (_, v) in entries {
                for x in v {
                    acc += x;
                }
            }
            acc
        };
        let bound = mass(ea) * mass(eb) + 1u32;

        let primes = find_primes(&dims, &bound);
        let mut residues: Vec<Vec<u64>> = Vec::with_capacity(primes.len());
        for &q in &primes {
            let ra: Vec<u64> = arr_a.iter().map(|x| (x % q).try_into().unwrap()).collect();
            let rb: Vec<u64> = arr_b.iter().map(|x| (x % q).try_into().unwrap()).collect();
            residues.push(convolve_mod(&dims, ra, rb, q));
        }

        // CRT recombination, then scatter nonzero cells at F = ||f||.
        let read = |flat: usize| -> BigUint {
            let mut x = BigUint::from(residues[0][flat]);
            let mut modulus = BigUint::from(primes[0]);
            for (i, &q) in primes.iter().enumerate().skip(1) {
                let xq: u64 = (&x % q).try_into().unwrap();
                let mq: u64 = (&modulus % q).try_into().unwrap();
                let diff = (residues[i][flat] + q - xq) % q;
                let t = mul_mod(diff, pow_mod(mq, q - 2, q), q);
                x += &modulus * t;
                modulus *= q;
            }
            x
        };
        let mut fvec = vec![0u32; k];
        for (i, f) in fvec.iter_mut().enumerate() {
            if mask >> i & 1 == 1 {
                *f = dp.top();
            }
        }
        let cells = c.pow(free.len() as u32);
        for cell in 0..cells {
            let mut rest = cell;
            let mut norm = 0usize;
            for j in (0..free.len()).rev() {
                let d = rest % c;
                rest /= c;
                fvec[free[j]] = d as u32;
                norm += d;
            }
            let base = (cell * len_f + norm) * len_s;
            let mut svec: Vec<BigUint> = Vec::new();
            for s in 0..len_s {
                let val = read(base + s);
                if !val.is_zero() {
                    if svec.len() <= s {
                        svec.resize(s + 1, BigUint::zero());
                    }
                    svec[s] = val;
                }
            }
            if !svec.is_empty() {
                let key = dp.pack(&fvec);
                add_shifted(zout.map.entry(key).or_default(), &svec, 0);
            }
        }
    }

    /// NTT-friendly primes whose product exceeds `bound`: q ≡ 1 (mod L) with
    /// L = lcm of all dimension lengths, so every dimension has a root of
    /// unity of its exact order.
    fn find_primes(dims: &[usize], bound: &BigUint) -> Vec<u64> {
        let mut l = 1u64;
        for &d in dims {
            let d = d as u64;
            l = l / gcd(l, d) * d;
        }
        let mut primes = Vec::new();
        let mut product = BigUint::from(1u32);
        let mut t = (1u64 << 50) / l + 1;
        while &product <= bound {
            let q = t * l + 1;
            if is_prime(q) {
                primes.push(q);
                product *= q;
            }
            t += 1;
        }
        primes
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    /// Multi-dimensional cyclic convolution mod q. Ordinary dimensions were
    /// zero-padded by the caller; cyclic ones wrap by design.
    fn convolve_mod(dims: &[usize], mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> Vec<u64> {
        let g = generator(q);
        for (dim, &len) in dims.iter().enumerate() {
            let w = pow_mod(g, (q - 1) / len as u64, q);
            transform_dim(&mut a, dims, dim, w, q);
            transform_dim(&mut b, dims, dim, w, q);
        }
        for (x, y) in a.iter_mut().zip(&b) {
            *x = mul_mod(*x, *y, q);
        }
        for (dim, &len) in dims.iter().enumerate() {
            let w = pow_mod(g, (q - 1) / len as u64, q);
            let w_inv = pow_mod(w, q - 2, q);
            transform_dim(&mut a, dims, dim, w_inv, q);
            let n_inv = pow_mod(len as u64, q - 2, q);
            for x in a.iter_mut() {
                *x = mul_mod(*x, n_inv, q);
            }
        }
        a
    }

    /// DFT along one dimension of a flat row-major array, applied line by
    /// line: radix-2 when the length is a power of two, naive otherwise
    /// (cyclic dimensions are small).
    fn transform_dim(arr: &mut [u64], dims: &[usize], dim: usize, w: u64, q: u64) {
        let len = dims[dim];
        if len == 1 {
            return;
        }
        let stride: usize = dims[dim + 1..].iter().product();
        let block = stride * len;
        let mut line = vec![0u64; len];
        let mut base = 0;
        while base < arr.len() {
            for off in 0..stride {
                for i in 0..len {
                    line[i] = arr[base + off + i * stride];
                }
                let out = if len.is_power_of_two() {
                    ntt_pow2(&mut line, w, q)
                } else {
                    dft_naive(&line, w, q)
                };
                for i in 0..len {
                    arr[base + off + i * stride] = out[i];
                }
            }
            base += block;
        }
    }

    fn dft_naive(x: &[u64], w: u64, q: u64) -> Vec<u64> {
        let n = x.len();
        let mut out = vec![0u64; n];
        for (j, o) in out.iter_mut().enumerate() {
            let wj = pow_mod(w, j as u64, q);
            let mut acc = 0u64;
            let mut wij = 1u64;
            for &xi in x {
                acc = (acc + mul_mod(xi, wij, q)) % q;
                wij = mul_mod(wij, wj, q);
            }
            *o = acc;
        }
        out
    }

    /// Iterative radix-2 NTT (bit-reversal then butterflies).
    fn ntt_pow2(x: &mut [u64], w: u64, q: u64) -> Vec<u64> {
        let n = x.len();
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = (i as u64).reverse_bits().wrapping_shr(64 - bits) as usize;
            if i < j {
                x.swap(i, j);
            }
        }
        let mut span = 1;
        while span < n {
            let step = pow_mod(w, (n / (2 * span)) as u64, q);
            for start in (0..n).step_by(2 * span) {
                let mut tw = 1u64;
                for i in start..start + span {
                    let a = x[i];
                    let b = mul_mod(x[i + span], tw, q);
                    x[i] = (a + b) % q;
                    x[i + span] = (a + q - b) % q;
                    tw = mul_mod(tw, step, q);
                }
            }
            span *= 2;
        }
        x.to_vec()
    }

    /// Smallest generator of the multiplicative group of F_q.
    fn generator(q: u64) -> u64 {
        let factors = prime_factors(q - 1);
        'cand: for g in 2..q {
            for &p in &factors {
                if pow_mod(g, (q - 1) / p, q) == 1 {
                    continue 'cand;
                }
            }
            return g;
        }
        unreachable!("prime fields have generators")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DegreeConstraints, MultiGraph};
    use crate::treedec::{make_nice, TreeDecomposition};

    fn one() -> BigUint {
        BigUint::from(1u32)
    }

    fn table(dp: &Dp, bag: &[usize], entries: &[(&[u32], usize, u32)]) -> CountTable {
        let mut t = CountTable::new(bag.to_vec());
        for &(f, s, c) in entries {
            t.add(dp, f, s, BigUint::from(c));
        }
        t.normalize();
        t
    }

    #[test]
    fn leaf_table_is_a_single_unit_entry() {
        let dp = Dp::with_max(1);
        let t = dp.leaf_table();
        assert_eq!(t.states(), 1);
        assert_eq!(t.get(&dp, &[], 0), one());
        assert_eq!(dp.leaf_table(), t);
    }

    #[test]
    fn introduce_vertex_extends_states_with_zero() {
        let dp = Dp::with_max(1);
        let t = dp.introduce_vertex(dp.leaf_table(), 7).unwrap();
        assert_eq!(t.bag, vec![7]);
        assert_eq!(t.get(&dp, &[0], 0), one());
        assert_eq!(t.states(), 1);
        assert!(dp.introduce_vertex(t, 7).is_err());
    }

    #[test]
    fn introduce_edge_selects_or_skips() {
        let dp = Dp::with_max(1);
        let child = table(&dp, &[0, 1], &[(&[0, 0], 0, 1)]);
        let t = dp.introduce_edge(child, 0, 1).unwrap();
        assert_eq!(t.get(&dp, &[0, 0], 0), one());
        assert_eq!(t.get(&dp, &[1, 1], 1), one());
        assert_eq!(t.states(), 2);
    }

    #[test]
    fn introduce_edge_saturates_at_top() {
        let dp = Dp::with_max(0);
        let child = table(&dp, &[0, 1], &[(&[0, 0], 0, 1)]);
        let t = dp.introduce_edge(child, 0, 1).unwrap();
        assert_eq!(t.get(&dp, &[0, 0], 0), one());
        assert_eq!(t.get(&dp, &[1, 1], 1), one()); // 1 encodes ⊤ when M=0
    }

    #[test]
    fn top_has_two_predecessors() {
        // M=1: from degree (1,1) a parallel edge lands on (⊤,⊤).
        let dp = Dp::with_max(1);
        let child = table(&dp, &[0, 1], &[(&[0, 0], 0, 1)]);
        let t1 = dp.introduce_edge(child, 0, 1).unwrap();
        let t2 = dp.introduce_edge(t1, 0, 1).unwrap();
        assert_eq!(t2.get(&dp, &[2, 2], 2), one());
        // one count per choice of which parallel edge was taken
        assert_eq!(t2.get(&dp, &[1, 1], 1), BigUint::from(2u32));
        assert_eq!(t2.get(&dp, &[0, 0], 0), one());
    }

    #[test]
    fn forget_filters_excluded_degrees() {
        let dp = Dp::with_max(1);
        let child = table(&dp, &[3], &[(&[0], 0, 1), (&[2], 1, 1)]);
        let t = dp.forget(child, 3, &[0]).unwrap();
        assert_eq!(t.bag, Vec::<usize>::new());
        assert_eq!(t.get(&dp, &[], 0), BigUint::zero());
        assert_eq!(t.get(&dp, &[], 1), one());
    }

    #[test]
    fn forget_with_empty_exclusions_sums_all_branches() {
        let dp = Dp::with_max(1);
        let child = table(&dp, &[3], &[(&[0], 0, 1), (&[1], 0, 2), (&[2], 0, 4)]);
        let t = dp.forget(child, 3, &[]).unwrap();
        assert_eq!(t.get(&dp, &[], 0), BigUint::from(7u32));
    }

    #[test]
    fn forget_keeps_only_top_when_everything_finite_is_excluded() {
        let dp = Dp::with_max(1);
        let child = table(&dp, &[3], &[(&[0], 0, 1), (&[1], 0, 2), (&[2], 0, 4)]);
        let t = dp.forget(child, 3, &[0, 1]).unwrap();
        assert_eq!(t.get(&dp, &[], 0), BigUint::from(4u32));
    }

    #[test]
    fn join_naive_matches_the_displayed_sum() {
        let dp = Dp::with_max(1);
        let a = table(&dp, &[5], &[(&[0], 0, 1)]);
        assert_eq!(dp.join_naive(&a, &a).unwrap(), a);

        let b = table(&dp, &[5], &[(&[1], 1, 1)]);
        let bb = dp.join_naive(&b, &b).unwrap();
        assert_eq!(bb.get(&dp, &[2], 2), one()); // 1+1 > M saturates to ⊤

        let c1 = table(&dp, &[5], &[(&[2], 2, 2)]);
        let c2 = table(&dp, &[5], &[(&[0], 0, 3)]);
        let cc = dp.join_naive(&c1, &c2).unwrap();
        assert_eq!(cc.get(&dp, &[2], 2), BigUint::from(6u32));
    }

    #[test]
    fn join_bag_mismatch_is_reported() {
        let dp = Dp::with_max(1);
        let a = table(&dp, &[1], &[(&[0], 0, 1)]);
        let b = table(&dp, &[2], &[(&[0], 0, 1)]);
        assert_eq!(dp.join_naive(&a, &b), Err(Error::BagMismatch));
    }

    #[test]
    fn zeta_sums_finite_rows_into_top() {
        let dp = Dp::with_max(1);
        let t = table(&dp, &[4], &[(&[0], 0, 1), (&[1], 1, 2), (&[2], 1, 4)]);
        let z = dp.zeta(&t);
        assert_eq!(z.get(&dp, &[0], 0), one());
        assert_eq!(z.get(&dp, &[2], 0), one());
        assert_eq!(z.get(&dp, &[2], 1), BigUint::from(6u32));
        assert_eq!(dp.mobius(&z), t);
    }

    #[test]
    fn zeta_mobius_identity_on_a_two_coordinate_table() {
        let dp = Dp::with_max(2);
        let t = table(
            &dp,
            &[0, 9],
            &[(&[0, 3], 0, 1), (&[1, 1], 2, 5), (&[3, 3], 1, 7), (&[2, 0], 3, 2)],
        );
        assert_eq!(dp.mobius(&dp.zeta(&t)), t);
    }

    #[test]
    fn join_zeta_and_ntt_match_naive_on_mixed_tables() {
        let dp = Dp::with_max(2);
        let a = table(
            &dp,
            &[1, 2, 8],
            &[(&[0, 1, 3], 0, 1), (&[2, 2, 1], 2, 3), (&[3, 0, 0], 1, 2), (&[1, 1, 1], 1, 1)],
        );
        let b = table(
            &dp,
            &[1, 2, 8],
            &[(&[1, 0, 3], 1, 2), (&[2, 3, 2], 0, 1), (&[0, 0, 1], 2, 5)],
        );
        let naive = dp.join_naive(&a, &b).unwrap();
        assert_eq!(dp.join_zeta(&a, &b).unwrap(), naive);
        assert_eq!(dp.join_zeta_ntt(&a, &b).unwrap(), naive);
    }

    #[test]
    fn join_zeta_matches_naive_when_m_is_zero() {
        let dp = Dp::with_max(0);
        let a = table(&dp, &[1, 2], &[(&[0, 1], 0, 1), (&[1, 1], 2, 3)]);
        let b = table(&dp, &[1, 2], &[(&[0, 0], 1, 2), (&[1, 0], 0, 4)]);
        let naive = dp.join_naive(&a, &b).unwrap();
        assert_eq!(dp.join_zeta(&a, &b).unwrap(), naive);
        assert_eq!(dp.join_zeta_ntt(&a, &b).unwrap(), naive);
    }

    fn k3_counts(algo: JoinAlgo) -> Vec<BigUint> {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(3, &[0])).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2]], vec![]);
        let ntd = make_nice(&td, &g).unwrap();
        run(&inst, &ntd, algo).unwrap()
    }

    #[test]
    fn triangle_edge_cover_counts() {
        let expect: Vec<BigUint> =
            [0u32, 0, 3, 1].iter().map(|&x| BigUint::from(x)).collect();
        assert_eq!(k3_counts(JoinAlgo::Naive), expect);
        assert_eq!(k3_counts(JoinAlgo::Zeta), expect);
        assert_eq!(k3_counts(JoinAlgo::ZetaNtt), expect);
    }

    #[test]
    fn edgeless_graph_counts_the_empty_solution() {
        let g = MultiGraph::new(2);
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(2, &[1])).unwrap();
        let td = TreeDecomposition::new(vec![vec![0], vec![1]], vec![(0, 1)]);
        let ntd = make_nice(&td, &g).unwrap();
        assert_eq!(run(&inst, &ntd, JoinAlgo::Naive).unwrap(), vec![one()]);
    }

    #[test]
    fn excluded_zero_on_an_isolated_vertex_kills_everything() {
        let g = MultiGraph::new(1);
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(1, &[0])).unwrap();
        let td = TreeDecomposition::new(vec![vec![0]], vec![]);
        let ntd = make_nice(&td, &g).unwrap();
        assert_eq!(run(&inst, &ntd, JoinAlgo::Zeta).unwrap(), vec![BigUint::zero()]);
    }

    #[test]
    fn star_decomposition_with_joins_agrees_across_algorithms() {
        let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(4, &[1])).unwrap();
        let td = TreeDecomposition::new(
            vec![vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2)],
        );
        let ntd = make_nice(&td, &g).unwrap();
        let naive = run(&inst, &ntd, JoinAlgo::Naive).unwrap();
        assert_eq!(run(&inst, &ntd, JoinAlgo::Zeta).unwrap(), naive);
        assert_eq!(run(&inst, &ntd, JoinAlgo::ZetaNtt).unwrap(), naive);
        let oracle = crate::oracle::enumerate(&inst, 25).unwrap();
        assert_eq!(naive, oracle.counts_by_size);
    }

    #[test]
    fn run_reports_table_statistics() {
        let g = MultiGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(3, &[0])).unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1, 2]], vec![]);
        let ntd = make_nice(&td, &g).unwrap();
        let out = run_detailed(&inst, &ntd, JoinAlgo::Naive, false).unwrap();
        // M=0 gives at most (M+2)^bag = 2^3 states.
        assert!(out.max_table_states <= 8);
        assert_eq!(out.counts_by_size[2], BigUint::from(3u32));
    }
}
