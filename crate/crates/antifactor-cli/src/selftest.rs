//! Differential self-test suites: the independent implementations in the
//! library are run against each other on seeded random inputs. Any mismatch
//! is a bug somewhere, so the suites double as a quick install check.

use crate::gen::{self, ExFamily};
use antifactor::countdp::{self, CountTable, Dp, JoinAlgo};
use antifactor::oracle;
use antifactor::repset::{self, Goal, SolveOptions};
use antifactor::setanalysis;
use antifactor::treedec::{heuristic_decomposition, make_nice, NiceTreeDecomposition};
use antifactor::{DegreeConstraints, Instance, MultiGraph};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub trials: usize,
    pub seed: u64,
    /// Corrupts one comparison in the first suite; the run must then fail.
    pub inject_fault: bool,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub detail: Option<String>,
}

impl SuiteOutcome {
    fn pass(name: &'static str, trials: usize) -> Self {
        SuiteOutcome { name, trials, failures: 0, detail: None }
    }

    fn note(&mut self, detail: String) {
        self.failures += 1;
        if self.detail.is_none() {
            self.detail = Some(detail);
        }
    }
}

pub fn run(cfg: &Config) -> Vec<SuiteOutcome> {
    vec![
        counting_vs_oracle(cfg),
        repset_vs_oracle(cfg),
        join_equivalence(cfg),
        him_ap_lemmas(cfg),
        peeling_vs_oracle(cfg),
    ]
}

fn random_instance(rng: &mut impl Rng, fam: ExFamily) -> Instance {
    let n = rng.gen_range(2..=6);
    let cap = n * (n - 1) / 2;
    let m = rng.gen_range(0..=cap.min(9));
    let g = gen::er_graph(rng, n, m).expect("m within cap");
    let c = gen::random_constraints(rng, n, fam);
    Instance::new(g, c).expect("lengths match")
}

fn nice_of(g: &MultiGraph) -> NiceTreeDecomposition {
    make_nice(&heuristic_decomposition(g), g).expect("heuristic decomposition is valid")
}

fn counting_vs_oracle(cfg: &Config) -> SuiteOutcome {
    let mut out = SuiteOutcome::pass("count-dp-vs-oracle", cfg.trials);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x01);
    for trial in 0..cfg.trials {
        let inst = random_instance(&mut rng, ExFamily { max_size: 3, max_value: 3 });
        let ntd = nice_of(&inst.graph);
        let mut expected = oracle::enumerate(&inst, 25).expect("within budget").counts_by_size;
        if cfg.inject_fault && trial == 0 {
            expected[0] += 1u32;
        }
        for algo in [JoinAlgo::Naive, JoinAlgo::Zeta, JoinAlgo::ZetaNtt] {
            let got = countdp::run(&inst, &ntd, algo).expect("decomposition fits");
            if got != expected {
                out.note(format!("trial {trial}: {algo:?} counts disagree with the oracle"));
            }
        }
    }
    out
}

fn repset_vs_oracle(cfg: &Config) -> SuiteOutcome {
    let mut out = SuiteOutcome::pass("repset-vs-oracle", cfg.trials);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x02);
    for trial in 0..cfg.trials {
        let inst = random_instance(&mut rng, ExFamily { max_size: 2, max_value: 3 });
        let ntd = nice_of(&inst.graph);
        let report = oracle::enumerate(&inst, 25).expect("within budget");
        for (s, count) in report.counts_by_size.iter().enumerate() {
            match repset::decide(&inst, &ntd, s) {
                Ok(ans) if ans == !count.is_zero() => {}
                Ok(_) => out.note(format!("trial {trial}: decide({s}) disagrees")),
                Err(e) => out.note(format!("trial {trial}: decide({s}) failed: {e}")),
            }
        }
        if repset::minimize(&inst, &ntd).ok().flatten() != report.min_size {
            out.note(format!("trial {trial}: minimize disagrees"));
        }
        if repset::maximize(&inst, &ntd).ok().flatten() != report.max_size {
            out.note(format!("trial {trial}: maximize disagrees"));
        }
        if report.max_size.is_some() {
            let opts = SolveOptions { witness: true, ..SolveOptions::default() };
            match repset::solve(&inst, &ntd, Goal::Maximize, &opts) {
                Ok(r) => {
                    // solve re-validates the witness internally; check the size
                    let len = r.witness.as_ref().map(Vec::len);
                    if r.chosen != report.max_size || len != report.max_size {
                        out.note(format!("trial {trial}: maximize witness has the wrong size"));
                    }
                }
                Err(e) => out.note(format!("trial {trial}: witness extraction failed: {e}")),
            }
        }
    }
    out
}

/// Size vectors keyed by packed state, trailing zeros trimmed, for comparing
/// tables that may differ in stored zero entries.
fn canon(t: &CountTable) -> BTreeMap<u64, Vec<BigUint>> {
    let mut map = BTreeMap::new();
    for (key, counts) in t.iter() {
        let mut counts = counts.clone();
        while counts.last().is_some_and(Zero::is_zero) {
            counts.pop();
        }
        if !counts.is_empty() {
            map.insert(*key, counts);
        }
    }
    map
}

fn random_table(rng: &mut impl Rng, dp: &Dp, bag: &[usize]) -> CountTable {
    let mut t = CountTable::new(bag.to_vec());
    let entries = rng.gen_range(1..=8);
    for _ in 0..entries {
        let f: Vec<u32> = (0..bag.len()).map(|_| rng.gen_range(0..=dp.top())).collect();
        let s = rng.gen_range(0..=6);
        t.add(dp, &f, s, BigUint::from(rng.gen_range(1u32..=5)));
    }
    t
}

fn join_equivalence(cfg: &Config) -> SuiteOutcome {
    let mut out = SuiteOutcome::pass("join-equivalence", cfg.trials);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x03);
    for trial in 0..cfg.trials {
        let dp = Dp::with_max(rng.gen_range(0..=2));
        let bag: Vec<usize> = (0..rng.gen_range(1..=3)).collect();
        let a = random_table(&mut rng, &dp, &bag);
        let b = random_table(&mut rng, &dp, &bag);
        let naive = dp.join_naive(&a, &b).expect("same bag");
        let zeta = dp.join_zeta(&a, &b).expect("same bag");
        let ntt = dp.join_zeta_ntt(&a, &b).expect("same bag");
        if canon(&zeta) != canon(&naive) {
            out.note(format!("trial {trial}: join_zeta disagrees with join_naive"));
        }
        if canon(&ntt) != canon(&naive) {
            out.note(format!("trial {trial}: join_zeta_ntt disagrees with join_naive"));
        }
        let round = dp.mobius(&dp.zeta(&a));
        if canon(&round) != canon(&a) {
            out.note(format!("trial {trial}: mobius(zeta(t)) is not t"));
        }
    }
    out
}

fn random_ex(rng: &mut impl Rng) -> Vec<u32> {
    let size = rng.gen_range(1..=3);
    let mut ex = std::collections::BTreeSet::new();
    while ex.len() < size {
        ex.insert(rng.gen_range(0u32..=6));
    }
    ex.into_iter().collect()
}

fn him_ap_lemmas(cfg: &Config) -> SuiteOutcome {
    let mut out = SuiteOutcome::pass("him-ap-lemmas", cfg.trials);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x04);
    for trial in 0..cfg.trials {
        let ex = random_ex(&mut rng);
        let ap = setanalysis::longest_ap(&ex);
        match setanalysis::him_from_ap(&ex) {
            Ok(him) => {
                if him.size() != ap.len + 1 {
                    out.note(format!("trial {trial}: derived matching is not ap+1 for {ex:?}"));
                }
                if !setanalysis::verify_him(&ex, &him) {
                    out.note(format!("trial {trial}: derived matching fails checks for {ex:?}"));
                }
            }
            Err(e) => out.note(format!("trial {trial}: no matching for {ex:?}: {e}")),
        }
        let bound = (2 * ex.last().unwrap() + 2).min(16);
        match setanalysis::him_exhaustive(&ex, bound, ap.len + 1) {
            Ok(Some(him)) => {
                if !setanalysis::verify_him(&ex, &him) {
                    out.note(format!("trial {trial}: exhaustive matching fails checks"));
                }
            }
            Ok(None) => out.note(format!(
                "trial {trial}: exhaustive search misses the ap+1 matching for {ex:?}"
            )),
            Err(e) => out.note(format!("trial {trial}: exhaustive search refused: {e}")),
        }
    }
    out
}

fn peeling_vs_oracle(cfg: &Config) -> SuiteOutcome {
    let mut out = SuiteOutcome::pass("peeling-vs-oracle", cfg.trials);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x05);
    for trial in 0..cfg.trials {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(0..=(n * (n - 1) / 2).min(9));
        let g = gen::er_graph(&mut rng, n, m).expect("m within cap");
        let k = rng.gen_range(1..=2);
        let interval: Vec<u32> = (1..=k).collect();
        let peel = setanalysis::peel_max_interval(&g, k);
        let inst = Instance::new(g.clone(), DegreeConstraints::uniform(n, &interval))
            .expect("lengths match");
        if inst.is_solution(&peel) != Ok(true) {
            out.note(format!("trial {trial}: peel output is not a solution"));
        }
        let best = oracle::enumerate(&inst, 25).expect("within budget").max_size;
        if best != Some(peel.len()) {
            out.note(format!("trial {trial}: peel size {} is not optimal", peel.len()));
        }
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..5 {
            order.shuffle(&mut rng);
            let other = setanalysis::peel_with_order(&g, k, &order).expect("order in range");
            if other != peel {
                out.note(format!("trial {trial}: peeling depends on the vertex order"));
            }
        }
    }
    out
}
