//! antifactor: solve, analyze, generate, and self-test degree-constrained
//! edge-subset problems.
//!
//! Exit codes: 0 success (decide: yes), 1 no solution or failed self-test,
//! 2 input error, 3 budget refusal. Reports go to stdout; width and wall
//! time go to stderr so stdout stays byte-stable across runs and `--parallel`.

mod formats;
mod gen;
mod report;
mod selftest;

use antifactor::countdp::{self, JoinAlgo};
use antifactor::oracle;
use antifactor::repset::{self, Goal, PruneSchedule, SolveOptions};
use antifactor::setanalysis::{self, ClassTag, SetDescriptor};
use antifactor::treedec::{heuristic_decomposition, make_nice};
use antifactor::{DegreeConstraints, Error, Instance, MultiGraph};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use report::{AnalyzeReport, ApReport, CountReport, DecideReport, Format, GenReport, OptReport};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;
use std::{fmt::Write as _, fs};

#[derive(Parser)]
#[command(name = "antifactor", version, about = "Degree-constrained edge subset solvers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide, count, or optimize solutions of one instance.
    Solve(SolveArgs),
    /// Structural analysis of excluded-degree sets.
    Analyze(AnalyzeArgs),
    /// Generate a reproducible random instance.
    Gen(GenArgs),
    /// Run the differential self-test suites.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeOpt {
    Decide,
    Count,
    Min,
    Max,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoOpt {
    /// Exhaustive subset enumeration (ground truth, small m only).
    Brute,
    /// Counting DP with the naive join.
    Dp,
    /// Counting DP with the zeta-transform join.
    DpZeta,
    /// Counting DP with the transform join evaluated by NTT.
    DpNtt,
    /// Representative-set pruned decision/optimization DP.
    Repset,
}

impl AlgoOpt {
    fn name(self) -> &'static str {
        match self {
            AlgoOpt::Brute => "brute",
            AlgoOpt::Dp => "dp",
            AlgoOpt::DpZeta => "dp-zeta",
            AlgoOpt::DpNtt => "dp-ntt",
            AlgoOpt::Repset => "repset",
        }
    }

    fn join(self) -> Option<JoinAlgo> {
        match self {
            AlgoOpt::Dp => Some(JoinAlgo::Naive),
            AlgoOpt::DpZeta => Some(JoinAlgo::Zeta),
            AlgoOpt::DpNtt => Some(JoinAlgo::ZetaNtt),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatOpt {
    Text,
    JsonLines,
}

impl From<FormatOpt> for Format {
    fn from(f: FormatOpt) -> Format {
        match f {
            FormatOpt::Text => Format::Text,
            FormatOpt::JsonLines => Format::JsonLines,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScheduleOpt {
    EveryNode,
    ForgetJoinOnly,
}

#[derive(Args)]
struct SolveArgs {
    /// Graph file (`p af <n> <m>` header, `e <u> <v>` lines).
    #[arg(long)]
    graph: PathBuf,
    /// Constraints file (`x <v> <k> <d...>` lines); omitted vertices are unconstrained.
    #[arg(long)]
    constraints: Option<PathBuf>,
    /// Tree decomposition file; a min-fill heuristic runs when absent.
    #[arg(long)]
    td: Option<PathBuf>,
    /// Write the decomposition that was used (handy to freeze a heuristic one).
    #[arg(long)]
    emit_td: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: ModeOpt,
    #[arg(long, value_enum, default_value = "dp")]
    algo: AlgoOpt,
    /// Target size for decide mode.
    #[arg(long)]
    size: Option<usize>,
    /// Report a solution's edge ids (repset or brute only).
    #[arg(long)]
    witness: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatOpt,
    /// Edge budget for the brute-force oracle.
    #[arg(long, default_value_t = oracle::DEFAULT_EDGE_BUDGET)]
    budget: usize,
    /// Evaluate independent subtrees on a thread pool. Output is identical.
    #[arg(long)]
    parallel: bool,
    /// When the repset tables are pruned.
    #[arg(long, value_enum, default_value = "every-node")]
    schedule: ScheduleOpt,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Excluded set to analyze, comma separated (e.g. `--ex 0,2,3`).
    #[arg(long, value_delimiter = ',')]
    ex: Option<Vec<u32>>,
    /// Analyze every distinct list of a constraints file instead.
    #[arg(long, requires = "graph")]
    constraints: Option<PathBuf>,
    /// Graph the constraints apply to (fixes the vertex count).
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatOpt,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyOpt {
    Er,
    Grid,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyOpt,
    /// Vertices (er family).
    #[arg(long)]
    n: Option<usize>,
    /// Edges (er family).
    #[arg(long)]
    m: Option<usize>,
    /// Rows (grid family).
    #[arg(long)]
    rows: Option<usize>,
    /// Columns (grid family).
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest excluded list drawn per vertex.
    #[arg(long, default_value_t = 2)]
    ex_size_max: usize,
    /// Largest excluded value drawn.
    #[arg(long, default_value_t = 3)]
    ex_value_max: u32,
    #[arg(long)]
    out_graph: PathBuf,
    /// Also draw random constraints and write them here.
    #[arg(long)]
    out_constraints: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatOpt,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 12)]
    trials: usize,
    #[arg(long, default_value_t = 2026)]
    seed: u64,
    /// Corrupt one comparison to prove failures are detected.
    #[arg(long, hide = true)]
    inject_fault: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatOpt,
}

enum CliError {
    /// Bad files, bad flags, infeasible combinations: exit 2.
    Input(String),
    /// The instance exceeds a configured or structural budget: exit 3.
    Budget(String),
}

fn lib_err(e: Error) -> CliError {
    match e {
        Error::BudgetExceeded { .. } | Error::StateSpaceTooLarge { .. } => {
            CliError::Budget(e.to_string())
        }
        _ => CliError::Input(e.to_string()),
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_in<T>(
    path: &Path,
    res: Result<T, formats::ParseError>,
) -> Result<T, CliError> {
    res.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Solve(args) => cmd_solve(args),
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Gen(args) => cmd_gen(args),
        Cmd::Selftest(args) => cmd_selftest(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Budget(msg)) => {
            eprintln!("refused: {msg}");
            ExitCode::from(3)
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, CliError> {
    if args.mode == ModeOpt::Count && args.algo == AlgoOpt::Repset {
        return Err(CliError::Input(
            "count mode needs --algo brute, dp, dp-zeta, or dp-ntt".into(),
        ));
    }
    if args.witness && !matches!(args.algo, AlgoOpt::Repset | AlgoOpt::Brute) {
        return Err(CliError::Input("--witness needs --algo repset or brute".into()));
    }
    match (args.mode, args.size) {
        (ModeOpt::Decide, None) => {
            return Err(CliError::Input("decide mode needs --size".into()))
        }
        (ModeOpt::Decide, Some(_)) => {}
        (_, Some(_)) => return Err(CliError::Input("--size only applies to decide mode".into())),
        (_, None) => {}
    }

    let g = parse_in(&args.graph, formats::parse_graph(&read_file(&args.graph)?))?;
    let c = match &args.constraints {
        Some(p) => parse_in(p, formats::parse_constraints(&read_file(p)?, g.n()))?,
        None => DegreeConstraints::unconstrained(g.n()),
    };
    let inst = Instance::new(g, c).map_err(lib_err)?;
    let td = match &args.td {
        Some(p) => {
            let td = parse_in(p, formats::parse_td(&read_file(p)?))?;
            td.validate(&inst.graph).map_err(lib_err)?;
            td
        }
        None => heuristic_decomposition(&inst.graph),
    };
    if let Some(p) = &args.emit_td {
        fs::write(p, formats::write_td(&td, inst.graph.n()))
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    }
    let width = td.width();
    let started = Instant::now();
    let ntd = make_nice(&td, &inst.graph).map_err(lib_err)?;

    let format = Format::from(args.format);
    let m = inst.graph.m();
    let code = match args.mode {
        ModeOpt::Count => {
            let counts = run_counts(args, &inst, &ntd)?;
            let total: BigUint = counts.iter().sum();
            let pairs = counts
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(s, c)| (s, c.to_string()))
                .collect();
            let rep = CountReport {
                command: "solve",
                mode: "count",
                algo: args.algo.name(),
                width,
                total: total.to_string(),
                counts: pairs,
            };
            println!("{}", rep.render(format));
            0
        }
        ModeOpt::Decide => {
            let s = args.size.expect("validated above");
            let (answer, witness) = match args.algo {
                AlgoOpt::Repset => {
                    let r = run_repset(args, &inst, &ntd, Goal::Decide(s))?;
                    (r.chosen.is_some(), r.witness)
                }
                AlgoOpt::Brute => {
                    let report = oracle::enumerate(&inst, args.budget).map_err(lib_err)?;
                    let yes = s <= m && !report.counts_by_size[s].is_zero();
                    let w = if yes && args.witness { brute_witness(&inst, s) } else { None };
                    (yes, w)
                }
                _ => {
                    let counts = run_counts(args, &inst, &ntd)?;
                    (s <= m && !counts[s].is_zero(), None)
                }
            };
            let rep = DecideReport {
                command: "solve",
                mode: "decide",
                algo: args.algo.name(),
                width,
                size: s,
                answer,
                witness: witness.map(one_indexed),
            };
            println!("{}", rep.render(format));
            u8::from(!answer)
        }
        ModeOpt::Min | ModeOpt::Max => {
            let maximize = args.mode == ModeOpt::Max;
            let (answer, witness) = match args.algo {
                AlgoOpt::Repset => {
                    let goal = if maximize { Goal::Maximize } else { Goal::Minimize };
                    let r = run_repset(args, &inst, &ntd, goal)?;
                    (r.chosen, r.witness)
                }
                AlgoOpt::Brute => {
                    let report = oracle::enumerate(&inst, args.budget).map_err(lib_err)?;
                    let best = if maximize { report.max_size } else { report.min_size };
                    let w = match (best, args.witness) {
                        (Some(s), true) => brute_witness(&inst, s),
                        _ => None,
                    };
                    (best, w)
                }
                _ => {
                    let counts = run_counts(args, &inst, &ntd)?;
                    let mut feasible =
                        counts.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(s, _)| s);
                    let best = if maximize { feasible.next_back() } else { feasible.next() };
                    (best, None)
                }
            };
            let rep = OptReport {
                command: "solve",
                mode: if maximize { "max" } else { "min" },
                algo: args.algo.name(),
                width,
                answer,
                witness: witness.map(one_indexed),
            };
            println!("{}", rep.render(format));
            u8::from(answer.is_none())
        }
    };
    eprintln!("width {width}");
    eprintln!("time_ms {}", started.elapsed().as_millis());
    Ok(code)
}

fn run_counts(
    args: &SolveArgs,
    inst: &Instance,
    ntd: &antifactor::NiceTreeDecomposition,
) -> Result<Vec<BigUint>, CliError> {
    match args.algo.join() {
        Some(join) => countdp::run_detailed(inst, ntd, join, args.parallel)
            .map(|o| o.counts_by_size)
            .map_err(lib_err),
        None => oracle::enumerate(inst, args.budget)
            .map(|r| r.counts_by_size)
            .map_err(lib_err),
    }
}

fn run_repset(
    args: &SolveArgs,
    inst: &Instance,
    ntd: &antifactor::NiceTreeDecomposition,
    goal: Goal,
) -> Result<repset::SolveReport, CliError> {
    let opts = SolveOptions {
        schedule: match args.schedule {
            ScheduleOpt::EveryNode => PruneSchedule::EveryNode,
            ScheduleOpt::ForgetJoinOnly => PruneSchedule::ForgetJoinOnly,
        },
        witness: args.witness,
        audit: None,
        parallel: args.parallel,
    };
    repset::solve(inst, ntd, goal, &opts).map_err(lib_err)
}

fn one_indexed(edges: Vec<usize>) -> Vec<usize> {
    edges.into_iter().map(|e| e + 1).collect()
}

/// First solution of size `s` in increasing edge-mask order.
fn brute_witness(inst: &Instance, s: usize) -> Option<Vec<usize>> {
    let m = inst.graph.m();
    for mask in 0u64..(1u64 << m) {
        if mask.count_ones() as usize != s {
            continue;
        }
        let edges: Vec<usize> = (0..m).filter(|e| mask >> e & 1 == 1).collect();
        if inst.is_solution(&edges) == Ok(true) {
            return Some(edges);
        }
    }
    None
}

fn tag_string(tag: &ClassTag) -> String {
    match tag {
        ClassTag::TrivialDecision => "trivial-decision".into(),
        ClassTag::PolyCornuejols => "poly-cornuejols".into(),
        ClassTag::PolyMaxInterval { k } => format!("poly-max-interval(k={k})"),
        ClassTag::HardCandidate { him_lower } => format!("hard-candidate(him_lower={him_lower})"),
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<u8, CliError> {
    let mut targets: Vec<Vec<u32>> = Vec::new();
    match (&args.ex, &args.constraints) {
        (Some(ex), _) => targets.push(ex.clone()),
        (None, Some(cpath)) => {
            let gpath = args.graph.as_ref().expect("clap enforces requires");
            let g = parse_in(gpath, formats::parse_graph(&read_file(gpath)?))?;
            let c = parse_in(cpath, formats::parse_constraints(&read_file(cpath)?, g.n()))?;
            let mut seen = std::collections::BTreeSet::new();
            for v in 0..c.len() {
                seen.insert(c.excluded(v).to_vec());
            }
            targets.extend(seen);
        }
        (None, None) => {
            return Err(CliError::Input("analyze needs --ex or --constraints".into()))
        }
    }

    let format = Format::from(args.format);
    let mut blocks = Vec::new();
    for target in targets {
        let profile = setanalysis::profile(&target);
        let gap = setanalysis::maxgap(&SetDescriptor::Finite(profile.ex.clone()), 0)
            .map_err(lib_err)?;
        let rep = AnalyzeReport {
            command: "analyze",
            ex: profile.ex.clone(),
            maxgap: gap,
            longest_ap: ApReport {
                len: profile.longest_ap.len,
                start: profile.longest_ap.start,
                diff: profile.longest_ap.diff,
            },
            tags: profile.tags.iter().map(tag_string).collect(),
            him: profile.him.map(|h| h.pairs),
        };
        blocks.push(rep.render(format));
    }
    let sep = match format {
        Format::Text => "\n\n",
        Format::JsonLines => "\n",
    };
    println!("{}", blocks.join(sep));
    Ok(0)
}

fn cmd_gen(args: &GenArgs) -> Result<u8, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let (g, family): (MultiGraph, String) = match args.family {
        FamilyOpt::Er => {
            let (Some(n), Some(m)) = (args.n, args.m) else {
                return Err(CliError::Input("er family needs --n and --m".into()));
            };
            let g = gen::er_graph(&mut rng, n, m).map_err(CliError::Input)?;
            (g, format!("er({n},{m})"))
        }
        FamilyOpt::Grid => {
            let (Some(r), Some(c)) = (args.rows, args.cols) else {
                return Err(CliError::Input("grid family needs --rows and --cols".into()));
            };
            (gen::grid_graph(r, c), format!("grid({r}x{c})"))
        }
    };
    fs::write(&args.out_graph, formats::write_graph(&g))
        .map_err(|e| CliError::Input(format!("{}: {e}", args.out_graph.display())))?;
    if let Some(cpath) = &args.out_constraints {
        let fam = gen::ExFamily { max_size: args.ex_size_max, max_value: args.ex_value_max };
        let c = gen::random_constraints(&mut rng, g.n(), fam);
        fs::write(cpath, formats::write_constraints(&c))
            .map_err(|e| CliError::Input(format!("{}: {e}", cpath.display())))?;
    }
    let rep = GenReport {
        command: "gen",
        family,
        n: g.n(),
        m: g.m(),
        seed: args.seed,
        graph: args.out_graph.display().to_string(),
        constraints: args.out_constraints.as_ref().map(|p| p.display().to_string()),
    };
    println!("{}", rep.render(Format::from(args.format)));
    Ok(0)
}

fn cmd_selftest(args: &SelftestArgs) -> Result<u8, CliError> {
    if args.trials == 0 {
        eprintln!("warning: 0 trials requested; every suite passes vacuously");
    }
    let cfg = selftest::Config {
        trials: args.trials,
        seed: args.seed,
        inject_fault: args.inject_fault,
    };
    let format = Format::from(args.format);
    let suites = selftest::run(&cfg);
    let mut failed = 0usize;
    let mut out = String::new();
    for s in &suites {
        failed += s.failures;
        let rep = report::SuiteReport {
            command: "selftest",
            suite: s.name,
            trials: s.trials,
            failures: s.failures,
            detail: s.detail.clone(),
        };
        let _ = writeln!(out, "{}", rep.render(format));
    }
    if format == Format::Text {
        let _ = write!(out, "selftest: {}", if failed == 0 { "pass" } else { "FAIL" });
    } else {
        out.pop();
    }
    println!("{out}");
    Ok(u8::from(failed > 0))
}
