//! End-to-end tests of the `antifactor` binary: real files, real processes,
//! asserted stdout and exit codes.

use std::fs;
use std::path::Path;
use std::process::Command;

const K3: &str = "p af 3 3\ne 1 2\ne 2 3\ne 1 3\n";
const K3_COVER: &str = "x 1 1 0\nx 2 1 0\nx 3 1 0\n";
const K3_DEG1: &str = "x 1 1 1\nx 2 1 1\nx 3 1 1\n";
const K4: &str = "p af 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";
const K4_MATCH: &str = "x 1 3 0 2 3\nx 2 3 0 2 3\nx 3 3 0 2 3\nx 4 3 0 2 3\n";

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_antifactor"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf8 stderr"),
        code: out.status.code().expect("no signal"),
    }
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, content).expect("write test file");
    path.display().to_string()
}

#[test]
fn count_k3_edge_covers() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.gr", K3);
    let c = write(dir.path(), "k3.ex", K3_COVER);
    let r = run(&["solve", "--graph", &g, "--constraints", &c, "--mode", "count", "--algo", "dp"]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    assert_eq!(r.stdout, "2 3\n3 1\n");
    assert!(r.stderr.contains("width 2"), "stderr: {}", r.stderr);
    assert!(r.stderr.contains("time_ms "), "stderr: {}", r.stderr);
}

#[test]
fn count_algorithms_agree_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.gr", K4);
    let c = write(dir.path(), "k4.ex", K4_MATCH);
    let base = ["solve", "--graph", &g, "--constraints", &c, "--mode", "count"];
    let outputs: Vec<String> = ["brute", "dp", "dp-zeta", "dp-ntt"]
        .iter()
        .map(|algo| {
            let mut args = base.to_vec();
            args.extend(["--algo", algo]);
            let r = run(&args);
            assert_eq!(r.code, 0, "algo {algo} failed: {}", r.stderr);
            r.stdout
        })
        .collect();
    assert_eq!(outputs[0], "2 3\n", "K4 has three perfect matchings");
    assert!(outputs.iter().all(|o| *o == outputs[0]));
}

#[test]
fn max_repset_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.gr", K4);
    let c = write(dir.path(), "k4.ex", K4_MATCH);
    let r = run(&[
        "solve", "--graph", &g, "--constraints", &c, "--mode", "max", "--algo", "repset",
        "--witness",
    ]);
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("2"));
    let witness = lines.next().expect("witness line");
    let ids: Vec<usize> =
        witness.strip_prefix("witness ").unwrap().split(' ').map(|t| t.parse().unwrap()).collect();
    assert_eq!(ids.len(), 2);
    // 1-indexed ids into K4's edge list; a perfect matching covers all 4 vertices
    let edges = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
    let mut covered: Vec<usize> = ids.iter().flat_map(|&i| {
        let (u, v) = edges[i - 1];
        [u, v]
    }).collect();
    covered.sort_unstable();
    assert_eq!(covered, vec![1, 2, 3, 4]);
}

#[test]
fn decide_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.gr", K3);
    let c = write(dir.path(), "k3.ex", K3_DEG1);
    let base = ["solve", "--graph", &g, "--constraints", &c, "--mode", "decide", "--algo"];
    for algo in ["brute", "dp", "repset"] {
        let yes = run(&[&base[..], &[algo, "--size", "0"]].concat());
        assert_eq!((yes.code, yes.stdout.as_str()), (0, "yes\n"), "algo {algo}");
        let no = run(&[&base[..], &[algo, "--size", "1"]].concat());
        assert_eq!((no.code, no.stdout.as_str()), (1, "no\n"), "algo {algo}");
        let yes3 = run(&[&base[..], &[algo, "--size", "3"]].concat());
        assert_eq!((yes3.code, yes3.stdout.as_str()), (0, "yes\n"), "algo {algo}");
    }
}

#[test]
fn infeasible_min_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "one.gr", "p af 1 0\n");
    let c = write(dir.path(), "one.ex", "x 1 1 0\n");
    let r = run(&[
        "solve", "--graph", &g, "--constraints", &c, "--mode", "min", "--algo", "repset",
    ]);
    assert_eq!(r.code, 1);
    assert_eq!(r.stdout, "infeasible\n");
}

#[test]
fn parse_errors_exit_two_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "bad.gr", "p af 2 1\ne 1 7\n");
    let r = run(&["solve", "--graph", &g, "--mode", "count"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 2"), "stderr: {}", r.stderr);
    assert!(r.stdout.is_empty());

    let missing = dir.path().join("nope.gr").display().to_string();
    let r = run(&["solve", "--graph", &missing, "--mode", "count"]);
    assert_eq!(r.code, 2);
}

#[test]
fn brute_budget_refusal_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.gr", K3);
    let r = run(&["solve", "--graph", &g, "--mode", "count", "--algo", "brute", "--budget", "2"]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("refused"), "stderr: {}", r.stderr);
}

#[test]
fn mode_algo_validation() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k3.gr", K3);
    let r = run(&["solve", "--graph", &g, "--mode", "count", "--algo", "repset"]);
    assert_eq!(r.code, 2);
    let r = run(&["solve", "--graph", &g, "--mode", "count", "--algo", "dp", "--witness"]);
    assert_eq!(r.code, 2);
    let r = run(&["solve", "--graph", &g, "--mode", "decide", "--algo", "dp"]);
    assert_eq!(r.code, 2, "decide needs --size");
    let r = run(&["solve", "--graph", &g, "--mode", "count", "--algo", "dp", "--size", "1"]);
    assert_eq!(r.code, 2, "--size is decide-only");
}

#[test]
fn supplied_and_emitted_decompositions() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "p4.gr", "p af 4 3\ne 1 2\ne 2 3\ne 3 4\n");
    let c = write(dir.path(), "p4.ex", "x 1 1 0\nx 2 1 0\nx 3 1 0\nx 4 1 0\n");
    let td = write(dir.path(), "p4.td", "s td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 3 4\n1 2\n2 3\n");
    let with_td = run(&[
        "solve", "--graph", &g, "--constraints", &c, "--td", &td, "--mode", "count",
    ]);
    assert_eq!(with_td.code, 0, "stderr: {}", with_td.stderr);
    assert!(with_td.stderr.contains("width 1"));

    let emitted = dir.path().join("emitted.td").display().to_string();
    let heuristic = run(&[
        "solve", "--graph", &g, "--constraints", &c, "--emit-td", &emitted, "--mode", "count",
    ]);
    assert_eq!(heuristic.code, 0);
    let replay = run(&[
        "solve", "--graph", &g, "--constraints", &c, "--td", &emitted, "--mode", "count",
    ]);
    assert_eq!(replay.stdout, heuristic.stdout);
    assert_eq!(replay.stdout, with_td.stdout);

    let bad_td = write(dir.path(), "bad.td", "s td 1 2 4\nb 1 1 2\n");
    let r = run(&["solve", "--graph", &g, "--constraints", &c, "--td", &bad_td, "--mode", "count"]);
    assert_eq!(r.code, 2, "decomposition not covering the graph is an input error");
}

#[test]
fn parallel_output_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.gr", K4);
    let c = write(dir.path(), "k4.ex", K4_MATCH);
    for extra in [
        ["--mode", "count", "--algo", "dp-zeta"],
        ["--mode", "max", "--algo", "repset"],
    ] {
        let base = ["solve", "--graph", &g, "--constraints", &c];
        let seq = run(&[&base[..], &extra[..]].concat());
        let par = run(&[&base[..], &extra[..], &["--parallel"]].concat());
        assert_eq!(seq.code, par.code);
        assert_eq!(seq.stdout, par.stdout);
    }
}

#[test]
fn json_lines_field_order() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "k4.gr", K4);
    let c = write(dir.path(), "k4.ex", K4_MATCH);
    let r = run(&[
        "solve", "--graph", &g, "--constraints", &c, "--mode", "decide", "--algo", "repset",
        "--size", "2", "--witness", "--format", "json-lines",
    ]);
    assert_eq!(r.code, 0);
    let line = r.stdout.trim_end();
    assert!(
        line.starts_with(
            "{\"command\":\"solve\",\"mode\":\"decide\",\"algo\":\"repset\",\
             \"width\":3,\"size\":2,\"answer\":true,\"witness\":["
        ),
        "got: {line}"
    );
    let parsed: serde_json::Value = serde_json::from_str(line).expect("valid json");
    assert_eq!(parsed["answer"], serde_json::Value::Bool(true));

    let r = run(&[
        "solve", "--graph", &g, "--constraints", &c, "--mode", "count", "--format", "json-lines",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(r.stdout.trim_end()).unwrap();
    assert_eq!(parsed["total"], serde_json::Value::String("3".into()));
    assert_eq!(parsed["counts"][0][0], serde_json::Value::from(2u32));
    assert_eq!(parsed["counts"][0][1], serde_json::Value::String("3".into()));
}

#[test]
fn gen_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = dir.path().join("a.gr").display().to_string();
    let c1 = dir.path().join("a.ex").display().to_string();
    let g2 = dir.path().join("b.gr").display().to_string();
    let c2 = dir.path().join("b.ex").display().to_string();
    let base = ["gen", "--family", "er", "--n", "8", "--m", "11", "--seed", "5"];
    let r = run(&[&base[..], &["--out-graph", &g1, "--out-constraints", &c1]].concat());
    assert_eq!(r.code, 0, "stderr: {}", r.stderr);
    let r = run(&[&base[..], &["--out-graph", &g2, "--out-constraints", &c2]].concat());
    assert_eq!(r.code, 0);
    assert_eq!(fs::read(&g1).unwrap(), fs::read(&g2).unwrap(), "same seed, same graph bytes");
    assert_eq!(fs::read(&c1).unwrap(), fs::read(&c2).unwrap());
    assert!(fs::read_to_string(&g1).unwrap().starts_with("p af 8 11\n"));

    let g3 = dir.path().join("c.gr").display().to_string();
    let r = run(&[
        "gen", "--family", "grid", "--rows", "3", "--cols", "3", "--out-graph", &g3,
    ]);
    assert_eq!(r.code, 0);
    assert!(fs::read_to_string(&g3).unwrap().starts_with("p af 9 12\n"));

    // the generated instance is solvable as written
    let solve = run(&["solve", "--graph", &g1, "--constraints", &c1, "--mode", "count"]);
    assert_eq!(solve.code, 0, "stderr: {}", solve.stderr);
}

#[test]
fn gen_rejects_impossible_requests() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("x.gr").display().to_string();
    let r = run(&["gen", "--family", "er", "--n", "3", "--m", "9", "--out-graph", &g]);
    assert_eq!(r.code, 2);
    let r = run(&["gen", "--family", "er", "--n", "3", "--out-graph", &g]);
    assert_eq!(r.code, 2, "er needs --m");
}

#[test]
fn analyze_reports_structure() {
    let r = run(&["analyze", "--ex", "0,2,3"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("ex: 0 2 3\n"));
    assert!(r.stdout.contains("maxgap: 1\n"));
    assert!(r.stdout.contains("longest_ap: len=2 start=2 diff=1\n"));
    assert!(r.stdout.contains("hard-candidate(him_lower=3)"));
    assert!(r.stdout.contains("(0, 4)\n(1, 3)\n(2, 2)"));

    let r = run(&["analyze", "--ex", "1,2", "--format", "json-lines"]);
    let parsed: serde_json::Value = serde_json::from_str(r.stdout.trim_end()).unwrap();
    assert_eq!(parsed["tags"][1], serde_json::Value::String("poly-max-interval(k=2)".into()));
    assert_eq!(parsed["him"][0][1], serde_json::Value::from(3u32));

    let r = run(&["analyze"]);
    assert_eq!(r.code, 2);
}

#[test]
fn analyze_constraints_file_lists_distinct_sets() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.gr", K4);
    let c = write(dir.path(), "g.ex", "x 1 1 1\nx 2 2 1 2\nx 3 1 1\n");
    let r = run(&["analyze", "--graph", &g, "--constraints", &c, "--format", "json-lines"]);
    assert_eq!(r.code, 0);
    let lines: Vec<&str> = r.stdout.trim_end().lines().collect();
    assert_eq!(lines.len(), 3, "empty, {{1}}, {{1,2}}: {lines:?}");

    let r = run(&["analyze", "--constraints", &c]);
    assert_eq!(r.code, 2, "constraints file needs --graph");
}

#[test]
fn selftest_scales_and_fails_on_demand() {
    let r = run(&["selftest", "--trials", "3"]);
    assert_eq!(r.code, 0, "stdout: {}\nstderr: {}", r.stdout, r.stderr);
    assert!(r.stdout.contains("count-dp-vs-oracle: ok (3 trials)"));
    assert!(r.stdout.trim_end().ends_with("selftest: pass"));

    let r = run(&["selftest", "--trials", "2", "--inject-fault"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("FAIL"));

    let r = run(&["selftest", "--trials", "0"]);
    assert_eq!(r.code, 0);
    assert!(r.stderr.contains("warning"), "stderr: {}", r.stderr);
}
