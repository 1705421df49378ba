//! End-to-end checks of the command-line surface: exit codes, file
//! round-trips, and the subcommands not covered by the acceptance suite.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const RUNNING_EXAMPLE: &str = "\
a b r1
a c r1
a d r1
c b r1
c d r1
a b r2
a d r2
b d r2
c b r2
c d r2
a b r3
a d r3
c b r3
c d r3
e b r3
e d r3
";

fn mrgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrgs")).args(args).output().unwrap()
}

fn write_running_example(dir: &TempDir) -> PathBuf {
    let path = dir.path().join("graph.txt");
    fs::write(&path, RUNNING_EXAMPLE).unwrap();
    path
}

fn stdout_field(out: &Output, key: &str) -> String {
    let text = String::from_utf8_lossy(&out.stdout);
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
        .unwrap_or_else(|| panic!("field {key} missing in: {text}"))
}

#[test]
fn summarize_hybrid_reports_expected_cost() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let out = mrgs(&["summarize", "--input", input.to_str().unwrap(), "--algo", "hybrid"]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "total"), "6");
    assert_eq!(stdout_field(&out, "relative_size"), "0.375");
    assert_eq!(stdout_field(&out, "seed"), "42");
}

#[test]
fn summarize_two_step_furthest_relative_size() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let out = mrgs(&[
        "summarize",
        "--input",
        input.to_str().unwrap(),
        "--algo",
        "two-step",
        "--single",
        "greedy",
        "--agg",
        "furthest",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "total"), "9");
    assert_eq!(stdout_field(&out, "relative_size"), "0.5625");
}

#[test]
fn missing_input_is_io_error_exit_3() {
    let out = mrgs(&["summarize", "--input", "/nonexistent/g.txt", "--algo", "hybrid"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_algorithm_is_usage_error_exit_1() {
    let out = mrgs(&["summarize", "--input", "x", "--algo", "nope"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn conflicting_k_flags_exit_1() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let out = mrgs(&[
        "summarize",
        "--input",
        input.to_str().unwrap(),
        "--algo",
        "kmedian+",
        "--k",
        "2",
        "--auto-k",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn single_relation_algo_on_multi_relation_input_exit_1() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let out = mrgs(&["summarize", "--input", input.to_str().unwrap(), "--algo", "greedy"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_detects_tampering_exit_2() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let summary = dir.path().join("graph.mrs");
    let out = mrgs(&[
        "summarize",
        "--input",
        input.to_str().unwrap(),
        "--algo",
        "hybrid",
        "--output",
        summary.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let ok = mrgs(&[
        "verify",
        "--summary",
        summary.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(ok.status.code(), Some(0));

    // drop one superedge line
    let text = fs::read_to_string(&summary).unwrap();
    let tampered: Vec<&str> = text.lines().filter(|l| *l != "0 1 r1").collect();
    fs::write(&summary, tampered.join("\n")).unwrap();
    let bad = mrgs(&[
        "verify",
        "--summary",
        summary.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn reconstruct_round_trips_both_formats() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let summary = dir.path().join("graph.mrs");
    assert!(mrgs(&[
        "summarize",
        "--input",
        input.to_str().unwrap(),
        "--algo",
        "greedy+",
        "--output",
        summary.to_str().unwrap(),
    ])
    .status
    .success());
    for format in ["triples", "relation-list"] {
        let rebuilt = dir.path().join(format!("rebuilt-{format}.txt"));
        let out = mrgs(&[
            "reconstruct",
            "--summary",
            summary.to_str().unwrap(),
            "--output",
            rebuilt.to_str().unwrap(),
            "--format",
            format,
        ]);
        assert!(out.status.success());
        assert_eq!(stdout_field(&out, "edges"), "16");
        let check = mrgs(&[
            "verify",
            "--summary",
            summary.to_str().unwrap(),
            "--input",
            rebuilt.to_str().unwrap(),
            "--format",
            format,
        ]);
        assert_eq!(check.status.code(), Some(0), "format {format}");
    }
}

#[test]
fn stats_graph_and_summary() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let out = mrgs(&["stats", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "n"), "5");
    assert_eq!(stdout_field(&out, "q"), "3");
    assert_eq!(stdout_field(&out, "m"), "16");

    let summary = dir.path().join("graph.mrs");
    assert!(mrgs(&[
        "summarize",
        "--input",
        input.to_str().unwrap(),
        "--algo",
        "hybrid",
        "--output",
        summary.to_str().unwrap(),
    ])
    .status
    .success());
    let out = mrgs(&["stats", "--summary", summary.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "total"), "6");
    let plain: u64 = stdout_field(&out, "bytes_plain").parse().unwrap();
    let rl: u64 = stdout_field(&out, "bytes_relation_list").parse().unwrap();
    assert!(rl <= plain);
}

#[test]
fn query_neighborhood_histogram() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let summary = dir.path().join("graph.mrs");
    assert!(mrgs(&[
        "summarize",
        "--input",
        input.to_str().unwrap(),
        "--algo",
        "hybrid",
        "--output",
        summary.to_str().unwrap(),
    ])
    .status
    .success());
    let out = mrgs(&[
        "query",
        "neighborhood",
        "--summary",
        summary.to_str().unwrap(),
        "--node",
        "a",
        "--histogram",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "degree"), "7");
    assert_eq!(stdout_field(&out, "histogram"), "r1:3,r2:2,r3:2");

    let missing = mrgs(&[
        "query",
        "neighborhood",
        "--summary",
        summary.to_str().unwrap(),
        "--node",
        "zz",
    ]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn query_bench_reports_speedup() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let summary = dir.path().join("graph.mrs");
    assert!(mrgs(&[
        "summarize",
        "--input",
        input.to_str().unwrap(),
        "--algo",
        "hybrid",
        "--output",
        summary.to_str().unwrap(),
    ])
    .status
    .success());
    let out = mrgs(&[
        "query",
        "neighborhood",
        "--summary",
        summary.to_str().unwrap(),
        "--node",
        "a",
        "--bench",
        "--bench-queries",
        "50",
    ]);
    assert!(out.status.success());
    let speedup: f64 = stdout_field(&out, "speedup").parse().unwrap();
    assert!(speedup > 0.0);
}

#[test]
fn classify_picks_matching_structure() {
    let dir = TempDir::new().unwrap();
    // two planted graphs with different block structure on the same nodes
    let g1 = dir.path().join("g1.txt");
    fs::write(&g1, "a b r\na c r\nb c r\nd e r\nd f r\ne f r\n").unwrap();
    let g2 = dir.path().join("g2.txt");
    fs::write(&g2, "a d r\na e r\nd e r\nb c r\nb f r\nc f r\n").unwrap();
    let s1 = dir.path().join("class1.mrs");
    let s2 = dir.path().join("class2.mrs");
    for (graph, out) in [(&g1, &s1), (&g2, &s2)] {
        assert!(mrgs(&[
            "summarize",
            "--input",
            graph.to_str().unwrap(),
            "--algo",
            "greedy+",
            "--output",
            out.to_str().unwrap(),
        ])
        .status
        .success());
    }
    let out = mrgs(&[
        "classify",
        "--input",
        g1.to_str().unwrap(),
        "--candidates",
        s1.to_str().unwrap(),
        s2.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "label"), "class1");
}

#[test]
fn sweep_k_csv_and_selection() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let csv = dir.path().join("curve.csv");
    let out = mrgs(&[
        "sweep-k",
        "--input",
        input.to_str().unwrap(),
        "--k-min",
        "1",
        "--k-max",
        "5",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "selected_k"), "3");
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("k,relative_size\n"));
    assert!(text.contains("3,0.375"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn bundle_all_writes_and_accounts() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let bundle = dir.path().join("all.bundle");
    let out = mrgs(&[
        "bundle-all",
        "--input",
        input.to_str().unwrap(),
        "--output",
        bundle.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "relations"), "3");
    let text = fs::read_to_string(&bundle).unwrap();
    assert_eq!(text.matches("[RELATION ").count(), 3);
    assert_eq!(text.matches("[MAPPING]").count(), 3);
}

#[test]
fn oracle_matches_known_optimum() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let out = mrgs(&["oracle", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "total"), "6");
    assert_eq!(stdout_field(&out, "partition"), "a|c b|d e");
}

#[test]
fn json_output_is_one_object() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let out = mrgs(&[
        "--json",
        "summarize",
        "--input",
        input.to_str().unwrap(),
        "--algo",
        "greedy+",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout must be one JSON object");
    assert_eq!(v["total"], 6);
    assert_eq!(v["algorithm"], "greedy+");
}

#[test]
fn relation_list_input_format() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("rl.txt");
    fs::write(&path, "a b r1,r2\nb c r2\n").unwrap();
    let out = mrgs(&[
        "stats",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "relation-list",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_field(&out, "m"), "3");
}

#[test]
fn summarize_prints_wall_time() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let out = mrgs(&["summarize", "--input", input.to_str().unwrap(), "--algo", "kmedian+", "--auto-k"]);
    assert!(out.status.success());
    let ms: f64 = stdout_field(&out, "elapsed_ms").parse().unwrap();
    assert!(ms >= 0.0);
}

#[test]
fn malformed_input_reports_line() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "a b r1\na b\n").unwrap();
    let out = mrgs(&["stats", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "stderr: {err}");
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn summary_files_round_trip_byte_identically_via_cli() {
    let dir = TempDir::new().unwrap();
    let input = write_running_example(&dir);
    let s1 = dir.path().join("one.mrs");
    assert!(mrgs(&[
        "summarize",
        "--input",
        path_str(&input),
        "--algo",
        "hybrid",
        "--output",
        path_str(&s1),
    ])
    .status
    .success());
    // reconstruct, re-summarize with the same algorithm, compare bytes
    let rebuilt = dir.path().join("rebuilt.txt");
    assert!(mrgs(&[
        "reconstruct",
        "--summary",
        path_str(&s1),
        "--output",
        path_str(&rebuilt),
    ])
    .status
    .success());
    let s2 = dir.path().join("two.mrs");
    assert!(mrgs(&[
        "summarize",
        "--input",
        path_str(&rebuilt),
        "--algo",
        "hybrid",
        "--output",
        path_str(&s2),
    ])
    .status
    .success());
    assert_eq!(fs::read(&s1).unwrap(), fs::read(&s2).unwrap());
}
