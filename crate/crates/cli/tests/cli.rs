use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cliqster::graph::Graph;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cliqster"))
        .args(args)
        .output()
        .expect("run cliqster")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const WORKED_EXAMPLE: &str = "8 9\n8 10\n9 10\n5 6\n5 7\n6 7\n4 5\n4 7\n1 2\n1 3\n2 3\n6 10\n3 9\n3 6\n";

const SUBCOMMANDS: [&str; 9] = [
    "stats", "cliques", "decompose", "features", "synth", "sample", "eval-cluster", "eval-knn", "bench",
];

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["decompose", "--no-such-flag", "x"]).status.code(), Some(2));
    assert_eq!(run(&["features", "x", "--top-k", "0"]).status.code(), Some(2));
    assert_eq!(run(&["features", "x", "--method", "graphlets"]).status.code(), Some(2));
    assert_eq!(run(&["bench", "--runs", "4"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.edges", "# nothing here\n");
    let out = run(&["stats", s(&empty)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no edges"));
    assert_eq!(run(&["decompose", s(&empty)]).status.code(), Some(1));
    assert_eq!(run(&["cliques", s(&dir.path().join("missing.edges"))]).status.code(), Some(1));
    let bad = write(dir.path(), "bad.edges", "1 2\n3\n");
    assert_eq!(run(&["stats", s(&bad)]).status.code(), Some(1));
    assert_eq!(run(&["synth", "--profile", "XX"]).status.code(), Some(1));
    let three = ["eval-knn", "--profiles", "ST,LL,CI", "--repeats", "1"];
    assert_eq!(run(&three).status.code(), Some(1));
    let jobs = ["eval-cluster", "--profiles", "ST", "--repeats", "1", "--jobs", "0"];
    assert_eq!(run(&jobs).status.code(), Some(1));
}

/// Every optional flag that takes a value states its default in `--help`.
#[test]
fn help_lists_defaults() {
    for sub in SUBCOMMANDS {
        let help = ok(&[sub, "--help"]);
        let usage = help.lines().find(|l| l.starts_with("Usage:")).unwrap();
        let mut blocks: Vec<String> = Vec::new();
        for line in help.lines() {
            let t = line.trim_start();
            if t.starts_with("--") || t.starts_with("-h") || t.starts_with("-V") {
                blocks.push(t.to_string());
            } else if let Some(b) = blocks.last_mut() {
                b.push(' ');
                b.push_str(t);
            }
        }
        let required = |b: &str| usage.contains(b.split_whitespace().next().unwrap());
        let valued: Vec<&String> = blocks
            .iter()
            .filter(|b| b.starts_with("--") && b.contains('<') && !required(b))
            .collect();
        assert!(!valued.is_empty(), "{sub}");
        for b in valued {
            assert!(b.contains("[default:"), "{sub}: {b}");
        }
    }
}

#[test]
fn decompose_prints_the_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let example = write(dir.path(), "example.edges", WORKED_EXAMPLE);
    let out = ok(&["decompose", s(&example)]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "clique,size,mu");
    assert_eq!(
        &rows[1..],
        ["8 9 10,3,1", "5 6 7,3,0.75", "4 5 7,3,0.75", "1 2 3,3,1", "3 9,2,1", "6 10,2,1", "3 6,2,1"]
    );
}

#[test]
fn cliques_of_a_five_cycle_are_its_edges() {
    let dir = tempfile::tempdir().unwrap();
    let cycle = write(dir.path(), "c5.edges", "a b\nb c\nc d\nd e\ne a\n");
    let out = ok(&["cliques", s(&cycle)]);
    let mut lines: Vec<&str> = out.lines().collect();
    lines.sort();
    assert_eq!(lines, ["a b", "a e", "b c", "c d", "d e"]);
}

#[test]
fn stats_reports_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let example = write(dir.path(), "example.edges", WORKED_EXAMPLE);
    let out = ok(&["stats", s(&example), "--vertices", "12"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("n,m,components,density"));
    assert!(lines[1].starts_with("12,14,3,"));
}

#[test]
fn features_emit_one_row_per_graph() {
    let dir = tempfile::tempdir().unwrap();
    let example = write(dir.path(), "example.edges", WORKED_EXAMPLE);
    let tri = write(dir.path(), "tri.edges", "0 1\n1 2\n0 2\n");
    let out = ok(&["features", s(&example), s(&tri), "--top-k", "7"]);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.len() == 8));
    assert_eq!(&rows[1][1..], ["1", "1", "1", "1", "1", "0.75", "0.75"]);
    assert_eq!(&rows[2][1..], ["1", "0", "0", "0", "0", "0", "0"]);

    let out = ok(&["features", s(&tri), "--method", "svd", "--top-k", "3"]);
    assert_eq!(out.lines().nth(1).unwrap().split(',').skip(1).collect::<Vec<_>>(), ["2", "1", "1"]);
}

#[test]
fn synth_and_sample_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("ll.edges");
    ok(&["synth", "--profile", "ll", "--seed", "4", "--out", s(&src)]);
    let text = std::fs::read_to_string(&src).unwrap();
    assert!(text.starts_with("# profile=LL seed=4\n"));
    assert!(text.contains("sample_scale=20"));
    let g = Graph::from_edge_list(&text).unwrap();
    assert!(g.m() > 0);

    let sample = ok(&["sample", s(&src), "--sample-size", "300", "--seed", "2"]);
    let h = Graph::from_edge_list(&sample).unwrap();
    assert!(h.n() <= 300 && h.m() > 0);
    let labels = g.labels();
    let id = |t: &str| labels.iter().position(|l| l == t).unwrap();
    for &(u, v) in h.edges() {
        assert!(g.has_edge(id(&h.label(u)), id(&h.label(v))));
    }
    assert_eq!(run(&["sample", s(&src), "--sample-size", "100000"]).status.code(), Some(1));
}

#[test]
fn bench_reports_each_method() {
    let out = ok(&["bench", "--sizes", "100", "--seed", "3"]);
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["method", "n", "mean_ms", "std_ms"]);
    assert_eq!(rows.len(), 3);
    for (row, method) in rows[1..].iter().zip(["cliqster", "svd"]) {
        assert_eq!(row[..2], [method, "100"]);
        assert!(row[2].parse::<f64>().unwrap() > 0.0);
    }
}

#[test]
fn eval_commands_write_their_side_files() {
    let dir = tempfile::tempdir().unwrap();
    let curves = dir.path().join("curves.csv");
    let out = ok(&[
        "eval-cluster", "--profiles", "ST,LL", "--repeats", "2", "--sample-size", "200", "--top-k", "5",
        "--curves-out", s(&curves),
    ]);
    assert_eq!(out.lines().count(), 1 + 2 * 2);
    // methods x categories x ranks, plus the header
    assert_eq!(std::fs::read_to_string(&curves).unwrap().lines().count(), 1 + 2 * 2 * 5);

    let plot = dir.path().join("plot.csv");
    let out = ok(&[
        "eval-knn", "--profiles", "ST,LL", "--train-sizes", "10,20", "--test-size", "10", "--repeats", "2",
        "--sample-size", "200", "--plot-out", s(&plot),
    ]);
    assert_eq!(out.lines().count(), 3);
    let plot = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(plot.lines().next(), Some("train_size,mean_accuracy"));
    assert!(plot.lines().skip(1).all(|l| l.split(',').count() == 2));
}
