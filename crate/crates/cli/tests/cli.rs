use std::path::Path;
use std::process::{Command, Output};

fn greedymatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greedymatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = greedymatch(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_match_exact_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    let matching = dir.path().join("m.txt");
    ok(&[
        "gen", "--family", "bipartite", "--nodes", "400", "--degree", "3", "--seed", "5", "--out",
        s(&graph),
    ]);
    let header = std::fs::read_to_string(&graph).unwrap();
    assert!(header.starts_with("400 "));

    let exact: usize = ok(&["exact", "--in", s(&graph), "--bipartite", "200"]).trim().parse().unwrap();
    let general: usize = ok(&["exact", "--in", s(&graph)]).trim().parse().unwrap();
    assert_eq!(exact, general);

    let report = ok(&[
        "match", "--in", s(&graph), "--alg", "opt12-potdeg", "--seed", "1", "--emit-matching",
        s(&matching),
    ]);
    let size: usize = report.split_whitespace().nth(3).unwrap().parse().unwrap();
    assert!(size <= exact);
    let lines = std::fs::read_to_string(&matching).unwrap();
    assert_eq!(lines.lines().count(), size);
}

#[test]
fn sweep_and_aggregate_agree() {
    let dir = tempfile::tempdir().unwrap();
    let trials = dir.path().join("trials.csv");
    let agg = dir.path().join("agg.csv");
    let again = dir.path().join("again.csv");
    ok(&[
        "sweep", "--family", "general", "--nodes", "300", "--c-from", "2", "--c-to", "3",
        "--c-step", "0.5", "--algs", "opt1-rand,opt12-potdeg", "--trials", "3", "--seed", "4",
        "--out-trials", s(&trials), "--out-agg", s(&agg),
    ]);
    assert_eq!(std::fs::read_to_string(&trials).unwrap().lines().count(), 1 + 3 * 3 * 2);
    ok(&["aggregate", "--in", s(&trials), "--out", s(&again)]);
    let first = std::fs::read_to_string(&agg).unwrap();
    let second = std::fs::read_to_string(&again).unwrap();
    assert_eq!(first.lines().count(), second.lines().count());
    assert_eq!(first.lines().next(), second.lines().next());
    // Wall times are stored rounded in the trial CSV, so the timing columns
    // (t_bar, t_var) may differ in the last digit; everything else is exact.
    for (a, b) in first.lines().zip(second.lines()).skip(1) {
        let a: Vec<&str> = a.split(',').collect();
        let b: Vec<&str> = b.split(',').collect();
        assert_eq!(a.len(), b.len());
        for (k, (x, y)) in a.iter().zip(&b).enumerate() {
            if k == 6 || k == 7 {
                let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
                assert!((x - y).abs() <= 1e-4 * x.abs().max(y.abs()), "{x} vs {y}");
            } else {
                assert_eq!(x, y, "column {k}");
            }
        }
    }
}

#[test]
fn sweep_without_oracle_leaves_quality_empty() {
    let dir = tempfile::tempdir().unwrap();
    let trials = dir.path().join("t.csv");
    let agg = dir.path().join("a.csv");
    ok(&[
        "sweep", "--family", "bipartite", "--nodes", "200", "--c-from", "4", "--c-to", "4",
        "--trials", "2", "--oracle", "off", "--sequential", "--out-trials", s(&trials),
        "--out-agg", s(&agg),
    ]);
    let row = std::fs::read_to_string(&agg).unwrap().lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("bipartite,200,4,opt1-rand,,,"), "{row}");
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    let out = dir.path().join("o.csv");
    let cases: Vec<Vec<&str>> = vec![
        vec!["exact", "--in", s(&missing)],
        vec!["match", "--in", s(&missing), "--alg", "opt1-rand"],
        vec!["gen", "--family", "bipartite", "--nodes", "7", "--degree", "2", "--out", s(&out)],
        vec!["gen", "--family", "triangle", "--nodes", "7", "--degree", "2", "--out", s(&out)],
        vec![
            "sweep", "--family", "general", "--nodes", "200000", "--c-from", "1", "--c-to", "1",
            "--trials", "1", "--out-trials", s(&out),
        ],
        vec!["sweep", "--family", "general", "--nodes", "100", "--trials", "0", "--out-trials", s(&out)],
        vec!["aggregate", "--in", s(&missing), "--out", s(&out)],
    ];
    for args in cases {
        let result = greedymatch(&args);
        assert!(!result.status.success(), "{args:?} should fail");
        assert!(!result.stderr.is_empty());
    }
}

#[test]
fn bad_edge_list_is_reported_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("bad.txt");
    std::fs::write(&graph, "3 2\n0 1\n1 x\n").unwrap();
    let out = greedymatch(&["exact", "--in", s(&graph)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}
