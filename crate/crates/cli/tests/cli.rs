use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn fbas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbas"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn json(output: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(output)).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_owned()
}

fn peerings(edges: impl IntoIterator<Item = (usize, usize)>) -> String {
    edges
        .into_iter()
        .map(|(a, b)| format!("{a}|{b}|0\n"))
        .collect()
}

#[test]
fn analyze_five_node_fixture() {
    let output = fbas(&[
        "analyze",
        fixture("five_node.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = json(&output);
    assert_eq!(report["top_tier"].as_array().unwrap().len(), 5);
    assert_eq!(report["statistics"]["blocking"]["min"], 1);
}

#[test]
fn analyze_cascading_fixture() {
    let output = fbas(&[
        "analyze",
        fixture("cascading.json").to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let report = json(&output);
    assert_eq!(report["statistics"]["blocking"]["min"], 1);
    assert_eq!(report["statistics"]["splitting"]["min"], 3);
    assert_eq!(report["statistics"]["splitting"]["max"], 3);
}

#[test]
fn missing_intersection_exits_with_two() {
    let output = fbas(&["analyze", fixture("no_intersection.json").to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stdout(&output).starts_with("quorum intersection: NO"));
}

#[test]
fn both_intersection_algorithms_agree() {
    for algo in ["pairwise", "complement"] {
        let output = fbas(&[
            "analyze",
            fixture("no_intersection.json").to_str().unwrap(),
            "--intersection-algo",
            algo,
        ]);
        assert_eq!(output.status.code(), Some(2), "{algo}");
    }
}

#[test]
fn unreadable_or_malformed_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let output = fbas(&["analyze", "/nonexistent/nodes.json"]);
    assert_eq!(output.status.code(), Some(1));
    let broken = write(&dir, "broken.json", "[{");
    let output = fbas(&["analyze", &broken]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("error"));
}

#[test]
fn abort_threshold_exits_with_three() {
    let output = fbas(&[
        "analyze",
        fixture("five_node.json").to_str().unwrap(),
        "--abort-above",
        "4",
        "--no-symmetric-shortcuts",
    ]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn merge_by_organization() {
    let dir = tempfile::tempdir().unwrap();
    let orgs = write(
        &dir,
        "orgs.json",
        r#"[{"id": "x", "name": "X", "validators": ["1", "3"]}]"#,
    );
    let output = fbas(&[
        "analyze",
        fixture("five_node.json").to_str().unwrap(),
        "--organizations",
        &orgs,
        "--merge-by-org",
        "--format",
        "json",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        json(&output)["minimal_blocking_sets"],
        serde_json::json!([["0"], ["X"], ["2", "4"]])
    );
}

#[test]
fn merge_requires_organizations() {
    let output = fbas(&[
        "analyze",
        fixture("five_node.json").to_str().unwrap(),
        "--merge-by-org",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(fbas(&["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_ideal_open_on_complete_graph() {
    let dir = tempfile::tempdir().unwrap();
    let edges = (0..7).flat_map(|a| (a + 1..7).map(move |b| (a, b)));
    let graph = write(&dir, "k7.txt", &peerings(edges));
    let output = fbas(&[
        "simulate",
        &graph,
        "--policy",
        "ideal-open",
        "--format",
        "csv",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let rows: Vec<String> = stdout(&output).lines().map(str::to_owned).collect();
    assert!(rows.contains(&"blocking,3,35".to_owned()));
    assert!(rows.contains(&"splitting,3,35".to_owned()));
    assert!(!rows
        .iter()
        .any(|row| row.starts_with("blocking,") && !row.starts_with("blocking,3,")));
}

#[test]
fn simulate_all_neighbors_on_two_cliques_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let clique =
        |offset: usize| (0..4).flat_map(move |a| (a + 1..4).map(move |b| (a + offset, b + offset)));
    let graph = write(&dir, "cliques.txt", &peerings(clique(0).chain(clique(10))));
    let output = fbas(&["simulate", &graph, "--policy", "all-neighbors"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(&dir, "path.txt", &peerings((0..6).map(|v| (v, v + 1))));
    let run = || {
        fbas(&[
            "simulate",
            &graph,
            "--policy",
            "higher-tier",
            "--seed",
            "7",
            "--format",
            "json",
        ])
    };
    let (first, second) = (run(), run());
    assert!(first
        .status
        .code()
        .is_some_and(|code| code == 0 || code == 2));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn generate_flat_four() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat4.json");
    let output = fbas(&["generate", "flat", "4", "-o", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let analysis = fbas(&["analyze", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(
        json(&analysis)["minimal_quorums"],
        serde_json::json!([
            ["0", "1", "2"],
            ["0", "1", "3"],
            ["0", "2", "3"],
            ["1", "2", "3"]
        ])
    );
}

#[test]
fn generate_stellar_like_two() {
    let output = fbas(&["generate", "stellar-like", "2"]);
    assert_eq!(output.status.code(), Some(0));
    let nodes = json(&output);
    assert_eq!(nodes.as_array().unwrap().len(), 6);
    assert_eq!(
        nodes[0]["quorumSet"]["innerQuorumSets"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
}

#[test]
fn generate_rejects_empty_topology() {
    assert_eq!(fbas(&["generate", "flat", "0"]).status.code(), Some(1));
}

#[test]
fn generate_random_is_reproducible() {
    let run = |seed: &str| fbas(&["generate", "random", "9", "--nested", "--seed", seed]).stdout;
    assert_eq!(run("3"), run("3"));
    assert_ne!(run("3"), run("4"));
}

#[test]
fn oracle_check_on_fixtures() {
    for name in ["five_node.json", "cascading.json", "no_intersection.json"] {
        let output = fbas(&["oracle-check", fixture(name).to_str().unwrap()]);
        assert_eq!(output.status.code(), Some(0), "{name}");
        assert!(!stdout(&output).contains("MISMATCH"));
    }
}

#[test]
fn oracle_check_refuses_large_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat25.json");
    fbas(&["generate", "flat", "25", "-o", path.to_str().unwrap()]);
    assert_eq!(
        fbas(&["oracle-check", path.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}
