//! Fixture documents through parsing, analysis and report rendering.

use fbas_core::analysis::{analyze, AnalysisOptions};
use fbas_core::io::{emit_nodes, emit_result, parse_as_rel, parse_nodes, DirectionRule, Format};
use fbas_core::{Error, Fbas, NodeIdSet, NodeSetFamily};

fn read(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

fn labels(fbas: &Fbas) -> Vec<String> {
    fbas.nodes().iter().map(|n| n.public_key.clone()).collect()
}

#[test]
fn fixtures_survive_a_round_trip() {
    for name in [
        "five_node.json",
        "cascading.json",
        "three_node.json",
        "no_intersection.json",
    ] {
        let fbas = parse_nodes(&read(name)).unwrap();
        assert_eq!(parse_nodes(&emit_nodes(&fbas)).unwrap(), fbas, "{name}");
    }
}

#[test]
fn disjoint_quorums_are_reported() {
    let fbas = parse_nodes(&read("no_intersection.json")).unwrap();
    let result = analyze(&fbas, &AnalysisOptions::default()).unwrap();
    assert!(!result.has_quorum_intersection);
    assert_eq!(
        result.minimal_splitting_sets,
        NodeSetFamily::with_empty_set()
    );
    assert_eq!(result.minimal_quorums.len(), 2);

    let json: serde_json::Value =
        serde_json::from_str(&emit_result(&result, &labels(&fbas), Format::Json)).unwrap();
    assert_eq!(json["has_quorum_intersection"], false);
    assert_eq!(json["minimal_splitting_sets"], serde_json::json!([[]]));
}

#[test]
fn three_node_fixture_has_one_minimal_quorum() {
    let fbas = parse_nodes(&read("three_node.json")).unwrap();
    let result = analyze(&fbas, &AnalysisOptions::default()).unwrap();
    let expected: NodeSetFamily = vec![[0, 2].into_iter().collect::<NodeIdSet>()].into();
    assert_eq!(result.minimal_quorums, expected);
    let text = emit_result(&result, &labels(&fbas), Format::Text);
    assert!(text.starts_with("quorum intersection: yes\n"));
}

#[test]
fn csv_report_counts_every_set() {
    let fbas = parse_nodes(&read("cascading.json")).unwrap();
    let result = analyze(&fbas, &AnalysisOptions::default()).unwrap();
    let csv = emit_result(&result, &labels(&fbas), Format::Csv);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("family,cardinality,count"));
    let total: usize = lines
        .map(|line| line.rsplit(',').next().unwrap().parse::<usize>().unwrap())
        .sum();
    assert_eq!(
        total,
        result.minimal_quorums.len()
            + result.minimal_blocking_sets.len()
            + result.minimal_splitting_sets.len()
    );
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(matches!(parse_nodes("{"), Err(Error::Json(_))));
    let duplicate =
        r#"[{"publicKey": "a", "quorumSet": null}, {"publicKey": "a", "quorumSet": null}]"#;
    assert!(matches!(
        parse_nodes(duplicate),
        Err(Error::DuplicatePublicKey(_))
    ));
}

#[test]
fn as_relationships_follow_the_direction_rule() {
    let text = "# provider 1 serves 2, 2 and 3 peer\n1|2|-1|bgp\n2|3|0|bgp\n";
    let both = parse_as_rel(text, DirectionRule::Both).unwrap();
    let upward = parse_as_rel(text, DirectionRule::CustomerToProvider).unwrap();
    assert_eq!(both.labels(), ["1", "2", "3"]);
    assert_eq!(both.edges().count(), 4);
    assert_eq!(
        upward.edges().collect::<Vec<_>>(),
        vec![(1, 0), (1, 2), (2, 1)]
    );
    assert!(matches!(
        parse_as_rel("1|2|7\n", DirectionRule::Both),
        Err(Error::MalformedAsRelationship { line: 1, .. })
    ));
}
