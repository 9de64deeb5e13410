//! Serialization of analysis results.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::{AnalysisResult, FamilyStats, Warning};
use crate::node_set::{NodeIdSet, NodeSetFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    has_quorum_intersection: bool,
    top_tier: Vec<&'a str>,
    minimal_quorums: Vec<Vec<&'a str>>,
    minimal_blocking_sets: Vec<Vec<&'a str>>,
    minimal_splitting_sets: Vec<Vec<&'a str>>,
    statistics: Statistics,
    warnings: Vec<WarningEntry<'a>>,
}

#[derive(Serialize)]
struct Statistics {
    quorums: FamilyStats,
    blocking: FamilyStats,
    splitting: FamilyStats,
}

#[derive(Serialize)]
struct WarningEntry<'a> {
    #[serde(flatten)]
    warning: &'a Warning,
    message: String,
}

/// Renders `result`, naming node `i` by `labels[i]`.
///
/// JSON carries every family plus statistics; CSV carries one
/// `family,cardinality,count` row per histogram bucket; text is a short
/// human-readable summary.
pub fn emit_result(result: &AnalysisResult, labels: &[String], format: Format) -> String {
    match format {
        Format::Json => emit_json(result, labels),
        Format::Csv => emit_csv(result),
        Format::Text => emit_text(result, labels),
    }
}

fn names<'a>(set: &NodeIdSet, labels: &'a [String]) -> Vec<&'a str> {
    set.iter().map(|v| labels[v].as_str()).collect()
}

fn family_names<'a>(family: &NodeSetFamily, labels: &'a [String]) -> Vec<Vec<&'a str>> {
    family.iter().map(|set| names(set, labels)).collect()
}

fn emit_json(result: &AnalysisResult, labels: &[String]) -> String {
    let report = JsonReport {
        has_quorum_intersection: result.has_quorum_intersection,
        top_tier: names(&result.top_tier, labels),
        minimal_quorums: family_names(&result.minimal_quorums, labels),
        minimal_blocking_sets: family_names(&result.minimal_blocking_sets, labels),
        minimal_splitting_sets: family_names(&result.minimal_splitting_sets, labels),
        statistics: Statistics {
            quorums: result.quorum_stats(),
            blocking: result.blocking_stats(),
            splitting: result.splitting_stats(),
        },
        warnings: result
            .warnings
            .iter()
            .map(|warning| WarningEntry {
                warning,
                message: warning.to_string(),
            })
            .collect(),
    };
    let mut json = serde_json::to_string_pretty(&report).expect("reports always serialize");
    json.push('\n');
    json
}

fn families(result: &AnalysisResult) -> [(&'static str, FamilyStats); 3] {
    [
        ("quorums", result.quorum_stats()),
        ("blocking", result.blocking_stats()),
        ("splitting", result.splitting_stats()),
    ]
}

fn emit_csv(result: &AnalysisResult) -> String {
    let mut csv = String::from("family,cardinality,count\n");
    for (name, stats) in families(result) {
        for (cardinality, count) in stats.histogram {
            writeln!(csv, "{name},{cardinality},{count}").unwrap();
        }
    }
    csv
}

fn emit_text(result: &AnalysisResult, labels: &[String]) -> String {
    let mut text = String::new();
    writeln!(
        text,
        "quorum intersection: {}",
        if result.has_quorum_intersection {
            "yes"
        } else {
            "NO"
        }
    )
    .unwrap();
    writeln!(
        text,
        "top tier ({} nodes): {}",
        result.top_tier.len(),
        names(&result.top_tier, labels).join(", ")
    )
    .unwrap();
    let titles = [
        "minimal quorums",
        "minimal blocking sets",
        "minimal splitting sets",
    ];
    for (title, (_, stats)) in titles.iter().zip(families(result)) {
        write!(text, "{title}: {}", stats.count).unwrap();
        if let (Some(min), Some(max), Some(mean)) = (stats.min, stats.max, stats.mean) {
            write!(text, " (cardinality min {min}, max {max}, mean {mean:.2})").unwrap();
        }
        text.push('\n');
    }
    for warning in &result.warnings {
        writeln!(text, "warning: {warning}").unwrap();
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze, AnalysisOptions};
    use crate::fbas::tests::{cascading_fbas, five_node_fbas};
    use crate::fbas::Fbas;

    fn labels(fbas: &Fbas) -> Vec<String> {
        fbas.nodes().iter().map(|n| n.public_key.clone()).collect()
    }

    fn report(fbas: &Fbas, format: Format) -> String {
        let result = analyze(fbas, &AnalysisOptions::default()).unwrap();
        emit_result(&result, &labels(fbas), format)
    }

    #[test]
    fn json_lists_families() {
        let json: serde_json::Value =
            serde_json::from_str(&report(&five_node_fbas(), Format::Json)).unwrap();
        assert_eq!(json["minimal_splitting_sets"], serde_json::json!([["0"]]));
        assert_eq!(json["has_quorum_intersection"], true);
        assert_eq!(json["statistics"]["blocking"]["min"], 1);
        assert_eq!(json["top_tier"].as_array().unwrap().len(), 5);
    }

    #[test]
    fn csv_rows_match_family_sizes() {
        let csv = report(&cascading_fbas(), Format::Csv);
        assert!(csv.lines().any(|line| line == "blocking,1,1"));
        let count = |family: &str| -> usize {
            csv.lines()
                .filter_map(|line| line.strip_prefix(&format!("{family},")))
                .map(|rest| rest.split(',').nth(1).unwrap().parse::<usize>().unwrap())
                .sum()
        };
        assert_eq!(count("blocking"), 13);
        assert_eq!(count("splitting"), 11);
    }

    #[test]
    fn empty_fbas_report_carries_warning() {
        let json: serde_json::Value =
            serde_json::from_str(&report(&Fbas::default(), Format::Json)).unwrap();
        assert_eq!(json["has_quorum_intersection"], true);
        assert_eq!(json["minimal_quorums"], serde_json::json!([]));
        assert_eq!(json["warnings"][0]["kind"], "no_quorum");
    }

    #[test]
    fn output_is_deterministic() {
        for format in [Format::Json, Format::Csv, Format::Text] {
            assert_eq!(
                report(&cascading_fbas(), format),
                report(&cascading_fbas(), format)
            );
        }
    }

    #[test]
    fn text_summary() {
        let text = report(&five_node_fbas(), Format::Text);
        assert!(text.starts_with("quorum intersection: yes\ntop tier (5 nodes)"));
        assert!(text.contains("minimal blocking sets: 5 (cardinality min 1, max 2"));
    }
}
