use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fbas_core::analysis::merge::{merge_families_by_group, merged_labels};
use fbas_core::analysis::{
    analyze, reduce_to_minimal_sets, AnalysisOptions, AnalysisResult, IntersectionAlgorithm,
};
use fbas_core::io::{
    emit_nodes, emit_result, parse_as_rel, parse_nodes, parse_organizations, DirectionRule, Format,
};
use fbas_core::qsc::{
    generate_flat_topology, generate_random_fbas, generate_stellar_like_topology,
    simulate_and_analyze, PolicyKind, QscPolicy,
};
use fbas_core::{oracle, Fbas};

const EXIT_ERROR: u8 = 1;
const EXIT_NO_INTERSECTION: u8 = 2;
const EXIT_ABORTED: u8 = 3;

/// Exact quorum, blocking set and splitting set analysis of FBASs.
#[derive(Parser)]
#[command(name = "fbas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the output here instead of to stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze an FBAS given as a JSON node list.
    Analyze {
        nodes: PathBuf,
        /// JSON list of organizations (`id`, `name`, `validators`).
        #[arg(long)]
        organizations: Option<PathBuf>,
        /// Report organizations instead of nodes; requires --organizations.
        #[arg(long, requires = "organizations")]
        merge_by_org: bool,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Derive quorum sets from a trust graph by a policy and analyze the result.
    Simulate {
        /// AS-relationship file: `<as1>|<as2>|<rel>` per line, `-1` for
        /// provider-customer, `0` for peers.
        graph: PathBuf,
        #[arg(long, value_enum)]
        policy: Policy,
        /// Rank factor separating tiers for the higher-tier policy.
        #[arg(long, default_value_t = QscPolicy::DEFAULT_TIER_RATIO)]
        tier_ratio: f64,
        /// Only customers trust their providers, not the other way round.
        #[arg(long)]
        customer_to_provider: bool,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Write a synthetic FBAS as a JSON node list.
    Generate {
        #[arg(value_enum)]
        topology: Topology,
        /// Nodes for flat and random topologies, organizations for stellar-like.
        size: usize,
        /// Allow inner quorum sets in random topologies.
        #[arg(long)]
        nested: bool,
    },
    /// Compare the analysis against exhaustive subset search (at most 20 nodes).
    OracleCheck {
        nodes: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
}

#[derive(Args)]
struct AnalysisArgs {
    #[arg(long, value_enum, default_value_t = IntersectionAlgo::Complement)]
    intersection_algo: IntersectionAlgo,
    /// Enumerate even when the top tier admits closed forms.
    #[arg(long)]
    no_symmetric_shortcuts: bool,
    /// Branch over every node separately, even over interchangeable ones.
    #[arg(long)]
    no_node_symmetry: bool,
    /// Give up on blocking and splitting sets above this top-tier size.
    #[arg(long, default_value_t = 40)]
    abort_above: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

impl AnalysisArgs {
    fn options(&self) -> AnalysisOptions {
        AnalysisOptions {
            intersection: match self.intersection_algo {
                IntersectionAlgo::Pairwise => IntersectionAlgorithm::Pairwise,
                IntersectionAlgo::Complement => IntersectionAlgorithm::Complement,
            },
            symmetric_shortcuts: !self.no_symmetric_shortcuts,
            node_symmetry: !self.no_node_symmetry,
            abort_above: Some(self.abort_above),
        }
    }

    fn format(&self) -> Format {
        match self.format {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum IntersectionAlgo {
    Pairwise,
    Complement,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Policy {
    SuperSafe,
    IdealOpen,
    AllNeighbors,
    HigherTier,
}

impl From<Policy> for PolicyKind {
    fn from(policy: Policy) -> Self {
        match policy {
            Policy::SuperSafe => PolicyKind::SuperSafe,
            Policy::IdealOpen => PolicyKind::IdealOpen,
            Policy::AllNeighbors => PolicyKind::AllNeighbors,
            Policy::HigherTier => PolicyKind::HigherTierNeighbors,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Topology {
    Flat,
    StellarLike,
    Random,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_output(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_exit(result: &AnalysisResult) -> ExitCode {
    if result.has_quorum_intersection {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NO_INTERSECTION)
    }
}

fn public_keys(fbas: &Fbas) -> Vec<String> {
    fbas.nodes()
        .iter()
        .map(|node| node.public_key.clone())
        .collect()
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let output = cli.output.as_deref();
    match cli.command {
        Command::Analyze {
            nodes,
            organizations,
            merge_by_org,
            analysis,
        } => {
            let fbas = parse_nodes(&read(&nodes)?).context("invalid node list")?;
            let groupings = match &organizations {
                Some(path) => {
                    parse_organizations(&read(path)?, &fbas).context("invalid organizations")?
                }
                None => vec![],
            };
            let mut result = analyze(&fbas, &analysis.options())?;
            let labels = if merge_by_org {
                result = merge_families_by_group(&result, &groupings)?;
                merged_labels(&fbas, &groupings)
            } else {
                public_keys(&fbas)
            };
            write_output(output, &emit_result(&result, &labels, analysis.format()))?;
            Ok(report_exit(&result))
        }
        Command::Simulate {
            graph,
            policy,
            tier_ratio,
            customer_to_provider,
            analysis,
        } => {
            let rule = if customer_to_provider {
                DirectionRule::CustomerToProvider
            } else {
                DirectionRule::Both
            };
            let graph = parse_as_rel(&read(&graph)?, rule).context("invalid trust graph")?;
            let policy = QscPolicy::with_tier_ratio(policy.into(), tier_ratio)?;
            let simulation = simulate_and_analyze(&graph, &policy, &analysis.options())?;
            if !simulation.dropped.is_empty() {
                log::info!(
                    "dropped {} nodes that only trust themselves",
                    simulation.dropped.len()
                );
            }
            let labels = public_keys(&simulation.fbas);
            write_output(
                output,
                &emit_result(&simulation.result, &labels, analysis.format()),
            )?;
            Ok(report_exit(&simulation.result))
        }
        Command::Generate {
            topology,
            size,
            nested,
        } => {
            let fbas = match topology {
                Topology::Flat => generate_flat_topology(size)?,
                Topology::StellarLike => generate_stellar_like_topology(size)?,
                Topology::Random => generate_random_fbas(size, nested, cli.seed)?,
            };
            let mut json = emit_nodes(&fbas);
            json.push('\n');
            write_output(output, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleCheck { nodes, analysis } => {
            let fbas = parse_nodes(&read(&nodes)?).context("invalid node list")?;
            let options = AnalysisOptions {
                abort_above: None,
                ..analysis.options()
            };
            let result = analyze(&fbas, &options)?;
            let quorums = oracle::brute_quorums(&fbas)?;
            let intersecting = quorums
                .iter()
                .all(|a| quorums.iter().all(|b| !a.is_disjoint(b)));
            let checks = [
                (
                    "minimal quorums",
                    result.minimal_quorums == reduce_to_minimal_sets(quorums),
                ),
                (
                    "minimal blocking sets",
                    result.minimal_blocking_sets == oracle::brute_blocking_sets(&fbas)?,
                ),
                (
                    "minimal splitting sets",
                    result.minimal_splitting_sets == oracle::brute_splitting_sets(&fbas)?,
                ),
                (
                    "quorum intersection",
                    result.has_quorum_intersection == intersecting,
                ),
            ];
            let mut text = String::new();
            for (name, matches) in checks {
                text.push_str(&format!(
                    "{name}: {}\n",
                    if matches { "match" } else { "MISMATCH" }
                ));
            }
            write_output(output, &text)?;
            if checks.iter().all(|(_, matches)| *matches) {
                Ok(ExitCode::SUCCESS)
            } else {
                bail!("analysis disagrees with exhaustive search")
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(error) => {
            let _ = error.print();
            return if error.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            match error.downcast_ref::<fbas_core::Error>() {
                Some(fbas_core::Error::TopTierTooLarge { .. }) => ExitCode::from(EXIT_ABORTED),
                _ => ExitCode::from(EXIT_ERROR),
            }
        }
    }
}
