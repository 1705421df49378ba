use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use mrgs::aggregate::{Aggregator, DEFAULT_BALLS_ALPHA, DEFAULT_LS_PASSES};
use mrgs::graph::{GraphFormat, MultiRelationGraph};
use mrgs::holistic::{self, SingleAlgorithm};
use mrgs::kselect;
use mrgs::partition::LabeledPartition;
use mrgs::query;
use mrgs::single;
use mrgs::storage;
use mrgs::summary::{reconstruct, verify_lossless, CostBreakdown, Summary};
use mrgs::summary_io;

use crate::output::Report;

/// Process exit code carried through anyhow: 1 usage, 2 verification
/// failure, 3 I/O.
#[derive(Debug, Clone, Copy)]
pub struct ExitCode(pub i32);

impl fmt::Display for ExitCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exit code {}", self.0)
    }
}

impl std::error::Error for ExitCode {}

fn usage(msg: impl fmt::Display) -> anyhow::Error {
    anyhow!(msg.to_string()).context(ExitCode(1))
}

#[derive(Parser)]
#[command(
    name = "mrgs",
    version,
    about = "Lossless summarization of multi-relation graphs"
)]
pub struct Cli {
    /// Worker threads for parallel sections (0 = library default)
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Emit one JSON object instead of key=value lines
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Triples,
    RelationList,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> GraphFormat {
        match f {
            FormatArg::Triples => GraphFormat::Triples,
            FormatArg::RelationList => GraphFormat::RelationList,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Debug)]
pub enum AlgoArg {
    Greedy,
    Randomized,
    Sweg,
    Kmedian,
    TwoStep,
    #[value(name = "greedy+")]
    GreedyPlus,
    #[value(name = "randomized+")]
    RandomizedPlus,
    #[value(name = "kmedian+")]
    KmedianPlus,
    Hybrid,
}

impl AlgoArg {
    fn name(self) -> &'static str {
        match self {
            AlgoArg::Greedy => "greedy",
            AlgoArg::Randomized => "randomized",
            AlgoArg::Sweg => "sweg",
            AlgoArg::Kmedian => "kmedian",
            AlgoArg::TwoStep => "two-step",
            AlgoArg::GreedyPlus => "greedy+",
            AlgoArg::RandomizedPlus => "randomized+",
            AlgoArg::KmedianPlus => "kmedian+",
            AlgoArg::Hybrid => "hybrid",
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Debug)]
pub enum SingleArg {
    Greedy,
    Randomized,
    Sweg,
    Kmedian,
}

#[derive(Clone, Copy, ValueEnum, Debug)]
pub enum AggArg {
    Best,
    Balls,
    Agglomerative,
    Furthest,
    Localsearch,
}

#[derive(Args)]
pub struct InputArgs {
    /// Input graph file
    #[arg(long)]
    pub input: PathBuf,
    /// Input format
    #[arg(long, value_enum, default_value = "triples")]
    pub format: FormatArg,
}

#[derive(Subcommand)]
pub enum Command {
    /// Summarize a graph and report the cost breakdown
    Summarize {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        algo: AlgoArg,
        /// Number of supernodes for k-median-based methods
        #[arg(long)]
        k: Option<usize>,
        /// Let Greedy+ suggest k (k-median-based methods)
        #[arg(long)]
        auto_k: bool,
        /// RNG seed for the randomized methods
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// SWeG rounds
        #[arg(long, default_value_t = 20)]
        sweg_iters: usize,
        /// Step-one algorithm for two-step
        #[arg(long, value_enum, default_value = "greedy")]
        single: SingleArg,
        /// Aggregator for two-step
        #[arg(long, value_enum, default_value = "furthest")]
        agg: AggArg,
        /// Balls aggregator threshold
        #[arg(long, default_value_t = DEFAULT_BALLS_ALPHA)]
        balls_alpha: f64,
        /// LocalSearch pass limit
        #[arg(long, default_value_t = DEFAULT_LS_PASSES)]
        ls_passes: usize,
        /// Write the summary here
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rebuild the exact graph from a summary file
    Reconstruct {
        #[arg(long)]
        summary: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "triples")]
        format: FormatArg,
    },
    /// Check a summary against the original graph (exit 2 on mismatch)
    Verify {
        #[arg(long)]
        summary: PathBuf,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Size and storage accounting for a graph or a summary
    Stats {
        #[arg(long, conflicts_with = "summary")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "triples")]
        format: FormatArg,
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Neighborhood queries answered directly on a summary
    Query {
        #[command(subcommand)]
        what: QueryCommand,
    },
    /// Label a graph by the candidate partition with the cheapest summary
    Classify {
        #[command(flatten)]
        input: InputArgs,
        /// Candidate summary files; labels are the file stems
        #[arg(long, num_args = 1.., required = true)]
        candidates: Vec<PathBuf>,
    },
    /// Relative-size curve of k-Median+ over a k range (CSV)
    SweepK {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k_min: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(long, default_value_t = 1)]
        step: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// CSV destination (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Per-relation k-median summaries (the ALL baseline) as one bundle
    BundleAll {
        #[command(flatten)]
        input: InputArgs,
        /// k per relation (defaults to the per-relation Greedy suggestion)
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Brute-force optimal summary for small graphs (n <= 10)
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        /// Restrict to partitions with exactly k supernodes
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Subcommand)]
pub enum QueryCommand {
    /// Neighbors of a node with a per-relation histogram
    Neighborhood {
        #[arg(long)]
        summary: PathBuf,
        #[arg(long)]
        node: String,
        /// Print the per-relation histogram
        #[arg(long)]
        histogram: bool,
        /// Time summary-backed answering against reconstruction + scan
        #[arg(long)]
        bench: bool,
        /// Number of bench queries
        #[arg(long, default_value_t = 100)]
        bench_queries: usize,
    },
}

fn open_graph(path: &Path, format: GraphFormat) -> Result<MultiRelationGraph> {
    let file = File::open(path)
        .with_context(|| format!("cannot open input '{}'", path.display()))
        .context(ExitCode(3))?;
    MultiRelationGraph::load(BufReader::new(file), format)
        .with_context(|| format!("loading '{}'", path.display()))
        .context(ExitCode(3))
}

fn open_summary(path: &Path) -> Result<Summary> {
    let file = File::open(path)
        .with_context(|| format!("cannot open summary '{}'", path.display()))
        .context(ExitCode(3))?;
    summary_io::read_summary(BufReader::new(file))
        .with_context(|| format!("reading summary '{}'", path.display()))
        .context(ExitCode(3))
}

fn push_cost(report: &mut Report, c: &CostBreakdown) {
    report.push("supernodes_m", c.m);
    report.push("superedges", c.superedge_count);
    report.push("cplus", c.plus_count);
    report.push("cminus", c.minus_count);
    report.push("total", c.total());
    report.push("relative_size", c.relative_size());
}

pub fn run(cli: Cli) -> Result<i32> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("initializing thread pool")?;
    }
    let json = cli.json;
    match cli.command {
        Command::Summarize {
            input,
            algo,
            k,
            auto_k,
            seed,
            sweg_iters,
            single,
            agg,
            balls_alpha,
            ls_passes,
            output,
        } => {
            if k.is_some() && auto_k {
                return Err(usage("--k conflicts with --auto-k"));
            }
            let g = open_graph(&input.input, input.format.into())?;
            let start = Instant::now();
            let aggregator = match agg {
                AggArg::Best => Aggregator::Best,
                AggArg::Balls => Aggregator::Balls { alpha: balls_alpha },
                AggArg::Agglomerative => Aggregator::Agglomerative,
                AggArg::Furthest => Aggregator::Furthest,
                AggArg::Localsearch => Aggregator::LocalSearch { max_passes: ls_passes },
            };
            let need_k = || -> Result<usize> {
                if let Some(k) = k {
                    Ok(k)
                } else {
                    Ok(kselect::suggest_k(&g))
                }
            };
            let single_only = |name: &str| -> Result<()> {
                if g.q() != 1 {
                    Err(usage(format!(
                        "--algo {name} summarizes a single relation; this graph has {} \
                         (use --algo two-step or a holistic variant)",
                        g.q()
                    )))
                } else {
                    Ok(())
                }
            };
            let summary = match algo {
                AlgoArg::Greedy => {
                    single_only("greedy")?;
                    single::greedy_summarize(&g.relation_view(0)?, k)?
                }
                AlgoArg::Randomized => {
                    single_only("randomized")?;
                    single::randomized_summarize(&g.relation_view(0)?, seed)?
                }
                AlgoArg::Sweg => {
                    single_only("sweg")?;
                    single::sweg_summarize(&g.relation_view(0)?, sweg_iters, seed)?
                }
                AlgoArg::Kmedian => {
                    single_only("kmedian")?;
                    single::kmedian_summarize(&g.relation_view(0)?, need_k()?, seed)?
                }
                AlgoArg::TwoStep => {
                    let step_one = match single {
                        SingleArg::Greedy => SingleAlgorithm::Greedy,
                        SingleArg::Randomized => SingleAlgorithm::Randomized,
                        SingleArg::Sweg => SingleAlgorithm::Sweg { iterations: sweg_iters },
                        SingleArg::Kmedian => SingleAlgorithm::KMedian { k },
                    };
                    holistic::two_step(&g, step_one, aggregator, seed)?
                }
                AlgoArg::GreedyPlus => holistic::greedy_plus(&g, k)?,
                AlgoArg::RandomizedPlus => holistic::randomized_plus(&g, seed)?,
                AlgoArg::KmedianPlus => holistic::kmedian_plus(&g, need_k()?, seed)?,
                AlgoArg::Hybrid => holistic::hybrid(&g, k, seed)?,
            };
            let elapsed = start.elapsed();
            let mut report = Report::new(json);
            report.push("algorithm", algo.name());
            if matches!(algo, AlgoArg::TwoStep) {
                report.push("single", format!("{single:?}").to_lowercase());
                report.push("agg", format!("{agg:?}").to_lowercase());
            }
            report.push("input", input.input.display().to_string());
            report.push("n", g.n() as u64);
            report.push("q", g.q() as u64);
            report.push("m", g.m() as u64);
            report.push("seed", seed);
            report.push("supernodes", summary.partition.k() as u64);
            let c = summary.cost();
            report.push("superedges", c.superedge_count);
            report.push("cplus", c.plus_count);
            report.push("cminus", c.minus_count);
            report.push("total", c.total());
            report.push("relative_size", c.relative_size());
            report.push("elapsed_ms", elapsed.as_secs_f64() * 1e3);
            if let Some(path) = output {
                let file = File::create(&path)
                    .with_context(|| format!("cannot create '{}'", path.display()))
                    .context(ExitCode(3))?;
                summary_io::write_summary(&summary, BufWriter::new(file)).context(ExitCode(3))?;
                report.push("output", path.display().to_string());
            }
            report.finish();
            Ok(0)
        }
        Command::Reconstruct { summary, output, format } => {
            let s = open_summary(&summary)?;
            let g = reconstruct(&s).context(ExitCode(3))?;
            let file = File::create(&output)
                .with_context(|| format!("cannot create '{}'", output.display()))
                .context(ExitCode(3))?;
            g.write(&mut BufWriter::new(file), format.into()).context(ExitCode(3))?;
            let mut report = Report::new(json);
            report.push("nodes", g.n() as u64);
            report.push("relations", g.q() as u64);
            report.push("edges", g.m() as u64);
            report.push("output", output.display().to_string());
            report.finish();
            Ok(0)
        }
        Command::Verify { summary, input } => {
            let s = open_summary(&summary)?;
            let g = open_graph(&input.input, input.format.into())?;
            let check = verify_lossless(&g, &s).context(ExitCode(3))?;
            let mut report = Report::new(json);
            report.push("lossless", check.ok);
            report.push("missing", check.missing.len() as u64);
            report.push("extra", check.extra.len() as u64);
            report.finish();
            if check.ok {
                Ok(0)
            } else {
                for (u, v, r) in check.missing.iter().take(20) {
                    eprintln!("missing: {u} {v} {r}");
                }
                for (u, v, r) in check.extra.iter().take(20) {
                    eprintln!("extra: {u} {v} {r}");
                }
                Ok(2)
            }
        }
        Command::Stats { input, format, summary } => {
            let mut report = Report::new(json);
            match (input, summary) {
                (Some(path), None) => {
                    let g = open_graph(&path, format.into())?;
                    report.push("n", g.n() as u64);
                    report.push("q", g.q() as u64);
                    report.push("m", g.m() as u64);
                    report.push(
                        "bytes_plain",
                        storage::graph_bytes(&g, GraphFormat::Triples) as u64,
                    );
                    report.push(
                        "bytes_relation_list",
                        storage::graph_bytes(&g, GraphFormat::RelationList) as u64,
                    );
                }
                (None, Some(path)) => {
                    let s = open_summary(&path)?;
                    push_cost(&mut report, &s.cost());
                    report.push("supernodes", s.partition.k() as u64);
                    report.push(
                        "bytes_plain",
                        storage::summary_bytes(&s, GraphFormat::Triples, true) as u64,
                    );
                    report.push(
                        "bytes_relation_list",
                        storage::summary_bytes(&s, GraphFormat::RelationList, true) as u64,
                    );
                    report.push("bytes_mapping", storage::mapping_bytes(&s) as u64);
                }
                _ => return Err(usage("stats needs exactly one of --input or --summary")),
            }
            report.finish();
            Ok(0)
        }
        Command::Query { what } => match what {
            QueryCommand::Neighborhood { summary, node, histogram, bench, bench_queries } => {
                let s = open_summary(&summary)?;
                let v = s
                    .node_id(&node)
                    .ok_or_else(|| usage(format!("unknown node '{node}'")))?;
                let nb = query::neighborhood(&s, v).context(ExitCode(3))?;
                let mut report = Report::new(json);
                report.push("node", node.clone());
                report.push("degree", nb.entries.len() as u64);
                let entries: Vec<String> = nb
                    .entries
                    .iter()
                    .map(|&(w, r)| {
                        format!(
                            "{}:{}",
                            s.node_labels[w as usize], s.relation_labels[r as usize]
                        )
                    })
                    .collect();
                report.push("neighbors", entries.join(","));
                if histogram {
                    let hist: Vec<String> = nb
                        .histogram
                        .iter()
                        .enumerate()
                        .map(|(r, c)| format!("{}:{}", s.relation_labels[r], c))
                        .collect();
                    report.push("histogram", hist.join(","));
                }
                if bench {
                    let nodes: Vec<u32> = (0..s.n() as u32)
                        .cycle()
                        .take(bench_queries.max(1))
                        .collect();
                    let t0 = Instant::now();
                    for &u in &nodes {
                        let _ = query::neighborhood(&s, u).context(ExitCode(3))?;
                    }
                    let summary_time = t0.elapsed();
                    let t1 = Instant::now();
                    let rebuilt = reconstruct(&s).context(ExitCode(3))?;
                    let edges = rebuilt.edges();
                    for &u in &nodes {
                        let _ = query::neighborhood_by_scan(&edges, rebuilt.q(), u);
                    }
                    let brute_time = t1.elapsed();
                    report.push("bench_queries", nodes.len() as u64);
                    report.push("summary_ms", summary_time.as_secs_f64() * 1e3);
                    report.push("reconstruct_scan_ms", brute_time.as_secs_f64() * 1e3);
                    report.push(
                        "speedup",
                        brute_time.as_secs_f64() / summary_time.as_secs_f64().max(1e-9),
                    );
                }
                report.finish();
                Ok(0)
            }
        },
        Command::Classify { input, candidates } => {
            let g = open_graph(&input.input, input.format.into())?;
            let mut labeled: Vec<(String, LabeledPartition)> = Vec::new();
            for path in &candidates {
                let s = open_summary(path)?;
                let label = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                let lp = LabeledPartition::from_partition(&s.partition, &s.node_labels);
                labeled.push((label, lp));
            }
            let (winner, costs) = query::classify(&g, &labeled).context(ExitCode(3))?;
            let mut report = Report::new(json);
            for (label, cost) in &costs {
                report.push(&format!("cost_{label}"), *cost);
            }
            report.push("label", winner);
            report.finish();
            Ok(0)
        }
        Command::SweepK { input, k_min, k_max, step, seed, output } => {
            let g = open_graph(&input.input, input.format.into())?;
            let (lo, hi) = match (k_min, k_max) {
                (Some(lo), Some(hi)) => (lo, hi),
                (None, None) => kselect::default_sweep_range(&g, kselect::suggest_k(&g)),
                _ => return Err(usage("provide both --k-min and --k-max, or neither")),
            };
            let curve = kselect::sweep_k(&g, lo, hi, step, seed)
                .map_err(|e| usage(format!("sweep range: {e}")))?;
            let chosen = kselect::select_k(&curve).map_err(|e| usage(format!("{e}")))?;
            let mut csv = String::from("k,relative_size\n");
            for (k, rs) in &curve {
                csv.push_str(&format!("{k},{rs}\n"));
            }
            match &output {
                Some(path) => {
                    let mut file = File::create(path)
                        .with_context(|| format!("cannot create '{}'", path.display()))
                        .context(ExitCode(3))?;
                    file.write_all(csv.as_bytes()).context(ExitCode(3))?;
                }
                None => print!("{csv}"),
            }
            let mut report = Report::new(json);
            report.push("k_min", lo as u64);
            report.push("k_max", hi as u64);
            report.push("seed", seed);
            report.push("selected_k", chosen as u64);
            if let Some(path) = output {
                report.push("output", path.display().to_string());
            }
            report.finish();
            Ok(0)
        }
        Command::BundleAll { input, k, seed, output } => {
            let g = open_graph(&input.input, input.format.into())?;
            let bundle = storage::all_relations_bundle(&g, k, seed).context(ExitCode(3))?;
            let mut report = Report::new(json);
            report.push("relations", bundle.len() as u64);
            report.push("seed", seed);
            let total: u64 = bundle.iter().map(|(_, s)| s.cost().total()).sum();
            report.push("total_cost", total);
            report.push(
                "bytes_plain",
                storage::bundle_bytes(&bundle, GraphFormat::Triples) as u64,
            );
            report.push(
                "bytes_relation_list",
                storage::bundle_bytes(&bundle, GraphFormat::RelationList) as u64,
            );
            report.push("bytes_mappings", storage::bundle_mapping_bytes(&bundle) as u64);
            if let Some(path) = output {
                let file = File::create(&path)
                    .with_context(|| format!("cannot create '{}'", path.display()))
                    .context(ExitCode(3))?;
                storage::write_bundle(&bundle, BufWriter::new(file)).context(ExitCode(3))?;
                report.push("output", path.display().to_string());
            }
            report.finish();
            Ok(0)
        }
        Command::Oracle { input, k } => {
            let g = open_graph(&input.input, input.format.into())?;
            let (p, c) = mrgs::oracle::brute_force_optimal(&g, k)
                .map_err(|e| usage(format!("{e}")))?;
            let mut report = Report::new(json);
            report.push("supernodes", p.k() as u64);
            let blocks: Vec<String> = p
                .blocks()
                .iter()
                .map(|b| {
                    b.iter()
                        .map(|&u| g.node_label(u))
                        .collect::<Vec<_>>()
                        .join("|")
                })
                .collect();
            report.push("partition", blocks.join(" "));
            push_cost(&mut report, &c);
            report.finish();
            Ok(0)
        }
    }
}
