use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use tipseed::baselines::Measure;
use tipseed::decomp::{tip_decomp, verify_decomposition};
use tipseed::exact::{build_seed_ip, min_seed_bruteforce, solve_seed_ip_small, DEFAULT_BRUTEFORCE_LIMIT, DEFAULT_IP_LIMIT};
use tipseed::graph::load_edge_list_file;
use tipseed::harness::{
    compare_baselines, run_activation_speed, run_degree_removal, run_runtime_scaling, run_threshold_sweep,
    write_records_csv, write_records_json, Algorithm, GraphSource, ScalingConfig, SweepReport, ThresholdMode,
    TrialConfig, TrialRecord,
};
use tipseed::structure::{average_clustering, louvain, planar_fit};
use tipseed::tipping::{activate_fixpoint, compute_thresholds, covers};
use tipseed::{DirectedGraph, SeedSet, ThresholdSpec};

#[derive(Parser)]
#[command(name = "tipseed", version, about = "Seed sets that activate a whole network under the tipping model")]
struct Cli {
    /// Random seed for synthetic graphs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Edge-list file: one `source target` pair per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,
    /// Add the reverse of every edge.
    #[arg(long)]
    symmetrize: bool,
}

#[derive(Args, Clone, Default)]
#[group(multiple = false)]
struct ThresholdArgs {
    /// k_i = min(d_in, K).
    #[arg(long, value_name = "K")]
    threshold_int: Option<u32>,
    /// k_i = ceil(F * d_in).
    #[arg(long, value_name = "F")]
    threshold_frac: Option<f64>,
    /// K = 1..10.
    #[arg(long)]
    int_sweep: bool,
    /// F = 0.05..0.60 in steps of 0.05.
    #[arg(long)]
    frac_sweep: bool,
}

impl ThresholdArgs {
    fn mode(&self) -> Option<Result<ThresholdMode>> {
        if let Some(k) = self.threshold_int {
            return Some(ThresholdSpec::capped(k).map(ThresholdMode::Single).map_err(Into::into));
        }
        if let Some(f) = self.threshold_frac {
            return Some(ThresholdSpec::fraction(f).map(ThresholdMode::Single).map_err(Into::into));
        }
        if self.int_sweep {
            return Some(Ok(ThresholdMode::IntSweep));
        }
        if self.frac_sweep {
            return Some(Ok(ThresholdMode::FracSweep));
        }
        None
    }

    fn mode_or(&self, default: ThresholdMode) -> Result<ThresholdMode> {
        self.mode().unwrap_or(Ok(default))
    }

    fn single(&self) -> Result<ThresholdSpec> {
        match self.mode_or(ThresholdMode::Single(ThresholdSpec::majority()))? {
            ThresholdMode::Single(spec) => Ok(spec),
            _ => bail!("this command takes a single threshold (--threshold-int or --threshold-frac)"),
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl OutputArgs {
    fn sink(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactMethod {
    Bruteforce,
    Ip,
}

#[derive(Subcommand)]
enum Command {
    /// Seed set from the shell-style decomposition.
    Decomp {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        threshold: ThresholdArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimum seed set on a small graph.
    Exact {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        threshold: ThresholdArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_enum, default_value = "bruteforce")]
        method: ExactMethod,
        /// Largest graph accepted.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Write the 0/1 program in LP format.
    IpExport {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        threshold: ThresholdArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seed sizes across threshold settings.
    Sweep {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        threshold: ThresholdArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Comma-separated: decomp, bruteforce, ip, greedy-<measure>.
        #[arg(long, value_delimiter = ',', default_value = "decomp")]
        algorithms: Vec<String>,
        /// Also write one LP file per threshold setting into this directory.
        #[arg(long)]
        ip_dir: Option<PathBuf>,
    },
    /// Decompose after deleting the highest-degree vertices.
    Removal {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        threshold: ThresholdArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Comma-separated fractions in [0, 0.5]; defaults to 0, 0.05, ..., 0.5.
        #[arg(long, value_delimiter = ',')]
        fractions: Vec<f64>,
    },
    /// Cascade length from the decomposition seed.
    Speed {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        threshold: ThresholdArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Write a per-step trace CSV for each threshold here.
        #[arg(long)]
        trace_dir: Option<PathBuf>,
    },
    /// Decomposition against centrality-ranked greedy seeding.
    Baselines {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        threshold: ThresholdArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Comma-separated measures; all six by default.
        #[arg(long, value_delimiter = ',')]
        measures: Vec<String>,
        /// Also report the brute-force optimum.
        #[arg(long)]
        exact: bool,
    },
    /// Clustering and Louvain communities, or a planar fit of S on M and C.
    Structure {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Write the community of every vertex here.
        #[arg(long)]
        partition: Option<PathBuf>,
    },
    /// Fit S = a*M + b*C + c from a CSV with columns M,C,S.
    Fit {
        points: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decomposition runtime against m ln n on synthetic graphs.
    Scaling {
        #[command(flatten)]
        threshold: ThresholdArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Comma-separated directed edge counts.
        #[arg(long, value_delimiter = ',', default_value = "10000,20000,50000,100000,200000,500000,1000000")]
        edges: Vec<usize>,
        /// Mean degree of the uniform random graphs.
        #[arg(long, default_value_t = 10.0)]
        degree: f64,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
    },
}

fn load(args: &GraphArgs) -> Result<DirectedGraph> {
    load_edge_list_file(&args.graph, args.symmetrize).with_context(|| format!("cannot load {}", args.graph.display()))
}

fn trial_config(graph: &GraphArgs, thresholds: ThresholdMode, seed: u64) -> TrialConfig {
    let mut cfg = TrialConfig::new(GraphSource::File { path: graph.graph.clone(), symmetrize: graph.symmetrize })
        .with_thresholds(thresholds);
    cfg.rng_seed = seed;
    cfg
}

fn write_records(records: &[TrialRecord], output: &OutputArgs) -> Result<()> {
    let mut sink = output.sink()?;
    match output.format {
        Format::Csv => write_records_csv(records, &mut sink)?,
        Format::Json => write_records_json(records, &mut sink)?,
    }
    sink.flush()?;
    Ok(())
}

fn write_report(report: &SweepReport, output: &OutputArgs) -> Result<()> {
    for f in &report.failures {
        eprintln!("warning: {} at {} {} failed: {}", f.algorithm, f.mode, f.value, f.reason);
    }
    write_records(&report.records, output)
}

fn write_seed(g: &DirectedGraph, seed: &SeedSet, summary: serde_json::Value, output: &OutputArgs) -> Result<()> {
    let mut sink = output.sink()?;
    let labels: Vec<String> = seed.iter().map(|v| g.label(v)).collect();
    match output.format {
        Format::Csv => {
            writeln!(sink, "node")?;
            for label in &labels {
                writeln!(sink, "{label}")?;
            }
        }
        Format::Json => {
            let mut value = summary;
            value["seed"] = json!(labels);
            serde_json::to_writer_pretty(&mut sink, &value)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

fn parse_algorithms(names: &[String]) -> Result<Vec<Algorithm>> {
    names.iter().map(|s| s.trim().parse().map_err(Into::into)).collect()
}

fn parse_measures(names: &[String]) -> Result<Vec<Measure>> {
    if names.is_empty() {
        return Ok(Measure::ALL.to_vec());
    }
    names.iter().map(|s| s.trim().parse().map_err(Into::into)).collect()
}

fn read_points(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut points = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let field = |j: usize| -> Result<f64> {
            let text = row.get(j).with_context(|| format!("row {}: expected 3 columns", i + 2))?;
            text.trim().parse().with_context(|| format!("row {}: {text:?} is not a number", i + 2))
        };
        points.push((field(0)?, field(1)?, field(2)?));
    }
    Ok(points)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Decomp { graph, threshold, output } => {
            let spec = threshold.single()?;
            let g = load(&graph)?;
            let ka = compute_thresholds(&g, spec);
            let result = tip_decomp(&g, &ka);
            let (_, trace) = activate_fixpoint(&g, &ka, &result.seed);
            let summary = json!({
                "n": g.node_count(),
                "m": g.edge_count(),
                "mode": spec.mode(),
                "value": spec.value(),
                "seed_size": result.seed.len(),
                "covers": covers(&g, &ka, &result.seed),
                "verified": verify_decomposition(&g, &ka, &result)?,
                "steps": trace.len(),
            });
            write_seed(&g, &result.seed, summary, &output)
        }
        Command::Exact { graph, threshold, output, method, limit } => {
            let spec = threshold.single()?;
            let g = load(&graph)?;
            let seed = match method {
                ExactMethod::Bruteforce => {
                    min_seed_bruteforce(&g, &compute_thresholds(&g, spec), limit.unwrap_or(DEFAULT_BRUTEFORCE_LIMIT))?
                }
                ExactMethod::Ip => solve_seed_ip_small(&g, spec, limit.unwrap_or(DEFAULT_IP_LIMIT))?.seed,
            };
            let summary = json!({
                "n": g.node_count(),
                "m": g.edge_count(),
                "mode": spec.mode(),
                "value": spec.value(),
                "seed_size": seed.len(),
            });
            write_seed(&g, &seed, summary, &output)
        }
        Command::IpExport { graph, threshold, out } => {
            let spec = threshold.single()?;
            let g = load(&graph)?;
            let model = build_seed_ip(&g, spec)?;
            let output = OutputArgs { out, format: Format::Csv };
            let mut sink = output.sink()?;
            model.export_lp(&mut sink)?;
            sink.flush()?;
            Ok(())
        }
        Command::Sweep { graph, threshold, output, algorithms, ip_dir } => {
            let mut cfg = trial_config(&graph, threshold.mode_or(ThresholdMode::IntSweep)?, cli.seed)
                .with_algorithms(parse_algorithms(&algorithms)?);
            cfg.ip_export_dir = ip_dir;
            write_report(&run_threshold_sweep(&cfg)?, &output)
        }
        Command::Removal { graph, threshold, output, fractions } => {
            let mut cfg = trial_config(&graph, threshold.mode_or(ThresholdMode::IntSweep)?, cli.seed);
            if !fractions.is_empty() {
                cfg = cfg.with_removal_fractions(fractions);
            }
            write_report(&run_degree_removal(&cfg)?, &output)
        }
        Command::Speed { graph, threshold, output, trace_dir } => {
            let defaults = ThresholdMode::List(vec![ThresholdSpec::AbsoluteCapped(2), ThresholdSpec::majority()]);
            let cfg = trial_config(&graph, threshold.mode_or(defaults)?, cli.seed);
            let runs = run_activation_speed(&cfg)?;
            if let Some(dir) = trace_dir {
                std::fs::create_dir_all(&dir)?;
                for run in &runs {
                    let r = &run.record;
                    let path = dir.join(format!("{}_{}_{}_trace.csv", r.network, r.mode, r.value));
                    run.trace.write_csv(BufWriter::new(File::create(&path)?))?;
                }
            }
            let records: Vec<TrialRecord> = runs.into_iter().map(|r| r.record).collect();
            write_records(&records, &output)
        }
        Command::Baselines { graph, threshold, output, measures, exact } => {
            let mut algorithms: Vec<Algorithm> = parse_measures(&measures)?.into_iter().map(Algorithm::Greedy).collect();
            if exact {
                algorithms.push(Algorithm::Bruteforce);
            }
            let cfg = trial_config(&graph, threshold.mode_or(ThresholdMode::IntSweep)?, cli.seed)
                .with_algorithms(algorithms);
            write_report(&compare_baselines(&cfg)?, &output)
        }
        Command::Structure { graph, output, partition } => {
            let g = load(&graph)?;
            let clustering = average_clustering(&g)?;
            let communities = louvain(&g)?;
            if let Some(path) = partition {
                communities.partition.write_csv(&g, BufWriter::new(File::create(&path)?))?;
            }
            let mut sink = output.sink()?;
            let count = communities.partition.community_count();
            match output.format {
                Format::Csv => {
                    writeln!(sink, "n,m,clustering,modularity,communities")?;
                    writeln!(sink, "{},{},{clustering},{},{count}", g.node_count(), g.edge_count(), communities.modularity)?;
                }
                Format::Json => {
                    let value = json!({
                        "n": g.node_count(),
                        "m": g.edge_count(),
                        "clustering": clustering,
                        "modularity": communities.modularity,
                        "communities": count,
                    });
                    serde_json::to_writer_pretty(&mut sink, &value)?;
                    writeln!(sink)?;
                }
            }
            sink.flush()?;
            Ok(())
        }
        Command::Fit { points, output } => {
            let fit = planar_fit(&read_points(&points)?)?;
            let mut sink = output.sink()?;
            match output.format {
                Format::Csv => {
                    writeln!(sink, "a,b,c,r_squared")?;
                    writeln!(sink, "{},{},{},{}", fit.a, fit.b, fit.c, fit.r_squared)?;
                }
                Format::Json => {
                    serde_json::to_writer_pretty(&mut sink, &fit)?;
                    writeln!(sink)?;
                }
            }
            sink.flush()?;
            Ok(())
        }
        Command::Scaling { threshold, output, edges, degree, repetitions } => {
            let spec = match threshold.mode() {
                None => ThresholdSpec::AbsoluteCapped(2),
                Some(_) => threshold.single()?,
            };
            let mut cfg = ScalingConfig::uniform_ladder(&edges, degree, spec);
            cfg.repetitions = repetitions;
            cfg.rng_seed = cli.seed;
            let report = run_runtime_scaling(&cfg)?;
            if let Some(fit) = &report.fit {
                eprintln!(
                    "runtime_ms = {:.6e} * m ln n + {:.4}, R^2 = {:.4}",
                    fit.slope, fit.intercept, fit.r_squared
                );
            }
            write_records(&report.records, &output)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
