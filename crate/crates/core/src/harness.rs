//! Experiment drivers: threshold sweeps, degree-removal robustness,
//! activation speed, runtime scaling and centrality comparisons. Each driver
//! returns [`TrialRecord`]s that serialize to a fixed CSV layout.

use std::borrow::Cow;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{self, greedy_centrality_seed, reichman_bound, Measure};
use crate::decomp::tip_decomp;
use crate::error::{Error, Result};
use crate::exact::{build_seed_ip, min_seed_bruteforce, solve_seed_ip_small, DEFAULT_BRUTEFORCE_LIMIT, DEFAULT_IP_LIMIT};
use crate::graph::{load_edge_list_file, make_synthetic, DirectedGraph, NodeId, Orientation, SyntheticKind};
use crate::structure::{linear_fit, LinearFit};
use crate::tipping::{
    activate_fixpoint, compute_thresholds, covers, critical_mass_step, ActivationTrace, SeedSet, ThresholdSpec,
};

pub const CSV_COLUMNS: [&str; 13] = [
    "network",
    "n",
    "m",
    "mode",
    "value",
    "algorithm",
    "seed_size",
    "seed_fraction",
    "runtime_ms",
    "steps",
    "critical_step",
    "critical_pct",
    "removal_fraction",
];

/// Largest fraction of vertices the removal experiment may delete.
pub const MAX_REMOVAL_FRACTION: f64 = 0.5;

#[derive(Clone, Debug)]
pub enum GraphSource {
    File { path: PathBuf, symmetrize: bool },
    Memory { name: String, graph: DirectedGraph },
}

impl GraphSource {
    pub fn name(&self) -> String {
        match self {
            GraphSource::File { path, .. } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string()),
            GraphSource::Memory { name, .. } => name.clone(),
        }
    }

    pub fn load(&self) -> Result<Cow<'_, DirectedGraph>> {
        match self {
            GraphSource::File { path, symmetrize } => Ok(Cow::Owned(load_edge_list_file(path, *symmetrize)?)),
            GraphSource::Memory { graph, .. } => Ok(Cow::Borrowed(graph)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ThresholdMode {
    /// `AbsoluteCapped(k)` for `k = 1..=10`.
    IntSweep,
    /// `FractionOfInDegree(f)` for `f = 0.05, 0.10, ..., 0.60`.
    FracSweep,
    Single(ThresholdSpec),
    List(Vec<ThresholdSpec>),
}

impl ThresholdMode {
    pub fn specs(&self) -> Vec<ThresholdSpec> {
        match self {
            ThresholdMode::IntSweep => (1..=10).map(ThresholdSpec::AbsoluteCapped).collect(),
            ThresholdMode::FracSweep => (1..=12)
                .map(|i| ThresholdSpec::FractionOfInDegree(i as f64 * 5.0 / 100.0))
                .collect(),
            ThresholdMode::Single(s) => vec![*s],
            ThresholdMode::List(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Decomp,
    Bruteforce,
    /// Optimum of the time-indexed 0/1 program on small instances.
    Ip,
    Greedy(Measure),
}

impl Algorithm {
    pub fn name(&self) -> String {
        match self {
            Algorithm::Decomp => "decomp".into(),
            Algorithm::Bruteforce => "bruteforce".into(),
            Algorithm::Ip => "ip".into(),
            Algorithm::Greedy(m) => format!("greedy-{m}"),
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decomp" => Ok(Algorithm::Decomp),
            "bruteforce" => Ok(Algorithm::Bruteforce),
            "ip" => Ok(Algorithm::Ip),
            other => match other.strip_prefix("greedy-") {
                Some(m) => Ok(Algorithm::Greedy(m.parse()?)),
                None => Err(Error::InvalidArgument(format!("unknown algorithm {other:?}"))),
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrialConfig {
    pub source: GraphSource,
    pub thresholds: ThresholdMode,
    pub algorithms: Vec<Algorithm>,
    pub removal_fractions: Vec<f64>,
    pub rng_seed: u64,
    pub bruteforce_limit: usize,
    pub ip_limit: usize,
    /// When set, the sweep writes one LP file per threshold setting here.
    pub ip_export_dir: Option<PathBuf>,
}

impl TrialConfig {
    pub fn new(source: GraphSource) -> Self {
        TrialConfig {
            source,
            thresholds: ThresholdMode::IntSweep,
            algorithms: vec![Algorithm::Decomp],
            removal_fractions: (0..=10).map(|i| i as f64 * 0.05).collect(),
            rng_seed: 0,
            bruteforce_limit: DEFAULT_BRUTEFORCE_LIMIT,
            ip_limit: DEFAULT_IP_LIMIT,
            ip_export_dir: None,
        }
    }

    pub fn with_thresholds(mut self, mode: ThresholdMode) -> Self {
        self.thresholds = mode;
        self
    }

    pub fn with_algorithms(mut self, algorithms: Vec<Algorithm>) -> Self {
        self.algorithms = algorithms;
        self
    }

    pub fn with_removal_fractions(mut self, fractions: Vec<f64>) -> Self {
        self.removal_fractions = fractions;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for spec in self.thresholds.specs() {
            spec.validate()?;
        }
        if let Some(p) = self
            .removal_fractions
            .iter()
            .find(|p| !(0.0..=MAX_REMOVAL_FRACTION).contains(*p))
        {
            return Err(Error::InvalidArgument(format!(
                "removal fraction {p} outside [0, {MAX_REMOVAL_FRACTION}]"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub network: String,
    pub n: usize,
    pub m: usize,
    pub mode: String,
    pub value: f64,
    pub algorithm: String,
    /// A count for seeding algorithms; the bound row carries a real value.
    pub seed_size: f64,
    pub seed_fraction: f64,
    pub runtime_ms: f64,
    pub steps: Option<usize>,
    pub critical_step: Option<usize>,
    pub critical_pct: Option<f64>,
    pub removal_fraction: Option<f64>,
}

impl TrialRecord {
    fn new(network: &str, g: &DirectedGraph, spec: ThresholdSpec, algorithm: String) -> Self {
        TrialRecord {
            network: network.to_owned(),
            n: g.node_count(),
            m: g.edge_count(),
            mode: spec.mode().to_owned(),
            value: spec.value(),
            algorithm,
            seed_size: 0.0,
            seed_fraction: 0.0,
            runtime_ms: 0.0,
            steps: None,
            critical_step: None,
            critical_pct: None,
            removal_fraction: None,
        }
    }

    /// Fills seed and cascade columns from a seed set and its trace.
    fn with_seed(mut self, g: &DirectedGraph, seed: &SeedSet, trace: &ActivationTrace, runtime_ms: f64) -> Self {
        let n = g.node_count();
        self.seed_size = seed.len() as f64;
        self.seed_fraction = if n == 0 { 0.0 } else { seed.len() as f64 / n as f64 };
        self.runtime_ms = runtime_ms;
        self.steps = Some(trace.len());
        let cm = critical_mass_step(&trace.cumulative);
        self.critical_step = Some(cm.step);
        self.critical_pct = Some(cm.percent);
        self
    }

    fn csv_row(&self) -> [String; 13] {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        [
            self.network.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.mode.clone(),
            self.value.to_string(),
            self.algorithm.clone(),
            self.seed_size.to_string(),
            self.seed_fraction.to_string(),
            format!("{:.3}", self.runtime_ms),
            opt(&self.steps),
            opt(&self.critical_step),
            opt(&self.critical_pct),
            opt(&self.removal_fraction),
        ]
    }
}

pub fn write_records_csv<W: Write>(records: &[TrialRecord], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records_json<W: Write>(records: &[TrialRecord], mut sink: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut sink, records)?;
    writeln!(sink)?;
    Ok(())
}

/// A trial that could not produce a record.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub mode: String,
    pub value: f64,
    pub algorithm: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
    pub records: Vec<TrialRecord>,
    pub failures: Vec<TrialFailure>,
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs the decomposition and re-checks coverage before producing a record.
pub fn decomp_record(network: &str, g: &DirectedGraph, spec: ThresholdSpec) -> Result<(TrialRecord, SeedSet)> {
    let ka = compute_thresholds(g, spec);
    let start = Instant::now();
    let result = tip_decomp(g, &ka);
    let runtime = elapsed_ms(start);
    if !covers(g, &ka, &result.seed) {
        return Err(Error::InvalidArgument(format!(
            "decomposition seed does not cover {network} at {} {}",
            spec.mode(),
            spec.value()
        )));
    }
    let (_, trace) = activate_fixpoint(g, &ka, &result.seed);
    let record = TrialRecord::new(network, g, spec, Algorithm::Decomp.name()).with_seed(g, &result.seed, &trace, runtime);
    Ok((record, result.seed))
}

fn run_algorithm(
    cfg: &TrialConfig,
    network: &str,
    g: &DirectedGraph,
    spec: ThresholdSpec,
    algorithm: Algorithm,
) -> Result<TrialRecord> {
    if algorithm == Algorithm::Decomp {
        return decomp_record(network, g, spec).map(|(r, _)| r);
    }
    let ka = compute_thresholds(g, spec);
    let start = Instant::now();
    let seed = match algorithm {
        Algorithm::Bruteforce => min_seed_bruteforce(g, &ka, cfg.bruteforce_limit)?,
        Algorithm::Ip => solve_seed_ip_small(g, spec, cfg.ip_limit)?.seed,
        Algorithm::Greedy(measure) => {
            let scores = baselines::compute(g, measure)?;
            greedy_centrality_seed(g, &ka, &scores)
        }
        Algorithm::Decomp => unreachable!(),
    };
    let runtime = elapsed_ms(start);
    let (_, trace) = activate_fixpoint(g, &ka, &seed);
    Ok(TrialRecord::new(network, g, spec, algorithm.name()).with_seed(g, &seed, &trace, runtime))
}

fn failure(spec: ThresholdSpec, algorithm: String, err: &Error) -> TrialFailure {
    TrialFailure {
        mode: spec.mode().to_owned(),
        value: spec.value(),
        algorithm,
        reason: err.to_string(),
    }
}

fn export_ip(dir: &std::path::Path, network: &str, g: &DirectedGraph, spec: ThresholdSpec) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{network}_{}_{}.lp", spec.mode(), spec.value()));
    let model = build_seed_ip(g, spec)?;
    model.export_lp(BufWriter::new(File::create(path)?))
}

/// Runs every configured algorithm at every threshold setting. A failing
/// trial is recorded in the report and the sweep continues.
pub fn run_threshold_sweep(cfg: &TrialConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let g = cfg.source.load()?;
    let network = cfg.source.name();
    let mut report = SweepReport::default();
    if g.node_count() == 0 {
        return Ok(report);
    }
    for spec in cfg.thresholds.specs() {
        if let Some(dir) = &cfg.ip_export_dir {
            if let Err(e) = export_ip(dir, &network, &g, spec) {
                report.failures.push(failure(spec, "ip-export".into(), &e));
            }
        }
        for &algorithm in &cfg.algorithms {
            match run_algorithm(cfg, &network, &g, spec, algorithm) {
                Ok(r) => report.records.push(r),
                Err(e) => report.failures.push(failure(spec, algorithm.name(), &e)),
            }
        }
    }
    Ok(report)
}

/// The `count` vertices of largest total degree, smaller id first on ties.
pub fn top_degree_nodes(g: &DirectedGraph, count: usize) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = g.nodes().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.in_degree(v) + g.out_degree(v)), v));
    order.truncate(count);
    order
}

/// For each removal fraction `p`, deletes the `floor(p n)` highest-degree
/// vertices and decomposes what is left.
pub fn run_degree_removal(cfg: &TrialConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let g = cfg.source.load()?;
    let network = cfg.source.name();
    let mut report = SweepReport::default();
    for &p in &cfg.removal_fractions {
        let count = (p * g.node_count() as f64 + 1e-9).floor() as usize;
        let survivors = g.remove_nodes(&top_degree_nodes(&g, count)).graph;
        for spec in cfg.thresholds.specs() {
            match decomp_record(&network, &survivors, spec) {
                Ok((mut r, _)) => {
                    r.removal_fraction = Some(p);
                    report.records.push(r);
                }
                Err(e) => report.failures.push(failure(spec, Algorithm::Decomp.name(), &e)),
            }
        }
    }
    Ok(report)
}

/// Cascade record for a given seed, with the full trace.
pub fn speed_run(network: &str, g: &DirectedGraph, spec: ThresholdSpec, seed: &SeedSet, algorithm: &str) -> SpeedRun {
    let ka = compute_thresholds(g, spec);
    let (_, trace) = activate_fixpoint(g, &ka, seed);
    let record = TrialRecord::new(network, g, spec, algorithm.to_owned()).with_seed(g, seed, &trace, 0.0);
    SpeedRun { record, trace }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpeedRun {
    pub record: TrialRecord,
    pub trace: ActivationTrace,
}

/// Simulates the cascade from the decomposition seed at each threshold.
pub fn run_activation_speed(cfg: &TrialConfig) -> Result<Vec<SpeedRun>> {
    cfg.validate()?;
    let g = cfg.source.load()?;
    let network = cfg.source.name();
    let mut runs = Vec::new();
    for spec in cfg.thresholds.specs() {
        let (decomp, seed) = decomp_record(&network, &g, spec)?;
        let mut run = speed_run(&network, &g, spec, &seed, "decomp");
        run.record.runtime_ms = decomp.runtime_ms;
        runs.push(run);
    }
    Ok(runs)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingConfig {
    pub ladder: Vec<SyntheticKind>,
    pub orientation: Orientation,
    pub spec: ThresholdSpec,
    /// Timed runs per graph; the fastest is kept.
    pub repetitions: usize,
    pub rng_seed: u64,
}

impl ScalingConfig {
    /// Uniform random graphs with mean degree `degree` whose directed edge
    /// counts run over `edge_targets`.
    pub fn uniform_ladder(edge_targets: &[usize], degree: f64, spec: ThresholdSpec) -> Self {
        let ladder = edge_targets
            .iter()
            .map(|&m| {
                let n = ((m as f64 / degree).round() as usize).max(2);
                SyntheticKind::UniformRandom { n, p: (degree / (n - 1) as f64).min(1.0) }
            })
            .collect();
        ScalingConfig { ladder, orientation: Orientation::Symmetric, spec, repetitions: 3, rng_seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingPoint {
    pub n: usize,
    pub m: usize,
    pub m_ln_n: f64,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    pub records: Vec<TrialRecord>,
    pub points: Vec<ScalingPoint>,
    /// Runtime regressed on `m ln n`.
    pub fit: Option<LinearFit>,
}

/// Times the decomposition over a ladder of synthetic graphs and regresses
/// runtime on `m ln n`. Needs at least three graphs to fit.
pub fn run_runtime_scaling(cfg: &ScalingConfig) -> Result<ScalingReport> {
    if cfg.ladder.is_empty() {
        return Ok(ScalingReport { records: vec![], points: vec![], fit: None });
    }
    if cfg.ladder.len() < 3 {
        return Err(Error::DegenerateFit(format!("{} graph sizes, need at least 3", cfg.ladder.len())));
    }
    let mut records = Vec::new();
    let mut points = Vec::new();
    for (i, &kind) in cfg.ladder.iter().enumerate() {
        let g = make_synthetic(kind, cfg.orientation, cfg.rng_seed.wrapping_add(i as u64))?;
        let ka = compute_thresholds(&g, cfg.spec);
        let mut best = f64::INFINITY;
        let mut seed = SeedSet::new();
        for _ in 0..cfg.repetitions.max(1) {
            let start = Instant::now();
            let result = tip_decomp(&g, &ka);
            best = best.min(elapsed_ms(start));
            seed = result.seed;
        }
        let (n, m) = (g.node_count(), g.edge_count());
        let mut r = TrialRecord::new(&format!("ladder-{i}"), &g, cfg.spec, Algorithm::Decomp.name());
        r.seed_size = seed.len() as f64;
        r.seed_fraction = if n == 0 { 0.0 } else { seed.len() as f64 / n as f64 };
        r.runtime_ms = best;
        records.push(r);
        points.push(ScalingPoint { n, m, m_ln_n: m as f64 * (n.max(1) as f64).ln(), runtime_ms: best });
    }
    let fit = linear_fit(&points.iter().map(|p| (p.m_ln_n, p.runtime_ms)).collect::<Vec<_>>())?;
    Ok(ScalingReport { records, points, fit: Some(fit) })
}

/// Decomposition against greedy centrality seeding, exact optima where
/// requested, and the degree bound for symmetric graphs with a homogeneous
/// integer threshold. An inapplicable bound is simply left out.
pub fn compare_baselines(cfg: &TrialConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let g = cfg.source.load()?;
    let network = cfg.source.name();
    let mut report = SweepReport::default();
    if g.node_count() == 0 {
        return Ok(report);
    }
    let symmetric = g.is_symmetric();
    let measures: Vec<Measure> = cfg
        .algorithms
        .iter()
        .filter_map(|a| match a {
            Algorithm::Greedy(m) => Some(*m),
            _ => None,
        })
        .collect();
    // scores do not depend on the threshold
    let mut scores = Vec::new();
    for m in &measures {
        let start = Instant::now();
        scores.push((*m, baselines::compute(&g, *m), elapsed_ms(start)));
    }

    for spec in cfg.thresholds.specs() {
        let ka = compute_thresholds(&g, spec);
        match decomp_record(&network, &g, spec) {
            Ok((r, _)) => report.records.push(r),
            Err(e) => report.failures.push(failure(spec, Algorithm::Decomp.name(), &e)),
        }
        for (measure, computed, score_ms) in &scores {
            let name = Algorithm::Greedy(*measure).name();
            match computed {
                Ok(s) => {
                    let start = Instant::now();
                    let seed = greedy_centrality_seed(&g, &ka, s);
                    let runtime = score_ms + elapsed_ms(start);
                    let (_, trace) = activate_fixpoint(&g, &ka, &seed);
                    report
                        .records
                        .push(TrialRecord::new(&network, &g, spec, name).with_seed(&g, &seed, &trace, runtime));
                }
                Err(e) => report.failures.push(failure(spec, name, e)),
            }
        }
        for &algorithm in cfg.algorithms.iter().filter(|a| matches!(a, Algorithm::Bruteforce | Algorithm::Ip)) {
            match run_algorithm(cfg, &network, &g, spec, algorithm) {
                Ok(r) => report.records.push(r),
                Err(e) => report.failures.push(failure(spec, algorithm.name(), &e)),
            }
        }
        if let (true, ThresholdSpec::AbsoluteCapped(k)) = (symmetric, spec) {
            let bound = reichman_bound(&g, k)?;
            let mut r = TrialRecord::new(&network, &g, spec, "reichman-bound".into());
            r.seed_size = bound;
            r.seed_fraction = bound / g.node_count() as f64;
            report.records.push(r);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn memory(name: &str, g: DirectedGraph) -> TrialConfig {
        TrialConfig::new(GraphSource::Memory { name: name.into(), graph: g })
    }

    fn sym(n: usize, edges: &[(usize, usize)]) -> DirectedGraph {
        DirectedGraph::from_edges(n, edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]))
    }

    fn cycle3() -> DirectedGraph {
        DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)])
    }

    fn k4() -> DirectedGraph {
        make_synthetic(SyntheticKind::Clique { n: 4 }, Orientation::Symmetric, 0).unwrap()
    }

    fn star4() -> DirectedGraph {
        sym(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])
    }

    #[test]
    fn sweep_ranges() {
        let ints = ThresholdMode::IntSweep.specs();
        assert_eq!(ints.len(), 10);
        assert_eq!(ints[9], ThresholdSpec::AbsoluteCapped(10));
        let fracs = ThresholdMode::FracSweep.specs();
        assert_eq!(fracs.len(), 12);
        assert_eq!(fracs[0], ThresholdSpec::FractionOfInDegree(0.05));
        assert_eq!(fracs[2], ThresholdSpec::FractionOfInDegree(0.15));
        assert_eq!(fracs[11], ThresholdSpec::FractionOfInDegree(0.6));
    }

    #[test]
    fn integer_sweep_on_cycle() {
        let report = run_threshold_sweep(&memory("cycle", cycle3())).unwrap();
        assert_eq!(report.records.len(), 10);
        assert!(report.records.iter().all(|r| r.seed_size == 1.0));
        assert!(report.failures.is_empty());
    }

    #[test]
    fn fractional_extremes_on_k4() {
        let cfg = memory("k4", k4())
            .with_thresholds(ThresholdMode::List(vec![
                ThresholdSpec::FractionOfInDegree(0.05),
                ThresholdSpec::FractionOfInDegree(1.0),
            ]))
            .with_algorithms(vec![Algorithm::Decomp, Algorithm::Bruteforce]);
        let r = run_threshold_sweep(&cfg).unwrap().records;
        let sizes: Vec<(String, f64)> = r.iter().map(|r| (r.algorithm.clone(), r.seed_size)).collect();
        assert_eq!(
            sizes,
            vec![
                ("decomp".into(), 1.0),
                ("bruteforce".into(), 1.0),
                ("decomp".into(), 3.0),
                ("bruteforce".into(), 3.0)
            ]
        );
    }

    #[test]
    fn empty_graph_sweep() {
        let report = run_threshold_sweep(&memory("empty", DirectedGraph::empty())).unwrap();
        assert!(report.records.is_empty() && report.failures.is_empty());
    }

    #[test]
    fn failing_trials_do_not_stop_the_sweep() {
        let g = make_synthetic(SyntheticKind::Cycle { n: 25 }, Orientation::Symmetric, 0).unwrap();
        let cfg = memory("big", g)
            .with_thresholds(ThresholdMode::List(vec![ThresholdSpec::AbsoluteCapped(1), ThresholdSpec::AbsoluteCapped(2)]))
            .with_algorithms(vec![Algorithm::Bruteforce, Algorithm::Decomp]);
        let report = run_threshold_sweep(&cfg).unwrap();
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.failures.len(), 2);
        assert!(report.failures[0].reason.contains("limit of 20"));
    }

    #[test]
    fn removal_fraction_bounds() {
        let cfg = memory("c", cycle3()).with_removal_fractions(vec![0.6]);
        assert!(run_degree_removal(&cfg).is_err());
    }

    #[test]
    fn removing_the_star_center() {
        let cfg = memory("star", star4())
            .with_thresholds(ThresholdMode::Single(ThresholdSpec::AbsoluteCapped(1)))
            .with_removal_fractions(vec![0.2]);
        let r = &run_degree_removal(&cfg).unwrap().records[0];
        assert_eq!((r.n, r.m), (4, 0));
        assert_eq!(r.seed_size, 0.0);
        assert_eq!(r.removal_fraction, Some(0.2));
        assert_eq!(r.steps, Some(2));
    }

    #[test]
    fn zero_removal_matches_plain_decomp() {
        let g = make_synthetic(SyntheticKind::UniformRandom { n: 60, p: 0.1 }, Orientation::Symmetric, 4).unwrap();
        let spec = ThresholdSpec::majority();
        let cfg = memory("g", g.clone())
            .with_thresholds(ThresholdMode::Single(spec))
            .with_removal_fractions(vec![0.0]);
        let removed = &run_degree_removal(&cfg).unwrap().records[0];
        let (plain, _) = decomp_record("g", &g, spec).unwrap();
        assert_eq!(removed.seed_size, plain.seed_size);
        assert_eq!(removed.n, plain.n);
    }

    #[test]
    fn removal_ranking_on_path() {
        let g = make_synthetic(SyntheticKind::Path { n: 4 }, Orientation::Symmetric, 0).unwrap();
        assert_eq!(top_degree_nodes(&g, 2), vec![NodeId(1), NodeId(2)]);
        let cfg = memory("p", g)
            .with_thresholds(ThresholdMode::Single(ThresholdSpec::AbsoluteCapped(1)))
            .with_removal_fractions(vec![0.5]);
        let r = &run_degree_removal(&cfg).unwrap().records[0];
        assert_eq!((r.n, r.m), (2, 0));
    }

    #[test]
    fn removing_everything_left_flags_empty() {
        let g = DirectedGraph::from_edges(1, []);
        let cfg = memory("one", g)
            .with_thresholds(ThresholdMode::Single(ThresholdSpec::AbsoluteCapped(1)))
            .with_removal_fractions(vec![0.5]);
        // floor(0.5 * 1) = 0 so nothing is removed
        assert_eq!(run_degree_removal(&cfg).unwrap().records[0].n, 1);
        let g = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]);
        let cfg = memory("two", g.clone())
            .with_thresholds(ThresholdMode::Single(ThresholdSpec::AbsoluteCapped(1)))
            .with_removal_fractions(vec![0.5]);
        let r = &run_degree_removal(&cfg).unwrap().records[0];
        assert_eq!(r.n, 1);
        let sub = g.remove_nodes(&[NodeId(0), NodeId(1)]).graph;
        let (empty, _) = decomp_record("two", &sub, ThresholdSpec::AbsoluteCapped(1)).unwrap();
        assert_eq!((empty.n, empty.seed_fraction), (0, 0.0));
    }

    #[test]
    fn speed_examples() {
        let spec = ThresholdSpec::AbsoluteCapped(1);
        let seed: SeedSet = [NodeId(1)].into_iter().collect();
        assert_eq!(speed_run("c", &cycle3(), spec, &seed, "given").record.steps, Some(3));
        let all = SeedSet::all(&cycle3());
        assert_eq!(speed_run("c", &cycle3(), spec, &all, "given").record.steps, Some(1));
        let center: SeedSet = [NodeId(0)].into_iter().collect();
        let run = speed_run("s", &star4(), spec, &center, "given");
        assert_eq!(run.record.steps, Some(2));
        assert_eq!(run.record.critical_step, Some(1));
        assert_eq!(run.record.critical_pct, Some(400.0));
    }

    #[test]
    fn activation_speed_uses_decomp_seed() {
        let cfg = memory("c", cycle3()).with_thresholds(ThresholdMode::List(vec![
            ThresholdSpec::AbsoluteCapped(2),
            ThresholdSpec::majority(),
        ]));
        let runs = run_activation_speed(&cfg).unwrap();
        assert_eq!(runs.len(), 2);
        for run in runs {
            assert_eq!(run.trace.final_count(), 3);
            assert_eq!(run.record.seed_size, 1.0);
        }
    }

    #[test]
    fn scaling_guards() {
        let spec = ThresholdSpec::AbsoluteCapped(2);
        let empty = ScalingConfig::uniform_ladder(&[], 10.0, spec);
        let report = run_runtime_scaling(&empty).unwrap();
        assert!(report.records.is_empty() && report.fit.is_none());
        let single = ScalingConfig::uniform_ladder(&[1000], 10.0, spec);
        assert!(matches!(run_runtime_scaling(&single), Err(Error::DegenerateFit(_))));
        let small = ScalingConfig::uniform_ladder(&[1000, 2000, 4000], 10.0, spec);
        let report = run_runtime_scaling(&small).unwrap();
        assert_eq!(report.points.len(), 3);
        assert!(report.fit.is_some());
    }

    #[test]
    fn baselines_on_star() {
        let cfg = memory("star", star4())
            .with_thresholds(ThresholdMode::Single(ThresholdSpec::AbsoluteCapped(1)))
            .with_algorithms(vec![Algorithm::Greedy(Measure::Degree)]);
        let r = compare_baselines(&cfg).unwrap().records;
        let by: Vec<(&str, f64)> = r.iter().map(|r| (r.algorithm.as_str(), r.seed_size)).collect();
        assert_eq!(by[0], ("decomp", 1.0));
        assert_eq!(by[1], ("greedy-degree", 1.0));
        assert_eq!(by[2].0, "reichman-bound");
        assert!((by[2].1 - 2.2).abs() < 1e-12);
    }

    #[test]
    fn baselines_on_cycle_and_k4() {
        let tri = sym(3, &[(0, 1), (1, 2), (2, 0)]);
        let cfg = memory("tri", tri).with_thresholds(ThresholdMode::Single(ThresholdSpec::AbsoluteCapped(1)));
        let r = compare_baselines(&cfg).unwrap().records;
        assert_eq!(r[0].seed_size, 1.0);
        assert!((r[1].seed_size - 1.0).abs() < 1e-12);

        let cfg = memory("k4", k4())
            .with_thresholds(ThresholdMode::Single(ThresholdSpec::AbsoluteCapped(2)))
            .with_algorithms(vec![Algorithm::Bruteforce]);
        let r = compare_baselines(&cfg).unwrap().records;
        let brute = r.iter().find(|r| r.algorithm == "bruteforce").unwrap();
        let bound = r.iter().find(|r| r.algorithm == "reichman-bound").unwrap();
        assert_eq!((brute.seed_size, bound.seed_size), (2.0, 2.0));
    }

    #[test]
    fn bound_skipped_when_not_applicable() {
        let cfg = memory("c", cycle3())
            .with_thresholds(ThresholdMode::Single(ThresholdSpec::AbsoluteCapped(1)))
            .with_algorithms(vec![Algorithm::Greedy(Measure::Pagerank)]);
        let report = compare_baselines(&cfg).unwrap();
        assert!(report.records.iter().all(|r| r.algorithm != "reichman-bound"));
        assert_eq!(report.records.len(), 2);
    }

    #[test]
    fn csv_layout() {
        let report = run_threshold_sweep(
            &memory("cycle", cycle3()).with_thresholds(ThresholdMode::Single(ThresholdSpec::AbsoluteCapped(1))),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_records_csv(&report.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(&row[..8], &["cycle", "3", "3", "int", "1", "decomp", "1", "0.3333333333333333"]);
        assert_eq!(&row[9..], &["3", "1", "100", ""]);
    }

    #[test]
    fn sweep_output_is_deterministic() {
        let g = make_synthetic(SyntheticKind::PreferentialAttachment { n: 150, edges_per_node: 2 }, Orientation::Symmetric, 8)
            .unwrap();
        let cfg = memory("pa", g)
            .with_thresholds(ThresholdMode::FracSweep)
            .with_algorithms(vec![Algorithm::Decomp, Algorithm::Greedy(Measure::Shell)]);
        let strip = |records: Vec<TrialRecord>| -> String {
            let mut buf = Vec::new();
            let cleared: Vec<_> = records.into_iter().map(|r| TrialRecord { runtime_ms: 0.0, ..r }).collect();
            write_records_csv(&cleared, &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        let a = strip(run_threshold_sweep(&cfg).unwrap().records);
        let b = strip(run_threshold_sweep(&cfg).unwrap().records);
        assert_eq!(a, b);
    }

    #[test]
    fn algorithm_names() {
        for name in ["decomp", "bruteforce", "ip", "greedy-pagerank"] {
            assert_eq!(name.parse::<Algorithm>().unwrap().name(), name);
        }
        assert!("greedy-katz".parse::<Algorithm>().is_err());
        assert!("lp".parse::<Algorithm>().is_err());
    }

    #[test]
    fn ip_files_written_per_setting() {
        let dir = std::env::temp_dir().join(format!("tipseed-ip-{}", std::process::id()));
        let mut cfg = memory("k4", k4()).with_thresholds(ThresholdMode::List(vec![
            ThresholdSpec::AbsoluteCapped(1),
            ThresholdSpec::AbsoluteCapped(2),
        ]));
        cfg.ip_export_dir = Some(dir.clone());
        run_threshold_sweep(&cfg).unwrap();
        let text = std::fs::read_to_string(dir.join("k4_int_2.lp")).unwrap();
        assert!(text.starts_with("\\ minimum seed program, 4 nodes"));
        assert!(dir.join("k4_int_1.lp").exists());
        std::fs::remove_dir_all(dir).unwrap();
    }
}
