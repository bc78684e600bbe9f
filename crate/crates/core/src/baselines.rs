//! Centrality baselines and the degree-based upper bound on the minimum seed.

use std::collections::VecDeque;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::tipping::{Cascade, SeedSet, ThresholdAssignment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Degree,
    Betweenness,
    Closeness,
    Shell,
    Eigenvector,
    Pagerank,
}

impl Measure {
    pub const ALL: [Measure; 6] = [
        Measure::Degree,
        Measure::Betweenness,
        Measure::Closeness,
        Measure::Shell,
        Measure::Eigenvector,
        Measure::Pagerank,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Betweenness => "betweenness",
            Measure::Closeness => "closeness",
            Measure::Shell => "shell",
            Measure::Eigenvector => "eigenvector",
            Measure::Pagerank => "pagerank",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown centrality measure {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CentralityScores {
    pub measure: Measure,
    pub scores: Vec<f64>,
}

impl CentralityScores {
    pub fn get(&self, v: NodeId) -> f64 {
        self.scores[v.index()]
    }

    /// Vertices by descending score, smaller id first on ties.
    pub fn ranking(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.scores.len()).map(NodeId::from).collect();
        order.sort_by(|&a, &b| self.get(b).total_cmp(&self.get(a)).then(a.cmp(&b)));
        order
    }

    /// Writes `node,measure,score` rows, using labels when the graph has them.
    pub fn write_csv<W: Write>(&self, g: &DirectedGraph, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["node", "measure", "score"])?;
        for v in g.nodes() {
            w.write_record([g.label(v), self.measure.to_string(), self.get(v).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn compute(g: &DirectedGraph, measure: Measure) -> Result<CentralityScores> {
    match measure {
        Measure::Degree => Ok(degree_centrality(g)),
        Measure::Betweenness => Ok(betweenness(g)),
        Measure::Closeness => Ok(closeness(g)),
        Measure::Shell => Ok(shell_number(g)),
        Measure::Eigenvector => eigenvector_centrality(g, 1e-10, 10_000),
        Measure::Pagerank => pagerank(g, PageRankConfig::default()),
    }
}

/// Out-degree.
pub fn degree_centrality(g: &DirectedGraph) -> CentralityScores {
    CentralityScores {
        measure: Measure::Degree,
        scores: g.nodes().map(|v| g.out_degree(v) as f64).collect(),
    }
}

/// Brandes' accumulation over ordered pairs, O(nm) for unweighted graphs.
pub fn betweenness(g: &DirectedGraph) -> CentralityScores {
    let n = g.node_count();
    let mut scores = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    for s in g.nodes() {
        for i in 0..n {
            sigma[i] = 0.0;
            dist[i] = -1;
            delta[i] = 0.0;
            preds[i].clear();
        }
        order.clear();
        sigma[s.index()] = 1.0;
        dist[s.index()] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.out_neighbors(v) {
                if dist[w.index()] < 0 {
                    dist[w.index()] = dist[v.index()] + 1;
                    queue.push_back(w);
                }
                if dist[w.index()] == dist[v.index()] + 1 {
                    sigma[w.index()] += sigma[v.index()];
                    preds[w.index()].push(v);
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in &preds[w.index()] {
                delta[v.index()] += sigma[v.index()] / sigma[w.index()] * (1.0 + delta[w.index()]);
            }
            if w != s {
                scores[w.index()] += delta[w.index()];
            }
        }
    }
    CentralityScores { measure: Measure::Betweenness, scores }
}

/// Reachable count over total distance to the reachable vertices; 0 for a
/// vertex that reaches nobody.
pub fn closeness(g: &DirectedGraph) -> CentralityScores {
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut touched = Vec::new();
    let scores = g
        .nodes()
        .map(|s| {
            for &i in &touched {
                dist[i] = usize::MAX;
            }
            touched.clear();
            dist[s.index()] = 0;
            touched.push(s.index());
            queue.push_back(s);
            let (mut reached, mut total) = (0usize, 0usize);
            while let Some(v) = queue.pop_front() {
                for &w in g.out_neighbors(v) {
                    if dist[w.index()] == usize::MAX {
                        dist[w.index()] = dist[v.index()] + 1;
                        touched.push(w.index());
                        reached += 1;
                        total += dist[w.index()];
                        queue.push_back(w);
                    }
                }
            }
            if total == 0 {
                0.0
            } else {
                reached as f64 / total as f64
            }
        })
        .collect();
    CentralityScores { measure: Measure::Closeness, scores }
}

/// Core numbers of the underlying undirected graph (bucket peeling).
pub fn shell_number(g: &DirectedGraph) -> CentralityScores {
    let n = g.node_count();
    let neighbors: Vec<Vec<NodeId>> = g.nodes().map(|v| g.undirected_neighbors(v)).collect();
    let mut degree: Vec<usize> = neighbors.iter().map(Vec::len).collect();
    let max_deg = degree.iter().copied().max().unwrap_or(0);

    // vertices sorted by degree, with bucket starts
    let mut bin = vec![0usize; max_deg + 2];
    for &d in &degree {
        bin[d + 1] += 1;
    }
    for d in 0..=max_deg {
        bin[d + 1] += bin[d];
    }
    let mut start = bin.clone();
    let mut order = vec![0usize; n];
    let mut pos = vec![0usize; n];
    for v in 0..n {
        let d = degree[v];
        pos[v] = start[d];
        order[pos[v]] = v;
        start[d] += 1;
    }

    for i in 0..n {
        let v = order[i];
        for &w in &neighbors[v] {
            let w = w.index();
            if degree[w] > degree[v] {
                // move w to the front of its bucket, then shrink the bucket
                let dw = degree[w];
                let front = bin[dw];
                let u = order[front];
                if u != w {
                    order.swap(front, pos[w]);
                    pos[u] = pos[w];
                    pos[w] = front;
                }
                bin[dw] += 1;
                degree[w] -= 1;
            }
        }
    }
    CentralityScores {
        measure: Measure::Shell,
        scores: degree.into_iter().map(|d| d as f64).collect(),
    }
}

/// Power iteration on `I + A` (summing over in-neighbors), scaled to unit
/// maximum. The identity shift has the same eigenvectors as `A` and keeps
/// bipartite graphs from oscillating.
pub fn eigenvector_centrality(g: &DirectedGraph, tol: f64, max_iter: usize) -> Result<CentralityScores> {
    if g.edge_count() == 0 {
        return Err(Error::Undefined("eigenvector centrality of an edgeless graph"));
    }
    let n = g.node_count();
    let mut x = vec![1.0f64; n];
    let mut next = vec![0.0f64; n];
    for _ in 0..max_iter {
        for v in g.nodes() {
            next[v.index()] = x[v.index()] + g.in_neighbors(v).iter().map(|u| x[u.index()]).sum::<f64>();
        }
        let top = next.iter().copied().fold(0.0, f64::max);
        for value in next.iter_mut() {
            *value /= top;
        }
        let diff = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if diff < tol {
            return Ok(CentralityScores { measure: Measure::Eigenvector, scores: x });
        }
    }
    Err(Error::NoConvergence { measure: "eigenvector centrality", iterations: max_iter })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    /// L1 change between iterates that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig { damping: 0.85, tol: 1e-10, max_iter: 1_000 }
    }
}

/// Power iteration with uniform teleport; mass from vertices without
/// out-edges is spread uniformly.
pub fn pagerank(g: &DirectedGraph, cfg: PageRankConfig) -> Result<CentralityScores> {
    if !(0.0..1.0).contains(&cfg.damping) {
        return Err(Error::InvalidArgument(format!("damping {} outside [0, 1)", cfg.damping)));
    }
    let n = g.node_count();
    if n == 0 {
        return Ok(CentralityScores { measure: Measure::Pagerank, scores: vec![] });
    }
    let uniform = 1.0 / n as f64;
    let mut x = vec![uniform; n];
    let mut next = vec![0.0f64; n];
    for _ in 0..cfg.max_iter {
        let dangling: f64 = g.nodes().filter(|&v| g.out_degree(v) == 0).map(|v| x[v.index()]).sum();
        let base = (1.0 - cfg.damping) * uniform + cfg.damping * dangling * uniform;
        for v in g.nodes() {
            let inflow: f64 = g
                .in_neighbors(v)
                .iter()
                .map(|&u| x[u.index()] / g.out_degree(u) as f64)
                .sum();
            next[v.index()] = base + cfg.damping * inflow;
        }
        let total: f64 = next.iter().sum();
        for value in next.iter_mut() {
            *value /= total;
        }
        let diff: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut next);
        if diff < cfg.tol {
            return Ok(CentralityScores { measure: Measure::Pagerank, scores: x });
        }
    }
    Err(Error::NoConvergence { measure: "pagerank", iterations: cfg.max_iter })
}

/// Adds vertices in ranking order until the cascade covers the graph and
/// returns that prefix of the ranking. The ranking is fixed up front.
pub fn greedy_centrality_seed(g: &DirectedGraph, ka: &ThresholdAssignment, scores: &CentralityScores) -> SeedSet {
    assert_eq!(scores.scores.len(), g.node_count(), "scores do not cover the graph");
    let mut cascade = Cascade::new(g, ka);
    let mut seed = SeedSet::new();
    for v in scores.ranking() {
        if cascade.is_complete() {
            break;
        }
        seed.insert(v);
        cascade.activate(v);
    }
    seed
}

/// `sum_i min(1, k / (d_i + 1))` for an undirected graph with a homogeneous
/// threshold `k`.
pub fn reichman_bound(g: &DirectedGraph, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("threshold must be at least 1".into()));
    }
    if !g.is_symmetric() {
        return Err(Error::NotApplicable("the bound holds for undirected graphs only".into()));
    }
    Ok(g.nodes()
        .map(|v| (k as f64 / (g.out_degree(v) + 1) as f64).min(1.0))
        .sum())
}
