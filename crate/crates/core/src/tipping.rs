//! Deterministic tipping semantics.
//!
//! A vertex `v` with threshold count `k_v` becomes active once at least `k_v`
//! of its in-neighbors are active. Activation is monotone and never undone.
//! One synchronous round of this rule is [`activate_step`]; iterating it to a
//! fixpoint is [`activate_fixpoint`].

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

/// Slack used when rounding `f * d_in` up, so that `0.15 * 20` counts as 3.
const CEIL_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ThresholdSpec {
    /// `k_i = ceil(f * d_in(i))`, with `0 < f <= 1`.
    FractionOfInDegree(f64),
    /// `k_i = min(d_in(i), k)`, with `k >= 1`.
    AbsoluteCapped(u32),
}

impl ThresholdSpec {
    pub fn fraction(f: f64) -> Result<Self> {
        let spec = ThresholdSpec::FractionOfInDegree(f);
        spec.validate()?;
        Ok(spec)
    }

    pub fn capped(k: u32) -> Result<Self> {
        let spec = ThresholdSpec::AbsoluteCapped(k);
        spec.validate()?;
        Ok(spec)
    }

    /// The usual majority rule: half of the in-neighbors, rounded up.
    pub fn majority() -> Self {
        ThresholdSpec::FractionOfInDegree(0.5)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ThresholdSpec::FractionOfInDegree(f) if !(f > 0.0 && f <= 1.0) => Err(
                Error::InvalidArgument(format!("threshold fraction {f} outside (0, 1]")),
            ),
            ThresholdSpec::AbsoluteCapped(0) => {
                Err(Error::InvalidArgument("threshold count must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Required active in-neighbors for a vertex of the given in-degree.
    pub fn count_for(&self, in_degree: usize) -> u32 {
        match *self {
            ThresholdSpec::FractionOfInDegree(f) => {
                let raw = (f * in_degree as f64 - CEIL_EPS).ceil().max(0.0) as u32;
                raw.min(in_degree as u32)
            }
            ThresholdSpec::AbsoluteCapped(k) => k.min(in_degree as u32),
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            ThresholdSpec::FractionOfInDegree(_) => "frac",
            ThresholdSpec::AbsoluteCapped(_) => "int",
        }
    }

    pub fn value(&self) -> f64 {
        match *self {
            ThresholdSpec::FractionOfInDegree(f) => f,
            ThresholdSpec::AbsoluteCapped(k) => k as f64,
        }
    }
}

/// Realized per-vertex threshold counts, `0 <= k_i <= d_in(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdAssignment {
    k: Vec<u32>,
}

impl ThresholdAssignment {
    /// Explicit counts; each must lie in `0..=d_in`.
    pub fn from_counts(g: &DirectedGraph, k: Vec<u32>) -> Result<Self> {
        if k.len() != g.node_count() {
            return Err(Error::InvalidArgument(format!(
                "{} thresholds for {} nodes",
                k.len(),
                g.node_count()
            )));
        }
        if let Some(v) = g.nodes().find(|&v| k[v.index()] as usize > g.in_degree(v)) {
            return Err(Error::InvalidArgument(format!(
                "threshold {} of node {v} exceeds its in-degree {}",
                k[v.index()],
                g.in_degree(v)
            )));
        }
        Ok(ThresholdAssignment { k })
    }

    #[inline]
    pub fn get(&self, v: NodeId) -> u32 {
        self.k[v.index()]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.k
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }
}

pub fn compute_thresholds(g: &DirectedGraph, spec: ThresholdSpec) -> ThresholdAssignment {
    let k = g.nodes().map(|v| spec.count_for(g.in_degree(v))).collect();
    ThresholdAssignment { k }
}

/// A set of vertices, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SeedSet {
    members: Vec<NodeId>,
}

impl SeedSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn all(g: &DirectedGraph) -> Self {
        SeedSet { members: g.nodes().collect() }
    }

    fn from_mask(mask: &[bool]) -> Self {
        let members = mask
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(i, _)| NodeId::from(i))
            .collect();
        SeedSet { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        match self.members.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.members.insert(pos, v);
                true
            }
        }
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeId] {
        &self.members
    }

    pub fn is_subset(&self, other: &SeedSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v.index()] = true;
        }
        mask
    }
}

impl FromIterator<NodeId> for SeedSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        let mut members: Vec<NodeId> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        SeedSet { members }
    }
}

fn assert_within(g: &DirectedGraph, set: &SeedSet) {
    if let Some(&last) = set.members.last() {
        assert!(g.contains(last), "node {last} is not in the graph");
    }
}

/// One synchronous round: `active ∪ { v : |in(v) ∩ active| >= k_v }`.
pub fn activate_step(g: &DirectedGraph, ka: &ThresholdAssignment, active: &SeedSet) -> SeedSet {
    assert_within(g, active);
    let mask = active.to_mask(g.node_count());
    let next: Vec<bool> = g
        .nodes()
        .map(|v| {
            mask[v.index()]
                || g.in_neighbors(v).iter().filter(|u| mask[u.index()]).count() >= ka.get(v) as usize
        })
        .collect();
    SeedSet::from_mask(&next)
}

/// Time-stepped record of a cascade. `steps[0]` is the seed and `steps[t]`
/// the vertices that first become active in round `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivationTrace {
    pub steps: Vec<Vec<NodeId>>,
    pub cumulative: Vec<usize>,
}

impl ActivationTrace {
    /// Number of recorded entries, including the seed entry.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_count(&self) -> usize {
        self.cumulative.last().copied().unwrap_or(0)
    }

    /// Writes `step,newly_active,cumulative` rows.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["step", "newly_active", "cumulative"])?;
        for (t, (new, total)) in self.steps.iter().zip(&self.cumulative).enumerate() {
            w.write_record([t.to_string(), new.len().to_string(), total.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Iterates [`activate_step`] from `seed` until a round adds nothing.
///
/// Runs in O(n + m) by tracking active in-neighbor counts instead of
/// re-evaluating every vertex each round.
pub fn activate_fixpoint(
    g: &DirectedGraph,
    ka: &ThresholdAssignment,
    seed: &SeedSet,
) -> (SeedSet, ActivationTrace) {
    assert_within(g, seed);
    let n = g.node_count();
    let mut active = seed.to_mask(n);
    let mut hits = vec![0u32; n];
    let mut queued = vec![false; n];

    let mut steps = vec![seed.as_slice().to_vec()];
    let mut cumulative = vec![seed.len()];

    // vertices already meeting their threshold against the seed
    let mut next: Vec<NodeId> = Vec::new();
    for v in g.nodes() {
        if !active[v.index()] && ka.get(v) == 0 {
            queued[v.index()] = true;
            next.push(v);
        }
    }
    for u in seed.iter() {
        for &v in g.out_neighbors(u) {
            hits[v.index()] += 1;
            if !active[v.index()] && !queued[v.index()] && hits[v.index()] >= ka.get(v) {
                queued[v.index()] = true;
                next.push(v);
            }
        }
    }

    while !next.is_empty() {
        next.sort_unstable();
        for &v in &next {
            active[v.index()] = true;
        }
        let mut following = Vec::new();
        for &u in &next {
            for &v in g.out_neighbors(u) {
                hits[v.index()] += 1;
                if !active[v.index()] && !queued[v.index()] && hits[v.index()] >= ka.get(v) {
                    queued[v.index()] = true;
                    following.push(v);
                }
            }
        }
        let total = cumulative.last().unwrap() + next.len();
        cumulative.push(total);
        steps.push(std::mem::replace(&mut next, following));
    }

    (SeedSet::from_mask(&active), ActivationTrace { steps, cumulative })
}

/// True iff the cascade from `seed` activates every vertex.
pub fn covers(g: &DirectedGraph, ka: &ThresholdAssignment, seed: &SeedSet) -> bool {
    let mut cascade = Cascade::new(g, ka);
    for v in seed.iter() {
        cascade.activate(v);
    }
    cascade.is_complete()
}

/// Incrementally maintained closure `Γ(S)` as vertices are added to `S`.
///
/// Uses `Γ(S ∪ {v}) = Γ(Γ(S) ∪ {v})`, so a sequence of additions costs
/// O(n + m) in total.
pub struct Cascade<'g> {
    g: &'g DirectedGraph,
    k: &'g [u32],
    hits: Vec<u32>,
    active: Vec<bool>,
    active_count: usize,
    stack: Vec<NodeId>,
}

impl<'g> Cascade<'g> {
    /// Starts from `Γ(∅)`, i.e. with every zero-threshold vertex active.
    pub fn new(g: &'g DirectedGraph, ka: &'g ThresholdAssignment) -> Self {
        let n = g.node_count();
        let mut c = Cascade {
            g,
            k: ka.as_slice(),
            hits: vec![0; n],
            active: vec![false; n],
            active_count: 0,
            stack: Vec::new(),
        };
        for v in g.nodes() {
            if c.k[v.index()] == 0 {
                c.activate(v);
            }
        }
        c
    }

    pub fn activate(&mut self, v: NodeId) {
        if self.active[v.index()] {
            return;
        }
        self.active[v.index()] = true;
        self.active_count += 1;
        self.stack.push(v);
        while let Some(u) = self.stack.pop() {
            for &w in self.g.out_neighbors(u) {
                let i = w.index();
                self.hits[i] += 1;
                if !self.active[i] && self.hits[i] >= self.k[i] {
                    self.active[i] = true;
                    self.active_count += 1;
                    self.stack.push(w);
                }
            }
        }
    }

    pub fn is_active(&self, v: NodeId) -> bool {
        self.active[v.index()]
    }

    pub fn active_count(&self) -> usize {
        self.active_count
    }

    pub fn is_complete(&self) -> bool {
        self.active_count == self.g.node_count()
    }
}

/// The round with the largest relative growth of the active population.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalMass {
    pub step: usize,
    /// `100 * (cumulative[t] - cumulative[t-1]) / cumulative[t-1]`.
    pub percent: f64,
}

/// Earliest round `t >= 1` maximizing growth relative to `cumulative[t-1]`.
/// Rounds that start from an empty population have no defined relative
/// growth and are skipped. Without any growth the answer is step 0, 0%.
pub fn critical_mass_step(cumulative: &[usize]) -> CriticalMass {
    let mut best = CriticalMass { step: 0, percent: 0.0 };
    for t in 1..cumulative.len() {
        let prev = cumulative[t - 1];
        if prev == 0 || cumulative[t] <= prev {
            continue;
        }
        let pct = 100.0 * (cumulative[t] - prev) as f64 / prev as f64;
        if pct > best.percent {
            best = CriticalMass { step: t, percent: pct };
        }
    }
    best
}
