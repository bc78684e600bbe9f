//! Shell-style decomposition for covering seed sets.
//!
//! Every vertex starts with slack `dist_i = d_in(i) - k_i`. The vertex with the
//! smallest finite slack is removed repeatedly; each removal costs its
//! surviving out-neighbors one unit of slack, and a neighbor already at zero
//! becomes frozen instead. When no finite slack remains, the frozen vertices
//! are the seed. Each removed vertex keeps at least `k` in-neighbors among the
//! vertices still present at its removal, so activating the seed activates
//! every removed vertex in reverse removal order.

mod queue;

pub use queue::{AddressableMinQueue, QueueStats};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::tipping::{SeedSet, ThresholdAssignment};

/// Per-vertex slack during the decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dist {
    Finite(u32),
    Frozen,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompResult {
    pub seed: SeedSet,
    /// Removed vertices, first removed first.
    pub removal_order: Vec<NodeId>,
    /// Slack of each vertex when it left the queue (removed or frozen).
    pub final_dist: Vec<Dist>,
    #[serde(skip)]
    pub stats: QueueStats,
}

pub fn tip_decomp(g: &DirectedGraph, ka: &ThresholdAssignment) -> DecompResult {
    let n = g.node_count();
    assert_eq!(ka.len(), n, "thresholds were computed for a different graph");

    let mut dist: Vec<Dist> = g
        .nodes()
        .map(|v| Dist::Finite(g.in_degree(v) as u32 - ka.get(v)))
        .collect();
    let mut queue = AddressableMinQueue::with_capacity(n);
    for v in g.nodes() {
        if let Dist::Finite(d) = dist[v.index()] {
            queue.insert(v, d);
        }
    }

    let mut removed = vec![false; n];
    let mut removal_order = Vec::with_capacity(n);
    while let Some((v, _)) = queue.pop_min() {
        removed[v.index()] = true;
        removal_order.push(v);
        for &w in g.out_neighbors(v) {
            if removed[w.index()] {
                continue;
            }
            match dist[w.index()] {
                Dist::Finite(0) => {
                    dist[w.index()] = Dist::Frozen;
                    queue.remove(w);
                }
                Dist::Finite(d) => {
                    dist[w.index()] = Dist::Finite(d - 1);
                    queue.decrease_key(w, d - 1);
                }
                Dist::Frozen => {}
            }
        }
    }

    let seed = g.nodes().filter(|v| !removed[v.index()]).collect();
    DecompResult {
        seed,
        removal_order,
        final_dist: dist,
        stats: queue.stats(),
    }
}

/// Checks the inductive certificate behind the decomposition: every removed
/// vertex `v` has at least `k_v` in-neighbors among the seed and the vertices
/// removed after `v`.
pub fn verify_decomposition(
    g: &DirectedGraph,
    ka: &ThresholdAssignment,
    result: &DecompResult,
) -> Result<bool> {
    let n = g.node_count();
    if ka.len() != n {
        return Err(Error::InvalidArgument("thresholds do not match the graph".into()));
    }
    // position in removal order; seed vertices rank after every removal
    let mut rank = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    for (pos, &v) in result.removal_order.iter().enumerate() {
        if !g.contains(v) {
            return Err(Error::InvalidArgument(format!("unknown node {v} in removal order")));
        }
        if std::mem::replace(&mut seen[v.index()], true) {
            return Ok(false);
        }
        rank[v.index()] = pos;
    }
    for v in result.seed.iter() {
        if !g.contains(v) {
            return Err(Error::InvalidArgument(format!("unknown node {v} in seed")));
        }
        if std::mem::replace(&mut seen[v.index()], true) {
            return Ok(false);
        }
    }
    if seen.iter().any(|&s| !s) {
        return Ok(false);
    }
    let ok = result.removal_order.iter().enumerate().all(|(pos, &v)| {
        let later = g.in_neighbors(v).iter().filter(|u| rank[u.index()] > pos).count();
        later >= ka.get(v) as usize
    });
    Ok(ok)
}
