//! Dense-indexed directed graphs.
//!
//! A [`DirectedGraph`] is immutable once built. Adjacency is stored twice, in
//! compressed sparse row form, once by source (out-neighbors) and once by
//! target (in-neighbors); both lists are sorted ascending.

mod generate;
mod load;

pub use generate::{make_synthetic, Orientation, SyntheticKind};
pub use load::{load_edge_list, load_edge_list_file};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense vertex index, `0 <= index < n` for the graph it belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    #[inline]
    fn from(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("node index exceeds u32 range"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    labels: Option<Vec<String>>,
}

impl DirectedGraph {
    pub fn empty() -> Self {
        Self::from_edges(0, std::iter::empty())
    }

    /// Builds a graph on `n` vertices. Self-loops are dropped and duplicate
    /// edges collapse to one.
    ///
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs: Vec<(u32, u32)> = edges
            .into_iter()
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| {
                assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
                (u as u32, v as u32)
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        Self::from_sorted_pairs(n, &pairs)
    }

    fn from_sorted_pairs(n: usize, pairs: &[(u32, u32)]) -> Self {
        let m = pairs.len();
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(u, v) in pairs {
            out_offsets[u as usize + 1] += 1;
            in_offsets[v as usize + 1] += 1;
        }
        for i in 0..n {
            out_offsets[i + 1] += out_offsets[i];
            in_offsets[i + 1] += in_offsets[i];
        }
        let out_targets = pairs.iter().map(|&(_, v)| NodeId(v)).collect();

        // pairs are sorted by source, so filling by target keeps in-lists sorted
        let mut in_sources = vec![NodeId(0); m];
        let mut cursor = in_offsets.clone();
        for &(u, v) in pairs {
            in_sources[cursor[v as usize]] = NodeId(u);
            cursor[v as usize] += 1;
        }

        DirectedGraph {
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.node_count());
        self.labels = Some(labels);
        self
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.out_offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + Clone {
        (0..self.node_count() as u32).map(NodeId)
    }

    /// All edges `(source, target)`, ordered by source then target.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes()
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        let i = v.index();
        &self.out_targets[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        let i = v.index();
        &self.in_sources[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        let i = v.index();
        self.out_offsets[i + 1] - self.out_offsets[i]
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        let i = v.index();
        self.in_offsets[i + 1] - self.in_offsets[i]
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.out_neighbors(u).binary_search(&v).is_ok()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.node_count()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Original label of `v`, or its index when the graph is unlabeled.
    pub fn label(&self, v: NodeId) -> String {
        match &self.labels {
            Some(l) => l[v.index()].clone(),
            None => v.to_string(),
        }
    }

    /// True when every edge has its reverse.
    pub fn is_symmetric(&self) -> bool {
        self.edges().all(|(u, v)| self.has_edge(v, u))
    }

    /// Union of in- and out-neighbors, sorted and deduplicated.
    pub fn undirected_neighbors(&self, v: NodeId) -> Vec<NodeId> {
        let (a, b) = (self.out_neighbors(v), self.in_neighbors(v));
        let mut merged = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    merged.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    merged.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    merged.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&a[i..]);
        merged.extend_from_slice(&b[j..]);
        merged
    }

    /// The graph with every edge made reciprocal.
    pub fn symmetrized(&self) -> DirectedGraph {
        let edges = self
            .edges()
            .flat_map(|(u, v)| [(u.index(), v.index()), (v.index(), u.index())]);
        let g = DirectedGraph::from_edges(self.node_count(), edges);
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => g,
        }
    }

    /// Full scan of the in/out duality and degree accounting invariants.
    pub fn check_consistency(&self) -> bool {
        let n = self.node_count();
        let m = self.edge_count();
        if self.in_sources.len() != m || self.in_offsets[n] != m || self.out_offsets[n] != m {
            return false;
        }
        for v in self.nodes() {
            let outs = self.out_neighbors(v);
            let ins = self.in_neighbors(v);
            let strictly_sorted = |s: &[NodeId]| s.windows(2).all(|w| w[0] < w[1]);
            if !strictly_sorted(outs) || !strictly_sorted(ins) {
                return false;
            }
            if outs.contains(&v) {
                return false;
            }
            if outs.iter().any(|&w| !self.contains(w) || self.in_neighbors(w).binary_search(&v).is_err()) {
                return false;
            }
            if ins.iter().any(|&w| !self.contains(w) || !self.has_edge(w, v)) {
                return false;
            }
        }
        true
    }

    /// Induced subgraph on the vertices not in `victims`, densely re-indexed
    /// in ascending order of the surviving ids.
    pub fn remove_nodes(&self, victims: &[NodeId]) -> InducedSubgraph {
        let n = self.node_count();
        let mut dead = vec![false; n];
        for &v in victims {
            dead[v.index()] = true;
        }
        let mut new_id = vec![u32::MAX; n];
        let mut original = Vec::with_capacity(n);
        for v in self.nodes() {
            if !dead[v.index()] {
                new_id[v.index()] = original.len() as u32;
                original.push(v);
            }
        }
        // re-indexing preserves order, so the surviving pairs stay sorted
        let pairs: Vec<(u32, u32)> = self
            .edges()
            .filter(|(u, v)| !dead[u.index()] && !dead[v.index()])
            .map(|(u, v)| (new_id[u.index()], new_id[v.index()]))
            .collect();
        let mut graph = DirectedGraph::from_sorted_pairs(original.len(), &pairs);
        if let Some(l) = &self.labels {
            graph.labels = Some(original.iter().map(|v| l[v.index()].clone()).collect());
        }
        InducedSubgraph { graph, original }
    }
}

/// Result of [`DirectedGraph::remove_nodes`].
#[derive(Clone, Debug)]
pub struct InducedSubgraph {
    pub graph: DirectedGraph,
    /// `original[new_id]` is the id the vertex had in the parent graph.
    pub original: Vec<NodeId>,
}

/// Stages labeled edges and assigns dense ids in first-appearance order.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    ids: HashMap<String, u32>,
    labels: Vec<String>,
    edges: Vec<(u32, u32)>,
    symmetrize: bool,
}

impl GraphBuilder {
    pub fn new(symmetrize: bool) -> Self {
        GraphBuilder {
            symmetrize,
            ..Default::default()
        }
    }

    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.ids.get(label) {
            return NodeId(id);
        }
        let id = self.labels.len() as u32;
        self.ids.insert(label.to_owned(), id);
        self.labels.push(label.to_owned());
        NodeId(id)
    }

    pub fn add_edge(&mut self, source: &str, target: &str) {
        let u = self.intern(source).0;
        let v = self.intern(target).0;
        self.edges.push((u, v));
        if self.symmetrize {
            self.edges.push((v, u));
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn build(self) -> DirectedGraph {
        let n = self.labels.len();
        let edges = self.edges.into_iter().map(|(u, v)| (u as usize, v as usize));
        DirectedGraph::from_edges(n, edges).with_labels(self.labels)
    }
}
