//! Community-structure measurements on undirected (symmetric) graphs.

use std::collections::HashMap;
use std::io::Write;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

fn require_symmetric(g: &DirectedGraph, what: &str) -> Result<()> {
    if g.is_symmetric() {
        Ok(())
    } else {
        Err(Error::NotApplicable(format!("{what} needs a symmetric graph")))
    }
}

/// `2r / (d (d - 1))` where `r` counts edges among the neighbors; 0 when `d < 2`.
pub fn local_clustering(g: &DirectedGraph, v: NodeId) -> Result<f64> {
    require_symmetric(g, "clustering coefficient")?;
    Ok(clustering_unchecked(g, v))
}

fn clustering_unchecked(g: &DirectedGraph, v: NodeId) -> f64 {
    let nbrs = g.out_neighbors(v);
    let d = nbrs.len();
    if d < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if g.has_edge(a, b) {
                links += 1;
            }
        }
    }
    2.0 * links as f64 / (d * (d - 1)) as f64
}

/// Mean local clustering over all vertices (0 for the empty graph).
pub fn average_clustering(g: &DirectedGraph) -> Result<f64> {
    require_symmetric(g, "clustering coefficient")?;
    let n = g.node_count();
    if n == 0 {
        return Ok(0.0);
    }
    Ok(g.nodes().map(|v| clustering_unchecked(g, v)).sum::<f64>() / n as f64)
}

/// Community label per vertex, relabeled `0..q` in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    community: Vec<usize>,
}

impl Partition {
    pub fn new(labels: Vec<usize>) -> Self {
        let mut remap = HashMap::new();
        let community = labels
            .into_iter()
            .map(|c| {
                let next = remap.len();
                *remap.entry(c).or_insert(next)
            })
            .collect();
        Partition { community }
    }

    pub fn singletons(n: usize) -> Self {
        Partition { community: (0..n).collect() }
    }

    pub fn whole(n: usize) -> Self {
        Partition { community: vec![0; n] }
    }

    pub fn community_of(&self, v: NodeId) -> usize {
        self.community[v.index()]
    }

    pub fn len(&self) -> usize {
        self.community.len()
    }

    pub fn is_empty(&self) -> bool {
        self.community.is_empty()
    }

    pub fn community_count(&self) -> usize {
        self.community.iter().max().map_or(0, |&c| c + 1)
    }

    pub fn labels(&self) -> &[usize] {
        &self.community
    }

    /// Writes `node,community` rows.
    pub fn write_csv<W: Write>(&self, g: &DirectedGraph, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["node", "community"])?;
        for v in g.nodes() {
            w.write_record([g.label(v), self.community_of(v).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Newman modularity with null model `k_i k_j / 2m`, summed over ordered
/// pairs inside each community.
pub fn modularity(g: &DirectedGraph, p: &Partition) -> Result<f64> {
    require_symmetric(g, "modularity")?;
    if p.len() != g.node_count() {
        return Err(Error::InvalidArgument("partition does not cover the graph".into()));
    }
    let two_m = g.edge_count() as f64;
    if two_m == 0.0 {
        return Err(Error::Undefined("modularity of an edgeless graph"));
    }
    let q = p.community_count();
    let mut inside = vec![0.0f64; q];
    let mut total = vec![0.0f64; q];
    for (u, v) in g.edges() {
        if p.community_of(u) == p.community_of(v) {
            inside[p.community_of(u)] += 1.0;
        }
    }
    for v in g.nodes() {
        total[p.community_of(v)] += g.out_degree(v) as f64;
    }
    Ok(inside
        .iter()
        .zip(&total)
        .map(|(&a, &t)| a / two_m - (t / two_m) * (t / two_m))
        .sum())
}

/// Weighted undirected graph used between Louvain passes. `adj[i]` holds
/// `(j, w)` with `w` summed over ordered pairs, so a self-loop entry carries
/// twice the internal edge weight.
struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
    strength: Vec<f64>,
    two_m: f64,
}

impl WeightedGraph {
    fn from_graph(g: &DirectedGraph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = g
            .nodes()
            .map(|v| g.out_neighbors(v).iter().map(|w| (w.index(), 1.0)).collect())
            .collect();
        Self::with_adjacency(adj)
    }

    fn with_adjacency(adj: Vec<Vec<(usize, f64)>>) -> Self {
        let strength: Vec<f64> = adj.iter().map(|row| row.iter().map(|&(_, w)| w).sum()).collect();
        let two_m = strength.iter().sum();
        WeightedGraph { adj, strength, two_m }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn modularity(&self, community: &[usize]) -> f64 {
        let q = community.iter().max().map_or(0, |&c| c + 1);
        let mut inside = vec![0.0; q];
        let mut total = vec![0.0; q];
        for (i, row) in self.adj.iter().enumerate() {
            total[community[i]] += self.strength[i];
            for &(j, w) in row {
                if community[i] == community[j] {
                    inside[community[i]] += w;
                }
            }
        }
        inside
            .iter()
            .zip(&total)
            .map(|(a, t)| a / self.two_m - (t / self.two_m).powi(2))
            .sum()
    }

    /// Sweeps vertices in ascending order, moving each to the neighboring
    /// community with the largest strictly positive gain, until a sweep
    /// moves nothing. Returns whether anything moved.
    fn local_moving(&self, community: &mut [usize]) -> bool {
        let n = self.len();
        let mut total = vec![0.0f64; n];
        for i in 0..n {
            total[community[i]] += self.strength[i];
        }
        let mut links: Vec<f64> = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut moved_any = false;
        loop {
            let mut moved = false;
            for i in 0..n {
                let own = community[i];
                let k_i = self.strength[i];
                for &(j, w) in &self.adj[i] {
                    if j == i {
                        continue;
                    }
                    let c = community[j];
                    if links[c] == 0.0 {
                        touched.push(c);
                    }
                    links[c] += w;
                }
                total[own] -= k_i;
                // gain of joining c, up to a common positive factor
                let gain = |c: usize, l: f64| l - total[c] * k_i / self.two_m;
                let stay = gain(own, links[own]);
                let mut best = (own, stay);
                touched.sort_unstable();
                for &c in &touched {
                    let g = gain(c, links[c]);
                    if g > best.1 + 1e-12 {
                        best = (c, g);
                    }
                }
                total[best.0] += k_i;
                if best.0 != own {
                    community[i] = best.0;
                    moved = true;
                }
                for &c in &touched {
                    links[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            moved_any = true;
        }
        moved_any
    }

    /// Collapses communities into vertices; returns the new graph and the
    /// dense community index of each old vertex.
    fn aggregate(&self, community: &[usize]) -> (WeightedGraph, Vec<usize>) {
        let mut dense = HashMap::new();
        let map: Vec<usize> = community
            .iter()
            .map(|&c| {
                let next = dense.len();
                *dense.entry(c).or_insert(next)
            })
            .collect();
        let q = dense.len();
        let mut rows: Vec<HashMap<usize, f64>> = vec![HashMap::new(); q];
        for (i, row) in self.adj.iter().enumerate() {
            for &(j, w) in row {
                *rows[map[i]].entry(map[j]).or_insert(0.0) += w;
            }
        }
        let adj = rows
            .into_iter()
            .map(|row| {
                let mut v: Vec<(usize, f64)> = row.into_iter().collect();
                v.sort_unstable_by_key(|&(j, _)| j);
                v
            })
            .collect();
        (WeightedGraph::with_adjacency(adj), map)
    }
}

/// Louvain outcome: flat partition of the input graph and its modularity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LouvainResult {
    pub partition: Partition,
    pub modularity: f64,
    /// Modularity after each completed pass, starting with singletons.
    pub history: Vec<f64>,
}

const LOUVAIN_MIN_GAIN: f64 = 1e-12;

/// Louvain modularity maximization with a fixed ascending-id sweep order.
pub fn louvain(g: &DirectedGraph) -> Result<LouvainResult> {
    require_symmetric(g, "louvain")?;
    if g.edge_count() == 0 {
        return Err(Error::Undefined("modularity of an edgeless graph"));
    }
    let mut level = WeightedGraph::from_graph(g);
    let mut flat: Vec<usize> = (0..g.node_count()).collect();
    let mut current = level.modularity(&flat);
    let mut history = vec![current];
    loop {
        let mut community: Vec<usize> = (0..level.len()).collect();
        if !level.local_moving(&mut community) {
            break;
        }
        let q = level.modularity(&community);
        if q - current <= LOUVAIN_MIN_GAIN {
            break;
        }
        let (next, map) = level.aggregate(&community);
        for c in flat.iter_mut() {
            *c = map[*c];
        }
        current = q;
        history.push(q);
        level = next;
    }
    let partition = Partition::new(flat);
    let modularity = modularity(g, &partition)?;
    Ok(LouvainResult { partition, modularity, history })
}

/// `S ≈ a*M + b*C + c` by ordinary least squares.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub r_squared: f64,
}

impl PlanarFit {
    pub fn predict(&self, m: f64, c: f64) -> f64 {
        self.a * m + self.b * c + self.c
    }
}

fn r_squared(ys: &[f64], predicted: impl Iterator<Item = f64>) -> f64 {
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = ys.iter().zip(predicted).map(|(y, p)| (y - p).powi(2)).sum();
    if ss_tot <= f64::EPSILON * ys.len() as f64 * mean.abs().max(1.0) {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    }
}

/// Fits a plane through `(M, C, S)` points via the normal equations.
pub fn planar_fit(points: &[(f64, f64, f64)]) -> Result<PlanarFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!("{} points, need at least 3", points.len())));
    }
    let mut xtx = Matrix3::<f64>::zeros();
    let mut xty = Vector3::<f64>::zeros();
    for &(m, c, s) in points {
        let row = Vector3::new(m, c, 1.0);
        xtx += row * row.transpose();
        xty += row * s;
    }
    let svd = xtx.svd(false, false);
    let (hi, lo) = (svd.singular_values.max(), svd.singular_values.min());
    if lo <= hi * 1e-12 {
        return Err(Error::DegenerateFit("design points are collinear".into()));
    }
    let beta = xtx
        .lu()
        .solve(&xty)
        .ok_or_else(|| Error::DegenerateFit("singular normal equations".into()))?;
    let (a, b, c) = (beta[0], beta[1], beta[2]);
    let ys: Vec<f64> = points.iter().map(|p| p.2).collect();
    let r2 = r_squared(&ys, points.iter().map(|&(m, cc, _)| a * m + b * cc + c));
    Ok(PlanarFit { a, b, c, r_squared: r2 })
}

/// `y ≈ slope * x + intercept` by ordinary least squares.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(points: &[(f64, f64)]) -> Result<LinearFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!("{} points, need at least 3", points.len())));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) {
        return Err(Error::DegenerateFit("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let r2 = r_squared(&ys, points.iter().map(|p| slope * p.0 + intercept));
    Ok(LinearFit { slope, intercept, r_squared: r2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_synthetic, Orientation, SyntheticKind};
    use proptest::prelude::*;

    fn sym(n: usize, edges: &[(usize, usize)]) -> DirectedGraph {
        DirectedGraph::from_edges(n, edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]))
    }

    fn two_triangles() -> DirectedGraph {
        sym(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    }

    fn bridged_triangles() -> DirectedGraph {
        sym(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
    }

    /// Best modularity over every set partition (restricted growth strings).
    fn best_partition(g: &DirectedGraph) -> (Partition, f64) {
        let n = g.node_count();
        let mut labels = vec![0usize; n];
        let mut best = (Partition::whole(n), f64::NEG_INFINITY);
        loop {
            let p = Partition::new(labels.clone());
            let q = modularity(g, &p).unwrap();
            if q > best.1 + 1e-12 {
                best = (p, q);
            }
            // next restricted growth string
            let mut i = n;
            loop {
                if i <= 1 {
                    return best;
                }
                i -= 1;
                let cap = labels[..i].iter().max().unwrap() + 1;
                if labels[i] < cap {
                    labels[i] += 1;
                    for l in labels.iter_mut().skip(i + 1) {
                        *l = 0;
                    }
                    break;
                }
            }
        }
    }

    #[test]
    fn partition_enumeration_counts_bell_number() {
        let mut labels = [0usize; 5];
        let mut count = 1;
        'outer: loop {
            let mut i = 5;
            loop {
                if i <= 1 {
                    break 'outer;
                }
                i -= 1;
                let cap = labels[..i].iter().max().unwrap() + 1;
                if labels[i] < cap {
                    labels[i] += 1;
                    labels[i + 1..].iter_mut().for_each(|l| *l = 0);
                    count += 1;
                    break;
                }
            }
        }
        assert_eq!(count, 52);
    }

    #[test]
    fn clustering_examples() {
        let tri = sym(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(average_clustering(&tri).unwrap(), 1.0);
        let path = sym(3, &[(0, 1), (1, 2)]);
        assert_eq!(local_clustering(&path, NodeId(1)).unwrap(), 0.0);
        assert_eq!(average_clustering(&path).unwrap(), 0.0);
        // K4 minus the edge 2-3: nodes 0 and 1 have degree 3
        let k4e = sym(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!((local_clustering(&k4e, NodeId(0)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((local_clustering(&k4e, NodeId(1)).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let directed = DirectedGraph::from_edges(2, [(0, 1)]);
        assert!(average_clustering(&directed).is_err());
    }

    #[test]
    fn modularity_examples() {
        let g = two_triangles();
        let natural = Partition::new(vec![0, 0, 0, 1, 1, 1]);
        assert_eq!(modularity(&g, &natural).unwrap(), 0.5);
        assert_eq!(modularity(&g, &Partition::whole(6)).unwrap(), 0.0);
        let single = modularity(&g, &Partition::singletons(6)).unwrap();
        assert!((single + 1.0 / 6.0).abs() < 1e-15);
        assert!(modularity(&DirectedGraph::from_edges(3, []), &Partition::whole(3)).is_err());
    }

    #[test]
    fn louvain_two_triangles() {
        let g = two_triangles();
        let r = louvain(&g).unwrap();
        assert_eq!(r.partition, Partition::new(vec![0, 0, 0, 1, 1, 1]));
        assert_eq!(r.modularity, 0.5);
        let (best, q) = best_partition(&g);
        assert_eq!(best, r.partition);
        assert_eq!(q, r.modularity);
    }

    #[test]
    fn louvain_complete_graph() {
        let g = make_synthetic(SyntheticKind::Clique { n: 5 }, Orientation::Symmetric, 0).unwrap();
        let r = louvain(&g).unwrap();
        assert_eq!(r.partition.community_count(), 1);
        assert_eq!(r.modularity, 0.0);
        assert!(best_partition(&g).1 <= 1e-12);
    }

    #[test]
    fn louvain_bridged_triangles() {
        let g = bridged_triangles();
        let r = louvain(&g).unwrap();
        assert_eq!(r.partition, Partition::new(vec![0, 0, 0, 1, 1, 1]));
        let (best, q) = best_partition(&g);
        assert_eq!(best, r.partition);
        assert!((q - r.modularity).abs() < 1e-12);
    }

    #[test]
    fn louvain_history_is_monotone() {
        let g = make_synthetic(
            SyntheticKind::PreferentialAttachment { n: 400, edges_per_node: 2 },
            Orientation::Symmetric,
            9,
        )
        .unwrap();
        let r = louvain(&g).unwrap();
        assert!(r.history.windows(2).all(|w| w[1] >= w[0]));
        assert!(r.modularity > 0.3);
        assert_eq!(r.modularity, modularity(&g, &r.partition).unwrap());
    }

    #[test]
    fn partition_csv() {
        let g = two_triangles();
        let mut buf = Vec::new();
        Partition::new(vec![5, 5, 5, 2, 2, 2]).write_csv(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "node,community\n0,0\n1,0\n2,0\n3,1\n4,1\n5,1\n");
    }

    #[test]
    fn exact_plane() {
        let pts: Vec<_> = [(0.1, 0.2), (0.5, 0.1), (0.9, 0.7), (0.3, 0.3), (0.6, 0.9)]
            .iter()
            .map(|&(m, c)| (m, c, 2.0 * m + 3.0 * c + 1.0))
            .collect();
        let fit = planar_fit(&pts).unwrap();
        assert!((fit.a - 2.0).abs() < 1e-9 && (fit.b - 3.0).abs() < 1e-9 && (fit.c - 1.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_response() {
        let pts = [(0.1, 0.2, 4.0), (0.5, 0.1, 4.0), (0.9, 0.7, 4.0), (0.2, 0.8, 4.0)];
        let fit = planar_fit(&pts).unwrap();
        assert!(fit.a.abs() < 1e-9 && fit.b.abs() < 1e-9 && (fit.c - 4.0).abs() < 1e-9);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn degenerate_fits() {
        assert!(planar_fit(&[(0.0, 0.0, 1.0), (1.0, 1.0, 2.0)]).is_err());
        // collinear (M, C) design
        let pts = [(0.0, 0.0, 1.0), (1.0, 2.0, 2.0), (2.0, 4.0, 3.0), (3.0, 6.0, 5.0)];
        assert!(matches!(planar_fit(&pts), Err(Error::DegenerateFit(_))));
        assert!(linear_fit(&[(1.0, 2.0)]).is_err());
        assert!(linear_fit(&[(1.0, 2.0), (1.0, 3.0), (1.0, 4.0)]).is_err());
    }

    #[test]
    fn line_fit() {
        let fit = linear_fit(&[(1.0, 3.0), (2.0, 5.0), (3.0, 7.0), (4.0, 9.0)]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12 && (fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_serializes() {
        let fit = PlanarFit { a: 1.0, b: 2.0, c: -0.5, r_squared: 0.75 };
        assert_eq!(
            serde_json::to_string(&fit).unwrap(),
            r#"{"a":1.0,"b":2.0,"c":-0.5,"r_squared":0.75}"#
        );
    }

    fn sym_graph() -> impl Strategy<Value = DirectedGraph> {
        (2usize..=12).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 1..=3 * n)
                .prop_map(move |e| DirectedGraph::from_edges(n, e).symmetrized())
        })
    }

    proptest! {
        #[test]
        fn modularity_in_range(g in sym_graph(), labels in prop::collection::vec(0usize..4, 12)) {
            prop_assume!(g.edge_count() > 0);
            let p = Partition::new(labels[..g.node_count()].to_vec());
            let q = modularity(&g, &p).unwrap();
            prop_assert!((-1.0..=1.0).contains(&q));
            let r = louvain(&g).unwrap();
            prop_assert!((-1.0..=1.0).contains(&r.modularity));
            prop_assert!(r.history.windows(2).all(|w| w[1] >= w[0]));
        }

        #[test]
        fn clustering_in_unit_interval(g in sym_graph()) {
            for v in g.nodes() {
                let c = local_clustering(&g, v).unwrap();
                prop_assert!((0.0..=1.0).contains(&c));
            }
        }

        #[test]
        fn residuals_orthogonal_to_design(pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0, -50.0f64..50.0), 4..30)) {
            if let Ok(fit) = planar_fit(&pts) {
                let (mut rm, mut rc, mut r1) = (0.0, 0.0, 0.0);
                for &(m, c, s) in &pts {
                    let e = s - fit.predict(m, c);
                    rm += e * m;
                    rc += e * c;
                    r1 += e;
                }
                prop_assert!(rm.abs() < 1e-9 && rc.abs() < 1e-9 && r1.abs() < 1e-9, "{} {} {}", rm, rc, r1);
                prop_assert!(fit.r_squared <= 1.0 + 1e-12);
            }
        }
    }
}
