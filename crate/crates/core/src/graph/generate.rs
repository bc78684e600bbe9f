use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::DirectedGraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SyntheticKind {
    Cycle { n: usize },
    /// Node 0 is the center.
    Star { leaves: usize },
    Path { n: usize },
    Clique { n: usize },
    /// Erdős–Rényi G(n, p).
    UniformRandom { n: usize, p: f64 },
    /// Barabási–Albert growth from a clique on `edges_per_node + 1` vertices;
    /// each later vertex attaches to `edges_per_node` distinct earlier ones.
    PreferentialAttachment { n: usize, edges_per_node: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Symmetric,
    /// Cycle and path run `i -> i+1`, the star points outwards, the clique
    /// points from lower to higher id, and preferential attachment points
    /// from the newcomer to its targets.
    Directed,
}

pub fn make_synthetic(kind: SyntheticKind, orientation: Orientation, seed: u64) -> Result<DirectedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, edges): (usize, Vec<(usize, usize)>) = match kind {
        SyntheticKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidArgument(format!("cycle needs n >= 3, got {n}")));
            }
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect())
        }
        SyntheticKind::Star { leaves } => (leaves + 1, (1..=leaves).map(|l| (0, l)).collect()),
        SyntheticKind::Path { n } => (n, (1..n).map(|i| (i - 1, i)).collect()),
        SyntheticKind::Clique { n } => (
            n,
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
        ),
        SyntheticKind::UniformRandom { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!("edge probability {p} outside [0, 1]")));
            }
            let edges = match orientation {
                Orientation::Symmetric => gnp_pairs(n, p, &mut rng),
                Orientation::Directed => gnp_ordered(n, p, &mut rng),
            };
            (n, edges)
        }
        SyntheticKind::PreferentialAttachment { n, edges_per_node } => {
            if edges_per_node == 0 || n <= edges_per_node {
                return Err(Error::InvalidArgument(format!(
                    "preferential attachment needs 1 <= edges_per_node < n, got {edges_per_node} and n = {n}"
                )));
            }
            (n, barabasi_albert(n, edges_per_node, &mut rng))
        }
    };
    let g = match orientation {
        Orientation::Directed => DirectedGraph::from_edges(n, edges),
        Orientation::Symmetric => {
            DirectedGraph::from_edges(n, edges.into_iter().flat_map(|(u, v)| [(u, v), (v, u)]))
        }
    };
    Ok(g)
}

/// Number of failures before the next success of a Bernoulli(p) sequence.
fn geometric_skip<R: Rng>(p: f64, rng: &mut R) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    let r: f64 = rng.gen();
    ((1.0 - r).ln() / (1.0 - p).ln()).floor() as u64
}

/// Unordered pairs `(v, w)` with `w < v`, in O(n + m) by skipping.
fn gnp_pairs<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if p <= 0.0 || n < 2 {
        return edges;
    }
    let total = (n as u64) * (n as u64 - 1) / 2;
    let (mut v, mut row_start) = (1u64, 0u64);
    let mut slot = geometric_skip(p, rng);
    while slot < total {
        while slot >= row_start + v {
            row_start += v;
            v += 1;
        }
        edges.push((v as usize, (slot - row_start) as usize));
        slot += 1 + geometric_skip(p, rng);
    }
    edges
}

fn gnp_ordered<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    if p <= 0.0 || n < 2 {
        return edges;
    }
    let width = n as u64 - 1;
    let total = n as u64 * width;
    let mut slot = geometric_skip(p, rng);
    while slot < total {
        let u = slot / width;
        let t = slot % width;
        let v = if t >= u { t + 1 } else { t };
        edges.push((u as usize, v as usize));
        slot += 1 + geometric_skip(p, rng);
    }
    edges
}

fn barabasi_albert<R: Rng>(n: usize, k: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(k * n);
    // every edge endpoint, so sampling from it is degree-proportional
    let mut endpoints = Vec::with_capacity(2 * k * n);
    for i in 0..=k {
        for j in 0..i {
            edges.push((i, j));
            endpoints.extend([i, j]);
        }
    }
    let mut chosen = Vec::with_capacity(k);
    for v in k + 1..n {
        chosen.clear();
        while chosen.len() < k {
            let t = endpoints[rng.gen_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((v, t));
            endpoints.extend([v, t]);
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_constructors() {
        let c = make_synthetic(SyntheticKind::Cycle { n: 3 }, Orientation::Directed, 0).unwrap();
        assert_eq!((c.node_count(), c.edge_count()), (3, 3));
        let s = make_synthetic(SyntheticKind::Star { leaves: 4 }, Orientation::Symmetric, 0).unwrap();
        assert_eq!((s.node_count(), s.edge_count()), (5, 8));
        let p = make_synthetic(SyntheticKind::Path { n: 4 }, Orientation::Symmetric, 0).unwrap();
        assert_eq!(p.edge_count(), 6);
        let k = make_synthetic(SyntheticKind::Clique { n: 4 }, Orientation::Symmetric, 0).unwrap();
        assert_eq!(k.edge_count(), 12);
    }

    #[test]
    fn zero_probability_has_no_edges() {
        let g = make_synthetic(SyntheticKind::UniformRandom { n: 100, p: 0.0 }, Orientation::Symmetric, 7)
            .unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (100, 0));
    }

    #[test]
    fn full_probability_is_complete() {
        for o in [Orientation::Symmetric, Orientation::Directed] {
            let g = make_synthetic(SyntheticKind::UniformRandom { n: 7, p: 1.0 }, o, 1).unwrap();
            assert_eq!(g.edge_count(), 42);
        }
    }

    #[test]
    fn invalid_params() {
        assert!(make_synthetic(SyntheticKind::UniformRandom { n: 5, p: 1.5 }, Orientation::Symmetric, 0).is_err());
        assert!(make_synthetic(SyntheticKind::Cycle { n: 2 }, Orientation::Symmetric, 0).is_err());
        assert!(make_synthetic(
            SyntheticKind::PreferentialAttachment { n: 3, edges_per_node: 3 },
            Orientation::Symmetric,
            0
        )
        .is_err());
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let kind = SyntheticKind::UniformRandom { n: 300, p: 0.03 };
        let a = make_synthetic(kind, Orientation::Symmetric, 11).unwrap();
        let b = make_synthetic(kind, Orientation::Symmetric, 11).unwrap();
        let c = make_synthetic(kind, Orientation::Symmetric, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(a.is_symmetric() && a.check_consistency());
    }

    #[test]
    fn gnp_density_is_plausible() {
        let n = 2000;
        let p = 0.01;
        let g = make_synthetic(SyntheticKind::UniformRandom { n, p }, Orientation::Symmetric, 3).unwrap();
        let expected = p * (n * (n - 1) / 2) as f64;
        let got = (g.edge_count() / 2) as f64;
        // about 7 standard deviations
        assert!((got - expected).abs() < 7.0 * expected.sqrt(), "{got} vs {expected}");

        let d = make_synthetic(SyntheticKind::UniformRandom { n, p }, Orientation::Directed, 3).unwrap();
        let expected = p * (n * (n - 1)) as f64;
        assert!((d.edge_count() as f64 - expected).abs() < 7.0 * expected.sqrt());
    }

    #[test]
    fn preferential_attachment_degrees() {
        let g = make_synthetic(
            SyntheticKind::PreferentialAttachment { n: 200, edges_per_node: 3 },
            Orientation::Symmetric,
            5,
        )
        .unwrap();
        // 6 clique edges then 3 per added vertex, each stored both ways
        assert_eq!(g.edge_count(), 2 * (6 + 3 * 196));
        assert!(g.nodes().all(|v| g.out_degree(v) >= 3));
    }
}
