//! Exact minimum seed sets for small instances.
//!
//! Two independent routes are provided. [`min_seed_bruteforce`] enumerates
//! seed sets and runs the cascade. [`solve_seed_ip_small`] works on the
//! time-indexed 0/1 program ([`IpModel`]): binary `x[i][t]` says vertex `i` is
//! active at time `t`, the objective counts `x[i][1]`, every vertex must be
//! active at `t = n`, and
//!
//! ```text
//! x[i][t] <= x[i][t-1] + 1/(d_in(i) * theta_i) * sum_{j in in(i)} x[j][t-1]   for t in 2..=n
//! ```

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::tipping::{compute_thresholds, Cascade, SeedSet, ThresholdAssignment, ThresholdSpec};

pub const DEFAULT_BRUTEFORCE_LIMIT: usize = 20;
pub const DEFAULT_IP_LIMIT: usize = 12;

/// Tolerance used when evaluating fractional constraint coefficients.
const FEAS_EPS: f64 = 1e-9;

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::TooLarge { n, limit })
    } else {
        Ok(())
    }
}

/// Visits the `k`-subsets of `0..n` in lexicographic order until `visit`
/// returns true; returns the accepted subset.
fn first_combination<F>(n: usize, k: usize, mut visit: F) -> Option<Vec<usize>>
where
    F: FnMut(&[usize]) -> bool,
{
    if k > n {
        return None;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return Some(idx);
        }
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn to_seed(subset: &[usize]) -> SeedSet {
    subset.iter().map(|&i| NodeId::from(i)).collect()
}

/// Smallest covering seed set by enumeration in order of increasing size;
/// ties go to the lexicographically smallest id set.
pub fn min_seed_bruteforce(
    g: &DirectedGraph,
    ka: &ThresholdAssignment,
    node_limit: usize,
) -> Result<SeedSet> {
    let n = g.node_count();
    check_limit(n, node_limit)?;
    let base = Cascade::new(g, ka);
    if base.is_complete() {
        return Ok(SeedSet::new());
    }
    for size in 1..=n {
        let hit = first_combination(n, size, |subset| {
            let mut c = Cascade::new(g, ka);
            for &i in subset {
                c.activate(NodeId::from(i));
            }
            c.is_complete()
        });
        if let Some(subset) = hit {
            return Ok(to_seed(&subset));
        }
    }
    unreachable!("the full vertex set always covers")
}

/// Right-hand side scaling of a vertex's activation rows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ActivationScale {
    /// `d_in = 0`: the coefficient is undefined and the row does not restrict.
    Unrestricted,
    /// `d_in(i) * theta_i`; the row coefficient is its reciprocal.
    Scaled(f64),
}

/// One row of the program, with 1-based vertex and time indices.
#[derive(Clone, Debug, PartialEq)]
pub enum Constraint<'m> {
    Binary { node: usize, time: usize },
    /// `x[node][n] = 1`.
    End { node: usize },
    Activation {
        node: usize,
        time: usize,
        scale: ActivationScale,
        in_neighbors: &'m [usize],
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct IpModel {
    n: usize,
    // 1-based in-neighbor indices per vertex
    in_neighbors: Vec<Vec<usize>>,
    scales: Vec<ActivationScale>,
}

impl IpModel {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn variable_count(&self) -> usize {
        self.n * self.n
    }

    pub fn scale(&self, node: usize) -> ActivationScale {
        self.scales[node - 1]
    }

    pub fn constraints(&self) -> impl Iterator<Item = Constraint<'_>> + '_ {
        let n = self.n;
        let binary = (1..=n).flat_map(move |node| (1..=n).map(move |time| Constraint::Binary { node, time }));
        let end = (1..=n).map(|node| Constraint::End { node });
        let activation = (1..=n).flat_map(move |node| {
            (2..=n).map(move |time| Constraint::Activation {
                node,
                time,
                scale: self.scales[node - 1],
                in_neighbors: &self.in_neighbors[node - 1],
            })
        });
        binary.chain(end).chain(activation)
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints().count()
    }

    /// `x[i][t]` with 1-based indices, stored as `x[i-1][t-1]`.
    pub fn objective(&self, x: &[Vec<bool>]) -> usize {
        x.iter().filter(|row| row[0]).count()
    }

    /// Activation rows admit `x[node][time] = 1` given the previous column.
    fn allows(&self, node: usize, time: usize, x: &[Vec<bool>]) -> bool {
        let i = node - 1;
        if x[i][time - 2] {
            return true;
        }
        match self.scales[i] {
            ActivationScale::Unrestricted => true,
            ActivationScale::Scaled(s) => {
                let active = self.in_neighbors[i].iter().filter(|&&j| x[j - 1][time - 2]).count();
                active as f64 / s >= 1.0 - FEAS_EPS
            }
        }
    }

    /// Checks every row of the program against a full assignment.
    pub fn is_feasible(&self, x: &[Vec<bool>]) -> bool {
        if x.len() != self.n || x.iter().any(|row| row.len() != self.n) {
            return false;
        }
        self.constraints().all(|c| match c {
            Constraint::Binary { .. } => true,
            Constraint::End { node } => x[node - 1][self.n - 1],
            Constraint::Activation { node, time, .. } => !x[node - 1][time - 1] || self.allows(node, time, x),
        })
    }

    /// The largest trajectory consistent with the activation rows for the
    /// given first column.
    pub fn maximal_trajectory(&self, first: &[bool]) -> Vec<Vec<bool>> {
        let n = self.n;
        let mut x: Vec<Vec<bool>> = first
            .iter()
            .map(|&b| {
                let mut row = vec![false; n];
                if n > 0 {
                    row[0] = b;
                }
                row
            })
            .collect();
        for time in 2..=n {
            for node in 1..=n {
                x[node - 1][time - 1] = self.allows(node, time, &x);
            }
        }
        x
    }

    /// Writes the program in CPLEX LP format. Output depends only on the
    /// model, byte for byte.
    pub fn export_lp<W: Write>(&self, mut sink: W) -> Result<()> {
        let n = self.n;
        let mut out = String::new();
        let _ = writeln!(out, "\\ minimum seed program, {n} nodes, {} variables", self.variable_count());
        out.push_str("Minimize\n obj:");
        let objective: Vec<Term> = (1..=n).map(|i| Term::unit(i, 1)).collect();
        write_terms(&mut out, &objective);
        if objective.is_empty() {
            out.push_str(" 0");
        }
        out.push_str("\nSubject To\n");
        for c in self.constraints() {
            match c {
                Constraint::Binary { .. } => {}
                Constraint::End { node } => {
                    let _ = writeln!(out, " end_{node}: x_{node}_{n} = 1");
                }
                Constraint::Activation { node, time, scale, in_neighbors } => {
                    let _ = write!(out, " act_{node}_{time}:");
                    match scale {
                        ActivationScale::Unrestricted => {
                            write_terms(&mut out, &[Term::unit(node, time)]);
                            out.push_str(" <= 1\n");
                        }
                        ActivationScale::Scaled(s) => {
                            let (own, neighbor) = row_coefficients(s);
                            let mut terms = vec![
                                Term { coef: own.clone(), negative: false, node, time },
                                Term { coef: own, negative: true, node, time: time - 1 },
                            ];
                            terms.extend(in_neighbors.iter().map(|&j| Term {
                                coef: neighbor.clone(),
                                negative: true,
                                node: j,
                                time: time - 1,
                            }));
                            write_terms(&mut out, &terms);
                            out.push_str(" <= 0\n");
                        }
                    }
                }
            }
        }
        out.push_str("Binary\n");
        for node in 1..=n {
            let names: Vec<String> = (1..=n).map(|t| format!("x_{node}_{t}")).collect();
            for chunk in names.chunks(10) {
                let _ = writeln!(out, " {}", chunk.join(" "));
            }
        }
        out.push_str("End\n");
        sink.write_all(out.as_bytes())?;
        sink.flush()?;
        Ok(())
    }
}

struct Term {
    // empty string means coefficient 1
    coef: String,
    negative: bool,
    node: usize,
    time: usize,
}

impl Term {
    fn unit(node: usize, time: usize) -> Self {
        Term { coef: String::new(), negative: false, node, time }
    }
}

const TERMS_PER_LINE: usize = 8;

fn write_terms(out: &mut String, terms: &[Term]) {
    for (k, t) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        out.push_str(match (k, t.negative) {
            (0, false) => " ",
            (_, false) => " + ",
            (_, true) => " - ",
        });
        if !t.coef.is_empty() {
            out.push_str(&t.coef);
            out.push(' ');
        }
        let _ = write!(out, "x_{}_{}", t.node, t.time);
    }
}

fn near_integer(v: f64) -> Option<u64> {
    let r = v.round();
    ((v - r).abs() <= FEAS_EPS * r.max(1.0) && r >= 1.0).then_some(r as u64)
}

fn integer_coef(c: u64) -> String {
    if c == 1 {
        String::new()
    } else {
        c.to_string()
    }
}

/// Coefficients for `own * x[i][t] - own * x[i][t-1] - neighbor * sum x[j][t-1] <= 0`.
fn row_coefficients(scale: f64) -> (String, String) {
    let reciprocal = 1.0 / scale;
    if let Some(c) = near_integer(reciprocal) {
        (String::new(), integer_coef(c))
    } else if let Some(s) = near_integer(scale) {
        (integer_coef(s), String::new())
    } else {
        (String::new(), significant_digits(reciprocal, 12))
    }
}

fn significant_digits(v: f64, digits: i32) -> String {
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (digits - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Builds the time-indexed program. Fractional thresholds use `theta = f`;
/// capped counts use the effective `theta_i = k_i / d_in(i)`, so the row scale
/// is exactly `k_i`.
pub fn build_seed_ip(g: &DirectedGraph, spec: ThresholdSpec) -> Result<IpModel> {
    spec.validate()?;
    let in_neighbors = g
        .nodes()
        .map(|v| g.in_neighbors(v).iter().map(|u| u.index() + 1).collect())
        .collect();
    let scales = g
        .nodes()
        .map(|v| {
            let d = g.in_degree(v);
            if d == 0 {
                return ActivationScale::Unrestricted;
            }
            match spec {
                ThresholdSpec::FractionOfInDegree(f) => ActivationScale::Scaled(d as f64 * f),
                ThresholdSpec::AbsoluteCapped(_) => ActivationScale::Scaled(spec.count_for(d) as f64),
            }
        })
        .collect();
    Ok(IpModel {
        n: g.node_count(),
        in_neighbors,
        scales,
    })
}

pub fn export_lp<W: Write>(model: &IpModel, sink: W) -> Result<()> {
    model.export_lp(sink)
}

/// Optimal solution of the program, found by enumerating the first column in
/// order of increasing weight and propagating the maximal trajectory. Ties go
/// to the lexicographically smallest seed.
#[derive(Clone, Debug, PartialEq)]
pub struct IpSolution {
    pub seed: SeedSet,
    pub objective: usize,
    pub trajectory: Vec<Vec<bool>>,
}

pub fn solve_seed_ip_small(g: &DirectedGraph, spec: ThresholdSpec, node_limit: usize) -> Result<IpSolution> {
    let n = g.node_count();
    check_limit(n, node_limit)?;
    let model = build_seed_ip(g, spec)?;
    if n == 0 {
        return Ok(IpSolution { seed: SeedSet::new(), objective: 0, trajectory: vec![] });
    }
    for size in 0..=n {
        let mut trajectory = None;
        let hit = first_combination(n, size, |subset| {
            let mut first = vec![false; n];
            for &i in subset {
                first[i] = true;
            }
            let x = model.maximal_trajectory(&first);
            let done = x.iter().all(|row| row[n - 1]);
            if done {
                trajectory = Some(x);
            }
            done
        });
        if let (Some(subset), Some(trajectory)) = (hit, trajectory) {
            debug_assert!(model.is_feasible(&trajectory));
            return Ok(IpSolution {
                seed: to_seed(&subset),
                objective: subset.len(),
                trajectory,
            });
        }
    }
    unreachable!("the all-ones first column is feasible")
}

/// Brute-force minimum for a threshold spec rather than explicit counts.
pub fn min_seed_for_spec(g: &DirectedGraph, spec: ThresholdSpec, node_limit: usize) -> Result<SeedSet> {
    min_seed_bruteforce(g, &compute_thresholds(g, spec), node_limit)
}
