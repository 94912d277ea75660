//! Undirected graphs with planted community labels and a Bernoulli
//! planted-partition generator in the style of the Girvan-Newman benchmark.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::Warning;

/// A simple undirected graph together with one community label per vertex.
///
/// Edges are stored once, as `(u, v)` with `u < v`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: Vec<usize>,
    num_communities: usize,
    adjacency: Vec<Vec<usize>>,
}

impl LabeledGraph {
    /// Builds a graph, rejecting self-loops, duplicate edges, out-of-range
    /// endpoints and non-contiguous community ids.
    pub fn new<I>(n: usize, edges: I, labels: Vec<usize>) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if labels.len() != n {
            return Err(Error::InvalidGraph(format!("{} labels for {} vertices", labels.len(), n)));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {a}")));
            }
            let e = if a < b { (a, b) } else { (b, a) };
            if !set.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
        }

        let num_communities = labels.iter().max().map_or(0, |&m| m + 1);
        let mut seen = vec![false; num_communities];
        for &c in &labels {
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!("community ids are not contiguous: {missing} is unused")));
        }

        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { n, edges, labels, num_communities, adjacency })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    /// Vertices of community `c` in ascending order.
    pub fn community_members(&self, c: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.labels[v] == c).collect()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Number of connected components (isolated vertices count as one each).
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n];
        let mut stack = Vec::new();
        let mut components = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &w in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// `DisconnectedGraph` when the graph splits into several components.
    pub fn connectivity_warning(&self) -> Option<Warning> {
        let components = self.component_count();
        (components > 1).then_some(Warning::DisconnectedGraph { components })
    }
}

/// Parameters of the planted-partition generator.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct PartitionSpec {
    pub n: usize,
    pub num_communities: usize,
    /// Expected number of neighbours outside a vertex's own community.
    pub z_out: f64,
    /// Expected total degree.
    pub avg_degree: f64,
    pub seed: u64,
}

impl Default for PartitionSpec {
    fn default() -> Self {
        Self { n: 128, num_communities: 4, z_out: 2.0, avg_degree: 16.0, seed: 0 }
    }
}

impl PartitionSpec {
    pub fn community_order(&self) -> usize {
        self.n.checked_div(self.num_communities).unwrap_or(0)
    }

    pub fn z_in(&self) -> f64 {
        self.avg_degree - self.z_out
    }

    /// Returns `(p_in, p_out)` after checking every invariant.
    pub fn edge_probabilities(&self) -> Result<(f64, f64)> {
        if self.num_communities == 0 || self.n == 0 {
            return Err(invalid("need at least one vertex and one community"));
        }
        if self.n % self.num_communities != 0 {
            return Err(invalid(format!(
                "{} vertices cannot be split into {} equal communities",
                self.n, self.num_communities
            )));
        }
        if !(self.z_out.is_finite() && self.avg_degree.is_finite()) {
            return Err(invalid("degrees must be finite"));
        }
        if self.z_out < 0.0 || self.z_out > self.avg_degree {
            return Err(invalid(format!("z_out = {} must lie in [0, avg_degree = {}]", self.z_out, self.avg_degree)));
        }
        let order = self.community_order();
        let p_in = ratio(self.z_in(), order - 1, "z_in")?;
        let p_out = ratio(self.z_out, self.n - order, "z_out")?;
        Ok((p_in, p_out))
    }
}

fn ratio(expected: f64, candidates: usize, name: &str) -> Result<f64> {
    if candidates == 0 {
        if expected == 0.0 {
            return Ok(0.0);
        }
        return Err(invalid(format!("{name} = {expected} but there are no candidate neighbours")));
    }
    let p = expected / candidates as f64;
    if p > 1.0 {
        return Err(invalid(format!("{name} = {expected} needs edge probability {p} > 1")));
    }
    Ok(p)
}

/// Samples a planted-partition graph. Vertex `v` belongs to community
/// `v / community_order`; each pair is an independent Bernoulli trial.
pub fn generate_planted_partition(spec: &PartitionSpec) -> Result<LabeledGraph> {
    let (p_in, p_out) = spec.edge_probabilities()?;
    let order = spec.community_order();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for u in 0..spec.n {
        for v in (u + 1)..spec.n {
            let p = if u / order == v / order { p_in } else { p_out };
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    let labels = (0..spec.n).map(|v| v / order).collect();
    LabeledGraph::new(spec.n, edges, labels)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CommunityDegree {
    pub intra: f64,
    pub inter: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DegreeStats {
    pub mean_degree: f64,
    /// Indexed by community id.
    pub per_community: Vec<CommunityDegree>,
}

pub fn degree_stats(g: &LabeledGraph) -> DegreeStats {
    let k = g.num_communities();
    let mut intra = vec![0usize; k];
    let mut inter = vec![0usize; k];
    let mut sizes = vec![0usize; k];
    for v in 0..g.n() {
        sizes[g.label(v)] += 1;
    }
    for &(u, v) in g.edges() {
        let (cu, cv) = (g.label(u), g.label(v));
        if cu == cv {
            intra[cu] += 2;
        } else {
            inter[cu] += 1;
            inter[cv] += 1;
        }
    }
    let mean_degree = if g.n() == 0 { 0.0 } else { 2.0 * g.edge_count() as f64 / g.n() as f64 };
    let per_community = (0..k)
        .map(|c| {
            let size = sizes[c] as f64;
            CommunityDegree { intra: intra[c] as f64 / size, inter: inter[c] as f64 / size }
        })
        .collect();
    DegreeStats { mean_degree, per_community }
}
