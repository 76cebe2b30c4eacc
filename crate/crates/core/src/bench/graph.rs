use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph with weighted edges stored as `(i, j, w)`, `i < j`,
/// sorted by `(i, j)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::invalid(format!("self-loop on vertex {a}")));
            }
            if a >= n || b >= n {
                return Err(Error::QubitOutOfRange { index: a.max(b), n });
            }
            if !w.is_finite() {
                return Err(Error::invalid(format!(
                    "edge ({a},{b}) has non-finite weight"
                )));
            }
            norm.push((a.min(b), a.max(b), w));
        }
        norm.sort_by_key(|e| (e.0, e.1));
        if norm
            .windows(2)
            .any(|p| (p[0].0, p[0].1) == (p[1].0, p[1].1))
        {
            return Err(Error::invalid("duplicate edge"));
        }
        Ok(Self { n, edges: norm })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Greedy proper edge coloring in edge order. Returns the edge indices of
    /// each color class.
    pub fn edge_coloring(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut used: Vec<Vec<bool>> = Vec::new();
        for (k, &(a, b, _)) in self.edges.iter().enumerate() {
            let slot = used.iter().position(|u| !u[a] && !u[b]);
            let c = slot.unwrap_or_else(|| {
                classes.push(Vec::new());
                used.push(vec![false; self.n]);
                classes.len() - 1
            });
            classes[c].push(k);
            used[c][a] = true;
            used[c][b] = true;
        }
        classes
    }
}

/// Edge weight distribution: uniform on `[low, high]`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightRange {
    pub low: f64,
    pub high: f64,
}

impl Default for WeightRange {
    fn default() -> Self {
        Self {
            low: 0.0,
            high: 1.0,
        }
    }
}

/// Erdős–Rényi graph with independent uniform edge weights.
pub fn sample_er_graph<R: Rng + ?Sized>(
    n: usize,
    edge_probability: f64,
    weights: WeightRange,
    rng: &mut R,
) -> Result<WeightedGraph> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "graph needs at least 2 vertices, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(Error::invalid(format!(
            "edge probability {edge_probability} outside [0, 1]"
        )));
    }
    if !(weights.low <= weights.high) || !weights.low.is_finite() || !weights.high.is_finite() {
        return Err(Error::invalid(
            "weight range must be finite with low <= high",
        ));
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(edge_probability) {
                let w = weights.low + (weights.high - weights.low) * rng.gen::<f64>();
                edges.push((a, b, w));
            }
        }
    }
    WeightedGraph::new(n, edges)
}
