use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::graph::WeightedGraph;
use crate::circuit::{Circuit, Gate, Layer, LayerKind, Zxzxz};
use crate::clifford::CliffordId;
use crate::error::{Error, Result};
use crate::linalg::{rx, rz};

/// Cost angles `α` and driver angles `β`, one of each per layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

fn in_range(a: f64) -> bool {
    a > -PI && a <= PI
}

impl QaoaParams {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.len() != beta.len() {
            return Err(Error::invalid(format!(
                "{} cost angles but {} driver angles",
                alpha.len(),
                beta.len()
            )));
        }
        if alpha.is_empty() {
            return Err(Error::invalid("QAOA needs at least one layer"));
        }
        if !alpha.iter().chain(&beta).all(|&a| in_range(a)) {
            return Err(Error::invalid("QAOA angles must lie in (-pi, pi]"));
        }
        Ok(Self { alpha, beta })
    }

    /// Independent angles uniform on `(−π, π]`.
    pub fn random<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Result<Self> {
        let mut draw = || PI - 2.0 * PI * rng.gen::<f64>();
        let alpha = (0..p).map(|_| draw()).collect();
        let beta = (0..p).map(|_| draw()).collect();
        Self::new(alpha, beta)
    }

    pub fn layers(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }
}

/// MaxCut QAOA circuit, already alternating between one- and two-qubit
/// layers.
///
/// The initial layer puts every qubit in `|+⟩` with a Hadamard. Each edge
/// term `exp(−i α w Z_i Z_j)` becomes `CNOT(i,j)·Rz(2αw)_j·CNOT(i,j)`, with
/// edges packed into parallel layers by greedy edge coloring; successive
/// color classes are separated by an empty one-qubit layer. The driver is
/// `Rx(2β)` on every qubit. Empty two-qubit layers are inserted wherever two
/// one-qubit layers would otherwise be adjacent.
pub fn qaoa_circuit(g: &WeightedGraph, params: &QaoaParams) -> Result<Circuit> {
    let n = g.num_vertices();
    let mut layers = vec![Layer::local(
        n,
        (0..n)
            .map(|q| Gate::clifford(q, CliffordId::hadamard()))
            .collect(),
    )?];
    let classes = g.edge_coloring();
    for (&alpha, &beta) in params.alpha.iter().zip(&params.beta) {
        if classes.is_empty() {
            layers.push(Layer::empty(n, LayerKind::Entangling));
        }
        for (k, class) in classes.iter().enumerate() {
            if k > 0 {
                layers.push(Layer::empty(n, LayerKind::Local));
            }
            let cnots: Vec<Gate> = class
                .iter()
                .map(|&e| Gate::cnot(g.edges()[e].0, g.edges()[e].1))
                .collect();
            let rotations = class
                .iter()
                .map(|&e| {
                    let (_, j, w) = g.edges()[e];
                    Gate::U {
                        qubit: j,
                        angles: Zxzxz::from_unitary(&rz(2.0 * alpha * w)),
                    }
                })
                .collect();
            layers.push(Layer::entangling(n, cnots.clone())?);
            layers.push(Layer::local(n, rotations)?);
            layers.push(Layer::entangling(n, cnots)?);
        }
        let driver = Zxzxz::from_unitary(&rx(2.0 * beta));
        layers.push(Layer::local(
            n,
            (0..n)
                .map(|q| Gate::U {
                    qubit: q,
                    angles: driver,
                })
                .collect(),
        )?);
    }
    Circuit::from_layers(n, layers)
}
