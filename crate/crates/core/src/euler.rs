//! Euler characteristic bounds for the generic arc of a wedge.
//!
//! The limit divisor is `Y_0 = Z_0 + Σ a_i E_i` with `Z_0` meeting the
//! attaching component `E_0` transversely. The estimate splits into three
//! pieces (disks over `E_0`, balls around the components, tubes around the
//! intersections) whose sum must equal `Σ a_i (2 − 2g_i + E_i²)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DualGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerInput {
    graph: DualGraph,
    a: Vec<u64>,
    attach: usize,
}

impl EulerInput {
    pub fn new(graph: DualGraph, a: Vec<u64>, attach: VertexId) -> Result<Self> {
        if a.len() != graph.len() {
            return Err(Error::Dimension {
                expected: graph.len(),
                got: a.len(),
            });
        }
        let attach = graph.position(attach)?;
        Ok(EulerInput { graph, a, attach })
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.a
    }

    pub fn attach(&self) -> VertexId {
        self.graph.vertices()[self.attach].id
    }

    fn attach_coefficient(&self) -> i128 {
        self.a[self.attach] as i128
    }
}

fn narrow(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::InvalidInput("bound does not fit in 64 bits".into()))
}

/// Intersection numbers `E_i · E_k` as a dense integer matrix.
fn pairing(g: &DualGraph) -> Vec<Vec<i128>> {
    let adj = g.adjacency();
    g.vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            (0..g.len())
                .map(|k| if k == i { v.self_int as i128 } else { adj[i][k] as i128 })
                .collect()
        })
        .collect()
}

/// `a_0 − 1`, the bound on the disks over the attaching component.
pub fn b0_bound(input: &EulerInput) -> Result<i64> {
    match input.attach_coefficient() {
        0 => Err(Error::NoIndeterminacy),
        a0 => narrow(a0 - 1),
    }
}

/// `Y_0 · E = 1 + Σ_{i,k} a_i E_i·E_k`, diagonal included.
pub fn balls_bound(input: &EulerInput) -> Result<i64> {
    let m = pairing(&input.graph);
    let sum: i128 = input
        .a
        .iter()
        .zip(&m)
        .map(|(&ai, row)| ai as i128 * row.iter().sum::<i128>())
        .sum();
    narrow(1 + sum)
}

/// Tube contributions, off-diagonal intersections only; the attaching
/// component loses one more for the disk already counted.
pub fn tubes_bound(input: &EulerInput) -> Result<i64> {
    let m = pairing(&input.graph);
    let mut total: i128 = 0;
    for (i, v) in input.graph.vertices().iter().enumerate() {
        let off: i128 = (0..m.len()).filter(|&k| k != i).map(|k| m[i][k]).sum();
        let mut term = 2 - 2 * v.genus as i128 - off;
        if i == input.attach {
            term -= 1;
        }
        total += input.a[i] as i128 * term;
    }
    narrow(total)
}

/// `Σ a_i (2 − 2g_i + E_i²)`, cross-checked against the three partial
/// bounds.
pub fn final_bound(input: &EulerInput) -> Result<i64> {
    let b0 = b0_bound(input)?;
    let direct = direct_sum(input)?;
    let assembled = b0 as i128 + balls_bound(input)? as i128 + tubes_bound(input)? as i128;
    if assembled != direct as i128 {
        return Err(Error::Invariant(format!(
            "Euler bound assembles to {assembled} but the closed form gives {direct}"
        )));
    }
    Ok(direct)
}

/// The closed form alone, without the `a_0 ≥ 1` guard.
pub fn direct_sum(input: &EulerInput) -> Result<i64> {
    let total: i128 = input
        .graph
        .vertices()
        .iter()
        .zip(&input.a)
        .map(|(v, &ai)| ai as i128 * (2 - 2 * v.genus as i128 + v.self_int as i128))
        .sum();
    narrow(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub b0: i64,
    pub balls: i64,
    pub tubes: i64,
    pub bound: i64,
    /// The generic arc cannot have a disk as normalization.
    pub contradicts_disk: bool,
    /// Rational `−1` curves: the resolution is not minimal there.
    pub minimality_flags: Vec<VertexId>,
    /// `contradicts_disk` with no minimality flag raised.
    pub certified: bool,
}

pub fn contradiction_certificate(input: &EulerInput) -> Result<Certificate> {
    let bound = final_bound(input)?;
    let minimality_flags: Vec<VertexId> = input
        .graph
        .vertices()
        .iter()
        .filter(|v| v.genus == 0 && v.self_int == -1)
        .map(|v| v.id)
        .collect();
    let contradicts_disk = bound < 1;
    Ok(Certificate {
        b0: b0_bound(input)?,
        balls: balls_bound(input)?,
        tubes: tubes_bound(input)?,
        bound,
        contradicts_disk,
        certified: contradicts_disk && minimality_flags.is_empty(),
        minimality_flags,
    })
}
