//! Dual graphs of exceptional divisors and their intersection lattices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One exceptional component: its self-intersection, genus and labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub self_int: i64,
    #[serde(default)]
    pub genus: u32,
    #[serde(default)]
    pub labels: BTreeSet<String>,
}

impl Vertex {
    pub fn new(id: u32, self_int: i64) -> Self {
        Vertex {
            id: VertexId(id),
            self_int,
            genus: 0,
            labels: BTreeSet::new(),
        }
    }

    pub fn with_genus(mut self, genus: u32) -> Self {
        self.genus = genus;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.labels.insert(label.into());
        self
    }
}

/// Weighted, genus-decorated multigraph. Edge multiplicity is the
/// intersection number of the two components.
///
/// Vertex order is significant: it is the row order of the intersection
/// matrix and of every coefficient vector indexed by the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    vertices: Vec<Vertex>,
    edges: Vec<(VertexId, VertexId)>,
    index: BTreeMap<VertexId, usize>,
}

impl DualGraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id, i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {}", v.id)));
            }
        }
        for (k, &(a, b)) in edges.iter().enumerate() {
            for end in [a, b] {
                if !index.contains_key(&end) {
                    return Err(Error::InvalidGraph(format!(
                        "edge {k} ({a}, {b}) references unknown vertex {end}"
                    )));
                }
            }
            if a == b {
                return Err(Error::InvalidGraph(format!(
                    "edge {k} is a loop at vertex {a}; components must be smooth"
                )));
            }
        }
        Ok(DualGraph {
            vertices,
            edges,
            index,
        })
    }

    /// Builds a graph from `(id, self_int)` pairs, genus 0, no labels.
    pub fn from_weights(weights: &[(u32, i64)], edges: &[(u32, u32)]) -> Result<Self> {
        Self::new(
            weights.iter().map(|&(id, w)| Vertex::new(id, w)).collect(),
            edges
                .iter()
                .map(|&(a, b)| (VertexId(a), VertexId(b)))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn position(&self, id: VertexId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::UnknownVertex(id.0))
    }

    pub fn vertex(&self, id: VertexId) -> Result<&Vertex> {
        Ok(&self.vertices[self.position(id)?])
    }

    pub fn add_label(&mut self, id: VertexId, label: &str) -> Result<()> {
        let i = self.position(id)?;
        self.vertices[i].labels.insert(label.to_string());
        Ok(())
    }

    /// Edge multiplicities by vertex position.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut adj = vec![vec![0u32; n]; n];
        for &(a, b) in &self.edges {
            let (i, j) = (self.index[&a], self.index[&b]);
            adj[i][j] += 1;
            adj[j][i] += 1;
        }
        adj
    }

    pub fn degree(&self, pos: usize) -> u32 {
        self.adjacency()[pos].iter().sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for (w, &m) in adj[v].iter().enumerate() {
                if m > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Intersection matrix: self-intersections on the diagonal, edge
    /// multiplicities off it. Rows follow vertex order.
    pub fn intersection_matrix(&self) -> ExactMatrix {
        let n = self.len();
        let adj = self.adjacency();
        let mut m = ExactMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = if i == j {
                    self.vertices[i].self_int
                } else {
                    adj[i][j] as i64
                };
                m.set(i, j, int(v));
            }
        }
        m
    }

    /// Graphviz rendering for external viewers.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dual {\n");
        for v in &self.vertices {
            let mut label = format!("{}", v.self_int);
            if v.genus > 0 {
                label.push_str(&format!(" [g={}]", v.genus));
            }
            for l in &v.labels {
                label.push_str(&format!(" {l}"));
            }
            s.push_str(&format!("  v{} [label=\"{}\"];\n", v.id, label));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!("  v{a} -- v{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn intersection_matrix(g: &DualGraph) -> ExactMatrix {
    g.intersection_matrix()
}

/// `(-1)^k Δ_k > 0` for every leading principal minor.
pub fn is_negative_definite(m: &ExactMatrix) -> Result<bool> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(m.leading_minors()
        .iter()
        .enumerate()
        .all(|(k, d)| if k % 2 == 0 { d.is_negative() } else { d.is_positive() }))
}

pub fn inverse_exact(m: &ExactMatrix) -> Result<ExactMatrix> {
    m.inverse()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffendingEntry {
    pub row: usize,
    pub col: usize,
    #[serde(with = "crate::rational::serde_rational")]
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseSignReport {
    pub all_nonpositive: bool,
    /// Every entry is `< 0`, not just `≤ 0`.
    pub all_negative: bool,
    pub offending_entries: Vec<OffendingEntry>,
    pub inverse: ExactMatrix,
}

pub fn check_inverse_nonpositive(m: &ExactMatrix) -> Result<InverseSignReport> {
    let inverse = m.inverse()?;
    let offending_entries: Vec<_> = inverse
        .entries()
        .filter(|(_, _, v)| v.is_positive())
        .map(|(row, col, v)| OffendingEntry {
            row,
            col,
            value: v.clone(),
        })
        .collect();
    let all_negative = inverse.entries().all(|(_, _, v)| v.is_negative());
    Ok(InverseSignReport {
        all_nonpositive: offending_entries.is_empty(),
        all_negative,
        offending_entries,
        inverse,
    })
}

/// Checks an intersection matrix: symmetric, integral, non-negative off
/// the diagonal.
pub fn check_intersection_form(m: &ExactMatrix) -> Result<()> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if !m.is_integral() {
        return Err(Error::InvalidInput("intersection matrix must be integral".into()));
    }
    for (i, j, v) in m.entries() {
        if i != j && v.is_negative() {
            return Err(Error::InvalidInput(format!(
                "off-diagonal entry ({i}, {j}) is negative"
            )));
        }
    }
    Ok(())
}

impl InverseSignReport {
    pub fn has_zero_entry(&self) -> bool {
        self.inverse.entries().any(|(_, _, v)| v.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn a2() -> DualGraph {
        DualGraph::from_weights(&[(0, -2), (1, -2)], &[(0, 1)]).unwrap()
    }

    #[test]
    fn intersection_matrix_examples() {
        let one = DualGraph::from_weights(&[(0, -2)], &[]).unwrap();
        assert_eq!(one.intersection_matrix(), ExactMatrix::from_i64_rows(&[[-2]]));
        assert_eq!(
            a2().intersection_matrix(),
            ExactMatrix::from_i64_rows(&[[-2, 1], [1, -2]])
        );
        let split = DualGraph::from_weights(&[(0, -3), (1, -1)], &[]).unwrap();
        assert_eq!(
            split.intersection_matrix(),
            ExactMatrix::from_i64_rows(&[[-3, 0], [0, -1]])
        );
    }

    #[test]
    fn multi_edges_count() {
        let g = DualGraph::from_weights(&[(0, -3), (1, -3)], &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(*g.intersection_matrix().get(0, 1), int(2));
    }

    #[test]
    fn construction_rejects_bad_graphs() {
        assert!(matches!(
            DualGraph::from_weights(&[(0, -2)], &[(0, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            DualGraph::from_weights(&[(0, -2)], &[(0, 4)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            DualGraph::from_weights(&[(0, -2), (0, -3)], &[]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn negative_definite_examples() {
        assert!(is_negative_definite(&ExactMatrix::from_i64_rows(&[[-1]])).unwrap());
        assert!(is_negative_definite(&ExactMatrix::from_i64_rows(&[[-2, 1], [1, -2]])).unwrap());
        assert!(!is_negative_definite(&ExactMatrix::from_i64_rows(&[[0]])).unwrap());
        assert!(!is_negative_definite(&ExactMatrix::from_i64_rows(&[[-1, 2], [2, -1]])).unwrap());
        assert_eq!(
            is_negative_definite(&ExactMatrix::from_i64_rows(&[[-2, 1], [0, -2]])),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn inverse_sign_examples() {
        let r = check_inverse_nonpositive(&a2().intersection_matrix()).unwrap();
        assert!(r.all_nonpositive && r.all_negative);
        assert_eq!(*r.inverse.get(0, 1), ratio(-1, 3));

        let split = ExactMatrix::from_i64_rows(&[[-2, 0], [0, -2]]);
        let r = check_inverse_nonpositive(&split).unwrap();
        assert!(r.all_nonpositive && !r.all_negative && r.has_zero_entry());

        let r = check_inverse_nonpositive(&ExactMatrix::from_i64_rows(&[[1]])).unwrap();
        assert!(!r.all_nonpositive);
        assert_eq!(
            r.offending_entries,
            vec![OffendingEntry { row: 0, col: 0, value: int(1) }]
        );

        assert_eq!(
            check_inverse_nonpositive(&ExactMatrix::from_i64_rows(&[[0]])),
            Err(Error::Singular)
        );
    }

    #[test]
    fn intersection_form_checks() {
        assert!(check_intersection_form(&ExactMatrix::from_i64_rows(&[[-2, 1], [1, -2]])).is_ok());
        assert!(check_intersection_form(&ExactMatrix::from_i64_rows(&[[-2, -1], [-1, -2]])).is_err());
    }
}
