//! Canonical forms for decorated dual graphs.
//!
//! Color refinement seeded with `(self_int, genus, labels, degree)`, then
//! individualization of the first non-singleton cell with backtracking. Among
//! all discrete colorings reached, the one whose adjacency encoding is
//! lexicographically smallest defines the key. Two prunings keep the search
//! small on symmetric graphs:
//!
//! * twins (vertices whose transposition is an automorphism) in the target
//!   cell are explored once;
//! * automorphisms found when two leaves give the same encoding are kept,
//!   and children in the same orbit under those fixing the current prefix
//!   are skipped.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::DualGraph;

/// Byte-exact canonical serialization of a decorated graph. Equal keys if
/// and only if the graphs are isomorphic (weights, genera, labels and edge
/// multiplicities preserved).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        // built from serde_json output
        std::str::from_utf8(&self.0).expect("canonical key is utf-8")
    }

    pub fn from_string(s: String) -> Self {
        CanonicalKey(s.into_bytes())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CanonicalKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CanonicalKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(CanonicalKey::from_string(String::deserialize(d)?))
    }
}

type VertexInvariant = (i64, u32, Vec<String>);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
struct Encoding {
    v: Vec<VertexInvariant>,
    /// `(i, j, multiplicity)` with `i < j`, sorted.
    e: Vec<(usize, usize, u32)>,
}

struct Search<'a> {
    inv: Vec<VertexInvariant>,
    adj: &'a [Vec<u32>],
    best: Option<(Encoding, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

pub fn canonical_key(g: &DualGraph) -> CanonicalKey {
    let adj = g.adjacency();
    let inv: Vec<VertexInvariant> = g
        .vertices()
        .iter()
        .map(|v| (v.self_int, v.genus, v.labels.iter().cloned().collect()))
        .collect();
    let seeds: Vec<(VertexInvariant, u32)> = (0..g.len())
        .map(|i| (inv[i].clone(), adj[i].iter().sum()))
        .collect();
    let mut search = Search {
        inv,
        adj: &adj,
        best: None,
        automorphisms: Vec::new(),
    };
    let colors = search.refine(rank(&seeds));
    search.descend(colors, &mut Vec::new());
    let (enc, _) = search.best.expect("search visits at least one leaf");
    CanonicalKey(serde_json::to_vec(&enc).expect("encoding serializes"))
}

/// Dense ranks `0..k` of the values, in sorted order.
fn rank<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = values.to_vec();
    sorted.sort();
    sorted.dedup();
    values
        .iter()
        .map(|v| sorted.binary_search(v).expect("value present"))
        .collect()
}

fn count_cells(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

impl Search<'_> {
    fn n(&self) -> usize {
        self.inv.len()
    }

    fn refine(&self, mut colors: Vec<usize>) -> Vec<usize> {
        loop {
            let sigs: Vec<(usize, Vec<(usize, u32)>)> = (0..self.n())
                .map(|v| {
                    let mut nb: Vec<(usize, u32)> = self.adj[v]
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| m > 0)
                        .map(|(w, &m)| (colors[w], m))
                        .collect();
                    nb.sort();
                    (colors[v], nb)
                })
                .collect();
            let next = rank(&sigs);
            if count_cells(&next) == count_cells(&colors) {
                return next;
            }
            colors = next;
        }
    }

    fn individualize(&self, colors: &[usize], v: usize) -> Vec<usize> {
        let split: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(u, &c)| if u == v { 2 * c } else { 2 * c + 1 })
            .collect();
        self.refine(rank(&split))
    }

    fn is_twin(&self, u: usize, v: usize) -> bool {
        self.inv[u] == self.inv[v]
            && (0..self.n()).all(|w| w == u || w == v || self.adj[u][w] == self.adj[v][w])
    }

    fn encode(&self, order: &[usize]) -> Encoding {
        let n = self.n();
        let v = order.iter().map(|&x| self.inv[x].clone()).collect();
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let m = self.adj[order[i]][order[j]];
                if m > 0 {
                    e.push((i, j, m));
                }
            }
        }
        Encoding { v, e }
    }

    fn leaf(&mut self, colors: &[usize]) {
        let mut order = vec![0; self.n()];
        for (v, &c) in colors.iter().enumerate() {
            order[c] = v;
        }
        let enc = self.encode(&order);
        match &self.best {
            None => self.best = Some((enc, order)),
            Some((best, best_order)) => match enc.cmp(best) {
                std::cmp::Ordering::Less => self.best = Some((enc, order)),
                std::cmp::Ordering::Equal => {
                    let mut gamma = vec![0; self.n()];
                    for (k, &b) in best_order.iter().enumerate() {
                        gamma[b] = order[k];
                    }
                    if gamma.iter().enumerate().any(|(i, &g)| i != g) {
                        self.automorphisms.push(gamma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    /// Orbit representatives under stored automorphisms fixing `prefix`.
    fn orbit_roots(&self, prefix: &[usize]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let next = p[c];
                p[c] = r;
                c = next;
            }
            r
        }
        for gamma in &self.automorphisms {
            if prefix.iter().any(|&p| gamma[p] != p) {
                continue;
            }
            for (x, &y) in gamma.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                }
            }
        }
        (0..self.n()).map(|x| find(&mut parent, x)).collect()
    }

    fn descend(&mut self, colors: Vec<usize>, prefix: &mut Vec<usize>) {
        let n = self.n();
        if count_cells(&colors) == n {
            self.leaf(&colors);
            return;
        }
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &colors {
            *sizes.entry(c).or_default() += 1;
        }
        let target = sizes
            .iter()
            .find(|(_, &s)| s > 1)
            .map(|(&c, _)| c)
            .expect("non-discrete coloring has a cell of size > 1");
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if explored.iter().any(|&u| self.is_twin(u, v)) {
                continue;
            }
            let roots = self.orbit_roots(prefix);
            if explored.iter().any(|&u| roots[u] == roots[v]) {
                continue;
            }
            let child = self.individualize(&colors, v);
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Vertex, VertexId};

    fn chain(ids: &[u32]) -> DualGraph {
        let verts: Vec<(u32, i64)> = ids.iter().map(|&i| (i, -2)).collect();
        let edges: Vec<(u32, u32)> = ids.windows(2).map(|w| (w[0], w[1])).collect();
        DualGraph::from_weights(&verts, &edges).unwrap()
    }

    #[test]
    fn relabeling_invariance() {
        assert_eq!(canonical_key(&chain(&[1, 2])), canonical_key(&chain(&[7, 3])));
    }

    #[test]
    fn chain_vs_star() {
        let star =
            DualGraph::from_weights(&[(0, -2), (1, -2), (2, -2), (3, -2)], &[(0, 1), (0, 2), (0, 3)])
                .unwrap();
        let chain4 = chain(&[0, 1, 2, 3]);
        let chain3 = chain(&[0, 1, 2]);
        assert_ne!(canonical_key(&star), canonical_key(&chain4));
        assert_ne!(canonical_key(&chain3), canonical_key(&chain4));
    }

    #[test]
    fn label_position_matters() {
        let mut end = chain(&[0, 1, 2]);
        end.add_label(VertexId(0), "E").unwrap();
        let mut other_end = chain(&[0, 1, 2]);
        other_end.add_label(VertexId(2), "E").unwrap();
        let mut middle = chain(&[0, 1, 2]);
        middle.add_label(VertexId(1), "E").unwrap();
        assert_eq!(canonical_key(&end), canonical_key(&other_end));
        assert_ne!(canonical_key(&end), canonical_key(&middle));
    }

    #[test]
    fn weights_and_genus_matter() {
        let a = DualGraph::from_weights(&[(0, -2), (1, -3)], &[(0, 1)]).unwrap();
        let b = DualGraph::from_weights(&[(0, -3), (1, -3)], &[(0, 1)]).unwrap();
        assert_ne!(canonical_key(&a), canonical_key(&b));
        let g = DualGraph::new(
            vec![Vertex::new(0, -2).with_genus(1), Vertex::new(1, -3)],
            vec![(VertexId(0), VertexId(1))],
        )
        .unwrap();
        assert_ne!(canonical_key(&a), canonical_key(&g));
    }

    #[test]
    fn multiplicity_matters() {
        let single = DualGraph::from_weights(&[(0, -3), (1, -3)], &[(0, 1)]).unwrap();
        let double = DualGraph::from_weights(&[(0, -3), (1, -3)], &[(0, 1), (0, 1)]).unwrap();
        assert_ne!(canonical_key(&single), canonical_key(&double));
    }

    #[test]
    fn key_is_compact_json() {
        let k = canonical_key(&chain(&[5, 9]));
        assert_eq!(k.as_str(), r#"{"v":[[-2,0,[]],[-2,0,[]]],"e":[[0,1,1]]}"#);
    }

    #[test]
    fn large_star_finishes() {
        let mut verts = vec![(0, -2)];
        let mut edges = vec![];
        for i in 1..30 {
            verts.push((i, -2));
            edges.push((0, i));
        }
        let g = DualGraph::from_weights(&verts, &edges).unwrap();
        let _ = canonical_key(&g);
    }

    #[test]
    fn cycles_distinguished() {
        // hexagon vs two triangles: same degree sequence, refinement alone stalls
        let hex = DualGraph::from_weights(
            &(0..6).map(|i| (i, -2)).collect::<Vec<_>>(),
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)],
        )
        .unwrap();
        let tri = DualGraph::from_weights(
            &(0..6).map(|i| (i, -2)).collect::<Vec<_>>(),
            &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)],
        )
        .unwrap();
        assert_ne!(canonical_key(&hex), canonical_key(&tri));
        let hex2 = DualGraph::from_weights(
            &(0..6).map(|i| (i, -2)).collect::<Vec<_>>(),
            &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 5), (5, 0)],
        )
        .unwrap();
        assert_eq!(canonical_key(&hex), canonical_key(&hex2));
    }
}
