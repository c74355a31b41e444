//! Built-in graphs and clusters.
//!
//! ADE dual graphs use ids `0..n` with all weights −2 and genus 0. For
//! `D_n` the fork sits at vertex 1 (the branch vertex `n-1` hangs off it),
//! for `E_n` the extra vertex `n-1` hangs off vertex 2 of the long chain.

use crate::cluster::{BlowupCluster, ClusterPoint, Tangent};
use crate::error::{Error, Result};
use crate::graph::DualGraph;
use crate::rational::int;

pub fn a_n(n: u32) -> Result<DualGraph> {
    if !(1..=10).contains(&n) {
        return Err(Error::InvalidInput(format!("A_{n}: expected 1 <= n <= 10")));
    }
    let verts: Vec<(u32, i64)> = (0..n).map(|i| (i, -2)).collect();
    let edges: Vec<(u32, u32)> = (1..n).map(|i| (i - 1, i)).collect();
    DualGraph::from_weights(&verts, &edges)
}

pub fn d_n(n: u32) -> Result<DualGraph> {
    if !(4..=10).contains(&n) {
        return Err(Error::InvalidInput(format!("D_{n}: expected 4 <= n <= 10")));
    }
    let verts: Vec<(u32, i64)> = (0..n).map(|i| (i, -2)).collect();
    let mut edges: Vec<(u32, u32)> = (1..n - 1).map(|i| (i - 1, i)).collect();
    edges.push((1, n - 1));
    DualGraph::from_weights(&verts, &edges)
}

pub fn e_n(n: u32) -> Result<DualGraph> {
    if !(6..=8).contains(&n) {
        return Err(Error::InvalidInput(format!("E_{n}: expected 6 <= n <= 8")));
    }
    let verts: Vec<(u32, i64)> = (0..n).map(|i| (i, -2)).collect();
    let mut edges: Vec<(u32, u32)> = (1..n - 1).map(|i| (i - 1, i)).collect();
    edges.push((2, n - 1));
    DualGraph::from_weights(&verts, &edges)
}

/// Every ADE fixture, with its name.
pub fn ade_catalog() -> Vec<(String, DualGraph)> {
    let mut out = Vec::new();
    for n in 1..=10 {
        out.push((format!("A{n}"), a_n(n).unwrap()));
    }
    for n in 4..=10 {
        out.push((format!("D{n}"), d_n(n).unwrap()));
    }
    for n in 6..=8 {
        out.push((format!("E{n}"), e_n(n).unwrap()));
    }
    out
}

/// Looks up `A3`, `D5`, `E8`, ... (case-insensitive, optional `_`).
pub fn graph_by_name(name: &str) -> Option<DualGraph> {
    let name = name.trim().to_ascii_uppercase().replace('_', "");
    let (kind, num) = name.split_at(1.min(name.len()));
    let n: u32 = num.parse().ok()?;
    match kind {
        "A" => a_n(n).ok(),
        "D" => d_n(n).ok(),
        "E" => e_n(n).ok(),
        _ => None,
    }
}

fn root() -> ClusterPoint {
    ClusterPoint::root()
}

/// `{p_0}`
pub fn single_point() -> BlowupCluster {
    BlowupCluster::new(vec![root()]).unwrap()
}

/// Free points each on the previous exceptional component, tangent 0 on F_0
/// and 1 further up.
pub fn free_chain(len: usize) -> BlowupCluster {
    let mut pts = vec![root()];
    for i in 1..len {
        let c = if i == 1 { 0 } else { 1 };
        pts.push(ClusterPoint::free(i - 1, Some(Tangent::Finite(int(c)))));
    }
    BlowupCluster::new(pts).unwrap()
}

/// `{p_0; p_1 free on F_0; p_2 = F_0 ∩ F_1}`
pub fn satellite_triple() -> BlowupCluster {
    BlowupCluster::new(vec![
        root(),
        ClusterPoint::free(0, Some(Tangent::Finite(int(0)))),
        ClusterPoint::satellite(1, 0),
    ])
    .unwrap()
}

/// `{p_0; p_1, p_2 free on F_0 in directions 0 and ∞}`
pub fn two_directions() -> BlowupCluster {
    BlowupCluster::new(vec![
        root(),
        ClusterPoint::free(0, Some(Tangent::Finite(int(0)))),
        ClusterPoint::free(0, Some(Tangent::Infinity)),
    ])
    .unwrap()
}

/// [`two_directions`] plus `p_3` free on F_1.
pub fn two_directions_plus() -> BlowupCluster {
    BlowupCluster::new(vec![
        root(),
        ClusterPoint::free(0, Some(Tangent::Finite(int(0)))),
        ClusterPoint::free(0, Some(Tangent::Infinity)),
        ClusterPoint::free(1, Some(Tangent::Finite(int(1)))),
    ])
    .unwrap()
}

pub fn cluster_by_name(name: &str) -> Option<BlowupCluster> {
    Some(match name.trim().to_ascii_lowercase().as_str() {
        "point" | "single" => single_point(),
        "chain2" => free_chain(2),
        "chain3" => free_chain(3),
        "chain4" => free_chain(4),
        "satellite3" | "satellite_triple" => satellite_triple(),
        "two_directions" | "twodir" => two_directions(),
        "two_directions_plus" => two_directions_plus(),
        _ => return None,
    })
}

pub const CLUSTER_NAMES: &[&str] = &[
    "point",
    "chain2",
    "chain3",
    "chain4",
    "satellite3",
    "two_directions",
    "two_directions_plus",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_negative_definite;

    #[test]
    fn ade_are_negative_definite_with_expected_det() {
        for (name, g) in ade_catalog() {
            let m = g.intersection_matrix();
            assert!(is_negative_definite(&m).unwrap(), "{name}");
            let n = g.len() as i64;
            let abs_det = match &name[..1] {
                "A" => n + 1,
                "D" => 4,
                _ => 9 - n,
            };
            let expected = if n % 2 == 0 { abs_det } else { -abs_det };
            assert_eq!(m.determinant(), int(expected), "{name}");
        }
    }

    #[test]
    fn names_resolve() {
        assert_eq!(graph_by_name("e8").unwrap().len(), 8);
        assert_eq!(graph_by_name("D_4").unwrap().len(), 4);
        assert!(graph_by_name("E9").is_none());
        assert!(graph_by_name("").is_none());
        for n in CLUSTER_NAMES {
            assert!(cluster_by_name(n).is_some(), "{n}");
        }
    }
}
