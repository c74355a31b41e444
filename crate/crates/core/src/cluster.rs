//! Clusters of infinitely near points over a smooth surface point.
//!
//! Point `p_i` is blown up at step `i`, creating the exceptional component
//! `F_i`. Every point after `p_0` lies on `F_parent` and, for satellite
//! points, also on `F_satellite_of`. Those one or two components are the
//! points `p_i` is *proximate* to.
//!
//! Besides the combinatorics every point carries a local coordinate frame
//! (which exceptional components are the coordinate axes there). Frames
//! are what the polynomial computations in [`crate::valuation`] need, and
//! they also catch tangent choices that would secretly put a free point on
//! a second component.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DualGraph, Vertex, VertexId};
use crate::matrix::ExactMatrix;
use crate::rational::{format_rational, int, parse_rational, Rational};

pub const MAX_POINTS: usize = 24;

/// Direction of a free point on its parent component.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tangent {
    Finite(Rational),
    Infinity,
}

impl Tangent {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" | "infinity" => Ok(Tangent::Infinity),
            other => parse_rational(other).map(Tangent::Finite),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Tangent::Finite(c) if c.is_zero())
    }
}

impl fmt::Display for Tangent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tangent::Finite(c) => f.write_str(&format_rational(c)),
            Tangent::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Tangent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tangent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Tangent::parse(&s).map_err(D::Error::custom),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(|v| Tangent::Finite(int(v)))
                .ok_or_else(|| D::Error::custom(format!("bad tangent {n}"))),
            other => Err(D::Error::custom(format!("bad tangent {other}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterPoint {
    pub parent: Option<usize>,
    #[serde(default)]
    pub satellite_of: Option<usize>,
    #[serde(default)]
    pub tangent: Option<Tangent>,
}

impl ClusterPoint {
    pub fn root() -> Self {
        ClusterPoint {
            parent: None,
            satellite_of: None,
            tangent: None,
        }
    }

    pub fn free(parent: usize, tangent: Option<Tangent>) -> Self {
        ClusterPoint {
            parent: Some(parent),
            satellite_of: None,
            tangent,
        }
    }

    pub fn satellite(parent: usize, other: usize) -> Self {
        ClusterPoint {
            parent: Some(parent),
            satellite_of: Some(other),
            tangent: None,
        }
    }

    pub fn is_satellite(&self) -> bool {
        self.satellite_of.is_some()
    }

    /// The components this point lies on (the points it is proximate to).
    pub fn proximate_to(&self) -> impl Iterator<Item = usize> + '_ {
        self.parent.into_iter().chain(self.satellite_of)
    }
}

/// Local frame at a point before it is blown up: which exceptional
/// components are the axes `{x = 0}` and `{y = 0}`.
///
/// After blowing up a point, every later point in its first neighbourhood
/// gets the frame `x = F_home`. Free points use the chart
/// `(x, y) = (X, X(Y + c))` for finite tangent `c` and `(x, y) = (XY, X)`
/// for `c = ∞`; satellite points use `c = 0` when the second component is
/// the `{y = 0}` axis of the home frame and the `∞` chart when it is the
/// `{x = 0}` axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub x_axis: Option<usize>,
    pub y_axis: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// `(x, y) = (X, X(Y + c))`
    Finite,
    /// `(x, y) = (XY, X)`
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupCluster {
    points: Vec<ClusterPoint>,
    frames: Vec<Frame>,
}

impl BlowupCluster {
    pub fn new(points: Vec<ClusterPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidCluster("a cluster needs at least p_0".into()));
        }
        if points.len() > MAX_POINTS {
            return Err(Error::InvalidCluster(format!(
                "{} points exceeds the cap of {MAX_POINTS}",
                points.len()
            )));
        }
        if points[0].parent.is_some() || points[0].satellite_of.is_some() {
            return Err(Error::InvalidCluster("p_0 must have no parent".into()));
        }
        for (i, p) in points.iter().enumerate().skip(1) {
            let parent = p
                .parent
                .ok_or_else(|| Error::InvalidCluster(format!("p_{i} has no parent")))?;
            if parent >= i {
                return Err(Error::InvalidCluster(format!(
                    "p_{i}: parent {parent} must be smaller than {i}"
                )));
            }
            if let Some(s) = p.satellite_of {
                if s >= i {
                    return Err(Error::InvalidCluster(format!(
                        "p_{i}: satellite_of {s} must be smaller than {i}"
                    )));
                }
                if s == parent {
                    return Err(Error::InvalidCluster(format!(
                        "p_{i}: satellite_of equals parent"
                    )));
                }
                if p.tangent.is_some() {
                    return Err(Error::InvalidCluster(format!(
                        "p_{i}: satellite points carry no tangent"
                    )));
                }
            }
        }
        let frames = compute_frames(&points)?;
        let cluster = BlowupCluster { points, frames };
        // adjacency of satellite references is checked by simulating
        cluster.simulate()?;
        Ok(cluster)
    }

    pub fn points(&self) -> &[ClusterPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn frame(&self, i: usize) -> Frame {
        self.frames[i]
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    /// Is `p_i` proximate to `p_j`?
    pub fn is_proximate(&self, i: usize, j: usize) -> bool {
        self.points[i].proximate_to().any(|k| k == j)
    }

    /// The point whose first neighbourhood contains `p_i`: the later of
    /// the two components a satellite point lies on.
    pub fn home(&self, i: usize) -> Option<usize> {
        let p = &self.points[i];
        p.parent.map(|par| p.satellite_of.map_or(par, |s| s.max(par)))
    }

    /// Chart of the home blow-up in which `p_i` sits at the origin, with the
    /// tangent used in the finite chart.
    pub fn chart_of(&self, i: usize) -> Result<(Chart, Rational)> {
        let p = &self.points[i];
        let home = self.home(i).ok_or_else(|| {
            Error::InvalidInput("p_0 has no chart".into())
        })?;
        if let Some(s) = p.satellite_of {
            let other = s.min(p.parent.unwrap());
            let frame = self.frames[home];
            return if frame.y_axis == Some(other) {
                Ok((Chart::Finite, Rational::zero()))
            } else {
                Ok((Chart::Infinite, Rational::zero()))
            };
        }
        match &p.tangent {
            Some(Tangent::Finite(c)) => Ok((Chart::Finite, c.clone())),
            Some(Tangent::Infinity) => Ok((Chart::Infinite, Rational::zero())),
            None => Err(Error::MissingTangent(i)),
        }
    }

    /// Combinatorial dual graph of the final model: vertex `i` is `F_i`.
    pub fn simulate(&self) -> Result<DualGraph> {
        let ids: Vec<u32> = (0..self.len() as u32).collect();
        self.simulate_with_ids(&ids)
    }

    pub(crate) fn simulate_with_ids(&self, ids: &[u32]) -> Result<DualGraph> {
        let n = self.len();
        let mut self_int = vec![0i64; n];
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        self_int[0] = -1;
        for (i, p) in self.points.iter().enumerate().skip(1) {
            let on: Vec<usize> = p.proximate_to().collect();
            if let [a, b] = on[..] {
                if !adj[a].contains(&b) {
                    return Err(Error::InvalidCluster(format!(
                        "p_{i}: F_{a} and F_{b} do not meet before p_{i} is blown up"
                    )));
                }
                adj[a].remove(&b);
                adj[b].remove(&a);
            }
            self_int[i] = -1;
            for &s in &on {
                self_int[s] -= 1;
                adj[s].insert(i);
                adj[i].insert(s);
            }
        }
        let vertices = (0..n).map(|i| Vertex::new(ids[i], self_int[i])).collect();
        let mut edges = Vec::new();
        for (i, nb) in adj.iter().enumerate() {
            for &j in nb.range(i + 1..) {
                edges.push((VertexId(ids[i]), VertexId(ids[j])));
            }
        }
        DualGraph::new(vertices, edges)
    }

    /// Lower unitriangular: `P[i][i] = 1`, `P[i][j] = -1` when `p_i` is
    /// proximate to `p_j`.
    pub fn proximity_matrix(&self) -> ExactMatrix {
        let n = self.len();
        let mut p = ExactMatrix::identity(n);
        for (i, pt) in self.points.iter().enumerate() {
            for j in pt.proximate_to() {
                p.set(i, j, int(-1));
            }
        }
        p
    }

    /// Intersection matrix of the final model, from the simulation.
    pub fn intersection_matrix(&self) -> ExactMatrix {
        self.simulate()
            .expect("validated at construction")
            .intersection_matrix()
    }

    /// Coefficients of the relative canonical divisor `K = Σ a_i F_i`:
    /// `a_i = 1 + Σ_{p_i proximate to p_j} a_j`.
    pub fn canonical_coeffs(&self) -> CanonicalCoefficients {
        let mut a: Vec<u64> = Vec::with_capacity(self.len());
        for p in &self.points {
            let v = 1 + p.proximate_to().map(|j| a[j]).sum::<u64>();
            a.push(v);
        }
        CanonicalCoefficients { a }
    }

    /// Points reachable from `roots` through parent / satellite links, in
    /// increasing order.
    pub fn ancestors(&self, roots: &[usize]) -> Vec<usize> {
        let mut keep = vec![false; self.len()];
        let mut stack: Vec<usize> = roots.to_vec();
        while let Some(i) = stack.pop() {
            if keep[i] {
                continue;
            }
            keep[i] = true;
            stack.extend(self.points[i].proximate_to());
        }
        (0..self.len()).filter(|&i| keep[i]).collect()
    }

    /// Sub-cluster on the given (ancestor-closed, sorted) indices.
    pub fn restrict(&self, kept: &[usize]) -> Result<BlowupCluster> {
        let new_index = |old: usize| kept.binary_search(&old).ok();
        let mut pts = Vec::with_capacity(kept.len());
        for &old in kept {
            let p = &self.points[old];
            let remap = |o: Option<usize>| -> Result<Option<usize>> {
                match o {
                    None => Ok(None),
                    Some(j) => new_index(j).map(Some).ok_or_else(|| {
                        Error::InvalidInput(format!("index set is not closed: p_{old} needs p_{j}"))
                    }),
                }
            };
            pts.push(ClusterPoint {
                parent: remap(p.parent)?,
                satellite_of: remap(p.satellite_of)?,
                tangent: p.tangent.clone(),
            });
        }
        BlowupCluster::new(pts)
    }

    /// Smallest sub-cluster in which both `F_e` and `F_f` appear.
    pub fn minimal_joint_model(&self, e: usize, f: usize) -> Result<JointModel> {
        self.check_index(e)?;
        self.check_index(f)?;
        let original = self.ancestors(&[e, f]);
        let cluster = self.restrict(&original)?;
        let pos = |i: usize| original.binary_search(&i).expect("kept");
        Ok(JointModel {
            e: pos(e),
            f: pos(f),
            cluster,
            original,
        })
    }

    /// Dual graph of the minimal joint model with `E` on `F_e` and `F` on
    /// `F_f`. Vertex ids are the original point indices.
    pub fn pair_graph(&self, e: usize, f: usize) -> Result<DualGraph> {
        let jm = self.minimal_joint_model(e, f)?;
        let ids: Vec<u32> = jm.original.iter().map(|&i| i as u32).collect();
        let mut g = jm.cluster.simulate_with_ids(&ids)?;
        g.add_label(VertexId(e as u32), "E")?;
        g.add_label(VertexId(f as u32), "F")?;
        Ok(g)
    }

    /// Same structure with the given tangents on the free points (entries
    /// for satellite points and `p_0` are ignored).
    pub fn with_tangents(&self, tangents: &[Option<Tangent>]) -> Result<BlowupCluster> {
        if tangents.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                got: tangents.len(),
            });
        }
        let pts = self
            .points
            .iter()
            .zip(tangents)
            .map(|(p, t)| ClusterPoint {
                tangent: if p.parent.is_some() && !p.is_satellite() { t.clone() } else { None },
                ..p.clone()
            })
            .collect();
        BlowupCluster::new(pts)
    }

    /// Every valid way of giving the free points tangents from `pool`.
    pub fn tangent_assignments(&self, pool: &[Tangent]) -> Vec<BlowupCluster> {
        let free: Vec<usize> = (1..self.len()).filter(|&i| !self.points[i].is_satellite()).collect();
        let mut out = Vec::new();
        let mut choice = vec![0usize; free.len()];
        loop {
            let mut tangents = vec![None; self.len()];
            for (k, &i) in free.iter().enumerate() {
                tangents[i] = Some(pool[choice[k]].clone());
            }
            if let Ok(c) = self.with_tangents(&tangents) {
                out.push(c);
            }
            let Some(k) = (0..free.len()).find(|&k| choice[k] + 1 < pool.len()) else {
                break;
            };
            choice[k] += 1;
            choice[..k].iter_mut().for_each(|c| *c = 0);
        }
        out
    }

    /// The first valid assignment from a pool of small integers and `∞`.
    pub fn with_some_tangents(&self) -> BlowupCluster {
        let mut pool: Vec<Tangent> = (0..self.len() as i64 + 2).map(|c| Tangent::Finite(int(c))).collect();
        pool.push(Tangent::Infinity);
        let mut tangents: Vec<Option<Tangent>> = vec![None; self.len()];
        for i in 1..self.len() {
            if self.points[i].is_satellite() {
                continue;
            }
            let found = pool.iter().find(|t| {
                tangents[i] = Some((*t).clone());
                let prefix: Vec<ClusterPoint> = self.points[..=i]
                    .iter()
                    .zip(&tangents)
                    .map(|(p, t)| ClusterPoint {
                        tangent: if p.is_satellite() { None } else { t.clone() },
                        ..p.clone()
                    })
                    .collect();
                BlowupCluster::new(prefix).is_ok()
            });
            tangents[i] = found.cloned();
        }
        self.with_tangents(&tangents).expect("a fresh integer tangent is always available")
    }

    /// Number of centres on the smooth germ through `p_0, ..., p_last`
    /// (the parent chain of `last`), and `a_last`. The chain must consist
    /// of free points.
    pub fn smooth_germ_centers(&self, last: usize) -> Result<SmoothGermCount> {
        self.check_index(last)?;
        let mut chain = vec![last];
        let mut cur = last;
        while let Some(p) = self.points[cur].parent {
            if self.points[cur].is_satellite() {
                return Err(Error::InvalidInput(format!(
                    "p_{cur} is satellite: no smooth germ passes through it"
                )));
            }
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        Ok(SmoothGermCount {
            centers: chain.len() as u64,
            coefficient: self.canonical_coeffs().a[last],
            chain,
        })
    }
}

fn compute_frames(points: &[ClusterPoint]) -> Result<Vec<Frame>> {
    let mut frames = vec![Frame {
        x_axis: None,
        y_axis: None,
    }];
    for (i, p) in points.iter().enumerate().skip(1) {
        let parent = p.parent.expect("checked");
        let frame = match p.satellite_of {
            Some(s) => {
                let (home, other) = (parent.max(s), parent.min(s));
                let hf = frames[home];
                if hf.x_axis != Some(other) && hf.y_axis != Some(other) {
                    return Err(Error::InvalidCluster(format!(
                        "p_{i}: F_{other} does not pass through p_{home}"
                    )));
                }
                Frame {
                    x_axis: Some(home),
                    y_axis: Some(other),
                }
            }
            None => {
                let hf = frames[parent];
                match &p.tangent {
                    Some(t) if t.is_zero() && hf.y_axis.is_some() => {
                        return Err(Error::InvalidCluster(format!(
                            "p_{i}: tangent 0 on F_{parent} is the point where F_{} meets it",
                            hf.y_axis.unwrap()
                        )));
                    }
                    Some(Tangent::Infinity) if hf.x_axis.is_some() => {
                        return Err(Error::InvalidCluster(format!(
                            "p_{i}: tangent inf on F_{parent} is the point where F_{} meets it",
                            hf.x_axis.unwrap()
                        )));
                    }
                    _ => {}
                }
                if let Some(t) = &p.tangent {
                    let clash = points[1..i].iter().position(|q| {
                        q.satellite_of.is_none() && q.parent == Some(parent) && q.tangent.as_ref() == Some(t)
                    });
                    if let Some(k) = clash {
                        return Err(Error::InvalidCluster(format!(
                            "p_{i}: tangent {t} on F_{parent} was already blown up as p_{}",
                            k + 1
                        )));
                    }
                }
                Frame {
                    x_axis: Some(parent),
                    y_axis: None,
                }
            }
        };
        frames.push(frame);
    }
    Ok(frames)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalCoefficients {
    pub a: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointModel {
    pub cluster: BlowupCluster,
    /// Original index of each point of `cluster`.
    pub original: Vec<usize>,
    /// Positions of `e` and `f` inside `cluster`.
    pub e: usize,
    pub f: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothGermCount {
    pub chain: Vec<usize>,
    pub centers: u64,
    pub coefficient: u64,
}

/// `-PᵀP`
pub fn intersection_from_proximity(p: &ExactMatrix) -> ExactMatrix {
    p.transpose().mul(p).expect("square").neg()
}

/// Every cluster structure on exactly `n` points, ignoring tangents: each
/// new point is free on some existing component or sits at one of the
/// current intersection points.
pub fn enumerate_structures(n: usize) -> Vec<BlowupCluster> {
    let mut out = Vec::new();
    let mut pts = vec![ClusterPoint::root()];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    grow(n, &mut pts, &mut edges, &mut out);
    out
}

fn grow(
    n: usize,
    pts: &mut Vec<ClusterPoint>,
    edges: &mut Vec<(usize, usize)>,
    out: &mut Vec<BlowupCluster>,
) {
    if pts.len() == n {
        out.push(BlowupCluster::new(pts.clone()).expect("enumerated cluster is valid"));
        return;
    }
    let i = pts.len();
    for j in 0..i {
        pts.push(ClusterPoint::free(j, None));
        edges.push((j, i));
        grow(n, pts, edges, out);
        edges.pop();
        pts.pop();
    }
    for k in 0..edges.len() {
        let (a, b) = edges[k];
        pts.push(ClusterPoint::satellite(b, a));
        let saved = edges.clone();
        edges.remove(k);
        edges.push((a, i));
        edges.push((b, i));
        grow(n, pts, edges, out);
        *edges = saved;
        pts.pop();
    }
}
