//! Versioned JSON documents for graphs, clusters and wedge models.
//!
//! ```json
//! {"version": 1,
//!  "vertices": [{"id": 0, "self_int": -2}, {"id": 1, "self_int": -2, "labels": ["E"]}],
//!  "edges": [[0, 1]]}
//!
//! {"version": 1,
//!  "points": [{}, {"parent": 0, "tangent": "0"}, {"parent": 1, "satellite_of": 0}]}
//!
//! {"version": 1, "cluster": "chain2", "special": 1, "c": [0, 0], "d": [0, 1],
//!  "minimal_target": true, "assert_b1_lt_1": true}
//! ```
//!
//! Every problem is reported as a [`Diagnostic`] carrying a JSON path, and
//! a line and column when the text itself does not parse.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::cluster::{BlowupCluster, ClusterPoint, Tangent};
use crate::dfd::WedgeNumericalModel;
use crate::graph::{DualGraph, Vertex, VertexId};
use crate::rational::{format_rational, parse_rational, Rational};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "line {l}, column {c}: {}", self.message),
            _ => write!(f, "{}: {}", self.path, self.message),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DocumentKind {
    Graph,
    Cluster,
    Dfd,
}

pub type Diagnostics = Vec<Diagnostic>;

#[derive(Default)]
struct Checker {
    diags: Diagnostics,
}

impl Checker {
    fn err(&mut self, path: &str, message: impl Into<String>) {
        self.diags.push(Diagnostic {
            path: path.to_string(),
            line: None,
            column: None,
            message: message.into(),
        });
    }

    fn object<'v>(&mut self, v: &'v Value, path: &str) -> Option<&'v Map<String, Value>> {
        let o = v.as_object();
        if o.is_none() {
            self.err(path, "expected an object");
        }
        o
    }

    fn array<'v>(&mut self, v: Option<&'v Value>, path: &str) -> Option<&'v Vec<Value>> {
        match v {
            None => {
                self.err(path, "missing field");
                None
            }
            Some(Value::Array(a)) => Some(a),
            Some(_) => {
                self.err(path, "expected an array");
                None
            }
        }
    }

    fn int(&mut self, v: Option<&Value>, path: &str) -> Option<i64> {
        match v {
            None => {
                self.err(path, "missing field");
                None
            }
            Some(x) => {
                let i = x.as_i64();
                if i.is_none() {
                    self.err(path, "expected an integer");
                }
                i
            }
        }
    }

    fn nonneg(&mut self, v: Option<&Value>, path: &str) -> Option<u64> {
        let i = self.int(v, path)?;
        if i < 0 {
            self.err(path, format!("expected a non-negative integer, got {i}"));
            return None;
        }
        Some(i as u64)
    }

    fn flag(&mut self, o: &Map<String, Value>, key: &str) -> bool {
        match o.get(key) {
            None => false,
            Some(Value::Bool(b)) => *b,
            Some(_) => {
                self.err(&format!("$.{key}"), "expected true or false");
                false
            }
        }
    }

    fn unknown_fields(&mut self, o: &Map<String, Value>, allowed: &[&str], path: &str) {
        for k in o.keys() {
            if !allowed.contains(&k.as_str()) {
                self.err(&format!("{path}.{k}"), "unknown field");
            }
        }
    }

    fn version(&mut self, o: &Map<String, Value>) {
        match o.get("version") {
            None => self.err("$.version", "missing schema version"),
            Some(v) => match v.as_u64() {
                Some(SCHEMA_VERSION) => {}
                Some(other) => self.err(
                    "$.version",
                    format!("unsupported schema version {other} (this build reads {SCHEMA_VERSION})"),
                ),
                None => self.err("$.version", "expected an integer"),
            },
        }
    }

    fn int_vec(&mut self, v: Option<&Value>, path: &str) -> Option<Vec<i64>> {
        let arr = self.array(v, path)?;
        let before = self.diags.len();
        let out: Vec<i64> = arr
            .iter()
            .enumerate()
            .filter_map(|(k, x)| self.int(Some(x), &format!("{path}[{k}]")))
            .collect();
        (self.diags.len() == before).then_some(out)
    }

    fn finish<T>(self, value: Option<T>) -> Result<T, Diagnostics> {
        match value {
            Some(v) if self.diags.is_empty() => Ok(v),
            _ => Err(self.diags),
        }
    }
}

fn parse_json(text: &str) -> Result<Value, Diagnostics> {
    serde_json::from_str(text).map_err(|e| {
        vec![Diagnostic {
            path: "$".into(),
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        }]
    })
}

/// All problems with a document; empty when it is well formed.
pub fn validate(text: &str, kind: DocumentKind) -> Diagnostics {
    let result = match kind {
        DocumentKind::Graph => parse_graph(text).map(|_| ()),
        DocumentKind::Cluster => parse_cluster(text).map(|_| ()),
        DocumentKind::Dfd => parse_dfd(text, crate::fixtures::cluster_by_name).map(|_| ()),
    };
    result.err().unwrap_or_default()
}

pub fn parse_graph(text: &str) -> Result<DualGraph, Diagnostics> {
    let value = parse_json(text)?;
    let mut ck = Checker::default();
    let graph = graph_from_value(&mut ck, &value);
    ck.finish(graph)
}

fn graph_from_value(ck: &mut Checker, value: &Value) -> Option<DualGraph> {
    let o = ck.object(value, "$")?;
    ck.version(o);
    ck.unknown_fields(o, &["version", "vertices", "edges", "name"], "$");
    let mut vertices = Vec::new();
    let mut ids = BTreeSet::new();
    if let Some(vs) = ck.array(o.get("vertices"), "$.vertices") {
        for (k, v) in vs.iter().enumerate() {
            let path = format!("$.vertices[{k}]");
            let Some(vo) = ck.object(v, &path) else { continue };
            ck.unknown_fields(vo, &["id", "self_int", "genus", "labels"], &path);
            let id = ck.nonneg(vo.get("id"), &format!("{path}.id"));
            let w = ck.int(vo.get("self_int"), &format!("{path}.self_int"));
            let genus = match vo.get("genus") {
                None => Some(0),
                g => ck.nonneg(g, &format!("{path}.genus")),
            };
            let mut labels = BTreeSet::new();
            if let Some(ls) = vo.get("labels") {
                match ls.as_array() {
                    Some(arr) => {
                        for (j, l) in arr.iter().enumerate() {
                            match l.as_str() {
                                Some(s) => {
                                    labels.insert(s.to_string());
                                }
                                None => ck.err(&format!("{path}.labels[{j}]"), "expected a string"),
                            }
                        }
                    }
                    None => ck.err(&format!("{path}.labels"), "expected an array of strings"),
                }
            }
            if let (Some(id), Some(w), Some(g)) = (id, w, genus) {
                let Ok(id) = u32::try_from(id) else {
                    ck.err(&format!("{path}.id"), "id too large");
                    continue;
                };
                if !ids.insert(id) {
                    ck.err(&format!("{path}.id"), format!("duplicate vertex id {id}"));
                }
                let mut vx = Vertex::new(id, w).with_genus(g as u32);
                vx.labels = labels;
                vertices.push(vx);
            }
        }
    }
    let mut edges = Vec::new();
    match o.get("edges") {
        None => {}
        e => {
            if let Some(es) = ck.array(e, "$.edges") {
                for (k, e) in es.iter().enumerate() {
                    let path = format!("$.edges[{k}]");
                    let pair = e.as_array().filter(|a| a.len() == 2);
                    let Some(pair) = pair else {
                        ck.err(&path, "expected a pair of vertex ids");
                        continue;
                    };
                    let a = ck.nonneg(pair.first(), &format!("{path}[0]"));
                    let b = ck.nonneg(pair.get(1), &format!("{path}[1]"));
                    let (Some(a), Some(b)) = (a, b) else { continue };
                    let (a, b) = (a as u32, b as u32);
                    if a == b {
                        ck.err(&path, format!("loop at vertex {a}: self-intersecting components are not supported"));
                        continue;
                    }
                    for end in [a, b] {
                        if !ids.contains(&end) {
                            ck.err(&path, format!("dangling edge: vertex {end} does not exist"));
                        }
                    }
                    edges.push((VertexId(a), VertexId(b)));
                }
            }
        }
    }
    if !ck.diags.is_empty() {
        return None;
    }
    match DualGraph::new(vertices, edges) {
        Ok(g) => Some(g),
        Err(e) => {
            ck.err("$", e.to_string());
            None
        }
    }
}

pub fn parse_cluster(text: &str) -> Result<BlowupCluster, Diagnostics> {
    let value = parse_json(text)?;
    let mut ck = Checker::default();
    let cluster = cluster_from_value(&mut ck, &value, "$", true);
    ck.finish(cluster)
}

fn cluster_from_value(ck: &mut Checker, value: &Value, root: &str, versioned: bool) -> Option<BlowupCluster> {
    let o = ck.object(value, root)?;
    if versioned {
        ck.version(o);
    }
    ck.unknown_fields(o, &["version", "points", "name"], root);
    let ps = ck.array(o.get("points"), &format!("{root}.points"))?;
    if ps.is_empty() {
        ck.err(&format!("{root}.points"), "a cluster needs at least the base point");
        return None;
    }
    let mut pts = Vec::new();
    for (k, p) in ps.iter().enumerate() {
        let path = format!("{root}.points[{k}]");
        let Some(po) = ck.object(p, &path) else { continue };
        ck.unknown_fields(po, &["parent", "satellite_of", "tangent"], &path);
        let index = |ck: &mut Checker, key: &str| -> Option<usize> {
            match po.get(key) {
                None | Some(Value::Null) => None,
                v => {
                    let i = ck.nonneg(v, &format!("{path}.{key}"))? as usize;
                    if i >= k {
                        ck.err(
                            &format!("{path}.{key}"),
                            format!("proximity order violated: {key} {i} must be smaller than {k}"),
                        );
                    }
                    Some(i)
                }
            }
        };
        let parent = index(ck, "parent");
        let satellite_of = index(ck, "satellite_of");
        if k == 0 && (parent.is_some() || satellite_of.is_some()) {
            ck.err(&path, "the base point has no parent");
        }
        if k > 0 && po.get("parent").is_none_or(Value::is_null) {
            ck.err(&format!("{path}.parent"), "missing parent");
        }
        let tangent = match po.get("tangent") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => match Tangent::parse(s) {
                Ok(t) => Some(t),
                Err(e) => {
                    ck.err(&format!("{path}.tangent"), e.to_string());
                    None
                }
            },
            Some(Value::Number(n)) if n.is_i64() => Some(Tangent::Finite(crate::rational::int(n.as_i64().unwrap()))),
            Some(_) => {
                ck.err(&format!("{path}.tangent"), "expected a rational string, an integer or \"inf\"");
                None
            }
        };
        pts.push(ClusterPoint {
            parent,
            satellite_of,
            tangent,
        });
    }
    if !ck.diags.is_empty() {
        return None;
    }
    match BlowupCluster::new(pts) {
        Ok(c) => Some(c),
        Err(e) => {
            ck.err(&format!("{root}.points"), e.to_string());
            None
        }
    }
}

/// Parses a wedge model. A string `cluster` field is looked up with
/// `resolve`; an object is read as an inline cluster.
pub fn parse_dfd(
    text: &str,
    resolve: impl Fn(&str) -> Option<BlowupCluster>,
) -> Result<WedgeNumericalModel, Diagnostics> {
    let value = parse_json(text)?;
    let mut ck = Checker::default();
    let model = dfd_from_value(&mut ck, &value, resolve);
    ck.finish(model)
}

fn dfd_from_value(
    ck: &mut Checker,
    value: &Value,
    resolve: impl Fn(&str) -> Option<BlowupCluster>,
) -> Option<WedgeNumericalModel> {
    let o = ck.object(value, "$")?;
    ck.version(o);
    ck.unknown_fields(
        o,
        &[
            "version",
            "cluster",
            "special",
            "a",
            "b",
            "c",
            "d",
            "minimal_target",
            "assert_b1_lt_1",
            "assert_no_lift",
        ],
        "$",
    );
    let cluster = match o.get("cluster") {
        None => {
            ck.err("$.cluster", "missing field");
            None
        }
        Some(Value::String(name)) => {
            let c = resolve(name);
            if c.is_none() {
                ck.err("$.cluster", format!("unknown cluster {name:?}"));
            }
            c
        }
        Some(v) => cluster_from_value(ck, v, "$.cluster", false),
    };
    let special = ck.nonneg(o.get("special"), "$.special").map(|s| s as usize);
    let c = ck.int_vec(o.get("c"), "$.c");
    let d = ck.int_vec(o.get("d"), "$.d");
    let a = match o.get("a") {
        None => None,
        v => {
            let raw = ck.int_vec(v, "$.a");
            if let Some(raw) = &raw {
                for (k, x) in raw.iter().enumerate() {
                    if *x < 0 {
                        ck.err(&format!("$.a[{k}]"), "canonical coefficients are non-negative");
                    }
                }
            }
            raw.map(|r| r.into_iter().map(|x| x.max(0) as u64).collect::<Vec<u64>>())
        }
    };
    let b: Option<Vec<Rational>> = match o.get("b") {
        None | Some(Value::Null) => None,
        v => ck.array(v, "$.b").map(|arr| {
            arr.iter()
                .enumerate()
                .filter_map(|(k, x)| {
                    let r = match x {
                        Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
                        Value::Number(n) if n.is_i64() => Ok(crate::rational::int(n.as_i64().unwrap())),
                        _ => Err("expected an integer or a rational string".to_string()),
                    };
                    r.map_err(|m| ck.err(&format!("$.b[{k}]"), m)).ok()
                })
                .collect()
        }),
    };
    let minimal_target = ck.flag(o, "minimal_target");
    let assert_b1_lt_1 = ck.flag(o, "assert_b1_lt_1");
    let assert_no_lift = ck.flag(o, "assert_no_lift");
    let (cluster, special, c, d) = (cluster?, special?, c?, d?);
    if !ck.diags.is_empty() {
        return None;
    }
    let n = cluster.len();
    let model = WedgeNumericalModel {
        a: a.unwrap_or_else(|| cluster.canonical_coeffs().a),
        cluster,
        special,
        c,
        d,
        b,
        minimal_target,
        assert_b1_lt_1,
        assert_no_lift,
    };
    if let Err(e) = model.validate() {
        ck.err("$", format!("{e} (cluster has {n} points)"));
        return None;
    }
    Some(model)
}

pub fn graph_document(g: &DualGraph) -> Value {
    let vertices: Vec<Value> = g
        .vertices()
        .iter()
        .map(|v| {
            let mut o = Map::new();
            o.insert("id".into(), v.id.0.into());
            o.insert("self_int".into(), v.self_int.into());
            if v.genus != 0 {
                o.insert("genus".into(), v.genus.into());
            }
            if !v.labels.is_empty() {
                o.insert("labels".into(), v.labels.iter().cloned().collect::<Vec<_>>().into());
            }
            Value::Object(o)
        })
        .collect();
    let edges: Vec<Value> = g
        .edges()
        .iter()
        .map(|(a, b)| Value::from(vec![a.0, b.0]))
        .collect();
    serde_json::json!({"version": SCHEMA_VERSION, "vertices": vertices, "edges": edges})
}

pub fn cluster_document(c: &BlowupCluster) -> Value {
    let points: Vec<Value> = c
        .points()
        .iter()
        .map(|p| {
            let mut o = Map::new();
            if let Some(par) = p.parent {
                o.insert("parent".into(), par.into());
            }
            if let Some(s) = p.satellite_of {
                o.insert("satellite_of".into(), s.into());
            }
            if let Some(t) = &p.tangent {
                o.insert("tangent".into(), t.to_string().into());
            }
            Value::Object(o)
        })
        .collect();
    serde_json::json!({"version": SCHEMA_VERSION, "points": points})
}

pub fn dfd_document(m: &WedgeNumericalModel) -> Value {
    let mut o = Map::new();
    o.insert("version".into(), SCHEMA_VERSION.into());
    let mut cluster = cluster_document(&m.cluster);
    cluster.as_object_mut().expect("object").remove("version");
    o.insert("cluster".into(), cluster);
    o.insert("special".into(), m.special.into());
    o.insert("a".into(), m.a.clone().into());
    o.insert("c".into(), m.c.clone().into());
    o.insert("d".into(), m.d.clone().into());
    if let Some(b) = &m.b {
        o.insert("b".into(), b.iter().map(format_rational).collect::<Vec<_>>().into());
    }
    for (k, v) in [
        ("minimal_target", m.minimal_target),
        ("assert_b1_lt_1", m.assert_b1_lt_1),
        ("assert_no_lift", m.assert_no_lift),
    ] {
        o.insert(k.into(), v.into());
    }
    Value::Object(o)
}
