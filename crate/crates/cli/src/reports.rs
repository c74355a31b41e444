//! Report values for every subcommand. The structured output is the JSON
//! form of [`Report`], and parses back to an equal value.

use serde::{Deserialize, Serialize};
use wedgekit::cluster::ClusterPoint;
use wedgekit::document::{self, Diagnostic};
use wedgekit::dfd::{self, LiftingVerdict, WedgeNumericalModel};
use wedgekit::euler::{self, Certificate, EulerInput};
use wedgekit::graph::{check_inverse_nonpositive, is_negative_definite, OffendingEntry};
use wedgekit::kb::{KnowledgeBase, StoreOutcome};
use wedgekit::obstruction::{self, ReturnsProfile, TableEntry};
use wedgekit::rational::{serde_rational, serde_rational_vec};
use wedgekit::valuation::{self, Comparison};
use wedgekit::{
    canonical_key, BlowupCluster, CanonicalKey, DualGraph, ExactMatrix, LocalPolynomial, ObstructionVerdict,
    Rational, Status, VertexId,
};

use crate::input::{CliError, Input};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "snake_case")]
pub enum Report {
    Graph(GraphReport),
    Cluster(ClusterReport),
    Compare(CompareReport),
    Ord(OrdReport),
    Obstruct(ObstructReport),
    Returns(ReturnsReport),
    Table(TableReport),
    Euler(EulerReport),
    Dfd(DfdReport),
    Pair(PairReport),
    Validate(ValidateReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphReport {
    pub source: String,
    pub vertex_ids: Vec<VertexId>,
    pub intersection_matrix: ExactMatrix,
    #[serde(with = "serde_rational_vec")]
    pub leading_minors: Vec<Rational>,
    pub negative_definite: bool,
    #[serde(with = "serde_rational")]
    pub determinant: Rational,
    pub inverse: Option<ExactMatrix>,
    pub inverse_all_nonpositive: Option<bool>,
    pub inverse_all_negative: Option<bool>,
    pub offending_entries: Vec<OffendingEntry>,
    pub canonical_key: CanonicalKey,
}

pub fn graph_report(source: &str, g: &DualGraph) -> Result<GraphReport, CliError> {
    let m = g.intersection_matrix();
    let signs = check_inverse_nonpositive(&m).ok();
    Ok(GraphReport {
        source: source.to_string(),
        vertex_ids: g.vertices().iter().map(|v| v.id).collect(),
        leading_minors: m.leading_minors(),
        negative_definite: is_negative_definite(&m)?,
        determinant: m.determinant(),
        inverse: signs.as_ref().map(|s| s.inverse.clone()),
        inverse_all_nonpositive: signs.as_ref().map(|s| s.all_nonpositive),
        inverse_all_negative: signs.as_ref().map(|s| s.all_negative),
        offending_entries: signs.map(|s| s.offending_entries).unwrap_or_default(),
        canonical_key: canonical_key(g),
        intersection_matrix: m,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterReport {
    pub source: String,
    pub points: Vec<ClusterPoint>,
    pub graph: serde_json::Value,
    pub proximity_matrix: ExactMatrix,
    pub intersection_matrix: ExactMatrix,
    pub inverse: ExactMatrix,
    #[serde(with = "serde_rational")]
    pub determinant: Rational,
    pub canonical_coefficients: Vec<u64>,
}

pub fn cluster_report(source: &str, c: &BlowupCluster) -> Result<ClusterReport, CliError> {
    let m = c.intersection_matrix();
    let p = c.proximity_matrix();
    if wedgekit::cluster::intersection_from_proximity(&p) != m {
        return Err(wedgekit::Error::Invariant("simulated M differs from −PᵀP".into()).into());
    }
    Ok(ClusterReport {
        source: source.to_string(),
        points: c.points().to_vec(),
        graph: document::graph_document(&c.simulate()?),
        proximity_matrix: p,
        inverse: m.inverse()?,
        determinant: m.determinant(),
        canonical_coefficients: c.canonical_coeffs().a,
        intersection_matrix: m,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompareReport {
    pub source: String,
    pub e: usize,
    pub f: usize,
    /// Original indices of the points of the minimal joint model.
    pub joint_points: Vec<usize>,
    pub intersection_matrix: ExactMatrix,
    pub inverse: ExactMatrix,
    #[serde(with = "serde_rational_vec")]
    pub row_e: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub row_f: Vec<Rational>,
    pub comparison: Comparison,
}

pub fn compare_report(source: &str, c: &BlowupCluster, e: usize, f: usize) -> Result<CompareReport, CliError> {
    let comparison = valuation::compare(c, e, f)?;
    let jm = c.minimal_joint_model(e, f)?;
    let m = jm.cluster.intersection_matrix();
    let minus = valuation::minus_inverse(&jm.cluster);
    Ok(CompareReport {
        source: source.to_string(),
        e,
        f,
        row_e: minus.row(jm.e).to_vec(),
        row_f: minus.row(jm.f).to_vec(),
        joint_points: jm.original,
        inverse: m.inverse()?,
        intersection_matrix: m,
        comparison,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdReport {
    pub source: String,
    pub e: usize,
    pub polynomial: String,
    pub ord: u64,
    /// Points `F_e` depends on, by original index.
    pub points: Vec<usize>,
    /// Orders along each of those components.
    pub orders: Vec<u64>,
    /// Intersection numbers of the strict transform with each component.
    pub profile: Vec<u64>,
    /// `−M⁻¹ · profile`, which must equal `orders`.
    #[serde(with = "serde_rational_vec")]
    pub from_profile: Vec<Rational>,
    pub intersection_matrix: ExactMatrix,
    pub inverse: ExactMatrix,
}

pub fn ord_report(source: &str, c: &BlowupCluster, e: usize, poly: &str) -> Result<OrdReport, CliError> {
    let g: LocalPolynomial = poly.parse()?;
    let ord = valuation::ord_poly(c, &g, e)?;
    let jm = c.minimal_joint_model(e, e)?;
    let orders = valuation::total_transform_orders(&jm.cluster, &g)?;
    let profile = valuation::strict_transform_profile(&jm.cluster, &g)?;
    let t: Vec<Rational> = profile.iter().map(|&x| wedgekit::rational::int(x as i64)).collect();
    let from_profile = valuation::minus_inverse(&jm.cluster).mul_vec(&t)?;
    let agree = orders
        .iter()
        .zip(&from_profile)
        .all(|(&o, p)| wedgekit::rational::int(o as i64) == *p);
    if !agree {
        return Err(wedgekit::Error::Invariant(format!(
            "orders {orders:?} disagree with −M⁻¹t for t = {profile:?}"
        ))
        .into());
    }
    let m = jm.cluster.intersection_matrix();
    Ok(OrdReport {
        source: source.to_string(),
        e,
        polynomial: g.to_string(),
        ord,
        points: jm.original,
        orders,
        profile,
        from_profile,
        inverse: m.inverse()?,
        intersection_matrix: m,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructReport {
    pub source: String,
    pub e: usize,
    pub f: usize,
    /// The adjacency being judged.
    pub adjacency: String,
    pub verdict: ObstructionVerdict,
    pub joint_points: Vec<usize>,
    #[serde(with = "serde_rational_vec")]
    pub row_e: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub row_f: Vec<Rational>,
    pub intersection_matrix: ExactMatrix,
    pub inverse: ExactMatrix,
}

pub fn obstruct_report(source: &str, c: &BlowupCluster, e: usize, f: usize) -> Result<ObstructReport, CliError> {
    let verdict = obstruction::valuative_obstruction(c, e, f)?;
    let cmp = compare_report(source, c, e, f)?;
    Ok(ObstructReport {
        source: source.to_string(),
        e,
        f,
        adjacency: format!("N_{{F_{f}}} ⊂ N_{{F_{e}}}"),
        verdict,
        joint_points: cmp.joint_points,
        row_e: cmp.row_e,
        row_f: cmp.row_f,
        intersection_matrix: cmp.intersection_matrix,
        inverse: cmp.inverse,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnsReport {
    pub source: String,
    /// Row of the special component in the matrices below.
    pub special: usize,
    pub b: Vec<i64>,
    pub require_indeterminacy: bool,
    /// `M a = b − e_special`.
    #[serde(with = "serde_rational_vec")]
    pub a: Vec<Rational>,
    /// `M a = (1 − b_special, other b)`.
    #[serde(with = "serde_rational_vec")]
    pub printed_convention_solution: Vec<Rational>,
    pub verdict: ObstructionVerdict,
    pub intersection_matrix: ExactMatrix,
    pub inverse: ExactMatrix,
}

pub fn returns_report(
    source: &str,
    input: &Input,
    b: Vec<i64>,
    special: u32,
    require_indeterminacy: bool,
) -> Result<ReturnsReport, CliError> {
    let (m, special) = match input {
        Input::Graph(g) => (g.intersection_matrix(), g.position(VertexId(special))?),
        Input::Cluster(c) => {
            c.check_index(special as usize)?;
            (c.intersection_matrix(), special as usize)
        }
    };
    let sol = obstruction::returns_system(&m, &ReturnsProfile { b: b.clone() }, special, require_indeterminacy)?;
    Ok(ReturnsReport {
        source: source.to_string(),
        special,
        b,
        require_indeterminacy,
        a: sol.a,
        printed_convention_solution: sol.printed_convention_solution,
        verdict: sol.verdict,
        inverse: m.inverse()?,
        intersection_matrix: m,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub source: String,
    pub size: usize,
    /// Entry `(e, f)` judges `N_{F_f} ⊂ N_{F_e}`.
    pub entries: Vec<TableEntry>,
    pub intersection_matrix: ExactMatrix,
    pub inverse: ExactMatrix,
}

pub fn table_report(source: &str, c: &BlowupCluster) -> Result<TableReport, CliError> {
    let t = obstruction::adjacency_table(c);
    let m = c.intersection_matrix();
    Ok(TableReport {
        source: source.to_string(),
        size: t.size,
        entries: t.entries,
        inverse: m.inverse()?,
        intersection_matrix: m,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    pub source: String,
    pub coefficients: Vec<u64>,
    pub attach: VertexId,
    pub certificate: Certificate,
    pub intersection_matrix: ExactMatrix,
    pub inverse: Option<ExactMatrix>,
}

pub fn euler_report(source: &str, g: DualGraph, coeffs: Vec<u64>, attach: u32) -> Result<EulerReport, CliError> {
    let m = g.intersection_matrix();
    let input = EulerInput::new(g, coeffs.clone(), VertexId(attach))?;
    Ok(EulerReport {
        source: source.to_string(),
        coefficients: coeffs,
        attach: VertexId(attach),
        certificate: euler::contradiction_certificate(&input)?,
        inverse: m.inverse().ok(),
        intersection_matrix: m,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfdReport {
    pub source: String,
    pub special: usize,
    pub a: Vec<u64>,
    pub c: Vec<i64>,
    pub d: Vec<i64>,
    /// `a − M⁻¹(c + d)`.
    #[serde(with = "serde_rational_vec")]
    pub b: Vec<Rational>,
    #[serde(default, with = "wedgekit::rational::serde_rational_opt_vec")]
    pub supplied_b: Option<Vec<Rational>>,
    pub supplied_b_verified: Option<bool>,
    pub lifting: Option<LiftingVerdict>,
    pub intersection_matrix: ExactMatrix,
    pub inverse: ExactMatrix,
}

pub fn dfd_report(source: &str, model: &WedgeNumericalModel) -> Result<DfdReport, CliError> {
    let b = dfd::solve_b(model)?;
    let supplied_b_verified = match model.b {
        Some(_) => Some(dfd::verify_numerical(model)?),
        None => None,
    };
    let lifting = if model.minimal_target {
        Some(dfd::lifting_verdict(model)?)
    } else {
        None
    };
    let m = model.cluster.intersection_matrix();
    Ok(DfdReport {
        source: source.to_string(),
        special: model.special,
        a: model.a.clone(),
        c: model.c.clone(),
        d: model.d.clone(),
        b,
        supplied_b: model.b.clone(),
        supplied_b_verified,
        lifting,
        inverse: m.inverse()?,
        intersection_matrix: m,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KbReport {
    pub path: String,
    pub hit: bool,
    pub stored: Option<Status>,
    pub outcome: Option<StoreOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub source: String,
    pub e: Option<usize>,
    pub f: Option<usize>,
    pub graph: serde_json::Value,
    pub canonical_key: CanonicalKey,
    /// `valuative_obstruction(e, f)`, judging `N_F ⊂ N_E` for the labels.
    pub verdict: Option<ObstructionVerdict>,
    pub kb: Option<KbReport>,
    pub intersection_matrix: ExactMatrix,
    pub inverse: Option<ExactMatrix>,
}

pub fn pair_report(
    source: &str,
    input: &Input,
    e: Option<usize>,
    f: Option<usize>,
    kb_path: Option<&std::path::Path>,
) -> Result<PairReport, CliError> {
    let (graph, verdict) = match (input, e, f) {
        (Input::Cluster(c), Some(e), Some(f)) => (c.pair_graph(e, f)?, Some(obstruction::valuative_obstruction(c, e, f)?)),
        (Input::Cluster(_), _, _) => {
            return Err(CliError::input("a cluster needs the two indices e and f"));
        }
        (Input::Graph(g), None, None) => (g.clone(), None),
        (Input::Graph(_), _, _) => {
            return Err(CliError::input("indices apply to clusters only; label a graph document instead"));
        }
    };
    let key = canonical_key(&graph);
    let kb = match kb_path {
        None => None,
        Some(path) => {
            let mut store = KnowledgeBase::open(path)?;
            let stored = store.lookup(&key).map(|r| r.verdict);
            let outcome = match &verdict {
                Some(v) => Some(store.store(key.clone(), v.status(), &format!("valuative_obstruction on {source}"))?),
                None => None,
            };
            Some(KbReport {
                path: path.display().to_string(),
                hit: stored.is_some(),
                stored,
                outcome,
            })
        }
    };
    let m = graph.intersection_matrix();
    Ok(PairReport {
        source: source.to_string(),
        e,
        f,
        graph: document::graph_document(&graph),
        canonical_key: key,
        verdict,
        kb,
        inverse: m.inverse().ok(),
        intersection_matrix: m,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub source: String,
    pub kind: document::DocumentKind,
    pub diagnostics: Vec<Diagnostic>,
}
