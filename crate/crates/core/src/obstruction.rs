//! Obstructions to adjacencies between arc families.
//!
//! `valuative_obstruction(e, f)` judges the adjacency `N_{F_f} ⊂ N_{F_e}`:
//! it is impossible as soon as some germ has smaller order along `F_f`
//! than along `F_e`, and it is enough to look at curvettes.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::BlowupCluster;
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::poly::LocalPolynomial;
use crate::rational::{int, is_integral, Rational};
use crate::valuation::{curvette_polynomial, minus_inverse, ord_poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    RuledOut,
    NotRuledOut,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::RuledOut => "RULED_OUT",
            Status::NotRuledOut => "NOT_RULED_OUT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A curvette of `F_curvette` with `ord_f < ord_e`.
    Curvette {
        curvette: usize,
        #[serde(with = "crate::rational::serde_rational")]
        ord_e: Rational,
        #[serde(with = "crate::rational::serde_rational")]
        ord_f: Rational,
        /// Explicit equation, when the tangent data allows one.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        polynomial: Option<String>,
    },
    /// A germ with `ord_e(g) < ord_f(g) + ord_f2(g)`.
    Polynomial {
        polynomial: String,
        ord_e: u64,
        ord_f: u64,
        ord_f2: u64,
    },
    /// A solution of the returns system with forbidden entries.
    Solution {
        #[serde(with = "crate::rational::serde_rational_vec")]
        a: Vec<Rational>,
        negative: Vec<usize>,
        non_integral: Vec<usize>,
        zero_special: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawVerdict")]
pub struct ObstructionVerdict {
    status: Status,
    witness: Option<Witness>,
}

#[derive(Deserialize)]
struct RawVerdict {
    status: Status,
    #[serde(default)]
    witness: Option<Witness>,
}

impl TryFrom<RawVerdict> for ObstructionVerdict {
    type Error = String;

    fn try_from(raw: RawVerdict) -> std::result::Result<Self, String> {
        match (raw.status, raw.witness) {
            (Status::RuledOut, None) => Err("RULED_OUT verdict without witness".into()),
            (status, witness) => Ok(ObstructionVerdict { status, witness }),
        }
    }
}

impl ObstructionVerdict {
    pub fn ruled_out(witness: Witness) -> Self {
        ObstructionVerdict {
            status: Status::RuledOut,
            witness: Some(witness),
        }
    }

    pub fn not_ruled_out() -> Self {
        ObstructionVerdict {
            status: Status::NotRuledOut,
            witness: None,
        }
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    pub fn is_ruled_out(&self) -> bool {
        self.status == Status::RuledOut
    }
}

/// Judges `N_{F_f} ⊂ N_{F_e}`. Curvette indices in the witness refer to
/// the original cluster.
pub fn valuative_obstruction(cluster: &BlowupCluster, e: usize, f: usize) -> Result<ObstructionVerdict> {
    if e == f {
        return Err(Error::InvalidInput(format!(
            "an adjacency needs two distinct components, got F_{e} twice"
        )));
    }
    let jm = cluster.minimal_joint_model(e, f)?;
    let inv = minus_inverse(&jm.cluster);
    let (re, rf) = (inv.row(jm.e), inv.row(jm.f));
    let Some(i) = (0..re.len()).find(|&i| rf[i] < re[i]) else {
        return Ok(ObstructionVerdict::not_ruled_out());
    };
    let polynomial = curvette_polynomial(&jm.cluster, i).ok().map(|g| g.to_string());
    Ok(ObstructionVerdict::ruled_out(Witness::Curvette {
        curvette: jm.original[i],
        ord_e: re[i].clone(),
        ord_f: rf[i].clone(),
        polynomial,
    }))
}

/// Rules out `N_{F_e} ⊂ N_{F_f}` realised by a wedge with a return lifting
/// through `F_f2`, using the single germ `g`.
pub fn refined_valuative_obstruction(
    cluster: &BlowupCluster,
    e: usize,
    f: usize,
    f2: usize,
    g: &LocalPolynomial,
) -> Result<ObstructionVerdict> {
    let ord_e = ord_poly(cluster, g, e)?;
    let ord_f = ord_poly(cluster, g, f)?;
    let ord_f2 = ord_poly(cluster, g, f2)?;
    if ord_e < ord_f + ord_f2 {
        Ok(ObstructionVerdict::ruled_out(Witness::Polynomial {
            polynomial: g.to_string(),
            ord_e,
            ord_f,
            ord_f2,
        }))
    } else {
        Ok(ObstructionVerdict::not_ruled_out())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnsProfile {
    pub b: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnsSolution {
    /// Solution of `M a = b − e_special`.
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub a: Vec<Rational>,
    /// Solution of `M a = (1 − b_special, b_others)`, the other sign choice.
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub printed_convention_solution: Vec<Rational>,
    pub verdict: ObstructionVerdict,
}

/// Solves the returns system for the limit divisor coefficients `a`.
///
/// With `require_indeterminacy` a zero coefficient on the special
/// component is also fatal: the wedge would lift.
pub fn returns_system(
    m: &ExactMatrix,
    profile: &ReturnsProfile,
    special: usize,
    require_indeterminacy: bool,
) -> Result<ReturnsSolution> {
    let n = m.dim();
    if profile.b.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: profile.b.len(),
        });
    }
    if special >= n {
        return Err(Error::IndexOutOfRange { index: special, len: n });
    }
    if let Some(i) = profile.b.iter().position(|&x| x < 0) {
        return Err(Error::InvalidInput(format!("returns profile entry b_{i} is negative")));
    }
    let mut rhs: Vec<Rational> = profile.b.iter().map(|&x| int(x)).collect();
    rhs[special] -= int(1);
    let a = m.solve(&rhs)?;
    let mut printed: Vec<Rational> = profile.b.iter().map(|&x| int(x)).collect();
    printed[special] = int(1 - profile.b[special]);
    let printed_convention_solution = m.solve(&printed)?;

    let negative: Vec<usize> = (0..n).filter(|&i| a[i].is_negative()).collect();
    let non_integral: Vec<usize> = (0..n).filter(|&i| !is_integral(&a[i])).collect();
    let zero_special = require_indeterminacy && a[special].is_zero();
    let verdict = if negative.is_empty() && non_integral.is_empty() && !zero_special {
        ObstructionVerdict::not_ruled_out()
    } else {
        ObstructionVerdict::ruled_out(Witness::Solution {
            a: a.clone(),
            negative,
            non_integral,
            zero_special,
        })
    };
    Ok(ReturnsSolution {
        a,
        printed_convention_solution,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub e: usize,
    pub f: usize,
    pub verdict: ObstructionVerdict,
}

/// `valuative_obstruction(e, f)` for every ordered pair `e ≠ f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyTable {
    pub size: usize,
    pub entries: Vec<TableEntry>,
}

impl AdjacencyTable {
    pub fn get(&self, e: usize, f: usize) -> Option<&ObstructionVerdict> {
        self.entries
            .iter()
            .find(|t| t.e == e && t.f == f)
            .map(|t| &t.verdict)
    }
}

pub fn adjacency_table(cluster: &BlowupCluster) -> AdjacencyTable {
    let n = cluster.len();
    let mut entries = Vec::with_capacity(n * n.saturating_sub(1));
    for e in 0..n {
        for f in (0..n).filter(|&f| f != e) {
            let verdict = valuative_obstruction(cluster, e, f).expect("indices are valid and distinct");
            entries.push(TableEntry { e, f, verdict });
        }
    }
    AdjacencyTable { size: n, entries }
}
