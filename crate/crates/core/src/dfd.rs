//! Relative canonical bookkeeping for a wedge source model `Z → (C², O)`.
//!
//! Splitting `K_Z` into exceptional and horizontal parts gives
//! `(a − b)ᵗ = M⁻¹ (c + d)ᵗ`, where `a` are the canonical coefficients, `b`
//! the coefficients of the exceptional part, `c_i = K^hor · F_i` and
//! `d_i` the pullback of the target's canonical class against `F_i`.
//! Since `M⁻¹ < 0`, nonnegative `c + d` forces `a ≤ b`.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cluster::BlowupCluster;
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeNumericalModel {
    pub cluster: BlowupCluster,
    /// The component met by the strict transform of the special arc.
    pub special: usize,
    pub a: Vec<u64>,
    pub c: Vec<i64>,
    pub d: Vec<i64>,
    pub b: Option<Vec<Rational>>,
    /// The target is a minimal resolution, so `d ≥ 0`.
    pub minimal_target: bool,
    /// The special arc meets `F_special` transversely, giving `b_special < 1`.
    pub assert_b1_lt_1: bool,
    /// The wedge is known not to lift.
    pub assert_no_lift: bool,
}

impl WedgeNumericalModel {
    /// A model with `a` from the cluster's canonical coefficients and all
    /// flags off.
    pub fn new(cluster: BlowupCluster, special: usize, c: Vec<i64>, d: Vec<i64>) -> Result<Self> {
        let a = cluster.canonical_coeffs().a;
        let model = WedgeNumericalModel {
            cluster,
            special,
            a,
            c,
            d,
            b: None,
            minimal_target: false,
            assert_b1_lt_1: false,
            assert_no_lift: false,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.cluster.len();
        for (got, name) in [(self.a.len(), "a"), (self.c.len(), "c"), (self.d.len(), "d")] {
            if got != n {
                return Err(Error::InvalidInput(format!(
                    "{name} has {got} entries, the cluster has {n} components"
                )));
            }
        }
        if let Some(b) = &self.b {
            if b.len() != n {
                return Err(Error::Dimension { expected: n, got: b.len() });
            }
        }
        self.cluster.check_index(self.special)?;
        if let Some(i) = self.c.iter().position(|&v| v < 0) {
            return Err(Error::InvalidInput(format!("c_{i} = {} is negative", self.c[i])));
        }
        if self.minimal_target {
            if let Some(i) = self.d.iter().position(|&v| v < 0) {
                return Err(Error::InvalidInput(format!(
                    "d_{i} = {} is negative although the target is minimal",
                    self.d[i]
                )));
            }
        }
        Ok(())
    }

    fn correction(&self) -> Result<Vec<Rational>> {
        let inv = self.cluster.intersection_matrix().inverse()?;
        let cd: Vec<Rational> = self.c.iter().zip(&self.d).map(|(c, d)| int(c + d)).collect();
        inv.mul_vec(&cd)
    }
}

/// `b = a − M⁻¹(c + d)`.
pub fn solve_b(model: &WedgeNumericalModel) -> Result<Vec<Rational>> {
    model.validate()?;
    let corr = model.correction()?;
    Ok(model.a.iter().zip(corr).map(|(&a, k)| int(a as i64) - k).collect())
}

/// Whether the supplied `b` satisfies `a − b = M⁻¹(c + d)` exactly.
pub fn verify_numerical(model: &WedgeNumericalModel) -> Result<bool> {
    model.validate()?;
    let b = model
        .b
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("verification needs b".into()))?;
    let corr = model.correction()?;
    Ok(model
        .a
        .iter()
        .zip(b)
        .zip(&corr)
        .all(|((&a, b), k)| &(int(a as i64) - b) == k))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingVerdict {
    pub lifts: bool,
    /// The model and its hypotheses cannot all hold.
    pub contradiction: bool,
    pub reason: String,
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub b: Vec<Rational>,
    pub a_special: u64,
    #[serde(with = "crate::rational::serde_rational")]
    pub b_special: Rational,
    /// Whether a supplied `b` agrees with the computed one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supplied_b_matches: Option<bool>,
}

/// Runs the lifting argument: `a_special ≤ b_special`, so a transverse
/// special arc (`b_special < 1`) forces `a_special = 0` and the wedge lifts.
pub fn lifting_verdict(model: &WedgeNumericalModel) -> Result<LiftingVerdict> {
    if !model.minimal_target {
        return Err(Error::InvalidInput(
            "the lifting argument needs a minimal target (set minimal_target)".into(),
        ));
    }
    let b = solve_b(model)?;
    if let Some(i) = (0..b.len()).find(|&i| int(model.a[i] as i64) > b[i]) {
        return Err(Error::Invariant(format!(
            "a_{i} > b_{i} although c + d ≥ 0 and M⁻¹ < 0"
        )));
    }
    let s = model.special;
    let a1 = model.a[s];
    let b1 = b[s].clone();
    let b1_text = format_rational(&b1);
    let supplied_b_matches = model.b.as_ref().map(|given| given == &b);

    let (lifts, contradiction, reason) = if model.assert_b1_lt_1 {
        if b1 < Rational::one() {
            if a1 != 0 {
                (true, true, format!("b_{s} = {b1_text} < 1 forces a_{s} = 0, but a_{s} = {a1}"))
            } else if model.assert_no_lift {
                (true, true, format!("b_{s} = {b1_text} < 1 forces a_{s} = 0, so the wedge lifts, contrary to the no-lift hypothesis"))
            } else {
                (true, false, format!("b_{s} = {b1_text} < 1 and a_{s} ≤ b_{s} force a_{s} = 0: the wedge lifts"))
            }
        } else {
            (false, true, format!("b_{s} < 1 was asserted but the model gives b_{s} = {b1_text}"))
        }
    } else if model.assert_no_lift && a1 == 0 {
        (false, true, format!("a wedge that does not lift needs a_{s} > 0, but a_{s} = 0"))
    } else {
        (false, false, format!("b_{s} = {b1_text}; no transversality hypothesis, nothing to conclude"))
    };
    Ok(LiftingVerdict {
        lifts,
        contradiction,
        reason,
        b,
        a_special: a1,
        b_special: b1,
        supplied_b_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{free_chain, single_point};

    #[test]
    fn solve_examples() {
        let m = WedgeNumericalModel::new(single_point(), 0, vec![0], vec![0]).unwrap();
        assert_eq!(solve_b(&m).unwrap(), vec![int(1)]);
        let m = WedgeNumericalModel::new(single_point(), 0, vec![1], vec![0]).unwrap();
        assert_eq!(solve_b(&m).unwrap(), vec![int(2)]);
        let m = WedgeNumericalModel::new(free_chain(2), 1, vec![0, 0], vec![0, 1]).unwrap();
        assert_eq!(m.a, vec![1, 2]);
        assert_eq!(solve_b(&m).unwrap(), vec![int(2), int(4)]);
    }

    #[test]
    fn verify_roundtrip_and_perturbation() {
        let mut m = WedgeNumericalModel::new(free_chain(3), 2, vec![1, 0, 2], vec![0, 3, 0]).unwrap();
        m.b = Some(solve_b(&m).unwrap());
        assert!(verify_numerical(&m).unwrap());
        m.b.as_mut().unwrap()[1] += int(1);
        assert!(!verify_numerical(&m).unwrap());
        let mut m = WedgeNumericalModel::new(free_chain(3), 0, vec![0; 3], vec![0; 3]).unwrap();
        m.b = Some(m.a.iter().map(|&a| int(a as i64)).collect());
        assert!(verify_numerical(&m).unwrap());
    }

    #[test]
    fn lifting_examples() {
        let mut m = WedgeNumericalModel::new(single_point(), 0, vec![0], vec![0]).unwrap();
        assert!(lifting_verdict(&m).is_err());
        m.minimal_target = true;
        m.assert_b1_lt_1 = true;
        let v = lifting_verdict(&m).unwrap();
        assert!(v.contradiction && !v.lifts);

        let mut m = WedgeNumericalModel::new(free_chain(2), 1, vec![0, 0], vec![0, 1]).unwrap();
        m.minimal_target = true;
        m.assert_b1_lt_1 = true;
        let v = lifting_verdict(&m).unwrap();
        assert_eq!(v.b_special, int(4));
        assert!(v.contradiction && !v.lifts);

        // with a supplied a = 0 and c = d = 0 the transverse case lifts
        let mut m = WedgeNumericalModel::new(free_chain(2), 1, vec![0, 0], vec![0, 0]).unwrap();
        m.a = vec![0, 0];
        m.minimal_target = true;
        m.assert_b1_lt_1 = true;
        let v = lifting_verdict(&m).unwrap();
        assert!(v.lifts && !v.contradiction);
        m.assert_no_lift = true;
        assert!(lifting_verdict(&m).unwrap().contradiction);
    }

    #[test]
    fn guards() {
        assert!(BlowupCluster::new(vec![]).is_err());
        assert!(WedgeNumericalModel::new(single_point(), 0, vec![], vec![0]).is_err());
        assert!(WedgeNumericalModel::new(single_point(), 0, vec![-1], vec![0]).is_err());
        assert!(WedgeNumericalModel::new(single_point(), 1, vec![0], vec![0]).is_err());
        let mut m = WedgeNumericalModel::new(single_point(), 0, vec![0], vec![-1]).unwrap();
        assert!(solve_b(&m).is_ok());
        m.minimal_target = true;
        assert!(lifting_verdict(&m).is_err());
    }
}
