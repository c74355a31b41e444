//! Divisorial valuations `ord_{F_e}` attached to cluster points.
//!
//! Two routes to the same numbers are kept side by side:
//!
//! * [`ord_poly`] follows the strict transform of a polynomial chart by
//!   chart and accumulates multiplicities through the proximity relation;
//! * [`strict_transform_profile`] reads off the intersection numbers
//!   `t_i = g̃ · F_i` in the final model, and `−M⁻¹ t` must reproduce the
//!   same orders.
//!
//! The comparison `ν_E ≤ ν_F` is decided on rows of `−M⁻¹` in the minimal
//! joint model, since every valuation vector is `−M⁻¹ t` with `t ≥ 0` and
//! curvettes realise the unit profiles.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::{BlowupCluster, Chart};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::poly::{LocalPolynomial, UniPoly};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationVector {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub values: Vec<Rational>,
}

impl ValuationVector {
    pub fn le(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}

/// `−M⁻¹` for the cluster's final model. Its `(i, j)` entry is
/// `ord_{F_i}` of a curvette of `F_j`.
pub fn minus_inverse(cluster: &BlowupCluster) -> ExactMatrix {
    cluster
        .intersection_matrix()
        .inverse()
        .expect("cluster intersection matrices are unimodular")
        .neg()
}

/// Row `e` of `−M⁻¹`: entry `i` is `ord_{F_e}` of a curvette through `p_i`.
pub fn curvette_orders(cluster: &BlowupCluster, e: usize) -> Result<ValuationVector> {
    cluster.check_index(e)?;
    Ok(ValuationVector {
        values: minus_inverse(cluster).row(e).to_vec(),
    })
}

/// Local equation of the strict transform of `g` at every point, in that
/// point's frame.
pub fn local_transforms(cluster: &BlowupCluster, g: &LocalPolynomial) -> Result<Vec<LocalPolynomial>> {
    if g.is_zero() {
        return Err(Error::Polynomial("the zero polynomial has no order".into()));
    }
    let mut out: Vec<LocalPolynomial> = Vec::with_capacity(cluster.len());
    out.push(g.clone());
    for i in 1..cluster.len() {
        let home = cluster.home(i).expect("non-root point");
        let (chart, c) = cluster.chart_of(i)?;
        let h = &out[home];
        let m = h.order().expect("strict transform is nonzero");
        let total = match chart {
            Chart::Finite => h.finite_chart(&c),
            Chart::Infinite => h.infinite_chart(),
        };
        out.push(total.div_x_pow(m)?);
    }
    Ok(out)
}

fn multiplicities(transforms: &[LocalPolynomial]) -> Vec<u64> {
    transforms
        .iter()
        .map(|h| h.order().expect("nonzero") as u64)
        .collect()
}

/// `ord_{F_j}(g)` for every point `j`, by
/// `v_j = m_j + Σ_{p_j proximate to p_i} v_i`.
pub fn total_transform_orders(cluster: &BlowupCluster, g: &LocalPolynomial) -> Result<Vec<u64>> {
    let m = multiplicities(&local_transforms(cluster, g)?);
    let mut v: Vec<u64> = Vec::with_capacity(cluster.len());
    for (j, p) in cluster.points().iter().enumerate() {
        let val = m[j] + p.proximate_to().map(|i| v[i]).sum::<u64>();
        v.push(val);
    }
    Ok(v)
}

/// `ord_{F_e}(g)`. Only the points `p_e` depends on need tangents.
pub fn ord_poly(cluster: &BlowupCluster, g: &LocalPolynomial, e: usize) -> Result<u64> {
    let jm = cluster.minimal_joint_model(e, e)?;
    let v = total_transform_orders(&jm.cluster, g)?;
    Ok(v[jm.e])
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

/// Intersection numbers `t_i` of the final strict transform of `g` with
/// each `F_i`, read off chart by chart in the final model.
///
/// `F_i` meets the fresh strict transform in `m_i` points with
/// multiplicity. Each of those positions that was blown up later is
/// replaced by the intersection that survives there, which is followed
/// along `F_i` through the chain of satellite points sitting on it.
pub fn strict_transform_profile(cluster: &BlowupCluster, g: &LocalPolynomial) -> Result<Vec<u64>> {
    let gs = local_transforms(cluster, g)?;
    let m = multiplicities(&gs);
    let n = cluster.len();
    let mut t = Vec::with_capacity(n);
    for i in 0..n {
        let mut ti = m[i] as i64;
        for q in (0..n).filter(|&q| cluster.home(q) == Some(i)) {
            let fresh = gs[q].order_on_x_axis_zero().ok_or_else(|| {
                Error::Invariant(format!("strict transform at p_{q} contains F_{i}"))
            })?;
            ti -= fresh as i64;
            ti += surviving_intersection(cluster, &gs, &m, q, Axis::X, i)? as i64;
        }
        if ti < 0 {
            return Err(Error::Invariant(format!("negative intersection with F_{i}")));
        }
        t.push(ti as u64);
    }
    Ok(t)
}

/// Intersection of the final strict transform with `F_i` over the point
/// `p_q`, where `F_i` is the `axis` coordinate axis of `p_q`'s frame.
fn surviving_intersection(
    cluster: &BlowupCluster,
    gs: &[LocalPolynomial],
    m: &[u64],
    q: usize,
    axis: Axis,
    i: usize,
) -> Result<u64> {
    let next = (0..cluster.len()).find(|&r| {
        cluster.home(r) == Some(q) && cluster.is_proximate(r, q) && cluster.is_proximate(r, i)
    });
    if let Some(r) = next {
        // satellite frame: x = F_q, y = F_i
        return surviving_intersection(cluster, gs, m, r, Axis::Y, i);
    }
    let total = match axis {
        Axis::X => gs[q].infinite_chart(),
        Axis::Y => gs[q].finite_chart(&Rational::zero()),
    };
    let h = total.div_x_pow(m[q] as u32)?;
    // in both charts the strict transform of F_i is {Y = 0}
    h.order_on_y_axis_zero()
        .map(u64::from)
        .ok_or_else(|| Error::Invariant(format!("strict transform contains F_{i}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Comparison {
    LessEq,
    GreaterEq,
    Equal,
    Incomparable,
}

/// Compares `ν_{F_e}` with `ν_{F_f}` componentwise on `−M⁻¹` rows of the
/// minimal joint model.
pub fn compare(cluster: &BlowupCluster, e: usize, f: usize) -> Result<Comparison> {
    if e == f {
        cluster.check_index(e)?;
        return Ok(Comparison::Equal);
    }
    let jm = cluster.minimal_joint_model(e, f)?;
    let inv = minus_inverse(&jm.cluster);
    let (re, rf) = (inv.row(jm.e), inv.row(jm.f));
    let le = re.iter().zip(rf).all(|(a, b)| a <= b);
    let ge = re.iter().zip(rf).all(|(a, b)| a >= b);
    match (le, ge) {
        (true, true) => Err(Error::Invariant(format!(
            "distinct divisors F_{e} and F_{f} have equal valuations"
        ))),
        (true, false) => Ok(Comparison::LessEq),
        (false, true) => Ok(Comparison::GreaterEq),
        (false, false) => Ok(Comparison::Incomparable),
    }
}

/// Polynomial parametrization `t ↦ (x(t), y(t))` of a curvette of `F_i`:
/// the line of slope `slope` through `p_i`, pushed down to the base.
pub fn curvette_parametrization(
    cluster: &BlowupCluster,
    i: usize,
    slope: &Rational,
) -> Result<(UniPoly, UniPoly)> {
    let (x, y, _) = push_down(cluster, i, slope)?;
    Ok((x, y))
}

/// Also returns the total order of the coordinates divided by when the
/// branch is lifted back up chart by chart.
fn push_down(cluster: &BlowupCluster, i: usize, slope: &Rational) -> Result<(UniPoly, UniPoly, usize)> {
    cluster.check_index(i)?;
    let t = UniPoly::t();
    let (mut x, mut y) = (t.clone(), t.scale(slope));
    let mut loss = 0;
    let mut q = i;
    while let Some(home) = cluster.home(q) {
        let (chart, c) = cluster.chart_of(q)?;
        (x, y) = match chart {
            Chart::Finite => {
                let shifted = y.add(&UniPoly::constant(c));
                (x.clone(), x.mul(&shifted))
            }
            Chart::Infinite => (x.mul(&y), x),
        };
        loss += match chart {
            Chart::Finite => x.order(),
            Chart::Infinite => y.order(),
        }
        .expect("nonzero coordinates");
        q = home;
    }
    Ok((x, y, loss))
}

/// Implicit equation of a curvette of `F_i` with a single branch at the
/// origin, checked to have intersection profile `e_i`.
///
/// The pushed-down line usually meets other exceptional components away
/// from the cluster points, so its image has extra branches at the origin.
/// Instead the branch is reparametrized as `(u τⁿ, Y(τ))` (or with the
/// roles swapped), `Y` is truncated just beyond the precision the chart
/// chain needs, and the truncated branch is implicitized.
pub fn curvette_polynomial(cluster: &BlowupCluster, i: usize) -> Result<LocalPolynomial> {
    cluster.check_index(i)?;
    let used: Vec<Rational> = (1..cluster.len())
        .filter(|&k| cluster.home(k) == Some(i) && !cluster.points()[k].is_satellite())
        .filter_map(|k| cluster.chart_of(k).ok())
        .filter(|(chart, _)| *chart == Chart::Finite)
        .map(|(_, c)| c)
        .collect();
    let slope = (2i64..)
        .map(int)
        .find(|s| !used.contains(s))
        .expect("finitely many tangents");
    let (x, y, loss) = push_down(cluster, i, &slope)?;
    let swap = y.order() < x.order();
    let (lead, other) = if swap { (y, x) } else { (x, y) };
    let n = lead.order().expect("nonzero");
    let mut target = vec![0u64; cluster.len()];
    target[i] = 1;
    for prec in loss + 1..loss + 24 {
        let (u0, tail) = reparametrize(&lead, &other, n, prec);
        let mut coeffs = vec![Rational::zero(); n];
        coeffs.push(u0);
        let mono = UniPoly::from_coeffs(coeffs);
        let (px, py) = if swap { (tail, mono) } else { (mono, tail) };
        let g = implicitize(&px, &py)?;
        if strict_transform_profile(cluster, &g).ok().as_deref() == Some(&target[..]) {
            return Ok(g);
        }
    }
    Err(Error::Invariant(format!("no curvette equation found for F_{i}")))
}

/// Writes `lead(t) = u0 τⁿ` and returns `(u0, other(t(τ)))` truncated at
/// degree `prec` in `τ`.
fn reparametrize(lead: &UniPoly, other: &UniPoly, n: usize, prec: usize) -> (Rational, UniPoly) {
    let len = prec + 1;
    let c = lead.coeffs();
    let u0 = c[n].clone();
    // w = u / u0 - 1
    let mut w: Vec<Rational> = (0..len)
        .map(|k| c.get(n + k).map_or_else(Rational::zero, |v| v / &u0))
        .collect();
    w[0] = Rational::zero();
    // s = (1 + w)^(1/n), lead = u0 (t s(t))^n
    let e = Rational::new(1.into(), (n as i64).into());
    let mut s = vec![Rational::zero(); len];
    let mut wk = one_series(len);
    let mut binom = Rational::one();
    for k in 0..len {
        for (j, v) in wk.iter().enumerate() {
            s[j] += &binom * v;
        }
        binom = binom * (&e - int(k as i64)) / int(k as i64 + 1);
        wk = series_mul(&wk, &w, len);
    }
    // τ = t s(t)  ⇒  t = τ r(t) with r = 1/s, solved by fixed point
    let r = series_inv(&s, len);
    let mut tau = vec![Rational::zero(); len];
    if len > 1 {
        tau[1] = Rational::one();
    }
    let mut t_of_tau = tau.clone();
    for _ in 0..len {
        t_of_tau = series_mul(&tau, &series_compose(&r, &t_of_tau, len), len);
    }
    let tail = series_compose(other.coeffs(), &t_of_tau, len);
    (u0, UniPoly::from_coeffs(tail))
}

fn one_series(len: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[0] = Rational::one();
    v
}

fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn series_inv(a: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    out[0] = a[0].recip();
    for k in 1..len {
        let mut acc = Rational::zero();
        for j in 1..=k.min(a.len() - 1) {
            acc += &a[j] * &out[k - j];
        }
        out[k] = -acc * &out[0];
    }
    out
}

/// `f(g)` for `g(0) = 0`, by Horner.
fn series_compose(f: &[Rational], g: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for c in f.iter().take(len).rev() {
        out = series_mul(&out, g, len);
        out[0] += c;
    }
    out
}

/// Lowest-degree `G` with `G(x(τ), y(τ)) = 0`.
fn implicitize(x: &UniPoly, y: &UniPoly) -> Result<LocalPolynomial> {
    let (dx, dy) = (x.degree().unwrap_or(0), y.degree().unwrap_or(0));
    // deg_x G <= deg y and deg_y G <= deg x
    let (max_a, max_b) = (dy as u32, dx as u32);
    for d in 1..=(max_a + max_b) {
        let monomials: Vec<(u32, u32)> = (0..=d)
            .flat_map(|total| (0..=total).map(move |b| (total - b, b)))
            .filter(|&(a, b)| a <= max_a && b <= max_b)
            .collect();
        let columns: Vec<UniPoly> = monomials
            .iter()
            .map(|&(a, b)| LocalPolynomial::monomial(Rational::one(), a, b).eval_param(x, y))
            .collect();
        let rows = columns.iter().filter_map(|c| c.degree()).max().unwrap_or(0) + 1;
        let mat: Vec<Vec<Rational>> = (0..rows)
            .map(|r| {
                columns
                    .iter()
                    .map(|c| c.coeffs().get(r).cloned().unwrap_or_else(Rational::zero))
                    .collect()
            })
            .collect();
        if let Some(v) = nullspace_vector(mat, monomials.len()) {
            let mut g = LocalPolynomial::zero();
            for (&(a, b), c) in monomials.iter().zip(v) {
                g.add_term(a, b, c);
            }
            return Ok(g);
        }
    }
    Err(Error::Invariant("implicitization failed".into()))
}

/// Some nonzero kernel vector, via reduced row echelon form.
fn nullspace_vector(mut a: Vec<Vec<Rational>>, ncols: usize) -> Option<Vec<Rational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let lead = a[row][col].clone();
        for v in a[row].iter_mut() {
            *v /= &lead;
        }
        for r in 0..a.len() {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..ncols {
                    let sub = &f * &a[row][c];
                    a[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free = (0..ncols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); ncols];
    v[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[r][free].clone();
    }
    // normalise: first nonzero coefficient positive
    if let Some(first) = v.iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            v.iter_mut().for_each(|c| *c = -c.clone());
        }
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::enumerate_structures;
    use crate::fixtures::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn p(s: &str) -> LocalPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn curvette_order_examples() {
        assert_eq!(curvette_orders(&single_point(), 0).unwrap().values, ints(&[1]));
        let c = free_chain(2);
        assert_eq!(curvette_orders(&c, 0).unwrap().values, ints(&[1, 1]));
        assert_eq!(curvette_orders(&c, 1).unwrap().values, ints(&[1, 2]));
        let s = satellite_triple();
        assert_eq!(curvette_orders(&s, 0).unwrap().values, ints(&[1, 1, 2]));
        assert_eq!(curvette_orders(&s, 1).unwrap().values, ints(&[1, 2, 3]));
        assert_eq!(curvette_orders(&s, 2).unwrap().values, ints(&[2, 3, 6]));
        let t = two_directions();
        assert_eq!(
            minus_inverse(&t),
            ExactMatrix::from_i64_rows(&[[1, 1, 1], [1, 2, 1], [1, 1, 2]])
        );
    }

    #[test]
    fn ord_poly_examples() {
        assert_eq!(ord_poly(&single_point(), &p("x"), 0).unwrap(), 1);
        let c = free_chain(2);
        assert_eq!(ord_poly(&c, &p("y"), 1).unwrap(), 2);
        assert_eq!(ord_poly(&c, &p("x"), 1).unwrap(), 1);
        assert_eq!(ord_poly(&c, &p("y - x^2"), 1).unwrap(), 2);
        // cusp through the satellite triple: ord = (2, 3, 6)
        let s = satellite_triple();
        let v = total_transform_orders(&s, &p("y^2 - x^3")).unwrap();
        assert_eq!(v, vec![2, 3, 6]);
    }

    #[test]
    fn ord_poly_errors() {
        let c = free_chain(2);
        assert!(matches!(
            ord_poly(&c, &LocalPolynomial::zero(), 1),
            Err(Error::Polynomial(_))
        ));
        let no_tangent = BlowupCluster::new(vec![
            crate::cluster::ClusterPoint::root(),
            crate::cluster::ClusterPoint::free(0, None),
            crate::cluster::ClusterPoint::free(0, Some(crate::cluster::Tangent::Finite(int(1)))),
        ])
        .unwrap();
        assert_eq!(ord_poly(&no_tangent, &p("y"), 1), Err(Error::MissingTangent(1)));
        // p_2 does not depend on p_1's tangent
        assert_eq!(ord_poly(&no_tangent, &p("y - x"), 2).unwrap(), 2);
    }

    #[test]
    fn profile_matches_orders_on_examples() {
        let s = satellite_triple();
        let g = p("y^2 - x^3");
        let t = strict_transform_profile(&s, &g).unwrap();
        assert_eq!(t, vec![0, 0, 1]);
        let v: Vec<Rational> = minus_inverse(&s).mul_vec(&ints(&[0, 0, 1])).unwrap();
        assert_eq!(v, ints(&[2, 3, 6]));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&free_chain(2), 0, 1).unwrap(), Comparison::LessEq);
        assert_eq!(compare(&free_chain(2), 1, 0).unwrap(), Comparison::GreaterEq);
        let s = satellite_triple();
        assert_eq!(compare(&s, 0, 1).unwrap(), Comparison::LessEq);
        assert_eq!(compare(&s, 1, 2).unwrap(), Comparison::LessEq);
        assert_eq!(compare(&s, 2, 2).unwrap(), Comparison::Equal);
        assert_eq!(compare(&two_directions(), 1, 2).unwrap(), Comparison::Incomparable);
    }

    #[test]
    fn ancestry_is_monotone() {
        for n in 1..=6 {
            for c in enumerate_structures(n) {
                for f in 0..n {
                    for e in c.ancestors(&[f]) {
                        if e != f {
                            assert_eq!(compare(&c, e, f).unwrap(), Comparison::LessEq);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn curvette_polynomials_realise_columns() {
        let s = satellite_triple();
        let g = curvette_polynomial(&s, 2).unwrap();
        // a curvette of the last satellite is a cusp
        assert_eq!(g.order(), Some(2));
        let v = total_transform_orders(&s, &g).unwrap();
        assert_eq!(v, vec![2, 3, 6]);
        let c = free_chain(3);
        let g = curvette_polynomial(&c, 2).unwrap();
        assert_eq!(g.order(), Some(1));
        assert_eq!(total_transform_orders(&c, &g).unwrap(), vec![1, 2, 3]);
    }
}
