//! Dense square matrices over the rationals.
//!
//! Determinants and leading principal minors use fraction-free (Bareiss)
//! elimination on a denominator-cleared integer copy; inversion and solving
//! use Gauss-Jordan over [`Rational`]. Nothing here touches floating point.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn zeros(n: usize) -> Self {
        ExactMatrix {
            n,
            entries: vec![Rational::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(ExactMatrix { n, entries })
    }

    /// Convenience constructor for integer matrices. Panics on ragged input.
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&v| int(v)).collect())
            .collect();
        Self::from_rows(rows).expect("ragged integer matrix")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        let n = self.n;
        self.entries
            .iter()
            .enumerate()
            .map(move |(k, v)| (k / n, k % n, v))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|v| v.denom().is_one())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for (i, j, v) in self.entries() {
            t.set(j, i, v.clone());
        }
        t
    }

    pub fn neg(&self) -> Self {
        ExactMatrix {
            n: self.n,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = &out.entries[i * n + j] + a * b;
                        out.entries[i * n + j] = cur;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: v.len(),
            });
        }
        Ok(self
            .rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Leading `k × k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        let mut out = Self::zeros(k);
        for i in 0..k {
            for j in 0..k {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Integer copy scaled by the lcm of all denominators, with that lcm.
    fn cleared(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let l = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let rows = self
            .rows()
            .map(|row| {
                row.iter()
                    .map(|v| v.numer() * (&l / v.denom()))
                    .collect()
            })
            .collect();
        (rows, l)
    }

    /// All leading principal minors `Δ_1, ..., Δ_n`.
    ///
    /// Bareiss elimination without pivoting: after step `k` the pivot
    /// position holds `Δ_{k+1}` of the scaled matrix. If a pivot vanishes the
    /// remaining minors are computed one by one with pivoting.
    pub fn leading_minors(&self) -> Vec<Rational> {
        let n = self.n;
        let (mut a, l) = self.cleared();
        let mut out = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = a[k][k].clone();
            out.push(Rational::new(pivot.clone(), l.pow(k as u32 + 1)));
            if pivot.is_zero() {
                for m in k + 2..=n {
                    out.push(self.leading_block(m).determinant());
                }
                return out;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = pivot;
        }
        out
    }

    /// Exact determinant by Bareiss elimination with row pivoting.
    pub fn determinant(&self) -> Rational {
        let n = self.n;
        if n == 0 {
            return Rational::one();
        }
        let (mut a, l) = self.cleared();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Rational::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Rational::new(sign * &a[n - 1][n - 1], l.pow(n as u32))
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::Singular)?;
            if pivot_row != col {
                a.swap_rows(col, pivot_row);
                inv.swap_rows(col, pivot_row);
            }
            let p = a.get(col, col).clone();
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                a.sub_row_multiple(r, col, &f);
                inv.sub_row_multiple(r, col, &f);
            }
        }
        Ok(inv)
    }

    /// Solves `self · x = rhs` exactly.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        self.inverse()?.mul_vec(rhs)
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        for j in 0..self.n {
            self.entries.swap(r1 * self.n + j, r2 * self.n + j);
        }
    }

    fn scale_row(&mut self, r: usize, divisor: &Rational) {
        for j in 0..self.n {
            let v = &self.entries[r * self.n + j] / divisor;
            self.entries[r * self.n + j] = v;
        }
    }

    /// row[r] -= f * row[src]
    fn sub_row_multiple(&mut self, r: usize, src: usize, f: &Rational) {
        for j in 0..self.n {
            let s = &self.entries[src * self.n + j];
            if s.is_zero() {
                continue;
            }
            let v = &self.entries[r * self.n + j] - f * s;
            self.entries[r * self.n + j] = v;
        }
    }

    pub fn is_identity(&self) -> bool {
        self.entries()
            .all(|(i, j, v)| if i == j { v.is_one() } else { v.is_zero() })
    }

    pub fn all_nonpositive(&self) -> bool {
        self.entries.iter().all(|v| !v.is_positive())
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(format_rational).collect())
            .collect()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix{:?}", self.to_string_rows())
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_string_rows();
        let width = rows.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for (i, row) in rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v:>width$}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<Vec<serde_json::Value>>::deserialize(d)?;
        let rows = raw
            .iter()
            .map(|r| {
                r.iter()
                    .map(crate::rational::serde_rational::from_value)
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        ExactMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64_rows(rows)
    }

    // Cofactor expansion; exponential, only for the small test matrices.
    fn det_by_cofactors(a: &ExactMatrix) -> Rational {
        let n = a.dim();
        if n == 0 {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for j in 0..n {
            let minor = minor_of(a, 0, j);
            let term = a.get(0, j) * det_by_cofactors(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn minor_of(a: &ExactMatrix, r: usize, c: usize) -> ExactMatrix {
        let rows = (0..a.dim())
            .filter(|&i| i != r)
            .map(|i| {
                (0..a.dim())
                    .filter(|&j| j != c)
                    .map(|j| a.get(i, j).clone())
                    .collect()
            })
            .collect();
        ExactMatrix::from_rows(rows).unwrap()
    }

    fn adjugate_inverse(a: &ExactMatrix) -> ExactMatrix {
        let d = det_by_cofactors(a);
        let n = a.dim();
        let mut out = ExactMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let c = det_by_cofactors(&minor_of(a, j, i));
                let c = if (i + j) % 2 == 0 { c } else { -c };
                out.set(i, j, c / &d);
            }
        }
        out
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(m(&[&[-2]]).inverse().unwrap(), {
            let mut e = ExactMatrix::zeros(1);
            e.set(0, 0, ratio(-1, 2));
            e
        });
        let a2 = m(&[&[-2, 1], &[1, -2]]);
        let expected = ExactMatrix::from_rows(vec![
            vec![ratio(-2, 3), ratio(-1, 3)],
            vec![ratio(-1, 3), ratio(-2, 3)],
        ])
        .unwrap();
        assert_eq!(a2.inverse().unwrap(), expected);
        assert_eq!(adjugate_inverse(&a2), expected);

        let c2 = m(&[&[-2, 1], &[1, -1]]);
        assert_eq!(c2.inverse().unwrap(), m(&[&[-1, -1], &[-1, -2]]));
        assert_eq!(adjugate_inverse(&c2), m(&[&[-1, -1], &[-1, -2]]));
    }

    #[test]
    fn singular_is_an_error() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular));
        assert_eq!(m(&[&[0]]).inverse(), Err(Error::Singular));
    }

    #[test]
    fn minors_of_a2() {
        assert_eq!(m(&[&[-2, 1], &[1, -2]]).leading_minors(), vec![int(-2), int(3)]);
        // zero pivot in the middle: minors after it still computed
        let z = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]);
        assert_eq!(z.leading_minors(), vec![int(0), int(-1), int(-2)]);
    }

    #[test]
    fn display_aligns() {
        let s = m(&[&[-2, 1], &[1, -2]]).to_string();
        assert_eq!(s, "[-2  1]\n[ 1 -2]");
    }

    fn small_matrix() -> impl Strategy<Value = ExactMatrix> {
        (1usize..=4).prop_flat_map(|n| {
            proptest::collection::vec((-4i64..=4, 1i64..=3), n * n).prop_map(move |v| {
                let rows = v
                    .chunks(n)
                    .map(|r| r.iter().map(|&(p, q)| ratio(p, q)).collect())
                    .collect();
                ExactMatrix::from_rows(rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn bareiss_matches_cofactors(a in small_matrix()) {
            prop_assert_eq!(a.determinant(), det_by_cofactors(&a));
            let minors = a.leading_minors();
            for (k, d) in minors.iter().enumerate() {
                prop_assert_eq!(d, &det_by_cofactors(&a.leading_block(k + 1)));
            }
        }

        #[test]
        fn inverse_roundtrip(a in small_matrix()) {
            match a.inverse() {
                Ok(inv) => {
                    prop_assert!(a.mul(&inv).unwrap().is_identity());
                    prop_assert_eq!(inv, adjugate_inverse(&a));
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::Singular);
                    prop_assert!(det_by_cofactors(&a).is_zero());
                }
            }
        }
    }
}
