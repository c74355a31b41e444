//! Sparse bivariate polynomials with rational coefficients.
//!
//! Text grammar: terms `c*x^a*y^b` joined by `+` / `-`. Any factor may be
//! omitted (`x`, `-y^2`, `3/4`, `2*x*y`), and `−` is accepted for minus.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::binomial;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// `(x exponent, y exponent) -> coefficient`, zero coefficients never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LocalPolynomial {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl LocalPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Rational, a: u32, b: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(a, b, c);
        p
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// `y^q - λ x^p`
    pub fn binomial(q: u32, lambda: Rational, p: u32) -> Self {
        let mut g = Self::monomial(Rational::one(), 0, q);
        g.add_term(p, 0, -lambda);
        g
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((a, b)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    /// Multiplicity at the origin: the lowest total degree. `None` for 0.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, b)| a + b).min()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.add_term(a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &other.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    /// `g(X, X(Y + c))`
    pub fn finite_chart(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (&(a, b), coeff) in &self.terms {
            // x^a y^b -> X^(a+b) (Y + c)^b
            for k in 0..=b {
                let bin = int(binomial(b as i64, k as i64));
                let cpow = if b == k {
                    Rational::one()
                } else {
                    num_traits::pow(c.clone(), (b - k) as usize)
                };
                out.add_term(a + b, k, coeff * bin * cpow);
            }
        }
        out
    }

    /// `g(XY, X)`
    pub fn infinite_chart(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), coeff) in &self.terms {
            out.add_term(a + b, a, coeff.clone());
        }
        out
    }

    /// Divides by `X^k`; every term must be divisible.
    pub fn div_x_pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            if a < k {
                return Err(Error::Invariant(format!(
                    "term x^{a}y^{b} not divisible by x^{k}"
                )));
            }
            out.add_term(a - k, b, c.clone());
        }
        Ok(out)
    }

    /// Order of `g(0, Y)` in `Y`: intersection multiplicity with `{X = 0}`.
    pub fn order_on_x_axis_zero(&self) -> Option<u32> {
        self.terms.keys().filter(|&&(a, _)| a == 0).map(|&(_, b)| b).min()
    }

    /// Order of `g(X, 0)` in `X`: intersection multiplicity with `{Y = 0}`.
    pub fn order_on_y_axis_zero(&self) -> Option<u32> {
        self.terms.keys().filter(|&&(_, b)| b == 0).map(|&(a, _)| a).min()
    }

    /// Substitutes a parametrization `(x(t), y(t))`.
    pub fn eval_param(&self, x: &UniPoly, y: &UniPoly) -> UniPoly {
        let mut out = UniPoly::zero();
        let mut xpows = vec![UniPoly::one()];
        let mut ypows = vec![UniPoly::one()];
        for (&(a, b), c) in &self.terms {
            while xpows.len() <= a as usize {
                let next = xpows.last().unwrap().mul(x);
                xpows.push(next);
            }
            while ypows.len() <= b as usize {
                let next = ypows.last().unwrap().mul(y);
                ypows.push(next);
            }
            out = out.add(&xpows[a as usize].mul(&ypows[b as usize]).scale(c));
        }
        out
    }
}

impl fmt::Display for LocalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // lowest degree first, then by y power descending: "y - x^2"
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(&(a, b), _)| (a + b, std::cmp::Reverse(b)));
        for (k, (&(a, b), c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || (a == 0 && b == 0) {
                factors.push(format_rational(&mag));
            }
            for (var, e) in [("x", a), ("y", b)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for LocalPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let src = s.replace('−', "-");
        let bad = |msg: &str| Error::Polynomial(format!("{msg} in {s:?}"));
        let mut out = LocalPolynomial::zero();
        let mut rest = src.trim();
        if rest.is_empty() {
            return Err(bad("empty polynomial"));
        }
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = Rational::one();
            if let Some(r) = rest.strip_prefix('+') {
                rest = r.trim_start();
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r.trim_start();
            } else if !first {
                return Err(bad("expected '+' or '-'"));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = rest[..end].trim();
            rest = rest[end..].trim_start();
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (mut a, mut b, mut c) = (0u32, 0u32, sign);
            for factor in term.split('*') {
                let factor = factor.trim();
                let (base, exp) = match factor.split_once('^') {
                    Some((base, e)) => (
                        base.trim(),
                        e.trim()
                            .parse::<u32>()
                            .map_err(|_| bad("bad exponent"))?,
                    ),
                    None => (factor, 1),
                };
                match base {
                    "x" => a += exp,
                    "y" => b += exp,
                    num => {
                        let q = parse_rational(num).map_err(|_| bad(&format!("bad factor {num:?}")))?;
                        c *= num_traits::pow(q, exp as usize);
                    }
                }
            }
            out.add_term(a, b, c);
        }
        Ok(out)
    }
}

/// Dense univariate polynomial in `t`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![Rational::one()],
        }
    }

    pub fn t() -> Self {
        UniPoly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = UniPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Order of vanishing at `t = 0`.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
            coeffs.push(a + b);
        }
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut p = UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        };
        p.trim();
        p
    }

    /// Remainder of Euclidean division.
    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let f = &r.coeffs[rd] / &lead;
            for (i, c) in d.coeffs.iter().enumerate() {
                let v = &r.coeffs[rd - dd + i] - &f * c;
                r.coeffs[rd - dd + i] = v;
            }
            r.trim();
        }
        r
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn p(s: &str) -> LocalPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(p("y - x^2").to_string(), "y - x^2");
        assert_eq!(p("y−x^2"), p("y - x^2"));
        assert_eq!(p("1/2*x*y + 3"), {
            let mut g = LocalPolynomial::monomial(ratio(1, 2), 1, 1);
            g.add_term(0, 0, int(3));
            g
        });
        assert_eq!(p("2*x^2*y^3").to_string(), "2*x^2*y^3");
        assert_eq!(p("x - x"), LocalPolynomial::zero());
        assert_eq!(p("-x").to_string(), "-x");
        assert_eq!(p("x*x*y"), LocalPolynomial::monomial(int(1), 2, 1));
        assert!("".parse::<LocalPolynomial>().is_err());
        assert!("x +".parse::<LocalPolynomial>().is_err());
        assert!("z".parse::<LocalPolynomial>().is_err());
        assert!("x^a".parse::<LocalPolynomial>().is_err());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["y^2 - 2*x^3", "x + y", "-3/4*x*y^2 + x^5", "7"] {
            assert_eq!(p(&p(s).to_string()), p(s));
        }
    }

    #[test]
    fn charts() {
        // y - x^2 -> X(Y + 0) - X^2 = X(Y - X)
        let g = p("y - x^2").finite_chart(&int(0));
        assert_eq!(g, p("x*y - x^2"));
        assert_eq!(g.div_x_pow(1).unwrap(), p("y - x"));
        // (x, y) -> (XY, X): x^2 + y^3 -> X^2 Y^2 + X^3
        assert_eq!(p("x^2 + y^3").infinite_chart(), p("x^2*y^2 + x^3"));
        // y -> X(Y + 2)
        assert_eq!(p("y").finite_chart(&int(2)), p("x*y + 2*x"));
        assert!(p("y + x").div_x_pow(1).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(p("y^2 - x^3").order(), Some(2));
        assert_eq!(p("1 + x").order(), Some(0));
        assert_eq!(LocalPolynomial::zero().order(), None);
        assert_eq!(p("y^3 + x*y").order_on_x_axis_zero(), Some(3));
        assert_eq!(p("y^3 + x*y").order_on_y_axis_zero(), None);
    }

    #[test]
    fn univariate_ops() {
        let t = UniPoly::t();
        let g = LocalPolynomial::binomial(2, int(1), 3);
        // y^2 - x^3 at (t^2, t^3) vanishes
        assert!(g.eval_param(&t.mul(&t), &t.mul(&t).mul(&t)).is_zero());
        let a = t.mul(&t).add(&UniPoly::constant(int(-1)));
        let b = t.add(&UniPoly::constant(int(-1)));
        let g = a.gcd(&b);
        assert_eq!(g.degree(), Some(1));
        assert_eq!(t.mul(&t).order(), Some(2));
    }
}
