//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! All frame, coframe and chart coefficient functions live in this ring.
//! Polynomials are over four variables at most; charts use only the first
//! two (`u1`, `u2`), ambient expressions use all four (`y1`..`y4`). Terms
//! are kept sorted by exponent vector with no stored zeros, so equality is
//! structural and printing is canonical.

use crate::scalar::{Rational, Scalar};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector of one monomial.
pub type Expo = [u8; 4];

/// Degree weights of the graded coordinates `y1..y4`.
pub const WEIGHTS: [u32; 4] = [1, 1, 2, 3];

/// A polynomial in up to four variables over the rationals.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    /// Sorted by exponent vector; coefficients never zero.
    terms: Vec<(Expo, Rational)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        if num_traits::Zero::is_zero(&c) {
            Self::zero()
        } else {
            MultiPoly {
                terms: vec![([0; 4], c)],
            }
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from_integer(1.into()))
    }

    /// The variable `x_i` for `i` in `0..4`.
    pub fn var(i: usize) -> Self {
        assert!(i < 4, "variable index out of range");
        let mut e = [0u8; 4];
        e[i] = 1;
        MultiPoly {
            terms: vec![(e, Rational::from_integer(1.into()))],
        }
    }

    pub fn monomial(expo: Expo, c: Rational) -> Self {
        if num_traits::Zero::is_zero(&c) {
            Self::zero()
        } else {
            MultiPoly {
                terms: vec![(expo, c)],
            }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Expo, Rational)>) -> Self {
        let mut map: BTreeMap<Expo, Rational> = BTreeMap::new();
        for (e, c) in terms {
            let entry = map
                .entry(e)
                .or_insert_with(|| Rational::from_integer(0.into()));
            *entry += c;
        }
        MultiPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Expo, Rational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(e, _)| *e == [0; 4])
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(e, _)| *e == [0; 4])
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| Rational::from_integer(0.into()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if num_traits::Zero::is_zero(c) {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative in variable `i`.
    pub fn diff(&self, i: usize) -> Self {
        assert!(i < 4);
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] -= 1;
            out.push((e2, c * Rational::from_integer(e[i].into())));
        }
        Self::from_terms(out)
    }

    /// Evaluates at a point over either backend.
    pub fn eval<S: Scalar>(&self, x: &[S; 4]) -> S {
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = S::from_rational(c);
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    t = t * x[i].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Evaluates a chart polynomial (variables 0 and 1 only) at `u`.
    pub fn eval2<S: Scalar>(&self, u: &[S; 2]) -> S {
        self.eval(&[u[0].clone(), u[1].clone(), S::zero(), S::zero()])
    }

    /// Substitutes `maps[i]` for variable `i`; exact composition.
    pub fn subst(&self, maps: &[MultiPoly; 4]) -> MultiPoly {
        let mut pow_cache: [Vec<MultiPoly>; 4] = [vec![], vec![], vec![], vec![]];
        let power = |i: usize, n: u8, cache: &mut [Vec<MultiPoly>; 4]| {
            while cache[i].len() <= n as usize {
                let next = match cache[i].last() {
                    None => MultiPoly::one(),
                    Some(p) => p * &maps[i],
                };
                cache[i].push(next);
            }
            cache[i][n as usize].clone()
        };
        let mut acc = MultiPoly::zero();
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(c.clone());
            for i in 0..4 {
                if e[i] > 0 {
                    t = &t * &power(i, e[i], &mut pow_cache);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Highest weighted degree (weights 1,1,2,3) over the monomials, or
    /// `None` for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms
            .iter()
            .map(|(e, _)| {
                e.iter()
                    .zip(WEIGHTS.iter())
                    .map(|(&ei, &w)| ei as u32 * w)
                    .sum()
            })
            .max()
    }

    /// True if every monomial has weighted degree `d`.
    pub fn is_weighted_homogeneous(&self, d: u32) -> bool {
        self.terms.iter().all(|(e, _)| {
            e.iter()
                .zip(WEIGHTS.iter())
                .map(|(&ei, &w)| ei as u32 * w)
                .sum::<u32>()
                == d
        })
    }

    /// Largest absolute coefficient, as `f64`. Rough size gauge for
    /// tolerance scaling.
    pub fn coeff_sup(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, c)| crate::scalar::rational_to_f64(&c.abs()))
            .fold(0.0, f64::max)
    }

    /// Renders with the given variable names; canonical (sorted) term order.
    pub fn display<'a>(&'a self, names: &'a [&'a str; 4]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            match self.terms[i].0.cmp(&rhs.terms[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(rhs.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = &self.terms[i].1 + &rhs.terms[j].1;
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&rhs.terms[j..]);
        MultiPoly { terms: out }
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        if self.is_zero() || rhs.is_zero() {
            return MultiPoly::zero();
        }
        let mut map: BTreeMap<Expo, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for k in 0..4 {
                    e[k] = e[k].checked_add(eb[k]).expect("monomial exponent overflow");
                }
                let entry = map
                    .entry(e)
                    .or_insert_with(|| Rational::from_integer(0.into()));
                *entry += ca * cb;
            }
        }
        MultiPoly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $f:ident),*) => {$(
        impl $trait for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, rhs: MultiPoly) -> MultiPoly { $trait::$f(&self, &rhs) }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&["y1", "y2", "y3", "y4"]))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: &'a [&'a str; 4],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.poly.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let has_vars = e.iter().any(|&x| x > 0);
            if !has_vars || !mag.is_one() {
                write!(f, "{}", mag)?;
                if has_vars {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for i in 0..4 {
                if e[i] == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.names[i])?;
                if e[i] > 1 {
                    write!(f, "^{}", e[i])?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn y(i: usize) -> MultiPoly {
        MultiPoly::var(i)
    }

    #[test]
    fn arithmetic_and_canonical_form() {
        // (y1 + y2)^2 = y1^2 + 2 y1 y2 + y2^2
        let p = (&y(0) + &y(1)).pow(2);
        assert_eq!(p.num_terms(), 3);
        let q = &(&y(0) * &y(0)) + &(&y(0) * &y(1)).scale(&rat(2, 1));
        let q = &q + &(&y(1) * &y(1));
        assert_eq!(p, q);
        assert!((&p - &q).is_zero());
    }

    #[test]
    fn derivative_and_eval() {
        // d/dy1 (y1^2 y3 - y2/2) = 2 y1 y3
        let p = &(&y(0) * &y(0)) * &y(2);
        let p = &p - &y(1).scale(&rat(1, 2));
        let d = p.diff(0);
        let expect = (&y(0) * &y(2)).scale(&rat(2, 1));
        assert_eq!(d, expect);
        let v = p.eval(&[rat(1, 2), rat(4, 1), rat(3, 1), rat(0, 1)]);
        assert_eq!(v, rat(3, 4) - rat(2, 1));
        let vf = p.eval(&[0.5f64, 4.0, 3.0, 0.0]);
        assert!((vf - (-1.25)).abs() < 1e-15);
    }

    #[test]
    fn substitution_composes_exactly() {
        // p(y) = y3^2, y3 -> u1 + u2^2 gives (u1 + u2^2)^2
        let p = y(2).pow(2);
        let maps = [y(0), y(1), &y(0) + &y(1).pow(2), MultiPoly::zero()];
        let s = p.subst(&maps);
        assert_eq!(s, (&y(0) + &y(1).pow(2)).pow(2));
    }

    #[test]
    fn weighted_degrees() {
        // y4 * y1 has weighted degree 4, y3 has 2
        let p = &y(3) * &y(0);
        assert_eq!(p.weighted_degree(), Some(4));
        assert!(y(2).is_weighted_homogeneous(2));
        assert!(!(&y(2) + &y(0)).is_weighted_homogeneous(2));
        assert_eq!(MultiPoly::zero().weighted_degree(), None);
    }

    #[test]
    fn display_is_readable() {
        let p = &(&y(0) * &y(0)).scale(&rat(1, 1)) - &y(1).scale(&rat(1, 2));
        assert_eq!(
            format!("{}", p.display(&["u1", "u2", "u3", "u4"])),
            "u1^2 - 1/2*u2"
        );
    }
}

// Polynomials form a commutative ring over the rationals, so they satisfy
// the scalar surface; group-law formulas then apply symbolically (e.g. left
// translation of a polynomial chart is a BCH product over `MultiPoly`).
impl crate::scalar::Scalar for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn from_ratio(n: i64, d: i64) -> Self {
        MultiPoly::constant(crate::scalar::rat(n, d))
    }
    fn from_rational(r: &Rational) -> Self {
        MultiPoly::constant(r.clone())
    }
    fn scale(&self, n: i64, d: i64) -> Self {
        self.scale(&crate::scalar::rat(n, d))
    }
    fn is_zero_val(&self) -> bool {
        self.is_zero()
    }
    /// Only meaningful for constants; NaN otherwise.
    fn to_f64(&self) -> f64 {
        if self.is_constant() {
            crate::scalar::rational_to_f64(&self.constant_term())
        } else {
            f64::NAN
        }
    }
}
