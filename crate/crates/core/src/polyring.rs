//! Sparse trivariate polynomials in `x` (length), `y` (letter sum) and `z`
//! (marked occurrences) with big-integer coefficients, truncated in `y`.
//!
//! Every series here is graded by `y`: each letter contributes at least one
//! power of `y`, so one cap on the `y`-degree bounds the `x`-degree too. All
//! arithmetic drops monomials whose `y`-degree exceeds the cap.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exponent triple. Field order gives the canonical `(y, x, z)` sort.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub y: u32,
    pub x: u32,
    pub z: u32,
}

impl Monomial {
    pub fn new(x: u32, y: u32, z: u32) -> Self {
        Monomial { y, x, z }
    }

    fn times(self, o: Monomial) -> Monomial {
        Monomial {
            y: self.y + o.y,
            x: self.x + o.x,
            z: self.z + o.z,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriPoly {
    terms: BTreeMap<Monomial, BigInt>,
    y_cap: u32,
}

impl TriPoly {
    pub fn zero(y_cap: u32) -> Self {
        TriPoly {
            terms: BTreeMap::new(),
            y_cap,
        }
    }

    pub fn one(y_cap: u32) -> Self {
        Self::monomial(BigInt::one(), 0, 0, 0, y_cap)
    }

    /// `coef * x^a y^b z^c`; zero if `b` exceeds the cap.
    pub fn monomial(coef: impl Into<BigInt>, a: u32, b: u32, c: u32, y_cap: u32) -> Self {
        let mut p = Self::zero(y_cap);
        p.add_term(Monomial::new(a, b, c), coef.into());
        p
    }

    /// Builds from `(a, b, c, coef)` tuples, summing repeats.
    pub fn from_terms<I, C>(terms: I, y_cap: u32) -> Self
    where
        I: IntoIterator<Item = (u32, u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(y_cap);
        for (a, b, c, coef) in terms {
            p.add_term(Monomial::new(a, b, c), coef.into());
        }
        p
    }

    pub fn y_cap(&self) -> u32 {
        self.y_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical `(y, x, z)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, a: u32, b: u32, c: u32) -> BigInt {
        self.terms
            .get(&Monomial::new(a, b, c))
            .cloned()
            .unwrap_or_default()
    }

    pub fn max_z(&self) -> u32 {
        self.terms.keys().map(|m| m.z).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, coef: BigInt) {
        if m.y > self.y_cap || coef.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_cap(&self, other: &TriPoly) -> Result<()> {
        if self.y_cap != other.y_cap {
            return Err(Error::CapMismatch(self.y_cap, other.y_cap));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &TriPoly) -> Result<TriPoly> {
        self.check_cap(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TriPoly) -> Result<TriPoly> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &TriPoly) -> Result<TriPoly> {
        self.check_cap(other)?;
        let mut out = TriPoly::zero(self.y_cap);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                // terms are sorted by y, so nothing further in `other` fits
                if m1.y + m2.y > self.y_cap {
                    break;
                }
                out.add_term(m1.times(*m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> TriPoly {
        let mut out = TriPoly::zero(self.y_cap);
        for (m, c) in &self.terms {
            out.add_term(*m, c * k);
        }
        out
    }

    /// Same polynomial under a different cap (lowering drops terms).
    pub fn with_cap(&self, y_cap: u32) -> TriPoly {
        let mut out = TriPoly::zero(y_cap);
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Multiplies by `z^e`.
    pub fn shift_z(&self, e: u32) -> TriPoly {
        TriPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial { z: m.z + e, ..*m }, c.clone()))
                .collect(),
            y_cap: self.y_cap,
        }
    }

    /// Keeps only monomials with the given `z`-degree.
    pub fn z_part(&self, z: u32) -> TriPoly {
        TriPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.z == z)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            y_cap: self.y_cap,
        }
    }

    /// Setting `z = 0`.
    pub fn at_z_zero(&self) -> TriPoly {
        self.z_part(0)
    }

    /// Substitutes `x -> x / (1 - y)`: each `x^a y^b z^c` becomes
    /// `x^a y^b z^c * sum_i binom(a + i - 1, i) y^i`.
    pub fn geom_substitute_x(&self) -> TriPoly {
        let mut out = TriPoly::zero(self.y_cap);
        for (m, c) in &self.terms {
            if m.x == 0 {
                out.add_term(*m, c.clone());
                continue;
            }
            let mut binom = BigInt::one();
            for i in 0..=(self.y_cap - m.y) {
                if i > 0 {
                    // binom(a+i-1, i) = binom(a+i-2, i-1) * (a+i-1) / i
                    binom = binom * (m.x + i - 1) / i;
                }
                out.add_term(Monomial { y: m.y + i, ..*m }, c * &binom);
            }
        }
        out
    }

    /// Formal substitution `z -> z + delta` for `delta` in `{-1, +1}`.
    pub fn substitute_z_shift(&self, delta: i32) -> Result<TriPoly> {
        if delta != 1 && delta != -1 {
            return Err(Error::OutOfRange(format!(
                "z shift must be +1 or -1, got {delta}"
            )));
        }
        let mut out = TriPoly::zero(self.y_cap);
        for (m, c) in &self.terms {
            // z^c = sum_j binom(c, j) z^j delta^(c-j)
            let mut binom = BigInt::one();
            for j in (0..=m.z).rev() {
                if j < m.z {
                    binom = binom * (j + 1) / (m.z - j);
                }
                let sign_neg = delta < 0 && (m.z - j) % 2 == 1;
                let term = c * &binom;
                out.add_term(Monomial { z: j, ..*m }, if sign_neg { -term } else { term });
            }
        }
        Ok(out)
    }

    /// Inverse power series, computed one `y`-degree at a time.
    ///
    /// Requires constant term `±1` and no other monomial of `y`-degree 0.
    pub fn reciprocal(&self) -> Result<TriPoly> {
        let c0 = self.coeff(0, 0, 0);
        if !(c0.is_one() || (-&c0).is_one()) {
            return Err(Error::NotInvertible(format!("constant term is {c0}")));
        }
        if let Some(m) = self.terms.keys().find(|m| m.y == 0 && (m.x, m.z) != (0, 0)) {
            return Err(Error::NotInvertible(format!(
                "monomial x^{}*z^{} has y-degree 0",
                m.x, m.z
            )));
        }
        let cap = self.y_cap as usize;
        // rest[b] holds the degree-b part of p - c0
        let mut rest: Vec<Vec<(Monomial, &BigInt)>> = vec![Vec::new(); cap + 1];
        for (m, c) in &self.terms {
            if m.y > 0 {
                rest[m.y as usize].push((*m, c));
            }
        }
        let mut q: Vec<BTreeMap<Monomial, BigInt>> = vec![BTreeMap::new(); cap + 1];
        q[0].insert(Monomial::new(0, 0, 0), c0.clone());
        for b in 1..=cap {
            // q_b = -c0 * sum_{j=1..b} r_j q_{b-j}   (1/c0 = c0)
            let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
            for j in 1..=b {
                for (mr, cr) in &rest[j] {
                    for (mq, cq) in &q[b - j] {
                        *acc.entry(mr.times(*mq)).or_default() += *cr * cq;
                    }
                }
            }
            acc.retain(|_, c| !c.is_zero());
            for c in acc.values_mut() {
                *c = -(&c0 * &*c);
            }
            q[b] = acc;
        }
        let mut out = TriPoly::zero(self.y_cap);
        for level in q {
            for (m, c) in level {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// JSON form `[[a, b, c, coef], ...]` in canonical order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let coef: serde_json::Number = c.to_string().parse().expect("integer literal");
                    Value::Array(vec![
                        m.x.into(),
                        m.y.into(),
                        m.z.into(),
                        Value::Number(coef),
                    ])
                })
                .collect(),
        )
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*x^{}*y^{}*z^{}", m.x, m.y, m.z)?;
        }
        Ok(())
    }
}

impl Neg for &TriPoly {
    type Output = TriPoly;

    fn neg(self) -> TriPoly {
        TriPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
            y_cap: self.y_cap,
        }
    }
}

// Operator forms panic on mismatched caps; use the `try_` methods to handle that.
impl Add for &TriPoly {
    type Output = TriPoly;

    fn add(self, rhs: &TriPoly) -> TriPoly {
        self.try_add(rhs).expect("y-cap mismatch in add")
    }
}

impl Sub for &TriPoly {
    type Output = TriPoly;

    fn sub(self, rhs: &TriPoly) -> TriPoly {
        self.try_sub(rhs).expect("y-cap mismatch in sub")
    }
}

impl Mul for &TriPoly {
    type Output = TriPoly;

    fn mul(self, rhs: &TriPoly) -> TriPoly {
        self.try_mul(rhs).expect("y-cap mismatch in mul")
    }
}
