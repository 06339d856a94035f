use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// An ordered list of variable names. Polynomials share rings through `Arc`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    /// Builds a ring after checking that names are distinct and match `[A-Za-z][A-Za-z0-9_]*`.
    pub fn new<I, S>(names: I) -> Result<Arc<Ring>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::InvalidRing(format!("`{v}` is not a valid variable name")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("variable `{v}` listed twice")));
            }
        }
        Ok(Arc::new(Ring { vars }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are kept sorted by descending graded reverse lexicographic order with
/// no zero coefficients, so equal values have identical representations.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, Rational)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Rational) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_int(ring: &Arc<Ring>, c: i64) -> Self {
        Self::constant(ring, Rational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial arity differs from ring");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// The variable `x_index`.
    pub fn var(ring: &Arc<Ring>, index: usize) -> Result<Self> {
        if index >= ring.nvars() {
            return Err(Error::VariableIndex {
                index,
                nvars: ring.nvars(),
            });
        }
        Ok(Self::monomial(
            ring,
            Monomial::var(ring.nvars(), index),
            Rational::one(),
        ))
    }

    /// Sums up possibly repeated terms.
    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity differs from ring");
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Arc<Ring>, acc: HashMap<Monomial, Rational>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::DegRevLex.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn same_ring(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Constant term's coefficient when the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Coefficient of `m`, zero if absent.
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        use std::cmp::Ordering::*;
        let order = MonomialOrder::DegRevLex;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let rhs = |c: &Rational| if negate { -c } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.cmp(ma, mb) {
                Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Less => {
                    out.push((mb.clone(), rhs(cb)));
                    j += 1;
                }
                Equal => {
                    let c = ca + rhs(cb);
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), rhs(c))));
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(Self::from_map(&self.ring, acc))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    /// `c * m * self`; multiplying by a monomial preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.nvars() {
            return Err(Error::VariableIndex {
                index: var,
                nvars: self.nvars(),
            });
        }
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(var);
            if e == 0 {
                return None;
            }
            let mut exps = m.exponents().to_vec();
            exps[var] -= 1;
            Some((Monomial::new(exps), c * Rational::from_integer(BigInt::from(e))))
        });
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.nvars() {
            return Err(Error::Arity {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        let mut powers: Vec<Vec<Rational>> = point.iter().map(|v| vec![Rational::one(), v.clone()]).collect();
        let mut sum = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &point[i];
                    table.push(next);
                }
                t *= &table[e as usize];
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Floating-point evaluation, used by the numeric cross-checks.
    pub fn evaluate_f64(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.nvars() {
            return Err(Error::Arity {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                m.exponents()
                    .iter()
                    .zip(point)
                    .fold(rational_to_f64(c), |acc, (&e, &v)| acc * v.powi(e as i32))
            })
            .sum())
    }

    /// Sum of `|c| * |m(point)|` over all terms; a scale for relative residuals.
    pub fn magnitude_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.exponents()
                    .iter()
                    .zip(point)
                    .fold(rational_to_f64(c).abs(), |acc, (&e, &v)| {
                        acc * v.abs().powi(e as i32)
                    })
            })
            .sum()
    }

    /// Exact quotient `self / divisor`; fails if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.check_ring(divisor)?;
        let (lm, lc) = divisor
            .terms
            .first()
            .ok_or_else(|| Error::Internal("division by the zero polynomial".into()))?;
        let mut rem = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rem.terms.first() {
            let q = m.div(lm).ok_or(Error::InexactDivision)?;
            let qc = c / lc;
            rem = rem.merge(&divisor.mul_term(&q, &qc), true);
            quotient.push((q, qc));
        }
        Ok(Polynomial::from_terms(&self.ring, quotient))
    }

    /// Re-embeds into another ring with the same number of variables.
    pub fn with_ring(&self, ring: &Arc<Ring>) -> Result<Polynomial> {
        if ring.nvars() != self.nvars() {
            return Err(Error::RingMismatch);
        }
        Ok(Polynomial {
            ring: ring.clone(),
            terms: self.terms.clone(),
        })
    }
}

pub(crate) fn rational_to_f64(c: &Rational) -> f64 {
    match (c.numer().to_f64(), c.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerator or denominator: shift both down before dividing
            let bits = c.numer().bits().max(c.denom().bits()) as i64;
            let shift = (bits - 900).max(0) as usize;
            let n = (c.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (c.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            if d == 0.0 {
                if c.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_poly(self))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("ring mismatch in polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(&-Rational::one())
    }
}
