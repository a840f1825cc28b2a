//! Sparse multivariate polynomials over Z or F_p.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic with x1 > x2 > ... . The map never stores a zero
//! coefficient, and in characteristic p every coefficient is a residue in
//! `[0, p)`.

mod gcd;
mod random;
mod substitute;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;
use crate::ring::Characteristic;

pub use random::random_nonzero_multipoly;
pub use gcd::{div_exact, gcd, gcd_with_budget, lcm, DEFAULT_GCD_BUDGET};
pub use substitute::{
    kronecker_exponents, lemma_z_exponents, substitute_powers, substitute_powers_sparse, ExponentChoice,
    ExponentMethod,
};

/// Exponent vector of a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    characteristic: Characteristic,
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultiPoly {
    pub fn zero(characteristic: Characteristic, nvars: usize) -> Self {
        MultiPoly { characteristic, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(characteristic: Characteristic, nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = MultiPoly::zero(characteristic, nvars);
        p.add_term(Monomial::one(nvars), c.into());
        p
    }

    pub fn one(characteristic: Characteristic, nvars: usize) -> Self {
        MultiPoly::constant(characteristic, nvars, 1)
    }

    /// The variable x_{index+1}.
    pub fn var(characteristic: Characteristic, nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[index] = 1;
        let mut p = MultiPoly::zero(characteristic, nvars);
        p.add_term(Monomial(e), BigInt::one());
        p
    }

    pub fn from_terms<I>(characteristic: Characteristic, nvars: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = MultiPoly::zero(characteristic, nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(PolyError::ExponentLength { expected: nvars, got: e.len() });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Adds `c * m` in place, keeping the no-zero-coefficient invariant.
    pub(crate) fn add_term(&mut self, m: Monomial, c: BigInt) {
        let c = self.characteristic.reduce(c);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = self.characteristic.reduce(o.get() + c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn characteristic(&self) -> &Characteristic {
        &self.characteristic
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(&Monomial(exponents.to_vec())).cloned().unwrap_or_default()
    }

    /// Total degree; -1 for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    /// Degree in one variable; -1 for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms.keys().map(|m| m.0[var] as i64).max().unwrap_or(-1)
    }

    /// Largest per-variable degree; -1 for the zero polynomial.
    pub fn max_var_degree(&self) -> i64 {
        (0..self.nvars).map(|v| self.degree_in(v)).max().unwrap_or(if self.is_zero() { -1 } else { 0 })
    }

    /// Leading term under graded lex.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&BigInt> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Integer content (gcd of coefficients, positive) in characteristic
    /// 0; 1 in characteristic p; 0 for the zero polynomial.
    pub fn integer_content(&self) -> BigInt {
        if self.is_zero() {
            return BigInt::zero();
        }
        match self.characteristic {
            Characteristic::Zero => self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c)),
            Characteristic::Prime(_) => BigInt::one(),
        }
    }

    fn check_compat(&self, other: &MultiPoly) -> Result<(), PolyError> {
        if self.characteristic != other.characteristic {
            return Err(PolyError::CharacteristicMismatch(
                self.characteristic.to_string(),
                other.characteristic.to_string(),
            ));
        }
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.check_compat(other)?;
        let mut out = MultiPoly::zero(self.characteristic.clone(), self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        let mut out = MultiPoly::zero(self.characteristic.clone(), self.nvars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigInt) -> MultiPoly {
        let mut out = MultiPoly::zero(self.characteristic.clone(), self.nvars);
        for (a, ca) in &self.terms {
            out.add_term(a.mul(m), ca * c);
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> MultiPoly {
        let mut result = MultiPoly::one(self.characteristic.clone(), self.nvars);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluates at integer points (reduced mod p in characteristic p).
    pub fn evaluate(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars, "point has wrong arity");
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        self.characteristic.reduce(acc)
    }

    /// Reinterprets an integer polynomial over F_p.
    pub fn reduce_mod(&self, characteristic: &Characteristic) -> MultiPoly {
        let mut out = MultiPoly::zero(characteristic.clone(), self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Normalizes the sign (characteristic 0: positive leading
    /// coefficient) or makes monic (characteristic p).
    pub fn normalize_unit(&self) -> MultiPoly {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(lc) => match &self.characteristic {
                Characteristic::Zero => {
                    if lc.is_negative() {
                        -self
                    } else {
                        self.clone()
                    }
                }
                Characteristic::Prime(_) => {
                    let inv = self.characteristic.inverse(lc).expect("nonzero residue");
                    self.scale(&inv)
                }
            },
        }
    }

    /// Renders with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names: Some(names) }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_add(rhs).expect("incompatible polynomials")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_sub(rhs).expect("incompatible polynomials")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.try_mul(rhs).expect("incompatible polynomials")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&BigInt::from(-1))
    }
}

struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: Option<&'a [String]>,
}

impl PolyDisplay<'_> {
    fn name(&self, i: usize) -> String {
        match self.names {
            Some(ns) => ns[i].clone(),
            None => format!("x{}", i + 1),
        }
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mag = c.abs();
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.name(i) } else { format!("{}^{}", self.name(i), e) })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", PolyDisplay { poly: self, names: None })
    }
}
