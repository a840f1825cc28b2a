//! Dense univariate polynomials over Z or F_p, with irreducibility testing
//! and lexicographic enumeration of monic irreducibles over F_p.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::factorize;
use crate::error::AlgebraError;
use crate::ring::Characteristic;

/// Univariate polynomial, coefficients lowest degree first. The highest
/// stored coefficient is nonzero unless the polynomial is zero (empty).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    characteristic: Characteristic,
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(characteristic: Characteristic, coeffs: Vec<BigInt>) -> Self {
        let coeffs = coeffs.into_iter().map(|c| characteristic.reduce(c)).collect();
        let mut p = UniPoly { characteristic, coeffs };
        p.trim();
        p
    }

    pub fn zero(characteristic: Characteristic) -> Self {
        UniPoly { characteristic, coeffs: Vec::new() }
    }

    pub fn constant(characteristic: Characteristic, c: BigInt) -> Self {
        UniPoly::new(characteristic, vec![c])
    }

    pub fn one(characteristic: Characteristic) -> Self {
        UniPoly::constant(characteristic, BigInt::one())
    }

    /// The monomial x^k.
    pub fn x_pow(characteristic: Characteristic, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        UniPoly { characteristic, coeffs }
    }

    /// Builds a polynomial from sparse (exponent, coefficient) pairs.
    pub fn from_sparse(characteristic: Characteristic, terms: &[(u64, BigInt)]) -> Self {
        let top = terms.iter().map(|(e, _)| *e).max().unwrap_or(0) as usize;
        let mut coeffs = vec![BigInt::zero(); if terms.is_empty() { 0 } else { top + 1 }];
        for (e, c) in terms {
            coeffs[*e as usize] += c;
        }
        UniPoly::new(characteristic, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn characteristic(&self) -> &Characteristic {
        &self.characteristic
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    fn check(&self, other: &UniPoly) {
        assert_eq!(self.characteristic, other.characteristic, "characteristic mismatch");
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        self.check(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        UniPoly::new(self.characteristic.clone(), coeffs)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.characteristic.clone(), self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.characteristic.clone());
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::new(self.characteristic.clone(), coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> UniPoly {
        UniPoly::new(self.characteristic.clone(), self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Division with remainder. The divisor's leading coefficient must be
    /// a unit of the coefficient ring.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly), AlgebraError> {
        self.check(divisor);
        let lead = divisor.leading().ok_or(AlgebraError::ZeroPolynomial)?;
        let inv = self
            .characteristic
            .inverse(lead)
            .ok_or_else(|| AlgebraError::NonUnitLeading(lead.clone()))?;
        let ch = &self.characteristic;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(ch.clone()), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = ch.reduce(&rem[k] * &inv);
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = ch.reduce(&rem[idx] - &c * d);
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(ch.clone(), quot), UniPoly::new(ch.clone(), rem)))
    }

    pub fn rem(&self, divisor: &UniPoly) -> Result<UniPoly, AlgebraError> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Scales a nonzero polynomial over F_p to be monic.
    pub fn make_monic(&self) -> Result<UniPoly, AlgebraError> {
        let lead = self.leading().ok_or(AlgebraError::ZeroPolynomial)?;
        let inv = self
            .characteristic
            .inverse(lead)
            .ok_or_else(|| AlgebraError::NonUnitLeading(lead.clone()))?;
        Ok(self.scale(&inv))
    }

    /// Monic gcd over F_p.
    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly, AlgebraError> {
        if self.characteristic.is_zero_char() {
            return Err(AlgebraError::CharacteristicZero);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            a.make_monic()
        }
    }

    /// Extended Euclid over F_p: returns (g, s) with s*self = g mod m.
    pub fn inverse_mod(&self, modulus: &UniPoly) -> Result<UniPoly, AlgebraError> {
        let ch = self.characteristic.clone();
        let (mut r0, mut r1) = (modulus.clone(), self.rem(modulus)?);
        let (mut s0, mut s1) = (UniPoly::zero(ch.clone()), UniPoly::one(ch));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != 0 {
            return Err(AlgebraError::DivisionByZero);
        }
        let inv = self.characteristic.inverse(&r0.coeffs[0]).ok_or(AlgebraError::DivisionByZero)?;
        s0.scale(&inv).rem(modulus)
    }

    /// base^exp mod modulus.
    pub fn pow_mod(&self, exp: &BigUint, modulus: &UniPoly) -> Result<UniPoly, AlgebraError> {
        let mut result = UniPoly::one(self.characteristic.clone()).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                result = result.mul(&base).rem(modulus)?;
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(modulus)?;
            }
        }
        Ok(result)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        self.characteristic.reduce(acc)
    }

    /// Renders with the given variable name.
    pub fn display_with<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        UniDisplay { poly: self, var }
    }
}

struct UniDisplay<'a> {
    poly: &'a UniPoly,
    var: &'a str,
}

impl fmt::Display for UniDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, k),
            };
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("x"))
    }
}

/// Rabin's irreducibility test over F_p: f of degree n is irreducible iff
/// x^(p^n) = x mod f and gcd(x^(p^(n/r)) - x, f) = 1 for every prime r | n.
pub fn is_irreducible(f: &UniPoly) -> Result<bool, AlgebraError> {
    let p = f.characteristic().modulus().ok_or(AlgebraError::CharacteristicZero)?.clone();
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let n = f.degree() as u64;
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let f = f.make_monic()?;
    let ch = f.characteristic().clone();
    let x = UniPoly::x_pow(ch, 1);
    let p_big = p.magnitude().clone();
    // frob[k] = x^(p^k) mod f
    let mut frob = Vec::with_capacity(n as usize + 1);
    frob.push(x.clone());
    for k in 1..=n as usize {
        let next = frob[k - 1].pow_mod(&p_big, &f)?;
        frob.push(next);
    }
    if frob[n as usize] != x.rem(&f)? {
        return Ok(false);
    }
    for (r, _) in factorize(n) {
        let k = (n / r) as usize;
        let g = frob[k].sub(&x).gcd(&f)?;
        if g.degree() != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Iterator over all monic polynomials of a fixed degree over F_p, in
/// lexicographic order of the coefficient vector read from the highest
/// non-leading coefficient down (equivalently, increasing sum c_i p^i).
pub struct MonicPolys {
    characteristic: Characteristic,
    p: BigInt,
    degree: usize,
    digits: Vec<BigInt>,
    done: bool,
}

impl MonicPolys {
    pub fn new(p: &BigInt, degree: usize) -> Result<Self, AlgebraError> {
        let characteristic = Characteristic::prime(p.clone())?;
        Ok(MonicPolys {
            characteristic,
            p: p.clone(),
            degree,
            digits: vec![BigInt::zero(); degree],
            done: false,
        })
    }
}

impl Iterator for MonicPolys {
    type Item = UniPoly;

    fn next(&mut self) -> Option<UniPoly> {
        if self.done {
            return None;
        }
        let mut coeffs = self.digits.clone();
        coeffs.push(BigInt::one());
        let item = UniPoly::new(self.characteristic.clone(), coeffs);
        // advance the base-p counter, least significant digit first
        let mut k = 0;
        loop {
            if k == self.degree {
                self.done = true;
                break;
            }
            self.digits[k] += 1;
            if self.digits[k] < self.p {
                break;
            }
            self.digits[k] = BigInt::zero();
            k += 1;
        }
        Some(item)
    }
}

/// Iterator over the monic irreducibles of a given degree, lexicographic.
pub fn irreducibles(p: &BigInt, degree: usize) -> Result<impl Iterator<Item = UniPoly>, AlgebraError> {
    Ok(MonicPolys::new(p, degree)?.filter(|f| is_irreducible(f).unwrap_or(false)))
}

/// All monic irreducibles of degree `l` over F_p, provided p^l fits in the
/// enumeration budget.
pub fn enumerate_irreducibles(p: &BigInt, l: usize, budget: u64) -> Result<Vec<UniPoly>, AlgebraError> {
    if l == 0 {
        return Err(AlgebraError::NonPositive(BigInt::zero()));
    }
    let required = num_traits::pow::pow(p.magnitude().clone(), l);
    if required.to_u64().is_none_or(|r| r > budget) {
        return Err(AlgebraError::EnumerationBudget { required, budget });
    }
    Ok(irreducibles(p, l)?.collect())
}
