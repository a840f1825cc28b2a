//! Finite fields: F_p and F_p[x]/(h).
//!
//! [`ExtField`] / [`ExtFieldElem`] carry arbitrary-precision residues and
//! back the witness certificates. [`SmallField`] is a table-driven copy of
//! a small field used when closing matrix groups, where element counts
//! reach the millions.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::is_prime;
use crate::error::AlgebraError;
use crate::ring::Characteristic;
use crate::unipoly::{is_irreducible, UniPoly};

/// Element of the prime field F_p, stored as its least nonnegative residue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PFieldElem {
    p: BigInt,
    value: BigInt,
}

impl PFieldElem {
    pub fn new(p: BigInt, value: BigInt) -> Result<Self, AlgebraError> {
        if !is_prime(&p) {
            return Err(AlgebraError::NotPrime(p));
        }
        let value = value.mod_floor(&p);
        Ok(PFieldElem { p, value })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.p
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn with(&self, value: BigInt) -> Self {
        PFieldElem { p: self.p.clone(), value: value.mod_floor(&self.p) }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "field mismatch");
        self.with(&self.value + &other.value)
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "field mismatch");
        self.with(&self.value - &other.value)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "field mismatch");
        self.with(&self.value * &other.value)
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        self.value.modinv(&self.p).map(|v| self.with(v)).ok_or(AlgebraError::DivisionByZero)
    }
}

impl fmt::Display for PFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The field F_p[x]/(h) for a monic irreducible h. A prime field is the
/// case h = x.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtField {
    p: BigInt,
    modulus: UniPoly,
}

impl ExtField {
    pub fn new(modulus: UniPoly) -> Result<Self, AlgebraError> {
        let p = modulus.characteristic().modulus().ok_or(AlgebraError::CharacteristicZero)?.clone();
        if !modulus.is_monic() || !is_irreducible(&modulus)? {
            return Err(AlgebraError::ReducibleModulus(p));
        }
        Ok(ExtField { p, modulus })
    }

    pub fn prime(p: BigInt) -> Result<Self, AlgebraError> {
        let ch = Characteristic::prime(p.clone())?;
        Ok(ExtField { p, modulus: UniPoly::x_pow(ch, 1) })
    }

    pub fn characteristic(&self) -> &BigInt {
        &self.p
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree() as usize
    }

    pub fn order(&self) -> BigUint {
        num_traits::pow::pow(self.p.magnitude().clone(), self.degree())
    }

    pub fn is_prime_field(&self) -> bool {
        self.degree() == 1
    }
}

/// Element of an [`ExtField`], held as a residue polynomial of degree
/// below deg(h).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtFieldElem {
    field: Arc<ExtField>,
    residue: UniPoly,
}

impl ExtFieldElem {
    pub fn from_poly(field: &Arc<ExtField>, poly: &UniPoly) -> Result<Self, AlgebraError> {
        let residue = poly.rem(field.modulus())?;
        Ok(ExtFieldElem { field: field.clone(), residue })
    }

    pub fn from_int(field: &Arc<ExtField>, c: &BigInt) -> Self {
        let ch = field.modulus().characteristic().clone();
        let residue = UniPoly::constant(ch, c.clone());
        ExtFieldElem { field: field.clone(), residue }
    }

    pub fn zero(field: &Arc<ExtField>) -> Self {
        Self::from_int(field, &BigInt::zero())
    }

    pub fn one(field: &Arc<ExtField>) -> Self {
        Self::from_int(field, &BigInt::one())
    }

    /// The class of x, a generator of F_p[x]/(h) over F_p.
    pub fn generator(field: &Arc<ExtField>) -> Self {
        let ch = field.modulus().characteristic().clone();
        Self::from_poly(field, &UniPoly::x_pow(ch, 1)).expect("nonzero modulus")
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn residue(&self) -> &UniPoly {
        &self.residue
    }

    /// Coefficient vector of length deg(h), lowest degree first.
    pub fn coeffs(&self) -> Vec<BigInt> {
        (0..self.field.degree()).map(|k| self.residue.coeff(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.residue.degree() == 0 && self.residue.coeffs()[0].is_one()
    }

    fn wrap(&self, residue: UniPoly) -> Self {
        ExtFieldElem { field: self.field.clone(), residue }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        self.wrap(self.residue.add(&other.residue))
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        self.wrap(self.residue.sub(&other.residue))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.residue.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.field, other.field);
        let prod = self.residue.mul(&other.residue);
        self.wrap(prod.rem(self.field.modulus()).expect("monic modulus"))
    }

    pub fn inv(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.wrap(self.residue.inverse_mod(self.field.modulus())?))
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        self.wrap(self.residue.pow_mod(exp, self.field.modulus()).expect("monic modulus"))
    }

    /// Encodes the element as sum c_i p^i, if that fits in a u32.
    pub fn encode(&self) -> Option<u32> {
        let p = self.field.p.to_u64()?;
        let mut acc: u64 = 0;
        for c in self.coeffs().iter().rev() {
            acc = acc.checked_mul(p)?.checked_add(c.to_u64()?)?;
        }
        u32::try_from(acc).ok()
    }
}

impl fmt::Display for ExtFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

/// Largest field order [`SmallField`] will tabulate.
pub const SMALL_FIELD_LIMIT: u64 = 1 << 22;

/// Table-driven finite field of order q = p^k <= [`SMALL_FIELD_LIMIT`].
/// Elements are encoded as sum c_i p^i with digits c_i in [0, p).
#[derive(Clone, Debug)]
pub struct SmallField {
    p: u32,
    k: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl SmallField {
    pub fn from_ext(field: &ExtField) -> Option<SmallField> {
        let p = field.p.to_u32()?;
        let k = field.degree() as u32;
        let q = (p as u64).checked_pow(k)?;
        if q > SMALL_FIELD_LIMIT {
            return None;
        }
        let q = q as u32;
        let modulus: Vec<u32> =
            (0..=k as usize).map(|i| field.modulus().coeff(i).to_u32().unwrap()).collect();
        let mut sf = SmallField { p, k, q, exp: Vec::new(), log: Vec::new() };
        if k == 1 {
            return Some(sf);
        }
        // find a primitive element by brute force over the encodings
        let order = q - 1;
        for g in 2..q {
            let mut exp = Vec::with_capacity(order as usize);
            let mut log = vec![u32::MAX; q as usize];
            let mut x = 1u32;
            let mut primitive = true;
            for e in 0..order {
                if log[x as usize] != u32::MAX {
                    primitive = false;
                    break;
                }
                log[x as usize] = e;
                exp.push(x);
                x = sf.poly_mul(x, g, &modulus);
            }
            if primitive && x == 1 {
                sf.exp = exp;
                sf.log = log;
                return Some(sf);
            }
        }
        None
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn undigits(&self, ds: &[u32]) -> u32 {
        ds.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    fn poly_mul(&self, a: u32, b: u32, modulus: &[u32]) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] as u64 * db[j] as u64) % p;
            }
        }
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            // subtract c * x^(top-k) * h, with h monic
            for (i, &h) in modulus.iter().enumerate().take(k + 1) {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - c) * h as u64) % p;
            }
        }
        let ds: Vec<u32> = prod[..k].iter().map(|&d| d as u32).collect();
        self.undigits(&ds)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let ds: Vec<u32> = self.digits(a).into_iter().map(|d| (self.p - d) % self.p).collect();
        self.undigits(&ds)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        let e = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.q as u64 - 1);
        self.exp[e as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        if self.k == 1 {
            let a = BigInt::from(a);
            return a.modinv(&BigInt::from(self.p)).and_then(|v| v.to_u32());
        }
        let l = self.log[a as usize];
        Some(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }
}
