//! Rational functions num/den over Z[T] or F_p[T].
//!
//! Canonical form: the fraction is reduced by the polynomial gcd, the
//! denominator has positive leading coefficient (characteristic 0) or is
//! monic (characteristic p), and zero is 0/1. The gcd runs under an effort
//! budget; when the budget runs out the fraction is kept unreduced and
//! flagged, and equality falls back to cross-multiplication, which is
//! always exact.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::PolyError;
use crate::multipoly::{div_exact, gcd_with_budget, MultiPoly, DEFAULT_GCD_BUDGET};
use crate::ring::Characteristic;

/// A fraction of multivariate polynomials.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
    reduced: bool,
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.reduced && other.reduced {
            self.num == other.num && self.den == other.den
        } else {
            self.same_value(other)
        }
    }
}

impl Eq for RatFunc {}

impl Hash for RatFunc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Hashing agrees with equality among reduced fractions. Unreduced
        // fractions only arise when the gcd budget runs out, and callers
        // that hash (ball enumeration) reject those up front.
        if self.reduced {
            self.num.hash(state);
            self.den.hash(state);
        } else {
            0u8.hash(state);
        }
    }
}

impl RatFunc {
    /// Builds and canonicalizes num/den.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, PolyError> {
        Self::with_budget(num, den, DEFAULT_GCD_BUDGET)
    }

    /// [`RatFunc::new`] with an explicit gcd effort budget.
    pub fn with_budget(num: MultiPoly, den: MultiPoly, budget: usize) -> Result<Self, PolyError> {
        if num.characteristic() != den.characteristic() {
            return Err(PolyError::CharacteristicMismatch(
                num.characteristic().to_string(),
                den.characteristic().to_string(),
            ));
        }
        if num.nvars() != den.nvars() {
            return Err(PolyError::ArityMismatch(num.nvars(), den.nvars()));
        }
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(canonicalize(num, den, budget))
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.characteristic().clone(), p.nvars());
        RatFunc { num: p, den, reduced: true }
    }

    pub fn zero(characteristic: Characteristic, nvars: usize) -> Self {
        Self::from_poly(MultiPoly::zero(characteristic, nvars))
    }

    pub fn one(characteristic: Characteristic, nvars: usize) -> Self {
        Self::from_poly(MultiPoly::one(characteristic, nvars))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn characteristic(&self) -> &Characteristic {
        self.num.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    /// False when the gcd budget ran out before the fraction was reduced.
    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The polynomial value if the denominator divides the numerator.
    pub fn as_polynomial(&self) -> Option<MultiPoly> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            div_exact(&self.num, &self.den)
        }
    }

    /// Exact equality by cross-multiplication.
    pub fn same_value(&self, other: &RatFunc) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone(), reduced: self.reduced }
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return build(&self.num + &other.num, self.den.clone());
        }
        build(&(&self.num * &other.den) + &(&other.num * &self.den), &self.den * &other.den)
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.characteristic().clone(), self.nvars());
        }
        if self.is_polynomial() && other.is_polynomial() {
            return RatFunc::from_poly(&self.num * &other.num);
        }
        build(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn inv(&self) -> Result<RatFunc, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, PolyError> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        RatFunc { num: self.num.pow(k), den: self.den.pow(k), reduced: self.reduced }
    }

    /// Renders as "num" or "(num)/(den)" with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        RatDisplay { r: self, names }
    }
}

fn build(num: MultiPoly, den: MultiPoly) -> RatFunc {
    canonicalize(num, den, DEFAULT_GCD_BUDGET)
}

fn canonicalize(num: MultiPoly, den: MultiPoly, budget: usize) -> RatFunc {
    let ch = num.characteristic().clone();
    let n = num.nvars();
    if num.is_zero() {
        return RatFunc::zero(ch, n);
    }
    let (num, den, reduced) = if den.is_constant() {
        reduce_by_constant(num, den)
    } else {
        let mut b = budget;
        match gcd_with_budget(&num, &den, &mut b) {
            Some(g) if g.is_one() => (num, den, true),
            Some(g) => (
                div_exact(&num, &g).expect("gcd divides numerator"),
                div_exact(&den, &g).expect("gcd divides denominator"),
                true,
            ),
            None => {
                // content-only reduction keeps the fraction smaller
                let (num, den, _) = reduce_integer_content(num, den);
                (num, den, false)
            }
        }
    };
    let (num, den) = normalize_denominator(num, den);
    RatFunc { num, den, reduced }
}

fn reduce_by_constant(num: MultiPoly, den: MultiPoly) -> (MultiPoly, MultiPoly, bool) {
    match num.characteristic() {
        Characteristic::Prime(_) => (num, den, true),
        Characteristic::Zero => reduce_integer_content(num, den),
    }
}

fn reduce_integer_content(num: MultiPoly, den: MultiPoly) -> (MultiPoly, MultiPoly, bool) {
    if !num.characteristic().is_zero_char() {
        return (num, den, true);
    }
    let g = Integer::gcd(&num.integer_content(), &den.integer_content());
    if g.is_one() {
        return (num, den, true);
    }
    let num = div_exact(&num, &MultiPoly::constant(Characteristic::Zero, num.nvars(), g.clone()))
        .expect("content divides");
    let den = div_exact(&den, &MultiPoly::constant(Characteristic::Zero, den.nvars(), g)).expect("content divides");
    (num, den, true)
}

fn normalize_denominator(num: MultiPoly, den: MultiPoly) -> (MultiPoly, MultiPoly) {
    let lc = den.leading_coefficient().cloned().expect("nonzero denominator");
    match den.characteristic() {
        Characteristic::Zero => {
            if lc.is_negative() {
                (-&num, -&den)
            } else {
                (num, den)
            }
        }
        ch @ Characteristic::Prime(_) => {
            if lc.is_one() {
                (num, den)
            } else {
                let inv = ch.inverse(&lc).expect("nonzero residue");
                (num.scale(&inv), den.scale(&inv))
            }
        }
    }
}

struct RatDisplay<'a> {
    r: &'a RatFunc,
    names: &'a [String],
}

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r.is_polynomial() {
            write!(f, "{}", self.r.num.display_with(self.names))
        } else {
            write!(f, "({})/({})", self.r.num.display_with(self.names), self.r.den.display_with(self.names))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// Integer value as a constant rational function.
pub fn constant(characteristic: Characteristic, nvars: usize, c: impl Into<BigInt>) -> RatFunc {
    RatFunc::from_poly(MultiPoly::constant(characteristic, nvars, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> MultiPoly {
        MultiPoly::var(Characteristic::Zero, 1, 0)
    }

    fn c(k: i64) -> MultiPoly {
        MultiPoly::constant(Characteristic::Zero, 1, k)
    }

    #[test]
    fn reduces_common_factors() {
        // (t^2 - 1)/(2t + 2) = (t - 1)/2
        let num = &(&t() * &t()) - &c(1);
        let den = &t().scale(&BigInt::from(2)) + &c(2);
        let r = RatFunc::new(num, den).unwrap();
        assert_eq!(r.num(), &(&t() - &c(1)));
        assert_eq!(r.den(), &c(2));
        assert_eq!(r.to_string(), "(x1 - 1)/(2)");
    }

    #[test]
    fn sign_moves_to_numerator() {
        let r = RatFunc::new(c(1), -&t()).unwrap();
        assert_eq!(r.num(), &c(-1));
        assert_eq!(r.den(), &t());
    }

    #[test]
    fn zero_is_zero_over_one() {
        let r = RatFunc::new(MultiPoly::zero(Characteristic::Zero, 1), &t() + &c(3)).unwrap();
        assert!(r.is_zero());
        assert!(r.den().is_one());
        assert_eq!(RatFunc::new(c(1), MultiPoly::zero(Characteristic::Zero, 1)), Err(PolyError::ZeroDenominator));
    }

    #[test]
    fn field_arithmetic() {
        let a = RatFunc::new(c(1), t()).unwrap();
        let b = RatFunc::from_poly(t());
        assert!(a.mul(&b).is_one());
        let s = a.add(&b); // (1 + t^2)/t
        assert_eq!(s.num(), &(&(&t() * &t()) + &c(1)));
        assert!(s.sub(&a).same_value(&b));
        assert_eq!(a.div(&a).unwrap(), RatFunc::one(Characteristic::Zero, 1));
    }

    #[test]
    fn characteristic_p_denominators_are_monic() {
        let f3 = Characteristic::prime(3).unwrap();
        let t = MultiPoly::var(f3.clone(), 1, 0);
        let r = RatFunc::new(MultiPoly::one(f3.clone(), 1), t.scale(&BigInt::from(2))).unwrap();
        assert_eq!(r.den(), &t);
        assert_eq!(r.num(), &MultiPoly::constant(f3, 1, 2));
    }
}
