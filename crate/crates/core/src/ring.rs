//! Coefficient rings: the integers or a prime field F_p.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::is_prime;
use crate::error::AlgebraError;

/// Characteristic of a coefficient ring. `Zero` means the integers;
/// `Prime(p)` means F_p with residues stored in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Characteristic {
    Zero,
    Prime(Arc<BigInt>),
}

impl Characteristic {
    pub fn prime(p: impl Into<BigInt>) -> Result<Self, AlgebraError> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Characteristic::Prime(Arc::new(p)))
    }

    /// Builds the characteristic from a plain integer: 0 or a prime.
    pub fn from_int(c: &BigInt) -> Result<Self, AlgebraError> {
        if c.is_zero() {
            Ok(Characteristic::Zero)
        } else {
            Characteristic::prime(c.clone())
        }
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            Characteristic::Zero => None,
            Characteristic::Prime(p) => Some(p),
        }
    }

    pub fn is_zero_char(&self) -> bool {
        matches!(self, Characteristic::Zero)
    }

    pub fn as_int(&self) -> BigInt {
        self.modulus().cloned().unwrap_or_default()
    }

    /// Canonical representative of `c` in this ring.
    pub fn reduce(&self, c: BigInt) -> BigInt {
        match self {
            Characteristic::Zero => c,
            Characteristic::Prime(p) => c.mod_floor(p),
        }
    }

    /// Multiplicative inverse of a coefficient, if it is a unit.
    pub fn inverse(&self, c: &BigInt) -> Option<BigInt> {
        match self {
            Characteristic::Zero => {
                if c.abs().is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            Characteristic::Prime(p) => {
                let c = c.mod_floor(p);
                if c.is_zero() {
                    None
                } else {
                    c.modinv(p)
                }
            }
        }
    }

    pub fn check_same(&self, other: &Characteristic) -> Result<(), AlgebraError> {
        if self == other {
            Ok(())
        } else {
            Err(AlgebraError::CharacteristicMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Characteristic::Zero => write!(f, "0"),
            Characteristic::Prime(p) => write!(f, "{p}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_are_canonical() {
        let f5 = Characteristic::prime(5).unwrap();
        assert_eq!(f5.reduce(BigInt::from(-7)), BigInt::from(3));
        assert_eq!(f5.inverse(&BigInt::from(2)), Some(BigInt::from(3)));
        assert_eq!(f5.inverse(&BigInt::from(10)), None);
        assert_eq!(Characteristic::Zero.inverse(&BigInt::from(-1)), Some(BigInt::from(-1)));
        assert_eq!(Characteristic::Zero.inverse(&BigInt::from(2)), None);
        assert!(Characteristic::prime(9).is_err());
    }
}
