//! Integer number theory used throughout the crate: primality, the Möbius
//! function, Gauss's count of monic irreducibles, and the divisibility
//! function of the integers.
//!
//! Primality is decided by trial division below 2^20 and by a strong
//! pseudoprime test with a fixed base set above. For n below
//! 3.317e24 the first thirteen prime bases are a proven certificate; past
//! that bound the base set grows to every prime up to 2 (ln n)^2, which is
//! deterministic and correct under the generalized Riemann hypothesis.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::AlgebraError;

const TRIAL_LIMIT: u64 = 1 << 20;
const SMALL_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < TRIAL_LIMIT {
        return trial_division_prime(n);
    }
    is_prime(&BigInt::from(n))
}

fn trial_division_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Deterministic primality test for arbitrary-precision integers.
pub fn is_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        if small < TRIAL_LIMIT {
            return trial_division_prime(small);
        }
    }
    let n = n.magnitude();
    if n.is_even() {
        return false;
    }
    let proven_limit: BigUint = "3317044064679887385961981".parse().unwrap();
    if *n < proven_limit {
        return SMALL_BASES.iter().all(|&a| strong_probable_prime(n, &BigUint::from(a)));
    }
    let ln = n.bits() as f64 * std::f64::consts::LN_2;
    let limit = (2.0 * ln * ln).ceil() as u64;
    primes()
        .take_while(|&a| a <= limit)
        .all(|a| strong_probable_prime(n, &BigUint::from(a)))
}

fn strong_probable_prime(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let a = a % n;
    if a.is_zero() {
        return true;
    }
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Iterator over all primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    std::iter::once(2).chain((3..).step_by(2).filter(|&n| is_prime_u64(n)))
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    (n + 1..).find(|&m| is_prime_u64(m)).expect("primes are unbounded")
}

/// Prime factorization by trial division, as (prime, multiplicity) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of a nonzero big integer, by trial division.
pub fn prime_divisors(n: &BigInt) -> BTreeSet<BigInt> {
    let mut rest = n.abs();
    let mut out = BTreeSet::new();
    let mut d = BigInt::from(2);
    while &d * &d <= rest {
        if (&rest % &d).is_zero() {
            while (&rest % &d).is_zero() {
                rest /= &d;
            }
            out.insert(d.clone());
        }
        d += 1;
    }
    if rest > BigInt::one() {
        out.insert(rest);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Sum of the divisors of `n`.
pub fn divisor_sum(n: u64) -> u64 {
    divisors(n).into_iter().sum()
}

/// The Möbius function: 1 for d = 1, (-1)^k for a product of k distinct
/// primes, 0 when d has a squared prime factor.
pub fn mobius(d: u64) -> Result<i8, AlgebraError> {
    if d == 0 {
        return Err(AlgebraError::NonPositive(BigInt::zero()));
    }
    let factors = factorize(d);
    if factors.iter().any(|&(_, k)| k > 1) {
        return Ok(0);
    }
    Ok(if factors.len().is_multiple_of(2) { 1 } else { -1 })
}

/// Number of monic irreducible polynomials of degree `l` over F_p, via
/// I_l(p) = (1/l) * sum_{d | l} mu(d) p^(l/d).
pub fn gauss_irreducible_count(p: &BigInt, l: u64) -> Result<BigInt, AlgebraError> {
    if l == 0 {
        return Err(AlgebraError::NonPositive(BigInt::zero()));
    }
    if !is_prime(p) {
        return Err(AlgebraError::NotPrime(p.clone()));
    }
    let mut total = BigInt::zero();
    for d in divisors(l) {
        let mu = mobius(d)?;
        if mu == 0 {
            continue;
        }
        let exp = u32::try_from(l / d).expect("degree fits in u32");
        let term = num_traits::pow::pow(p.clone(), exp as usize);
        if mu > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    let (q, r) = total.div_rem(&BigInt::from(l));
    debug_assert!(r.is_zero(), "necklace sum must be divisible by l");
    Ok(q)
}

/// Least prime p with p not dividing `i` and p outside `excluded`.
pub fn smallest_prime_not_dividing(
    i: &BigInt,
    excluded: &BTreeSet<BigInt>,
) -> Result<BigInt, AlgebraError> {
    if i.is_zero() {
        return Err(AlgebraError::ZeroInteger);
    }
    let p = primes()
        .map(BigInt::from)
        .find(|p| !excluded.contains(p) && !(i % p).is_zero())
        .expect("some prime avoids any nonzero integer");
    Ok(p)
}

/// Exact divisibility function of the integers: the least m >= 2 with m not
/// dividing i. The index-m subgroup mZ omits i exactly when m does not
/// divide i, so this is the minimal index of a subgroup avoiding i.
pub fn dz(i: &BigInt) -> Result<u64, AlgebraError> {
    if i.is_zero() {
        return Err(AlgebraError::ZeroInteger);
    }
    Ok((2u64..)
        .find(|&m| !(i % BigInt::from(m)).is_zero())
        .expect("i has finitely many divisors"))
}

/// [`dz`] for machine integers; `i` must be nonzero.
pub fn dz_u64(i: u64) -> u64 {
    assert!(i != 0, "dz is undefined at 0");
    (2u64..).find(|&m| !i.is_multiple_of(m)).unwrap()
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(1).unwrap(), 1);
        assert_eq!(mobius(4).unwrap(), 0);
        assert_eq!(mobius(6).unwrap(), 1);
        assert_eq!(mobius(30).unwrap(), -1);
        assert!(mobius(0).is_err());
    }

    #[test]
    fn mobius_is_multiplicative_on_coprimes() {
        for a in 1..=100u64 {
            for b in 1..=100u64 {
                if a.gcd(&b) == 1 {
                    assert_eq!(
                        mobius(a * b).unwrap(),
                        mobius(a).unwrap() * mobius(b).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn gauss_counts_small() {
        assert_eq!(gauss_irreducible_count(&big(2), 1).unwrap(), big(2));
        assert_eq!(gauss_irreducible_count(&big(2), 2).unwrap(), big(1));
        assert_eq!(gauss_irreducible_count(&big(2), 3).unwrap(), big(2));
        assert_eq!(gauss_irreducible_count(&big(2), 4).unwrap(), big(3));
        assert!(gauss_irreducible_count(&big(4), 2).is_err());
        assert!(gauss_irreducible_count(&big(2), 0).is_err());
    }

    #[test]
    fn gauss_count_exceeds_half_power_when_checkable() {
        for p in [2i64, 3, 5, 7] {
            for l in 1..=16u64 {
                let half = (p as f64).powf(l as f64 / 2.0);
                if half >= 4.0 * l as f64 {
                    let count = gauss_irreducible_count(&big(p), l).unwrap();
                    assert!(count.to_f64().unwrap() >= half, "p={p} l={l}");
                }
            }
        }
    }

    #[test]
    fn smallest_prime_examples() {
        let none = BTreeSet::new();
        assert_eq!(smallest_prime_not_dividing(&big(1), &none).unwrap(), big(2));
        assert_eq!(smallest_prime_not_dividing(&big(6), &none).unwrap(), big(5));
        let five: BTreeSet<_> = [big(5)].into();
        assert_eq!(smallest_prime_not_dividing(&big(6), &five).unwrap(), big(7));
        assert_eq!(smallest_prime_not_dividing(&big(-30), &none).unwrap(), big(7));
        assert!(smallest_prime_not_dividing(&big(0), &none).is_err());
    }

    #[test]
    fn dz_examples() {
        assert_eq!(dz(&big(1)).unwrap(), 2);
        assert_eq!(dz(&big(6)).unwrap(), 4);
        assert_eq!(dz(&big(12)).unwrap(), 5);
        assert_eq!(dz(&big(-12)).unwrap(), 5);
        assert!(dz(&big(0)).is_err());
    }

    #[test]
    fn dz_is_minimal_non_divisor() {
        for i in 1..2000u64 {
            let m = dz_u64(i);
            assert!(i % m != 0);
            assert!((2..m).all(|k| i % k == 0));
        }
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), trial_division_prime(n), "n={n}");
        }
        // Strong pseudoprimes to several small bases.
        assert!(!is_prime(&big(3215031751)));
        assert!(!is_prime(&"3825123056546413051".parse::<BigInt>().unwrap()));
        assert!(is_prime(&big(1_000_000_007)));
        assert!(is_prime(&"170141183460469231731687303715884105727".parse::<BigInt>().unwrap()));
        assert!(!is_prime(&big(-7)));
    }

    #[test]
    fn factorization_and_divisor_sums() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisor_sum(4), 7);
        let ps: Vec<_> = prime_divisors(&big(-60)).into_iter().collect();
        assert_eq!(ps, vec![big(2), big(3), big(5)]);
        assert_eq!(next_prime(31), 37);
    }
}
