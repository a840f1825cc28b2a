//! Arithmetic, fields, polynomials, rational functions and parsing,
//! checked against small independent oracles.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use resfin_core::arith::{dz, gauss_irreducible_count, smallest_prime_not_dividing};
use resfin_core::field::{ExtField, ExtFieldElem};
use resfin_core::multipoly::{
    div_exact, gcd, lemma_z_exponents, random_nonzero_multipoly, substitute_powers, ExponentMethod, MultiPoly,
};
use resfin_core::parse::parse_entry;
use resfin_core::ratfunc::RatFunc;
use resfin_core::ring::Characteristic;
use resfin_core::unipoly::{enumerate_irreducibles, UniPoly};

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Monic polynomials of degree d over F_p as coefficient vectors (low first).
fn monic_polys(p: u64, d: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = p.pow(d as u32);
    for code in 0..total {
        let mut c = code;
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push(c % p);
            c /= p;
        }
        v.push(1);
        out.push(v);
    }
    out
}

fn mul_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Irreducible count by sieving out all products of lower-degree monics.
fn irreducible_count_by_sieve(p: u64, d: usize) -> u64 {
    let mut reducible: HashSet<Vec<u64>> = HashSet::new();
    for a in 1..d {
        let b = d - a;
        if a > b {
            break;
        }
        for f in monic_polys(p, a) {
            for g in monic_polys(p, b) {
                reducible.insert(mul_mod(&f, &g, p));
            }
        }
    }
    p.pow(d as u32) - reducible.len() as u64
}

#[test]
fn gauss_count_matches_sieve() {
    for p in [2u64, 3, 5] {
        for l in 1..=5usize {
            let expected = irreducible_count_by_sieve(p, l);
            assert_eq!(gauss_irreducible_count(&big(p as i64), l as u64).unwrap(), BigInt::from(expected), "p={p} l={l}");
            let listed = enumerate_irreducibles(&big(p as i64), l, 1 << 20).unwrap();
            assert_eq!(listed.len() as u64, expected, "p={p} l={l}");
        }
    }
}

#[test]
fn dz_matches_definition() {
    for i in 1..=2000i64 {
        let d = dz(&big(i)).unwrap();
        // every m below d divides i; d does not
        assert!((2..d).all(|m| i % m as i64 == 0));
        assert_ne!(i % d as i64, 0);
        assert_eq!(dz(&big(-i)).unwrap(), d);
    }
    assert_eq!(dz(&big(12)).unwrap(), 5);
    assert!(dz(&big(0)).is_err());
}

#[test]
fn prime_avoidance_respects_exclusions() {
    let excluded = [big(2), big(3)].into_iter().collect();
    assert_eq!(smallest_prime_not_dividing(&big(5), &excluded).unwrap(), big(7));
    assert_eq!(smallest_prime_not_dividing(&big(30 * 7), &Default::default()).unwrap(), big(11));
}

fn f(p: i64, coeffs: &[i64]) -> Arc<ExtField> {
    let ch = Characteristic::prime(p).unwrap();
    Arc::new(ExtField::new(UniPoly::new(ch, coeffs.iter().map(|&c| big(c)).collect())).unwrap())
}

fn elem(field: &Arc<ExtField>, coeffs: &[i64]) -> ExtFieldElem {
    let ch = Characteristic::prime(field.characteristic().clone()).unwrap();
    ExtFieldElem::from_poly(field, &UniPoly::new(ch, coeffs.iter().map(|&c| big(c)).collect())).unwrap()
}

proptest! {
    #[test]
    fn field_axioms_in_f9_and_f8(a in proptest::collection::vec(0i64..3, 2), b in proptest::collection::vec(0i64..3, 2),
                                 c in proptest::collection::vec(0i64..2, 3), d in proptest::collection::vec(0i64..2, 3)) {
        for (field, x, y) in [
            (f(3, &[1, 0, 1]), a.as_slice(), b.as_slice()),
            (f(2, &[1, 1, 0, 1]), c.as_slice(), d.as_slice()),
        ] {
            let x = elem(&field, x);
            let y = elem(&field, y);
            let q = field.order();
            // Frobenius: x^q = x
            prop_assert_eq!(x.pow(&q), x.clone());
            prop_assert_eq!(x.mul(&y.add(&x)), x.mul(&y).add(&x.mul(&x)));
            if !x.is_zero() {
                prop_assert!(x.mul(&x.inv().unwrap()).is_one());
                // the multiplicative group has order q − 1
                prop_assert!(x.pow(&(q.clone() - BigUint::one())).is_one());
            }
        }
    }
}

fn rng_polys(seed: u64, ch: &Characteristic, nvars: usize, count: usize) -> Vec<MultiPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_nonzero_multipoly(&mut rng, ch, nvars, 4, 9, 5)).collect()
}

fn eval_int(f: &MultiPoly, point: &[BigInt]) -> BigInt {
    // independent evaluation by summing terms
    let mut acc = BigInt::zero();
    for (m, c) in f.terms() {
        let mut t = c.clone();
        for (x, &e) in point.iter().zip(m.exponents()) {
            t *= num_traits::pow::pow(x.clone(), e as usize);
        }
        acc += t;
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_laws(seed in any::<u64>(), x in -5i64..6, y in -5i64..6) {
        let ch = Characteristic::Zero;
        let ps = rng_polys(seed, &ch, 2, 3);
        let (a, b, c) = (&ps[0], &ps[1], &ps[2]);
        prop_assert_eq!(&(a * &(b + c)), &(&(a * b) + &(a * c)));
        prop_assert_eq!(&(a * b), &(b * a));
        prop_assert!((a - a).is_zero());
        let pt = [big(x), big(y)];
        prop_assert_eq!(eval_int(&(a * b), &pt), eval_int(a, &pt) * eval_int(b, &pt));
        prop_assert_eq!(div_exact(&(a * b), b), Some(a.clone()));
    }

    #[test]
    fn gcd_contains_common_factor(seed in any::<u64>()) {
        let ch = Characteristic::Zero;
        let ps = rng_polys(seed, &ch, 2, 3);
        let (a, b, h) = (&ps[0], &ps[1], &ps[2]);
        let g = gcd(&(a * h), &(b * h));
        prop_assert!(div_exact(&g, h).is_some() || div_exact(&g, &(-h)).is_some());
        prop_assert!(div_exact(&(a * h), &g).is_some());
        prop_assert!(div_exact(&(b * h), &g).is_some());
    }

    #[test]
    fn ratfunc_field_laws_and_round_trip(seed in any::<u64>(), p in prop_oneof![Just(0i64), Just(2), Just(3), Just(5)]) {
        let ch = if p == 0 { Characteristic::Zero } else { Characteristic::prime(p).unwrap() };
        let ps = rng_polys(seed, &ch, 2, 4);
        let r = RatFunc::new(ps[0].clone(), ps[1].clone()).unwrap();
        let s = RatFunc::new(ps[2].clone(), ps[3].clone()).unwrap();
        prop_assert!(r.mul(&r.inv().unwrap()).is_one());
        prop_assert_eq!(r.add(&s).sub(&s), r.clone());
        // cross-multiplication oracle for the canonical form
        prop_assert_eq!(r.num() * &ps[1], r.den() * &ps[0]);
        let names = vec!["u".to_string(), "v".to_string()];
        let text = r.display_with(&names).to_string();
        prop_assert_eq!(parse_entry(&text, &ch, &names).unwrap(), r);
    }
}

/// Independent univariate substitution: coefficient of x^e collects every
/// term with Σ m_j n_j = e.
fn substitute_oracle(f: &MultiPoly, exps: &[u64]) -> BTreeMap<u64, BigInt> {
    let modulus = f.characteristic().modulus().cloned();
    let mut out: BTreeMap<u64, BigInt> = BTreeMap::new();
    for (m, c) in f.terms() {
        let e: u64 = m.exponents().iter().zip(exps).map(|(&a, &n)| a as u64 * n).sum();
        *out.entry(e).or_default() += c;
    }
    out.into_iter()
        .map(|(e, c)| (e, modulus.as_ref().map_or(c.clone(), |p| c.mod_floor(p))))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn lemma_z_substitution_is_nonzero(seed in any::<u64>(), s in 1usize..=3, p in prop_oneof![Just(0i64), Just(2), Just(3)]) {
        let ch = if p == 0 { Characteristic::Zero } else { Characteristic::prime(p).unwrap() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_nonzero_multipoly(&mut rng, &ch, s, 5, 20, 6);
        let choice = lemma_z_exponents(&f).unwrap();
        prop_assert_eq!(choice.exponents.len(), s);
        let oracle = substitute_oracle(&f, &choice.exponents);
        prop_assert!(!oracle.is_empty());
        let g = substitute_powers(&f, &choice.exponents).unwrap();
        prop_assert_eq!(g.degree(), *oracle.keys().last().unwrap() as i64);
        if choice.method == ExponentMethod::DegreeRecursion {
            prop_assert!(choice.bound_respected);
        }
    }
}

#[test]
fn parse_examples() {
    let v = vec!["t".to_string()];
    let r = parse_entry("(3*t^2 - 1)/(2*t)", &Characteristic::Zero, &v).unwrap();
    let three_t2 = MultiPoly::from_terms(Characteristic::Zero, 1, [(vec![2], big(3)), (vec![0], big(-1))]).unwrap();
    let two_t = MultiPoly::from_terms(Characteristic::Zero, 1, [(vec![1], big(2))]).unwrap();
    assert_eq!(r.num(), &three_t2);
    assert_eq!(r.den(), &two_t);
    let w = vec!["t1".to_string()];
    assert!(parse_entry("t1 - t1", &Characteristic::Zero, &w).unwrap().is_zero());
}
