//! Seeded random polynomials for property tests and the CLI's self-checks.

use num_bigint::BigInt;
use rand::Rng;

use super::{Monomial, MultiPoly};
use crate::ring::Characteristic;

/// A random nonzero polynomial with at most `max_terms` terms, total degree
/// at most `max_degree`, and coefficients in `[-max_coeff, max_coeff]`.
pub fn random_nonzero_multipoly<R: Rng + ?Sized>(
    rng: &mut R,
    characteristic: &Characteristic,
    nvars: usize,
    max_degree: u32,
    max_coeff: i64,
    max_terms: usize,
) -> MultiPoly {
    assert!(max_coeff >= 1 && max_terms >= 1);
    loop {
        let mut f = MultiPoly::zero(characteristic.clone(), nvars);
        let nterms = rng.gen_range(1..=max_terms);
        for _ in 0..nterms {
            let mut budget = rng.gen_range(0..=max_degree);
            let mut e = vec![0u32; nvars];
            for slot in e.iter_mut() {
                if budget == 0 {
                    break;
                }
                let k = rng.gen_range(0..=budget);
                *slot = k;
                budget -= k;
            }
            if nvars > 0 {
                // spread leftover degree onto a random variable
                let i = rng.gen_range(0..nvars);
                e[i] += budget;
            }
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-max_coeff..=max_coeff);
            }
            // a repeated monomial keeps its first coefficient
            if f.coefficient(&e) == BigInt::from(0) {
                f.add_term(Monomial::new(e), BigInt::from(c));
            }
        }
        if !f.is_zero() {
            return f;
        }
    }
}
