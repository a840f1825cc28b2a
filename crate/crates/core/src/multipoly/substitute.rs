//! The substitution x_i ↦ x^{n_i} and the choice of exponents that keeps a
//! nonzero polynomial nonzero.
//!
//! The exponent recursion peels off the first remaining variable: write
//! f = (h0 + x1·h1)·x1^k with h0 free of x1, pick exponents for h0 on the
//! remaining variables, and send x1 to x^{d^{2s}} so that every term
//! involving x1 lands above the degree of h0's image. The degree argument
//! is strict only for d ≥ 2, so the result is always checked, and the
//! Kronecker map n_i = (D+1)^{i-1} is the fallback.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::MultiPoly;
use crate::error::PolyError;
use crate::unipoly::UniPoly;

/// How an [`ExponentChoice`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExponentMethod {
    DegreeRecursion,
    KroneckerFallback,
}

impl ExponentMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ExponentMethod::DegreeRecursion => "degree_recursion",
            ExponentMethod::KroneckerFallback => "kronecker_fallback",
        }
    }
}

/// Exponents n_1..n_s with f(x^{n_1}, …, x^{n_s}) ≠ 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentChoice {
    pub exponents: Vec<u64>,
    /// Every n_i ≤ d^{2s} with d the total degree.
    pub bound_respected: bool,
    pub method: ExponentMethod,
    /// True when reading d as the largest per-variable degree instead of
    /// the total degree would change `bound_respected`.
    pub interpretations_disagree: bool,
}

/// Sparse image of f under x_i ↦ x^{n_i}: (exponent, coefficient) pairs in
/// increasing exponent order, zero coefficients dropped.
pub fn substitute_powers_sparse(f: &MultiPoly, exponents: &[u64]) -> Result<Vec<(u64, BigInt)>, PolyError> {
    if exponents.len() != f.nvars() {
        return Err(PolyError::ExponentLength { expected: f.nvars(), got: exponents.len() });
    }
    let ch = f.characteristic();
    let mut acc: BTreeMap<u64, BigInt> = BTreeMap::new();
    for (m, c) in f.terms() {
        let e: u64 = m.exponents().iter().zip(exponents).map(|(&a, &n)| a as u64 * n).sum();
        *acc.entry(e).or_default() += c;
    }
    Ok(acc
        .into_iter()
        .map(|(e, c)| (e, ch.reduce(c)))
        .filter(|(_, c)| !c.is_zero())
        .collect())
}

/// f(x^{n_1}, …, x^{n_s}) as a dense univariate polynomial.
pub fn substitute_powers(f: &MultiPoly, exponents: &[u64]) -> Result<UniPoly, PolyError> {
    let sparse = substitute_powers_sparse(f, exponents)?;
    Ok(UniPoly::from_sparse(f.characteristic().clone(), &sparse))
}

fn checked_pow(base: u64, exp: u64) -> Option<u64> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

/// Exponents making the substitution nonzero, following the induction on
/// (number of variables, degree); falls back to Kronecker substitution if
/// the recursion's output fails verification.
pub fn lemma_z_exponents(f: &MultiPoly) -> Result<ExponentChoice, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let s = f.nvars();
    let d = f.total_degree() as u64;
    let per_var = f.max_var_degree() as u64;
    let bound = checked_pow(d, 2 * s as u64);
    let per_var_bound = checked_pow(per_var, 2 * s as u64);
    let within = |e: &[u64], b: Option<u64>| b.is_none_or(|b| e.iter().all(|&n| n <= b));

    let mut exponents = vec![0u64; s];
    let recursion_ok = recurse(f, 0, &mut exponents)
        .map(|()| !substitute_powers_sparse(f, &exponents).map(|t| t.is_empty()).unwrap_or(true))
        .unwrap_or(false);
    let method = if recursion_ok {
        ExponentMethod::DegreeRecursion
    } else {
        exponents = kronecker_exponents(f)?;
        if substitute_powers_sparse(f, &exponents)?.is_empty() {
            return Err(PolyError::SubstitutionFault);
        }
        ExponentMethod::KroneckerFallback
    };
    let bound_respected = within(&exponents, bound);
    let per_var_respected = within(&exponents, per_var_bound);
    Ok(ExponentChoice {
        exponents,
        bound_respected,
        method,
        interpretations_disagree: bound_respected != per_var_respected,
    })
}

/// Kronecker exponents n_i = (D+1)^{i-1}, D the largest per-variable
/// degree; distinct monomials map to distinct powers of x.
pub fn kronecker_exponents(f: &MultiPoly) -> Result<Vec<u64>, PolyError> {
    let base = f.max_var_degree().max(0) as u64 + 1;
    (0..f.nvars() as u64)
        .map(|i| checked_pow(base, i).ok_or(PolyError::SubstitutionFault))
        .collect()
}

/// Fills `out[v..]` for the polynomial `f`, which involves only variables
/// with index ≥ v. Returns `None` on exponent overflow.
fn recurse(f: &MultiPoly, v: usize, out: &mut [u64]) -> Option<()> {
    let s_eff = f.nvars() - v;
    if s_eff == 0 || f.is_constant() {
        out[v..].iter_mut().for_each(|n| *n = 0);
        return Some(());
    }
    if s_eff == 1 {
        // smallest n in {0, 1}: n = 0 works iff f(1) ≠ 0
        out[v] = 0;
        let at_one = substitute_powers_sparse(f, out).ok()?;
        if at_one.is_empty() {
            out[v] = 1;
        }
        return Some(());
    }
    // f = (h0 + x_v h1) x_v^k; dividing out x_v^k lowers the degree
    let k = f.terms().map(|(m, _)| m.exponents()[v]).min().unwrap_or(0);
    let mut h0 = MultiPoly::zero(f.characteristic().clone(), f.nvars());
    let mut reduced_degree = 0u64;
    for (m, c) in f.terms() {
        let mut e = m.exponents().to_vec();
        e[v] -= k;
        let deg: u64 = e.iter().map(|&x| x as u64).sum();
        reduced_degree = reduced_degree.max(deg);
        if e[v] == 0 {
            h0.add_term(super::Monomial::new(e), c.clone());
        }
    }
    recurse(&h0, v + 1, out)?;
    out[v] = checked_pow(reduced_degree, 2 * s_eff as u64)?;
    Some(())
}
