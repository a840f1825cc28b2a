//! Exact division and gcd for multivariate polynomials.
//!
//! The gcd is the recursive primitive-PRS algorithm: split off the content
//! with respect to a main variable, run pseudo-remainders on the primitive
//! parts, and recombine. Work is metered in term operations so callers can
//! bound the effort and fall back when a budget runs out.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Monomial, MultiPoly};
use crate::ring::Characteristic;

/// Default effort for [`gcd_with_budget`], in term operations.
pub const DEFAULT_GCD_BUDGET: usize = 2_000_000;

/// Exact quotient f / g, or `None` if g does not divide f.
pub fn div_exact(f: &MultiPoly, g: &MultiPoly) -> Option<MultiPoly> {
    assert!(!g.is_zero(), "division by the zero polynomial");
    let ch = f.characteristic().clone();
    let (lm_g, lc_g) = g.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
    let lc_inv = ch.inverse(&lc_g);
    let mut rem = f.clone();
    let mut quot = MultiPoly::zero(ch.clone(), f.nvars());
    while let Some((lm_r, lc_r)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        if !lm_g.divides(&lm_r) {
            return None;
        }
        let c = match (&ch, &lc_inv) {
            (_, Some(inv)) => ch.reduce(&lc_r * inv),
            (Characteristic::Zero, None) => {
                let (q, r) = lc_r.div_rem(&lc_g);
                if !r.is_zero() {
                    return None;
                }
                q
            }
            (Characteristic::Prime(_), None) => unreachable!("nonzero residues are units"),
        };
        let m = lm_g.quotient_of(&lm_r);
        rem = &rem - &g.mul_monomial(&m, &c);
        quot.add_term(m, c);
    }
    Some(quot)
}

/// Greatest common divisor, normalized to positive leading coefficient
/// (characteristic 0) or monic (characteristic p). gcd(0, 0) = 0.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let mut budget = usize::MAX;
    gcd_rec(f, g, &mut budget).expect("unbounded gcd")
}

/// [`gcd`] with an effort budget; `None` once the budget is exhausted.
pub fn gcd_with_budget(f: &MultiPoly, g: &MultiPoly, budget: &mut usize) -> Option<MultiPoly> {
    gcd_rec(f, g, budget)
}

/// Least common multiple, normalized like [`gcd`].
pub fn lcm(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    if f.is_zero() || g.is_zero() {
        return MultiPoly::zero(f.characteristic().clone(), f.nvars());
    }
    let d = gcd(f, g);
    let prod = f * g;
    div_exact(&prod, &d).expect("gcd divides the product").normalize_unit()
}

fn charge(budget: &mut usize, cost: usize) -> Option<()> {
    if *budget == usize::MAX {
        return Some(());
    }
    *budget = budget.checked_sub(cost)?;
    Some(())
}

fn constant_gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let ch = f.characteristic().clone();
    let n = f.nvars();
    match ch {
        Characteristic::Zero => {
            let a = f.constant_value().unwrap_or_default();
            let b = g.constant_value().unwrap_or_default();
            MultiPoly::constant(ch, n, a.gcd(&b))
        }
        Characteristic::Prime(_) => MultiPoly::one(ch, n),
    }
}

fn gcd_rec(f: &MultiPoly, g: &MultiPoly, budget: &mut usize) -> Option<MultiPoly> {
    if f.is_zero() {
        return Some(g.normalize_unit());
    }
    if g.is_zero() {
        return Some(f.normalize_unit());
    }
    if f.is_one() || g.is_one() {
        return Some(MultiPoly::one(f.characteristic().clone(), f.nvars()));
    }
    let main = (0..f.nvars()).rev().find(|&v| f.degree_in(v) > 0 || g.degree_in(v) > 0);
    let Some(v) = main else {
        return Some(constant_gcd(f, g));
    };
    let (cf, pf) = split_content(f, v, budget)?;
    let (cg, pg) = split_content(g, v, budget)?;
    let content = gcd_rec(&cf, &cg, budget)?;
    let (mut a, mut b) = if pf.degree_in(v) >= pg.degree_in(v) { (pf, pg) } else { (pg, pf) };
    while !b.is_zero() {
        let r = pseudo_rem(&a, &b, v, budget)?;
        a = b;
        b = if r.is_zero() { r } else { split_content(&r, v, budget)?.1 };
    }
    let (_, prim) = split_content(&a, v, budget)?;
    Some((&content * &prim).normalize_unit())
}

/// Coefficients of f viewed as a polynomial in x_v, keyed by x_v-degree.
fn coefficients_in(f: &MultiPoly, v: usize) -> BTreeMap<u32, MultiPoly> {
    let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let mut e = m.exponents().to_vec();
        let k = std::mem::replace(&mut e[v], 0);
        out.entry(k)
            .or_insert_with(|| MultiPoly::zero(f.characteristic().clone(), f.nvars()))
            .add_term(Monomial::new(e), c.clone());
    }
    out
}

/// (content, primitive part) of f with respect to x_v.
fn split_content(f: &MultiPoly, v: usize, budget: &mut usize) -> Option<(MultiPoly, MultiPoly)> {
    charge(budget, f.num_terms())?;
    let coeffs = coefficients_in(f, v);
    let mut content = MultiPoly::zero(f.characteristic().clone(), f.nvars());
    for c in coeffs.values() {
        content = gcd_rec(&content, c, budget)?;
        if content.is_one() {
            break;
        }
    }
    // keep the sign of f inside the primitive part's normalization
    let content = content.normalize_unit();
    let prim = if content.is_one() { f.clone() } else { div_exact(f, &content)? };
    Some((content, prim))
}

/// Sparse pseudo-remainder of a by b in x_v.
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: usize, budget: &mut usize) -> Option<MultiPoly> {
    let n = b.degree_in(v);
    let b_coeffs = coefficients_in(b, v);
    let lcb = b_coeffs.get(&(n as u32)).cloned().expect("leading coefficient");
    let mut r = a.clone();
    let one = BigInt::one();
    while !r.is_zero() && r.degree_in(v) >= n {
        charge(budget, r.num_terms() + b.num_terms() * (1 + lcb.num_terms()))?;
        let d = r.degree_in(v);
        let lcr = coefficients_in(&r, v).remove(&(d as u32)).expect("leading coefficient");
        let mut shift = vec![0u32; a.nvars()];
        shift[v] = (d - n) as u32;
        let shifted = (&lcr * b).mul_monomial(&Monomial::new(shift), &one);
        r = &(&lcb * &r) - &shifted;
    }
    Some(r)
}
