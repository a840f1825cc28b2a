//! Small finite coefficient rings (Z/m and tabulated fields F_q) with
//! machine-word elements, matrices over them, and exact group closure.
//! These back the image-order computations, where millions of small
//! matrix products are needed.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::field::{ExtField, SmallField};
use crate::multipoly::MultiPoly;
use crate::ratfunc::RatFunc;

/// A finite commutative ring with elements encoded as `u32`.
#[derive(Clone, Debug)]
pub enum SmallRing {
    /// Z/m for m ≥ 2.
    Zmod(u32),
    /// A finite field F_{p^k}, k ≥ 2 (prime fields use `Zmod`).
    Field(SmallField),
}

impl SmallRing {
    /// The tabulated form of an extension field, if it is small enough.
    pub fn from_field(field: &ExtField) -> Option<SmallRing> {
        if field.is_prime_field() {
            field.characteristic().to_u32().map(SmallRing::Zmod)
        } else {
            SmallField::from_ext(field).map(SmallRing::Field)
        }
    }

    pub fn order(&self) -> u64 {
        match self {
            SmallRing::Zmod(m) => *m as u64,
            SmallRing::Field(f) => f.order() as u64,
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            SmallRing::Zmod(m) => *m,
            SmallRing::Field(f) => f.characteristic(),
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match self {
            SmallRing::Zmod(m) => ((a as u64 + b as u64) % *m as u64) as u32,
            SmallRing::Field(f) => f.add(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            SmallRing::Zmod(m) => ((a as u64 * b as u64) % *m as u64) as u32,
            SmallRing::Field(f) => f.mul(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match self {
            SmallRing::Zmod(m) => (*m - a % *m) % *m,
            SmallRing::Field(f) => f.neg(a),
        }
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(&self, a: u32) -> Option<u32> {
        match self {
            SmallRing::Zmod(m) => {
                let e = BigInt::from(a).extended_gcd(&BigInt::from(*m));
                if e.gcd == BigInt::from(1) {
                    e.x.mod_floor(&BigInt::from(*m)).to_u32()
                } else {
                    None
                }
            }
            SmallRing::Field(f) => f.inv(a),
        }
    }

    /// Image of an integer (through the prime subring).
    pub fn from_int(&self, c: &BigInt) -> u32 {
        let m = BigInt::from(self.characteristic());
        c.mod_floor(&m).to_u32().expect("residue fits")
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut result = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Evaluates a polynomial at the given variable images.
    pub fn eval_poly(&self, f: &MultiPoly, images: &[u32]) -> u32 {
        let mut acc = 0;
        for (m, c) in f.terms() {
            let mut t = self.from_int(c);
            for (&x, &e) in images.iter().zip(m.exponents()) {
                if e > 0 {
                    t = self.mul(t, self.pow(x, e as u64));
                }
            }
            acc = self.add(acc, t);
        }
        acc
    }

    /// Evaluates a rational function; `None` if the denominator is not a
    /// unit.
    pub fn eval_ratfunc(&self, r: &RatFunc, images: &[u32]) -> Option<u32> {
        let num = self.eval_poly(r.num(), images);
        if r.den().is_one() {
            return Some(num);
        }
        let den = self.inv(self.eval_poly(r.den(), images))?;
        Some(self.mul(num, den))
    }
}

/// Square matrix over a [`SmallRing`], row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SmallMatrix(pub Vec<u32>);

impl SmallMatrix {
    pub fn identity(size: usize) -> Self {
        SmallMatrix((0..size * size).map(|k| u32::from(k / size == k % size)).collect())
    }

    pub fn size(&self) -> usize {
        (self.0.len() as f64).sqrt().round() as usize
    }

    pub fn mul(&self, other: &SmallMatrix, ring: &SmallRing) -> SmallMatrix {
        let n = self.size();
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.0[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.0[k * n + j];
                    if b != 0 {
                        out[i * n + j] = ring.add(out[i * n + j], ring.mul(a, b));
                    }
                }
            }
        }
        SmallMatrix(out)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.size();
        self.0.iter().enumerate().all(|(k, &v)| v == u32::from(k / n == k % n))
    }
}

/// Order of the group generated by `gens`, by breadth-first closure.
/// `None` if the closure grows past `cap` elements.
pub fn group_order(ring: &SmallRing, gens: &[SmallMatrix], cap: usize) -> Option<u64> {
    let Some(first) = gens.first() else {
        return Some(1);
    };
    let n = first.size();
    let gens: Vec<&SmallMatrix> = gens.iter().filter(|g| !g.is_identity()).collect();
    let bits = 32 - (ring.order() as u32).saturating_sub(1).leading_zeros();
    if (n * n) as u32 * bits.max(1) <= 128 {
        closure_packed(ring, &gens, n, bits.max(1), cap)
    } else {
        closure_general(ring, &gens, n, cap)
    }
}

fn closure_general(ring: &SmallRing, gens: &[&SmallMatrix], n: usize, cap: usize) -> Option<u64> {
    let id = SmallMatrix::identity(n);
    let mut seen: HashSet<SmallMatrix> = HashSet::new();
    seen.insert(id.clone());
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = x.mul(g, ring);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return None;
                }
                seen.insert(y.clone());
                queue.push(y);
            }
        }
    }
    Some(seen.len() as u64)
}

/// Closure with matrices packed into a single `u128` key.
fn closure_packed(ring: &SmallRing, gens: &[&SmallMatrix], n: usize, bits: u32, cap: usize) -> Option<u64> {
    let mask = (1u128 << bits) - 1;
    let pack = |m: &[u32]| m.iter().rev().fold(0u128, |acc, &v| (acc << bits) | v as u128);
    let unpack = |mut k: u128, out: &mut [u32]| {
        for v in out.iter_mut() {
            *v = (k & mask) as u32;
            k >>= bits;
        }
    };
    let id = SmallMatrix::identity(n);
    let mut seen: HashSet<u128> = HashSet::new();
    let start = pack(&id.0);
    seen.insert(start);
    let mut queue = vec![start];
    let mut x = vec![0u32; n * n];
    let mut y = vec![0u32; n * n];
    while let Some(key) = queue.pop() {
        unpack(key, &mut x);
        for g in gens {
            y.iter_mut().for_each(|v| *v = 0);
            for i in 0..n {
                for k in 0..n {
                    let a = x[i * n + k];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..n {
                        let b = g.0[k * n + j];
                        if b != 0 {
                            y[i * n + j] = ring.add(y[i * n + j], ring.mul(a, b));
                        }
                    }
                }
            }
            let ky = pack(&y);
            if !seen.contains(&ky) {
                if seen.len() >= cap {
                    return None;
                }
                seen.insert(ky);
                queue.push(ky);
            }
        }
    }
    Some(seen.len() as u64)
}

/// Evaluates the entries of a matrix of rational functions; `None` if some
/// denominator is not a unit.
pub fn eval_matrix(ring: &SmallRing, entries: &[RatFunc], images: &[u32]) -> Option<SmallMatrix> {
    entries.iter().map(|e| ring.eval_ratfunc(e, images)).collect::<Option<Vec<_>>>().map(SmallMatrix)
}
