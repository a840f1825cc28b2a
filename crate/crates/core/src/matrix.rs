//! Square matrices over the rational function field and over the
//! polynomial ring.

use std::fmt;

use num_bigint::BigInt;

use crate::error::PolyError;
use crate::multipoly::MultiPoly;
use crate::ratfunc::RatFunc;
use crate::ring::Characteristic;

/// M×M matrix of rational functions, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    size: usize,
    entries: Vec<RatFunc>,
}

impl FieldMatrix {
    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Result<Self, PolyError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(PolyError::ArityMismatch(size, row.len()));
            }
            entries.extend(row);
        }
        Ok(FieldMatrix { size, entries })
    }

    pub fn identity(characteristic: &Characteristic, nvars: usize, size: usize) -> Self {
        let entries = (0..size * size)
            .map(|k| {
                if k / size == k % size {
                    RatFunc::one(characteristic.clone(), nvars)
                } else {
                    RatFunc::zero(characteristic.clone(), nvars)
                }
            })
            .collect();
        FieldMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[RatFunc] {
        &self.entries
    }

    /// True when every entry is fully reduced, so that structural equality
    /// and hashing are exact.
    pub fn is_canonical(&self) -> bool {
        self.entries.iter().all(RatFunc::is_reduced)
    }

    pub fn mul(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: Option<RatFunc> = None;
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    let term = a.mul(b);
                    acc = Some(match acc {
                        None => term,
                        Some(s) => s.add(&term),
                    });
                }
                entries.push(acc.unwrap_or_else(|| self.zero_entry()));
            }
        }
        FieldMatrix { size: n, entries }
    }

    pub fn sub(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.sub(b)).collect();
        FieldMatrix { size: self.size, entries }
    }

    fn zero_entry(&self) -> RatFunc {
        let e = &self.entries[0];
        RatFunc::zero(e.characteristic().clone(), e.nvars())
    }

    /// Exact identity test.
    pub fn is_identity(&self) -> bool {
        (0..self.size).all(|i| {
            (0..self.size).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Determinant by Gaussian elimination over the fraction field.
    pub fn det(&self) -> RatFunc {
        let n = self.size;
        let mut a: Vec<RatFunc> = self.entries.clone();
        let mut det = RatFunc::one(a[0].characteristic().clone(), a[0].nvars());
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return self.zero_entry();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = det.neg();
            }
            let p = a[col * n + col].clone();
            det = det.mul(&p);
            let p_inv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].mul(&p_inv);
                for j in col..n {
                    let v = a[r * n + j].sub(&factor.mul(&a[col * n + j]));
                    a[r * n + j] = v;
                }
            }
        }
        det
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> FieldMatrix {
        let n = self.size;
        let entries = (0..n)
            .filter(|&i| i != skip_row)
            .flat_map(|i| (0..n).filter(move |&j| j != skip_col).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        FieldMatrix { size: n - 1, entries }
    }

    /// Inverse via the adjugate: A⁻¹ = adj(A)/det(A). `None` if singular.
    pub fn inverse(&self) -> Option<FieldMatrix> {
        let n = self.size;
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let det_inv = det.inv().ok()?;
        if n == 1 {
            return Some(FieldMatrix { size: 1, entries: vec![det_inv] });
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // (i, j) entry of the adjugate is the (j, i) cofactor
                let c = self.minor(j, i).det();
                let c = if (i + j) % 2 == 1 { c.neg() } else { c };
                entries.push(c.mul(&det_inv));
            }
        }
        Some(FieldMatrix { size: n, entries })
    }

    /// Renders as "[[a, b], [c, d]]" with the given variable names.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        MatrixDisplay { m: self, names }
    }
}

struct MatrixDisplay<'a> {
    m: &'a FieldMatrix,
    names: &'a [String],
}

impl fmt::Display for MatrixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.m.size {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.m.size {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.m.get(i, j).display_with(self.names))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// M×M matrix of polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    size: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(size: usize, entries: Vec<MultiPoly>) -> Self {
        assert_eq!(entries.len(), size * size, "entry count must be size²");
        PolyMatrix { size, entries }
    }

    /// c·I.
    pub fn scalar(c: &MultiPoly, size: usize) -> Self {
        let zero = MultiPoly::zero(c.characteristic().clone(), c.nvars());
        let entries = (0..size * size).map(|k| if k / size == k % size { c.clone() } else { zero.clone() }).collect();
        PolyMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.size, other.size, "matrix size mismatch");
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = MultiPoly::zero(self.entries[0].characteristic().clone(), self.entries[0].nvars());
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                entries.push(acc);
            }
        }
        PolyMatrix { size: n, entries }
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        PolyMatrix { size: self.size, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_zero)
    }

    /// Largest absolute coefficient over all entries.
    pub fn max_abs_coefficient(&self) -> BigInt {
        self.entries.iter().map(MultiPoly::max_abs_coefficient).max().unwrap_or_default()
    }

    /// Largest total degree over all entries; -1 for the zero matrix.
    pub fn max_entry_degree(&self) -> i64 {
        self.entries.iter().map(MultiPoly::total_degree).max().unwrap_or(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> MultiPoly {
        MultiPoly::var(Characteristic::Zero, 1, 0)
    }

    fn r(p: MultiPoly) -> RatFunc {
        RatFunc::from_poly(p)
    }

    fn k(c: i64) -> RatFunc {
        r(MultiPoly::constant(Characteristic::Zero, 1, c))
    }

    #[test]
    fn sanov_product() {
        let a = FieldMatrix::from_rows(vec![vec![k(1), r(t())], vec![k(0), k(1)]]).unwrap();
        let b = FieldMatrix::from_rows(vec![vec![k(1), k(0)], vec![r(t()), k(1)]]).unwrap();
        let ab = a.mul(&b);
        let t2 = &(&t() * &t()) + &MultiPoly::one(Characteristic::Zero, 1);
        assert_eq!(ab, FieldMatrix::from_rows(vec![vec![r(t2), r(t())], vec![r(t()), k(1)]]).unwrap());
        assert!(ab.det().is_one());
        let inv = ab.inverse().unwrap();
        assert!(ab.mul(&inv).is_identity());
        assert!(inv.mul(&ab).is_identity());
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = FieldMatrix::from_rows(vec![vec![r(t()), k(2)], vec![r(t().scale(&BigInt::from(3))), k(6)]]).unwrap();
        assert!(m.det().is_zero());
        assert!(m.inverse().is_none());
    }

    #[test]
    fn diagonal_inverse() {
        let tinv = RatFunc::new(MultiPoly::one(Characteristic::Zero, 1), t()).unwrap();
        let m = FieldMatrix::from_rows(vec![vec![r(t()), k(0)], vec![k(0), tinv.clone()]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv.get(0, 0), &tinv);
        assert_eq!(inv.get(1, 1), &r(t()));
        let names = vec!["t".to_string()];
        assert_eq!(m.display_with(&names).to_string(), "[[t, 0], [0, (1)/(t)]]");
    }

    #[test]
    fn three_by_three_inverse() {
        let m = FieldMatrix::from_rows(vec![
            vec![k(2), r(t()), k(0)],
            vec![k(1), k(1), k(3)],
            vec![r(&t() + &MultiPoly::one(Characteristic::Zero, 1)), k(0), k(1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
    }
}
