//! Finite-field witnesses.
//!
//! A nonzero polynomial f is sent to a finite field without vanishing:
//! in characteristic 0 by x_j ↦ ℓ^{n_j} followed by reduction mod a prime
//! not dividing the integer f(ℓ^{n_1}, …); in characteristic p by
//! x_j ↦ x^{n_j} modulo an irreducible h that does not divide the
//! univariate image. For a nontrivial group element γ, the polynomial
//! Φ·A′ (A′ an entry of Φ^{|γ|}(γ − I)) is sent to a field this way; the
//! induced matrix map then keeps γ away from the identity.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::arith::{gauss_irreducible_count, smallest_prime_not_dividing};
use crate::error::{GroupError, PolyError};
use crate::field::{ExtField, ExtFieldElem};
use crate::finite::{eval_matrix, group_order, SmallMatrix, SmallRing};
use crate::group::{GroupSpec, Word};
use crate::matrix::{FieldMatrix, PolyMatrix};
use crate::multipoly::{lemma_z_exponents, substitute_powers, ExponentMethod, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::ring::Characteristic;
use crate::unipoly::irreducibles;

/// How a homomorphism was obtained, with the intermediate values needed to
/// audit the bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomProvenance {
    /// Characteristic 0: x_j ↦ ℓ^{n_j} mod p.
    LemmaA {
        exponents: Vec<u64>,
        method: ExponentMethod,
        /// r = deg g.
        g_degree: u64,
        /// A = max |a_j| over the coefficients of g.
        max_coeff: BigInt,
        /// The evaluation point ℓ.
        point: u64,
        /// i = g(ℓ).
        value: BigInt,
    },
    /// Characteristic p: x_j ↦ x^{n_j} mod h.
    LemmaB {
        exponents: Vec<u64>,
        method: ExponentMethod,
        g_degree: u64,
        /// Degree guaranteed by counting irreducibles (the smallest ℓ with
        /// I_ℓ(p)·ℓ > deg g); the chosen degree never exceeds it.
        count_rule_degree: u64,
    },
    /// Constant matrices over F_p: the identity map onto F_p.
    Constant,
    /// Given explicitly (search results, deserialized files).
    Explicit,
}

impl HomProvenance {
    pub fn kind(&self) -> &'static str {
        match self {
            HomProvenance::LemmaA { .. } => "lemma_a",
            HomProvenance::LemmaB { .. } => "lemma_b",
            HomProvenance::Constant => "constant",
            HomProvenance::Explicit => "explicit",
        }
    }
}

/// A ring homomorphism from the coefficient ring to a finite field, given
/// by the images of the variables.
#[derive(Clone, Debug)]
pub struct FieldHom {
    field: Arc<ExtField>,
    images: Vec<ExtFieldElem>,
    provenance: HomProvenance,
}

impl PartialEq for FieldHom {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.images == other.images
    }
}

impl FieldHom {
    pub fn new(field: Arc<ExtField>, images: Vec<ExtFieldElem>, provenance: HomProvenance) -> Self {
        FieldHom { field, images, provenance }
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn images(&self) -> &[ExtFieldElem] {
        &self.images
    }

    pub fn images_mut(&mut self) -> &mut Vec<ExtFieldElem> {
        &mut self.images
    }

    pub fn provenance(&self) -> &HomProvenance {
        &self.provenance
    }

    pub fn field_size(&self) -> BigUint {
        self.field.order()
    }

    pub fn apply_int(&self, c: &BigInt) -> ExtFieldElem {
        ExtFieldElem::from_int(&self.field, c)
    }

    pub fn apply_poly(&self, f: &MultiPoly) -> ExtFieldElem {
        let mut acc = ExtFieldElem::zero(&self.field);
        for (m, c) in f.terms() {
            let mut t = self.apply_int(c);
            for (x, &e) in self.images.iter().zip(m.exponents()) {
                if e > 0 {
                    t = t.mul(&x.pow(&BigUint::from(e)));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Image of a rational function; `None` if the denominator vanishes.
    pub fn apply_ratfunc(&self, r: &RatFunc) -> Option<ExtFieldElem> {
        let num = self.apply_poly(r.num());
        if r.den().is_one() {
            return Some(num);
        }
        let den = self.apply_poly(r.den()).inv().ok()?;
        Some(num.mul(&den))
    }

    pub fn apply_matrix(&self, m: &FieldMatrix) -> Option<FiniteMatrix> {
        let entries = m.entries().iter().map(|e| self.apply_ratfunc(e)).collect::<Option<Vec<_>>>()?;
        Some(FiniteMatrix { size: m.size(), entries })
    }

    pub fn apply_poly_matrix(&self, m: &PolyMatrix) -> FiniteMatrix {
        FiniteMatrix { size: m.size(), entries: m.entries().iter().map(|e| self.apply_poly(e)).collect() }
    }

    /// The same map tabulated over a machine-word field, if small enough.
    pub fn to_small(&self) -> Option<(SmallRing, Vec<u32>)> {
        let ring = SmallRing::from_field(&self.field)?;
        let images = self.images.iter().map(ExtFieldElem::encode).collect::<Option<Vec<_>>>()?;
        Some((ring, images))
    }
}

impl fmt::Display for FieldHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} via {}: [", self.field.order(), self.field.modulus())?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

/// Square matrix over an [`ExtField`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMatrix {
    size: usize,
    entries: Vec<ExtFieldElem>,
}

impl FiniteMatrix {
    pub fn identity(field: &Arc<ExtField>, size: usize) -> Self {
        let entries = (0..size * size)
            .map(|k| if k / size == k % size { ExtFieldElem::one(field) } else { ExtFieldElem::zero(field) })
            .collect();
        FiniteMatrix { size, entries }
    }

    pub fn entries(&self) -> &[ExtFieldElem] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtFieldElem {
        &self.entries[i * self.size + j]
    }

    pub fn mul(&self, other: &FiniteMatrix) -> FiniteMatrix {
        let n = self.size;
        let field = self.entries[0].field();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExtFieldElem::zero(field);
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        FiniteMatrix { size: n, entries }
    }

    /// Multiplies every entry by a field element.
    pub fn scale(&self, c: &ExtFieldElem) -> FiniteMatrix {
        FiniteMatrix { size: self.size, entries: self.entries.iter().map(|e| e.mul(c)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.size).all(|i| {
            (0..self.size).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() })
        })
    }

    /// Determinant by elimination.
    pub fn det(&self) -> ExtFieldElem {
        let n = self.size;
        let field = self.entries[0].field().clone();
        let mut a = self.entries.clone();
        let mut det = ExtFieldElem::one(&field);
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return ExtFieldElem::zero(&field);
            };
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                }
                det = det.neg();
            }
            let p = a[col * n + col].clone();
            det = det.mul(&p);
            let p_inv = p.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = a[r * n + col].mul(&p_inv);
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] = a[r * n + j].sub(&f.mul(&a[col * n + j]));
                }
            }
        }
        det
    }
}

/// Lemma-A style witness for a nonzero integer polynomial: the returned
/// hom does not kill `f`. `excluded` lists primes the target must avoid.
pub fn lemma_a_witness(
    f: &MultiPoly,
    excluded: &std::collections::BTreeSet<BigInt>,
) -> Result<FieldHom, PolyError> {
    if !f.characteristic().is_zero_char() {
        return Err(crate::error::AlgebraError::CharacteristicMismatch("0".into(), f.characteristic().to_string()).into());
    }
    let choice = lemma_z_exponents(f)?;
    let g = substitute_powers(f, &choice.exponents)?;
    let r = g.degree().max(0) as u64;
    let point = (1..=r + 1)
        .find(|&l| !g.eval(&BigInt::from(l)).is_zero())
        .ok_or(PolyError::SubstitutionFault)?;
    let value = g.eval(&BigInt::from(point));
    let p = smallest_prime_not_dividing(&value, excluded)?;
    let field = Arc::new(ExtField::prime(p.clone())?);
    let images = choice
        .exponents
        .iter()
        .map(|&n| ExtFieldElem::from_int(&field, &BigInt::from(point).modpow(&BigInt::from(n), &p)))
        .collect();
    let provenance = HomProvenance::LemmaA {
        exponents: choice.exponents.clone(),
        method: choice.method,
        g_degree: r,
        max_coeff: g.max_abs_coeff(),
        point,
        value,
    };
    Ok(FieldHom::new(field, images, provenance))
}

/// The smallest ℓ with I_ℓ(p)·ℓ > deg g: at that degree some monic
/// irreducible cannot divide g.
pub fn count_rule_degree(p: &BigInt, g_degree: u64) -> Result<u64, PolyError> {
    let mut l = 1u64;
    loop {
        let count = gauss_irreducible_count(p, l)?;
        if count * BigInt::from(l) > BigInt::from(g_degree) {
            return Ok(l);
        }
        l += 1;
    }
}

/// Lemma-B style witness for a nonzero polynomial over F_p: the first
/// irreducible h (by degree, then lexicographically) not dividing the
/// univariate image g, with x_j ↦ x^{n_j} mod h.
pub fn lemma_b_witness(f: &MultiPoly) -> Result<FieldHom, PolyError> {
    let p = f.characteristic().modulus().cloned().ok_or(crate::error::AlgebraError::CharacteristicZero)?;
    let choice = lemma_z_exponents(f)?;
    let g = substitute_powers(f, &choice.exponents)?;
    let r = g.degree().max(0) as u64;
    let bound = count_rule_degree(&p, r)?;
    let mut found = None;
    'search: for l in 1..=bound {
        for h in irreducibles(&p, l as usize)? {
            if !g.rem(&h)?.is_zero() {
                found = Some(h);
                break 'search;
            }
        }
    }
    let h = found.ok_or(PolyError::SubstitutionFault)?;
    let field = Arc::new(ExtField::new(h)?);
    let x = ExtFieldElem::generator(&field);
    let images = choice.exponents.iter().map(|&n| x.pow(&BigUint::from(n))).collect();
    let provenance = HomProvenance::LemmaB {
        exponents: choice.exponents.clone(),
        method: choice.method,
        g_degree: r,
        count_rule_degree: bound,
    };
    Ok(FieldHom::new(field, images, provenance))
}

/// Order of ρ(Γ), exact or (when over budget) the bound |field|^{M²}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageOrder {
    pub order: BigUint,
    pub exact: bool,
}

/// A certificate that a word is nontrivial in a finite quotient.
#[derive(Clone, Debug)]
pub struct WitnessRecord {
    pub word: Word,
    pub word_length: usize,
    /// Position (row, column) of the separating entry.
    pub entry: (usize, usize),
    /// Φ·A′ for the separating entry A′.
    pub target: MultiPoly,
    pub hom: FieldHom,
    pub field_size: BigUint,
    /// field_size^{M²}.
    pub gl_bound: BigUint,
    pub image_order: Option<ImageOrder>,
    pub verified: bool,
}

/// Why a witness record was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    BadWord,
    WordLengthMismatch,
    FieldSizeMismatch,
    GlBoundMismatch,
    ArityMismatch,
    DenominatorKilled,
    NotInvertible,
    EntryVanishes,
    WordTrivialInImage,
    Multiplicativity,
    ImageOrderMismatch,
    TargetMismatch,
    InvalidField,
    FingerprintMismatch,
}

impl RejectReason {
    pub fn code(&self) -> &'static str {
        match self {
            RejectReason::BadWord => "bad-word",
            RejectReason::WordLengthMismatch => "word-length-mismatch",
            RejectReason::FieldSizeMismatch => "field-size-mismatch",
            RejectReason::GlBoundMismatch => "gl-bound-mismatch",
            RejectReason::ArityMismatch => "arity-mismatch",
            RejectReason::DenominatorKilled => "denominator-killed",
            RejectReason::NotInvertible => "not-invertible",
            RejectReason::EntryVanishes => "entry-vanishes",
            RejectReason::WordTrivialInImage => "word-trivial-in-image",
            RejectReason::Multiplicativity => "multiplicativity",
            RejectReason::ImageOrderMismatch => "image-order-mismatch",
            RejectReason::TargetMismatch => "target-mismatch",
            RejectReason::InvalidField => "invalid-field",
            RejectReason::FingerprintMismatch => "fingerprint-mismatch",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Nonzero entry of minimal total degree, row-major tie-break.
fn choose_entry(a: &PolyMatrix) -> Option<(usize, usize)> {
    let n = a.size();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !a.get(i, j).is_zero())
        .min_by_key(|&(i, j)| (a.get(i, j).total_degree(), i, j))
}

/// Builds a witness that `word` is nontrivial.
pub fn separate(spec: &GroupSpec, word: &Word) -> Result<WitnessRecord, GroupError> {
    let gamma = spec.word_evaluate(word);
    separate_element(spec, word, &gamma)
}

/// [`separate`] for a word whose value γ is already known.
pub fn separate_element(spec: &GroupSpec, word: &Word, gamma: &FieldMatrix) -> Result<WitnessRecord, GroupError> {
    if word.is_empty() {
        return Err(GroupError::BadWord("empty word".into()));
    }
    if gamma.is_identity() {
        return Err(GroupError::IdentityWord);
    }
    let scaled = spec.scaled_difference(word);
    let entry = choose_entry(&scaled).ok_or_else(|| GroupError::Fault("nontrivial element with zero difference".into()))?;
    let target = spec.phi() * scaled.get(entry.0, entry.1);
    let hom = match spec.characteristic() {
        Characteristic::Prime(p) if spec.nvars() == 0 => {
            let field = Arc::new(ExtField::prime((**p).clone())?);
            FieldHom::new(field, Vec::new(), HomProvenance::Constant)
        }
        Characteristic::Prime(_) => lemma_b_witness(&target)?,
        Characteristic::Zero => lemma_a_witness(&target, spec.excluded_primes())?,
    };
    if hom.apply_poly(spec.phi()).is_zero() {
        return Err(GroupError::Fault("witness kills Φ".into()));
    }
    let letters = letter_images(spec, &hom).ok_or_else(|| GroupError::Fault("witness kills a denominator".into()))?;
    let image = word_image(&hom, &letters, word, spec.size());
    let field_size = hom.field_size();
    let gl_bound = num_traits::pow::pow(field_size.clone(), spec.size() * spec.size());
    Ok(WitnessRecord {
        word: word.clone(),
        word_length: word.len(),
        entry,
        target,
        hom,
        field_size,
        gl_bound,
        image_order: None,
        verified: !image.is_identity(),
    })
}

fn letter_images(spec: &GroupSpec, hom: &FieldHom) -> Option<Vec<FiniteMatrix>> {
    spec.letters().iter().map(|l| hom.apply_matrix(&l.matrix)).collect()
}

fn word_image(hom: &FieldHom, letters: &[FiniteMatrix], word: &Word, size: usize) -> FiniteMatrix {
    word.letters().iter().fold(FiniteMatrix::identity(hom.field(), size), |acc, &i| acc.mul(&letters[i]))
}

/// Independent re-check of a witness record.
pub fn verify_witness(spec: &GroupSpec, record: &WitnessRecord) -> Result<(), RejectReason> {
    let word = &record.word;
    if word.is_empty() || word.letters().iter().any(|&i| i >= spec.letters().len()) {
        return Err(RejectReason::BadWord);
    }
    if record.word_length != word.len() {
        return Err(RejectReason::WordLengthMismatch);
    }
    let hom = &record.hom;
    if hom.images().len() != spec.nvars() {
        return Err(RejectReason::ArityMismatch);
    }
    let expected_char = spec.characteristic().modulus().cloned();
    if expected_char.is_some_and(|p| &p != hom.field().characteristic()) {
        return Err(RejectReason::FieldSizeMismatch);
    }
    if record.field_size != hom.field_size() {
        return Err(RejectReason::FieldSizeMismatch);
    }
    let m = spec.size();
    if record.gl_bound != num_traits::pow::pow(record.field_size.clone(), m * m) {
        return Err(RejectReason::GlBoundMismatch);
    }
    // (a) the hom extends to the localized ring
    let phi_image = hom.apply_poly(spec.phi());
    if phi_image.is_zero() {
        return Err(RejectReason::DenominatorKilled);
    }
    let letters = letter_images(spec, hom).ok_or(RejectReason::DenominatorKilled)?;
    // (b) generator images are invertible, and letter/inverse pairs agree
    for (i, l) in letters.iter().enumerate() {
        if l.det().is_zero() {
            return Err(RejectReason::NotInvertible);
        }
        let inv = &letters[spec.letters()[i].inverse];
        if !l.mul(inv).is_identity() {
            return Err(RejectReason::NotInvertible);
        }
    }
    // the recorded entry survives
    let (ei, ej) = record.entry;
    if ei >= m || ej >= m {
        return Err(RejectReason::EntryVanishes);
    }
    let scaled = spec.scaled_difference(word);
    if hom.apply_poly(scaled.get(ei, ej)).is_zero() {
        return Err(RejectReason::EntryVanishes);
    }
    if record.target != spec.phi() * scaled.get(ei, ej) {
        return Err(RejectReason::TargetMismatch);
    }
    // (c) the word is nontrivial in the image
    let image = word_image(hom, &letters, word, m);
    if image.is_identity() {
        return Err(RejectReason::WordTrivialInImage);
    }
    // (d) ρ(u)ρ(v) against the polynomial route hom(Φ^{|w|}w)/hom(Φ)^{|w|}
    let phi_inv = phi_image.inv().map_err(|_| RejectReason::DenominatorKilled)?;
    let via_poly = |w: &Word| -> FiniteMatrix {
        let mut acc = PolyMatrix::scalar(&MultiPoly::one(spec.characteristic().clone(), spec.nvars()), m);
        for &i in w.letters() {
            acc = acc.mul(&spec.letters()[i].scaled);
        }
        hom.apply_poly_matrix(&acc).scale(&phi_inv.pow(&BigUint::from(w.len())))
    };
    let n = word.len();
    let mut cuts = vec![n / 2];
    if n > 2 {
        cuts.extend([1, n - 1]);
    }
    for cut in cuts {
        let u = Word(word.letters()[..cut].to_vec());
        let v = Word(word.letters()[cut..].to_vec());
        let lhs = word_image(hom, &letters, &u, m).mul(&word_image(hom, &letters, &v, m));
        if lhs != via_poly(word) || lhs != image {
            return Err(RejectReason::Multiplicativity);
        }
    }
    if !record.verified {
        return Err(RejectReason::WordTrivialInImage);
    }
    if let Some(io) = &record.image_order {
        if io.exact {
            match image_order(spec, hom, usize::MAX) {
                Some(actual) if actual.order == io.order => {}
                _ => return Err(RejectReason::ImageOrderMismatch),
            }
        }
    }
    Ok(())
}

/// Exact order of ρ(Γ) by closure over the images of the base generators.
/// Falls back to |field|^{M²} (flagged non-exact) when the field is too
/// large to tabulate or the closure exceeds `cap`. Returns `None` if the
/// hom does not extend to the generator matrices.
pub fn image_order(spec: &GroupSpec, hom: &FieldHom, cap: usize) -> Option<ImageOrder> {
    let m = spec.size();
    let bound = num_traits::pow::pow(hom.field_size(), m * m);
    let Some((ring, images)) = hom.to_small() else {
        letter_images(spec, hom)?;
        return Some(ImageOrder { order: bound, exact: false });
    };
    let gens = base_generator_images(spec, &ring, &images)?;
    Some(match group_order(&ring, &gens, cap) {
        Some(order) => ImageOrder { order: BigUint::from(order), exact: true },
        None => ImageOrder { order: bound, exact: false },
    })
}

/// Images of the base generators over a small ring.
pub fn base_generator_images(spec: &GroupSpec, ring: &SmallRing, images: &[u32]) -> Option<Vec<SmallMatrix>> {
    spec.letters().iter().step_by(2).map(|l| eval_matrix(ring, l.matrix.entries(), images)).collect()
}

/// (characteristic, field modulus, variable images).
type HomKey = (BigInt, Vec<BigInt>, Vec<Vec<BigInt>>);

/// Memoizes [`image_order`] across records that share a hom.
#[derive(Default)]
pub struct ImageOrderCache {
    cache: HashMap<HomKey, Option<ImageOrder>>,
}

impl ImageOrderCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, spec: &GroupSpec, hom: &FieldHom, cap: usize) -> Option<ImageOrder> {
        let key = (
            hom.field().characteristic().clone(),
            hom.field().modulus().coeffs().to_vec(),
            hom.images().iter().map(ExtFieldElem::coeffs).collect::<Vec<_>>(),
        );
        self.cache.entry(key).or_insert_with(|| image_order(spec, hom, cap)).clone()
    }
}

/// The integer bound |i| ≤ (r+1)·ℓ^r·A for a Lemma-A witness.
pub fn lemma_a_value_bound(g_degree: u64, point: u64, max_coeff: &BigInt) -> BigInt {
    BigInt::from(g_degree + 1) * num_traits::pow::pow(BigInt::from(point), g_degree as usize) * max_coeff
}

/// An explicit upper bound on the Lemma-A target prime, from the size of
/// i: the primes up to the returned value have product exceeding
/// |i|·∏excluded, so one of them avoids i and the exclusions.
pub fn lemma_a_prime_bound(value: &BigInt, excluded: &std::collections::BTreeSet<BigInt>) -> u64 {
    let budget: BigInt = value.abs() * excluded.iter().fold(BigInt::one(), |acc, p| acc * p);
    let mut product = BigInt::one();
    for p in crate::arith::primes() {
        product *= p;
        if product > budget {
            return p;
        }
    }
    unreachable!("primes are unbounded")
}
