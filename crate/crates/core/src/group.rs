//! Finitely generated matrix groups over Q(T) or F_p(T): generators closed
//! under inverses, the denominator-clearing polynomial Φ, words, exact
//! evaluation, and ball enumeration in the word metric.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::arith::prime_divisors;
use crate::error::GroupError;
use crate::matrix::{FieldMatrix, PolyMatrix};
use crate::multipoly::{div_exact, lcm, MultiPoly};
use crate::ratfunc::RatFunc;
use crate::ring::Characteristic;

/// One monoid generator: a base generator or the inverse of one.
#[derive(Clone, Debug)]
pub struct Letter {
    pub label: String,
    pub matrix: FieldMatrix,
    /// Φ·matrix, which has polynomial entries.
    pub scaled: PolyMatrix,
    /// Index of the inverse letter.
    pub inverse: usize,
}

/// The pair (Γ, X): a matrix group with its labeled generating set.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    characteristic: Characteristic,
    variables: Vec<String>,
    size: usize,
    letters: Vec<Letter>,
    phi: MultiPoly,
    excluded_primes: BTreeSet<BigInt>,
}

/// A word in the letters of a [`GroupSpec`], as letter indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    /// Space-separated labels.
    pub fn render(&self, spec: &GroupSpec) -> String {
        self.0.iter().map(|&i| spec.letters[i].label.as_str()).collect::<Vec<_>>().join(" ")
    }
}

/// An element of a ball: canonical matrix and a shortlex-least word.
#[derive(Clone, Debug)]
pub struct BallElement {
    pub element: FieldMatrix,
    pub word: Word,
}

fn valid_label(label: &str) -> bool {
    let mut chars = label.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GroupSpec {
    /// Builds the group from labeled generators, adjoining inverses and
    /// computing Φ.
    pub fn new(
        characteristic: Characteristic,
        variables: Vec<String>,
        generators: Vec<(String, FieldMatrix)>,
    ) -> Result<Self, GroupError> {
        if generators.is_empty() {
            return Err(GroupError::NoGenerators);
        }
        let size = generators[0].1.size();
        let nvars = variables.len();
        let mut seen = HashSet::new();
        let mut matrices = Vec::new();
        let mut labels = Vec::new();
        for (label, m) in generators {
            if !valid_label(&label) {
                return Err(GroupError::BadLabel(label));
            }
            if !seen.insert(label.clone()) {
                return Err(GroupError::DuplicateLabel(label));
            }
            let consistent = m.entries().iter().all(|e| e.characteristic() == &characteristic && e.nvars() == nvars);
            if m.size() != size || size == 0 || !consistent {
                return Err(GroupError::Shape { label, size });
            }
            let inv = m.inverse().ok_or_else(|| GroupError::Singular(label.clone()))?;
            labels.push(label.clone());
            labels.push(format!("{label}^-1"));
            matrices.push(m);
            matrices.push(inv);
        }
        let (phi, excluded_primes) = compute_phi(&characteristic, nvars, &matrices);
        let mut letters = Vec::with_capacity(matrices.len());
        for (i, (label, matrix)) in labels.into_iter().zip(matrices).enumerate() {
            let scaled = scale_matrix(&phi, &matrix)
                .ok_or_else(|| GroupError::Fault(format!("Φ does not clear the denominators of {label}")))?;
            letters.push(Letter { label, matrix, scaled, inverse: i ^ 1 });
        }
        Ok(GroupSpec { characteristic, variables, size, letters, phi, excluded_primes })
    }

    pub fn characteristic(&self) -> &Characteristic {
        &self.characteristic
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    /// Matrix size M.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Number of base generators (letters come in generator/inverse pairs).
    pub fn num_generators(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn phi(&self) -> &MultiPoly {
        &self.phi
    }

    pub fn excluded_primes(&self) -> &BTreeSet<BigInt> {
        &self.excluded_primes
    }

    pub fn identity(&self) -> FieldMatrix {
        FieldMatrix::identity(&self.characteristic, self.nvars(), self.size)
    }

    /// Index of the letter with this label ("a" or "a^-1").
    pub fn letter_index(&self, label: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.label == label)
    }

    /// Parses whitespace-separated labels with optional `^k` / `^-k`
    /// suffixes, expanding powers and inverses.
    pub fn parse_word(&self, text: &str) -> Result<Word, GroupError> {
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            let (label, power) = match token.split_once('^') {
                None => (token, 1i64),
                Some((l, p)) => {
                    let k: i64 = p.parse().map_err(|_| GroupError::BadWord(format!("bad exponent in {token:?}")))?;
                    (l, k)
                }
            };
            let base = self
                .letters
                .iter()
                .position(|l| l.label == label)
                .ok_or_else(|| GroupError::UnknownLabel(label.to_string()))?;
            let letter = if power < 0 { self.letters[base].inverse } else { base };
            for _ in 0..power.unsigned_abs() {
                out.push(letter);
            }
        }
        if out.is_empty() {
            return Err(GroupError::BadWord("empty word".into()));
        }
        Ok(Word(out))
    }

    /// Exact product of the letter matrices; the empty word gives I.
    pub fn word_evaluate(&self, word: &Word) -> FieldMatrix {
        let mut acc: Option<FieldMatrix> = None;
        for &i in word.letters() {
            let m = &self.letters[i].matrix;
            acc = Some(match acc {
                None => m.clone(),
                Some(a) => a.mul(m),
            });
        }
        acc.unwrap_or_else(|| self.identity())
    }

    /// Φ^{|w|}·(γ − I), computed as the product of the scaled letters minus
    /// Φ^{|w|}·I, so every entry is a polynomial.
    pub fn scaled_difference(&self, word: &Word) -> PolyMatrix {
        let phi_n = self.phi.pow(word.len() as u32);
        let mut acc = PolyMatrix::scalar(&MultiPoly::one(self.characteristic.clone(), self.nvars()), self.size);
        for &i in word.letters() {
            acc = acc.mul(&self.letters[i].scaled);
        }
        acc.sub(&PolyMatrix::scalar(&phi_n, self.size))
    }

    /// Growth constants (C₁, α) for scaled differences: every word w has
    /// entry degrees ≤ C₁·|w| and, in characteristic 0, coefficients below
    /// α^{|w|}.
    ///
    /// C₁ is the largest numerator degree among the letters plus deg Φ,
    /// which bounds the degree of each scaled letter Φ·g. For α, let L be
    /// the largest L1 norm of an entry of a scaled letter or of Φ. A
    /// product of n scaled letters has entry norms ≤ M^{n−1}L^n, and Φ^n
    /// has norm ≤ L^n, so α = 1 + (M+1)·L strictly dominates both terms.
    pub fn growth_constants(&self) -> (i64, BigInt) {
        let max_num_degree = self
            .letters
            .iter()
            .flat_map(|l| l.matrix.entries())
            .map(|e| e.num().total_degree())
            .max()
            .unwrap_or(0)
            .max(0);
        let c1 = max_num_degree + self.phi.total_degree();
        let l = self
            .letters
            .iter()
            .flat_map(|l| l.scaled.entries())
            .map(MultiPoly::l1_norm)
            .chain(std::iter::once(self.phi.l1_norm()))
            .max()
            .unwrap_or_default();
        let alpha = BigInt::one() + BigInt::from(self.size + 1) * l;
        (c1, alpha)
    }

    /// (largest absolute coefficient, largest entry degree) of the scaled
    /// difference; (0, -1) for a trivial element.
    pub fn growth_degree_bounds(&self, word: &Word) -> (BigInt, i64) {
        let d = self.scaled_difference(word);
        (d.max_abs_coefficient(), d.max_entry_degree())
    }

    /// All nontrivial elements of word length ≤ `radius`, each with its
    /// shortlex-least word, in order of (length, word).
    pub fn ball_enumerate(&self, radius: usize, max_elements: usize) -> Result<Vec<BallElement>, GroupError> {
        let identity = self.identity();
        let mut seen: HashSet<FieldMatrix> = HashSet::new();
        seen.insert(identity.clone());
        let mut out: Vec<BallElement> = Vec::new();
        let mut frontier: Vec<(FieldMatrix, Word)> = vec![(identity, Word(Vec::new()))];
        for _ in 0..radius {
            let mut next = Vec::new();
            for (m, w) in &frontier {
                for (i, letter) in self.letters.iter().enumerate() {
                    let prod = if w.is_empty() { letter.matrix.clone() } else { m.mul(&letter.matrix) };
                    if !prod.is_canonical() {
                        return Err(GroupError::CanonicalizationIncomplete);
                    }
                    if seen.contains(&prod) {
                        continue;
                    }
                    if out.len() >= max_elements {
                        return Err(GroupError::BallBudget { reached: out.len() });
                    }
                    seen.insert(prod.clone());
                    let mut word = w.0.clone();
                    word.push(i);
                    let word = Word(word);
                    out.push(BallElement { element: prod.clone(), word: word.clone() });
                    next.push((prod, word));
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(out)
    }

    /// |B(r)| including the identity, for r = 0..=radius.
    pub fn word_growth(&self, radius: usize, max_elements: usize) -> Result<Vec<usize>, GroupError> {
        let ball = self.ball_enumerate(radius, max_elements)?;
        let mut counts = vec![1usize; radius + 1];
        for e in &ball {
            for c in counts.iter_mut().skip(e.word.len()) {
                *c += 1;
            }
        }
        Ok(counts)
    }

    /// Canonical multi-line rendering used for fingerprints and logs.
    pub fn canonical_text(&self) -> String {
        let mut s = format!("characteristic {}\nvariables {}\n", self.characteristic, self.variables.join(" "));
        for l in self.letters.iter().step_by(2) {
            s.push_str(&format!("generator {} {}\n", l.label, l.matrix.display_with(&self.variables)));
        }
        s
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_text())
    }
}

/// Φ and the excluded primes for a list of matrices: the lcm of the
/// primitive parts of all denominators times the lcm of their integer
/// contents (characteristic 0). Excluded primes are the prime divisors of
/// that integer factor.
pub fn compute_phi(
    characteristic: &Characteristic,
    nvars: usize,
    matrices: &[FieldMatrix],
) -> (MultiPoly, BTreeSet<BigInt>) {
    let mut poly_part = MultiPoly::one(characteristic.clone(), nvars);
    let mut int_part = BigInt::one();
    for m in matrices {
        for e in m.entries() {
            let den = e.den();
            if den.is_one() {
                continue;
            }
            let content = den.integer_content();
            let primitive = if content.is_one() {
                den.clone()
            } else {
                div_exact(den, &MultiPoly::constant(characteristic.clone(), nvars, content.clone()))
                    .expect("content divides")
            };
            int_part = int_part.lcm(&content);
            if !primitive.is_constant() {
                poly_part = lcm(&poly_part, &primitive);
            }
        }
    }
    let excluded = if characteristic.is_zero_char() { prime_divisors(&int_part) } else { BTreeSet::new() };
    (poly_part.scale(&int_part), excluded)
}

fn scale_matrix(phi: &MultiPoly, m: &FieldMatrix) -> Option<PolyMatrix> {
    let phi_r = RatFunc::from_poly(phi.clone());
    let entries = m.entries().iter().map(|e| e.mul(&phi_r).as_polynomial()).collect::<Option<Vec<_>>>()?;
    Some(PolyMatrix::new(m.size(), entries))
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

    fn sanov() -> GroupSpec {
        let a = FieldMatrix::from_rows(vec![vec![k(1), r(t())], vec![k(0), k(1)]]).unwrap();
        let b = FieldMatrix::from_rows(vec![vec![k(1), k(0)], vec![r(t()), k(1)]]).unwrap();
        GroupSpec::new(Characteristic::Zero, vec!["t".into()], vec![("a".into(), a), ("b".into(), b)]).unwrap()
    }

    fn diagonal() -> GroupSpec {
        let tinv = RatFunc::new(MultiPoly::one(Characteristic::Zero, 1), t()).unwrap();
        let a = FieldMatrix::from_rows(vec![vec![r(t()), k(0)], vec![k(0), tinv]]).unwrap();
        GroupSpec::new(Characteristic::Zero, vec!["t".into()], vec![("a".into(), a)]).unwrap()
    }

    #[test]
    fn polynomial_generators_have_trivial_phi() {
        let g = sanov();
        assert!(g.phi().is_one());
        assert!(g.excluded_primes().is_empty());
    }

    #[test]
    fn phi_clears_single_denominator() {
        let g = diagonal();
        assert_eq!(g.phi(), &t());
        assert!(g.excluded_primes().is_empty());
    }

    #[test]
    fn integer_denominators_are_excluded() {
        let half_t = RatFunc::new(t(), MultiPoly::constant(Characteristic::Zero, 1, 2)).unwrap();
        let a = FieldMatrix::from_rows(vec![vec![k(1), half_t], vec![k(0), k(1)]]).unwrap();
        let g = GroupSpec::new(Characteristic::Zero, vec!["t".into()], vec![("a".into(), a)]).unwrap();
        assert_eq!(g.phi(), &MultiPoly::constant(Characteristic::Zero, 1, 2));
        assert_eq!(g.excluded_primes(), &BTreeSet::from([BigInt::from(2)]));
    }

    #[test]
    fn words_and_evaluation() {
        let g = sanov();
        let w = g.parse_word("a a^-1").unwrap();
        assert!(g.word_evaluate(&w).is_identity());
        let ab = g.word_evaluate(&g.parse_word("a b").unwrap());
        let t2 = &(&t() * &t()) + &MultiPoly::one(Characteristic::Zero, 1);
        assert_eq!(ab, FieldMatrix::from_rows(vec![vec![r(t2), r(t())], vec![r(t()), k(1)]]).unwrap());
        assert_eq!(g.parse_word("a^-2 b^3").unwrap().len(), 5);
        assert!(matches!(g.parse_word("c"), Err(GroupError::UnknownLabel(_))));
        assert!(matches!(g.parse_word("   "), Err(GroupError::BadWord(_))));
    }

    #[test]
    fn scaled_difference_examples() {
        let g = diagonal();
        let d = g.scaled_difference(&g.parse_word("a").unwrap());
        let one = MultiPoly::one(Characteristic::Zero, 1);
        assert_eq!(d.get(0, 0), &(&(&t() * &t()) - &t()));
        assert_eq!(d.get(1, 1), &(&one - &t()));
        assert!(d.get(0, 1).is_zero());
        let s = sanov();
        let id = s.scaled_difference(&s.parse_word("b b^-1").unwrap());
        assert!(id.is_zero());
        assert_eq!(s.growth_degree_bounds(&s.parse_word("b b^-1").unwrap()), (BigInt::from(0), -1));
    }

    #[test]
    fn free_group_ball_sizes() {
        let g = sanov();
        assert_eq!(g.ball_enumerate(1, 1000).unwrap().len(), 4);
        assert_eq!(g.ball_enumerate(2, 1000).unwrap().len(), 16);
        assert_eq!(g.word_growth(2, 1000).unwrap(), vec![1, 5, 17]);
        assert!(matches!(g.ball_enumerate(3, 10), Err(GroupError::BallBudget { reached: 10 })));
    }

    #[test]
    fn singular_generator_is_rejected() {
        let m = FieldMatrix::from_rows(vec![vec![k(1), k(2)], vec![k(2), k(4)]]).unwrap();
        let err = GroupSpec::new(Characteristic::Zero, vec!["t".into()], vec![("a".into(), m)]).unwrap_err();
        assert_eq!(err, GroupError::Singular("a".into()));
    }
}
