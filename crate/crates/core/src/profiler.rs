//! Divisibility profiles.
//!
//! D_Γ is scoped here to congruence-reduction quotients: the maps from the
//! coefficient ring onto small finite rings (Z/m in characteristic 0,
//! F_{p^k} in characteristic p). Within that family [`d_reduction`] is an
//! exact minimum; over all finite quotients it is only an upper bound.
//! For the integers themselves the value is exact ([`farb_z`]).
//!
//! Also here: the subgroup-growth catalog for Z and Z², the pigeonhole
//! audit w(n) ≤ F(n)^{s(F(n))}, and the sampled threshold trend
//! (ln F(n))² / ln ln n.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::arith::{divisor_sum, dz_u64};
use crate::error::{GroupError, ProfileError};
use crate::field::{ExtField, SMALL_FIELD_LIMIT};
use crate::finite::{group_order, SmallMatrix, SmallRing};
use crate::group::{GroupSpec, Word};
use crate::ring::Characteristic;
use crate::unipoly::{irreducibles, UniPoly};
use crate::witness::{separate_element, ImageOrderCache, WitnessRecord};

/// Environment variable holding default budget overrides ("key=value,...").
pub const BUDGET_ENV: &str = "RESFIN_BUDGET";

/// Resource limits for enumeration-heavy operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Most ball elements enumerated.
    pub max_ball: usize,
    /// Most elements in one group closure.
    pub max_closure: usize,
    /// Largest modulus m of Z/m searched in characteristic 0.
    pub max_modulus: u32,
    /// Largest extension degree searched in characteristic p.
    pub max_degree: u32,
    /// Most homomorphisms in the reduction family.
    pub max_homs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_ball: 250_000, max_closure: 2_000_000, max_modulus: 31, max_degree: 3, max_homs: 100_000 }
    }
}

impl Budget {
    /// Applies overrides of the form "ball=1000,modulus=13".
    pub fn with_overrides(mut self, text: &str) -> Result<Self, ProfileError> {
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| ProfileError::Precondition(format!("budget item {item:?} is not key=value")))?;
            let bad = || ProfileError::Precondition(format!("budget value {value:?} for {key:?} is not a count"));
            let n: u64 = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "ball" => self.max_ball = n as usize,
                "closure" => self.max_closure = n as usize,
                "modulus" => self.max_modulus = u32::try_from(n).map_err(|_| bad())?,
                "degree" => self.max_degree = u32::try_from(n).map_err(|_| bad())?,
                "homs" => self.max_homs = n as usize,
                other => return Err(ProfileError::Precondition(format!("unknown budget key {other:?}"))),
            }
        }
        Ok(self)
    }

    /// Defaults, then the environment overrides, if any.
    pub fn from_env() -> Result<Self, ProfileError> {
        match std::env::var(BUDGET_ENV) {
            Ok(text) => Budget::default().with_overrides(&text),
            Err(_) => Ok(Budget::default()),
        }
    }
}

/// F_Z(n) = max_{1≤i≤n} D_Z(i) for the integers with generator 1.
pub fn farb_z(n: u64) -> u64 {
    assert!(n >= 1, "farb_z needs n >= 1");
    (1..=n).map(dz_u64).max().unwrap()
}

/// farb_z(1), …, farb_z(n) as a running maximum.
pub fn farb_z_table(n: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(n as usize);
    let mut best = 0;
    for i in 1..=n {
        best = best.max(dz_u64(i));
        out.push(best);
    }
    out
}

/// One homomorphism of the reduction family, with its image precomputed.
#[derive(Clone, Debug)]
struct Candidate {
    ring: SmallRing,
    ring_label: String,
    images: Vec<u32>,
    letters: Vec<SmallMatrix>,
    order: u64,
}

/// The minimal image order over the searched family in which a word
/// survives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub min_order: u64,
    /// True when the whole family within budget was searched and every
    /// image order in it was computed exactly.
    pub exhaustive: bool,
    /// The ring of the minimizing hom, e.g. "Z/4" or "F_9".
    pub ring: String,
    /// Images of the variables, rendered.
    pub images: Vec<String>,
}

/// The congruence-reduction family of a group, sorted by image order.
pub struct ReductionSearch {
    candidates: Vec<Candidate>,
    complete: bool,
    size: usize,
}

fn render_code(ring: &SmallRing, code: u32, var: &str) -> String {
    match ring {
        SmallRing::Zmod(_) => code.to_string(),
        SmallRing::Field(_) => {
            let p = ring.characteristic();
            let mut digits = Vec::new();
            let mut c = code;
            while c > 0 {
                digits.push(BigInt::from(c % p));
                c /= p;
            }
            let poly = UniPoly::new(Characteristic::prime(p).expect("prime characteristic"), digits);
            let text = poly.display_with(var).to_string();
            text
        }
    }
}

impl ReductionSearch {
    /// Enumerates the family: in characteristic 0 every Z/m with
    /// 2 ≤ m ≤ `max_modulus`; in characteristic p one field F_{p^k} for
    /// each k ≤ `max_degree`. Every tuple of variable images is tried, and a
    /// hom is kept when Φ maps to a unit.
    pub fn new(spec: &GroupSpec, budget: &Budget) -> Result<Self, ProfileError> {
        let mut rings: Vec<(SmallRing, String)> = Vec::new();
        let mut complete = true;
        match spec.characteristic() {
            Characteristic::Zero => {
                for m in 2..=budget.max_modulus {
                    rings.push((SmallRing::Zmod(m), format!("Z/{m}")));
                }
            }
            Characteristic::Prime(p) => {
                for k in 1..=budget.max_degree {
                    let order = (**p).to_u64().and_then(|p| p.checked_pow(k));
                    if order.is_none_or(|q| q > SMALL_FIELD_LIMIT) {
                        complete = false;
                        break;
                    }
                    let h = irreducibles(p, k as usize)?.next().expect("irreducibles exist in every degree");
                    let field = ExtField::new(h)?;
                    let ring = SmallRing::from_field(&field).expect("field within table limit");
                    rings.push((ring, format!("F_{}", field.order())));
                }
            }
        }
        let s = spec.nvars();
        let mut candidates = Vec::new();
        let mut size = 0usize;
        'rings: for (ring, label) in rings {
            let q = ring.order();
            let mut images = vec![0u32; s];
            loop {
                if size >= budget.max_homs {
                    complete = false;
                    break 'rings;
                }
                size += 1;
                if let Some(c) = Self::candidate(spec, &ring, &label, &images, budget) {
                    match c {
                        Some(c) => candidates.push(c),
                        None => complete = false,
                    }
                }
                // odometer over (R)^s
                let mut pos = 0;
                loop {
                    if pos == s {
                        continue 'rings;
                    }
                    images[pos] += 1;
                    if images[pos] as u64 == q {
                        images[pos] = 0;
                        pos += 1;
                    } else {
                        break;
                    }
                }
            }
        }
        candidates.sort_by_key(|c| c.order);
        Ok(ReductionSearch { candidates, complete, size })
    }

    /// `None` if the hom does not extend; `Some(None)` if it extends but its
    /// image is too large to close.
    fn candidate(
        spec: &GroupSpec,
        ring: &SmallRing,
        label: &str,
        images: &[u32],
        budget: &Budget,
    ) -> Option<Option<Candidate>> {
        ring.inv(ring.eval_poly(spec.phi(), images))?;
        let letters = spec
            .letters()
            .iter()
            .map(|l| crate::finite::eval_matrix(ring, l.matrix.entries(), images))
            .collect::<Option<Vec<_>>>()?;
        let gens: Vec<SmallMatrix> = letters.iter().step_by(2).cloned().collect();
        let Some(order) = group_order(ring, &gens, budget.max_closure) else {
            return Some(None);
        };
        Some(Some(Candidate {
            ring: ring.clone(),
            ring_label: label.to_string(),
            images: images.to_vec(),
            letters,
            order,
        }))
    }

    /// Number of homomorphisms enumerated (extending or not).
    pub fn family_size(&self) -> usize {
        self.size
    }

    /// Number of homomorphisms that extend and whose image order is known.
    pub fn usable(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Minimal image order among searched homs in which `word` survives.
    pub fn d_reduction(&self, spec: &GroupSpec, word: &Word) -> Result<Reduction, ProfileError> {
        check_nontrivial(spec, word)?;
        self.d_reduction_nontrivial(spec, word)
    }

    fn d_reduction_nontrivial(&self, spec: &GroupSpec, word: &Word) -> Result<Reduction, ProfileError> {
        let size = spec.size();
        for c in &self.candidates {
            let image = word
                .letters()
                .iter()
                .fold(SmallMatrix::identity(size), |acc, &i| acc.mul(&c.letters[i], &c.ring));
            if !image.is_identity() {
                return Ok(Reduction {
                    min_order: c.order,
                    exhaustive: self.complete,
                    ring: c.ring_label.clone(),
                    images: c
                        .images
                        .iter()
                        .zip(spec.variables())
                        .map(|(&v, name)| format!("{name}={}", render_code(&c.ring, v, "x")))
                        .collect(),
                });
            }
        }
        Err(ProfileError::NotFoundWithinBudget { searched: self.size })
    }
}

fn check_nontrivial(spec: &GroupSpec, word: &Word) -> Result<(), ProfileError> {
    if word.is_empty() {
        return Err(GroupError::BadWord("empty word".into()).into());
    }
    if spec.word_evaluate(word).is_identity() {
        return Err(GroupError::IdentityWord.into());
    }
    Ok(())
}

/// [`ReductionSearch::d_reduction`] with a freshly built family.
pub fn d_reduction(spec: &GroupSpec, word: &Word, budget: &Budget) -> Result<Reduction, ProfileError> {
    check_nontrivial(spec, word)?;
    ReductionSearch::new(spec, budget)?.d_reduction_nontrivial(spec, word)
}

/// Everything computed for one nontrivial ball element.
#[derive(Clone, Debug)]
pub struct ProfiledElement {
    pub word: Word,
    pub witness: Result<WitnessRecord, String>,
    pub d_reduction: Option<Result<Reduction, String>>,
}

/// Per-radius maxima over B•(n), the nontrivial elements of length ≤ n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub radius: usize,
    pub ball_size: usize,
    pub max_gl_bound: BigUint,
    pub max_image_order: BigUint,
    pub max_d_reduction: Option<u64>,
    pub exhaustive: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct FarbProfile {
    pub rows: Vec<ProfileRow>,
    pub elements: Vec<ProfiledElement>,
}

impl FarbProfile {
    /// Elements whose witness or reduction failed.
    pub fn failures(&self) -> impl Iterator<Item = &ProfiledElement> {
        self.elements
            .iter()
            .filter(|e| e.witness.is_err() || matches!(e.d_reduction, Some(Err(_))))
    }
}

/// Profiles every nontrivial element of word length ≤ `radius`: a witness
/// (its |GL_M(F_q)| bound), the exact order of its image when closable, and
/// for lengths ≤ `d_radius` the reduction minimum.
pub fn farb_profile(
    spec: &GroupSpec,
    radius: usize,
    budget: &Budget,
    d_radius: usize,
) -> Result<FarbProfile, ProfileError> {
    let ball = spec.ball_enumerate(radius, budget.max_ball)?;
    if ball.is_empty() {
        return Ok(FarbProfile { rows: Vec::new(), elements: Vec::new() });
    }
    let search = if d_radius > 0 { Some(ReductionSearch::new(spec, budget)?) } else { None };
    let mut cache = ImageOrderCache::new();
    let mut elements = Vec::with_capacity(ball.len());
    for e in &ball {
        let witness = separate_element(spec, &e.word, &e.element)
            .map(|mut rec| {
                rec.image_order = cache.get(spec, &rec.hom, budget.max_closure);
                rec
            })
            .map_err(|err: GroupError| err.to_string());
        let d_reduction = match &search {
            Some(s) if e.word.len() <= d_radius => {
                Some(s.d_reduction_nontrivial(spec, &e.word).map_err(|err| err.to_string()))
            }
            _ => None,
        };
        elements.push(ProfiledElement { word: e.word.clone(), witness, d_reduction });
    }
    let mut rows = Vec::with_capacity(radius);
    let mut count = 0;
    let mut max_gl = BigUint::zero();
    let mut max_order = BigUint::zero();
    let mut max_d: Option<u64> = None;
    let mut all_exhaustive = true;
    let mut idx = 0;
    for r in 1..=radius {
        while idx < elements.len() && elements[idx].word.len() <= r {
            let el = &elements[idx];
            count += 1;
            if let Ok(w) = &el.witness {
                max_gl = max_gl.max(w.gl_bound.clone());
                if let Some(io) = &w.image_order {
                    max_order = max_order.max(io.order.clone());
                }
            }
            match &el.d_reduction {
                Some(Ok(red)) => {
                    max_d = Some(max_d.map_or(red.min_order, |m| m.max(red.min_order)));
                    all_exhaustive &= red.exhaustive;
                }
                Some(Err(_)) => all_exhaustive = false,
                None => {}
            }
            idx += 1;
        }
        let covered = r <= d_radius;
        rows.push(ProfileRow {
            radius: r,
            ball_size: count,
            max_gl_bound: max_gl.clone(),
            max_image_order: max_order.clone(),
            max_d_reduction: if covered { max_d } else { None },
            exhaustive: if covered { Some(all_exhaustive) } else { None },
        });
    }
    Ok(FarbProfile { rows, elements })
}

/// Groups with elementary subgroup-growth formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CatalogGroup {
    Z,
    Z2,
}

impl FromStr for CatalogGroup {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Z" => Ok(CatalogGroup::Z),
            "Z2" | "Z^2" | "Z²" => Ok(CatalogGroup::Z2),
            other => Err(ProfileError::UnknownGroup(other.to_string())),
        }
    }
}

impl fmt::Display for CatalogGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CatalogGroup::Z => "Z",
            CatalogGroup::Z2 => "Z2",
        })
    }
}

/// s(n): the number of (normal) subgroups of index ≤ n. For Z one per
/// index; for Z² there are σ(m) sublattices of index m.
pub fn subgroup_growth_catalog(group: CatalogGroup, n: u64) -> u64 {
    match group {
        CatalogGroup::Z => n,
        CatalogGroup::Z2 => (1..=n).map(divisor_sum).sum(),
    }
}

/// |B(n)| for the standard generators.
pub fn catalog_word_growth(group: CatalogGroup, n: u64) -> u64 {
    match group {
        CatalogGroup::Z => 2 * n + 1,
        CatalogGroup::Z2 => 2 * n * n + 2 * n + 1,
    }
}

/// F(n) for the standard generators. For Z² a vector v survives in a
/// cyclic quotient Z/m exactly when m does not divide gcd(v), and gcds
/// of ball elements range over 1..n, so F_{Z²} = F_Z.
pub fn catalog_farb(_group: CatalogGroup, n: u64) -> u64 {
    farb_z(n)
}

/// Word growth, subgroup growth and divisibility profile side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTable {
    pub group: CatalogGroup,
    /// Entry k is the value at n = k + 1.
    pub word_growth: Vec<u64>,
    pub subgroup_growth: Vec<u64>,
    pub farb: Vec<u64>,
    pub audit_pass: Vec<bool>,
}

pub fn growth_table(group: CatalogGroup, n_max: u64) -> GrowthTable {
    let farb = farb_z_table(n_max);
    let word_growth: Vec<u64> = (1..=n_max).map(|n| catalog_word_growth(group, n)).collect();
    let subgroup_growth = (1..=n_max).map(|n| subgroup_growth_catalog(group, n)).collect();
    let audit_pass = word_growth
        .iter()
        .zip(&farb)
        .map(|(&w, &f)| BigUint::from(w) <= pigeonhole_bound(group, f))
        .collect();
    GrowthTable { group, word_growth, subgroup_growth, farb, audit_pass }
}

fn pigeonhole_bound(group: CatalogGroup, f: u64) -> BigUint {
    let s = subgroup_growth_catalog(group, f);
    num_traits::pow::pow(BigUint::from(f), s as usize)
}

/// One line of the pigeonhole audit.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditRecord {
    pub n: u64,
    pub w: u64,
    pub f: u64,
    pub s_of_f: u64,
    pub bound: BigUint,
    /// ln(bound) − ln(w).
    pub margin: f64,
    pub pass: bool,
}

impl fmt::Display for AuditRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} w={} F={} s(F)={} bound={} margin={:.6} {}",
            self.n,
            self.w,
            self.f,
            self.s_of_f,
            self.bound,
            self.margin,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub group: CatalogGroup,
    pub records: Vec<AuditRecord>,
}

impl AuditReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn min_margin(&self) -> f64 {
        self.records.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "audit group={} check=w(n)<=F(n)^s(F(n)) scope=congruence-quotients", self.group)?;
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        write!(
            f,
            "summary records={} all_pass={} min_margin={:.6}",
            self.records.len(),
            self.all_pass(),
            self.min_margin()
        )
    }
}

pub fn ln_big(x: &BigUint) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() && v > 0.0 => v.ln(),
        _ => {
            // ln x = ln(x / 2^k) + k ln 2 with x / 2^k in f64 range
            let k = x.bits().saturating_sub(64);
            let top = (x >> k).to_f64().unwrap_or(f64::MAX);
            top.ln() + k as f64 * std::f64::consts::LN_2
        }
    }
}

/// Checks w(n) ≤ F(n)^{s(F(n))} for 1 ≤ n ≤ n_max with exact w, F and s.
pub fn inequality_audit(group: CatalogGroup, n_max: u64) -> Result<AuditReport, ProfileError> {
    if n_max == 0 {
        return Err(ProfileError::Precondition("audit needs n_max >= 1".into()));
    }
    let farb = farb_z_table(n_max);
    let records = (1..=n_max)
        .zip(farb)
        .map(|(n, f)| {
            let w = catalog_word_growth(group, n);
            let s_of_f = subgroup_growth_catalog(group, f);
            let bound = pigeonhole_bound(group, f);
            let margin = ln_big(&bound) - (w as f64).ln();
            let pass = BigUint::from(w) <= bound;
            AuditRecord { n, w, f, s_of_f, bound, margin, pass }
        })
        .collect();
    Ok(AuditReport { group, records })
}

/// Floor for the sampled ratio (ln F(n))² / ln ln n on infinite groups.
pub const THRESHOLD_FLOOR: f64 = 0.4;

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdSample {
    pub n: u64,
    pub f: u64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdReport {
    pub samples: Vec<ThresholdSample>,
    pub min_ratio: f64,
    /// `Some(min_ratio >= THRESHOLD_FLOOR)` for infinite groups; `None`
    /// (report only) otherwise.
    pub verdict: Option<bool>,
}

impl fmt::Display for ThresholdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "threshold statistic=(ln F)^2/ln ln n floor={THRESHOLD_FLOOR}")?;
        for s in &self.samples {
            writeln!(f, "n={} F={} ratio={:.6}", s.n, s.f, s.ratio)?;
        }
        let verdict = match self.verdict {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "report-only",
        };
        write!(f, "summary samples={} min_ratio={:.6} verdict={verdict}", self.samples.len(), self.min_ratio)
    }
}

/// Trend of (ln F(n))² / ln ln n over samples (n, F(n)); samples with
/// n < 16 are ignored. The floor is asserted only when `infinite`.
pub fn threshold_check(samples: &[(u64, u64)], infinite: bool) -> Result<ThresholdReport, ProfileError> {
    let samples: Vec<ThresholdSample> = samples
        .iter()
        .filter(|&&(n, _)| n >= 16)
        .map(|&(n, f)| {
            let lf = (f as f64).ln();
            ThresholdSample { n, f, ratio: lf * lf / (n as f64).ln().ln() }
        })
        .collect();
    if samples.is_empty() {
        return Err(ProfileError::InsufficientRange);
    }
    let min_ratio = samples.iter().map(|s| s.ratio).fold(f64::INFINITY, f64::min);
    let verdict = infinite.then_some(min_ratio >= THRESHOLD_FLOOR);
    Ok(ThresholdReport { samples, min_ratio, verdict })
}
