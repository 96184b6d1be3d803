//! The Hecke algebra of Λ-double cosets: convolution with multiplicities,
//! Hall coefficients and the linearizations used by the amplifier.
//!
//! Products are computed from right coset representatives `α_i` of `Λg₁Λ`
//! and `β_j` of `Λg₂Λ`. The structure constant `m(g₁,g₂;h)` has three
//! equivalent counting expressions:
//!
//! 1. pairs `(i,j)` with `α_iβ_j ∈ Λh`;
//! 2. pairs with `α_iβ_j ∈ ΛhΛ`, divided by `deg h`;
//! 3. indices `i` with `α_i g₂ ∈ ΛhΛ`, times `deg g₂ / deg h`.
//!
//! The production path uses the third one. The first two run in
//! [`HeckeAlgebra::convolve_audited`] and in [`HeckeAlgebra::multiplicity`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coset::{self, degree_of, enumerate_right_cosets_of, is_prime, Budget, CosetType, RepSet, Side};
use crate::error::{HeckeError, Result};
use crate::intmat::{biguint_to_bigint, canonical_label, det_divisors, hnf_col, kernel, CosetLabel, DetVector, IntMatrix};
use crate::report::{Claim, Report};

/// Finite formal combination of double cosets with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HeckeElement {
    terms: BTreeMap<CosetLabel, BigRational>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(label: CosetLabel) -> Self {
        let mut out = Self::zero();
        out.add_term(label, BigRational::one());
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (CosetLabel, BigRational)>) -> Self {
        let mut out = Self::zero();
        for (l, c) in terms {
            out.add_term(l, c);
        }
        out
    }

    pub fn add_term(&mut self, label: CosetLabel, coeff: BigRational) {
        let slot = self.terms.entry(label.clone()).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&label);
        }
    }

    pub fn coefficient(&self, label: &CosetLabel) -> BigRational {
        self.terms.get(label).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CosetLabel, &BigRational)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &CosetLabel> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, q: &BigRational) -> HeckeElement {
        HeckeElement::from_terms(self.terms.iter().map(|(l, c)| (l.clone(), c * q)))
    }

    pub fn plus(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = self.clone();
        for (l, c) in other.terms() {
            out.add_term(l.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &HeckeElement) -> HeckeElement {
        self.plus(&other.scaled(&-BigRational::one()))
    }

    /// Drops scalar factors from every label. On full-level forms the scalar
    /// double cosets act trivially, so `r·g` contributes to `g` and every
    /// scalar label collapses onto the identity.
    pub fn id_reduced(&self) -> HeckeElement {
        HeckeElement::from_terms(self.terms.iter().map(|(l, c)| (l.primitive(), c.clone())))
    }

    /// True when all coefficients are positive integers.
    pub fn is_positive_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer() && c.is_positive())
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let c = c.abs();
            if !c.is_one() {
                write!(f, "{c}")?;
            }
            if l.is_scalar() && l.r().is_one() {
                write!(f, "[Id]")?;
            } else {
                write!(f, "[{l}]")?;
            }
        }
        Ok(())
    }
}

/// Which expression of the structure constant to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    RightCosetPairs,
    DoubleCosetPairs,
    SingleSide,
}

impl Formula {
    pub fn from_index(i: u8) -> Option<Formula> {
        match i {
            1 => Some(Formula::RightCosetPairs),
            2 => Some(Formula::DoubleCosetPairs),
            3 => Some(Formula::SingleSide),
            _ => None,
        }
    }
}

/// Per-label evaluation of all three multiplicity expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditRow {
    pub label: CosetLabel,
    pub degree: u64,
    pub right_coset_pairs: BigUint,
    pub double_coset_pairs: BigUint,
    pub single_side: BigUint,
}

impl AuditRow {
    pub fn agree(&self) -> bool {
        self.right_coset_pairs == self.double_coset_pairs && self.double_coset_pairs == self.single_side
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvolutionAudit {
    pub g1: CosetLabel,
    pub g2: CosetLabel,
    pub deg_g1: u64,
    pub deg_g2: u64,
    pub rows: Vec<AuditRow>,
    /// Labels of all products `α_iβ_j`.
    pub pair_support: BTreeSet<CosetLabel>,
    /// Labels of all products `α_i g₂`.
    pub single_support: BTreeSet<CosetLabel>,
    pub product: HeckeElement,
}

impl ConvolutionAudit {
    pub fn formulas_agree(&self) -> bool {
        self.rows.iter().all(AuditRow::agree)
    }

    /// `deg g₁ · deg g₂ = Σ_h m(g₁,g₂;h) deg h`.
    pub fn degree_sum_holds(&self) -> bool {
        let lhs = BigUint::from(self.deg_g1) * BigUint::from(self.deg_g2);
        let rhs: BigUint = self
            .rows
            .iter()
            .map(|r| &r.single_side * BigUint::from(r.degree))
            .sum();
        lhs == rhs
    }

    pub fn supports_agree(&self) -> bool {
        self.pair_support == self.single_support
    }
}

/// The two compositions needed by the amplifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Linearization {
    /// `T_diag(1,p,p) ∘ T_diag(1,1,q)`
    Lin2,
    /// `T_diag(1,p,p²) ∘ T_diag(1,q,q²)`
    Lin6,
}

impl Linearization {
    pub fn name(&self) -> &'static str {
        match self {
            Linearization::Lin2 => "lin2",
            Linearization::Lin6 => "lin6",
        }
    }
}

/// Result of [`HeckeAlgebra::compose_normalized`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedComposition {
    pub which: Linearization,
    pub p: u64,
    pub q: u64,
    /// Product of the normalizations `1/p`, `1/p²` of the two operators.
    pub normalization: BigRational,
    /// Composition of the normalized operators, scalars reduced to `Id`.
    pub normalized: HeckeElement,
    /// The same composition for the unnormalized `T_g`.
    pub unnormalized: HeckeElement,
}

/// Representative data cached per label: the right cosets plus an `i64`
/// copy of each representative for the inner loops.
struct CachedCosets {
    set: RepSet,
    small: Vec<Option<Vec<i64>>>,
}

impl CachedCosets {
    fn new(set: RepSet) -> Self {
        let small = set.reps().iter().map(IntMatrix::small).collect();
        CachedCosets { set, small }
    }
}

/// Engine for products of double cosets. Enumerations are cached per label.
pub struct HeckeAlgebra {
    budget: Budget,
    cosets: Mutex<HashMap<CosetLabel, Arc<CachedCosets>>>,
    degrees: Mutex<HashMap<CosetLabel, u64>>,
}

impl Default for HeckeAlgebra {
    fn default() -> Self {
        Self::new(Budget::default())
    }
}

fn rational(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn to_natural(q: &BigRational, what: &str) -> Result<BigUint> {
    if !q.is_integer() || q.is_negative() {
        return Err(HeckeError::Inconsistency(format!("{what} = {q} is not a nonnegative integer")));
    }
    Ok(q.numer().magnitude().clone())
}

/// Determinantal vector of `a·b` plus whether `a·b` lies in the right coset
/// of the diagonal matrix with that vector.
fn pair_class(a: Option<&[i64]>, b: Option<&[i64]>, a_big: &IntMatrix, b_big: &IntMatrix) -> (DetVector, bool) {
    let n = a_big.dim();
    if let (Some(a), Some(b)) = (a, b) {
        if let Some(mut prod) = kernel::mat_mul(a, b, n) {
            if let Some(d) = kernel::det_divisors(&prod, n) {
                if kernel::hnf_col(&mut prod, n).is_some() {
                    let mut prev = 1i64;
                    let mut diagonal = true;
                    for i in 0..n {
                        for j in 0..n {
                            let want = if i == j { d[i] / prev } else { 0 };
                            if prod[i * n + j] != want {
                                diagonal = false;
                            }
                        }
                        prev = d[i];
                    }
                    let dv = DetVector::from_vec(d.iter().map(|&x| BigUint::from(x as u64)).collect());
                    return (dv, diagonal);
                }
            }
        }
    }
    let prod = a_big.mul(b_big);
    let dv = det_divisors(&prod);
    let diag = CosetLabel::from_det_vector(&dv).diagonal_matrix().expect("integral");
    (dv.clone(), hnf_col(&prod) == diag)
}

impl HeckeAlgebra {
    pub fn new(budget: Budget) -> Self {
        HeckeAlgebra {
            budget,
            cosets: Mutex::new(HashMap::new()),
            degrees: Mutex::new(HashMap::new()),
        }
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    fn cached(&self, label: &CosetLabel) -> Result<Arc<CachedCosets>> {
        let key = label.primitive();
        if let Some(c) = self.cosets.lock().expect("cache lock").get(&key) {
            return Ok(c.clone());
        }
        let set = enumerate_right_cosets_of(&key, self.budget)?;
        let entry = Arc::new(CachedCosets::new(set));
        self.cosets.lock().expect("cache lock").insert(key, entry.clone());
        Ok(entry)
    }

    /// Right coset representatives of the primitive part of `label`.
    pub fn right_cosets(&self, label: &CosetLabel) -> Result<RepSet> {
        Ok(self.cached(label)?.set.clone())
    }

    /// Degree of a double coset; scaling invariant.
    pub fn degree(&self, label: &CosetLabel) -> Result<u64> {
        let key = label.primitive();
        if let Some(&d) = self.degrees.lock().expect("cache lock").get(&key) {
            return Ok(d);
        }
        let d = match self.cosets.lock().expect("cache lock").get(&key) {
            Some(c) => c.set.len() as u64,
            None => degree_of(&key, self.budget)?,
        };
        self.degrees.lock().expect("cache lock").insert(key, d);
        Ok(d)
    }

    /// Counts `#{i : α_i g₂ ∈ ΛhΛ}` for every `h`, both labels primitive.
    fn single_side_census(&self, g1: &CosetLabel, g2: &CosetLabel) -> Result<BTreeMap<CosetLabel, u64>> {
        let alphas = self.cached(g1)?;
        let d2 = g2.diagonal_matrix().expect("primitive labels are integral");
        let mut census = BTreeMap::new();
        for a in alphas.set.reps() {
            let h = canonical_label(&a.mul(&d2), &BigRational::one());
            *census.entry(h).or_insert(0u64) += 1;
        }
        Ok(census)
    }

    /// Counts, for every `h`, pairs in `Λh` (diagonal representative) and in
    /// `ΛhΛ`. Both labels primitive.
    fn pair_census(&self, g1: &CosetLabel, g2: &CosetLabel) -> Result<BTreeMap<CosetLabel, (u64, u64)>> {
        let alphas = self.cached(g1)?;
        let betas = self.cached(g2)?;
        let row = |i: usize| {
            let mut local: HashMap<DetVector, (u64, u64)> = HashMap::new();
            let a_big = &alphas.set.reps()[i];
            let a = alphas.small[i].as_deref();
            for (j, b_big) in betas.set.reps().iter().enumerate() {
                let (dv, in_right) = pair_class(a, betas.small[j].as_deref(), a_big, b_big);
                let slot = local.entry(dv).or_insert((0, 0));
                slot.0 += in_right as u64;
                slot.1 += 1;
            }
            local
        };
        let merge = |mut x: HashMap<DetVector, (u64, u64)>, y: HashMap<DetVector, (u64, u64)>| {
            for (k, v) in y {
                let slot = x.entry(k).or_insert((0, 0));
                slot.0 += v.0;
                slot.1 += v.1;
            }
            x
        };
        #[cfg(feature = "parallel")]
        let total = {
            use rayon::prelude::*;
            (0..alphas.set.len()).into_par_iter().map(row).reduce(HashMap::new, merge)
        };
        #[cfg(not(feature = "parallel"))]
        let total = (0..alphas.set.len()).map(row).fold(HashMap::new(), merge);
        Ok(total
            .into_iter()
            .map(|(dv, counts)| (CosetLabel::from_det_vector(&dv), counts))
            .collect())
    }

    fn check_dims(g1: &CosetLabel, g2: &CosetLabel) -> Result<()> {
        if g1.dim() != g2.dim() {
            return Err(HeckeError::Label(format!("dimension mismatch between {g1} and {g2}")));
        }
        Ok(())
    }

    /// Double cosets meeting `Λg₁Λg₂Λ`.
    pub fn product_support(&self, g1: &CosetLabel, g2: &CosetLabel) -> Result<BTreeSet<CosetLabel>> {
        Self::check_dims(g1, g2)?;
        let scale = g1.r() * g2.r();
        let census = self.single_side_census(&g1.primitive(), &g2.primitive())?;
        Ok(census.into_keys().map(|h| h.scaled(&scale)).collect())
    }

    /// `m(g₁, g₂; h)` by the chosen counting expression; zero outside the
    /// support. A non-integral count is an internal consistency failure.
    pub fn multiplicity(&self, g1: &CosetLabel, g2: &CosetLabel, h: &CosetLabel, formula: Formula) -> Result<BigUint> {
        Self::check_dims(g1, g2)?;
        let scale = g1.r() * g2.r();
        let local_h = h.scaled(&scale.recip());
        if !local_h.is_integral() {
            return Ok(BigUint::zero());
        }
        let (p1, p2) = (g1.primitive(), g2.primitive());
        match formula {
            Formula::SingleSide => {
                let census = self.single_side_census(&p1, &p2)?;
                let count = census.get(&local_h).copied().unwrap_or(0);
                if count == 0 {
                    return Ok(BigUint::zero());
                }
                let m = rational(self.degree(&p2)? * count) / rational(self.degree(&local_h)?);
                to_natural(&m, "single-side multiplicity")
            }
            Formula::RightCosetPairs | Formula::DoubleCosetPairs => {
                let census = self.pair_census(&p1, &p2)?;
                let (right, double) = census.get(&local_h).copied().unwrap_or((0, 0));
                if formula == Formula::RightCosetPairs {
                    return Ok(BigUint::from(right));
                }
                if double == 0 {
                    return Ok(BigUint::zero());
                }
                let m = rational(double) / rational(self.degree(&local_h)?);
                to_natural(&m, "double-coset pair multiplicity")
            }
        }
    }

    /// `Λg₁Λ ∗ Λg₂Λ` by direct enumeration over the whole labels.
    pub fn convolve(&self, g1: &CosetLabel, g2: &CosetLabel) -> Result<HeckeElement> {
        Self::check_dims(g1, g2)?;
        let scale = g1.r() * g2.r();
        let (p1, p2) = (g1.primitive(), g2.primitive());
        if p1.is_scalar() {
            return Ok(HeckeElement::basis(p2.scaled(&scale)));
        }
        if p2.is_scalar() {
            return Ok(HeckeElement::basis(p1.scaled(&scale)));
        }
        let deg2 = self.degree(&p2)?;
        let mut out = HeckeElement::zero();
        for (h, count) in self.single_side_census(&p1, &p2)? {
            let m = rational(deg2 * count) / rational(self.degree(&h)?);
            to_natural(&m, &format!("m({p1},{p2};{h})"))?;
            out.add_term(h.scaled(&scale), m);
        }
        Ok(out)
    }

    /// Convolution with all three multiplicity expressions evaluated.
    pub fn convolve_audited(&self, g1: &CosetLabel, g2: &CosetLabel) -> Result<ConvolutionAudit> {
        Self::check_dims(g1, g2)?;
        let scale = g1.r() * g2.r();
        let (p1, p2) = (g1.primitive(), g2.primitive());
        let deg1 = self.degree(&p1)?;
        let deg2 = self.degree(&p2)?;
        let single = self.single_side_census(&p1, &p2)?;
        let pairs = self.pair_census(&p1, &p2)?;
        let labels: BTreeSet<CosetLabel> = single.keys().chain(pairs.keys()).cloned().collect();
        let mut rows = Vec::new();
        let mut product = HeckeElement::zero();
        for h in labels {
            let degree = self.degree(&h)?;
            let count = single.get(&h).copied().unwrap_or(0);
            let (right, double) = pairs.get(&h).copied().unwrap_or((0, 0));
            let m3 = to_natural(&(rational(deg2 * count) / rational(degree)), "single-side multiplicity")?;
            let m2 = to_natural(&(rational(double) / rational(degree)), "double-coset pair multiplicity")?;
            product.add_term(h.scaled(&scale), BigRational::from_integer(biguint_to_bigint(&m3)));
            rows.push(AuditRow {
                label: h.scaled(&scale),
                degree,
                right_coset_pairs: BigUint::from(right),
                double_coset_pairs: m2,
                single_side: m3,
            });
        }
        Ok(ConvolutionAudit {
            g1: g1.clone(),
            g2: g2.clone(),
            deg_g1: deg1,
            deg_g2: deg2,
            rows,
            pair_support: pairs.into_keys().map(|h| h.scaled(&scale)).collect(),
            single_support: single.into_keys().map(|h| h.scaled(&scale)).collect(),
            product,
        })
    }

    /// Product of double cosets, split into local factors at each prime and
    /// recombined with the coprime law.
    pub fn multiply(&self, g1: &CosetLabel, g2: &CosetLabel) -> Result<HeckeElement> {
        Self::check_dims(g1, g2)?;
        let scale = g1.r() * g2.r();
        let (p1, p2) = (g1.primitive(), g2.primitive());
        let mut primes = p1.prime_support();
        primes.extend(p2.prime_support());
        primes.sort_unstable();
        primes.dedup();
        if primes.len() <= 1 {
            return self.convolve(g1, g2);
        }
        let mut acc = HeckeElement::basis(CosetLabel::identity(g1.dim())?);
        for p in primes {
            let local = self.convolve(&local_part(&p1, p), &local_part(&p2, p))?;
            acc = coprime_product_elements(&acc, &local)?;
        }
        Ok(acc.scaled_labels(&scale))
    }

    /// Bilinear extension of [`HeckeAlgebra::multiply`].
    pub fn multiply_elements(&self, x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement> {
        let mut out = HeckeElement::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                out = out.plus(&self.multiply(a, b)?.scaled(&(ca * cb)));
            }
        }
        Ok(out)
    }

    /// Hall coefficient `g^λ_{μν}(p)` read off the product of the double
    /// cosets of `diag(p^μ)` and `diag(p^ν)`.
    pub fn hall_coefficient(&self, mu: &[u32], nu: &[u32], lambda: &[u32], p: u64) -> Result<BigUint> {
        if !is_prime(p) {
            return Err(HeckeError::NotPrime(p));
        }
        let n = [mu.len(), nu.len(), lambda.len()].into_iter().max().unwrap_or(0).max(2);
        let label = |part: &[u32]| -> Result<CosetLabel> {
            let t = CosetType::new(n, p, partition_exponents(part, n)?)?;
            Ok(t.label())
        };
        let prod = self.multiply(&label(mu)?, &label(nu)?)?;
        to_natural(&prod.coefficient(&label(lambda)?), "Hall coefficient")
    }

    /// Composition of normalized operators from the amplifier, expanded in
    /// the double-coset basis with scalar labels reduced to `Id`.
    pub fn compose_normalized(&self, p: u64, q: u64, which: Linearization) -> Result<NormalizedComposition> {
        for x in [p, q] {
            if !is_prime(x) {
                return Err(HeckeError::NotPrime(x));
            }
        }
        let (left, right, normalization) = match which {
            Linearization::Lin2 => (
                CosetLabel::from_exponents(p, &[0, 1, 1])?,
                CosetLabel::from_exponents(q, &[0, 0, 1])?,
                rational(p * q).recip(),
            ),
            Linearization::Lin6 => (
                CosetLabel::from_exponents(p, &[0, 1, 2])?,
                CosetLabel::from_exponents(q, &[0, 1, 2])?,
                rational(p * p * q * q).recip(),
            ),
        };
        let left_op = HeckeElement::basis(left.clone()).scaled(&rational(left_normalizer(which, p)).recip());
        let right_op = HeckeElement::basis(right.clone()).scaled(&rational(left_normalizer(which, q)).recip());
        let normalized = self.multiply_elements(&left_op, &right_op)?.id_reduced();
        let unnormalized = normalized.scaled(&normalization.recip());
        Ok(NormalizedComposition {
            which,
            p,
            q,
            normalization,
            normalized,
            unnormalized,
        })
    }

    /// Normalized operator `T_m = m⁻¹ Σ T_diag(y₁,y₂,y₃)` over `y₁|y₂|y₃`,
    /// `y₁y₂y₃ = m`.
    pub fn normalized_operator(m: u64) -> Result<HeckeElement> {
        if m == 0 {
            return Err(HeckeError::Label("T_0 is undefined".into()));
        }
        let mut out = HeckeElement::zero();
        let inv = rational(m).recip();
        for y1 in (1..=m).filter(|y| m % y == 0) {
            let rest = m / y1;
            for y2 in (y1..=rest).step_by(y1 as usize).filter(|y| rest % y == 0) {
                let y3 = rest / y2;
                if y3 % y2 == 0 {
                    out.add_term(CosetLabel::from_diagonal(&[y1, y2, y3])?, inv.clone());
                }
            }
        }
        Ok(out)
    }

    /// `T_p ∘ T_p − T_{p²}` for `GL(2)` with `T_n` normalized by `n^{-1/2}`,
    /// reduced to the identity basis. Equals `Id`.
    pub fn gl2_amplifier_identity(&self, p: u64) -> Result<HeckeElement> {
        if !is_prime(p) {
            return Err(HeckeError::NotPrime(p));
        }
        let tp = CosetLabel::from_diagonal(&[1, p])?;
        let square = self.convolve(&tp, &tp)?;
        let t_p2 = HeckeElement::from_terms([
            (CosetLabel::from_diagonal(&[1, p * p])?, BigRational::one()),
            (CosetLabel::from_diagonal(&[p, p])?, BigRational::one()),
        ]);
        let inv_p = rational(p).recip();
        Ok(square.scaled(&inv_p).minus(&t_p2.scaled(&inv_p)).id_reduced())
    }

    /// Representative sets, degrees and the two product identities of the
    /// main theorem at the prime `p`.
    pub fn verify_theorem_a(&self, p: u64) -> Result<Report> {
        if !is_prime(p) {
            return Err(HeckeError::NotPrime(p));
        }
        let mut report = Report::new("theorem-a", format!("p={p}"));
        for alpha in [[0, 0, 1], [0, 1, 1], [0, 1, 2]] {
            let t = CosetType::gl3(p, alpha)?;
            let table = coset::explicit_table(&t, Side::Right)?;
            let enumerated = self.right_cosets(&t.label())?;
            report.push(Claim::check(
                format!("R set of {t} is a complete system"),
                table == enumerated,
                format!("{} table members", table.len()),
                format!("{} enumerated, equal={}", enumerated.len(), table == enumerated),
            ));
        }
        for (alpha, formula, value) in theorem_a_degrees(p) {
            let t = CosetType::gl3(p, alpha)?;
            let deg = self.degree(&t.label())?;
            report.push(Claim::new(format!("deg {t} = {formula}"), value, deg));
        }
        let prod = self.convolve(&label3(p, [0, 0, 1])?, &label3(p, [0, 1, 1])?)?;
        report.push(Claim::new("identity diag(1,1,p)*diag(1,p,p)", expected_intro_1(p)?, &prod));
        let prod = self.convolve(&label3(p, [0, 1, 2])?, &label3(p, [0, 1, 2])?)?;
        report.push(Claim::new("identity diag(1,p,p^2)*diag(1,p,p^2)", expected_intro_2(p)?, &prod));
        Ok(report)
    }

    /// Both linearizations at `(p, q)`, including the scalar reduction.
    pub fn verify_corollary_b(&self, p: u64, q: u64) -> Result<Report> {
        let mut report = Report::new("corollary-b", format!("p={p} q={q}"));
        for which in [Linearization::Lin2, Linearization::Lin6] {
            let got = self.compose_normalized(p, q, which)?;
            let want = expected_linearization(p, q, which)?;
            report.push(Claim::new(format!("{} (unnormalized)", which.name()), &want, &got.unnormalized));
            report.push(Claim::new(
                format!("{} (normalized by {})", which.name(), got.normalization),
                want.scaled(&got.normalization),
                &got.normalized,
            ));
        }
        Ok(report)
    }

    /// Explicit coset tables on both sides, the six appendix degrees and the
    /// per-shape census of `diag(1,1,p³)`.
    pub fn verify_appendix(&self, p: u64) -> Result<Report> {
        if !is_prime(p) {
            return Err(HeckeError::NotPrime(p));
        }
        let mut report = Report::new("appendix", format!("p={p}"));
        for alpha in [[0, 0, 1], [0, 1, 1], [0, 1, 2]] {
            let t = CosetType::gl3(p, alpha)?;
            for side in [Side::Right, Side::Left] {
                let table = coset::explicit_table(&t, side)?;
                let enumerated = coset::enumerate_cosets(&t, side, self.budget)?;
                report.push(Claim::check(
                    format!("{side} table of {t}"),
                    table == enumerated,
                    format!("{} table members", table.len()),
                    format!("{} enumerated, equal={}", enumerated.len(), table == enumerated),
                ));
            }
        }
        let degrees = theorem_a_degrees(p);
        for alpha in [[0, 0, 1], [0, 1, 1], [0, 1, 2], [0, 2, 4], [0, 3, 3], [0, 0, 3]] {
            let t = CosetType::gl3(p, alpha)?;
            let (formula, value) = degrees
                .iter()
                .find(|(a, _, _)| CosetType::gl3(p, *a).map(|x| x.normalized().alpha() == t.alpha()).unwrap_or(false))
                .map(|(_, f, v)| (*f, *v))
                .expect("appendix types are normalized theorem types");
            report.push(Claim::new(format!("deg {t} = {formula}"), value, self.degree(&t.label())?));
        }
        let set = self.right_cosets(&label3(p, [0, 0, 3])?)?;
        let profile = set.diagonal_profile();
        for (shape, formula, value) in diag_1_1_p3_shapes(p) {
            let key: Vec<BigUint> = shape.iter().map(|&e| BigUint::from(p.pow(e))).collect();
            let got = profile.get(&key).copied().unwrap_or(0);
            report.push(Claim::new(
                format!("diag(1,1,p^3) cosets with diagonal p^{shape:?} = {formula}"),
                value,
                got,
            ));
        }
        Ok(report)
    }

    /// The five Hall coefficients `g^λ_{(2,1,0),(2,1,0)}(p)`.
    pub fn verify_hall(&self, p: u64) -> Result<Report> {
        let mut report = Report::new("hall", format!("p={p}"));
        for (lambda, formula, value) in hall_table(p) {
            let got = self.hall_coefficient(&[2, 1, 0], &[2, 1, 0], &lambda, p)?;
            report.push(Claim::new(format!("g^{lambda:?}_(2,1,0),(2,1,0) = {formula}"), value, got));
        }
        Ok(report)
    }
}

fn left_normalizer(which: Linearization, p: u64) -> u64 {
    match which {
        Linearization::Lin2 => p,
        Linearization::Lin6 => p * p,
    }
}

impl HeckeElement {
    fn scaled_labels(&self, q: &BigRational) -> HeckeElement {
        HeckeElement::from_terms(self.terms.iter().map(|(l, c)| (l.scaled(q), c.clone())))
    }
}

fn label3(p: u64, alpha: [u32; 3]) -> Result<CosetLabel> {
    CosetLabel::from_exponents(p, &alpha)
}

/// Local factor of a primitive label at `p`.
fn local_part(label: &CosetLabel, p: u64) -> CosetLabel {
    let pb = BigUint::from(p);
    let s = label
        .s()
        .iter()
        .map(|x| {
            let mut x = x.clone();
            let mut out = BigUint::one();
            while (&x % &pb).is_zero() {
                x /= &pb;
                out *= &pb;
            }
            out
        })
        .collect();
    CosetLabel::new(BigRational::one(), s).expect("local part keeps the divisor chain")
}

/// `Λr·diag(1,a₁,a₂)Λ ∗ Λr'·diag(1,b₁,b₂)Λ = Λrr'·diag(1,a₁b₁,a₂b₂)Λ` when
/// the elementary divisors are coprime.
pub fn coprime_product(g1: &CosetLabel, g2: &CosetLabel) -> Result<HeckeElement> {
    if g1.dim() != g2.dim() {
        return Err(HeckeError::Label(format!("dimension mismatch between {g1} and {g2}")));
    }
    let top1 = g1.s().last().expect("n >= 2");
    let top2 = g2.s().last().expect("n >= 2");
    if !top1.gcd(top2).is_one() {
        return Err(HeckeError::NotCoprime(g1.to_string(), g2.to_string()));
    }
    let s = g1.s().iter().zip(g2.s()).map(|(a, b)| a * b).collect();
    Ok(HeckeElement::basis(CosetLabel::new(g1.r() * g2.r(), s)?))
}

fn coprime_product_elements(x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement> {
    let mut out = HeckeElement::zero();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            out = out.plus(&coprime_product(a, b)?.scaled(&(ca * cb)));
        }
    }
    Ok(out)
}

/// Reverses a weakly decreasing partition (padded with zeros to length `n`)
/// into the nondecreasing exponents of a diagonal type.
pub fn partition_exponents(part: &[u32], n: usize) -> Result<Vec<u32>> {
    if part.len() > n {
        return Err(HeckeError::Exponents(format!("partition {part:?} has more than {n} parts")));
    }
    if part.windows(2).any(|w| w[0] < w[1]) {
        return Err(HeckeError::Exponents(format!("partition {part:?} is not weakly decreasing")));
    }
    let mut out: Vec<u32> = part.to_vec();
    out.resize(n, 0);
    out.reverse();
    Ok(out)
}

fn term(p: u64, alpha: [u32; 3], coeff: u64) -> Result<(CosetLabel, BigRational)> {
    Ok((label3(p, alpha)?, rational(coeff)))
}

/// `[diag(1,p,p²)] + (p²+p+1)[diag(p,p,p)]`
pub fn expected_intro_1(p: u64) -> Result<HeckeElement> {
    Ok(HeckeElement::from_terms([term(p, [0, 1, 2], 1)?, term(p, [1, 1, 1], p * p + p + 1)?]))
}

/// The five-term expansion of `[diag(1,p,p²)]²`.
pub fn expected_intro_2(p: u64) -> Result<HeckeElement> {
    Ok(HeckeElement::from_terms([
        term(p, [0, 2, 4], 1)?,
        term(p, [0, 3, 3], p + 1)?,
        term(p, [1, 1, 4], p + 1)?,
        term(p, [1, 2, 3], (p + 1) * (2 * p - 1))?,
        term(p, [2, 2, 2], p * (p + 1) * (p * p + p + 1))?,
    ]))
}

/// Right-hand sides of the two linearizations, in the `T_g` basis.
pub fn expected_linearization(p: u64, q: u64, which: Linearization) -> Result<HeckeElement> {
    let id = CosetLabel::identity(3)?;
    let same = p == q;
    let mut out = HeckeElement::zero();
    match which {
        Linearization::Lin2 => {
            out.add_term(CosetLabel::from_diagonal(&[1, p, p * q])?, BigRational::one());
            if same {
                out.add_term(id, rational(p * p + p + 1));
            }
        }
        Linearization::Lin6 => {
            out.add_term(CosetLabel::from_diagonal(&[1, p * q, p * p * q * q])?, BigRational::one());
            if same {
                out.add_term(label3(p, [0, 3, 3])?, rational(p + 1));
                out.add_term(label3(p, [0, 0, 3])?, rational(p + 1));
                out.add_term(label3(p, [0, 1, 2])?, rational((p + 1) * (2 * p - 1)));
                out.add_term(id, rational(p * (p + 1) * (p * p + p + 1)));
            }
        }
    }
    Ok(out)
}

/// Number of right cosets of `diag(1,1,p³)` by diagonal exponent shape.
pub fn diag_1_1_p3_shapes(p: u64) -> Vec<([u32; 3], &'static str, u64)> {
    vec![
        ([3, 0, 0], "1", 1),
        ([0, 3, 0], "p^3", p.pow(3)),
        ([0, 0, 3], "p^6", p.pow(6)),
        ([0, 1, 2], "p^3(p^2-p)", p.pow(3) * (p * p - p)),
        ([0, 2, 1], "p^3(p-1)", p.pow(3) * (p - 1)),
        ([1, 0, 2], "p^2(p^2-p)", p * p * (p * p - p)),
        ([2, 0, 1], "p(p-1)", p * (p - 1)),
        ([1, 2, 0], "p^2-p", p * p - p),
        ([2, 1, 0], "p-1", p - 1),
        ([1, 1, 1], "p(p-1)^2", p * (p - 1) * (p - 1)),
    ]
}

/// `(λ, formula, value)` for the Hall coefficients `g^λ_{(2,1,0),(2,1,0)}(p)`.
pub fn hall_table(p: u64) -> Vec<([u32; 3], &'static str, u64)> {
    vec![
        ([4, 2, 0], "1", 1),
        ([3, 3, 0], "p+1", p + 1),
        ([4, 1, 1], "p+1", p + 1),
        ([3, 2, 1], "(p+1)(2p-1)", (p + 1) * (2 * p - 1)),
        ([2, 2, 2], "p(p+1)(p^2+p+1)", p * (p + 1) * (p * p + p + 1)),
    ]
}

/// `(α, formula, value)` for the degrees of the nine diagonal types that
/// occur in the two product identities.
pub fn theorem_a_degrees(p: u64) -> Vec<([u32; 3], &'static str, u64)> {
    let c = p * p + p + 1;
    vec![
        ([0, 0, 1], "p^2+p+1", c),
        ([0, 1, 1], "p^2+p+1", c),
        ([0, 1, 2], "p(p+1)(p^2+p+1)", p * (p + 1) * c),
        ([1, 1, 1], "1", 1),
        ([0, 2, 4], "p^5(p+1)(p^2+p+1)", p.pow(5) * (p + 1) * c),
        ([0, 3, 3], "p^4(p^2+p+1)", p.pow(4) * c),
        ([1, 1, 4], "p^4(p^2+p+1)", p.pow(4) * c),
        ([1, 2, 3], "p(p+1)(p^2+p+1)", p * (p + 1) * c),
        ([2, 2, 2], "1", 1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(p: u64, a: [u32; 3]) -> CosetLabel {
        label3(p, a).unwrap()
    }

    #[test]
    fn element_arithmetic() {
        let a = HeckeElement::basis(l(2, [0, 0, 1]));
        let z = a.minus(&a);
        assert!(z.is_empty());
        assert_eq!(z.to_string(), "0");
        let e = expected_intro_1(2).unwrap();
        assert_eq!(e.to_string(), "7[diag(2,2,2)] + [diag(1,2,4)]");
        assert_eq!(e.id_reduced().to_string(), "7[Id] + [diag(1,2,4)]");
        assert_eq!(e.id_reduced().coefficient(&CosetLabel::identity(3).unwrap()), rational(7));
    }

    #[test]
    fn identity_is_neutral() {
        let h = HeckeAlgebra::default();
        let id = CosetLabel::identity(3).unwrap();
        let g = l(3, [0, 1, 2]);
        assert_eq!(h.convolve(&id, &g).unwrap(), HeckeElement::basis(g.clone()));
        assert_eq!(h.product_support(&id, &g).unwrap().into_iter().collect::<Vec<_>>(), vec![g]);
    }

    #[test]
    fn scalar_law() {
        let h = HeckeAlgebra::default();
        let r = CosetLabel::scalar(3, rational(5)).unwrap();
        let g = l(5, [0, 0, 1]);
        let got = h.convolve(&r, &g).unwrap();
        assert_eq!(got, HeckeElement::basis(l(5, [1, 1, 2])));
    }

    #[test]
    fn first_identity_small_primes() {
        let h = HeckeAlgebra::default();
        for p in [2, 3] {
            let got = h.convolve(&l(p, [0, 0, 1]), &l(p, [0, 1, 1])).unwrap();
            assert_eq!(got, expected_intro_1(p).unwrap());
        }
    }

    #[test]
    fn support_of_first_product() {
        let h = HeckeAlgebra::default();
        let s = h.product_support(&l(3, [0, 0, 1]), &l(3, [0, 1, 1])).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![l(3, [1, 1, 1]), l(3, [0, 1, 2])]);
    }

    #[test]
    fn multiplicity_formulas() {
        let h = HeckeAlgebra::default();
        let p = 3;
        let (g1, g2) = (l(p, [0, 0, 1]), l(p, [0, 1, 1]));
        for f in [Formula::RightCosetPairs, Formula::DoubleCosetPairs, Formula::SingleSide] {
            assert_eq!(h.multiplicity(&g1, &g2, &l(p, [1, 1, 1]), f).unwrap(), BigUint::from(13u32));
            assert_eq!(h.multiplicity(&g1, &g2, &l(p, [0, 1, 2]), f).unwrap(), BigUint::one());
            assert!(h.multiplicity(&g1, &g2, &l(p, [0, 0, 3]), f).unwrap().is_zero());
        }
        let g = l(2, [0, 1, 2]);
        assert_eq!(h.multiplicity(&g, &g, &l(2, [1, 2, 3]), Formula::SingleSide).unwrap(), BigUint::from(9u32));
    }

    #[test]
    fn coprime_law() {
        let r = coprime_product(&l(2, [0, 1, 2]), &l(3, [0, 1, 2])).unwrap();
        assert_eq!(r, HeckeElement::basis(CosetLabel::from_diagonal(&[1, 6, 36]).unwrap()));
        let r = coprime_product(&l(2, [0, 0, 1]), &l(3, [0, 1, 1])).unwrap();
        assert_eq!(r, HeckeElement::basis(CosetLabel::from_diagonal(&[1, 3, 6]).unwrap()));
        let id = CosetLabel::identity(3).unwrap();
        assert_eq!(coprime_product(&id, &l(5, [0, 1, 2])).unwrap(), HeckeElement::basis(l(5, [0, 1, 2])));
        assert!(matches!(coprime_product(&l(2, [0, 0, 1]), &l(2, [0, 1, 1])), Err(HeckeError::NotCoprime(..))));
    }

    #[test]
    fn partitions_reverse() {
        assert_eq!(partition_exponents(&[2, 1], 3).unwrap(), vec![0, 1, 2]);
        assert!(partition_exponents(&[1, 2], 3).is_err());
        assert!(partition_exponents(&[1, 1, 1, 1], 3).is_err());
    }

    #[test]
    fn normalized_operators() {
        let t2 = HeckeAlgebra::normalized_operator(2).unwrap();
        assert_eq!(t2, HeckeElement::basis(l(2, [0, 0, 1])).scaled(&rational(2).recip()));
        let t4 = HeckeAlgebra::normalized_operator(4).unwrap();
        assert_eq!(t4.len(), 2);
        assert_eq!(t4.coefficient(&l(2, [0, 1, 1])), rational(4).recip());
        assert_eq!(t4.coefficient(&l(2, [0, 0, 2])), rational(4).recip());
        assert_eq!(HeckeAlgebra::normalized_operator(1).unwrap(), HeckeElement::basis(CosetLabel::identity(3).unwrap()));
    }

    #[test]
    fn gl2_identity() {
        let h = HeckeAlgebra::default();
        for p in [2, 3] {
            let id = CosetLabel::identity(2).unwrap();
            assert_eq!(h.gl2_amplifier_identity(p).unwrap(), HeckeElement::basis(id));
        }
    }

    #[test]
    fn lin2_branches() {
        let h = HeckeAlgebra::default();
        let c = h.compose_normalized(2, 3, Linearization::Lin2).unwrap();
        assert_eq!(c.unnormalized, HeckeElement::basis(CosetLabel::from_diagonal(&[1, 2, 6]).unwrap()));
        let c = h.compose_normalized(2, 2, Linearization::Lin2).unwrap();
        assert_eq!(c.unnormalized, expected_linearization(2, 2, Linearization::Lin2).unwrap());
        assert_eq!(c.unnormalized.to_string(), "7[Id] + [diag(1,2,4)]");
    }

    #[test]
    fn hall_small() {
        let h = HeckeAlgebra::default();
        assert_eq!(h.hall_coefficient(&[2, 1, 0], &[2, 1, 0], &[3, 2, 1], 2).unwrap(), BigUint::from(9u32));
        assert_eq!(h.hall_coefficient(&[1], &[1], &[2], 3).unwrap(), BigUint::one());
        assert_eq!(h.hall_coefficient(&[1], &[1], &[1, 1], 3).unwrap(), BigUint::from(4u32));
        assert_eq!(h.hall_coefficient(&[1], &[1], &[3], 3).unwrap(), BigUint::zero());
    }

    #[test]
    fn suites_at_two() {
        let h = HeckeAlgebra::default();
        for r in [h.verify_theorem_a(2).unwrap(), h.verify_appendix(2).unwrap(), h.verify_hall(2).unwrap(), h.verify_corollary_b(2, 2).unwrap()] {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let h = HeckeAlgebra::default();
        let a = CosetLabel::from_diagonal(&[1, 2]).unwrap();
        assert!(h.convolve(&a, &l(2, [0, 0, 1])).is_err());
    }
}
