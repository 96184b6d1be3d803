//! Right and left Λ-coset representatives of integral Λ-double cosets.
//!
//! A right coset `Λg` has a unique column-reduced upper-triangular
//! representative, so a double coset `ΛgΛ` is enumerated by walking all
//! column-reduced matrices whose diagonal is compatible with `g` and keeping
//! those with the determinantal vector of `g`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{HeckeError, Result};
use crate::intmat::{det_divisors, hnf_col, hnf_row, CosetLabel, IntMatrix};

/// Cap on candidate evaluations for a single enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(2_000_000_000);

    pub fn unlimited() -> Budget {
        Budget(u64::MAX)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `diag(p^alpha_1, ..., p^alpha_n)` with `alpha` nondecreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosetType {
    n: usize,
    p: u64,
    alpha: Vec<u32>,
}

impl CosetType {
    pub fn new(n: usize, p: u64, alpha: Vec<u32>) -> Result<Self> {
        if n != 2 && n != 3 {
            return Err(HeckeError::Dimension(n));
        }
        if !is_prime(p) {
            return Err(HeckeError::NotPrime(p));
        }
        if alpha.len() != n {
            return Err(HeckeError::Exponents(format!(
                "expected {n} exponents, got {}",
                alpha.len()
            )));
        }
        if alpha.windows(2).any(|w| w[0] > w[1]) {
            return Err(HeckeError::Exponents(format!(
                "{alpha:?} is not nondecreasing"
            )));
        }
        Ok(CosetType { n, p, alpha })
    }

    pub fn gl3(p: u64, alpha: [u32; 3]) -> Result<Self> {
        Self::new(3, p, alpha.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn label(&self) -> CosetLabel {
        CosetLabel::from_exponents(self.p, &self.alpha).expect("validated type")
    }

    /// Same type with the smallest exponent shifted to zero.
    pub fn normalized(&self) -> CosetType {
        let a0 = self.alpha[0];
        CosetType {
            n: self.n,
            p: self.p,
            alpha: self.alpha.iter().map(|a| a - a0).collect(),
        }
    }
}

impl fmt::Display for CosetType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "diag(")?;
        for (i, a) in self.alpha.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match a {
                0 => write!(f, "1")?,
                1 => write!(f, "{}", self.p)?,
                _ => write!(f, "{}^{a}", self.p)?,
            }
        }
        write!(f, ")")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Right,
    Left,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
        })
    }
}

/// Sorted, duplicate-free representatives of the Λ-cosets in a double coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSet {
    label: CosetLabel,
    side: Side,
    reps: Vec<IntMatrix>,
}

impl RepSet {
    fn from_unsorted(label: CosetLabel, side: Side, mut reps: Vec<IntMatrix>) -> Self {
        reps.sort();
        reps.dedup();
        RepSet { label, side, reps }
    }

    pub fn label(&self) -> &CosetLabel {
        &self.label
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn reps(&self) -> &[IntMatrix] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.reps.binary_search(m).is_ok()
    }

    /// Number of representatives per diagonal.
    pub fn diagonal_profile(&self) -> BTreeMap<Vec<BigUint>, usize> {
        let mut out = BTreeMap::new();
        for m in &self.reps {
            let diag = (0..m.dim())
                .map(|i| m.entry(i, i).magnitude().clone())
                .collect::<Vec<_>>();
            *out.entry(diag).or_insert(0) += 1;
        }
        out
    }

    /// Checks that reducing `δ·u` (right side) or `u·δ` (left side) lands back
    /// in the set for every representative `δ` and every `u` in `gens`.
    pub fn is_closed_under(&self, gens: &[IntMatrix]) -> bool {
        self.reps.iter().all(|d| {
            gens.iter().all(|u| match self.side {
                Side::Right => self.contains(&hnf_col(&d.mul(u))),
                Side::Left => self.contains(&hnf_row(&u.mul(d))),
            })
        })
    }
}

/// All exponent vectors `δ` with `Σδ = Σα` and `0 <= δ_j <= max α`, in
/// lexicographic order.
pub fn candidate_diagonals(t: &CosetType) -> Vec<Vec<u32>> {
    let total: u32 = t.alpha.iter().sum();
    let top = *t.alpha.iter().max().expect("nonempty");
    let mut out = Vec::new();
    let mut cur = vec![0u32; t.n];
    fn rec(pos: usize, left: u32, top: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            if left <= top {
                cur[pos] = left;
                out.push(cur.clone());
            }
            return;
        }
        for d in 0..=top.min(left) {
            cur[pos] = d;
            rec(pos + 1, left - d, top, cur, out);
        }
    }
    rec(0, total, top, &mut cur, &mut out);
    out
}

fn divisors(x: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= x {
        if x % d == 0 {
            small.push(d);
            if d * d != x {
                large.push(x / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Largest elementary divisor accepted by the `i64` enumeration kernel.
const MAX_KERNEL_ENTRY: u64 = 1 << 31;

struct Target {
    n: usize,
    det: u64,
    top: u64,
    d1: u64,
    d2: u64,
}

impl Target {
    fn of(label: &CosetLabel) -> Result<Target> {
        let e = label.elementary_divisors().ok_or_else(|| {
            HeckeError::Label(format!("{label} is not integral"))
        })?;
        let e: Vec<u64> = e
            .iter()
            .map(|x| x.to_u64().filter(|&v| v < MAX_KERNEL_ENTRY))
            .collect::<Option<_>>()
            .ok_or_else(|| HeckeError::EntryRange(label.to_string()))?;
        let det = e.iter().try_fold(1u64, |acc, &x| acc.checked_mul(x));
        let det = det.ok_or_else(|| HeckeError::EntryRange(label.to_string()))?;
        Ok(Target {
            n: e.len(),
            det,
            top: *e.last().expect("nonempty"),
            d1: e[0],
            d2: if e.len() == 3 { e[0] * e[1] } else { det },
        })
    }

    /// Diagonals allowed by the determinant and `top·H^{-1}` integrality.
    fn shapes(&self) -> Vec<Vec<u64>> {
        let divs = divisors(self.top);
        let mut out = Vec::new();
        match self.n {
            2 => {
                for &a in &divs {
                    if self.det % a == 0 && divs.contains(&(self.det / a)) {
                        out.push(vec![a, self.det / a]);
                    }
                }
            }
            _ => {
                for &a in &divs {
                    for &b in &divs {
                        let ab = a * b;
                        if self.det % ab == 0 && divs.contains(&(self.det / ab)) {
                            out.push(vec![a, b, self.det / ab]);
                        }
                    }
                }
            }
        }
        out
    }

    fn required(&self, shapes: &[Vec<u64>]) -> u128 {
        shapes
            .iter()
            .map(|s| match self.n {
                2 => s[1] as u128,
                _ => s[1] as u128 * s[2] as u128 * s[2] as u128,
            })
            .sum()
    }

    /// A shape can only contribute when `d_1` divides every diagonal entry
    /// and `d_2` divides every product of two of them.
    fn admits(&self, s: &[u64]) -> bool {
        if s.iter().any(|h| h % self.d1 != 0) {
            return false;
        }
        self.n == 2 || [s[0] * s[1], s[0] * s[2], s[1] * s[2]].iter().all(|x| x % self.d2 == 0)
    }
}

fn scan_row_d(t: &Target, shape: &[u64], d: u64, mut sink: Option<&mut Vec<[i64; 9]>>) -> u64 {
    let (a, b, c) = (shape[0], shape[1], shape[2]);
    let mut count = 0;
    let base1 = a.gcd(&b).gcd(&c).gcd(&d);
    let base2 = (a * b).gcd(&(a * c)).gcd(&(b * c)).gcd(&(d * c));
    let f_step = t.d1.lcm(&(t.d2 / t.d2.gcd(&a)));
    for f in (0..c).step_by(f_step as usize) {
        let g1f = base1.gcd(&f);
        let g2f = base2.gcd(&(a * f));
        for e in (0..c).step_by(t.d1 as usize) {
            if g1f.gcd(&e) != t.d1 {
                continue;
            }
            let cross = (d * f).abs_diff(b * e);
            if g2f.gcd(&cross) == t.d2 {
                count += 1;
                if let Some(out) = sink.as_deref_mut() {
                    out.push([
                        a as i64, d as i64, e as i64, 0, b as i64, f as i64, 0, 0, c as i64,
                    ]);
                }
            }
        }
    }
    count
}

fn scan_gl2(t: &Target, shape: &[u64], mut sink: Option<&mut Vec<[i64; 9]>>) -> u64 {
    let (a, b) = (shape[0], shape[1]);
    let mut count = 0;
    for d in (0..b).step_by(t.d1 as usize) {
        if a.gcd(&b).gcd(&d) == t.d1 {
            count += 1;
            if let Some(out) = sink.as_deref_mut() {
                out.push([a as i64, d as i64, 0, b as i64, 0, 0, 0, 0, 0]);
            }
        }
    }
    count
}

/// One unit of work: a diagonal shape and, for `n = 3`, a fixed `(1,2)` entry.
fn jobs<'a>(t: &Target, shapes: &'a [Vec<u64>]) -> Vec<(&'a [u64], u64)> {
    let mut jobs = Vec::new();
    for s in shapes {
        if t.n == 2 {
            jobs.push((s.as_slice(), 0));
            continue;
        }
        let d_step = t.d1.lcm(&(t.d2 / t.d2.gcd(&s[2])));
        for d in (0..s[1]).step_by(d_step as usize) {
            jobs.push((s.as_slice(), d));
        }
    }
    jobs
}

fn run_job(t: &Target, job: (&[u64], u64), sink: Option<&mut Vec<[i64; 9]>>) -> u64 {
    if t.n == 2 {
        scan_gl2(t, job.0, sink)
    } else {
        scan_row_d(t, job.0, job.1, sink)
    }
}

fn collect_scan(t: &Target, shapes: &[Vec<u64>]) -> Vec<[i64; 9]> {
    let jobs = jobs(t, shapes);
    let run = |job: &(&[u64], u64)| {
        let mut out = Vec::new();
        run_job(t, *job, Some(&mut out));
        out
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        jobs.par_iter().flat_map_iter(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.iter().flat_map(run).collect()
    }
}

fn count_scan(t: &Target, shapes: &[Vec<u64>]) -> u64 {
    let jobs = jobs(t, shapes);
    let run = |job: &(&[u64], u64)| run_job(t, *job, None);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        jobs.par_iter().map(run).sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.iter().map(run).sum()
    }
}

/// Candidate-evaluation estimate used by the feasibility guard.
pub fn required_budget(label: &CosetLabel) -> Result<u128> {
    let t = Target::of(label)?;
    Ok(t.required(&t.shapes()))
}

/// Column-reduced representatives of the right cosets in the double coset of
/// an integral label.
fn feasible_target(label: &CosetLabel, budget: Budget) -> Result<(Target, Vec<Vec<u64>>)> {
    let t = Target::of(label)?;
    let shapes = t.shapes();
    let required = t.required(&shapes);
    if required > budget.0 as u128 {
        return Err(HeckeError::BudgetExceeded {
            what: label.to_string(),
            required,
            budget: budget.0,
        });
    }
    let admitted = shapes.into_iter().filter(|s| t.admits(s)).collect();
    Ok((t, admitted))
}

pub fn enumerate_right_cosets_of(label: &CosetLabel, budget: Budget) -> Result<RepSet> {
    let (t, admitted) = feasible_target(label, budget)?;
    let n = t.n;
    let reps = collect_scan(&t, &admitted)
        .into_iter()
        .map(|e| IntMatrix::from_small_unchecked(n, &e[..n * n]))
        .collect();
    Ok(RepSet::from_unsorted(label.clone(), Side::Right, reps))
}

/// Row-reduced representatives of the left cosets, obtained from the right
/// ones through `δ ↦ W·ᵗδ·W`.
pub fn enumerate_left_cosets_of(label: &CosetLabel, budget: Budget) -> Result<RepSet> {
    let right = enumerate_right_cosets_of(label, budget)?;
    Ok(left_from_right(&right))
}

pub(crate) fn left_from_right(right: &RepSet) -> RepSet {
    let reps = right
        .reps
        .iter()
        .map(|d| hnf_row(&d.antidiagonal_transpose()))
        .collect();
    RepSet::from_unsorted(right.label.clone(), Side::Left, reps)
}

pub fn enumerate_right_cosets(t: &CosetType, budget: Budget) -> Result<RepSet> {
    enumerate_right_cosets_of(&t.label(), budget)
}

pub fn enumerate_left_cosets(t: &CosetType, budget: Budget) -> Result<RepSet> {
    enumerate_left_cosets_of(&t.label(), budget)
}

pub fn enumerate_cosets(t: &CosetType, side: Side, budget: Budget) -> Result<RepSet> {
    match side {
        Side::Right => enumerate_right_cosets(t, budget),
        Side::Left => enumerate_left_cosets(t, budget),
    }
}

/// Number of right cosets in the double coset (invariant under scaling).
pub fn degree(t: &CosetType, budget: Budget) -> Result<u64> {
    degree_of(&t.label(), budget)
}

/// Counts right cosets without materializing the representatives.
pub fn degree_of(label: &CosetLabel, budget: Budget) -> Result<u64> {
    let (t, admitted) = feasible_target(&label.primitive(), budget)?;
    Ok(count_scan(&t, &admitted))
}

/// Representative tables written out as parametric families, for
/// `diag(1,1,p)`, `diag(1,p,p)` and `diag(1,p,p^2)`.
pub fn explicit_table(t: &CosetType, side: Side) -> Result<RepSet> {
    if t.n != 3 {
        return Err(HeckeError::UnsupportedTable(t.to_string()));
    }
    let p = t.p as i64;
    let q = p * p;
    let mut out: Vec<[i64; 9]> = Vec::new();
    match (t.alpha.as_slice(), side) {
        ([0, 0, 1], Side::Right) => {
            out.push([p, 0, 0, 0, 1, 0, 0, 0, 1]);
            for d1 in 0..p {
                out.push([1, d1, 0, 0, p, 0, 0, 0, 1]);
            }
            for e1 in 0..p {
                for f1 in 0..p {
                    out.push([1, 0, e1, 0, 1, f1, 0, 0, p]);
                }
            }
        }
        ([0, 0, 1], Side::Left) => {
            out.push([1, 0, 0, 0, 1, 0, 0, 0, p]);
            for f1 in 0..p {
                out.push([1, 0, 0, 0, p, f1, 0, 0, 1]);
            }
            for d1 in 0..p {
                for e1 in 0..p {
                    out.push([p, d1, e1, 0, 1, 0, 0, 0, 1]);
                }
            }
        }
        ([0, 1, 1], Side::Left) => out.extend(table_1_p_p_left(p)),
        ([0, 1, 1], Side::Right) => {
            // only the left table is written out; the right one is its dual
            let left = table_1_p_p_left(p)
                .into_iter()
                .map(|e| IntMatrix::from_small_unchecked(3, &e))
                .collect();
            let left = RepSet::from_unsorted(t.label(), Side::Left, left);
            let reps = left
                .reps
                .iter()
                .map(|d| hnf_col(&d.antidiagonal_transpose()))
                .collect();
            return Ok(RepSet::from_unsorted(t.label(), Side::Right, reps));
        }
        ([0, 1, 2], Side::Right) => {
            for d1 in 0..p {
                for e2 in 0..q {
                    for f2 in (0..q).step_by(p as usize) {
                        out.push([1, d1, e2, 0, p, f2, 0, 0, q]);
                    }
                }
            }
            for e1 in 0..p {
                for d2 in 0..q {
                    out.push([1, d2, e1, 0, q, 0, 0, 0, p]);
                }
            }
            for e2 in (0..q).step_by(p as usize) {
                for f2 in 0..q {
                    out.push([p, 0, e2, 0, 1, f2, 0, 0, q]);
                }
            }
            for f1 in 0..p {
                out.push([q, 0, 0, 0, 1, f1, 0, 0, p]);
            }
            for d2 in (0..q).step_by(p as usize) {
                out.push([p, d2, 0, 0, q, 0, 0, 0, 1]);
            }
            out.extend(scalar_p_family(p));
            out.push([q, 0, 0, 0, p, 0, 0, 0, 1]);
        }
        ([0, 1, 2], Side::Left) => {
            for f1 in 0..p {
                for d2 in (0..q).step_by(p as usize) {
                    for e2 in 0..q {
                        out.push([q, d2, e2, 0, p, f1, 0, 0, 1]);
                    }
                }
            }
            for e1 in 0..p {
                for f2 in 0..q {
                    out.push([p, 0, e1, 0, q, f2, 0, 0, 1]);
                }
            }
            for d2 in 0..q {
                for e2 in (0..q).step_by(p as usize) {
                    out.push([q, d2, e2, 0, 1, 0, 0, 0, p]);
                }
            }
            for d1 in 0..p {
                out.push([p, d1, 0, 0, 1, 0, 0, 0, q]);
            }
            for f2 in (0..q).step_by(p as usize) {
                out.push([1, 0, 0, 0, q, f2, 0, 0, p]);
            }
            out.extend(scalar_p_family(p));
            // dual of diag(p^2,p,1) in the right table
            out.push([1, 0, 0, 0, p, 0, 0, 0, q]);
        }
        _ => return Err(HeckeError::UnsupportedTable(t.to_string())),
    }
    let reps = out
        .into_iter()
        .map(|e| IntMatrix::from_small_unchecked(3, &e))
        .collect();
    Ok(RepSet::from_unsorted(t.label(), side, reps))
}

fn table_1_p_p_left(p: i64) -> Vec<[i64; 9]> {
    let mut out = vec![[1, 0, 0, 0, p, 0, 0, 0, p]];
    for e1 in 0..p {
        for f1 in 0..p {
            out.push([p, 0, e1, 0, p, f1, 0, 0, 1]);
        }
    }
    for d1 in 0..p {
        out.push([p, d1, 0, 0, 1, 0, 0, 0, p]);
    }
    out
}

/// `[[p,d,e],[0,p,f],[0,0,p]]` with `d f = 0` and `(d,e,f) != 0`.
fn scalar_p_family(p: i64) -> Vec<[i64; 9]> {
    let mut out = Vec::new();
    for d1 in 0..p {
        for e1 in 0..p {
            for f1 in 0..p {
                if d1 * f1 == 0 && (d1, e1, f1) != (0, 0, 0) {
                    out.push([p, d1, e1, 0, p, f1, 0, 0, p]);
                }
            }
        }
    }
    out
}

/// True when every member has the determinantal vector of the set's label.
pub fn members_match_label(set: &RepSet) -> bool {
    let target = set.label.det_vector();
    set.reps.iter().all(|m| Some(det_divisors(m)) == target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmat::lambda_generators;

    fn ty(p: u64, a: [u32; 3]) -> CosetType {
        CosetType::gl3(p, a).unwrap()
    }

    #[test]
    fn type_validation() {
        assert_eq!(CosetType::gl3(4, [0, 0, 1]), Err(HeckeError::NotPrime(4)));
        assert!(matches!(CosetType::gl3(2, [0, 2, 1]), Err(HeckeError::Exponents(_))));
        assert!(matches!(CosetType::new(3, 2, vec![0, 1]), Err(HeckeError::Exponents(_))));
        assert_eq!(CosetType::new(4, 2, vec![0; 4]), Err(HeckeError::Dimension(4)));
        assert_eq!(ty(3, [0, 1, 2]).to_string(), "diag(1,3,3^2)");
    }

    #[test]
    fn candidate_diagonal_sets() {
        assert_eq!(
            candidate_diagonals(&ty(2, [0, 0, 1])),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
        assert_eq!(candidate_diagonals(&ty(2, [0, 0, 0])), vec![vec![0, 0, 0]]);
        let shapes = candidate_diagonals(&ty(2, [0, 1, 2]));
        assert_eq!(shapes.len(), 7);
        assert!(shapes.contains(&vec![1, 1, 1]));
        assert!(shapes.iter().all(|s| s.iter().sum::<u32>() == 3 && s.iter().all(|&d| d <= 2)));
    }

    #[test]
    fn small_enumerations() {
        let b = Budget::default();
        let r = enumerate_right_cosets(&ty(2, [0, 0, 1]), b).unwrap();
        assert_eq!(r.len(), 7);
        assert_eq!(r, explicit_table(&ty(2, [0, 0, 1]), Side::Right).unwrap());
        assert_eq!(enumerate_right_cosets(&ty(3, [0, 1, 2]), b).unwrap().len(), 156);
        let s = enumerate_right_cosets(&ty(2, [1, 1, 1]), b).unwrap();
        assert_eq!(s.reps(), &[IntMatrix::diag_u64(&[2, 2, 2]).unwrap()]);
        assert_eq!(degree(&ty(7, [0, 0, 1]), b).unwrap(), 57);
        assert_eq!(degree(&ty(2, [0, 0, 0]), b).unwrap(), 1);
    }

    #[test]
    fn left_sets() {
        let b = Budget::default();
        let l = enumerate_left_cosets(&ty(2, [0, 1, 1]), b).unwrap();
        assert_eq!(l.len(), 7);
        assert_eq!(l, explicit_table(&ty(2, [0, 1, 1]), Side::Left).unwrap());
        assert_eq!(enumerate_left_cosets(&ty(3, [0, 1, 2]), b).unwrap().len(), 156);
    }

    #[test]
    fn members_share_det_vector() {
        for a in [[0, 0, 1], [0, 1, 1], [0, 1, 2], [0, 2, 2], [1, 2, 3]] {
            let r = enumerate_right_cosets(&ty(3, a), Budget::default()).unwrap();
            assert!(members_match_label(&r));
            assert!(r.reps().iter().all(|m| &hnf_col(m) == m));
        }
    }

    #[test]
    fn closure_under_generators() {
        let gens = lambda_generators(3).unwrap();
        for a in [[0, 0, 1], [0, 1, 2]] {
            for side in [Side::Right, Side::Left] {
                let set = enumerate_cosets(&ty(2, a), side, Budget::default()).unwrap();
                assert!(set.is_closed_under(&gens), "{a:?} {side}");
            }
        }
    }

    #[test]
    fn gl2_degree() {
        for p in [2u64, 3, 5, 7] {
            let t = CosetType::new(2, p, vec![0, 1]).unwrap();
            assert_eq!(degree(&t, Budget::default()).unwrap(), p + 1);
        }
    }

    #[test]
    fn budget_refusal() {
        let err = degree(&ty(11, [0, 2, 4]), Budget::default()).unwrap_err();
        match err {
            HeckeError::BudgetExceeded { required, .. } => assert!(required > 2_000_000_000),
            e => panic!("unexpected {e}"),
        }
        assert!(degree(&ty(2, [0, 1, 2]), Budget(10)).is_err());
    }

    #[test]
    fn unsupported_table() {
        assert!(matches!(
            explicit_table(&ty(2, [0, 2, 4]), Side::Right),
            Err(HeckeError::UnsupportedTable(_))
        ));
    }

    #[test]
    fn non_prime_power_labels() {
        // diag(1,6) in GL(2): sigma_1(6) = 12 right cosets
        let l = CosetLabel::from_diagonal(&[1, 6]).unwrap();
        assert_eq!(degree_of(&l, Budget::default()).unwrap(), 12);
        let l = CosetLabel::from_diagonal(&[1, 2, 6]).unwrap();
        let deg = degree_of(&l, Budget::default()).unwrap();
        // multiplicative over primes: deg diag(1,2,2) * deg diag(1,1,3)
        assert_eq!(deg, 7 * 13);
    }
}
