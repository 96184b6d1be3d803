//! Exact integer matrix kernel for `n = 2, 3`.
//!
//! Matrices are stored with arbitrary precision entries. Every operation first
//! tries a checked `i64` path and falls back to `BigInt` as soon as any
//! intermediate value leaves the safe range, so no result can silently wrap.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HeckeError, Result};

pub(crate) mod kernel {
    //! Dimension-generic algorithms over a checked integer type.

    use super::*;

    /// Integer type usable by the kernel. `i64` values are kept below `2^62`
    /// so gcds and negations can never overflow.
    pub trait KInt: Clone + Integer + Signed + CheckedAdd + CheckedSub + CheckedMul {
        fn in_range(&self) -> bool;
    }

    impl KInt for i64 {
        #[inline]
        fn in_range(&self) -> bool {
            self.unsigned_abs() < (1u64 << 62)
        }
    }

    impl KInt for BigInt {
        #[inline]
        fn in_range(&self) -> bool {
            true
        }
    }

    #[inline]
    pub fn mul<T: KInt>(a: &T, b: &T) -> Option<T> {
        a.checked_mul(b).filter(KInt::in_range)
    }

    #[inline]
    pub fn sub<T: KInt>(a: &T, b: &T) -> Option<T> {
        a.checked_sub(b).filter(KInt::in_range)
    }

    #[inline]
    pub fn add<T: KInt>(a: &T, b: &T) -> Option<T> {
        a.checked_add(b).filter(KInt::in_range)
    }

    pub fn det<T: KInt>(m: &[T], n: usize) -> Option<T> {
        match n {
            2 => sub(&mul(&m[0], &m[3])?, &mul(&m[1], &m[2])?),
            3 => {
                let c0 = sub(&mul(&m[4], &m[8])?, &mul(&m[5], &m[7])?)?;
                let c1 = sub(&mul(&m[3], &m[8])?, &mul(&m[5], &m[6])?)?;
                let c2 = sub(&mul(&m[3], &m[7])?, &mul(&m[4], &m[6])?)?;
                let t = sub(&mul(&m[0], &c0)?, &mul(&m[1], &c1)?)?;
                add(&t, &mul(&m[2], &c2)?)
            }
            _ => unreachable!("dimension is validated on construction"),
        }
    }

    fn gcd_all<'a, T: KInt + 'a>(xs: impl IntoIterator<Item = &'a T>) -> T {
        xs.into_iter().fold(T::zero(), |g, x| g.gcd(x))
    }

    /// `(d_1, ..., d_n)`: gcd of entries, gcd of 2x2 minors, `|det|`.
    pub fn det_divisors<T: KInt>(m: &[T], n: usize) -> Option<Vec<T>> {
        let d1 = gcd_all(m.iter());
        let dn = det(m, n)?.abs();
        if n == 2 {
            return Some(vec![d1, dn]);
        }
        let mut d2 = T::zero();
        for (r0, r1) in [(0, 1), (0, 2), (1, 2)] {
            for (c0, c1) in [(0, 1), (0, 2), (1, 2)] {
                let minor = sub(
                    &mul(&m[3 * r0 + c0], &m[3 * r1 + c1])?,
                    &mul(&m[3 * r0 + c1], &m[3 * r1 + c0])?,
                )?;
                d2 = d2.gcd(&minor);
            }
        }
        Some(vec![d1, d2, dn])
    }

    pub fn mat_mul<T: KInt>(a: &[T], b: &[T], n: usize) -> Option<Vec<T>> {
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = add(&acc, &mul(&a[i * n + k], &b[k * n + j])?)?;
                }
                out.push(acc);
            }
        }
        Some(out)
    }

    /// row_dst -= q * row_src
    fn row_axpy<T: KInt>(m: &mut [T], n: usize, dst: usize, src: usize, q: &T) -> Option<()> {
        if q.is_zero() {
            return Some(());
        }
        for c in 0..n {
            let v = sub(&m[dst * n + c], &mul(q, &m[src * n + c])?)?;
            m[dst * n + c] = v;
        }
        Some(())
    }

    /// In-place column-style Hermite reduction by row operations (left
    /// multiplication by a unimodular matrix). The result is upper triangular
    /// with a positive diagonal and every entry above the diagonal reduced into
    /// `[0, diagonal of its column)`. Returns `None` on overflow; panics on a
    /// singular input, which callers exclude.
    pub fn hnf_col<T: KInt>(m: &mut [T], n: usize) -> Option<()> {
        for col in 0..n {
            loop {
                let pivot = (col..n)
                    .filter(|&r| !m[r * n + col].is_zero())
                    .min_by(|&a, &b| m[a * n + col].abs().cmp(&m[b * n + col].abs()))
                    .expect("nonsingular matrix has a pivot in every column");
                if pivot != col {
                    for c in 0..n {
                        m.swap(pivot * n + c, col * n + c);
                    }
                }
                let mut done = true;
                for r in col + 1..n {
                    if m[r * n + col].is_zero() {
                        continue;
                    }
                    let q = m[r * n + col].div_floor(&m[col * n + col]);
                    row_axpy(m, n, r, col, &q)?;
                    if !m[r * n + col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if m[col * n + col].is_negative() {
                for c in 0..n {
                    m[col * n + c] = -m[col * n + c].clone();
                }
            }
        }
        for j in 1..n {
            for i in 0..j {
                let q = m[i * n + j].div_floor(&m[j * n + j]);
                row_axpy(m, n, i, j, &q)?;
            }
        }
        Some(())
    }
}

fn to_small(entries: &[BigInt]) -> Option<Vec<i64>> {
    entries
        .iter()
        .map(|x| x.to_i64().filter(kernel::KInt::in_range))
        .collect()
}

fn from_small(entries: &[i64]) -> Vec<BigInt> {
    entries.iter().map(|&x| BigInt::from(x)).collect()
}

fn to_biguint(x: &BigInt) -> BigUint {
    x.magnitude().clone()
}

fn check_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(HeckeError::Dimension(n))
    }
}

/// A nonsingular `n x n` integer matrix, `n` in `{2, 3}`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        check_dim(n)?;
        if entries.len() != n * n {
            return Err(HeckeError::EntryCount {
                expected: n * n,
                got: entries.len(),
            });
        }
        let m = IntMatrix { n, entries };
        if m.det().is_zero() {
            return Err(HeckeError::Singular);
        }
        Ok(m)
    }

    pub fn from_i64(n: usize, entries: &[i64]) -> Result<Self> {
        Self::new(n, from_small(entries))
    }

    /// Caller guarantees validity (used for kernel outputs).
    pub(crate) fn from_small_unchecked(n: usize, entries: &[i64]) -> Self {
        IntMatrix {
            n,
            entries: from_small(entries),
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_dim(n)?;
        let entries = (0..n * n)
            .map(|k| if k % (n + 1) == 0 { BigInt::one() } else { BigInt::zero() })
            .collect();
        Ok(IntMatrix { n, entries })
    }

    pub fn diag(diagonal: &[BigInt]) -> Result<Self> {
        let n = diagonal.len();
        check_dim(n)?;
        let mut entries = vec![BigInt::zero(); n * n];
        for (i, x) in diagonal.iter().enumerate() {
            entries[i * n + i] = x.clone();
        }
        Self::new(n, entries)
    }

    pub fn diag_u64(diagonal: &[u64]) -> Result<Self> {
        Self::diag(&diagonal.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.n)
    }

    pub(crate) fn small(&self) -> Option<Vec<i64>> {
        to_small(&self.entries)
    }

    pub fn det(&self) -> BigInt {
        if let Some(s) = self.small() {
            if let Some(d) = kernel::det(&s, self.n) {
                return BigInt::from(d);
            }
        }
        kernel::det(&self.entries, self.n).expect("bigint arithmetic cannot overflow")
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.entry(i, j).is_zero()))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        if let (Some(a), Some(b)) = (self.small(), other.small()) {
            if let Some(c) = kernel::mat_mul(&a, &b, self.n) {
                return IntMatrix::from_small_unchecked(self.n, &c);
            }
        }
        let entries = kernel::mat_mul(&self.entries, &other.entries, self.n)
            .expect("bigint arithmetic cannot overflow");
        IntMatrix { n: self.n, entries }
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| self.entries[(k % n) * n + k / n].clone())
            .collect();
        IntMatrix { n, entries }
    }

    /// `W * transpose(self) * W` with `W` the anti-diagonal permutation.
    pub fn antidiagonal_transpose(&self) -> IntMatrix {
        let n = self.n;
        let entries = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                self.entries[(n - 1 - j) * n + (n - 1 - i)].clone()
            })
            .collect();
        IntMatrix { n, entries }
    }

    pub fn scale(&self, k: &BigInt) -> Result<IntMatrix> {
        IntMatrix::new(self.n, self.entries.iter().map(|x| x * k).collect())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Determinantal divisors `(d_1, ..., d_n)` with `d_k | d_{k+1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DetVector(Vec<BigUint>);

impl DetVector {
    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Elementary divisors `e_1 | e_2 | ...` with `d_k = e_1 ... e_k`.
    pub fn elementary_divisors(&self) -> Vec<BigUint> {
        let mut prev = BigUint::one();
        self.0
            .iter()
            .map(|d| {
                let e = d / &prev;
                prev = d.clone();
                e
            })
            .collect()
    }

    pub(crate) fn from_vec(v: Vec<BigUint>) -> Self {
        DetVector(v)
    }
}

impl fmt::Display for DetVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

pub fn det_divisors(m: &IntMatrix) -> DetVector {
    if let Some(s) = m.small() {
        if let Some(d) = kernel::det_divisors(&s, m.n) {
            return DetVector(d.into_iter().map(|x| BigUint::from(x as u64)).collect());
        }
    }
    let d = kernel::det_divisors(&m.entries, m.n).expect("bigint arithmetic cannot overflow");
    DetVector(d.iter().map(to_biguint).collect())
}

/// The unique column-reduced upper-triangular representative of `Λ·M`.
pub fn hnf_col(m: &IntMatrix) -> IntMatrix {
    if let Some(mut s) = m.small() {
        if kernel::hnf_col(&mut s, m.n).is_some() {
            return IntMatrix::from_small_unchecked(m.n, &s);
        }
    }
    let mut e = m.entries.clone();
    kernel::hnf_col(&mut e, m.n).expect("bigint arithmetic cannot overflow");
    IntMatrix { n: m.n, entries: e }
}

/// The unique row-reduced upper-triangular representative of `M·Λ`.
pub fn hnf_row(m: &IntMatrix) -> IntMatrix {
    hnf_col(&m.antidiagonal_transpose()).antidiagonal_transpose()
}

/// Canonical name `r·diag(1, s_1, ...)` of a Λ-double coset.
///
/// Ordering is by `(n, s, r)`. The sign of the scalar is dropped because
/// `-Id` lies in Λ.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CosetLabel {
    n: usize,
    s: Vec<BigUint>,
    r: BigRational,
}

impl CosetLabel {
    pub fn new(r: BigRational, s: Vec<BigUint>) -> Result<Self> {
        let n = s.len() + 1;
        check_dim(n)?;
        if !r.is_positive() {
            return Err(HeckeError::Label(format!("scalar {r} is not positive")));
        }
        if s.iter().any(Zero::is_zero) {
            return Err(HeckeError::Label("zero elementary divisor".into()));
        }
        if s.windows(2).any(|w| !(&w[1] % &w[0]).is_zero()) {
            return Err(HeckeError::Label("divisor chain is not s_1 | s_2".into()));
        }
        Ok(CosetLabel { n, s, r })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::scalar(n, BigRational::one())
    }

    pub fn scalar(n: usize, r: BigRational) -> Result<Self> {
        check_dim(n)?;
        Self::new(r, vec![BigUint::one(); n - 1])
    }

    /// Label of an integral diagonal matrix (entries in any order).
    pub fn from_diagonal(diagonal: &[u64]) -> Result<Self> {
        let m = IntMatrix::diag_u64(diagonal)?;
        Ok(canonical_label(&m, &BigRational::one()))
    }

    /// Label of `diag(p^alpha_1, ..., p^alpha_n)`.
    pub fn from_exponents(p: u64, alpha: &[u32]) -> Result<Self> {
        let diagonal: Vec<BigInt> = alpha.iter().map(|&a| BigInt::from(p).pow(a)).collect();
        let m = IntMatrix::diag(&diagonal)?;
        Ok(canonical_label(&m, &BigRational::one()))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> &BigRational {
        &self.r
    }

    pub fn s(&self) -> &[BigUint] {
        &self.s
    }

    pub fn is_integral(&self) -> bool {
        self.r.is_integer()
    }

    /// True when the double coset is that of a scalar matrix.
    pub fn is_scalar(&self) -> bool {
        self.s.iter().all(One::is_one)
    }

    /// The same label with scalar part 1.
    pub fn primitive(&self) -> CosetLabel {
        CosetLabel {
            n: self.n,
            s: self.s.clone(),
            r: BigRational::one(),
        }
    }

    pub fn scaled(&self, q: &BigRational) -> CosetLabel {
        assert!(q.is_positive(), "scaling factor must be positive");
        CosetLabel {
            n: self.n,
            s: self.s.clone(),
            r: &self.r * q,
        }
    }

    /// `(r, r s_1, ..., r s_{n-1})` for integral labels.
    pub fn elementary_divisors(&self) -> Option<Vec<BigUint>> {
        if !self.is_integral() {
            return None;
        }
        let r = to_biguint(self.r.numer());
        let mut out = vec![r.clone()];
        out.extend(self.s.iter().map(|s| &r * s));
        Some(out)
    }

    pub fn det_vector(&self) -> Option<DetVector> {
        let e = self.elementary_divisors()?;
        let mut acc = BigUint::one();
        Some(DetVector(
            e.iter()
                .map(|x| {
                    acc = &acc * x;
                    acc.clone()
                })
                .collect(),
        ))
    }

    /// The diagonal representative `r·diag(1, s_1, ...)`, integral labels only.
    pub fn diagonal_matrix(&self) -> Option<IntMatrix> {
        let e = self.elementary_divisors()?;
        let diag: Vec<BigInt> = e.into_iter().map(BigInt::from).collect();
        Some(IntMatrix::diag(&diag).expect("positive diagonal is nonsingular"))
    }

    /// Primes dividing the scalar or any elementary divisor (trial division).
    pub fn prime_support(&self) -> Vec<u64> {
        let mut primes = Vec::new();
        let candidates = [
            to_biguint(self.r.numer()),
            to_biguint(self.r.denom()),
            self.s.last().cloned().unwrap_or_else(BigUint::one),
        ];
        for c in candidates {
            for p in prime_factors(&c) {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort_unstable();
        primes
    }
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.elementary_divisors() {
            Some(e) => {
                write!(f, "diag(")?;
                for (i, x) in e.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            None => {
                write!(f, "{}*diag(1", self.r)?;
                for s in &self.s {
                    write!(f, ",{s}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Prime factors of `x` by trial division.
pub(crate) fn prime_factors(x: &BigUint) -> Vec<u64> {
    let mut x = x.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while !x.is_one() && !x.is_zero() {
        let pb = BigUint::from(p);
        if &pb * &pb > x {
            out.push(x.to_u64().expect("desk-scale labels have word-sized primes"));
            break;
        }
        if (&x % &pb).is_zero() {
            out.push(p);
            while (&x % &pb).is_zero() {
                x /= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    out
}

/// Label of `Λ (scale·M) Λ`, read off the determinantal divisors of `M`.
pub fn canonical_label(m: &IntMatrix, scale: &BigRational) -> CosetLabel {
    assert!(scale.is_positive(), "scale must be positive");
    CosetLabel::from_det_vector(&det_divisors(m)).scaled(scale)
}

impl CosetLabel {
    /// Label of the integral double coset with the given determinantal vector.
    pub fn from_det_vector(d: &DetVector) -> CosetLabel {
        let e = d.elementary_divisors();
        let r = BigRational::from_integer(biguint_to_bigint(&e[0]));
        let s = e[1..].iter().map(|x| x / &e[0]).collect();
        CosetLabel { n: d.len(), s, r }
    }
}

pub fn same_double_coset(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.n, b.n, "dimension mismatch");
    det_divisors(a) == det_divisors(b)
}

/// Deterministic product of `steps` random Λ-generators: elementary row
/// additions by ±1, row swaps and `diag(-1, 1, ..)`.
pub fn random_unimodular(n: usize, seed: u64, steps: usize) -> Result<IntMatrix> {
    check_dim(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = IntMatrix::identity(n)?;
    for _ in 0..steps {
        match rng.gen_range(0..3u8) {
            0 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                for c in 0..n {
                    let v = &m.entries[i * n + c] + &m.entries[j * n + c] * sign;
                    m.entries[i * n + c] = v;
                }
            }
            1 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                for c in 0..n {
                    m.entries.swap(i * n + c, j * n + c);
                }
            }
            _ => {
                for c in 0..n {
                    m.entries[c] = -m.entries[c].clone();
                }
            }
        }
    }
    Ok(m)
}

/// Λ-generators used for closure checks: `E_ij(±1)`, transpositions and
/// `diag(-1, 1, ..)`.
pub fn lambda_generators(n: usize) -> Result<Vec<IntMatrix>> {
    check_dim(n)?;
    let id = IntMatrix::identity(n)?;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for sign in [1i64, -1] {
                let mut m = id.clone();
                m.entries[i * n + j] = BigInt::from(sign);
                out.push(m);
            }
            if i < j {
                let mut m = id.clone();
                m.entries.swap(i * n + i, i * n + j);
                m.entries.swap(j * n + j, j * n + i);
                out.push(m);
            }
        }
    }
    let mut neg = id;
    neg.entries[0] = BigInt::from(-1);
    out.push(neg);
    Ok(out)
}

pub(crate) fn biguint_to_bigint(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3(e: [i64; 9]) -> IntMatrix {
        IntMatrix::from_i64(3, &e).unwrap()
    }

    fn dv(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn det_divisors_of_examples() {
        assert_eq!(det_divisors(&IntMatrix::diag_u64(&[1, 1, 5]).unwrap()).as_slice(), dv(&[1, 1, 5]));
        assert_eq!(det_divisors(&IntMatrix::identity(3).unwrap()).as_slice(), dv(&[1, 1, 1]));
        assert_eq!(det_divisors(&m3([5, 1, 0, 0, 5, 0, 0, 0, 5])).as_slice(), dv(&[1, 5, 125]));
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(IntMatrix::from_i64(3, &[1, 2, 3, 2, 4, 6, 0, 0, 1]), Err(HeckeError::Singular));
        assert_eq!(IntMatrix::from_i64(4, &[1; 16]), Err(HeckeError::Dimension(4)));
        assert!(matches!(IntMatrix::from_i64(3, &[1; 4]), Err(HeckeError::EntryCount { .. })));
    }

    #[test]
    fn hnf_absorbs_permutation() {
        let perm_diag = m3([0, 0, 5, 1, 0, 0, 0, 1, 0]);
        assert_eq!(hnf_col(&perm_diag), IntMatrix::diag_u64(&[1, 1, 5]).unwrap());
    }

    #[test]
    fn hnf_col_bounds() {
        let h = hnf_col(&m3([3, -7, 11, 2, 5, -1, 4, 4, 9]));
        assert!(h.is_upper_triangular());
        let e = |i, j| h.entry(i, j).clone();
        assert!(e(0, 0).is_positive() && e(1, 1).is_positive() && e(2, 2).is_positive());
        assert!(!e(0, 1).is_negative() && e(0, 1) < e(1, 1));
        assert!(!e(0, 2).is_negative() && e(0, 2) < e(2, 2));
        assert!(!e(1, 2).is_negative() && e(1, 2) < e(2, 2));
        assert_eq!(h.det().abs(), m3([3, -7, 11, 2, 5, -1, 4, 4, 9]).det().abs());
    }

    #[test]
    fn hnf_row_bounds_and_fixed_points() {
        let r = hnf_row(&m3([3, -7, 11, 2, 5, -1, 4, 4, 9]));
        assert!(r.is_upper_triangular());
        let e = |i, j| r.entry(i, j).clone();
        assert!(!e(0, 1).is_negative() && e(0, 1) < e(0, 0));
        assert!(!e(0, 2).is_negative() && e(0, 2) < e(0, 0));
        assert!(!e(1, 2).is_negative() && e(1, 2) < e(1, 1));
        let already = m3([5, 3, 4, 0, 2, 1, 0, 0, 7]);
        assert_eq!(hnf_row(&already), already);
    }

    #[test]
    fn hnf_uses_bigint_when_needed() {
        let big = 1i64 << 40;
        let m = m3([big, 1, 0, 0, big, 3, 1, 0, big]);
        let h = hnf_col(&m);
        assert!(h.is_upper_triangular());
        assert_eq!(h.det().abs(), m.det().abs());
        assert!(same_double_coset(&h, &m));
    }

    #[test]
    fn canonical_labels() {
        let one = BigRational::one();
        let l = canonical_label(&IntMatrix::diag_u64(&[1, 5, 25]).unwrap(), &one);
        assert_eq!((l.r().clone(), l.s().to_vec()), (one.clone(), dv(&[5, 25])));
        let l = canonical_label(&IntMatrix::diag_u64(&[5, 5, 5]).unwrap(), &one);
        assert_eq!(l.r(), &BigRational::from_integer(5.into()));
        assert_eq!(l.s(), dv(&[1, 1]));
        let l = canonical_label(&m3([5, 1, 0, 0, 5, 0, 0, 0, 5]), &one);
        assert_eq!((l.r().clone(), l.s().to_vec()), (one, dv(&[5, 25])));
        assert_eq!(l.to_string(), "diag(1,5,25)");
        // diag(2,3) is not in Smith form
        assert_eq!(CosetLabel::from_diagonal(&[2, 3]).unwrap().to_string(), "diag(1,6)");
    }

    #[test]
    fn label_validation() {
        let one = BigRational::one();
        assert!(CosetLabel::new(one.clone(), dv(&[2, 3])).is_err());
        assert!(CosetLabel::new(-one.clone(), dv(&[2, 4])).is_err());
        assert!(CosetLabel::new(one, dv(&[2, 4])).is_ok());
    }

    #[test]
    fn double_coset_membership() {
        let a = IntMatrix::diag_u64(&[1, 1, 7]).unwrap();
        let b = IntMatrix::diag_u64(&[7, 1, 1]).unwrap();
        assert!(same_double_coset(&a, &b));
        assert!(!same_double_coset(
            &IntMatrix::diag_u64(&[1, 5, 25]).unwrap(),
            &IntMatrix::diag_u64(&[5, 5, 5]).unwrap()
        ));
    }

    #[test]
    fn random_unimodular_contract() {
        assert_eq!(random_unimodular(3, 9, 0).unwrap(), IntMatrix::identity(3).unwrap());
        for seed in 0..50 {
            let u = random_unimodular(3, seed, 40).unwrap();
            assert!(u.det().abs().is_one());
            assert_eq!(u, random_unimodular(3, seed, 40).unwrap());
        }
    }

    #[test]
    fn generators_are_unimodular() {
        for n in [2, 3] {
            let gens = lambda_generators(n).unwrap();
            assert_eq!(gens.len(), n * (n - 1) * 2 + n * (n - 1) / 2 + 1);
            assert!(gens.iter().all(|g| g.det().abs().is_one()));
        }
    }

    #[test]
    fn antidiagonal_transpose_reverses_diagonal() {
        let d = m3([1, 2, 3, 0, 4, 5, 0, 0, 6]);
        assert_eq!(d.antidiagonal_transpose(), m3([6, 5, 3, 0, 4, 2, 0, 0, 1]));
        assert_eq!(d.antidiagonal_transpose().antidiagonal_transpose(), d);
    }

    #[test]
    fn prime_support_of_labels() {
        let l = CosetLabel::from_diagonal(&[1, 6, 36]).unwrap();
        assert_eq!(l.prime_support(), vec![2, 3]);
        assert!(CosetLabel::identity(3).unwrap().prime_support().is_empty());
    }
}
