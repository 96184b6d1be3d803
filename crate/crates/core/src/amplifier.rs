//! Amplifier coefficients built from a reference eigenvalue table, and the
//! splitting inequality `|a+b|² ≤ 2|a|² + 2|b|²` on prime and prime-square
//! parts.
//!
//! Eigenvalues are plain inputs. The text format read by
//! [`EigenvalueTable::parse`] has one entry per line:
//!
//! ```text
//! # comment
//! ℓ re [im]
//! ```
//!
//! `ℓ` is a positive decimal integer, `re` and `im` are floats accepted by
//! Rust's `f64` parser, separated by ASCII whitespace. A missing `im` means 0.
//! Blank lines and anything after `#` are ignored. A repeated `ℓ` is an error.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HeckeError, Result};

/// Relative tolerance for amplitude comparisons.
pub const TOLERANCE: f64 = 1e-12;

/// Sieve of Eratosthenes up to and including `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// `π(x)`.
pub fn prime_count(x: u64) -> usize {
    primes_up_to(x).len()
}

/// Largest integer `r` with `r² ≤ x`.
pub fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Eigenvalue surrogate `ℓ ↦ c(ℓ)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EigenvalueTable {
    values: BTreeMap<u64, Complex64>,
}

impl EigenvalueTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, ell: u64, value: Complex64) {
        self.values.insert(ell, value);
    }

    pub fn get(&self, ell: u64) -> Result<Complex64> {
        self.values.get(&ell).copied().ok_or(HeckeError::MissingEigenvalue(ell))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Constant table on the amplifier support of length `length`.
    pub fn constant(length: u64, value: Complex64) -> Self {
        let mut t = Self::new();
        for ell in support(length) {
            t.insert(ell, value);
        }
        t
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = body.split_ascii_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields.len() > 3 {
                return Err(HeckeError::Parse { line, msg: format!("expected 'l re [im]', got {} fields", fields.len()) });
            }
            let ell: u64 = fields[0]
                .parse()
                .map_err(|_| HeckeError::Parse { line, msg: format!("bad index '{}'", fields[0]) })?;
            if ell == 0 {
                return Err(HeckeError::Parse { line, msg: "index must be positive".into() });
            }
            let float = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| HeckeError::Parse { line, msg: format!("bad number '{s}'") })
            };
            if fields.len() == 1 {
                return Err(HeckeError::Parse { line, msg: "missing real part".into() });
            }
            let re = float(fields[1])?;
            let im = if fields.len() == 3 { float(fields[2])? } else { 0.0 };
            if table.values.insert(ell, Complex64::new(re, im)).is_some() {
                return Err(HeckeError::Parse { line, msg: format!("duplicate index {ell}") });
            }
        }
        Ok(table)
    }

    /// Inverse of [`EigenvalueTable::parse`]; floats use Rust's shortest
    /// round-trip formatting.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (ell, v) in &self.values {
            writeln!(out, "{ell} {:?} {:?}", v.re, v.im).expect("write to string");
        }
        out
    }
}

/// Indices `ℓ` where `α_ℓ` may be nonzero: primes `ℓ ≤ √L` and prime
/// squares `ℓ ≤ L`, sorted.
pub fn support(length: u64) -> Vec<u64> {
    let primes = primes_up_to(isqrt(length));
    let mut out: Vec<u64> = primes.iter().copied().chain(primes.iter().map(|q| q * q)).collect();
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct AmplifierCoefficients {
    pub length: u64,
    pub alpha: BTreeMap<u64, Complex64>,
}

impl AmplifierCoefficients {
    /// Primes in the support, i.e. the indices of the linear part.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        let r = isqrt(self.length);
        self.alpha.keys().copied().filter(move |&l| l <= r && crate::coset::is_prime(l))
    }
}

/// `α_ℓ = conj c₀(ℓ)` for primes `ℓ ≤ √L`, `α_{q²} = −1` for primes `q ≤ √L`.
pub fn build_alpha(length: u64, c0: &EigenvalueTable) -> Result<AmplifierCoefficients> {
    let mut alpha = BTreeMap::new();
    for q in primes_up_to(isqrt(length)) {
        alpha.insert(q, c0.get(q)?.conj());
        alpha.insert(q * q, Complex64::new(-1.0, 0.0));
    }
    Ok(AmplifierCoefficients { length, alpha })
}

fn partial_sum(alpha: &AmplifierCoefficients, c: &EigenvalueTable, squares: bool) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (&ell, a) in &alpha.alpha {
        let is_square = isqrt(ell).pow(2) == ell;
        if is_square == squares {
            sum += a * c.get(ell)?;
        }
    }
    Ok(sum)
}

/// `A = |Σ α_ℓ c(ℓ)|²`.
pub fn amplitude(alpha: &AmplifierCoefficients, c: &EigenvalueTable) -> Result<f64> {
    Ok((partial_sum(alpha, c, false)? + partial_sum(alpha, c, true)?).norm_sqr())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitBound {
    pub amplitude: f64,
    pub prime_part: f64,
    pub square_part: f64,
}

impl SplitBound {
    pub fn bound(&self) -> f64 {
        2.0 * self.prime_part + 2.0 * self.square_part
    }

    pub fn holds(&self) -> bool {
        self.amplitude <= self.bound() * (1.0 + TOLERANCE) + f64::MIN_POSITIVE
    }
}

/// Both sides of `A ≤ 2|Σ_p α_p c(p)|² + 2|Σ_p α_{p²} c(p²)|²`.
pub fn split_bound_check(alpha: &AmplifierCoefficients, c: &EigenvalueTable) -> Result<SplitBound> {
    let a = partial_sum(alpha, c, false)?;
    let b = partial_sum(alpha, c, true)?;
    Ok(SplitBound { amplitude: (a + b).norm_sqr(), prime_part: a.norm_sqr(), square_part: b.norm_sqr() })
}

/// Real `GL(2)` surrogate with `λ(q) = 2cos θ_q` for random angles and
/// `λ(q²) = λ(q)² − 1`, on the support of length `length`.
pub fn gl2_surrogate(length: u64, seed: u64) -> EigenvalueTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = EigenvalueTable::new();
    for q in primes_up_to(isqrt(length)) {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::PI);
        let lq = 2.0 * theta.cos();
        t.insert(q, Complex64::new(lq, 0.0));
        t.insert(q * q, Complex64::new(lq * lq - 1.0, 0.0));
    }
    t
}

/// Complex table with independent uniform entries in the unit square.
pub fn random_table(length: u64, seed: u64) -> EigenvalueTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = EigenvalueTable::new();
    for ell in support(length) {
        t.insert(ell, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    }
    t
}

/// `|x − y| ≤ TOLERANCE · max(|x|, |y|, 1)`.
pub fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= TOLERANCE * x.abs().max(y.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(prime_count(1), 0);
        assert_eq!(prime_count(100), 25);
        assert_eq!(isqrt(24), 4);
        assert_eq!(isqrt(25), 5);
    }

    #[test]
    fn alpha_examples() {
        let one = Complex64::new(1.0, 0.0);
        let a = build_alpha(4, &EigenvalueTable::constant(4, one)).unwrap();
        assert_eq!(a.alpha.keys().copied().collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(a.alpha[&4], -one);
        assert!(build_alpha(1, &EigenvalueTable::new()).unwrap().alpha.is_empty());
        let a = build_alpha(25, &EigenvalueTable::constant(25, one)).unwrap();
        for (l, v) in [(2, 1.0), (3, 1.0), (4, -1.0), (5, 1.0), (9, -1.0), (25, -1.0)] {
            assert_eq!(a.alpha[&l], Complex64::new(v, 0.0));
        }
        assert_eq!(a.alpha.len(), 6);
        assert_eq!(a.primes().collect::<Vec<_>>(), vec![2, 3, 5]);
    }

    #[test]
    fn missing_value_is_named() {
        let mut t = EigenvalueTable::new();
        t.insert(2, Complex64::new(1.0, 0.0));
        assert!(matches!(build_alpha(9, &t), Err(HeckeError::MissingEigenvalue(3))));
    }

    #[test]
    fn cancellation() {
        let one = Complex64::new(1.0, 0.0);
        let c = EigenvalueTable::constant(4, one);
        let a = build_alpha(4, &c).unwrap();
        assert_eq!(amplitude(&a, &c).unwrap(), 0.0);
        let empty = build_alpha(1, &c).unwrap();
        assert_eq!(amplitude(&empty, &c).unwrap(), 0.0);
    }

    #[test]
    fn surrogate_amplitude() {
        for (l, want) in [(25, 9.0), (100, 16.0)] {
            let c0 = gl2_surrogate(l, 7);
            let a = build_alpha(l, &c0).unwrap();
            assert!(close(amplitude(&a, &c0).unwrap(), want));
        }
    }

    #[test]
    fn split_bound_prime_only() {
        let c = random_table(100, 3);
        let mut a = build_alpha(100, &c).unwrap();
        a.alpha.retain(|&l, _| isqrt(l).pow(2) != l);
        let s = split_bound_check(&a, &c).unwrap();
        assert!(s.holds());
        assert!(close(s.bound(), 2.0 * s.amplitude));
    }

    #[test]
    fn parse_and_write() {
        let t = EigenvalueTable::parse("# header\n2 1.5\n\n3 -0.25 2e-1 # trailing\n").unwrap();
        assert_eq!(t.get(2).unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(t.get(3).unwrap(), Complex64::new(-0.25, 0.2));
        assert_eq!(EigenvalueTable::parse(&t.to_text()).unwrap(), t);
        assert_eq!(t.to_text(), "2 1.5 0.0\n3 -0.25 0.2\n");
        for bad in ["2", "x 1", "0 1", "2 1 1 1", "2 nan", "2 1\n2 3"] {
            assert!(matches!(EigenvalueTable::parse(bad), Err(HeckeError::Parse { .. })), "{bad}");
        }
        match EigenvalueTable::parse("2 1\n\n3 q").unwrap_err() {
            HeckeError::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("{e}"),
        }
    }
}
