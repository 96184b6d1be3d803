//! Lagrange interpolation over the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial in `p` with coefficients listed from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    fn trimmed(mut c: Vec<BigRational>) -> Poly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    /// The unique polynomial of degree below `points.len()` through the points.
    pub fn interpolate(points: &[(u64, BigRational)]) -> Poly {
        let mut acc = vec![BigRational::zero(); points.len()];
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let xj = BigRational::from_integer(BigInt::from(*xj));
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                for (k, b) in basis.iter().enumerate() {
                    next[k + 1] += b;
                    next[k] -= b * &xj;
                }
                basis = next;
                denom *= BigRational::from_integer(BigInt::from(*xi)) - xj;
            }
            for (k, b) in basis.iter().enumerate() {
                acc[k] += b * yi / &denom;
            }
        }
        Poly::trimmed(acc)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let a = c.abs();
            let show = !a.is_one() || k == 0;
            if show {
                if a.is_integer() {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "p")?,
                _ => write!(f, "p^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(f: impl Fn(u64) -> i64, xs: &[u64]) -> Vec<(u64, BigRational)> {
        xs.iter().map(|&x| (x, BigRational::from_integer(f(x).into()))).collect()
    }

    #[test]
    fn recovers_cubic() {
        let p = Poly::interpolate(&pts(|x| (x * x * x) as i64 - 2 * x as i64 + 5, &[2, 3, 5, 7, 11]));
        assert_eq!(p.to_string(), "p^3-2p+5");
        assert_eq!(p.degree(), 3);
        assert!(p.is_integral());
    }

    #[test]
    fn constants_and_fractions() {
        assert_eq!(Poly::interpolate(&pts(|_| 1, &[2, 3])).to_string(), "1");
        assert_eq!(Poly::interpolate(&pts(|_| 0, &[2, 3])).to_string(), "0");
        let p = Poly::interpolate(&pts(|x| (x * (x + 1) / 2) as i64, &[1, 2, 3]));
        assert_eq!(p.to_string(), "(1/2)p^2+(1/2)p");
        assert!(!p.is_integral());
    }
}
