//! Exact Hecke algebra computations for `GL(3)` (and `GL(2)`) at prime powers.
//!
//! * [`intmat`]: determinantal divisors, Hermite reduction, canonical labels.
//! * [`coset`]: right/left coset representatives and degrees.
//! * [`hecke`]: convolution of double cosets, Hall coefficients, linearizations.
//! * [`amplifier`]: amplifier coefficients and the splitting inequality.
//! * [`report`] and [`json`]: verification reports and the JSON wire format.

pub mod amplifier;
pub mod coset;
pub mod error;
pub mod hecke;
pub mod intmat;
pub mod json;
pub mod report;

pub use coset::{Budget, CosetType, RepSet, Side};
pub use error::{HeckeError, Result};
pub use hecke::{HeckeAlgebra, HeckeElement};

pub use intmat::{CosetLabel, DetVector, IntMatrix};
