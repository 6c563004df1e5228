//! Exact phases: integer exponents of the primitive M-th root of unity.

use core::f64::consts::TAU;
use core::fmt;
use core::ops::{Mul, Neg};

use num_complex::Complex64;

/// An M-th root of unity stored as its exponent: the value
/// `exp(i * 2 pi * e / M)` with `0 <= e < M`.
///
/// Multiplying phases adds exponents modulo M. All sub-period phases live in
/// the same exponent group: a d-th root of unity is represented as
/// `e * (M / d)` modulo M, so no fractional bookkeeping is ever needed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseExp {
    dimension: u64,
    exponent: u64,
}

impl PhaseExp {
    /// Phase `omega_M^e`, reducing a signed exponent into `[0, M)`.
    pub fn new(dimension: u64, exponent: i64) -> Self {
        assert!(dimension > 0, "phase dimension must be positive");
        Self { dimension, exponent: exponent.rem_euclid(dimension as i64) as u64 }
    }

    /// Phase `omega_M^e` from an unsigned exponent.
    pub fn from_exponent(dimension: u64, exponent: u64) -> Self {
        assert!(dimension > 0, "phase dimension must be positive");
        Self { dimension, exponent: exponent % dimension }
    }

    /// The unit phase.
    pub fn zero(dimension: u64) -> Self {
        Self::from_exponent(dimension, 0)
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    /// Exponent in `[0, M)`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// True for the unit phase.
    pub fn is_zero(&self) -> bool {
        self.exponent == 0
    }

    /// Integer power (negative powers conjugate).
    pub fn pow(&self, n: i64) -> Self {
        let m = self.dimension as i128;
        let e = (self.exponent as i128 * n as i128).rem_euclid(m) as u64;
        Self { dimension: self.dimension, exponent: e }
    }

    /// Float view of the phase as a complex number on the unit circle.
    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.exponent as f64 / self.dimension as f64)
    }
}

impl Mul for PhaseExp {
    type Output = PhaseExp;

    fn mul(self, rhs: PhaseExp) -> PhaseExp {
        assert_eq!(self.dimension, rhs.dimension, "phase dimensions differ");
        PhaseExp {
            dimension: self.dimension,
            exponent: (self.exponent + rhs.exponent) % self.dimension,
        }
    }
}

impl Neg for PhaseExp {
    type Output = PhaseExp;

    /// The conjugate phase `omega_M^{-e}`.
    fn neg(self) -> PhaseExp {
        PhaseExp {
            dimension: self.dimension,
            exponent: (self.dimension - self.exponent) % self.dimension,
        }
    }
}

impl fmt::Display for PhaseExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.exponent, self.dimension)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_wraps_modulo_dimension() {
        let a = PhaseExp::new(6, 4);
        let b = PhaseExp::new(6, 5);
        assert_eq!((a * b).exponent(), 3);
        assert_eq!((-a).exponent(), 2);
        assert_eq!(PhaseExp::new(6, -1).exponent(), 5);
        assert_eq!(a.pow(-2).exponent(), 4);
        assert!(PhaseExp::zero(6).is_zero());
    }

    #[test]
    fn float_view_lands_on_unit_circle() {
        let p = PhaseExp::new(4, 1);
        let v = p.value();
        assert!((v.re).abs() < 1e-12);
        assert!((v.im - 1.0).abs() < 1e-12);
    }
}
