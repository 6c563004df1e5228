//! Monomial operators: unitaries with exactly one nonzero entry per row and
//! column, each a root of unity. Stored as a permutation plus a phase map,
//! so products, powers, periods, and commutators are all exact.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numtheory::{gcd, mul_mod};
use crate::phase::PhaseExp;
use crate::state::FlatPhaseState;
use crate::{Error, Result};

/// An M x M monomial unitary acting as `A|x> = omega_M^{phase(x)} |perm(x)>`
/// (per-source-position phases, "row" convention).
///
/// Unitarity is automatic: the permutation is a bijection and every entry
/// has unit modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOperator {
    dimension: u64,
    perm: Vec<u64>,
    phase: Vec<u64>,
}

impl MonomialOperator {
    /// The identity on M points.
    pub fn identity(dimension: u64) -> Self {
        assert!(dimension > 0, "operator dimension must be positive");
        Self {
            dimension,
            perm: (0..dimension).collect(),
            phase: vec![0; dimension as usize],
        }
    }

    /// Builds an operator from an explicit permutation and phase table,
    /// checking that `perm` is a bijection on `[0, M)`.
    pub fn from_parts(dimension: u64, perm: Vec<u64>, phase: Vec<u64>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroModulus);
        }
        if perm.len() as u64 != dimension || phase.len() as u64 != dimension {
            return Err(Error::DimensionMismatch {
                left: perm.len() as u64,
                right: dimension,
            });
        }
        let mut seen = vec![false; dimension as usize];
        for &y in &perm {
            if y >= dimension || seen[y as usize] {
                return Err(Error::NotPermutation);
            }
            seen[y as usize] = true;
        }
        let phase = phase.into_iter().map(|e| e % dimension).collect();
        Ok(Self { dimension, perm, phase })
    }

    /// The clock operator of sub-period `d`: diagonal with
    /// `phase(x) = x * (M / d) mod M`, i.e. eigenvalue `omega_d^x` on `|x>`.
    ///
    /// `d = M` gives the full clock (eigenvalue `omega_M^x`); `d = 1` the
    /// identity. Rejects `d` that does not divide M.
    pub fn clock(dimension: u64, d: u64) -> Result<Self> {
        if dimension == 0 || d == 0 {
            return Err(Error::ZeroModulus);
        }
        if !dimension.is_multiple_of(d) {
            return Err(Error::NotDivisor { divisor: d, dimension });
        }
        let step = dimension / d;
        let phase = (0..dimension).map(|x| mul_mod(x, step, dimension)).collect();
        Ok(Self { dimension, perm: (0..dimension).collect(), phase })
    }

    /// The shift operator by `s` steps: `|x> -> |x - s mod M>`, zero phases.
    /// `s` is taken modulo M; `shift(M, 1)` is the elementary shift.
    pub fn shift(dimension: u64, s: i64) -> Self {
        assert!(dimension > 0, "operator dimension must be positive");
        let s = s.rem_euclid(dimension as i64) as u64;
        let perm = (0..dimension).map(|x| (x + dimension - s) % dimension).collect();
        Self { dimension, perm, phase: vec![0; dimension as usize] }
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    /// Image position of each source position.
    pub fn permutation(&self) -> &[u64] {
        &self.perm
    }

    /// Phase exponent picked up at each source position.
    pub fn phases(&self) -> &[u64] {
        &self.phase
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(x, &y)| x as u64 == y)
            && self.phase.iter().all(|&e| e == 0)
    }

    /// `Some(e)` when the operator is the scalar `omega_M^e` times the
    /// identity.
    pub fn scalar_exponent(&self) -> Option<u64> {
        if !self.perm.iter().enumerate().all(|(x, &y)| x as u64 == y) {
            return None;
        }
        let e = self.phase[0];
        self.phase.iter().all(|&p| p == e).then_some(e)
    }

    /// Exact product `self * rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.dimension != rhs.dimension {
            return Err(Error::DimensionMismatch { left: self.dimension, right: rhs.dimension });
        }
        let m = self.dimension;
        let mut perm = Vec::with_capacity(m as usize);
        let mut phase = Vec::with_capacity(m as usize);
        for x in 0..m as usize {
            let mid = rhs.perm[x] as usize;
            perm.push(self.perm[mid]);
            phase.push((rhs.phase[x] + self.phase[mid]) % m);
        }
        Ok(Self { dimension: m, perm, phase })
    }

    /// The inverse operator.
    pub fn inverse(&self) -> Self {
        let m = self.dimension;
        let mut perm = vec![0u64; m as usize];
        let mut phase = vec![0u64; m as usize];
        for x in 0..m as usize {
            let y = self.perm[x] as usize;
            perm[y] = x as u64;
            phase[y] = (m - self.phase[x]) % m;
        }
        Self { dimension: m, perm, phase }
    }

    /// Exact n-th power by repeated squaring; negative `n` powers the
    /// inverse.
    pub fn power(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut n = n.unsigned_abs();
        let mut acc = Self::identity(self.dimension);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&base).expect("equal dimensions");
            }
            base = base.compose(&base).expect("equal dimensions");
            n >>= 1;
        }
        acc
    }

    /// The smallest `n >= 1` with `A^n = 1`.
    ///
    /// Per permutation cycle of length `l` with accumulated phase exponent
    /// `c`, the power `A^(l t)` is diagonal on the cycle with phase `t c`,
    /// so the cycle's minimal period is `l * M / gcd(c, M)`; the operator
    /// period is the lcm over cycles.
    pub fn period(&self) -> u64 {
        let m = self.dimension;
        let mut visited = vec![false; m as usize];
        let mut period: u128 = 1;
        for start in 0..m as usize {
            if visited[start] {
                continue;
            }
            let mut len: u64 = 0;
            let mut acc: u64 = 0;
            let mut x = start;
            while !visited[x] {
                visited[x] = true;
                acc = (acc + self.phase[x]) % m;
                x = self.perm[x] as usize;
                len += 1;
            }
            let cycle_period = len as u128 * (m / gcd(acc, m)) as u128;
            period = lcm_u128(period, cycle_period);
        }
        u64::try_from(period).expect("operator period exceeds u64")
    }

    /// The exponent `c` with `self * rhs = rhs * self * omega_M^c`, i.e. the
    /// scalar by which the two products differ. Errors with
    /// [`Error::NotCentral`] when the commutator is not a scalar.
    pub fn commutation_exponent(&self, rhs: &Self) -> Result<PhaseExp> {
        let ab = self.compose(rhs)?;
        let ba = rhs.compose(self)?;
        if ab.perm != ba.perm {
            return Err(Error::NotCentral);
        }
        let m = self.dimension;
        let c = (ab.phase[0] + m - ba.phase[0]) % m;
        for x in 1..m as usize {
            if (ab.phase[x] + m - ba.phase[x]) % m != c {
                return Err(Error::NotCentral);
            }
        }
        Ok(PhaseExp::from_exponent(m, c))
    }

    /// Applies the operator to a flat-phase state; the support is permuted
    /// and the phases shift, so the form is preserved exactly.
    pub fn apply(&self, state: &FlatPhaseState) -> Result<FlatPhaseState> {
        if self.dimension != state.dimension() {
            return Err(Error::DimensionMismatch {
                left: self.dimension,
                right: state.dimension(),
            });
        }
        let m = self.dimension;
        let pairs: Vec<(u64, u64)> = state
            .support()
            .iter()
            .zip(state.phases())
            .map(|(&x, &e)| (self.perm[x as usize], (e + self.phase[x as usize]) % m))
            .collect();
        FlatPhaseState::from_parts(m, pairs)
    }

    /// `Some(e)` when the state is an exact eigenstate with eigenvalue
    /// `omega_M^e`; `None` otherwise (including on dimension mismatch).
    pub fn eigenphase(&self, state: &FlatPhaseState) -> Option<PhaseExp> {
        let image = self.apply(state).ok()?;
        if image.support() != state.support() {
            return None;
        }
        let m = self.dimension;
        let e = (image.phases()[0] + m - state.phases()[0]) % m;
        for (i, (&a, &b)) in image.phases().iter().zip(state.phases()).enumerate() {
            if i > 0 && (a + m - b) % m != e {
                return None;
            }
        }
        Some(PhaseExp::from_exponent(m, e))
    }

    /// Dense M x M matrix (row-major) for float cross-checks. Intended for
    /// small M only.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let m = self.dimension as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); m * m];
        for x in 0..m {
            let row = self.perm[x] as usize;
            out[row * m + x] = PhaseExp::from_exponent(self.dimension, self.phase[x]).value();
        }
        out
    }
}

fn lcm_u128(a: u128, b: u128) -> u128 {
    let mut x = a;
    let mut y = b;
    while y != 0 {
        let t = y;
        y = x % y;
        x = t;
    }
    a / x * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::BiFactorization;

    #[test]
    fn clock_phase_tables() {
        let u = MonomialOperator::clock(6, 6).unwrap();
        assert_eq!(u.phases(), &[0, 1, 2, 3, 4, 5]);
        let t3 = MonomialOperator::clock(6, 3).unwrap();
        assert_eq!(t3.phases(), &[0, 2, 4, 0, 2, 4]);
        assert!(MonomialOperator::clock(6, 1).unwrap().is_identity());
        assert_eq!(
            MonomialOperator::clock(6, 4),
            Err(Error::NotDivisor { divisor: 4, dimension: 6 })
        );
    }

    #[test]
    fn shift_permutation_table() {
        let v = MonomialOperator::shift(6, 1);
        assert_eq!(v.permutation(), &[5, 0, 1, 2, 3, 4]);
        assert!(MonomialOperator::shift(6, 0).is_identity());
        let back = MonomialOperator::shift(6, -1);
        assert!(v.compose(&back).unwrap().is_identity());
        // N1 L1 = 3 for the split (2, 3) of 6.
        let s3 = MonomialOperator::shift(6, 3);
        assert_eq!(s3.permutation(), &[3, 4, 5, 0, 1, 2]);
    }

    #[test]
    fn compose_and_inverse() {
        let u = MonomialOperator::clock(6, 6).unwrap();
        let v = MonomialOperator::shift(6, 1);
        let id = MonomialOperator::identity(6);
        assert_eq!(u.compose(&id).unwrap(), u);
        assert!(u.compose(&u.inverse()).unwrap().is_identity());
        assert!(v.compose(&v.inverse()).unwrap().is_identity());
        // U V and V U differ by the global phase omega_6.
        assert_eq!(v.commutation_exponent(&u).unwrap().exponent(), 1);
    }

    #[test]
    fn power_examples() {
        let m = 105;
        let v = MonomialOperator::shift(m, 1);
        assert!(v.power(m as i64).is_identity());
        assert!(v.power(0).is_identity());
        let u = MonomialOperator::clock(m, m).unwrap();
        assert_eq!(u.power(35), MonomialOperator::clock(m, 3).unwrap());
        assert!(u.power(-3).compose(&u.power(3)).unwrap().is_identity());
    }

    #[test]
    fn periods_are_minimal() {
        for (m, d) in [(6u64, 1u64), (6, 2), (6, 3), (6, 6), (105, 35), (105, 105)] {
            assert_eq!(MonomialOperator::clock(m, d).unwrap().period(), d);
        }
        assert_eq!(MonomialOperator::identity(9).period(), 1);
        // Shift by N1 L1 = 70 for the constituent 3 of 105 has period 3.
        assert_eq!(MonomialOperator::shift(105, 70).period(), 3);
        assert_eq!(MonomialOperator::shift(105, 1).period(), 105);
    }

    #[test]
    fn commutation_exponents() {
        let m = 15;
        let u = MonomialOperator::clock(m, m).unwrap();
        let v = MonomialOperator::shift(m, 1);
        // tau(M) T(1) = T(1) tau(M) omega^{-1}
        assert_eq!(u.commutation_exponent(&v).unwrap(), PhaseExp::new(m, -1));

        let split = BiFactorization::new(3, 5).unwrap();
        let tau2 = MonomialOperator::clock(m, split.m2()).unwrap();
        let t1 = MonomialOperator::shift(m, split.idempotent1() as i64);
        // Commuting pair defining the kq basis.
        assert_eq!(tau2.commutation_exponent(&t1).unwrap().exponent(), 0);
        // Same-index pair picks up omega_{M1} = omega_M^{L1}.
        let tau1 = MonomialOperator::clock(m, split.m1()).unwrap();
        assert_eq!(
            t1.commutation_exponent(&tau1).unwrap().exponent(),
            split.cofactor1()
        );
    }

    #[test]
    fn non_scalar_commutator_is_rejected() {
        // A transposition against the full clock does not commute up to a
        // scalar.
        let swap = MonomialOperator::from_parts(4, vec![1, 0, 2, 3], vec![0; 4]).unwrap();
        let clock = MonomialOperator::clock(4, 4).unwrap();
        assert_eq!(swap.commutation_exponent(&clock), Err(Error::NotCentral));
    }

    #[test]
    fn from_parts_validates() {
        assert_eq!(
            MonomialOperator::from_parts(3, vec![0, 0, 2], vec![0; 3]),
            Err(Error::NotPermutation)
        );
        assert_eq!(
            MonomialOperator::from_parts(3, vec![0, 1], vec![0; 3]),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
    }
}
