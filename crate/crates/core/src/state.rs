//! Flat-phase state vectors and exact overlaps.
//!
//! Every state handled here has uniform-magnitude amplitudes: a support set,
//! one root-of-unity phase per supported position, and the implicit
//! normalization `1 / sqrt(|support|)`. Position states, momentum states,
//! and every split or completely factorized basis state have this form, and
//! monomial operators preserve it, so overlaps can be evaluated in exact
//! exponent arithmetic end to end.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::numtheory::mul_mod;
use crate::phase::PhaseExp;
use crate::{Error, Result};

/// A unit vector with support `S` and amplitudes
/// `omega_M^{phase(x)} / sqrt(|S|)` for `x` in `S`.
///
/// The support is kept sorted; the squared norm is 1 by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatPhaseState {
    dimension: u64,
    support: Vec<u64>,
    phase: Vec<u64>,
}

impl FlatPhaseState {
    /// The basis state `|x>`.
    pub fn position(dimension: u64, x: u64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroModulus);
        }
        if x >= dimension {
            return Err(Error::OutOfRange { value: x, bound: dimension });
        }
        Ok(Self { dimension, support: vec![x], phase: vec![0] })
    }

    /// The momentum state `|p_k> = (1/sqrt(M)) sum_x omega_M^{k x} |x>`,
    /// the eigenstate of the elementary shift with eigenvalue `omega_M^k`.
    /// `k` is taken modulo M.
    pub fn momentum(dimension: u64, k: u64) -> Self {
        assert!(dimension > 0, "state dimension must be positive");
        let k = k % dimension;
        let support: Vec<u64> = (0..dimension).collect();
        let phase = support.iter().map(|&x| mul_mod(k, x, dimension)).collect();
        Self { dimension, support, phase }
    }

    /// Builds a state from `(position, phase exponent)` pairs. Positions
    /// must be distinct, in range, and non-empty; the pairs are sorted by
    /// position and phases reduced modulo M.
    pub fn from_parts(dimension: u64, mut pairs: Vec<(u64, u64)>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroModulus);
        }
        if pairs.is_empty() {
            return Err(Error::OutOfRange { value: 0, bound: 0 });
        }
        pairs.sort_unstable_by_key(|&(x, _)| x);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::NotPermutation);
            }
        }
        if pairs.last().unwrap().0 >= dimension {
            return Err(Error::OutOfRange { value: pairs.last().unwrap().0, bound: dimension });
        }
        let support = pairs.iter().map(|&(x, _)| x).collect();
        let phase = pairs.iter().map(|&(_, e)| e % dimension).collect();
        Ok(Self { dimension, support, phase })
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    /// Supported positions, sorted ascending.
    pub fn support(&self) -> &[u64] {
        &self.support
    }

    /// Phase exponents parallel to [`Self::support`].
    pub fn phases(&self) -> &[u64] {
        &self.phase
    }

    /// Number of supported positions.
    pub fn support_len(&self) -> u64 {
        self.support.len() as u64
    }

    /// The same ray with the phase of the smallest supported position
    /// rotated to zero. Two states are equal up to global phase exactly
    /// when their canonical forms are equal.
    pub fn canonical(&self) -> Self {
        let m = self.dimension;
        let offset = self.phase[0];
        Self {
            dimension: m,
            support: self.support.clone(),
            phase: self.phase.iter().map(|&e| (e + m - offset) % m).collect(),
        }
    }

    /// Exact equality of rays (states up to a global phase).
    pub fn eq_up_to_global_phase(&self, other: &Self) -> bool {
        self.dimension == other.dimension && self.canonical() == other.canonical()
    }

    /// The inner product `<self|other>` as an exact sum of roots of unity.
    pub fn overlap(&self, other: &Self) -> Result<Overlap> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch { left: self.dimension, right: other.dimension });
        }
        let m = self.dimension;
        let mut terms = Vec::new();
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.support.len() && j < other.support.len() {
            match self.support[i].cmp(&other.support[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    terms.push((other.phase[j] + m - self.phase[i]) % m);
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Overlap {
            dimension: m,
            norm_product: self.support_len() as u128 * other.support_len() as u128,
            terms,
        })
    }

    /// Dense complex vector view for float cross-checks.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dimension as usize];
        let scale = 1.0 / libm::sqrt(self.support.len() as f64);
        for (&x, &e) in self.support.iter().zip(&self.phase) {
            out[x as usize] = PhaseExp::from_exponent(self.dimension, e).value() * scale;
        }
        out
    }
}

/// An inner product of two flat-phase states, kept in exact form:
/// `(1 / sqrt(norm_product)) * sum_i omega_M^{terms[i]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    dimension: u64,
    norm_product: u128,
    terms: Vec<u64>,
}

/// The closed form of an [`Overlap`] when one exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OverlapForm {
    /// The sum of terms is exactly zero.
    Zero,
    /// The overlap equals `count * omega^exponent / sqrt(norm_product)`.
    Phase { count: u64, exponent: PhaseExp },
}

impl Overlap {
    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    /// Product of the two support sizes (the squared inverse normalization).
    pub fn norm_product(&self) -> u128 {
        self.norm_product
    }

    /// The root-of-unity exponents being summed, one per common position.
    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    /// Detects the exact value of the sum when it is a single phase (all
    /// term exponents equal) or exactly zero (no terms, or equal
    /// multiplicities over a full coset of a nontrivial subgroup of `Z_M`,
    /// whose roots of unity sum to zero). Returns `None` when the sum has
    /// no such closed form and only the float view applies.
    pub fn closed_form(&self) -> Option<OverlapForm> {
        if self.terms.is_empty() {
            return Some(OverlapForm::Zero);
        }
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for &e in &self.terms {
            *counts.entry(e).or_insert(0) += 1;
        }
        if counts.len() == 1 {
            let (&e, &c) = counts.iter().next().unwrap();
            return Some(OverlapForm::Phase {
                count: c,
                exponent: PhaseExp::from_exponent(self.dimension, e),
            });
        }
        let uniform = counts.values().all(|&c| c == *counts.values().next().unwrap());
        if uniform {
            let keys: Vec<u64> = counts.keys().copied().collect();
            let gap = keys[1] - keys[0];
            let coset = keys.windows(2).all(|w| w[1] - w[0] == gap)
                && gap as u128 * keys.len() as u128 == self.dimension as u128;
            if coset {
                return Some(OverlapForm::Zero);
            }
        }
        None
    }

    /// True when the overlap is exactly zero.
    pub fn is_zero(&self) -> bool {
        matches!(self.closed_form(), Some(OverlapForm::Zero))
    }

    /// `Some(exponent)` when the overlap is a single term
    /// `omega^e / sqrt(norm_product)`.
    pub fn single_phase(&self) -> Option<PhaseExp> {
        match self.closed_form() {
            Some(OverlapForm::Phase { count: 1, exponent }) => Some(exponent),
            _ => None,
        }
    }

    /// The squared magnitude as an exact rational `(numerator, denominator)`
    /// when the closed form exists: `count^2 / norm_product`, or `0 / 1`.
    pub fn magnitude_squared_ratio(&self) -> Option<(u128, u128)> {
        match self.closed_form()? {
            OverlapForm::Zero => Some((0, 1)),
            OverlapForm::Phase { count, .. } => {
                Some((count as u128 * count as u128, self.norm_product))
            }
        }
    }

    /// Float view of the overlap value.
    pub fn to_complex(&self) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for &e in &self.terms {
            sum += PhaseExp::from_exponent(self.dimension, e).value();
        }
        sum / libm::sqrt(self.norm_product as f64)
    }

    /// Float magnitude.
    pub fn magnitude(&self) -> f64 {
        match self.closed_form() {
            Some(OverlapForm::Zero) => 0.0,
            Some(OverlapForm::Phase { count, .. }) => {
                count as f64 / libm::sqrt(self.norm_product as f64)
            }
            None => self.to_complex().norm(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::MonomialOperator;

    #[test]
    fn position_state_and_eigenvalues() {
        let s = FlatPhaseState::position(6, 2).unwrap();
        assert_eq!(s.support(), &[2]);
        assert!(FlatPhaseState::position(6, 6).is_err());

        // U|2> = omega_6^2 |2>
        let u = MonomialOperator::clock(6, 6).unwrap();
        assert_eq!(u.eigenphase(&s).unwrap().exponent(), 2);

        // V|2> = |1>
        let v = MonomialOperator::shift(6, 1);
        let shifted = v.apply(&s).unwrap();
        assert_eq!(shifted, FlatPhaseState::position(6, 1).unwrap());
        assert!(v.eigenphase(&s).is_none());
    }

    #[test]
    fn momentum_state_is_shift_eigenstate() {
        let p = FlatPhaseState::momentum(6, 2);
        assert_eq!(p.phases(), &[0, 2, 4, 0, 2, 4]);
        let v = MonomialOperator::shift(6, 1);
        assert_eq!(v.eigenphase(&p).unwrap().exponent(), 2);

        let p0 = FlatPhaseState::momentum(6, 0);
        assert!(p0.phases().iter().all(|&e| e == 0));
        assert_eq!(p0.support_len(), 6);
    }

    #[test]
    fn overlap_normalization_and_orthogonality() {
        let m = 12;
        let p = FlatPhaseState::momentum(m, 5);
        let self_overlap = p.overlap(&p).unwrap();
        assert_eq!(
            self_overlap.closed_form(),
            Some(OverlapForm::Phase { count: 12, exponent: PhaseExp::zero(m) })
        );
        assert!((self_overlap.magnitude() - 1.0).abs() < 1e-12);

        let a = FlatPhaseState::position(m, 3).unwrap();
        let b = FlatPhaseState::position(m, 4).unwrap();
        assert!(a.overlap(&b).unwrap().is_zero());
    }

    #[test]
    fn position_momentum_overlap_is_conjugate_pair() {
        for m in [2u64, 5, 6, 12] {
            for x in 0..m {
                for k in 0..m {
                    let pos = FlatPhaseState::position(m, x).unwrap();
                    let mom = FlatPhaseState::momentum(m, k);
                    let ov = pos.overlap(&mom).unwrap();
                    // <x|p_k> = omega^{k x} / sqrt(M)
                    assert_eq!(ov.single_phase().unwrap().exponent(), mul_mod(k, x, m));
                    assert_eq!(ov.magnitude_squared_ratio(), Some((1, m as u128)));
                }
            }
        }
    }

    #[test]
    fn momentum_states_are_orthogonal_via_coset_detection() {
        let m = 12;
        for k in 1..m {
            let a = FlatPhaseState::momentum(m, 0);
            let b = FlatPhaseState::momentum(m, k);
            let ov = a.overlap(&b).unwrap();
            assert!(ov.is_zero(), "k = {k} should be orthogonal to k = 0");
            assert!(ov.to_complex().norm() < 1e-9);
        }
    }

    #[test]
    fn apply_preserves_flat_form() {
        let m = 15;
        let op = MonomialOperator::clock(m, 5)
            .unwrap()
            .compose(&MonomialOperator::shift(m, 7))
            .unwrap();
        let s = FlatPhaseState::momentum(m, 4);
        let t = op.apply(&s).unwrap();
        assert_eq!(t.support_len(), s.support_len());
        let n = t.overlap(&t).unwrap();
        assert_eq!(n.magnitude_squared_ratio(), Some((225, 225)));
    }

    #[test]
    fn global_phase_canonicalization() {
        let m = 8;
        let s = FlatPhaseState::from_parts(m, vec![(1, 3), (5, 6)]).unwrap();
        let rotated = FlatPhaseState::from_parts(m, vec![(1, 5), (5, 0)]).unwrap();
        assert!(s.eq_up_to_global_phase(&rotated));
        assert_ne!(s, rotated);
        let different = FlatPhaseState::from_parts(m, vec![(1, 3), (5, 7)]).unwrap();
        assert!(!s.eq_up_to_global_phase(&different));
        // |overlap| = 1 exactly for equal rays.
        assert_eq!(s.overlap(&rotated).unwrap().magnitude_squared_ratio(), Some((4, 4)));
    }

    #[test]
    fn from_parts_rejects_bad_input() {
        assert!(FlatPhaseState::from_parts(4, vec![]).is_err());
        assert!(FlatPhaseState::from_parts(4, vec![(1, 0), (1, 2)]).is_err());
        assert!(FlatPhaseState::from_parts(4, vec![(4, 0)]).is_err());
    }
}
