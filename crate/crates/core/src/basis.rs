//! Labeled bases tied to a coprime split `M = M1 * M2` or to the complete
//! prime-power factorization of M, with their CRT label maps and the
//! closed-form overlap exponents between conjugate pairs.
//!
//! All labels are 0-based residues: the first slot of a `kq` label runs over
//! `[0, M1)` and the second over `[0, M2)`, and similarly per constituent
//! for the completely factorized bases. States are generated per label on
//! demand; nothing is materialized up front.

use alloc::vec;
use alloc::vec::Vec;

use crate::numtheory::{gcd, mul_mod, BiFactorization, Factorization};
use crate::operator::MonomialOperator;
use crate::phase::PhaseExp;
use crate::state::{FlatPhaseState, OverlapForm};
use crate::{Error, Result};

/// The Chinese-Remainder bijection between residues modulo M and tuples of
/// residues modulo pairwise coprime factors of M.
///
/// `forward` maps `x` to `(x mod m_1, ..., x mod m_N)`; `backward`
/// reassembles `x = sum q_j N_j L_j mod M` with `L_j = M / m_j` and `N_j`
/// the inverse of `L_j` modulo `m_j`. The two maps are mutually inverse,
/// and the all-ones tuple maps to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtLabelMap {
    dimension: u64,
    moduli: Vec<u64>,
    idempotents: Vec<u64>,
}

impl CrtLabelMap {
    /// Builds the map for pairwise coprime moduli with product `<= 2^63 - 1`.
    pub fn new(moduli: &[u64]) -> Result<Self> {
        let mut dimension: u64 = 1;
        for &m in moduli {
            if m == 0 {
                return Err(Error::ZeroModulus);
            }
            dimension = dimension.checked_mul(m).ok_or(Error::Overflow)?;
        }
        for (i, &a) in moduli.iter().enumerate() {
            for &b in &moduli[i + 1..] {
                if gcd(a, b) != 1 {
                    return Err(Error::NotCoprime { left: a, right: b });
                }
            }
        }
        let idempotents = moduli
            .iter()
            .map(|&m| {
                let cofactor = dimension / m;
                let inverse = crate::numtheory::mod_inverse(cofactor % m, m)?;
                Ok(mul_mod(inverse, cofactor, dimension.max(1)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { dimension, moduli: moduli.to_vec(), idempotents })
    }

    /// Map for the prime-power constituents of a factorization.
    pub fn from_factorization(factors: &Factorization) -> Self {
        let moduli: Vec<u64> = factors.constituents().iter().map(|c| c.modulus).collect();
        Self::new(&moduli).expect("constituents are pairwise coprime")
    }

    /// Map for the two factors of a coprime split.
    pub fn from_split(split: &BiFactorization) -> Self {
        Self::new(&[split.m1(), split.m2()]).expect("split factors are coprime")
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Residue tuple of `x` (taken modulo M).
    pub fn forward(&self, x: u64) -> Vec<u64> {
        let x = x % self.dimension;
        self.moduli.iter().map(|&m| x % m).collect()
    }

    /// Unique `x` in `[0, M)` with the given residues (each taken modulo its
    /// slot modulus). Panics if the tuple length does not match.
    pub fn backward(&self, residues: &[u64]) -> u64 {
        assert_eq!(residues.len(), self.moduli.len(), "label arity mismatch");
        let m = self.dimension;
        let mut x: u64 = 0;
        for ((&r, &modulus), &idem) in
            residues.iter().zip(&self.moduli).zip(&self.idempotents)
        {
            x = (x + mul_mod(r % modulus, idem, m)) % m;
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum BasisKind {
    /// Simultaneous eigenstates of the clock of sub-period `M2` and the
    /// shift by `N1 L1`; labels `(k, q)` with `k` momentum-like modulo `M1`
    /// and `q` position-like modulo `M2`.
    Kq(BiFactorization),
    /// The conjugate pair: eigenstates of the clock of sub-period `M1` and
    /// the shift by `N2 L2`; labels `(K, Q)` modulo `(M2, M1)`.
    KqConjugate(BiFactorization),
    /// Position states labeled by their residues modulo the factors.
    Position(CrtLabelMap),
    /// Momentum states labeled by the cofactor decomposition
    /// `k = sum_j k_j L_j`.
    Momentum { moduli: Vec<u64>, cofactors: Vec<u64> },
}

/// An orthonormal basis of M flat-phase states indexed by a tuple of
/// residues, one per factor of the chosen factorization of M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledBasis {
    dimension: u64,
    scheme: Vec<u64>,
    kind: BasisKind,
}

impl LabeledBasis {
    /// The `kq` basis of a coprime split: common eigenstates of the
    /// commuting pair `clock(M, M2)` and `shift(M, N1 L1)`, with
    ///
    /// `|k,q> = (1/sqrt(M1)) sum_s omega_{M1}^{k s} |q N2 L2 + s N1 L1 mod M>`.
    ///
    /// The trivial split `(1, M)` degenerates to the position basis labeled
    /// by `q`, and `(M, 1)` to the momentum basis labeled by `k`.
    pub fn kq(split: &BiFactorization) -> Self {
        Self {
            dimension: split.dimension(),
            scheme: vec![split.m1(), split.m2()],
            kind: BasisKind::Kq(*split),
        }
    }

    /// The conjugate `KQ` basis: eigenstates of `clock(M, M1)` and
    /// `shift(M, N2 L2)`, with
    ///
    /// `|K,Q> = (1/sqrt(M2)) sum_t omega_{M2}^{K t} |Q N1 L1 + t N2 L2 mod M>`.
    pub fn kq_conjugate(split: &BiFactorization) -> Self {
        Self {
            dimension: split.dimension(),
            scheme: vec![split.m2(), split.m1()],
            kind: BasisKind::KqConjugate(*split),
        }
    }

    /// The split position basis: `|q1,q2>` is the position state at
    /// `x = q1 N1 L1 + q2 N2 L2 mod M`, the common eigenstate of the two
    /// sub-period clocks.
    pub fn split_position(split: &BiFactorization) -> Self {
        Self {
            dimension: split.dimension(),
            scheme: vec![split.m1(), split.m2()],
            kind: BasisKind::Position(CrtLabelMap::from_split(split)),
        }
    }

    /// The split momentum basis: `|k1,k2>` is the momentum state at
    /// `k = k1 L1 + k2 L2 mod M`, the common eigenstate of the two
    /// idempotent shifts.
    pub fn split_momentum(split: &BiFactorization) -> Self {
        Self {
            dimension: split.dimension(),
            scheme: vec![split.m1(), split.m2()],
            kind: BasisKind::Momentum {
                moduli: vec![split.m1(), split.m2()],
                cofactors: vec![split.cofactor1(), split.cofactor2()],
            },
        }
    }

    /// The completely factorized position basis: one label per prime-power
    /// constituent, `|q_1..q_N>` the position state at
    /// `x = sum_j q_j N_j L_j mod M`.
    pub fn complete_position(factors: &Factorization) -> Self {
        let map = CrtLabelMap::from_factorization(factors);
        Self {
            dimension: factors.modulus(),
            scheme: map.moduli().to_vec(),
            kind: BasisKind::Position(map),
        }
    }

    /// The completely factorized momentum basis: `|k_1..k_N>` the momentum
    /// state at `k = sum_j k_j L_j mod M`.
    pub fn complete_momentum(factors: &Factorization) -> Self {
        let moduli: Vec<u64> = factors.constituents().iter().map(|c| c.modulus).collect();
        let cofactors: Vec<u64> = factors.constituents().iter().map(|c| c.cofactor).collect();
        Self {
            dimension: factors.modulus(),
            scheme: moduli.clone(),
            kind: BasisKind::Momentum { moduli, cofactors },
        }
    }

    pub fn dimension(&self) -> u64 {
        self.dimension
    }

    /// Per-slot label moduli.
    pub fn scheme(&self) -> &[u64] {
        &self.scheme
    }

    /// Number of states (always M).
    pub fn len(&self) -> u64 {
        self.dimension
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The state for a label tuple; entries are taken modulo their slot
    /// modulus. Errors only on arity mismatch.
    pub fn state(&self, label: &[u64]) -> Result<FlatPhaseState> {
        if label.len() != self.scheme.len() {
            return Err(Error::DimensionMismatch {
                left: label.len() as u64,
                right: self.scheme.len() as u64,
            });
        }
        let m = self.dimension;
        match &self.kind {
            BasisKind::Kq(split) => {
                let (k, q) = (label[0] % split.m1(), label[1] % split.m2());
                let base = mul_mod(q, split.idempotent2(), m);
                let step = split.idempotent1();
                // omega_{M1}^{k s} = omega_M^{k s L1}
                let pairs = (0..split.m1())
                    .map(|s| {
                        let x = (base + mul_mod(s, step, m)) % m;
                        let e = mul_mod(mul_mod(k, s, m), split.cofactor1(), m);
                        (x, e)
                    })
                    .collect();
                FlatPhaseState::from_parts(m, pairs)
            }
            BasisKind::KqConjugate(split) => {
                let (kk, qq) = (label[0] % split.m2(), label[1] % split.m1());
                let base = mul_mod(qq, split.idempotent1(), m);
                let step = split.idempotent2();
                let pairs = (0..split.m2())
                    .map(|t| {
                        let x = (base + mul_mod(t, step, m)) % m;
                        let e = mul_mod(mul_mod(kk, t, m), split.cofactor2(), m);
                        (x, e)
                    })
                    .collect();
                FlatPhaseState::from_parts(m, pairs)
            }
            BasisKind::Position(map) => FlatPhaseState::position(m, map.backward(label)),
            BasisKind::Momentum { moduli, cofactors } => {
                let mut k: u64 = 0;
                for ((&slot, &modulus), &cofactor) in label.iter().zip(moduli).zip(cofactors) {
                    k = (k + mul_mod(slot % modulus, cofactor, m)) % m;
                }
                Ok(FlatPhaseState::momentum(m, k))
            }
        }
    }

    /// All label tuples in lexicographic order.
    pub fn labels(&self) -> LabelIter {
        LabelIter { scheme: self.scheme.clone(), next: Some(vec![0; self.scheme.len()]) }
    }
}

/// Lexicographic iterator over the label tuples of a [`LabeledBasis`].
#[derive(Debug, Clone)]
pub struct LabelIter {
    scheme: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for LabelIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for slot in (0..succ.len()).rev() {
            succ[slot] += 1;
            if succ[slot] < self.scheme[slot] {
                self.next = Some(succ);
                return Some(current);
            }
            succ[slot] = 0;
        }
        // A zero-arity scheme (M = 1) yields exactly one empty label.
        self.next = None;
        Some(current)
    }
}

/// Closed form for `<k,q|K,Q>`: the single-phase overlap
/// `omega_M^{K q M1 - k Q M2} / sqrt(M)`.
pub fn kq_overlap_exponent(split: &BiFactorization, k: u64, q: u64, kk: u64, qq: u64) -> PhaseExp {
    let m = split.dimension();
    let plus = mul_mod(mul_mod(kk, q, m), split.m1(), m);
    let minus = mul_mod(mul_mod(k, qq, m), split.m2(), m);
    PhaseExp::from_exponent(m, (plus + m - minus) % m)
}

/// Closed form for `<q1,q2|k1,k2>`: `omega_M^{q1 k1 M2 + q2 k2 M1} / sqrt(M)`.
pub fn split_overlap_exponent(
    split: &BiFactorization,
    q1: u64,
    q2: u64,
    k1: u64,
    k2: u64,
) -> PhaseExp {
    let m = split.dimension();
    let a = mul_mod(mul_mod(q1, k1, m), split.m2(), m);
    let b = mul_mod(mul_mod(q2, k2, m), split.m1(), m);
    PhaseExp::from_exponent(m, (a + b) % m)
}

/// Closed form for `<q_1..q_N|k_1..k_N>`:
/// `omega_M^{sum_j k_j q_j L_j} / sqrt(M)`. The reversed bra-ket order is
/// the conjugate phase.
pub fn complete_overlap_exponent(factors: &Factorization, qs: &[u64], ks: &[u64]) -> PhaseExp {
    let m = factors.modulus();
    let mut e: u64 = 0;
    for ((&q, &k), c) in qs.iter().zip(ks).zip(factors.constituents()) {
        e = (e + mul_mod(mul_mod(k, q, m), c.cofactor, m)) % m;
    }
    PhaseExp::from_exponent(m, e)
}

/// One coefficient of the localization expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationEntry {
    /// Label in the respective basis.
    pub label: (u64, u64),
    /// Exact closed form of the coefficient, when one exists (it always
    /// does for these expansions).
    pub coefficient: Option<OverlapForm>,
    /// Squared magnitude of the coefficient as an exact rational.
    pub magnitude_squared: Option<(u128, u128)>,
}

/// The worked localization example: a state uniform over the second
/// position label at fixed first label expands, in the split momentum
/// basis, into a state uniform over the first momentum label and localized
/// in the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationReport {
    pub split: BiFactorization,
    /// The state: uniform over `q2` at `q1 = 0`.
    pub state: FlatPhaseState,
    /// `<q1,q2|state>` for all labels.
    pub position_side: Vec<LocalizationEntry>,
    /// `<k1,k2|state>` for all labels.
    pub momentum_side: Vec<LocalizationEntry>,
    /// Both sides have exact delta structure: the position side is nonzero
    /// exactly at `q1 = 0` with squared magnitude `1/M2`, the momentum side
    /// exactly at `k2 = 0` with squared magnitude `1/M1`.
    pub exact_delta: bool,
}

/// Expands the `q1 = 0` ridge state in both split bases and checks the
/// delta structure of the two expansions exactly.
pub fn localization_report(split: &BiFactorization) -> LocalizationReport {
    let m = split.dimension();
    let positions = LabeledBasis::split_position(split);
    let momenta = LabeledBasis::split_momentum(split);

    // psi = (1/sqrt(M2)) sum_{q2} |q1 = 0, q2>
    let pairs: Vec<(u64, u64)> = (0..split.m2())
        .map(|q2| (mul_mod(q2, split.idempotent2(), m), 0))
        .collect();
    let state = FlatPhaseState::from_parts(m, pairs).expect("non-empty support");

    let mut exact_delta = true;
    let mut expand = |basis: &LabeledBasis, delta_slot: usize| -> Vec<LocalizationEntry> {
        basis
            .labels()
            .map(|label| {
                let coeff = basis.state(&label).unwrap().overlap(&state).unwrap();
                let form = coeff.closed_form();
                let ratio = coeff.magnitude_squared_ratio();
                let on_ridge = label[delta_slot] == 0;
                let expected: (u128, u128) = if delta_slot == 0 {
                    (1, split.m2() as u128)
                } else {
                    (1, split.m1() as u128)
                };
                let ok = match ratio {
                    Some((num, den)) if on_ridge => num * expected.1 == den * expected.0,
                    Some((num, _)) => num == 0,
                    None => false,
                };
                exact_delta &= ok;
                LocalizationEntry {
                    label: (label[0], label[1]),
                    coefficient: form,
                    magnitude_squared: ratio,
                }
            })
            .collect()
    };

    let position_side = expand(&positions, 0);
    let momentum_side = expand(&momenta, 1);

    LocalizationReport { split: *split, state, position_side, momentum_side, exact_delta }
}

/// Walks the orbit of `|k=0,q=0>` under the two ladder operators
/// `clock(M, M1)` (raises `k`) and the inverse of `shift(M, N2 L2)`
/// (raises `q`), returning the states in `(k, q)` lexicographic order.
///
/// Each returned state must equal the directly constructed `|k,q>` exactly
/// (zero residual phase); the caller checks that, this walks the ladder.
pub fn kq_ladder_orbit(split: &BiFactorization) -> Result<Vec<((u64, u64), FlatPhaseState)>> {
    let basis = LabeledBasis::kq(split);
    let raise_k = MonomialOperator::clock(split.dimension(), split.m1())?;
    let lower_q = MonomialOperator::shift(split.dimension(), split.idempotent2() as i64);
    let raise_q = lower_q.inverse();

    let mut out = Vec::with_capacity(split.dimension() as usize);
    let mut column = basis.state(&[0, 0])?;
    for k in 0..split.m1() {
        let mut state = column.clone();
        for q in 0..split.m2() {
            out.push(((k, q), state.clone()));
            if q + 1 < split.m2() {
                state = raise_q.apply(&state)?;
            }
        }
        if k + 1 < split.m1() {
            column = raise_k.apply(&column)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn split(m1: u64, m2: u64) -> BiFactorization {
        BiFactorization::new(m1, m2).unwrap()
    }

    #[test]
    fn crt_label_map_round_trips() {
        let f = Factorization::new(105).unwrap();
        let map = CrtLabelMap::from_factorization(&f);
        for x in 0..105 {
            assert_eq!(map.backward(&map.forward(x)), x);
        }
        assert_eq!(map.backward(&[1, 1, 1]), 1);
        assert_eq!(map.backward(&[1, 1, 6]), 76);
        assert_eq!(map.forward(34), vec![1, 4, 6]);
    }

    #[test]
    fn kq_state_matches_hand_expansion() {
        // M = 6, split (2, 3): |k=1,q=1> is supported on {1, 4} with
        // phase exponents 3 at x = 1 (s = 1) and 0 at x = 4 (s = 0).
        let basis = LabeledBasis::kq(&split(2, 3));
        let state = basis.state(&[1, 1]).unwrap();
        assert_eq!(state.support(), &[1, 4]);
        assert_eq!(state.phases(), &[3, 0]);
    }

    #[test]
    fn trivial_splits_degenerate() {
        let m = 10;
        let pos_like = LabeledBasis::kq(&split(1, m));
        for q in 0..m {
            let s = pos_like.state(&[0, q]).unwrap();
            assert_eq!(s, FlatPhaseState::position(m, q).unwrap());
        }
        let mom_like = LabeledBasis::kq(&split(m, 1));
        for k in 0..m {
            let s = mom_like.state(&[k, 0]).unwrap();
            assert_eq!(s, FlatPhaseState::momentum(m, k));
        }
    }

    #[test]
    fn kq_eigen_relations() {
        for (m1, m2) in [(2u64, 3u64), (3, 5), (4, 9), (1, 7)] {
            let b = split(m1, m2);
            let m = b.dimension();
            let basis = LabeledBasis::kq(&b);
            let clock2 = MonomialOperator::clock(m, m2).unwrap();
            let shift1 = MonomialOperator::shift(m, b.idempotent1() as i64);
            for label in basis.labels() {
                let state = basis.state(&label).unwrap();
                let (k, q) = (label[0], label[1]);
                // clock(M2) eigenvalue omega_{M2}^q = omega_M^{q L2}
                let e = clock2.eigenphase(&state).unwrap();
                assert_eq!(e.exponent(), mul_mod(q, b.cofactor2(), m));
                // shift(N1 L1) eigenvalue omega_{M1}^k = omega_M^{k L1}
                let e = shift1.eigenphase(&state).unwrap();
                assert_eq!(e.exponent(), mul_mod(k, b.cofactor1(), m));
            }
        }
    }

    #[test]
    fn conjugate_eigen_relations() {
        let b = split(3, 5);
        let m = b.dimension();
        let basis = LabeledBasis::kq_conjugate(&b);
        let clock1 = MonomialOperator::clock(m, b.m1()).unwrap();
        let shift2 = MonomialOperator::shift(m, b.idempotent2() as i64);
        for label in basis.labels() {
            let state = basis.state(&label).unwrap();
            let (kk, qq) = (label[0], label[1]);
            let e = clock1.eigenphase(&state).unwrap();
            assert_eq!(e.exponent(), mul_mod(qq, b.cofactor1(), m));
            let e = shift2.eigenphase(&state).unwrap();
            assert_eq!(e.exponent(), mul_mod(kk, b.cofactor2(), m));
        }
    }

    #[test]
    fn ladder_relations_have_zero_residual_phase() {
        let b = split(3, 5);
        let m = b.dimension();
        let basis = LabeledBasis::kq(&b);
        let raise_k = MonomialOperator::clock(m, b.m1()).unwrap();
        let lower_q = MonomialOperator::shift(m, b.idempotent2() as i64);
        for label in basis.labels() {
            let state = basis.state(&label).unwrap();
            let (k, q) = (label[0], label[1]);
            let up = raise_k.apply(&state).unwrap();
            assert_eq!(up, basis.state(&[(k + 1) % b.m1(), q]).unwrap());
            let down = lower_q.apply(&state).unwrap();
            assert_eq!(down, basis.state(&[k, (q + b.m2() - 1) % b.m2()]).unwrap());
        }
    }

    #[test]
    fn split_position_basis_is_crt_relabeling() {
        let b = split(2, 3);
        let basis = LabeledBasis::split_position(&b);
        assert_eq!(basis.state(&[1, 1]).unwrap().support(), &[1]);
        let mut seen = BTreeSet::new();
        for label in basis.labels() {
            let s = basis.state(&label).unwrap();
            assert_eq!(s.support_len(), 1);
            seen.insert(s.support()[0]);
        }
        assert_eq!(seen.len(), 6);

        // Eigenstate of both sub-period clocks.
        let m = b.dimension();
        let clock1 = MonomialOperator::clock(m, b.m1()).unwrap();
        let clock2 = MonomialOperator::clock(m, b.m2()).unwrap();
        for label in basis.labels() {
            let s = basis.state(&label).unwrap();
            assert_eq!(
                clock1.eigenphase(&s).unwrap().exponent(),
                mul_mod(label[0], b.cofactor1(), m)
            );
            assert_eq!(
                clock2.eigenphase(&s).unwrap().exponent(),
                mul_mod(label[1], b.cofactor2(), m)
            );
        }
    }

    #[test]
    fn split_momentum_basis_eigen_relations() {
        let b = split(3, 5);
        let m = b.dimension();
        let basis = LabeledBasis::split_momentum(&b);
        let shift1 = MonomialOperator::shift(m, b.idempotent1() as i64);
        let shift2 = MonomialOperator::shift(m, b.idempotent2() as i64);
        for label in basis.labels() {
            let s = basis.state(&label).unwrap();
            assert_eq!(
                shift1.eigenphase(&s).unwrap().exponent(),
                mul_mod(label[0], b.cofactor1(), m)
            );
            assert_eq!(
                shift2.eigenphase(&s).unwrap().exponent(),
                mul_mod(label[1], b.cofactor2(), m)
            );
        }
    }

    #[test]
    fn kq_conjugate_overlap_closed_form() {
        for (m1, m2) in [(2u64, 3u64), (3, 5), (1, 6)] {
            let b = split(m1, m2);
            let m = b.dimension();
            let kq = LabeledBasis::kq(&b);
            let conj = LabeledBasis::kq_conjugate(&b);
            for bra in kq.labels() {
                for ket in conj.labels() {
                    let ov = kq
                        .state(&bra)
                        .unwrap()
                        .overlap(&conj.state(&ket).unwrap())
                        .unwrap();
                    let phase = ov.single_phase().expect("single CRT intersection");
                    let expected = kq_overlap_exponent(&b, bra[0], bra[1], ket[0], ket[1]);
                    assert_eq!(phase, expected);
                    assert_eq!(ov.magnitude_squared_ratio(), Some((1, m as u128)));
                }
            }
        }
    }

    #[test]
    fn split_overlap_closed_form() {
        let b = split(2, 3);
        let m = b.dimension();
        let pos = LabeledBasis::split_position(&b);
        let mom = LabeledBasis::split_momentum(&b);
        for bra in pos.labels() {
            for ket in mom.labels() {
                let ov = pos
                    .state(&bra)
                    .unwrap()
                    .overlap(&mom.state(&ket).unwrap())
                    .unwrap();
                let phase = ov.single_phase().unwrap();
                assert_eq!(phase, split_overlap_exponent(&b, bra[0], bra[1], ket[0], ket[1]));
                assert_eq!(ov.magnitude_squared_ratio(), Some((1, m as u128)));
            }
        }
    }

    #[test]
    fn complete_basis_label_maps() {
        let f = Factorization::new(105).unwrap();
        let basis = LabeledBasis::complete_position(&f);
        assert_eq!(basis.scheme(), &[3, 5, 7]);
        assert_eq!(basis.state(&[1, 1, 6]).unwrap().support(), &[76]);
        assert_eq!(basis.state(&[1, 1, 1]).unwrap().support(), &[1]);

        // Single-constituent M: the position basis relabeled.
        let f5 = Factorization::new(5).unwrap();
        let b5 = LabeledBasis::complete_position(&f5);
        for q in 0..5 {
            assert_eq!(b5.state(&[q]).unwrap(), FlatPhaseState::position(5, q).unwrap());
        }

        // M = 1: the empty label indexes the single state.
        let f1 = Factorization::new(1).unwrap();
        let b1 = LabeledBasis::complete_position(&f1);
        let labels: Vec<_> = b1.labels().collect();
        assert_eq!(labels, vec![Vec::<u64>::new()]);
        assert_eq!(b1.state(&[]).unwrap().support(), &[0]);
    }

    #[test]
    fn complete_momentum_eigen_relations() {
        let f = Factorization::new(30).unwrap();
        let m = f.modulus();
        let basis = LabeledBasis::complete_momentum(&f);
        for label in basis.labels() {
            let s = basis.state(&label).unwrap();
            for (j, c) in f.constituents().iter().enumerate() {
                let vj = MonomialOperator::shift(m, f.idempotent(j) as i64);
                assert_eq!(
                    vj.eigenphase(&s).unwrap().exponent(),
                    mul_mod(label[j], c.cofactor, m)
                );
            }
        }
    }

    #[test]
    fn complete_overlap_closed_form() {
        let f = Factorization::new(30).unwrap();
        let m = f.modulus();
        let pos = LabeledBasis::complete_position(&f);
        let mom = LabeledBasis::complete_momentum(&f);
        for qs in pos.labels() {
            for ks in mom.labels() {
                let ov = pos
                    .state(&qs)
                    .unwrap()
                    .overlap(&mom.state(&ks).unwrap())
                    .unwrap();
                let phase = ov.single_phase().unwrap();
                assert_eq!(phase, complete_overlap_exponent(&f, &qs, &ks));
                assert_eq!(ov.magnitude_squared_ratio(), Some((1, m as u128)));
            }
        }
    }

    #[test]
    fn localization_delta_structure() {
        let same_fraction = |got: Option<(u128, u128)>, want: (u128, u128)| {
            let (num, den) = got.expect("closed form");
            num * want.1 == den * want.0
        };
        let report = localization_report(&split(3, 5));
        assert!(report.exact_delta);
        for entry in &report.position_side {
            let expected = if entry.label.0 == 0 { (1u128, 5u128) } else { (0, 1) };
            assert!(same_fraction(entry.magnitude_squared, expected));
        }
        for entry in &report.momentum_side {
            let expected = if entry.label.1 == 0 { (1u128, 3u128) } else { (0, 1) };
            assert!(same_fraction(entry.magnitude_squared, expected));
        }

        // (M, 1): the ridge is a single position state and the momentum
        // side is uniform.
        let report = localization_report(&split(15, 1));
        assert!(report.exact_delta);
        assert_eq!(report.state.support(), &[0]);
        for entry in &report.momentum_side {
            assert!(same_fraction(entry.magnitude_squared, (1, 15)));
        }
    }

    #[test]
    fn localization_coefficient_tables_at_six() {
        // Full coefficient tables for M = 6, split (2, 3): the ridge state
        // sits on every position divisible by 2 and expands with exactly
        // one momentum-side column.
        let report = localization_report(&split(2, 3));
        assert!(report.exact_delta);
        assert_eq!(report.state.support(), &[0, 2, 4]);
        let position: Vec<((u64, u64), (u128, u128))> = report
            .position_side
            .iter()
            .map(|e| (e.label, e.magnitude_squared.unwrap()))
            .collect();
        assert_eq!(
            position,
            alloc::vec![
                ((0, 0), (1, 3)),
                ((0, 1), (1, 3)),
                ((0, 2), (1, 3)),
                ((1, 0), (0, 1)),
                ((1, 1), (0, 1)),
                ((1, 2), (0, 1)),
            ]
        );
        for entry in &report.momentum_side {
            let (num, den) = entry.magnitude_squared.unwrap();
            if entry.label.1 == 0 {
                // 1/M1 = 1/2 exactly, with zero phase.
                assert_eq!(num * 2, den);
                assert_eq!(
                    entry.coefficient,
                    Some(OverlapForm::Phase {
                        count: 3,
                        exponent: crate::phase::PhaseExp::zero(6)
                    })
                );
            } else {
                assert_eq!(num, 0);
            }
        }
    }

    #[test]
    fn ladder_orbit_generates_every_state_once() {
        let b = split(3, 5);
        let basis = LabeledBasis::kq(&b);
        let orbit = kq_ladder_orbit(&b).unwrap();
        assert_eq!(orbit.len(), 15);
        let mut seen = BTreeSet::new();
        for ((k, q), state) in &orbit {
            assert_eq!(state, &basis.state(&[*k, *q]).unwrap(), "residual phase at ({k},{q})");
            assert!(seen.insert((*k, *q)));
        }
    }

    #[test]
    fn gram_matrix_is_identity_exactly() {
        for basis in [
            LabeledBasis::kq(&split(3, 4)),
            LabeledBasis::kq_conjugate(&split(3, 4)),
            LabeledBasis::split_position(&split(3, 4)),
            LabeledBasis::split_momentum(&split(3, 4)),
            LabeledBasis::complete_position(&Factorization::new(12).unwrap()),
            LabeledBasis::complete_momentum(&Factorization::new(12).unwrap()),
        ] {
            let labels: Vec<_> = basis.labels().collect();
            assert_eq!(labels.len() as u64, basis.len());
            for a in &labels {
                for b in &labels {
                    let ov = basis
                        .state(a)
                        .unwrap()
                        .overlap(&basis.state(b).unwrap())
                        .unwrap();
                    let (num, den) = ov.magnitude_squared_ratio().expect("exact gram entry");
                    if a == b {
                        assert_eq!(num, den);
                    } else {
                        assert_eq!(num, 0);
                    }
                }
            }
        }
    }
}
