//! Integer machinery: prime-power factorization, modular inverses, the
//! Chinese Remainder Theorem, coprime bi-factorizations, and the square
//! roots of unity modulo M.
//!
//! Residues are stored canonically in `[0, M)` throughout. The supported
//! range for M is `1 ..= i64::MAX as u64`, which keeps every intermediate
//! product within `u128`.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest supported modulus (`2^63 - 1`).
pub const MAX_MODULUS: u64 = i64::MAX as u64;

/// Greatest common divisor.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// `(a * b) mod m` without overflow.
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    ((a as u128 * b as u128) % m as u128) as u64
}

/// The inverse of `a` modulo `m`: the unique `x` in `[0, m)` with
/// `a * x = 1 [mod m]`. For `m = 1` the result is `0`.
pub fn mod_inverse(a: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if m == 1 {
        return Ok(0);
    }
    let a = a % m;
    // Extended Euclid on signed 128-bit; m <= 2^63 keeps everything in range.
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return Err(Error::NoInverse { value: a, modulus: m });
    }
    Ok(old_s.rem_euclid(m as i128) as u64)
}

/// Solves a system of congruences `x = r_j [mod m_j]` with pairwise coprime
/// moduli, returning the unique solution modulo the product of the moduli.
///
/// The solution is assembled as `sum r_j * N_j * L_j mod M` with
/// `L_j = M / m_j` and `N_j` the inverse of `L_j` modulo `m_j`.
pub fn crt_solve(congruences: &[(u64, u64)]) -> Result<u64> {
    let mut product: u64 = 1;
    for &(_, m) in congruences {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        product = product.checked_mul(m).ok_or(Error::Overflow)?;
    }
    if product > MAX_MODULUS {
        return Err(Error::Overflow);
    }
    for (i, &(_, mi)) in congruences.iter().enumerate() {
        for &(_, mj) in &congruences[i + 1..] {
            if gcd(mi, mj) != 1 {
                return Err(Error::NotCoprime { left: mi, right: mj });
            }
        }
    }
    let mut x: u64 = 0;
    for &(r, m) in congruences {
        let cofactor = product / m;
        let inverse = mod_inverse(cofactor % m.max(1), m)?;
        let term = mul_mod(mul_mod(r % m, inverse, product), cofactor, product);
        x = (x + term) % product;
    }
    Ok(x)
}

/// One prime-power constituent `m = p^n` of a factorization of M, carrying
/// the derived CRT data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constituent {
    /// The prime `p`.
    pub prime: u64,
    /// The exponent `n >= 1`.
    pub exponent: u32,
    /// `p^n`.
    pub modulus: u64,
    /// `M / p^n`, the product of all other constituents.
    pub cofactor: u64,
    /// The inverse of the cofactor modulo `p^n`.
    pub cofactor_inverse: u64,
}

/// The prime-power decomposition of M with constituents in increasing
/// prime order. For M = 1 the constituent list is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    modulus: u64,
    constituents: Vec<Constituent>,
}

impl Factorization {
    /// Factorizes M by trial division (wheel over 2, 3, 5).
    ///
    /// Rejects `M = 0` and values above [`MAX_MODULUS`].
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroModulus);
        }
        if m > MAX_MODULUS {
            return Err(Error::OutOfRange { value: m, bound: MAX_MODULUS });
        }
        let mut constituents = Vec::new();
        let mut rest = m;
        let mut push = |p: u64, rest: &mut u64| {
            let mut n = 0u32;
            let mut pw = 1u64;
            while (*rest).is_multiple_of(p) {
                *rest /= p;
                n += 1;
                pw *= p;
            }
            if n > 0 {
                constituents.push((p, n, pw));
            }
        };
        push(2, &mut rest);
        push(3, &mut rest);
        push(5, &mut rest);
        let mut p: u64 = 7;
        const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
        let mut w = 0usize;
        while p <= rest / p {
            push(p, &mut rest);
            p += WHEEL[w];
            w = (w + 1) % WHEEL.len();
        }
        if rest > 1 {
            constituents.push((rest, 1, rest));
        }
        let constituents = constituents
            .into_iter()
            .map(|(prime, exponent, modulus)| {
                let cofactor = m / modulus;
                let cofactor_inverse = mod_inverse(cofactor % modulus, modulus)?;
                Ok(Constituent { prime, exponent, modulus, cofactor, cofactor_inverse })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { modulus: m, constituents })
    }

    /// The factorized number M.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The prime-power constituents in increasing prime order.
    pub fn constituents(&self) -> &[Constituent] {
        &self.constituents
    }

    /// Number of distinct primes in M.
    pub fn len(&self) -> usize {
        self.constituents.len()
    }

    /// True only for M = 1.
    pub fn is_empty(&self) -> bool {
        self.constituents.is_empty()
    }

    /// The CRT idempotent of constituent `j`: `N_j * L_j mod M`, the residue
    /// that is 1 modulo `m_j` and 0 modulo every other constituent.
    pub fn idempotent(&self, j: usize) -> u64 {
        let c = &self.constituents[j];
        mul_mod(c.cofactor_inverse, c.cofactor, self.modulus)
    }

    /// Number of coprime bi-factorizations of M: `2^(N-1)` for N >= 1
    /// distinct primes, and 1 for M = 1 (only the trivial split).
    pub fn bifactorization_count(&self) -> u64 {
        match self.constituents.len() {
            0 => 1,
            n => 1u64 << (n - 1),
        }
    }

    /// All coprime splits `M = M1 * M2` in canonical form (`M1 <= M2`),
    /// sorted by `M1`. Constituents are never broken across the split, so
    /// there are exactly [`Self::bifactorization_count`] entries.
    pub fn bifactorizations(&self) -> Vec<BiFactorization> {
        let n = self.constituents.len();
        let mut seen = BTreeSet::new();
        for mask in 0u32..(1u32 << n) {
            let mut m1: u64 = 1;
            for (j, c) in self.constituents.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    m1 *= c.modulus;
                }
            }
            let m2 = self.modulus / m1;
            seen.insert((m1.min(m2), m1.max(m2)));
        }
        seen.iter()
            .map(|&(m1, m2)| BiFactorization::new(m1, m2).expect("split of a valid factorization"))
            .collect()
    }

    /// All solutions of `x^2 = 1 [mod M]`, sorted by value.
    ///
    /// Built by CRT over the square roots of unity of each constituent:
    /// `{1, m-1}` for odd prime powers, `{1}` for m = 2, `{1, 3}` for m = 4,
    /// and four roots for m = 2^n with n >= 3. The set is closed under
    /// `a -> M - a`. For M = 1 the single (degenerate) root is 0.
    pub fn unit_square_roots(&self) -> Vec<UnitRoot> {
        let mut roots = Vec::new();
        let mut pattern = Vec::with_capacity(self.constituents.len());
        self.collect_roots(0, &mut pattern, &mut roots);
        roots.sort_by_key(|r| r.value);
        roots
    }

    fn collect_roots(&self, j: usize, pattern: &mut Vec<u64>, out: &mut Vec<UnitRoot>) {
        if j == self.constituents.len() {
            let congruences: Vec<(u64, u64)> = pattern
                .iter()
                .zip(&self.constituents)
                .map(|(&r, c)| (r, c.modulus))
                .collect();
            let value = crt_solve(&congruences).expect("constituent moduli are coprime");
            out.push(UnitRoot { value, sign_pattern: pattern.clone() });
            return;
        }
        for r in constituent_unit_roots(&self.constituents[j]) {
            pattern.push(r);
            self.collect_roots(j + 1, pattern, out);
            pattern.pop();
        }
    }

    /// Maps a sign root onto the coprime split it selects: the constituents
    /// where the root is +1 multiply into the first factor, those where it
    /// is -1 into the second.
    ///
    /// The returned split keeps that (first, second) order; use
    /// [`BiFactorization::canonicalize`] to compare splits coming from a
    /// root and its negative. Roots with a residue other than plus or minus
    /// one modulo some constituent (possible only for m = 2^n, n >= 3) are
    /// rejected.
    pub fn sign_root_split(&self, root: &UnitRoot) -> Result<BiFactorization> {
        let mut plus: u64 = 1;
        for (&r, c) in root.sign_pattern.iter().zip(&self.constituents) {
            if r == 1 % c.modulus {
                plus *= c.modulus;
            } else if r != c.modulus - 1 {
                return Err(Error::NotSignRoot { residue: r, modulus: c.modulus });
            }
        }
        BiFactorization::new(plus, self.modulus / plus)
    }
}

fn constituent_unit_roots(c: &Constituent) -> Vec<u64> {
    let m = c.modulus;
    if c.prime == 2 {
        match c.exponent {
            1 => alloc::vec![1],
            2 => alloc::vec![1, 3],
            _ => {
                let half = m / 2;
                alloc::vec![1, half - 1, half + 1, m - 1]
            }
        }
    } else {
        alloc::vec![1, m - 1]
    }
}

/// A coprime split `M = M1 * M2` together with the derived CRT data:
/// cofactors `L_i = M / M_i` and their inverses `N_i` modulo `M_i`.
///
/// Construction validates coprimality. The factors keep the order they were
/// given in (the trivial split may appear as `(1, M)` or `(M, 1)`); the
/// canonical form used when comparing splits is `M1 <= M2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BiFactorization {
    m1: u64,
    m2: u64,
    inverse1: u64,
    inverse2: u64,
}

impl BiFactorization {
    /// Builds the split `M = m1 * m2`, rejecting non-coprime factors.
    pub fn new(m1: u64, m2: u64) -> Result<Self> {
        if m1 == 0 || m2 == 0 {
            return Err(Error::ZeroModulus);
        }
        let m = m1.checked_mul(m2).ok_or(Error::Overflow)?;
        if m > MAX_MODULUS {
            return Err(Error::Overflow);
        }
        if gcd(m1, m2) != 1 {
            return Err(Error::NotCoprime { left: m1, right: m2 });
        }
        Ok(Self {
            m1,
            m2,
            inverse1: mod_inverse(m2 % m1.max(1), m1)?,
            inverse2: mod_inverse(m1 % m2.max(1), m2)?,
        })
    }

    /// M, the product of the two factors.
    pub fn dimension(&self) -> u64 {
        self.m1 * self.m2
    }

    /// First factor.
    pub fn m1(&self) -> u64 {
        self.m1
    }

    /// Second factor.
    pub fn m2(&self) -> u64 {
        self.m2
    }

    /// `L1 = M / M1` (equals `M2` for a bi-factorization).
    pub fn cofactor1(&self) -> u64 {
        self.m2
    }

    /// `L2 = M / M2`.
    pub fn cofactor2(&self) -> u64 {
        self.m1
    }

    /// `N1`, the inverse of `L1` modulo `M1` (0 when `M1 = 1`).
    pub fn inverse1(&self) -> u64 {
        self.inverse1
    }

    /// `N2`, the inverse of `L2` modulo `M2`.
    pub fn inverse2(&self) -> u64 {
        self.inverse2
    }

    /// The CRT idempotent `N1 * L1 mod M`: 1 modulo `M1`, 0 modulo `M2`.
    /// This is the shift step that advances the first label by one.
    pub fn idempotent1(&self) -> u64 {
        mul_mod(self.inverse1, self.cofactor1(), self.dimension())
    }

    /// The CRT idempotent `N2 * L2 mod M`: 1 modulo `M2`, 0 modulo `M1`.
    pub fn idempotent2(&self) -> u64 {
        mul_mod(self.inverse2, self.cofactor2(), self.dimension())
    }

    /// The same split with factors ordered `M1 <= M2`.
    pub fn canonicalize(&self) -> Self {
        if self.m1 <= self.m2 {
            *self
        } else {
            Self { m1: self.m2, m2: self.m1, inverse1: self.inverse2, inverse2: self.inverse1 }
        }
    }

    /// Reconstructs `x` in `[0, M)` from its residues modulo the two factors.
    pub fn combine(&self, r1: u64, r2: u64) -> u64 {
        let m = self.dimension();
        let a = mul_mod(r1 % self.m1.max(1), self.idempotent1(), m);
        let b = mul_mod(r2 % self.m2.max(1), self.idempotent2(), m);
        (a + b) % m
    }
}

/// A solution `a` of `a^2 = 1 [mod M]` with its residue modulo each
/// prime-power constituent of M.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitRoot {
    value: u64,
    sign_pattern: Vec<u64>,
}

impl UnitRoot {
    /// The root as a residue in `[0, M)`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// The residue of the root modulo each constituent, in constituent order.
    pub fn sign_pattern(&self) -> &[u64] {
        &self.sign_pattern
    }

    /// True when every pattern entry is plus or minus one modulo its
    /// constituent. For odd M this holds for every root; the exceptions are
    /// the extra roots modulo 2^n for n >= 3 (e.g. 3^2 = 1 modulo 8).
    pub fn is_sign_root(&self, factors: &Factorization) -> bool {
        self.sign_pattern
            .iter()
            .zip(factors.constituents())
            .all(|(&r, c)| r == 1 % c.modulus || r == c.modulus - 1)
    }
}
