//! Exact arithmetic for clock-and-shift operator pairs on an M-dimensional
//! space, the coprime-split bases they generate, and the number theory that
//! underpins both.
//!
//! Everything in this crate is computed over the exponent ring `Z_M`: phases
//! are M-th roots of unity stored as integer exponents, operators are
//! monomial matrices stored as a permutation plus a phase map, and states
//! carry uniform-magnitude amplitudes. No floating point enters any claim
//! that can be settled exactly; float views exist only for cross-checking
//! against dense linear algebra.
//!
//! The crate is split along the natural layers:
//!
//! - [`numtheory`]: factorization into prime-power constituents, modular
//!   inverses, the Chinese Remainder Theorem, coprime bi-factorizations, and
//!   the square roots of unity modulo M.
//! - [`phase`]: exponent-valued phases ([`PhaseExp`]).
//! - [`operator`]: monomial operators ([`MonomialOperator`]) with exact
//!   composition, powers, periods, and commutation phases.
//! - [`state`]: flat-phase state vectors ([`FlatPhaseState`]) and exact
//!   overlaps ([`Overlap`]).
//! - [`basis`]: the labeled bases tied to a coprime split or to the complete
//!   prime-power factorization, together with their CRT label maps and
//!   closed-form overlap exponents.
//! - [`verify`]: the executable property suite producing
//!   machine-checkable [`verify::CheckResult`]s.
//!
//! `no_std` compatible (requires `alloc`).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod basis;
pub mod numtheory;
pub mod operator;
pub mod phase;
pub mod state;
pub mod verify;

pub use num_complex;

pub use basis::{CrtLabelMap, LabeledBasis, LocalizationReport};
pub use numtheory::{BiFactorization, Constituent, Factorization, UnitRoot};
pub use operator::MonomialOperator;
pub use phase::PhaseExp;
pub use state::{FlatPhaseState, Overlap, OverlapForm};
pub use verify::{CheckResult, CheckStatus, SuiteConfig};

use core::fmt;

/// Errors shared by every layer of the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// A dimension or modulus of zero was supplied.
    ZeroModulus,
    /// A value outside its permitted range (e.g. a position at or above M).
    OutOfRange { value: u64, bound: u64 },
    /// The value has no inverse modulo the given modulus.
    NoInverse { value: u64, modulus: u64 },
    /// Two quantities that must be coprime are not.
    NotCoprime { left: u64, right: u64 },
    /// The requested sub-period does not divide the dimension.
    NotDivisor { divisor: u64, dimension: u64 },
    /// Operands live in spaces of different dimensions.
    DimensionMismatch { left: u64, right: u64 },
    /// The permutation table of a monomial operator is not a bijection.
    NotPermutation,
    /// The two operators do not commute up to a scalar phase.
    NotCentral,
    /// A root of unity whose residue pattern is not a sign pattern
    /// (a residue other than plus or minus one modulo some constituent).
    NotSignRoot { residue: u64, modulus: u64 },
    /// Intermediate arithmetic exceeded the supported integer range.
    Overflow,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::ZeroModulus => write!(f, "modulus or dimension must be positive"),
            Error::OutOfRange { value, bound } => {
                write!(f, "value {value} out of range (bound {bound})")
            }
            Error::NoInverse { value, modulus } => {
                write!(f, "{value} has no inverse modulo {modulus}")
            }
            Error::NotCoprime { left, right } => {
                write!(f, "{left} and {right} are not coprime")
            }
            Error::NotDivisor { divisor, dimension } => {
                write!(f, "{divisor} does not divide the dimension {dimension}")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::NotPermutation => write!(f, "permutation table is not a bijection"),
            Error::NotCentral => write!(f, "operators do not commute up to a scalar phase"),
            Error::NotSignRoot { residue, modulus } => {
                write!(
                    f,
                    "root residue {residue} modulo {modulus} is not a sign (\u{b1}1) residue"
                )
            }
            Error::Overflow => write!(f, "integer overflow in exact arithmetic"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
