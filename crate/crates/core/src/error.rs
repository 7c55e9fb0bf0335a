use std::fmt;

/// Errors raised by the algebraic kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Rank outside the admissible range for the family.
    InvalidRank { family: char, rank: usize },
    /// Unparsable algebra name (expected e.g. "B2", "D4").
    ParseAlgebra(String),
    /// Arithmetic between series with different truncation specs.
    TruncationMismatch,
    /// Inversion of a series with zero constant term.
    NonUnit,
    /// Negative power of a series with zero constant term.
    NegativePowerOfNonUnit,
    /// Simple-root index outside 1..=n.
    IndexOutOfRange { index: usize, rank: usize },
    /// A support weight is not of the form highest - sum d_a alpha_a, d_a >= 0.
    WeightNotBelowHighest(Vec<i64>),
    /// A vacancy number came out non-integral (corrupted Cartan data).
    NonIntegerVacancy,
    /// Operation requires a dominant weight.
    NonDominant(Vec<i64>),
    /// Closed-form KR characters exist only for classical families.
    ExceptionalKr(String),
    /// Decomposition hit a negative multiplicity; input is not a character.
    NotACharacter { weight: Vec<i64>, mult: String },
    /// The string pattern N must be nonzero.
    EmptyPattern,
    /// String center matrix is singular; solution set is not finite.
    SingularMatrix,
    /// |det A| exceeds the brute-force enumeration guard.
    DetTooLarge { det: String, max: u64 },
    /// The partition is not refined by the given top partition.
    NotARefinement,
    /// Malformed user input.
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidRank { family, rank } => {
                write!(f, "invalid rank {rank} for family {family}")
            }
            Error::ParseAlgebra(s) => write!(f, "cannot parse algebra id `{s}`"),
            Error::TruncationMismatch => write!(f, "series truncation specs differ"),
            Error::NonUnit => write!(f, "series has zero constant term and is not invertible"),
            Error::NegativePowerOfNonUnit => {
                write!(f, "negative power of a series with zero constant term")
            }
            Error::IndexOutOfRange { index, rank } => {
                write!(f, "index {index} out of range 1..={rank}")
            }
            Error::WeightNotBelowHighest(w) => write!(
                f,
                "weight {w:?} is not highest - sum of simple roots with nonnegative coefficients"
            ),
            Error::NonIntegerVacancy => {
                write!(f, "non-integer vacancy number; corrupted Cartan data")
            }
            Error::NonDominant(w) => write!(f, "weight {w:?} is not dominant"),
            Error::ExceptionalKr(id) => {
                write!(
                    f,
                    "KR character closed form requires classical type, got {id}"
                )
            }
            Error::NotACharacter { weight, mult } => {
                write!(
                    f,
                    "not a character: multiplicity {mult} at weight {weight:?}"
                )
            }
            Error::EmptyPattern => write!(f, "string pattern N must be nonzero"),
            Error::SingularMatrix => write!(f, "string center matrix is singular"),
            Error::DetTooLarge { det, max } => {
                write!(f, "|det A| = {det} exceeds brute-force guard {max}")
            }
            Error::NotARefinement => {
                write!(f, "partition is not refined by the given top partition")
            }
            Error::InvalidInput(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
