use thiserror::Error;

/// Errors raised by the word algebra, enumeration and code-construction layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be in 2..=255, got {0}")]
    InvalidAlphabet(u32),
    #[error("symbol {symbol} is outside Z_{p}")]
    InvalidSymbol { symbol: u8, p: u8 },
    #[error("duplication length must be at least 1")]
    ZeroDupLength,
    #[error("word of length {len} is shorter than duplication length {dup_length}")]
    TooShort { len: usize, dup_length: usize },
    #[error("duplication position {position} out of range (max {max})")]
    PositionOutOfRange { position: usize, max: usize },
    #[error("alphabet mismatch: expected Z_{expected}, found Z_{found}")]
    AlphabetMismatch { expected: u8, found: u8 },
    #[error("profile mismatch: {0}")]
    ProfileMismatch(String),
    #[error("enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no residue table entry for weight {weight}")]
    MissingTableEntry { weight: usize },
    #[error("malformed residue table: {0}")]
    TableFormat(String),
    #[error("word length {found} does not match code length {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Decode(#[from] DecodeError),
}

/// Typed decoder failures. Each one certifies that the received word is not
/// inside the radius-t duplication ball of any codeword.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("received length {received} is not the code length {expected} plus a multiple of {dup_length}")]
    LengthInconsistent {
        received: usize,
        expected: usize,
        dup_length: usize,
    },
    #[error("{insertions} insertions exceed the design radius {radius}")]
    TooManyInsertions { insertions: usize, radius: usize },
    #[error("could not recover {insertions} insertion positions from the checksum deficiency")]
    PositionRecoveryFailed { insertions: usize },
    #[error("zero run {run} is too short to remove {blocks} block(s)")]
    RunUnderflow { run: usize, blocks: usize },
    #[error("decoded word does not satisfy the code checksums")]
    ResidualChecksum,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
