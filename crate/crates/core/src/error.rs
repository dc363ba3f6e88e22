//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: String, found: String },

    #[error("morphism images must all have length {expected}, letter `{letter}` maps to {found} symbols")]
    LengthMismatch {
        letter: String,
        expected: usize,
        found: usize,
    },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("consecutive morphisms do not chain at position {position}: {detail}")]
    ChainingError { position: usize, detail: String },

    #[error("cycle morphisms all have length 1; the lengths must be >= 2 infinitely often")]
    TrivialCycle,

    #[error("telescoping cuts are invalid: {0}")]
    BadCuts(String),

    #[error("no limit-word seed found (sequence is not primitive?)")]
    NoSeed,

    #[error("cycle composite is not primitive; minimality is not established, refusing")]
    NotPrimitive,

    #[error("no return of the initial letter within depth {depth}; increase the depth")]
    NoReturn { depth: usize },

    #[error("sliding-block image requires a word outside the legal set: {0}")]
    IllegalWindow(String),

    #[error("no alphabet-partition certificate found for height {h} within the scanned levels")]
    CertificateNotFound { h: u64 },

    #[error("pure-base coding did not close: {0}")]
    NotClosed(String),

    #[error("directive sequence is not torsion-free: {0}")]
    NotTorsionFree(String),

    #[error("window not found in the limit word at the given anchor")]
    WindowNotFound,

    #[error("word does not occur in the inspected prefix")]
    NoOccurrence,

    #[error("odometer residues are incoherent: {0}")]
    IncoherentResidues(String),

    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
