//! Exact spectral invariants of constant-length S-adic shifts.
//!
//! The objects are eventually-periodic directive sequences of constant-length
//! morphisms. The library computes, exactly where the theory permits and with
//! brute-force cross-checks elsewhere:
//!
//! - torsion-freeness of the length sequence, with a clause-by-clause verdict;
//! - the injectivization: a letter-injective directive sequence generating
//!   the same shift;
//! - combinatorial heights per level, their maximum, and alphabet-partition
//!   certificates;
//! - the pure base: the trivial-height recoding by height-length blocks;
//! - naive and true column numbers via exact cycle detection on column-map
//!   sets;
//! - the maximal-equicontinuous-factor descriptor (odometer as a supernatural
//!   number, plus the finite cyclic height part), Cobham-style obstructions,
//!   and spectral classification flags;
//! - slow, independent oracles that validate the fast paths at desk scale.
//!
//! Everything is an immutable value and every operation is pure.

pub mod alphabet;
pub mod catalog;
pub mod column;
pub mod directive;
pub mod error;
pub mod format;
pub mod height;
pub mod injectivize;
pub mod language;
pub mod morphism;
pub mod oracle;
pub mod spectrum;
pub mod supernatural;

pub use alphabet::{Alphabet, SymbolId, Word};
pub use directive::{is_torsion_free, DirectiveSequence, TorsionFreeReport};
pub use error::{Error, Result};
pub use morphism::{compose, ColumnMap, IncidenceMatrix, Morphism};
pub use supernatural::{Exponent, SupernaturalNumber};
