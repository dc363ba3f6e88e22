//! Alphabets and words.
//!
//! Symbols are strings, not single characters: coded alphabets (letters that
//! name length-h words, or sliding-block windows) need multi-character names.
//! A word is stored as indices into its alphabet; all word-level computation
//! works on `&[SymbolId]` with the owning [`Alphabet`] alongside.

use crate::error::{Error, Result};
use std::fmt;

/// Index of a symbol within an [`Alphabet`].
pub type SymbolId = u32;

/// A word over an alphabet, as symbol indices.
pub type Word = Vec<SymbolId>;

/// An ordered list of distinct symbol names.
///
/// Equality is by symbol list *including order*: two alphabets with the same
/// symbols in different orders are different, because silent reordering would
/// corrupt column maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::UnknownSymbol("<empty alphabet>".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::UnknownSymbol("<empty symbol name>".into()));
            }
            if symbols[..i].contains(s) {
                return Err(Error::UnknownSymbol(format!("duplicate symbol `{s}`")));
            }
        }
        Ok(Self { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id as usize]
    }

    pub fn id_of(&self, name: &str) -> Result<SymbolId> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .map(|i| i as SymbolId)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> + '_ {
        0..self.symbols.len() as SymbolId
    }

    /// Parse a whitespace-separated run of symbol names into a word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace().map(|s| self.id_of(s)).collect()
    }

    /// Render a word with single spaces between symbols.
    pub fn render_word(&self, word: &[SymbolId]) -> String {
        word.iter()
            .map(|&id| self.name(id))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Compact rendering: symbols concatenated when all are single characters,
    /// space-separated otherwise.
    pub fn render_word_compact(&self, word: &[SymbolId]) -> String {
        if self.symbols.iter().all(|s| s.chars().count() == 1) {
            word.iter().map(|&id| self.name(id)).collect()
        } else {
            self.render_word(word)
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.symbols.join(" "))
    }
}

/// Name a tuple of symbols as a single coded symbol.
///
/// Constituents are joined with `.`; the result never contains whitespace, so
/// it survives the whitespace-separated file format unescaped.
pub fn coded_symbol_name(alphabet: &Alphabet, word: &[SymbolId]) -> String {
    word.iter()
        .map(|&id| alphabet.name(id))
        .collect::<Vec<_>>()
        .join(".")
}
