//! Replace a directive sequence by a letter-injective one generating the same
//! shift.
//!
//! The construction walks the sequence left to right. At each level the
//! incoming target relabeling is pushed through the morphism, letters with
//! equal images are glued, and the glued alphabet becomes the relabeling for
//! the next level. The walk state is the pair (cycle position, current
//! partition); partitions of a bounded alphabet are finitely many, so a state
//! revisits and the output cycle is cut there, making the output eventually
//! periodic.

use crate::alphabet::{Alphabet, SymbolId};
use crate::directive::DirectiveSequence;
use crate::morphism::Morphism;
use std::collections::HashMap;

/// A surjection gluing letters of `source` onto `quotient`.
///
/// Classes are named canonically by their alphabet-order-least member, and
/// ordered by that member, so gluing {0, 0b} and {1, 1b} reproduces the
/// alphabet {0, 1} literally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub source: Alphabet,
    pub quotient: Alphabet,
    /// `map[a]` = quotient letter of source letter `a`.
    pub map: Vec<SymbolId>,
}

impl Quotient {
    pub fn is_identity(&self) -> bool {
        self.source == self.quotient
    }

    pub fn class_members(&self, b: SymbolId) -> Vec<SymbolId> {
        self.source
            .ids()
            .filter(|&a| self.map[a as usize] == b)
            .collect()
    }

    pub fn apply(&self, a: SymbolId) -> SymbolId {
        self.map[a as usize]
    }
}

/// One level of the construction: the gluing applied to the level-`level`
/// alphabet and the injective morphism emitted below it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientStep {
    pub level: usize,
    pub quotient: Quotient,
    pub new_morphism: Morphism,
}

/// Glue letters of `m` with equal images: returns the gluing of the source
/// and the induced injective morphism, satisfying
/// `m = returned ∘ quotient` on letters.
pub fn quotient_of(m: &Morphism) -> (Quotient, Morphism) {
    let source = m.source();
    let mut class_of: Vec<SymbolId> = Vec::with_capacity(source.len());
    let mut representatives: Vec<SymbolId> = Vec::new();
    let mut by_image: HashMap<&[SymbolId], SymbolId> = HashMap::new();
    for a in source.ids() {
        let img = m.image(a);
        match by_image.get(img) {
            Some(&b) => class_of.push(b),
            None => {
                let b = representatives.len() as SymbolId;
                by_image.insert(img, b);
                representatives.push(a);
                class_of.push(b);
            }
        }
    }
    let quotient_alphabet = Alphabet::new(
        representatives
            .iter()
            .map(|&a| source.name(a).to_string())
            .collect::<Vec<_>>(),
    )
    .expect("representatives are distinct source symbols");
    let images = representatives
        .iter()
        .map(|&a| m.image(a).to_vec())
        .collect::<Vec<_>>();
    let injective = Morphism::new(quotient_alphabet.clone(), m.target().clone(), images)
        .expect("images taken from a valid morphism");
    (
        Quotient {
            source: source.clone(),
            quotient: quotient_alphabet,
            map: class_of,
        },
        injective,
    )
}

/// Post-compose the target of `m` with a gluing of its target alphabet.
fn relabel_target(m: &Morphism, q: &Quotient) -> Morphism {
    debug_assert_eq!(m.target(), &q.source);
    let images = m
        .source()
        .ids()
        .map(|a| m.image(a).iter().map(|&s| q.apply(s)).collect())
        .collect();
    Morphism::new(m.source().clone(), q.quotient.clone(), images)
        .expect("relabeling preserves validity")
}

/// The letter-injective directive sequence generating the same shift,
/// together with the gluing steps that produced it.
///
/// An already-injective input is returned unchanged with no steps. The length
/// sequence is always preserved.
pub fn injectivize(ds: &DirectiveSequence) -> (DirectiveSequence, Vec<QuotientStep>) {
    if ds.is_injective() {
        return (ds.clone(), vec![]);
    }
    let p = ds.prefix_len();
    let c = ds.cycle_len();
    let mut carry: Option<Quotient> = None;
    let mut emitted: Vec<Morphism> = Vec::new();
    let mut steps: Vec<QuotientStep> = Vec::new();
    let mut seen: HashMap<(usize, Vec<SymbolId>), usize> = HashMap::new();
    let mut n = 0usize;
    loop {
        if n >= p {
            let identity_map: Vec<SymbolId> = ds.alphabet_at(n).ids().collect();
            let key = (
                (n - p) % c,
                carry.as_ref().map(|q| q.map.clone()).unwrap_or(identity_map),
            );
            if let Some(&start) = seen.get(&key) {
                let out = DirectiveSequence::new(
                    emitted[..start].to_vec(),
                    emitted[start..].to_vec(),
                )
                .expect("construction preserves chaining and lengths");
                return (out, steps);
            }
            seen.insert(key, emitted.len());
        }
        let eta = match &carry {
            None => ds.morphism_at(n).clone(),
            Some(q) => relabel_target(ds.morphism_at(n), q),
        };
        let (quotient, injective) = quotient_of(&eta);
        emitted.push(injective.clone());
        steps.push(QuotientStep {
            level: n + 1,
            quotient: quotient.clone(),
            new_morphism: injective,
        });
        carry = Some(quotient);
        n += 1;
    }
}
