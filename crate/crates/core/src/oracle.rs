//! Independent brute-force checks for the fast paths, plus finite-window
//! recognizability probing.
//!
//! Everything here is deliberately naive — direct expansion, exhaustive
//! enumeration — and capped at desk scale. Its job is to certify the exact
//! algorithms on concrete instances, not to be fast.

use crate::alphabet::{SymbolId, Word};
use crate::column::ColumnWitness;
use crate::directive::DirectiveSequence;
use crate::error::{Error, Result};
use crate::language::{limit_word_prefix, persistent_words};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, BTreeSet};

const EXPANSION_CAP: usize = 2_000_000;
const ENUMERATION_CAP: u128 = 4_000_000;

/// Cardinality of the j-th column of `composite(m, n)`, by materializing the
/// composite. `m == n` counts the identity (the full alphabet).
pub fn empirical_column_cardinality(
    ds: &DirectiveSequence,
    m: usize,
    n: usize,
    j: usize,
) -> Result<usize> {
    let mut width = 1usize;
    for l in m..n {
        width = width.saturating_mul(ds.length_at(l));
    }
    if width > EXPANSION_CAP {
        return Err(Error::BudgetExceeded(format!(
            "composite({m}, {n}) is too large to expand"
        )));
    }
    let composite = ds.composite(m, n)?;
    if j >= composite.length() {
        return Err(Error::UnknownSymbol(format!("column {j} out of range")));
    }
    let set: BTreeSet<SymbolId> = composite
        .source()
        .ids()
        .map(|a| composite.image(a)[j])
        .collect();
    Ok(set.len())
}

/// For each candidate modulus d, the set of residues `position mod d` at
/// which `word` occurs in the depth-prefix of the level limit word. A single
/// residue supports d as a divisor of the word's recurrence structure.
pub fn occurrence_residues(
    ds: &DirectiveSequence,
    level: usize,
    word: &[SymbolId],
    depth: usize,
    candidates: &[u64],
) -> Result<BTreeMap<u64, BTreeSet<u64>>> {
    if word.is_empty() {
        return Err(Error::NoOccurrence);
    }
    let u = limit_word_prefix(ds, level, depth)?;
    let u = &u[..depth.min(u.len())];
    let mut positions = Vec::new();
    if u.len() >= word.len() {
        for i in 0..=(u.len() - word.len()) {
            if &u[i..i + word.len()] == word {
                positions.push(i as u64);
            }
        }
    }
    if positions.is_empty() {
        return Err(Error::NoOccurrence);
    }
    let mut out = BTreeMap::new();
    for &d in candidates {
        assert!(d >= 1, "moduli must be positive");
        out.insert(d, positions.iter().map(|p| p % d).collect());
    }
    Ok(out)
}

/// Count the centred representations of a window of the level-`level` limit
/// word: pairs (k, v) with 0 <= k < q, v a persistent level-(level+1) word,
/// such that shifting the substituted v by k reproduces the window at its
/// anchor. Wide windows around a recognizable point admit exactly one.
pub fn desubstitution_count(
    ds: &DirectiveSequence,
    level: usize,
    window: &[SymbolId],
    anchor: usize,
) -> Result<usize> {
    if window.is_empty() {
        return Err(Error::WindowNotFound);
    }
    let u = limit_word_prefix(ds, level, anchor + window.len())?;
    if u.len() < anchor + window.len() || &u[anchor..anchor + window.len()] != window {
        return Err(Error::WindowNotFound);
    }
    let q = ds.length_at(level);
    let theta = ds.morphism_at(level);
    let deep = ds.alphabet_at(level + 1);
    let max_tiles = window.len().div_ceil(q) + 1;
    let lang = persistent_words(ds, level + 1, max_tiles);
    let mut count = 0usize;
    for k in 0..q {
        let t_lo = (anchor + k) / q;
        let t_hi = (anchor + k + window.len() - 1) / q;
        let tiles = t_hi - t_lo + 1;
        // admissible letters per tile, from the overlap constraints alone
        let mut admissible: Vec<Vec<SymbolId>> = Vec::with_capacity(tiles);
        for t in t_lo..=t_hi {
            let mut letters = Vec::new();
            'letters: for a in deep.ids() {
                let img = theta.image(a);
                for (off, &w) in window.iter().enumerate() {
                    let pos = anchor + off + k;
                    if pos / q == t && img[pos % q] != w {
                        continue 'letters;
                    }
                }
                letters.push(a);
            }
            admissible.push(letters);
        }
        let combos: u128 = admissible.iter().map(|l| l.len() as u128).product();
        if combos > ENUMERATION_CAP {
            return Err(Error::BudgetExceeded(format!(
                "{combos} candidate preimages at shift {k}"
            )));
        }
        // enumerate candidate words and keep the persistent ones
        let mut stack: Vec<Word> = vec![Vec::new()];
        for letters in &admissible {
            let mut next = Vec::new();
            for partial in &stack {
                for &a in letters {
                    let mut w = partial.clone();
                    w.push(a);
                    // prune with the subword-closed language as we grow
                    if lang.contains(&w[w.len().saturating_sub(lang.max_len)..]) {
                        next.push(w);
                    }
                }
            }
            stack = next;
        }
        count += stack.iter().filter(|v| lang.contains(v)).count();
    }
    Ok(count)
}

/// The residues a column witness pins on the odometer: the origin sits at the
/// start of the witness column's base-level subtile.
pub fn witness_residues(
    ds: &DirectiveSequence,
    witness: &ColumnWitness,
) -> Vec<(usize, BigUint)> {
    let pm = ds.partial_product(witness.base_level);
    vec![
        (witness.base_level, BigUint::from(0u32)),
        (witness.level, &witness.column * &pm),
    ]
}

/// Count the distinct central supertile towers compatible with coherent
/// odometer residues: letters at the deepest given level are enumerated and
/// the column constraints are intersected down the tower at every other
/// given level. The brute-force counterpart of the fibre-cardinality bound.
pub fn fibre_count(
    ds: &DirectiveSequence,
    residues: &[(usize, BigUint)],
) -> Result<usize> {
    if residues.is_empty() {
        return Err(Error::IncoherentResidues("no residues given".into()));
    }
    for w in residues.windows(2) {
        let (l1, r1) = &w[0];
        let (l2, r2) = &w[1];
        if l2 <= l1 {
            return Err(Error::IncoherentResidues(format!(
                "levels must increase: {l1} then {l2}"
            )));
        }
        if r2 % ds.partial_product(*l1) != *r1 {
            return Err(Error::IncoherentResidues(format!(
                "residue at level {l2} does not reduce to level {l1}"
            )));
        }
    }
    for (l, r) in residues {
        if *r >= ds.partial_product(*l) {
            return Err(Error::IncoherentResidues(format!(
                "residue at level {l} exceeds the modulus"
            )));
        }
    }
    let (deepest, r_deep) = residues.last().expect("non-empty");
    let coordinate_levels: Vec<usize> =
        residues[..residues.len() - 1].iter().map(|(l, _)| *l).collect();
    let mut towers: BTreeSet<Vec<SymbolId>> = BTreeSet::new();
    for a in ds.alphabet_at(*deepest).ids() {
        let mut tower = Vec::with_capacity(coordinate_levels.len());
        for &m in &coordinate_levels {
            let idx = r_deep / ds.partial_product(m);
            let map = crate::column::composite_column_map(ds, m, *deepest, &idx)?;
            tower.push(map[a as usize]);
        }
        towers.insert(tower);
    }
    Ok(towers.len())
}

/// Convenience used by tests: a usize view of a small BigUint.
pub fn to_usize(b: &BigUint) -> Option<usize> {
    b.to_usize()
}
