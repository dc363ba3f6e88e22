//! Supertiles, persistent finite languages, limit-word prefixes and return
//! positions.
//!
//! A word is *persistent* at a level when it occurs in arbitrarily deep
//! composite images at that level. The word-set transfer map lives in a
//! finite state space, so the persistent set is computed exactly by cycle
//! detection along the repeating part of the directive sequence.

use crate::alphabet::{SymbolId, Word};
use crate::directive::DirectiveSequence;
use crate::error::{Error, Result};
use num_integer::gcd;
use std::collections::{BTreeSet, HashMap};

/// Guard against pathological inputs; the transfer map state space is finite,
/// so detection normally ends far earlier.
const STABILIZE_CAP: usize = 10_000;

/// One-sided limit-word seed: `composite(level, level + telescope_step)`
/// applied to `letter` begins with `letter` again, so iterating it generates
/// the limit word at `level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitWordSeed {
    pub level: usize,
    pub letter: SymbolId,
    pub telescope_step: usize,
}

/// The words of length <= `max_len` persistent at `level`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistentLanguage {
    pub level: usize,
    pub max_len: usize,
    pub words: BTreeSet<Word>,
    pub stabilized: bool,
}

impl PersistentLanguage {
    pub fn contains(&self, w: &[SymbolId]) -> bool {
        self.words.contains(w)
    }

    pub fn words_of_len(&self, len: usize) -> impl Iterator<Item = &Word> + '_ {
        self.words.iter().filter(move |w| w.len() == len)
    }
}

/// The n-supertile of the letter `a`: `composite(0, n)(a)`.
pub fn supertile(ds: &DirectiveSequence, n: usize, a: SymbolId) -> Result<Word> {
    if a as usize >= ds.alphabet_at(n).len() {
        return Err(Error::UnknownSymbol(format!("<id {a} at level {n}>")));
    }
    Ok(ds.composite(0, n)?.image(a).to_vec())
}

/// One descent step: subwords (length <= k) of the level-n images of the
/// given level-(n+1) word set.
///
/// The input set is closed under subwords, so every window of an image is a
/// window of the image of a short subword, starting inside the first letter's
/// image. Only those starts need scanning, which keeps the cost linear in the
/// morphism length instead of the full expanded image.
fn descend_step(
    ds: &DirectiveSequence,
    n: usize,
    words: &BTreeSet<Word>,
    k: usize,
) -> BTreeSet<Word> {
    let m = ds.morphism_at(n);
    let q = m.length();
    let span = 1 + (k - 1).div_ceil(q);
    let mut out = BTreeSet::new();
    for w in words {
        if w.len() > span {
            continue;
        }
        let img = m.apply(w);
        for start in 0..q.min(img.len()) {
            for len in 1..=k.min(img.len() - start) {
                out.insert(img[start..start + len].to_vec());
            }
        }
    }
    out
}

/// Descend a word set from `from` down to `to` (applying `from - to` steps).
fn descend_to(
    ds: &DirectiveSequence,
    from: usize,
    to: usize,
    mut words: BTreeSet<Word>,
    k: usize,
) -> BTreeSet<Word> {
    for n in (to..from).rev() {
        words = descend_step(ds, n, &words, k);
    }
    words
}

/// The persistent language at `level`, up to `max_len`.
///
/// For each residue class of starting depths along the cycle, the sequence of
/// descended word sets is iterated until it revisits a state; the sets of one
/// full period are then descended to `level` and intersected over every
/// residue class.
pub fn persistent_words(
    ds: &DirectiveSequence,
    level: usize,
    max_len: usize,
) -> PersistentLanguage {
    assert!(max_len >= 1, "max_len must be >= 1");
    // Window arithmetic needs a little slack around short words.
    let k = max_len.max(4);
    let c = ds.cycle_len();
    let chk = level.max(ds.prefix_len());
    let mut period_sets: Vec<BTreeSet<Word>> = Vec::new();
    let mut stabilized = true;
    for offset in 1..=c {
        // Letters `offset` levels above the checkpoint, descended to it.
        let letters: BTreeSet<Word> =
            ds.alphabet_at(chk + offset).ids().map(|a| vec![a]).collect();
        let base = descend_to(ds, chk + offset, chk, letters, k);
        // Iterate the full-cycle descent at the checkpoint.
        let mut seen: HashMap<Vec<Word>, usize> = HashMap::new();
        let mut states: Vec<BTreeSet<Word>> = vec![base];
        let mut found = None;
        for i in 0..STABILIZE_CAP {
            let key: Vec<Word> = states[i].iter().cloned().collect();
            if let Some(&j) = seen.get(&key) {
                found = Some(j);
                break;
            }
            seen.insert(key, i);
            let next = descend_to(ds, chk + c, chk, states[i].clone(), k);
            states.push(next);
        }
        match found {
            Some(mu) => {
                // one full period: states[mu..]
                period_sets.extend(states[mu..states.len() - 1].iter().cloned());
            }
            None => {
                stabilized = false;
                period_sets.push(states.last().expect("non-empty").clone());
            }
        }
    }
    let mut result: Option<BTreeSet<Word>> = None;
    for set in period_sets {
        let descended = descend_to(ds, chk, level, set, k);
        result = Some(match result {
            None => descended,
            Some(acc) => acc.intersection(&descended).cloned().collect(),
        });
    }
    let words = result
        .unwrap_or_default()
        .into_iter()
        .filter(|w| w.len() <= max_len)
        .collect();
    PersistentLanguage {
        level,
        max_len,
        words,
        stabilized,
    }
}

/// All limit-word seeds at the lowest cycle-aligned level >= `level`: the
/// letters lying on a cycle of the first-letter map of the full-cycle
/// composite, each with its minimal step.
pub fn limit_word_seeds(ds: &DirectiveSequence, level: usize) -> Result<Vec<LimitWordSeed>> {
    let l0 = level.max(ds.prefix_len());
    let c = ds.cycle_len();
    let theta = ds.composite(l0, l0 + c)?;
    let size = theta.source().len();
    let first = |a: SymbolId| theta.image(a)[0];
    let mut seeds = Vec::new();
    for a in theta.source().ids() {
        let mut x = a;
        for step in 1..=size {
            x = first(x);
            if x == a {
                seeds.push(LimitWordSeed {
                    level: l0,
                    letter: a,
                    telescope_step: step * c,
                });
                break;
            }
        }
    }
    if seeds.is_empty() {
        return Err(Error::NoSeed);
    }
    seeds.sort_by_key(|s| (s.telescope_step, s.letter));
    Ok(seeds)
}

/// The deterministic seed: minimal step, then smallest letter.
pub fn limit_word_seed(ds: &DirectiveSequence, level: usize) -> Result<LimitWordSeed> {
    Ok(limit_word_seeds(ds, level)?
        .into_iter()
        .next()
        .expect("seed list is non-empty"))
}

/// Apply `m` letterwise, stopping once `target` symbols are produced.
fn apply_until(m: &crate::morphism::Morphism, input: &[SymbolId], target: usize) -> Word {
    let mut out = Vec::with_capacity(target + m.length());
    for &a in input {
        out.extend_from_slice(m.image(a));
        if out.len() >= target {
            break;
        }
    }
    out
}

/// A prefix, of length >= `min_len`, of the one-sided limit word at `level`
/// generated from the given seed. Larger `min_len` yields extensions.
pub fn limit_word_prefix_from(
    ds: &DirectiveSequence,
    level: usize,
    min_len: usize,
    seed: &LimitWordSeed,
) -> Result<Word> {
    let l0 = seed.level;
    debug_assert!(l0 >= level);
    let theta = ds.composite(l0, l0 + seed.telescope_step)?;
    // How many level-l0 symbols are needed before descending to `level`.
    let mut expand_factor = 1usize;
    for n in level..l0 {
        expand_factor = expand_factor.saturating_mul(ds.length_at(n));
    }
    let target = min_len.max(1).div_ceil(expand_factor);
    let mut w: Word = vec![seed.letter];
    while w.len() < target {
        w = apply_until(&theta, &w, target);
    }
    if l0 > level {
        w = ds.composite(level, l0)?.apply(&w);
    }
    Ok(w)
}

/// Prefix of the limit word from the deterministic seed.
pub fn limit_word_prefix(ds: &DirectiveSequence, level: usize, min_len: usize) -> Result<Word> {
    let seed = limit_word_seed(ds, level)?;
    limit_word_prefix_from(ds, level, min_len, &seed)
}

/// gcd of the return positions of the initial letter within the first `depth`
/// symbols of the limit word at `level`. Deeper windows can only refine the
/// gcd downward (divisibility-wise).
pub fn return_gcd(ds: &DirectiveSequence, level: usize, depth: usize) -> Result<u64> {
    let seed = limit_word_seed(ds, level)?;
    return_gcd_from(ds, level, depth, &seed)
}

/// Same, for an explicit seed.
pub fn return_gcd_from(
    ds: &DirectiveSequence,
    level: usize,
    depth: usize,
    seed: &LimitWordSeed,
) -> Result<u64> {
    let w = limit_word_prefix_from(ds, level, depth, seed)?;
    let w = &w[..depth.min(w.len())];
    let u0 = w[0];
    let mut g: u64 = 0;
    for (k, &s) in w.iter().enumerate().skip(1) {
        if s == u0 {
            g = gcd(g, k as u64);
            if g == 1 {
                break;
            }
        }
    }
    if g == 0 {
        Err(Error::NoReturn { depth })
    } else {
        Ok(g)
    }
}
