//! Combinatorial heights per level, alphabet-partition certificates, and the
//! pure base construction.
//!
//! The height at a level is the largest divisor of the limit word's
//! return-position gcd that is coprime to every deeper morphism length. A
//! finite prefix only upper-bounds this, so a value is *certified* only when
//! an alphabet partition witnesses it: a partition of the level alphabet into
//! h blocks that every persistent two-letter word advances by exactly one
//! step. Heights are always computed on the injectivization.

use crate::alphabet::{Alphabet, SymbolId, Word};
use crate::directive::{is_torsion_free, DirectiveSequence, TorsionFreeReport};
use crate::error::{Error, Result};
use crate::injectivize::injectivize;
use crate::language::{
    limit_word_prefix_from, limit_word_seeds, persistent_words, return_gcd_from, LimitWordSeed,
};
use crate::morphism::Morphism;
use num_integer::gcd;
use std::collections::BTreeSet;

/// Default analysis depth: enough prefix to contain 64 full supertiles of the
/// deepest scanned level, at least 1e5 symbols, capped for sanity.
pub fn default_height_depth(ds: &DirectiveSequence) -> usize {
    let levels = ds.scan_levels();
    let top = ds.partial_product_clamped(levels, 4_000_000);
    top.saturating_mul(64).clamp(100_000, 4_000_000)
}

/// A cyclic partition of a level alphabet witnessing a height divisor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightCertificate {
    pub level: usize,
    pub h: u64,
    pub alphabet: Alphabet,
    /// `classes[a]` = block index (0..h) of letter `a`; the limit word's
    /// initial letter sits in block 0.
    pub classes: Vec<u32>,
    /// The persistent length-2 words the partition was checked against.
    pub evidence: BTreeSet<Word>,
}

impl HeightCertificate {
    /// Every persistent 2-word must advance the block index by one, mod h.
    pub fn is_consistent(&self) -> bool {
        self.evidence.iter().filter(|w| w.len() == 2).all(|w| {
            let a = self.classes[w[0] as usize] as u64;
            let b = self.classes[w[1] as usize] as u64;
            b == (a + 1) % self.h
        })
    }
}

/// The height value at one level, with its evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelHeight {
    pub level: usize,
    pub h: u64,
    /// Present iff the value is certified (always present for h = 1).
    pub certificate: Option<HeightCertificate>,
    pub depth: usize,
    /// Return-gcd-derived value per limit-word seed at this level.
    pub per_seed: Vec<(LimitWordSeed, u64)>,
    pub seeds_disagree: bool,
}

impl LevelHeight {
    pub fn certified(&self) -> bool {
        self.certificate.is_some()
    }
}

/// Largest divisor of g coprime to every value in `tails`.
fn coprime_part(mut g: u64, tails: &BTreeSet<u64>) -> u64 {
    for &q in tails {
        loop {
            let d = gcd(g, q);
            if d == 1 {
                break;
            }
            g /= d;
        }
    }
    g
}

/// Try to partition the level alphabet into d blocks advanced cyclically by
/// every persistent 2-word. Block 0 contains `root`.
pub fn partition_certificate(
    level: usize,
    alphabet: &Alphabet,
    d: u64,
    root: SymbolId,
    evidence: &BTreeSet<Word>,
) -> Option<HeightCertificate> {
    let n = alphabet.len();
    let edges: Vec<(SymbolId, SymbolId)> = evidence
        .iter()
        .filter(|w| w.len() == 2)
        .map(|w| (w[0], w[1]))
        .collect();
    let mut classes: Vec<Option<u32>> = vec![None; n];
    classes[root as usize] = Some(0);
    loop {
        // propagate constraints in both directions until stable
        let mut changed = false;
        for &(a, b) in &edges {
            let ca = classes[a as usize];
            let cb = classes[b as usize];
            match (ca, cb) {
                (Some(x), None) => {
                    classes[b as usize] = Some(((x as u64 + 1) % d) as u32);
                    changed = true;
                }
                (None, Some(y)) => {
                    classes[a as usize] = Some(((y as u64 + d - 1) % d) as u32);
                    changed = true;
                }
                (Some(x), Some(y)) => {
                    if (x as u64 + 1) % d != y as u64 {
                        return None;
                    }
                }
                (None, None) => {}
            }
        }
        if !changed {
            // root any untouched letter (a separate component) and continue
            match classes.iter().position(|c| c.is_none()) {
                Some(i) => classes[i] = Some(0),
                None => break,
            }
        }
    }
    let classes: Vec<u32> = classes
        .into_iter()
        .map(|c| c.expect("all assigned"))
        .collect();
    let cert = HeightCertificate {
        level,
        h: d,
        alphabet: alphabet.clone(),
        classes,
        evidence: evidence.clone(),
    };
    cert.is_consistent().then_some(cert)
}

/// Height at one level of an already-injective sequence.
fn level_height(ds: &DirectiveSequence, level: usize, depth: usize) -> Result<LevelHeight> {
    let tails = ds.lengths_from(level);
    let seeds = limit_word_seeds(ds, level)?;
    let mut per_seed = Vec::with_capacity(seeds.len());
    for seed in &seeds {
        let g = return_gcd_from(ds, level, depth, seed)?;
        per_seed.push((seed.clone(), coprime_part(g, &tails)));
    }
    let h = per_seed
        .iter()
        .map(|(_, v)| *v)
        .max()
        .expect("at least one seed");
    let seeds_disagree = per_seed.iter().any(|(_, v)| *v != h);
    let evidence: BTreeSet<Word> = persistent_words(ds, level, 2)
        .words
        .into_iter()
        .filter(|w| w.len() == 2)
        .collect();
    let root = limit_word_prefix_from(ds, level, 1, &seeds[0])?[0];
    let certificate = partition_certificate(level, ds.alphabet_at(level), h, root, &evidence);
    Ok(LevelHeight {
        level,
        h,
        certificate,
        depth,
        per_seed,
        seeds_disagree,
    })
}

/// h at one level; always computed on the injectivization of `ds`.
/// Non-primitive sequences are refused: minimality is not established there.
pub fn comb_height_at(ds: &DirectiveSequence, level: usize, depth: usize) -> Result<LevelHeight> {
    if !ds.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let (inj, _) = injectivize(ds);
    level_height(&inj, level, depth)
}

/// The level table for every distinct tail of the injectivization, and its
/// maximum, the combinatorial height.
pub fn comb_height(ds: &DirectiveSequence, depth: usize) -> Result<(u64, Vec<LevelHeight>)> {
    if !ds.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let (inj, _) = injectivize(ds);
    let mut levels = Vec::new();
    for n in 0..inj.scan_levels() {
        levels.push(level_height(&inj, n, depth)?);
    }
    let h = levels.iter().map(|l| l.h).max().expect("cycle is non-empty");
    Ok((h, levels))
}

/// Full height computation: combinatorial height, a certificate for it, and
/// the arithmetic cross-checks.
#[derive(Debug, Clone)]
pub struct HeightResult {
    pub h: u64,
    pub certificate: Option<HeightCertificate>,
    pub levels: Vec<LevelHeight>,
    pub torsion_free: TorsionFreeReport,
    /// True when torsion-freeness failed: the value is then only the
    /// combinatorial quantity, not a proven dynamical height.
    pub combinatorial_only: bool,
    /// h divides q - 1 for every cycle length (vacuous for h = 1).
    pub divisibility_ok: bool,
    pub depth: usize,
}

impl HeightResult {
    pub fn certified(&self) -> bool {
        self.certificate.is_some()
    }
}

pub fn height(ds: &DirectiveSequence, depth: usize) -> Result<HeightResult> {
    let torsion_free = is_torsion_free(ds);
    let (h, levels) = comb_height(ds, depth)?;
    let certificate = levels
        .iter()
        .filter(|l| l.h == h)
        .find_map(|l| l.certificate.clone());
    if certificate.is_none() {
        return Err(Error::CertificateNotFound { h });
    }
    let divisibility_ok =
        h == 1 || ds.cycle().iter().all(|m| (m.length() as u64 - 1).is_multiple_of(h));
    Ok(HeightResult {
        h,
        certificate,
        levels,
        combinatorial_only: !torsion_free.torsion_free,
        torsion_free,
        divisibility_ok,
        depth,
    })
}

/// The coding of one pure-base level: coded letter i decodes to `words[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelCoding {
    pub level: usize,
    pub alphabet: Alphabet,
    pub words: Vec<Word>,
}

impl LevelCoding {
    pub fn decode(&self, coded: &[SymbolId]) -> Word {
        let block = self.words.first().map_or(1, Vec::len);
        let mut out = Vec::with_capacity(coded.len() * block);
        for &b in coded {
            out.extend_from_slice(&self.words[b as usize]);
        }
        out
    }
}

/// The pure base: the same shift recoded by length-h blocks, with trivial
/// height and an unchanged length sequence.
#[derive(Debug, Clone)]
pub struct PureBaseResult {
    pub pure: DirectiveSequence,
    /// Codings for the pure prefix levels plus one full cycle.
    pub codings: Vec<LevelCoding>,
    pub h: u64,
    pub height: HeightResult,
    /// The injectivization the construction ran on.
    pub base: DirectiveSequence,
}

impl PureBaseResult {
    pub fn coding_at(&self, level: usize) -> &LevelCoding {
        let p = self.pure.prefix_len();
        let c = self.pure.cycle_len();
        if level < p {
            &self.codings[level]
        } else {
            &self.codings[p + (level - p) % c]
        }
    }
}

fn coded_alphabet(base: &Alphabet, words: &[Word]) -> Alphabet {
    let names: Vec<String> = words
        .iter()
        .map(|w| crate::alphabet::coded_symbol_name(base, w))
        .collect();
    match Alphabet::new(names) {
        Ok(a) => a,
        // joined names collided (symbols containing the separator); fall back
        // to positional names
        Err(_) => Alphabet::new(
            (0..words.len())
                .map(|i| format!("w{i}"))
                .collect::<Vec<_>>(),
        )
        .expect("positional names are distinct"),
    }
}

/// Prefix of the tower word at `n`, derived from the single seed at the cycle
/// base so that consecutive levels really satisfy the tower identity.
fn tower_prefix(
    inj: &DirectiveSequence,
    n: usize,
    min_len: usize,
    p: usize,
    t: usize,
    seed: &LimitWordSeed,
) -> Result<Word> {
    if n == p {
        return limit_word_prefix_from(inj, p, min_len, seed);
    }
    // lift to the next tower copy at or above n, then push back down
    let top = if n < p {
        p
    } else {
        p + (n - p).div_ceil(t) * t
    };
    let down = inj.composite(n, top)?;
    let factor = down.length().max(1);
    let base = limit_word_prefix_from(inj, p, min_len.div_ceil(factor), seed)?;
    Ok(down.apply(&base))
}

/// Build the pure base of `ds` (through its injectivization).
pub fn pure_base(ds: &DirectiveSequence, depth: usize) -> Result<PureBaseResult> {
    let hr = height(ds, depth)?;
    if !hr.torsion_free.torsion_free {
        return Err(Error::NotTorsionFree(hr.torsion_free.explanation.clone()));
    }
    let (inj, _) = injectivize(ds);
    let h = hr.h;
    if h == 1 {
        // length-1 blocks: the pure base is the injectivization itself
        let levels = inj.scan_levels();
        let codings = (0..levels)
            .map(|n| LevelCoding {
                level: n,
                alphabet: inj.alphabet_at(n).clone(),
                words: inj.alphabet_at(n).ids().map(|a| vec![a]).collect(),
            })
            .collect();
        return Ok(PureBaseResult {
            pure: inj.clone(),
            codings,
            h,
            height: hr,
            base: inj,
        });
    }
    let p = inj.prefix_len();
    let hs = h as usize;
    // The limit-word tower repeats with the seed's telescope step, so block
    // sets along the tail are identified modulo that step.
    let seed = limit_word_seeds(&inj, p)?
        .into_iter()
        .next()
        .expect("non-empty");
    let t = seed.telescope_step;
    let total = p + t;
    let tail_index = |n: usize| p + (n - p) % t;
    // Seed each level's block set with the first h-block of its tower word.
    let mut blocks: Vec<BTreeSet<Word>> = Vec::with_capacity(total);
    for n in 0..total {
        let word = tower_prefix(&inj, n, hs, p, t, &seed)?;
        let mut set = BTreeSet::new();
        set.insert(word[..hs].to_vec());
        blocks.push(set);
    }
    // Close: blocks of level n are the h-chunks of images of blocks of n+1.
    loop {
        let mut changed = false;
        for n in 0..total {
            let deeper = if n + 1 < p { n + 1 } else { tail_index(n + 1) };
            let above: Vec<Word> = blocks[deeper].iter().cloned().collect();
            let m = inj.morphism_at(n);
            for w in above {
                let img = m.apply(&w);
                for chunk in img.chunks_exact(hs) {
                    if blocks[n].insert(chunk.to_vec()) {
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    // Code each level and rebuild the morphisms over the coded alphabets.
    let mut codings: Vec<LevelCoding> = Vec::with_capacity(total);
    for (n, set) in blocks.iter().enumerate() {
        let words: Vec<Word> = set.iter().cloned().collect();
        let alphabet = coded_alphabet(inj.alphabet_at(n), &words);
        codings.push(LevelCoding {
            level: n,
            alphabet,
            words,
        });
    }
    let code = |n: usize, w: &[SymbolId]| -> Result<SymbolId> {
        codings[n]
            .words
            .iter()
            .position(|v| v == w)
            .map(|k| k as SymbolId)
            .ok_or_else(|| {
                Error::NotClosed(format!(
                    "block `{}` missing at level {n}",
                    inj.alphabet_at(n).render_word(w)
                ))
            })
    };
    let mut pure_morphisms = Vec::with_capacity(total);
    for n in 0..total {
        let deeper = if n + 1 < p { n + 1 } else { tail_index(n + 1) };
        let m = inj.morphism_at(n);
        let mut images = Vec::with_capacity(codings[deeper].words.len());
        for w in &codings[deeper].words {
            let img = m.apply(w);
            let coded: Result<Word> =
                img.chunks_exact(hs).map(|chunk| code(n, chunk)).collect();
            images.push(coded?);
        }
        pure_morphisms.push(Morphism::new(
            codings[deeper].alphabet.clone(),
            codings[n].alphabet.clone(),
            images,
        )?);
    }
    let pure = DirectiveSequence::new(
        pure_morphisms[..p].to_vec(),
        pure_morphisms[p..].to_vec(),
    )?;
    // Postconditions: unchanged lengths, torsion-free, trivial height.
    for n in 0..pure.scan_levels() {
        if pure.length_at(n) != inj.length_at(n) {
            return Err(Error::NotClosed(format!(
                "length changed at level {n}: {} vs {}",
                pure.length_at(n),
                inj.length_at(n)
            )));
        }
    }
    let pure_tf = is_torsion_free(&pure);
    if !pure_tf.torsion_free {
        return Err(Error::NotClosed(format!(
            "pure base fails torsion-freeness: {}",
            pure_tf.explanation
        )));
    }
    let (pure_h, _) = comb_height(&pure, depth)?;
    if pure_h != 1 {
        return Err(Error::NotClosed(format!(
            "pure base has combinatorial height {pure_h}, expected 1"
        )));
    }
    Ok(PureBaseResult {
        pure,
        codings,
        h,
        height: hr,
        base: inj,
    })
}
