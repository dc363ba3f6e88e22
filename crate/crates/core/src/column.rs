//! Naive and true column numbers via exact cycle detection on column-map
//! sets.
//!
//! The set of column maps of `composite(m, n)` determines everything
//! downstream and lives in a finite state space, so the infimum over all
//! deeper levels is realized exactly: evolve the set level by level, detect
//! the first revisited (cycle position, map set) state, and take the minimum
//! image cardinality seen. Per the defining convention, the column number of
//! a non-injective sequence is that of its injectivization; a raw diagnostic
//! mode skips that step to reproduce what goes wrong without it.

use crate::alphabet::SymbolId;
use crate::directive::DirectiveSequence;
use crate::error::{Error, Result};
use crate::height::{pure_base, PureBaseResult};
use crate::injectivize::injectivize;
use num_bigint::BigUint;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet, HashMap};

const EVOLUTION_CAP: usize = 10_000;

/// The deduplicated column maps of `composite(base_level, level)`, each with
/// the least column index realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapSet {
    pub base_level: usize,
    pub level: usize,
    /// map vector (indexed by level-`level` letters, valued in base-level
    /// letters) -> least column index realizing it
    pub maps: BTreeMap<Vec<SymbolId>, BigUint>,
}

impl ColumnMapSet {
    pub fn min_cardinality(&self) -> usize {
        self.maps
            .keys()
            .map(|m| m.iter().collect::<BTreeSet<_>>().len())
            .min()
            .unwrap_or(0)
    }
}

/// Evolve the column-map sets of composites based at `m`, one level at a
/// time: S_{n+1} = { f ∘ g : f ∈ S_n, g ∈ columns(theta^(n)) }.
///
/// Stops at the first revisited state past the prefix (`until` = None), or
/// after exactly `until` levels. Returns the per-level sets.
pub fn column_map_sets(
    ds: &DirectiveSequence,
    m: usize,
    until: Option<usize>,
) -> Result<Vec<ColumnMapSet>> {
    let p = ds.prefix_len();
    let c = ds.cycle_len();
    let first = ds.morphism_at(m);
    let mut current: BTreeMap<Vec<SymbolId>, BigUint> = BTreeMap::new();
    for col in first.columns() {
        let idx = BigUint::from(col.index);
        current
            .entry(col.map)
            .and_modify(|e| {
                if idx < *e {
                    *e = idx.clone()
                }
            })
            .or_insert(idx);
    }
    let mut length = BigUint::from(first.length());
    let mut out = vec![ColumnMapSet {
        base_level: m,
        level: m + 1,
        maps: current.clone(),
    }];
    let mut seen: HashMap<(usize, Vec<Vec<SymbolId>>), usize> = HashMap::new();
    let mut n = m + 1;
    loop {
        if let Some(stop) = until {
            if out.len() >= stop {
                return Ok(out);
            }
        } else if n >= p {
            let key = ((n - p) % c, current.keys().cloned().collect::<Vec<_>>());
            if seen.contains_key(&key) {
                return Ok(out);
            }
            seen.insert(key, n);
        }
        if out.len() >= EVOLUTION_CAP {
            return Err(Error::BudgetExceeded(format!(
                "column-map evolution exceeded {EVOLUTION_CAP} levels"
            )));
        }
        let step = ds.morphism_at(n);
        let mut next: BTreeMap<Vec<SymbolId>, BigUint> = BTreeMap::new();
        for g in step.columns() {
            let block = BigUint::from(g.index) * &length;
            for (f, f_idx) in &current {
                let composed: Vec<SymbolId> =
                    g.map.iter().map(|&b| f[b as usize]).collect();
                let idx = &block + f_idx;
                next.entry(composed)
                    .and_modify(|e| {
                        if idx < *e {
                            *e = idx.clone()
                        }
                    })
                    .or_insert(idx);
            }
        }
        length *= BigUint::from(step.length());
        current = next;
        n += 1;
        out.push(ColumnMapSet {
            base_level: m,
            level: n,
            maps: current.clone(),
        });
    }
}

/// A concrete composite column attaining a cardinality: column `column` of
/// `composite(base_level, level)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnWitness {
    pub base_level: usize,
    pub level: usize,
    pub column: BigUint,
    pub cardinality: usize,
}

fn cardinality(map: &[SymbolId]) -> usize {
    map.iter().collect::<BTreeSet<_>>().len()
}

fn c_at_with_witness(ds: &DirectiveSequence, m: usize) -> Result<(usize, ColumnWitness)> {
    let sets = column_map_sets(ds, m, None)?;
    let value = sets
        .iter()
        .map(|s| s.min_cardinality())
        .min()
        .expect("at least one level");
    for s in &sets {
        let hit = s
            .maps
            .iter()
            .filter(|(map, _)| cardinality(map) == value)
            .min_by_key(|(_, idx)| (*idx).clone());
        if let Some((map, idx)) = hit {
            return Ok((
                value,
                ColumnWitness {
                    base_level: m,
                    level: s.level,
                    column: idx.clone(),
                    cardinality: cardinality(map),
                },
            ));
        }
    }
    unreachable!("minimum is attained in some level set")
}

/// c(theta, m) without injectivizing first; diagnostic only.
pub fn c_at_raw(ds: &DirectiveSequence, m: usize) -> Result<usize> {
    Ok(c_at_with_witness(ds, m)?.0)
}

/// c(theta, m), computed on the injectivization.
pub fn c_at(ds: &DirectiveSequence, m: usize) -> Result<usize> {
    let (inj, _) = injectivize(ds);
    Ok(c_at_with_witness(&inj, m)?.0)
}

/// The naive column number: the maximum of the increasing bounded sequence
/// c(theta, m), with a concrete witness column attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveColumn {
    pub value: usize,
    pub witness: ColumnWitness,
    pub per_base: Vec<usize>,
}

pub fn naive_column_number(ds: &DirectiveSequence) -> Result<NaiveColumn> {
    let (inj, _) = injectivize(ds);
    naive_column_number_injective(&inj)
}

/// Same, assuming `ds` is already letter-injective (not rechecked).
pub fn naive_column_number_injective(ds: &DirectiveSequence) -> Result<NaiveColumn> {
    let mut per_base = Vec::new();
    let mut best: Option<(usize, ColumnWitness)> = None;
    for m in 0..ds.scan_levels() {
        let (v, w) = c_at_with_witness(ds, m)?;
        per_base.push(v);
        match &best {
            Some((bv, _)) if *bv >= v => {}
            _ => best = Some((v, w)),
        }
    }
    let (value, witness) = best.expect("at least one base level");
    Ok(NaiveColumn {
        value,
        witness,
        per_base,
    })
}

/// The true column number: the naive column number of the pure base.
#[derive(Debug, Clone)]
pub struct TrueColumn {
    pub value: usize,
    pub naive_of_pure: NaiveColumn,
    pub pure: PureBaseResult,
}

pub fn column_number(ds: &DirectiveSequence, depth: usize) -> Result<TrueColumn> {
    let pure = pure_base(ds, depth)?;
    let naive_of_pure = naive_column_number(&pure.pure)?;
    Ok(TrueColumn {
        value: naive_of_pure.value,
        naive_of_pure,
        pure,
    })
}

/// The column map of `composite(m, n)` at column `j`, computed by peeling one
/// factor at a time instead of materializing the composite.
pub fn composite_column_map(
    ds: &DirectiveSequence,
    m: usize,
    n: usize,
    j: &BigUint,
) -> Result<Vec<SymbolId>> {
    assert!(m < n, "need at least one factor");
    if *j >= ds.partial_product(n) / ds.partial_product(m) {
        return Err(Error::UnknownSymbol(format!("column index {j} out of range")));
    }
    // factor j level by level: j = k * len(composite(m, l)) + i
    let mut indices = Vec::with_capacity(n - m);
    let mut j = j.clone();
    let mut block: BigUint = (m..n).map(|l| BigUint::from(ds.length_at(l))).product();
    for l in (m..n).rev() {
        block /= BigUint::from(ds.length_at(l));
        if block.is_zero() {
            break;
        }
        let k = (&j / &block).to_u32_digits();
        let k = if k.is_empty() { 0 } else { k[0] as usize };
        indices.push((l, k));
        j %= &block;
    }
    // innermost factor first: map = theta^(m)_{k_m} ∘ ... ∘ theta^(n-1)_{k_{n-1}}
    let mut map: Vec<SymbolId> = ds.alphabet_at(n).ids().collect();
    for &(l, k) in &indices {
        let cols = ds.morphism_at(l).columns();
        for entry in map.iter_mut() {
            *entry = cols[k].apply(*entry);
        }
    }
    Ok(map)
}
