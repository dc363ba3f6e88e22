//! Eventually-periodic directive sequences and their length arithmetic.
//!
//! A directive sequence is a chain of constant-length morphisms
//! theta^(0), theta^(1), ... with source(theta^(n)) = target(theta^(n+1)).
//! We represent the eventually-periodic class: a finite prefix followed by a
//! repeating cycle. Every level-indexed quantity then becomes exactly
//! computable by cycle detection.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::language;
use crate::morphism::{compose, default_primitivity_cap, primitive_power, Morphism};
use crate::supernatural::{factorize, prime_support, Exponent, SupernaturalNumber};
use num_bigint::BigUint;
use num_traits::One;
use std::collections::BTreeSet;

/// Hard cap on the aperiodicity screen's expanded prefix.
const SCREEN_CAP: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectiveSequence {
    prefix: Vec<Morphism>,
    cycle: Vec<Morphism>,
}

impl DirectiveSequence {
    pub fn new(prefix: Vec<Morphism>, cycle: Vec<Morphism>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::ChainingError {
                position: prefix.len(),
                detail: "cycle must be non-empty".into(),
            });
        }
        if cycle.iter().all(|m| m.length() == 1) {
            return Err(Error::TrivialCycle);
        }
        let ds = Self { prefix, cycle };
        let total = ds.prefix.len() + ds.cycle.len();
        for n in 0..total {
            let here = ds.morphism_at(n);
            let deeper = ds.morphism_at(n + 1);
            if here.source() != deeper.target() {
                return Err(Error::ChainingError {
                    position: n,
                    detail: format!(
                        "source {} of level {n} != target {} of level {}",
                        here.source(),
                        deeper.target(),
                        n + 1
                    ),
                });
            }
        }
        Ok(ds)
    }

    /// Stationary sequence of a single substitution.
    pub fn stationary(m: Morphism) -> Result<Self> {
        Self::new(vec![], vec![m])
    }

    pub fn prefix(&self) -> &[Morphism] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Morphism] {
        &self.cycle
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle.len()
    }

    /// Levels 0..prefix+cycle cover every distinct tail; deeper levels repeat.
    pub fn scan_levels(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn morphism_at(&self, n: usize) -> &Morphism {
        if n < self.prefix.len() {
            &self.prefix[n]
        } else {
            &self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The alphabet at level n (the target of theta^(n)).
    pub fn alphabet_at(&self, n: usize) -> &Alphabet {
        self.morphism_at(n).target()
    }

    /// q_n, the length of theta^(n).
    pub fn length_at(&self, n: usize) -> usize {
        self.morphism_at(n).length()
    }

    /// p_n = q_0 * ... * q_{n-1}; arbitrary precision, p_0 = 1.
    pub fn partial_product(&self, n: usize) -> BigUint {
        let mut p = BigUint::one();
        for k in 0..n {
            p *= BigUint::from(self.length_at(k));
        }
        p
    }

    /// p_n clamped to `cap` (for sizing finite expansions).
    pub fn partial_product_clamped(&self, n: usize, cap: usize) -> usize {
        let mut p: usize = 1;
        for k in 0..n {
            p = p.saturating_mul(self.length_at(k));
            if p >= cap {
                return cap;
            }
        }
        p
    }

    pub fn max_alphabet_size(&self) -> usize {
        (0..=self.scan_levels())
            .map(|n| self.alphabet_at(n).len())
            .max()
            .unwrap_or(0)
    }

    /// The distinct morphism lengths occurring from level n on.
    pub fn lengths_from(&self, n: usize) -> BTreeSet<u64> {
        let mut out: BTreeSet<u64> = self.cycle.iter().map(|m| m.length() as u64).collect();
        for k in n..self.prefix.len() {
            out.insert(self.prefix[k].length() as u64);
        }
        out
    }

    /// theta^(m) ∘ theta^(m+1) ∘ ... ∘ theta^(n-1); the identity when m = n.
    pub fn composite(&self, m: usize, n: usize) -> Result<Morphism> {
        assert!(m <= n, "composite requires m <= n");
        if m == n {
            return Ok(Morphism::identity(self.alphabet_at(m)));
        }
        let mut acc = self.morphism_at(m).clone();
        for k in (m + 1)..n {
            acc = compose(&acc, self.morphism_at(k))?;
        }
        Ok(acc)
    }

    /// Composite of one full cycle, starting at the cycle base. Its source and
    /// target alphabets coincide.
    pub fn cycle_composite(&self) -> Morphism {
        let p = self.prefix.len();
        self.composite(p, p + self.cycle.len())
            .expect("validated sequence always chains")
    }

    pub fn is_injective(&self) -> bool {
        self.prefix
            .iter()
            .chain(self.cycle.iter())
            .all(|m| m.is_injective_on_letters())
    }

    /// Primitivity, decided on the full-cycle composite: for an eventually
    /// periodic sequence this matches the per-tail definition. Prefix
    /// morphisms are non-erasing, so they cannot destroy primitivity.
    pub fn is_primitive(&self) -> bool {
        let c = self.cycle_composite();
        let m = c.incidence_matrix();
        if !m.is_square() {
            return false;
        }
        primitive_power(&m, default_primitivity_cap(m.rows())).is_some()
    }

    /// The supernatural number of the length sequence: a prime gets exponent
    /// infinity iff it divides the product of cycle lengths, otherwise its
    /// multiplicity in the product of prefix lengths.
    pub fn length_supernatural(&self) -> SupernaturalNumber {
        let mut s = SupernaturalNumber::one();
        for m in &self.cycle {
            for p in factorize(m.length() as u64).keys() {
                s.set(*p, Exponent::Infinite);
            }
        }
        for m in &self.prefix {
            for (p, e) in factorize(m.length() as u64) {
                match s.exponent(p) {
                    Exponent::Infinite => {}
                    Exponent::Finite(k) => s.set(p, Exponent::Finite(k + e)),
                }
            }
        }
        s
    }

    /// Canonical eventually-periodic form: the cycle is reduced to its minimal
    /// period and trailing prefix morphisms equal to the cycle tail are
    /// absorbed by rotation. The represented infinite sequence is unchanged.
    pub fn normalized(&self) -> Self {
        let mut prefix = self.prefix.clone();
        let mut cycle = self.cycle.clone();
        let c = cycle.len();
        for d in 1..=c {
            if c.is_multiple_of(d) && (0..c).all(|i| cycle[i] == cycle[i % d]) {
                cycle.truncate(d);
                break;
            }
        }
        while let Some(last) = prefix.last() {
            if last == cycle.last().expect("cycle is non-empty") {
                prefix.pop();
                let m = cycle.pop().expect("cycle is non-empty");
                cycle.insert(0, m);
            } else {
                break;
            }
        }
        Self { prefix, cycle }
    }

    /// Telescope along the given cut points (strictly increasing, first > 0).
    ///
    /// The n-th morphism of the result is the composite over
    /// [cut_{n-1}, cut_n). The finite list is extended to infinity by
    /// repeating its shortest suffix difference block whose total advance is a
    /// multiple of the cycle length; the last given cut must already lie in
    /// the periodic region. Fails with `BadCuts` when no such block exists.
    pub fn telescope(&self, cuts: &[usize]) -> Result<Self> {
        if cuts.is_empty() || cuts[0] == 0 {
            return Err(Error::BadCuts("need a non-empty list of cuts > 0".into()));
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadCuts("cuts must be strictly increasing".into()));
        }
        let p = self.prefix.len();
        let c = self.cycle.len();
        let last = *cuts.last().expect("non-empty");
        if last < p {
            return Err(Error::BadCuts(format!(
                "last cut {last} does not reach the periodic region (prefix length {p})"
            )));
        }
        let diffs: Vec<usize> = std::iter::once(cuts[0])
            .chain(cuts.windows(2).map(|w| w[1] - w[0]))
            .collect();
        let block = (1..=diffs.len())
            .find(|&t| {
                let sum: usize = diffs[diffs.len() - t..].iter().sum();
                sum.is_multiple_of(c) && cuts[cuts.len() - 1].max(p) >= p
            })
            .map(|t| diffs[diffs.len() - t..].to_vec())
            .ok_or_else(|| {
                Error::BadCuts(format!(
                    "no suffix of the cut differences advances by a multiple of the cycle length {c}"
                ))
            })?;
        let mut new_prefix = Vec::with_capacity(cuts.len());
        let mut lo = 0usize;
        for &cut in cuts {
            new_prefix.push(self.composite(lo, cut)?);
            lo = cut;
        }
        let mut new_cycle = Vec::with_capacity(block.len());
        for &d in &block {
            new_cycle.push(self.composite(lo, lo + d)?);
            lo += d;
        }
        Ok(Self::new(new_prefix, new_cycle)?.normalized())
    }
}

/// Outcome of the aperiodicity screen: a semi-decision. A short period found
/// in a long expanded prefix refutes aperiodicity; otherwise aperiodicity is
/// merely "not refuted".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AperiodicityScreen {
    Periodic { period: usize },
    NotRefuted { depth: usize, truncated: bool },
    Skipped { reason: String },
}

impl AperiodicityScreen {
    pub fn passed(&self) -> bool {
        !matches!(self, AperiodicityScreen::Periodic { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            AperiodicityScreen::Periodic { period } => {
                format!("periodic (period {period})")
            }
            AperiodicityScreen::NotRefuted { depth, truncated } => {
                if *truncated {
                    format!("aperiodicity not refuted (depth {depth}, truncated)")
                } else {
                    format!("aperiodicity not refuted (depth {depth})")
                }
            }
            AperiodicityScreen::Skipped { reason } => format!("screen skipped: {reason}"),
        }
    }
}

/// Verdict of the torsion-freeness test, clause by clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionFreeReport {
    pub torsion_free: bool,
    /// Primes dividing some length but not the cycle-length product.
    pub offending_primes: Vec<u64>,
    pub primitive: bool,
    pub aperiodicity: AperiodicityScreen,
    pub explanation: String,
}

/// Torsion-freeness: every prime dividing some length divides the lengths
/// infinitely often, the shift is minimal (primitivity stands in for this),
/// and the aperiodicity screen does not refute aperiodicity.
pub fn is_torsion_free(ds: &DirectiveSequence) -> TorsionFreeReport {
    let cycle_primes = prime_support(ds.cycle().iter().map(|m| m.length() as u64));
    let all_primes = prime_support(
        ds.prefix()
            .iter()
            .chain(ds.cycle().iter())
            .map(|m| m.length() as u64),
    );
    let offending: Vec<u64> = all_primes.difference(&cycle_primes).copied().collect();
    if !offending.is_empty() {
        return TorsionFreeReport {
            torsion_free: false,
            explanation: format!(
                "prime {} divides a length but only finitely many lengths",
                offending[0]
            ),
            offending_primes: offending,
            primitive: ds.is_primitive(),
            aperiodicity: AperiodicityScreen::Skipped {
                reason: "prime-support clause already failed".into(),
            },
        };
    }
    let primitive = ds.is_primitive();
    if !primitive {
        return TorsionFreeReport {
            torsion_free: false,
            offending_primes: vec![],
            primitive: false,
            aperiodicity: AperiodicityScreen::Skipped {
                reason: "sequence is not primitive".into(),
            },
            explanation: "cycle composite is not primitive; minimality is not established, refusing"
                .into(),
        };
    }
    let screen = aperiodicity_screen(ds);
    let ok = screen.passed();
    TorsionFreeReport {
        torsion_free: ok,
        offending_primes: vec![],
        primitive: true,
        aperiodicity: screen.clone(),
        explanation: if ok {
            format!(
                "prime supports compatible, primitive, {}",
                screen.describe()
            )
        } else {
            format!("level-0 limit word looks {}", screen.describe())
        },
    }
}

/// Search a prefix of the level-0 limit word of length >= 4*p_3 for periods
/// up to p_2, via the smallest period of the expanded prefix.
pub fn aperiodicity_screen(ds: &DirectiveSequence) -> AperiodicityScreen {
    let p3 = ds.partial_product_clamped(3, SCREEN_CAP);
    let p2 = ds.partial_product_clamped(2, SCREEN_CAP);
    let want = 4usize.saturating_mul(p3).max(64);
    let truncated = want > SCREEN_CAP;
    let depth = want.min(SCREEN_CAP);
    let word = match language::limit_word_prefix(ds, 0, depth) {
        Ok(w) => w,
        Err(_) => {
            return AperiodicityScreen::Skipped {
                reason: "no limit word prefix available".into(),
            }
        }
    };
    let w = &word[..depth.min(word.len())];
    let period = smallest_period(w);
    let bound = p2.min(w.len() / 4).max(1);
    if period <= bound {
        AperiodicityScreen::Periodic { period }
    } else {
        AperiodicityScreen::NotRefuted {
            depth: w.len(),
            truncated,
        }
    }
}

/// Smallest p with w[i] = w[i+p] for all valid i, via the KMP border array.
fn smallest_period<T: Eq>(w: &[T]) -> usize {
    if w.is_empty() {
        return 0;
    }
    let n = w.len();
    let mut border = vec![0usize; n];
    let mut k = 0usize;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = border[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        border[i] = k;
    }
    n - border[n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog as fx;

    #[test]
    fn morphism_at_is_eventually_periodic() {
        let ds = fx::alpha();
        assert_eq!(ds.morphism_at(0), &fx::rho());
        assert_eq!(ds.morphism_at(1), &fx::vartheta());
        assert_eq!(ds.morphism_at(7), &fx::vartheta());
        let st = fx::theta_seq();
        assert_eq!(st.morphism_at(0), &fx::theta());
    }

    #[test]
    fn composite_matches_hand_expansion() {
        let ds = fx::theta_seq();
        let c = ds.composite(0, 2).unwrap();
        let expect = ds.alphabet_at(0).parse_word("0 1 1 0 0 1 0 0 1").unwrap();
        assert_eq!(c.image(0), expect.as_slice());
        // composite(m, m+1) is the level-m morphism
        assert_eq!(&ds.composite(3, 4).unwrap(), ds.morphism_at(3));
        // lengths multiply into p_n
        assert_eq!(
            BigUint::from(ds.composite(0, 5).unwrap().length()),
            ds.partial_product(5)
        );
    }

    #[test]
    fn chaining_is_validated() {
        let bad = DirectiveSequence::new(vec![fx::theta()], vec![fx::theta_s5()]);
        assert!(matches!(bad, Err(Error::ChainingError { .. })));
        let trivial = DirectiveSequence::new(
            vec![],
            vec![Morphism::identity(&Alphabet::new(["a"]).unwrap())],
        );
        assert!(matches!(trivial, Err(Error::TrivialCycle)));
    }

    #[test]
    fn telescope_identity_cuts() {
        let ds = fx::alpha();
        let t = ds.telescope(&[1, 2, 3]).unwrap();
        assert_eq!(t, ds);
    }

    #[test]
    fn telescope_pairs_stationary() {
        let ds = fx::theta_seq();
        let t = ds.telescope(&[2, 4]).unwrap();
        assert_eq!(t.prefix_len(), 0);
        assert_eq!(t.cycle_len(), 1);
        assert_eq!(t.cycle()[0].length(), 9);
        assert_eq!(t.cycle()[0], ds.composite(0, 2).unwrap());
    }

    #[test]
    fn telescope_odd_cuts_of_alpha() {
        let ds = fx::alpha();
        let t = ds.telescope(&[1, 3, 5]).unwrap();
        assert_eq!(t.prefix(), &[fx::rho()]);
        assert_eq!(t.cycle_len(), 1);
        assert_eq!(t.cycle()[0], ds.composite(1, 3).unwrap());
    }

    #[test]
    fn telescope_rejects_bad_cuts() {
        let ds = fx::alpha();
        assert!(matches!(ds.telescope(&[]), Err(Error::BadCuts(_))));
        assert!(matches!(ds.telescope(&[2, 2]), Err(Error::BadCuts(_))));
        let two_cycle = DirectiveSequence::new(vec![], vec![fx::theta(), fx::theta()]).unwrap();
        // single odd step cannot align with a 2-cycle
        assert!(matches!(two_cycle.telescope(&[1]), Err(Error::BadCuts(_))));
    }

    #[test]
    fn length_supernatural_examples() {
        // all lengths 3
        let s = fx::theta_seq().length_supernatural();
        assert_eq!(s.exponent(3), Exponent::Infinite);
        assert!(s.support().eq([3u64]));

        // prefix length 2, cycle length 5
        let s = fx::ext46().length_supernatural();
        assert_eq!(s.exponent(2), Exponent::Finite(1));
        assert_eq!(s.exponent(5), Exponent::Infinite);

        // factorial-style 2, 6, 24 then 120
        let s = fx::factorial().length_supernatural();
        assert_eq!(s.exponent(2), Exponent::Infinite);
        assert_eq!(s.exponent(3), Exponent::Infinite);
        assert_eq!(s.exponent(5), Exponent::Infinite);
        assert!(s.support().eq([2u64, 3, 5]));
    }

    #[test]
    fn primitivity_examples() {
        assert!(fx::durand_theta_seq().is_primitive());
        assert!(fx::alpha().is_primitive());
        let a = Alphabet::new(["a", "b"]).unwrap();
        let swap = Morphism::from_names(&a, &a, &["b b", "a a"]).unwrap();
        let perm_heavy = DirectiveSequence::stationary(swap).unwrap();
        // columns permute but the matrix is positive-power-free? ab->bb,aa is
        // actually primitive; use a genuine permutation of blocks instead
        let _ = perm_heavy;
        let rot = Morphism::from_names(&a, &a, &["b", "a"]).unwrap();
        let id2 = Morphism::from_names(&a, &a, &["a a", "b b"]).unwrap();
        let perm = DirectiveSequence::new(vec![], vec![rot, id2]).unwrap();
        assert!(!perm.is_primitive());
    }

    #[test]
    fn torsion_free_examples() {
        let r = is_torsion_free(&fx::theta_seq());
        assert!(r.torsion_free, "{}", r.explanation);

        let r = is_torsion_free(&fx::ext46());
        assert!(!r.torsion_free);
        assert_eq!(r.offending_primes, vec![2]);

        // prime supports {2,3} of prefix 6 inside cycle {10, 15} support {2,3,5}
        let s6 = fx::length_only(6);
        let s10 = fx::length_only(10);
        let s15 = fx::length_only(15);
        let ds = DirectiveSequence::new(vec![s6], vec![s10, s15]).unwrap();
        let r = is_torsion_free(&ds);
        assert!(r.offending_primes.is_empty());
    }

    #[test]
    fn torsion_free_invariant_under_telescope() {
        let ds = fx::alpha();
        let t = ds.telescope(&[1, 3, 5]).unwrap();
        assert_eq!(
            is_torsion_free(&ds).torsion_free,
            is_torsion_free(&t).torsion_free
        );
        let s1 = ds.length_supernatural();
        let s2 = t.length_supernatural();
        assert!(s1.infinite_support().eq(s2.infinite_support()));
    }

    #[test]
    fn periodic_fixed_point_is_refuted() {
        // a -> ab, b -> ab generates (ab)^inf
        let a = Alphabet::new(["a", "b"]).unwrap();
        let m = Morphism::from_names(&a, &a, &["a b", "a b"]).unwrap();
        let ds = DirectiveSequence::stationary(m).unwrap();
        let r = is_torsion_free(&ds);
        assert!(!r.torsion_free);
        assert!(matches!(
            r.aperiodicity,
            AperiodicityScreen::Periodic { period: 2 }
        ));
    }
}
