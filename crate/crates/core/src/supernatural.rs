//! Supernatural numbers: formal products of primes with exponents in N ∪ {∞}.
//!
//! They classify odometers up to isomorphism, so the odometer built from a
//! length sequence is reported as one of these.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

/// Prime -> exponent map; primes with exponent zero are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<u64, Exponent>,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn set(&mut self, prime: u64, exponent: Exponent) {
        match exponent {
            Exponent::Finite(0) => {
                self.exponents.remove(&prime);
            }
            e => {
                self.exponents.insert(prime, e);
            }
        }
    }

    pub fn exponent(&self, prime: u64) -> Exponent {
        self.exponents
            .get(&prime)
            .copied()
            .unwrap_or(Exponent::Finite(0))
    }

    /// Primes with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.exponents.keys().copied()
    }

    /// Primes with infinite exponent.
    pub fn infinite_support(&self) -> impl Iterator<Item = u64> + '_ {
        self.exponents
            .iter()
            .filter(|(_, e)| **e == Exponent::Infinite)
            .map(|(p, _)| *p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.exponents.iter().map(|(p, e)| (*p, *e))
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.exponents {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            match e {
                Exponent::Finite(1) => write!(f, "{p}")?,
                Exponent::Finite(k) => write!(f, "{p}^{k}")?,
                Exponent::Infinite => write!(f, "{p}^inf")?,
            }
        }
        Ok(())
    }
}

/// Prime factorization of a positive integer by trial division.
pub fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    assert!(n >= 1, "factorize needs a positive integer");
    let mut out = BTreeMap::new();
    let mut p = 2u64;
    while p * p <= n {
        while n.is_multiple_of(p) {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// Primes dividing any of the given positive integers.
pub fn prime_support(values: impl IntoIterator<Item = u64>) -> std::collections::BTreeSet<u64> {
    values
        .into_iter()
        .flat_map(|v| factorize(v).into_keys().collect::<Vec<_>>())
        .collect()
}
