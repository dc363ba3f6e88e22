//! The maximal-equicontinuous-factor descriptor, Cobham-style obstructions,
//! spectral classification flags, and the full analysis report.
//!
//! For a torsion-free sequence the maximal equicontinuous factor is the
//! length odometer extended by a cyclic group of order h, with h coprime to
//! every cycle length. The classification flags are the conditional
//! conclusions driven by the true column number; the measure-theoretic
//! hypotheses behind them (regularity of the extension, unique ergodicity)
//! are not verified by this tool and are always listed as assumptions.

use crate::column::{naive_column_number, ColumnWitness, NaiveColumn, TrueColumn};
use crate::directive::{is_torsion_free, DirectiveSequence};
use crate::error::{Error, Result};
use crate::height::{default_height_depth, height, HeightResult};
use crate::supernatural::{prime_support, Exponent, SupernaturalNumber};
use num_integer::gcd;
use serde::Serialize;
use std::fmt::Write as _;

/// The maximal equicontinuous factor of a torsion-free sequence: the
/// odometer of the length sequence (as a supernatural number) extended by
/// Z/hZ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MEFDescriptor {
    pub odometer: SupernaturalNumber,
    pub height: u64,
}

impl MEFDescriptor {
    pub fn describe(&self) -> String {
        if self.height == 1 {
            format!("Z_({})", self.odometer)
        } else {
            format!("Z_({}) x Z/{}Z", self.odometer, self.height)
        }
    }
}

/// MEF of a torsion-free directive sequence. Fails with `NotTorsionFree`
/// otherwise: the descriptor is only guaranteed under torsion-freeness.
pub fn mef(ds: &DirectiveSequence, depth: usize) -> Result<MEFDescriptor> {
    let tf = is_torsion_free(ds);
    if !tf.torsion_free {
        return Err(Error::NotTorsionFree(tf.explanation));
    }
    let hr = height(ds, depth)?;
    let odometer = ds.length_supernatural();
    for p in odometer.infinite_support() {
        if gcd(hr.h, p) != 1 {
            return Err(Error::CertificateNotFound { h: hr.h });
        }
    }
    if !hr.divisibility_ok {
        return Err(Error::CertificateNotFound { h: hr.h });
    }
    Ok(MEFDescriptor {
        odometer,
        height: hr.h,
    })
}

/// Length-arithmetic obstruction to factoring: a prime dividing a length of
/// one sequence but no length of the other rules out a factor map onto the
/// first from the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CobhamObstruction {
    /// Witness prime: the first shift cannot be a topological factor of the
    /// second.
    pub first_not_factor_of_second: Option<u64>,
    /// Witness prime for the reverse direction.
    pub second_not_factor_of_first: Option<u64>,
}

impl CobhamObstruction {
    pub fn obstructed(&self) -> bool {
        self.first_not_factor_of_second.is_some() || self.second_not_factor_of_first.is_some()
    }
}

pub fn cobham_obstruction(
    first: &DirectiveSequence,
    second: &DirectiveSequence,
) -> Result<CobhamObstruction> {
    for ds in [first, second] {
        let tf = is_torsion_free(ds);
        if !tf.torsion_free {
            return Err(Error::NotTorsionFree(tf.explanation));
        }
    }
    let lengths = |ds: &DirectiveSequence| {
        prime_support(
            ds.prefix()
                .iter()
                .chain(ds.cycle().iter())
                .map(|m| m.length() as u64),
        )
    };
    let s1 = lengths(first);
    let s2 = lengths(second);
    Ok(CobhamObstruction {
        first_not_factor_of_second: s1.difference(&s2).next().copied(),
        second_not_factor_of_first: s2.difference(&s1).next().copied(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpectralTag {
    #[serde(rename = "AlmostAutomorphic_c1")]
    AlmostAutomorphic,
    #[serde(rename = "MixedOrDiscontinuous_cGt1")]
    MixedOrDiscontinuous,
}

impl SpectralTag {
    pub fn name(&self) -> &'static str {
        match self {
            SpectralTag::AlmostAutomorphic => "AlmostAutomorphic_c1",
            SpectralTag::MixedOrDiscontinuous => "MixedOrDiscontinuous_cGt1",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectralClassification {
    pub tag: SpectralTag,
    pub c: usize,
    pub assumptions: Vec<String>,
    pub conclusion: String,
}

fn standing_assumptions(ds: &DirectiveSequence) -> Vec<String> {
    let screen = is_torsion_free(ds).aperiodicity;
    vec![
        "regularity of the extension over the maximal equicontinuous factor \
         (almost-every fibre a singleton) is assumed, not verified"
            .to_string(),
        "unique ergodicity is assumed, not verified".to_string(),
        format!("aperiodicity screen: {}", screen.describe()),
    ]
}

/// Classification from the true column number, for torsion-free sequences.
pub fn classify(ds: &DirectiveSequence, depth: usize) -> Result<SpectralClassification> {
    let tc: TrueColumn = crate::column::column_number(ds, depth)?;
    Ok(classification_from(ds, tc.value))
}

fn classification_from(ds: &DirectiveSequence, c: usize) -> SpectralClassification {
    let tag = if c == 1 {
        SpectralTag::AlmostAutomorphic
    } else {
        SpectralTag::MixedOrDiscontinuous
    };
    let conclusion = match tag {
        SpectralTag::AlmostAutomorphic => {
            "c = 1: under the listed assumptions, the shift is uniquely ergodic, \
             almost automorphic, and has discrete spectrum with continuous \
             eigenfunctions"
                .to_string()
        }
        SpectralTag::MixedOrDiscontinuous => format!(
            "c = {c} > 1: under the listed assumptions, the shift either has mixed \
             spectrum or has discrete spectrum with discontinuous eigenfunctions"
        ),
    };
    SpectralClassification {
        tag,
        c,
        assumptions: standing_assumptions(ds),
        conclusion,
    }
}

/// How a reported value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Exact,
    Certified,
    Empirical { depth: usize },
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Provenance::Exact => write!(f, "exact"),
            Provenance::Certified => write!(f, "certified"),
            Provenance::Empirical { depth } => write!(f, "empirical(depth={depth})"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tagged<T> {
    pub value: T,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct HTableRow {
    pub level: usize,
    pub h: u64,
    pub certified: bool,
    pub provenance: Provenance,
    /// Distinct limit-word seeds at this level gave different values.
    pub seeds_disagree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OdometerPrime {
    pub prime: u64,
    /// None encodes an infinite exponent.
    pub exponent: Option<u32>,
}

/// The full invariant bundle. Every value carries a provenance tag; fields
/// that could not be computed are absent, with the reasons accumulated in
/// `errors`.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub torsion_free: Tagged<bool>,
    pub torsion_free_explanation: String,
    pub primes_offending: Vec<u64>,
    pub aperiodicity: String,
    pub injective_input: bool,
    pub h_table: Vec<HTableRow>,
    pub h_comb: Option<Tagged<u64>>,
    pub height: Option<Tagged<u64>>,
    pub height_certified: bool,
    pub odometer_primes: Option<Vec<OdometerPrime>>,
    pub mef: Option<String>,
    pub mef_unavailable_reason: Option<String>,
    pub c_naive: Option<Tagged<u64>>,
    pub c_naive_witness: Option<String>,
    pub c_true: Option<Tagged<u64>>,
    pub classification: Option<SpectralTag>,
    pub classification_conclusion: Option<String>,
    pub assumptions: Vec<String>,
    pub observations: Vec<String>,
    pub errors: Vec<String>,
    pub depth: usize,
}

fn witness_string(ds: &DirectiveSequence, w: &ColumnWitness) -> String {
    let _ = ds;
    format!(
        "column {} of composite({}, {}) has image cardinality {}",
        w.column, w.base_level, w.level, w.cardinality
    )
}

/// Run the whole analysis, collecting whatever is computable. Never fails;
/// missing hypotheses leave fields empty and add a note.
pub fn analysis_report(ds: &DirectiveSequence, depth: Option<usize>) -> AnalysisReport {
    let depth = depth.unwrap_or_else(|| default_height_depth(ds));
    let tf = is_torsion_free(ds);
    let tf_provenance = if tf.torsion_free || matches!(tf.aperiodicity, crate::directive::AperiodicityScreen::Periodic { .. }) {
        Provenance::Empirical { depth }
    } else {
        Provenance::Exact
    };
    let mut report = AnalysisReport {
        torsion_free: Tagged {
            value: tf.torsion_free,
            provenance: tf_provenance,
        },
        torsion_free_explanation: tf.explanation.clone(),
        primes_offending: tf.offending_primes.clone(),
        aperiodicity: tf.aperiodicity.describe(),
        injective_input: ds.is_injective(),
        h_table: vec![],
        h_comb: None,
        height: None,
        height_certified: false,
        odometer_primes: None,
        mef: None,
        mef_unavailable_reason: None,
        c_naive: None,
        c_naive_witness: None,
        c_true: None,
        classification: None,
        classification_conclusion: None,
        assumptions: standing_assumptions(ds),
        observations: vec![],
        errors: vec![],
        depth,
    };

    let height_result: Option<HeightResult> = match height(ds, depth) {
        Ok(hr) => Some(hr),
        Err(e) => {
            report.errors.push(format!("height: {e}"));
            None
        }
    };
    if let Some(hr) = &height_result {
        report.h_table = hr
            .levels
            .iter()
            .map(|l| HTableRow {
                level: l.level,
                h: l.h,
                certified: l.certified(),
                provenance: if l.certified() {
                    Provenance::Certified
                } else {
                    Provenance::Empirical { depth: l.depth }
                },
                seeds_disagree: l.seeds_disagree,
            })
            .collect();
        let h_prov = if hr.certified() {
            Provenance::Certified
        } else {
            Provenance::Empirical { depth }
        };
        report.h_comb = Some(Tagged {
            value: hr.h,
            provenance: h_prov,
        });
        report.height_certified = hr.certified();
        if tf.torsion_free {
            // the combinatorial height equals the dynamical height here
            report.height = Some(Tagged {
                value: hr.h,
                provenance: h_prov,
            });
        } else {
            report
                .errors
                .push("height: only the combinatorial value is reported; the \
                       equality with the dynamical height needs torsion-freeness"
                    .to_string());
        }
        if hr.h > 1 && !hr.divisibility_ok {
            report
                .errors
                .push("height does not divide every cycle length minus one".into());
        }
    }

    match naive_column_number(ds) {
        Ok(naive) => {
            report.c_naive = Some(Tagged {
                value: naive.value as u64,
                provenance: Provenance::Exact,
            });
            report.c_naive_witness = Some(witness_string(ds, &naive.witness));
            observe_divisibility(&mut report, height_result.as_ref(), &naive);
        }
        Err(e) => report.errors.push(format!("naive column number: {e}")),
    }

    if tf.torsion_free {
        match mef(ds, depth) {
            Ok(d) => {
                report.odometer_primes = Some(
                    d.odometer
                        .iter()
                        .map(|(prime, e)| OdometerPrime {
                            prime,
                            exponent: match e {
                                Exponent::Finite(k) => Some(k),
                                Exponent::Infinite => None,
                            },
                        })
                        .collect(),
                );
                report.mef = Some(d.describe());
            }
            Err(e) => report.errors.push(format!("mef: {e}")),
        }
        match crate::column::column_number(ds, depth) {
            Ok(tc) => {
                report.c_true = Some(Tagged {
                    value: tc.value as u64,
                    provenance: Provenance::Exact,
                });
                let cls = classification_from(ds, tc.value);
                report.classification = Some(cls.tag);
                report.classification_conclusion = Some(cls.conclusion);
            }
            Err(e) => report.errors.push(format!("true column number: {e}")),
        }
    } else {
        report.mef_unavailable_reason = Some(
            "the sequence is not torsion-free, so the maximal equicontinuous \
             factor is outside this tool's guaranteed scope"
                .to_string(),
        );
    }
    report
        .observations
        .push("conjecture (surfaced, never computed): a true column number \
               greater than 1 forces mixed spectrum"
            .to_string());
    report
}

fn observe_divisibility(
    report: &mut AnalysisReport,
    hr: Option<&HeightResult>,
    naive: &NaiveColumn,
) {
    if let Some(hr) = hr {
        let divides = (naive.value as u64).is_multiple_of(hr.h);
        report.observations.push(format!(
            "height {} {} the naive column number {} (observation only)",
            hr.h,
            if divides { "divides" } else { "does not divide" },
            naive.value
        ));
    }
}

impl AnalysisReport {
    /// Flat `key: value` rendering, one line per field.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k}: {v}");
        };
        line(
            "torsion_free",
            format!(
                "{} [{}]",
                self.torsion_free.value, self.torsion_free.provenance
            ),
        );
        line("torsion_free_explanation", self.torsion_free_explanation.clone());
        line(
            "primes_offending",
            if self.primes_offending.is_empty() {
                "none".into()
            } else {
                self.primes_offending
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            },
        );
        line("aperiodicity", self.aperiodicity.clone());
        line("injective_input", self.injective_input.to_string());
        let table = self
            .h_table
            .iter()
            .map(|r| {
                format!(
                    "{}:{}{}",
                    r.level,
                    r.h,
                    if r.certified { " (certified)" } else { " (empirical)" }
                )
            })
            .collect::<Vec<_>>()
            .join(", ");
        line("h_table", if table.is_empty() { "unavailable".into() } else { table });
        let fmt_tagged =
            |t: &Option<Tagged<u64>>| -> String {
                match t {
                    Some(t) => format!("{} [{}]", t.value, t.provenance),
                    None => "unavailable".into(),
                }
            };
        line("h_comb", fmt_tagged(&self.h_comb));
        line("height", fmt_tagged(&self.height));
        line("height_certified", self.height_certified.to_string());
        line(
            "odometer_primes",
            match &self.odometer_primes {
                None => "unavailable".into(),
                Some(ps) => ps
                    .iter()
                    .map(|p| match p.exponent {
                        Some(k) => format!("{}^{}", p.prime, k),
                        None => format!("{}^inf", p.prime),
                    })
                    .collect::<Vec<_>>()
                    .join(" * "),
            },
        );
        line(
            "mef",
            self.mef
                .clone()
                .or_else(|| self.mef_unavailable_reason.clone())
                .unwrap_or_else(|| "unavailable".into()),
        );
        line("c_naive", fmt_tagged(&self.c_naive));
        line(
            "c_naive_witness",
            self.c_naive_witness.clone().unwrap_or_else(|| "unavailable".into()),
        );
        line("c_true", fmt_tagged(&self.c_true));
        line(
            "classification",
            self.classification
                .map(|t| t.name().to_string())
                .unwrap_or_else(|| "unavailable".into()),
        );
        if let Some(c) = &self.classification_conclusion {
            line("classification_conclusion", c.clone());
        }
        for a in &self.assumptions {
            line("assumption", a.clone());
        }
        for o in &self.observations {
            line("observation", o.clone());
        }
        for e in &self.errors {
            line("note", e.clone());
        }
        line("depth", self.depth.to_string());
        s
    }
}
