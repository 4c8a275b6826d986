//! Sweeps that compare formulas with the oracle, rebuild extremal
//! colorings, and run the fiber lemmas over small products.

use std::fmt;

use serde::Serialize;

use crate::ap::{enumerate_aps, is_rainbow_free};
use crate::classify::Classifier;
use crate::coloring::Coloring;
use crate::constructions::build_extremal;
use crate::diagnostics::{check_aux_lemma, check_fiber_lemma, FiberSplit};
use crate::error::Error;
use crate::formulas::formula_record;
use crate::group::{abelian_groups_up_to, GroupSpec};
use crate::oracle::for_each_rainbow_free;
use crate::record::Mode;

/// Largest product order the lemma sweeps visit by default.
pub const LEMMA_MAX_ORDER: u64 = 18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub suite: &'static str,
    pub subject: String,
    pub status: Status,
    pub detail: String,
}

impl Outcome {
    fn new(suite: &'static str, subject: String, status: Status, detail: String) -> Self {
        Self {
            suite,
            subject,
            status,
            detail,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}: {}",
            self.status, self.suite, self.subject, self.detail
        )
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.outcomes.iter().filter(|o| o.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.status == Status::Fail)
    }

    pub fn extend(&mut self, outcomes: impl IntoIterator<Item = Outcome>) {
        self.outcomes.extend(outcomes);
    }
}

/// `formula == exact` for every class of order at most `max_order` that the
/// oracle can reach.
pub fn formula_vs_oracle(max_order: u64, modes: &[Mode], classifier: &Classifier) -> Vec<Outcome> {
    let mut out = Vec::new();
    for d in abelian_groups_up_to(max_order) {
        let spec = d.canonical_spec();
        for &mode in modes {
            let subject = format!("{spec} {mode}");
            if !classifier.is_available(&spec, 3, mode) {
                out.push(Outcome::new(
                    "formula-oracle",
                    subject,
                    Status::Skip,
                    "beyond oracle bound".into(),
                ));
                continue;
            }
            let outcome = match (
                formula_record(&spec, mode, classifier),
                classifier.exact(&spec, 3, mode),
            ) {
                (Ok(f), Ok(e)) => {
                    let status = if f.value == e.value {
                        Status::Pass
                    } else {
                        Status::Fail
                    };
                    let verdict = if f.value == e.value {
                        "MATCH"
                    } else {
                        "MISMATCH"
                    };
                    Outcome::new(
                        "formula-oracle",
                        subject,
                        status,
                        format!("formula {} exact {} {verdict}", f.value, e.value),
                    )
                }
                (Err(e), _) | (_, Err(e)) => {
                    Outcome::new("formula-oracle", subject, Status::Skip, e.to_string())
                }
            };
            out.push(outcome);
        }
    }
    out
}

/// `build_extremal` for every class of order at most `max_order` whose odd
/// part is squarefree. Classes that need an unclassifiable prime are
/// skipped; verification failures fail.
pub fn construction_sweep(max_order: u64, modes: &[Mode], classifier: &Classifier) -> Vec<Outcome> {
    let mut out = Vec::new();
    for d in abelian_groups_up_to(max_order) {
        if d.odd_factors().any(|f| f.e > 1) {
            continue;
        }
        let spec = d.canonical_spec();
        for &mode in modes {
            out.push(construction_outcome(&spec, mode, classifier));
        }
    }
    out
}

pub fn construction_outcome(spec: &GroupSpec, mode: Mode, classifier: &Classifier) -> Outcome {
    let subject = format!("{spec} {mode}");
    match build_extremal(spec, mode, classifier) {
        Ok(c) => Outcome::new(
            "construction",
            subject,
            Status::Pass,
            format!("{} colors, rainbow-free", c.num_colors()),
        ),
        Err(e @ (Error::UnclassifiedPrime(_) | Error::Unconstructible { .. })) => {
            Outcome::new("construction", subject, Status::Skip, e.to_string())
        }
        Err(e) => Outcome::new("construction", subject, Status::Fail, e.to_string()),
    }
}

/// Every `(G, n)` with `n >= 3` odd and `|G| n <= max_order`, presented as
/// `canonical(G) x Z_n`.
pub fn lemma_splits(max_order: u64) -> Vec<FiberSplit> {
    let mut out = Vec::new();
    for d in abelian_groups_up_to(max_order / 3) {
        let base = d.canonical_spec();
        let mut n = 3;
        while d.order() * n <= max_order {
            out.push(FiberSplit::new(base.clone(), n));
            n += 2;
        }
    }
    out
}

/// Which colorings of each product the lemma sweep examines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaSources {
    pub oracle: bool,
    pub constructed: bool,
    /// Every rainbow-free coloring, up to renaming colors.
    pub exhaustive: bool,
}

impl Default for LemmaSources {
    fn default() -> Self {
        Self {
            oracle: true,
            constructed: true,
            exhaustive: false,
        }
    }
}

fn lemma_failures(c: &Coloring, split: &FiberSplit) -> Option<String> {
    match (check_fiber_lemma(c, split), check_aux_lemma(c, split)) {
        (Ok(f), Ok(true)) if f.holds => None,
        (Ok(f), aux) => Some(format!(
            "coloring {c}: fiber lemma {} (violations {:?}), aux lemma {}",
            f.holds,
            f.violations,
            match aux {
                Ok(b) => b.to_string(),
                Err(e) => e.to_string(),
            }
        )),
        (Err(e), _) => Some(format!("coloring {c}: {e}")),
    }
}

pub fn lemma_sweep(max_order: u64, sources: LemmaSources, classifier: &Classifier) -> Vec<Outcome> {
    let mut out = Vec::new();
    for split in lemma_splits(max_order) {
        let Ok(spec) = split.total() else { continue };
        let name = format!("{} x Z{}", split.base, split.fiber_order);
        let mut colorings: Vec<(String, Coloring)> = Vec::new();
        let mut errors = Vec::new();
        for mode in [Mode::Aw, Mode::Awu] {
            if sources.oracle {
                match classifier.exact(&spec, 3, mode) {
                    Ok(r) => colorings.extend(r.witness.map(|w| (format!("oracle {mode}"), w))),
                    Err(e) => errors.push(format!("oracle {mode}: {e}")),
                }
            }
            if sources.constructed {
                match build_extremal(&spec, mode, classifier) {
                    Ok(c) => colorings.push((format!("constructed {mode}"), c)),
                    Err(e) => errors.push(format!("constructed {mode}: {e}")),
                }
            }
        }
        let catalog = enumerate_aps(&spec, 3).expect("k = 3 is valid");
        for (source, c) in &colorings {
            let subject = format!("{name} {source}");
            let outcome = if !is_rainbow_free(c, &catalog) {
                Outcome::new(
                    "lemma",
                    subject,
                    Status::Fail,
                    format!("{c} is not rainbow-free"),
                )
            } else if let Some(why) = lemma_failures(c, &split) {
                Outcome::new("lemma", subject, Status::Fail, why)
            } else {
                Outcome::new("lemma", subject, Status::Pass, format!("{c}"))
            };
            out.push(outcome);
        }
        for e in errors {
            out.push(Outcome::new("lemma", name.clone(), Status::Fail, e));
        }
        if sources.exhaustive {
            let mut bad = Vec::new();
            let config = classifier.oracle_config().clone();
            let visited = for_each_rainbow_free(&spec, 3, &config, |c| {
                if bad.len() < 3 {
                    bad.extend(lemma_failures(c, &split));
                }
            });
            let outcome = match visited {
                Ok(total) if bad.is_empty() => Outcome::new(
                    "lemma",
                    format!("{name} exhaustive"),
                    Status::Pass,
                    format!("{total} rainbow-free colorings"),
                ),
                Ok(_) => Outcome::new(
                    "lemma",
                    format!("{name} exhaustive"),
                    Status::Fail,
                    bad.join("; "),
                ),
                Err(e) => Outcome::new(
                    "lemma",
                    format!("{name} exhaustive"),
                    Status::Skip,
                    e.to_string(),
                ),
            };
            out.push(outcome);
        }
    }
    out
}

/// Re-verifies every cache entry, if a cache is attached.
pub fn cache_outcomes(classifier: &Classifier) -> Vec<Outcome> {
    let Some(cache) = classifier.cache() else {
        return Vec::new();
    };
    let report = cache.verify_all();
    let mut out: Vec<Outcome> = report
        .flagged
        .iter()
        .map(|f| {
            let subject = format!("{} k={} {}", f.group, f.k, f.mode);
            Outcome::new("cache", subject, Status::Fail, f.reason.clone())
        })
        .collect();
    out.push(Outcome::new(
        "cache",
        cache.path().display().to_string(),
        if report.is_clean() {
            Status::Pass
        } else {
            Status::Fail
        },
        format!(
            "{} entries checked, {} flagged",
            report.checked,
            report.flagged.len()
        ),
    ));
    out
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub max_order: u64,
    pub modes: Vec<Mode>,
    pub lemma_max_order: u64,
    pub lemma_sources: LemmaSources,
}

impl CheckConfig {
    pub fn new(max_order: u64) -> Self {
        Self {
            max_order,
            modes: vec![Mode::Aw, Mode::Awu],
            lemma_max_order: max_order.min(LEMMA_MAX_ORDER),
            lemma_sources: LemmaSources::default(),
        }
    }
}

pub fn run_check(config: &CheckConfig, classifier: &Classifier) -> Report {
    let mut report = Report::default();
    report.extend(formula_vs_oracle(
        config.max_order,
        &config.modes,
        classifier,
    ));
    report.extend(construction_sweep(
        config.max_order,
        &config.modes,
        classifier,
    ));
    report.extend(lemma_sweep(
        config.lemma_max_order,
        config.lemma_sources,
        classifier,
    ));
    report.extend(cache_outcomes(classifier));
    report
}
