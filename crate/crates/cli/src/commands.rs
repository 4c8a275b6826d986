use anyhow::{bail, Result};
use serde::Serialize;

use aw_core::certify::{run_check, CheckConfig, LemmaSources, Status};
use aw_core::table::{build_table, render_csv, render_plain};
use aw_core::{
    build_extremal, enumerate_aps, find_rainbow, formula_record, parse_group_spec, Classifier,
    Coloring, Error, GroupSpec, Mode,
};

use crate::{Failed, Format, Method, ModeArg, ModesArg, Source};

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Aw => Mode::Aw,
            ModeArg::Awu => Mode::Awu,
        }
    }
}

impl ModesArg {
    pub fn modes(self) -> Vec<Mode> {
        match self {
            ModesArg::Aw => vec![Mode::Aw],
            ModesArg::Awu => vec![Mode::Awu],
            ModesArg::Both => vec![Mode::Aw, Mode::Awu],
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

#[derive(Serialize)]
struct ValueReport {
    group: String,
    mode: Mode,
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    formula: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_source: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<&'static str>,
}

pub fn value(cls: &Classifier, fmt: Format, group: &str, mode: Mode, method: Method) -> Result<()> {
    let spec = parse_group_spec(group)?;
    let formula = match method {
        Method::Formula | Method::Both => Some(formula_record(&spec, mode, cls)?.value),
        Method::Exact => None,
    };
    let exact = match method {
        Method::Exact | Method::Both => Some(cls.exact(&spec, 3, mode)?),
        Method::Formula => None,
    };
    let verdict = match (formula, &exact) {
        (Some(f), Some(e)) if f == e.value => Some("MATCH"),
        (Some(_), Some(_)) => Some("MISMATCH"),
        _ => None,
    };
    let report = ValueReport {
        group: spec.to_string(),
        mode,
        k: 3,
        formula,
        exact: exact.as_ref().map(|e| e.value),
        exact_source: exact.as_ref().map(|e| e.provenance.to_string()),
        verdict,
    };
    if fmt == Format::Json {
        print_json(&report)?;
    } else {
        let mut parts = vec![format!("{} {}", report.group, mode)];
        if let Some(f) = report.formula {
            parts.push(format!("formula {f}"));
        }
        if let (Some(e), Some(src)) = (report.exact, &report.exact_source) {
            parts.push(format!("exact {e} ({src})"));
        }
        if let Some(v) = verdict {
            parts.push(v.to_string());
        }
        println!("{}", parts.join("  "));
    }
    if verdict == Some("MISMATCH") {
        bail!(Failed(format!(
            "formula {} and exact {} disagree for {} ({mode})",
            report.formula.unwrap_or_default(),
            report.exact.unwrap_or_default(),
            report.group
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct WitnessReport {
    group: String,
    canonical: String,
    mode: Mode,
    k: usize,
    value: u64,
    num_colors: usize,
    source: String,
    witness: Vec<u32>,
}

/// Independent of whichever routine produced the coloring.
fn reverify(spec: &GroupSpec, mode: Mode, coloring: &Coloring) -> Result<()> {
    let catalog = enumerate_aps(spec, 3)?;
    let problem = if coloring.len() != spec.order() {
        Some(format!(
            "{} colors for {} elements",
            coloring.len(),
            spec.order()
        ))
    } else if let Some(ap) = find_rainbow(coloring, &catalog) {
        Some(format!("rainbow 3-AP {ap:?}"))
    } else if mode == Mode::Awu && !coloring.is_unitary() {
        Some("not unitary".to_string())
    } else {
        None
    };
    match problem {
        Some(detail) => Err(Error::Verification {
            group: spec.to_string(),
            detail,
        }
        .into()),
        None => Ok(()),
    }
}

pub fn witness(
    cls: &Classifier,
    fmt: Format,
    group: &str,
    mode: Mode,
    source: Source,
) -> Result<()> {
    let spec = parse_group_spec(group)?;
    let (coloring, source) = match source {
        Source::Construct => (build_extremal(&spec, mode, cls)?, "construct".to_string()),
        Source::Oracle => {
            let record = cls.exact(&spec, 3, mode)?;
            let Some(w) = record.witness else {
                bail!("no witness for {spec}");
            };
            (w, record.provenance.to_string())
        }
    };
    reverify(&spec, mode, &coloring)?;
    let report = WitnessReport {
        group: spec.to_string(),
        canonical: spec.primary_decomposition().key(),
        mode,
        k: 3,
        value: coloring.num_colors() as u64 + 1,
        num_colors: coloring.num_colors(),
        source,
        witness: coloring.colors().to_vec(),
    };
    if fmt == Format::Json {
        print_json(&report)
    } else {
        println!("group      {}", report.group);
        println!("canonical  {}", report.canonical);
        println!("mode       {}", report.mode);
        println!("value      {}", report.value);
        println!("colors     {}", report.num_colors);
        println!("source     {}", report.source);
        println!("witness    {coloring}");
        Ok(())
    }
}

pub fn table(cls: &Classifier, fmt: Format, max_order: u64, modes: Vec<Mode>) -> Result<()> {
    let rows = build_table(max_order, &modes, cls);
    match fmt {
        Format::Json => print_json(&rows),
        Format::Csv => {
            print!("{}", render_csv(&rows));
            Ok(())
        }
        Format::Plain => {
            print!("{}", render_plain(&rows));
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct PrimeRow {
    p: u64,
    aw: u64,
    source: String,
}

pub fn primes(cls: &Classifier, fmt: Format, up_to: u64) -> Result<()> {
    let mut rows = Vec::new();
    for p in (3..=up_to).filter(|&p| aw_core::group::is_prime(p)) {
        let record = cls.prime_record(p, Mode::Aw)?;
        rows.push(PrimeRow {
            p,
            aw: record.value,
            source: record.provenance.to_string(),
        });
    }
    if fmt == Format::Json {
        print_json(&rows)?;
    } else {
        println!("p    aw(Z_p,3)  source");
        for r in &rows {
            println!("{:<4} {:<10} {}", r.p, r.aw, r.source);
        }
    }
    if let Some(bad) = rows.iter().find(|r| r.aw != 3 && r.aw != 4) {
        bail!(Failed(format!(
            "aw(Z_{},3) = {} is outside {{3, 4}}",
            bad.p, bad.aw
        )));
    }
    Ok(())
}

pub fn check(
    cls: &Classifier,
    fmt: Format,
    max_order: u64,
    modes: Vec<Mode>,
    exhaustive: bool,
) -> Result<()> {
    let mut config = CheckConfig::new(max_order);
    config.modes = modes;
    config.lemma_sources = LemmaSources {
        exhaustive,
        ..LemmaSources::default()
    };
    let report = run_check(&config, cls);
    if fmt == Format::Json {
        print_json(&report)?;
    } else {
        for o in &report.outcomes {
            if o.status != Status::Pass {
                println!("{o}");
            }
        }
        println!(
            "{} passed, {} failed, {} skipped",
            report.count(Status::Pass),
            report.count(Status::Fail),
            report.count(Status::Skip)
        );
    }
    if !report.passed() {
        bail!(Failed(format!(
            "{} checks failed",
            report.count(Status::Fail)
        )));
    }
    Ok(())
}

pub fn cache_verify(cls: &Classifier, fmt: Format) -> Result<()> {
    let Some(cache) = cls.cache() else {
        bail!("no cache in use (--no-cache)");
    };
    let report = cache.verify_all();
    if fmt == Format::Json {
        print_json(&serde_json::json!({
            "path": cache.path(),
            "checked": report.checked,
            "flagged": report.flagged.iter().map(|f| serde_json::json!({
                "group": f.group, "k": f.k, "mode": f.mode, "reason": f.reason,
            })).collect::<Vec<_>>(),
        }))?;
    } else {
        for f in &report.flagged {
            println!("FLAGGED {} k={} {}: {}", f.group, f.k, f.mode, f.reason);
        }
        println!(
            "{}: {} entries checked, {} flagged",
            cache.path().display(),
            report.checked,
            report.flagged.len()
        );
    }
    if !report.is_clean() {
        bail!(Failed(format!(
            "{} cache entries flagged",
            report.flagged.len()
        )));
    }
    Ok(())
}
