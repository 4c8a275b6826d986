//! One row per isomorphism class of abelian group, ordered by group order
//! and then by the partition order of the exponents.

use std::fmt::Write as _;

use serde::Serialize;

use crate::classify::Classifier;
use crate::formulas::formula_record;
use crate::group::{abelian_groups_up_to, PrimaryDecomposition};
use crate::record::Mode;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub group: String,
    pub key: String,
    pub order: u64,
    pub s: usize,
    pub odd_part: u64,
    pub aw_formula: Option<u64>,
    pub awu_formula: Option<u64>,
    pub aw_exact: Option<u64>,
    pub awu_exact: Option<u64>,
    pub aw_match: Option<bool>,
    pub awu_match: Option<bool>,
}

impl TableRow {
    /// False if any computed pair disagrees.
    pub fn consistent(&self) -> bool {
        self.aw_match != Some(false) && self.awu_match != Some(false)
    }
}

/// Formula values always (when the needed primes are classifiable), exact
/// values for the selected modes when the oracle or cache can supply them.
pub fn build_row(d: &PrimaryDecomposition, modes: &[Mode], classifier: &Classifier) -> TableRow {
    let spec = d.canonical_spec();
    let formula = |mode| {
        formula_record(&spec, mode, classifier)
            .ok()
            .map(|r| r.value)
    };
    let exact = |mode| {
        if !modes.contains(&mode) || !classifier.is_available(&spec, 3, mode) {
            return None;
        }
        classifier.exact(&spec, 3, mode).ok().map(|r| r.value)
    };
    let (aw_formula, awu_formula) = (formula(Mode::Aw), formula(Mode::Awu));
    let (aw_exact, awu_exact) = (exact(Mode::Aw), exact(Mode::Awu));
    let agree = |f: Option<u64>, e: Option<u64>| Some(f? == e?);
    TableRow {
        group: spec.to_string(),
        key: d.key(),
        order: d.order(),
        s: d.s(),
        odd_part: d.odd_part(),
        aw_formula,
        awu_formula,
        aw_exact,
        awu_exact,
        aw_match: agree(aw_formula, aw_exact),
        awu_match: agree(awu_formula, awu_exact),
    }
}

pub fn build_table(max_order: u64, modes: &[Mode], classifier: &Classifier) -> Vec<TableRow> {
    abelian_groups_up_to(max_order)
        .iter()
        .map(|d| build_row(d, modes, classifier))
        .collect()
}

const HEADER: [&str; 11] = [
    "group",
    "key",
    "order",
    "s",
    "odd_part",
    "aw_formula",
    "awu_formula",
    "aw_exact",
    "awu_exact",
    "aw_match",
    "awu_match",
];

fn cells(row: &TableRow) -> [String; 11] {
    fn opt<T: ToString>(v: Option<T>) -> String {
        v.map(|v| v.to_string()).unwrap_or_else(|| "-".into())
    }
    [
        row.group.clone(),
        row.key.clone(),
        row.order.to_string(),
        row.s.to_string(),
        row.odd_part.to_string(),
        opt(row.aw_formula),
        opt(row.awu_formula),
        opt(row.aw_exact),
        opt(row.awu_exact),
        opt(row.aw_match),
        opt(row.awu_match),
    ]
}

pub fn render_csv(rows: &[TableRow]) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&cells(row).join(","));
        out.push('\n');
    }
    out
}

/// Space-aligned columns.
pub fn render_plain(rows: &[TableRow]) -> String {
    let body: Vec<[String; 11]> = rows.iter().map(cells).collect();
    let mut widths: Vec<usize> = HEADER.iter().map(|h| h.chars().count()).collect();
    for r in &body {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cols: &mut dyn Iterator<Item = &str>| {
        let mut s = String::new();
        for (i, c) in cols.enumerate() {
            let pad = widths[i] - c.chars().count();
            let _ = write!(s, "{c}{}  ", " ".repeat(pad));
        }
        out.push_str(s.trim_end());
        out.push('\n');
    };
    line(&mut HEADER.iter().copied());
    for r in &body {
        line(&mut r.iter().map(String::as_str));
    }
    out
}
