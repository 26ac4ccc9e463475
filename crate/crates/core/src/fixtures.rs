//! Line-oriented transcriptions of the ten constraint tables, and a diff of
//! each transcribed row against the derivation.
//!
//! Row syntax:
//! `table=III | pair=Z1=i^0,Z2=i^2 | residual=02:2;11:1 | basic=2,2:i^0 | extended=2,2:i^0`
//! with `none` for a row that has no constraint. Lines starting with `#` and
//! blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::catalogue::Family;
use crate::error::{DavnError, Result};
use crate::gauss::{GaussScalar, PhaseExp};
use crate::pauli::{BasisKet, PauliWord, QUDIT_LEVELS};
use crate::postselect::{postselect_pair, ConstraintRow, EigenRelation, PairSelection};
use crate::state::StateVector;

pub const ALLOWLIST_FILE: &str = "allowlist.txt";

pub fn fixture_file_name(table: Family) -> String {
    format!("table_{}.txt", table.table_numeral())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureRow {
    pub table: Family,
    pub pair: PairSelection,
    /// Two-site residual over the remaining sites, ascending.
    pub residual: StateVector,
    pub basic: Option<EigenRelation>,
    pub extended: Option<EigenRelation>,
}

fn parse_pair(text: &str) -> Option<PairSelection> {
    let (a, b) = text.split_once(',')?;
    let side = |s: &str| -> Option<(usize, PhaseExp)> {
        let (site, m) = s.trim().strip_prefix('Z')?.split_once('=')?;
        let site: usize = site.parse().ok()?;
        (1..=4).contains(&site).then_some(())?;
        Some((site - 1, PhaseExp::parse_power_notation(m)?))
    };
    let ((sa, ma), (sb, mb)) = (side(a)?, side(b)?);
    PairSelection::new(sa, ma, sb, mb).ok()
}

fn parse_relation(text: &str) -> Option<Option<EigenRelation>> {
    if text == "none" {
        return Some(None);
    }
    let (uv, t) = text.split_once(':')?;
    let (u, v) = uv.split_once(',')?;
    let (u, v): (u8, u8) = (u.parse().ok()?, v.parse().ok()?);
    if u > 3 || v > 3 {
        return None;
    }
    Some(Some(EigenRelation { exponents: [u, v], target: PhaseExp::parse_power_notation(t)? }))
}

fn parse_residual(text: &str) -> Option<StateVector> {
    let mut terms = Vec::new();
    for item in text.split(';') {
        let (k, t) = item.split_once(':')?;
        let ket = BasisKet::parse(k).ok()?;
        if ket.n_sites() != 2 || terms.iter().any(|(seen, _)| *seen == ket) {
            return None;
        }
        terms.push((ket, GaussScalar::from(PhaseExp::parse_power_notation(&format!("i^{t}"))?)));
    }
    StateVector::from_terms(2, QUDIT_LEVELS, terms).ok().filter(|s| !s.is_zero())
}

impl FixtureRow {
    /// The row as it would be transcribed from a derivation.
    pub fn from_derived(table: Family, row: &ConstraintRow) -> Self {
        Self {
            table,
            pair: row.pair,
            residual: row.residual.state.clone(),
            basic: row.basic,
            extended: row.extended,
        }
    }

    pub fn parse(line: &str, lineno: Option<usize>) -> Result<Self> {
        let err = |m: String| DavnError::parse(lineno, m);
        let mut fields = BTreeMap::new();
        for part in line.split('|') {
            let (k, v) = part
                .trim()
                .split_once('=')
                .ok_or_else(|| err(format!("field without '=': {:?}", part.trim())))?;
            if fields.insert(k, v).is_some() {
                return Err(err(format!("duplicate field {k:?}")));
            }
        }
        let names: Vec<&str> = fields.keys().copied().collect();
        if names != ["basic", "extended", "pair", "residual", "table"] {
            return Err(err(format!("expected fields table, pair, residual, basic, extended; got {names:?}")));
        }
        let table: Family = fields["table"].parse().map_err(|_| err(format!("bad table {:?}", fields["table"])))?;
        let pair = parse_pair(fields["pair"]).ok_or_else(|| err(format!("bad pair {:?}", fields["pair"])))?;
        let residual =
            parse_residual(fields["residual"]).ok_or_else(|| err(format!("bad residual {:?}", fields["residual"])))?;
        let basic = parse_relation(fields["basic"]).ok_or_else(|| err(format!("bad basic {:?}", fields["basic"])))?;
        let extended = parse_relation(fields["extended"])
            .ok_or_else(|| err(format!("bad extended {:?}", fields["extended"])))?;
        Ok(Self { table, pair, residual, basic, extended })
    }
}

fn fmt_relation(r: &Option<EigenRelation>) -> String {
    match r {
        None => "none".into(),
        Some(r) => format!("{},{}:{}", r.exponents[0], r.exponents[1], r.target.power_notation()),
    }
}

impl fmt::Display for FixtureRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.pair;
        let residual: Vec<String> = self
            .residual
            .iter()
            .map(|(k, a)| match a.as_phase() {
                Some(t) => format!("{k}:{}", t.exp()),
                None => format!("{k}:?"),
            })
            .collect();
        write!(
            f,
            "table={} | pair=Z{}={},Z{}={} | residual={} | basic={} | extended={}",
            self.table.table_numeral(),
            p.site_i + 1,
            p.m_i.power_notation(),
            p.site_j + 1,
            p.m_j.power_notation(),
            residual.join(";"),
            fmt_relation(&self.basic),
            fmt_relation(&self.extended),
        )
    }
}

/// Data rows of one fixture file, checked against the file's table.
pub fn parse_fixture_text(table: Family, text: &str) -> Result<Vec<FixtureRow>> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = FixtureRow::parse(line, Some(idx + 1))?;
        if row.table != table {
            return Err(DavnError::parse(
                Some(idx + 1),
                format!("row labelled table {} in the file for table {}", row.table.table_numeral(), table.table_numeral()),
            ));
        }
        rows.push(row);
    }
    let expected = 6 * table.table_outcomes().len();
    if rows.len() != expected {
        return Err(DavnError::Fixture(format!(
            "table {} has {} rows, expected {expected}",
            table.table_numeral(),
            rows.len()
        )));
    }
    Ok(rows)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| DavnError::Io { path: path.display().to_string(), source })
}

/// Loads all ten tables from `dir`; a missing or malformed file is an error.
pub fn load_fixture_dir(dir: &Path) -> Result<BTreeMap<Family, Vec<FixtureRow>>> {
    if !dir.is_dir() {
        return Err(DavnError::Fixture(format!("{} is not a directory", dir.display())));
    }
    let mut tables = BTreeMap::new();
    for table in Family::ALL {
        let path = dir.join(fixture_file_name(table));
        if !path.exists() {
            return Err(DavnError::Fixture(format!("missing fixture file {}", path.display())));
        }
        let rows = parse_fixture_text(table, &read(&path)?).map_err(|e| match e {
            DavnError::Parse { line, message } => DavnError::Fixture(format!(
                "{}{}: {message}",
                path.display(),
                line.map(|l| format!(":{l}")).unwrap_or_default()
            )),
            other => other,
        })?;
        tables.insert(table, rows);
    }
    Ok(tables)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AllowlistEntry {
    pub table: Family,
    /// 1-based data-row index within the table.
    pub row: usize,
    pub tag: String,
    pub note: String,
}

/// `table=V | row=15 | tag=basic-not-eigenword | note=free text`
pub fn parse_allowlist(text: &str) -> Result<Vec<AllowlistEntry>> {
    let mut out: Vec<AllowlistEntry> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: String| DavnError::parse(Some(idx + 1), m);
        let mut fields = BTreeMap::new();
        for part in line.splitn(4, '|') {
            let (k, v) = part.trim().split_once('=').ok_or_else(|| err(format!("bad field {part:?}")))?;
            fields.insert(k, v.trim());
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(format!("missing {k}")));
        let entry = AllowlistEntry {
            table: get("table")?.parse().map_err(|_| err("bad table".into()))?,
            row: get("row")?.parse().map_err(|_| err("bad row".into()))?,
            tag: get("tag")?.to_string(),
            note: get("note")?.to_string(),
        };
        if entry.row == 0 || entry.tag.is_empty() {
            return Err(err("row must be positive and tag nonempty".into()));
        }
        if out.iter().any(|e| e.table == entry.table && e.row == entry.row) {
            return Err(err(format!("duplicate entry for table {} row {}", entry.table.table_numeral(), entry.row)));
        }
        out.push(entry);
    }
    Ok(out)
}

/// `allowlist.txt` in `dir`, or an empty list when absent.
pub fn load_allowlist(dir: &Path) -> Result<Vec<AllowlistEntry>> {
    let path = dir.join(ALLOWLIST_FILE);
    if !path.exists() {
        return Ok(Vec::new());
    }
    parse_allowlist(&read(&path)?).map_err(|e| DavnError::Fixture(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MismatchReason {
    PairInconsistentWithGroupOutcome,
    EmptyProjection,
    ResidualDiffers,
    NotAnEigenword,
    EigenvalueDiffers,
    ExpectedNoConstraint,
    ConstraintMissing,
    ExtendedNotSquareOfBasic,
}

impl MismatchReason {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::PairInconsistentWithGroupOutcome => "pair inconsistent with group outcome",
            Self::EmptyProjection => "empty projection",
            Self::ResidualDiffers => "residual differs",
            Self::NotAnEigenword => "not an eigenword",
            Self::EigenvalueDiffers => "eigenvalue differs",
            Self::ExpectedNoConstraint => "expected no constraint",
            Self::ConstraintMissing => "constraint missing",
            Self::ExtendedNotSquareOfBasic => "extended is not the square of basic",
        }
    }
}

impl fmt::Display for MismatchReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_relation(
    rel: &EigenRelation,
    residual: &StateVector,
    reasons: &mut Vec<MismatchReason>,
) -> Result<()> {
    match PauliWord::x_word(&rel.exponents).eigenvalue_of(residual)? {
        None => reasons.push(MismatchReason::NotAnEigenword),
        Some(t) if t != rel.target => reasons.push(MismatchReason::EigenvalueDiffers),
        Some(_) => {}
    }
    Ok(())
}

/// Compares one transcribed row with the derivation for its pair selection.
/// `outcome` is the group outcome the row sits under. An empty result means
/// the row matches.
pub fn verify_transcribed_row(s: &StateVector, outcome: &BasisKet, row: &FixtureRow) -> Result<Vec<MismatchReason>> {
    let mut reasons = Vec::new();
    if !row.pair.consistent_with(outcome) {
        reasons.push(MismatchReason::PairInconsistentWithGroupOutcome);
    }
    let derived = match postselect_pair(s, &row.pair) {
        Ok(r) => r,
        Err(DavnError::ZeroProbabilitySelection { .. }) => {
            reasons.push(MismatchReason::EmptyProjection);
            return Ok(reasons);
        }
        Err(e) => return Err(e),
    };
    if !derived.state.equals_up_to_phase(&row.residual) {
        reasons.push(MismatchReason::ResidualDiffers);
    }
    let (_, _, all) = crate::postselect::derive_constraints(&derived)?;
    match (&row.basic, &row.extended) {
        (None, None) => {
            if !all.is_empty() {
                reasons.push(MismatchReason::ExpectedNoConstraint);
            }
        }
        (Some(b), Some(e)) => {
            check_relation(b, &derived.state, &mut reasons)?;
            check_relation(e, &derived.state, &mut reasons)?;
            if b.extended() != *e {
                reasons.push(MismatchReason::ExtendedNotSquareOfBasic);
            }
        }
        (Some(r), None) | (None, Some(r)) => {
            check_relation(r, &derived.state, &mut reasons)?;
            reasons.push(MismatchReason::ConstraintMissing);
        }
    }
    reasons.sort();
    reasons.dedup();
    Ok(reasons)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RowStatus {
    Match,
    KnownDiscrepancy { tag: String, reasons: Vec<MismatchReason> },
    Mismatch { reasons: Vec<MismatchReason> },
    /// Allowlisted, but the row now matches.
    StaleAllowlist { tag: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowResult {
    pub table: Family,
    pub row: usize,
    pub outcome: BasisKet,
    pub line: String,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureDiff {
    pub rows: Vec<RowResult>,
    /// Allowlist entries that name no existing row.
    pub dangling_allowlist: Vec<AllowlistEntry>,
}

impl FixtureDiff {
    pub fn passed(&self) -> bool {
        self.dangling_allowlist.is_empty()
            && self
                .rows
                .iter()
                .all(|r| matches!(r.status, RowStatus::Match | RowStatus::KnownDiscrepancy { .. }))
    }

    pub fn count(&self, pred: impl Fn(&RowStatus) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.status)).count()
    }
}

pub fn diff_fixtures(
    s: &StateVector,
    tables: &BTreeMap<Family, Vec<FixtureRow>>,
    allowlist: &[AllowlistEntry],
) -> Result<FixtureDiff> {
    let mut rows = Vec::new();
    for (&table, fixture_rows) in tables {
        let outcomes = table.table_outcomes();
        for (n, fr) in fixture_rows.iter().enumerate() {
            let outcome = outcomes
                .get(n / 6)
                .cloned()
                .ok_or_else(|| DavnError::Fixture(format!("table {} has too many rows", table.table_numeral())))?;
            let reasons = verify_transcribed_row(s, &outcome, fr)?;
            let allowed = allowlist.iter().find(|e| e.table == table && e.row == n + 1);
            let status = match (reasons.is_empty(), allowed) {
                (true, None) => RowStatus::Match,
                (true, Some(e)) => RowStatus::StaleAllowlist { tag: e.tag.clone() },
                (false, Some(e)) => RowStatus::KnownDiscrepancy { tag: e.tag.clone(), reasons },
                (false, None) => RowStatus::Mismatch { reasons },
            };
            rows.push(RowResult { table, row: n + 1, outcome, line: fr.to_string(), status });
        }
    }
    let dangling_allowlist = allowlist
        .iter()
        .filter(|e| tables.get(&e.table).is_none_or(|rs| e.row > rs.len()))
        .cloned()
        .collect();
    Ok(FixtureDiff { rows, dangling_allowlist })
}
