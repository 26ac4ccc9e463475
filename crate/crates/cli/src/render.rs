//! Text and markdown renderings.

use std::fmt::Write;

use davn_core::catalogue::Family;
use davn_core::fixtures::{FixtureDiff, RowStatus};
use davn_core::lhv::{Constraint, DavnReport, ParadoxReport};
use davn_core::postselect::{ConstraintRow, EigenRelation};
use davn_core::sample::SampleSummary;
use davn_core::{BasisKet, PhaseExp};
use num_rational::Rational64;

const NONE: &str = "---";

pub fn entry((re, im): (Rational64, Rational64)) -> String {
    let zero = Rational64::from(0);
    match (re == zero, im == zero) {
        (_, true) => re.to_string(),
        (true, false) => format!("{im}i"),
        (false, false) if im < zero => format!("{re}-{}i", -im),
        (false, false) => format!("{re}+{im}i"),
    }
}

pub fn outcome_eigenvalues(o: &BasisKet) -> String {
    o.digits()
        .iter()
        .enumerate()
        .map(|(j, &d)| format!("Z{}={}", j + 1, PhaseExp::new(d)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn relation(rel: &Option<EigenRelation>, sites: [usize; 2]) -> String {
    match rel {
        Some(r) => Constraint::from_relation(r, sites).to_string(),
        None => NONE.into(),
    }
}

fn relation_both(rel: &Option<EigenRelation>, sites: [usize; 2]) -> String {
    match rel {
        Some(r) => {
            let c = Constraint::from_relation(r, sites);
            format!("{c} [{}]", c.exponent_form())
        }
        None => NONE.into(),
    }
}

fn residual(r: &ConstraintRow) -> String {
    let s = r.residual.sites;
    format!("psi_{}{} ~ {}", s[0] + 1, s[1] + 1, r.residual.state)
}

fn constraint_list(cs: &[Constraint]) -> String {
    cs.iter().map(|c| format!("{c} [{}]", c.exponent_form())).collect::<Vec<_>>().join("; ")
}

pub fn table_text(family: Family, groups: &[(BasisKet, Vec<ConstraintRow>)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "table {} (family {})", family.table_numeral(), family.label());
    for (o, rows) in groups {
        let _ = writeln!(out, "\noutcome {o}: {}", outcome_eigenvalues(o));
        for r in rows {
            let sites = r.residual.sites;
            let _ = writeln!(
                out,
                "  {:<14} {:<44} basic {:<30} extended {}",
                r.pair.to_string(),
                residual(r),
                relation_both(&r.basic, sites),
                relation_both(&r.extended, sites)
            );
        }
    }
    out
}

pub fn table_markdown(family: Family, groups: &[(BasisKet, Vec<ConstraintRow>)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "## Table {} (family {})", family.table_numeral(), family.label());
    for (o, rows) in groups {
        let _ = writeln!(out, "\n**Outcome {o}** ({})\n", outcome_eigenvalues(o));
        let _ = writeln!(out, "| Z_i, Z_j | residual | basic | extended |");
        let _ = writeln!(out, "|---|---|---|---|");
        for r in rows {
            let sites = r.residual.sites;
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                r.pair,
                residual(r).replace('|', "\\|"),
                relation(&r.basic, sites),
                relation(&r.extended, sites)
            );
        }
    }
    out
}

pub fn paradox_text(p: &ParadoxReport) -> String {
    let mut out = String::new();
    let family = p.family.map_or("unclassified".to_string(), |f| format!("type {} (family {})", f.paradox_type(), f));
    let _ = writeln!(out, "outcome {} ({}), {family}, probability {}", p.outcome, outcome_eigenvalues(&p.outcome), p.probability);
    for r in &p.rows {
        let sites = r.residual.sites;
        let _ = writeln!(
            out,
            "  {:<14} {:<44} basic {:<30} extended {}",
            r.pair.to_string(),
            residual(r),
            relation_both(&r.basic, sites),
            relation_both(&r.extended, sites)
        );
    }
    let _ = writeln!(out, "  constraints ({}): {}", p.constraints.len(), constraint_list(&p.constraints));
    match &p.witness {
        Some(w) => {
            let _ = writeln!(out, "  verdict: satisfiable, witness {w}");
        }
        None => {
            let _ = writeln!(out, "  verdict: unsatisfiable over all 256 assignments");
            let _ = writeln!(
                out,
                "  minimal core ({}): {}",
                p.minimal_core.len(),
                constraint_list(&p.minimal_core)
            );
        }
    }
    let _ = writeln!(out, "  extended constraints alone unsatisfiable: {}", p.extended_only_unsat);
    out
}

pub fn davn_text(r: &DavnReport) -> String {
    let mut out = String::new();
    for p in &r.reports {
        let family = p.family.map_or("?".to_string(), |f| f.label().to_string());
        let _ = writeln!(
            out,
            "{}  {:<6} {:<13} {} constraints, core {}, extended-only {}",
            p.outcome,
            family,
            if p.satisfiable { "satisfiable" } else { "unsatisfiable" },
            p.constraints.len(),
            p.minimal_core.len(),
            if p.extended_only_unsat { "unsat" } else { "sat" }
        );
    }
    let counts: Vec<String> = r.type_counts.iter().map(|(t, n)| format!("{t}={n}")).collect();
    let _ = writeln!(out, "support size: {}", r.support_size);
    let _ = writeln!(out, "probability sum: {}", r.probability_sum);
    let _ = writeln!(out, "unsatisfiable: {}/{}", r.unsat_count(), r.reports.len());
    let _ = writeln!(out, "type counts: {}", counts.join(", "));
    if !r.failing.is_empty() {
        let failing: Vec<String> = r.failing.iter().map(|o| o.to_string()).collect();
        let _ = writeln!(out, "failing outcomes: {}", failing.join(", "));
    }
    let _ = writeln!(out, "verdict: {}", r.verdict);
    out
}

pub fn sample_text(s: &SampleSummary, support: &[BasisKet]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "runs {} seed {} algorithm {}", s.runs, s.seed, s.algorithm);
    for o in support {
        let _ = writeln!(out, "{o} {}", s.count(o));
    }
    let off: u64 = s.counts.iter().filter(|(k, _)| !support.contains(k)).map(|(_, c)| c).sum();
    let _ = writeln!(out, "draws outside support: {off}");
    let _ = writeln!(out, "max |count - expected|: {}", s.max_abs_deviation);
    out
}

pub fn fixture_diff_text(d: &FixtureDiff) -> String {
    let mut out = String::new();
    for r in &d.rows {
        let detail = match &r.status {
            RowStatus::Match => continue,
            RowStatus::KnownDiscrepancy { tag, reasons } => format!("KNOWN [{tag}] {}", join_reasons(reasons)),
            RowStatus::Mismatch { reasons } => format!("FAIL {}", join_reasons(reasons)),
            RowStatus::StaleAllowlist { tag } => format!("STALE allowlist entry [{tag}]: row now matches"),
        };
        let _ = writeln!(out, "table {} row {} (outcome {}): {detail}", r.table.table_numeral(), r.row, r.outcome);
        let _ = writeln!(out, "    {}", r.line);
    }
    for e in &d.dangling_allowlist {
        let _ = writeln!(out, "allowlist entry table {} row {} names no row", e.table.table_numeral(), e.row);
    }
    let _ = writeln!(
        out,
        "{} rows: {} match, {} known discrepancies, {} mismatches, {} stale",
        d.rows.len(),
        d.count(|s| matches!(s, RowStatus::Match)),
        d.count(|s| matches!(s, RowStatus::KnownDiscrepancy { .. })),
        d.count(|s| matches!(s, RowStatus::Mismatch { .. })),
        d.count(|s| matches!(s, RowStatus::StaleAllowlist { .. })),
    );
    let _ = writeln!(out, "{}", if d.passed() { "PASS" } else { "FAIL" });
    out
}

fn join_reasons(reasons: &[davn_core::fixtures::MismatchReason]) -> String {
    reasons.iter().map(|r| r.as_str()).collect::<Vec<_>>().join(", ")
}
