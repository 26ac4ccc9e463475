//! JSON report builders. Objects are `serde_json::Map`s, which keep keys
//! sorted, so the output is key-ordered and stable across runs.

use davn_core::fixtures::{FixtureDiff, RowStatus};
use davn_core::lhv::{Constraint, DavnReport, ParadoxReport};
use davn_core::postselect::{ConstraintRow, EigenRelation};
use davn_core::sample::SampleSummary;
use davn_core::state::DensityMatrix;
use davn_core::{BasisKet, PhaseExp};
use num_rational::Rational64;
use serde_json::{json, Value};

pub const SCHEMA: &str = "davn-report";
pub const SCHEMA_VERSION: u32 = 1;

pub fn envelope(command: &str, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "result": result,
    })
}

pub fn rational(r: Rational64) -> String {
    r.to_string()
}

pub fn outcome(o: &BasisKet) -> Value {
    json!({
        "digits": o.to_string(),
        "exponents": o.digits(),
        "eigenvalues": o.digits().iter().map(|&d| PhaseExp::new(d).symbol()).collect::<Vec<_>>(),
    })
}

pub fn constraint(c: &Constraint) -> Value {
    json!({
        "word": c.word().to_string(),
        "eigenvalue": c.target.symbol(),
        "exponents": c.exponents,
        "target": c.target.power_notation(),
    })
}

fn relation(rel: &Option<EigenRelation>, sites: [usize; 2]) -> Value {
    match rel {
        Some(r) => constraint(&Constraint::from_relation(r, sites)),
        None => Value::Null,
    }
}

pub fn row(r: &ConstraintRow) -> Value {
    let sites = r.residual.sites;
    json!({
        "pair": r.pair.to_string(),
        "residual_sites": format!("{}{}", sites[0] + 1, sites[1] + 1),
        "residual": r.residual.state.to_string(),
        "residual_norm_sq": r.residual.state.norm_sq(),
        "basic": relation(&r.basic, sites),
        "extended": relation(&r.extended, sites),
        "eigenwords": r.all_eigenwords.iter().map(|e| relation(&Some(*e), sites)).collect::<Vec<_>>(),
    })
}

pub fn density(rho: &DensityMatrix) -> Value {
    let entries: Vec<Vec<String>> = (0..rho.dim())
        .map(|r| (0..rho.dim()).map(|c| crate::render::entry(rho.entry(r, c))).collect())
        .collect();
    json!({
        "diagonal": rho.diagonal().into_iter().map(rational).collect::<Vec<_>>(),
        "entries": entries,
        "maximally_mixed": rho.is_maximally_mixed(),
    })
}

pub fn paradox(p: &ParadoxReport) -> Value {
    json!({
        "outcome": outcome(&p.outcome),
        "family": p.family.map(|f| f.label()),
        "type": p.family.map(|f| f.paradox_type()),
        "probability": rational(p.probability),
        "rows": p.rows.iter().map(row).collect::<Vec<_>>(),
        "constraints": p.constraints.iter().map(constraint).collect::<Vec<_>>(),
        "satisfiable": p.satisfiable,
        "verdict": if p.satisfiable { "satisfiable" } else { "unsatisfiable" },
        "witness": p.witness.map(|w| json!({ "values": w.values, "rendered": w.to_string() })),
        "minimal_core": p.minimal_core.iter().map(constraint).collect::<Vec<_>>(),
        "extended_only_unsatisfiable": p.extended_only_unsat,
    })
}

pub fn davn(r: &DavnReport) -> Value {
    json!({
        "verdict": r.verdict,
        "support_size": r.support_size,
        "unsatisfiable": r.unsat_count(),
        "probability_sum": rational(r.probability_sum),
        "type_counts": r.type_counts,
        "failing": r.failing.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
        "paradoxes": r.reports.iter().map(paradox).collect::<Vec<_>>(),
    })
}

pub fn sample(s: &SampleSummary) -> Value {
    let counts: serde_json::Map<String, Value> = s.counts.iter().map(|(k, &c)| (k.to_string(), json!(c))).collect();
    json!({
        "seed": s.seed,
        "runs": s.runs,
        "algorithm": s.algorithm,
        "counts": counts,
        "max_abs_deviation": rational(s.max_abs_deviation),
    })
}

pub fn fixture_diff(d: &FixtureDiff) -> Value {
    let rows: Vec<Value> = d
        .rows
        .iter()
        .filter(|r| !matches!(r.status, RowStatus::Match))
        .map(|r| {
            json!({
                "table": r.table.table_numeral(),
                "family": r.table.label(),
                "row": r.row,
                "outcome": r.outcome.to_string(),
                "line": r.line,
                "status": r.status,
            })
        })
        .collect();
    json!({
        "passed": d.passed(),
        "rows_checked": d.rows.len(),
        "matched": d.count(|s| matches!(s, RowStatus::Match)),
        "known_discrepancies": d.count(|s| matches!(s, RowStatus::KnownDiscrepancy { .. })),
        "mismatches": d.count(|s| matches!(s, RowStatus::Mismatch { .. })),
        "stale_allowlist": d.count(|s| matches!(s, RowStatus::StaleAllowlist { .. })),
        "dangling_allowlist": d.dangling_allowlist,
        "non_matching_rows": rows,
    })
}
