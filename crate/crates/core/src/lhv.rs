//! Local hidden-variable refutation. An assignment gives each `X_j` a value
//! `i^{v_j}`; powers follow classically, so a constraint is a linear equation
//! over Z₄.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_rational::Rational64;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalogue::Family;
use crate::error::{DavnError, Result};
use crate::gauss::PhaseExp;
use crate::pauli::{BasisKet, PauliWord};
use crate::postselect::{table_for_outcome, ConstraintRow, EigenRelation};
use crate::state::{OutcomeTuple, StateVector};

/// `Π_j X_j^{e_j} = i^target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Constraint {
    pub exponents: [u8; 4],
    pub target: PhaseExp,
}

impl Constraint {
    pub fn new(exponents: [u8; 4], target: PhaseExp) -> Self {
        Self { exponents: exponents.map(|e| e % 4), target }
    }

    /// Lifts a residual relation on `sites` to the four-site register.
    pub fn from_relation(rel: &EigenRelation, sites: [usize; 2]) -> Self {
        let mut exponents = [0u8; 4];
        exponents[sites[0]] = rel.exponents[0];
        exponents[sites[1]] = rel.exponents[1];
        Self::new(exponents, rel.target)
    }

    /// Parses `X3*X4^3=-i`.
    pub fn parse(text: &str) -> Result<Self> {
        let (word, value) = text
            .split_once('=')
            .ok_or_else(|| DavnError::parse(None, format!("expected '<word>=<value>' in {text:?}")))?;
        let w = PauliWord::parse(word, 4)?;
        let target = PhaseExp::parse_symbol(value)
            .ok_or_else(|| DavnError::parse(None, format!("bad eigenvalue {value:?}")))?;
        if w.phase() != PhaseExp::ONE || w.sites().iter().any(|&(_, b)| b != 0) {
            return Err(DavnError::parse(None, format!("constraint words use X powers only: {text:?}")));
        }
        let mut exponents = [0u8; 4];
        for (e, &(a, _)) in exponents.iter_mut().zip(w.sites()) {
            *e = a;
        }
        Ok(Self::new(exponents, target))
    }

    pub fn word(&self) -> PauliWord {
        PauliWord::x_word(&self.exponents)
    }

    pub fn holds(&self, a: &Assignment) -> bool {
        let sum: u32 = self.exponents.iter().zip(a.values).map(|(&e, v)| e as u32 * v as u32).sum();
        PhaseExp::from_i64(sum as i64) == self.target
    }

    /// Product of two relations: exponents and targets add.
    pub fn product(&self, other: &Constraint) -> Constraint {
        let exponents = std::array::from_fn(|j| (self.exponents[j] + other.exponents[j]) % 4);
        Constraint::new(exponents, self.target.mul(other.target))
    }

    /// Exponent form `e1,e2,e3,e4:i^t`.
    pub fn exponent_form(&self) -> String {
        format!("{}:{}", self.exponents.iter().join(","), self.target.power_notation())
    }
}

/// `X3*X4^3=-i`.
impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.word(), self.target)
    }
}

/// Hidden-variable values `X_j(λ) = i^{v_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Assignment {
    pub values: [u8; 4],
}

impl Assignment {
    /// All 256 assignments in lexicographic order.
    pub fn all() -> impl Iterator<Item = Assignment> {
        (0..256u32).map(|n| Assignment {
            values: [(n >> 6) as u8 & 3, (n >> 4) as u8 & 3, (n >> 2) as u8 & 3, n as u8 & 3],
        })
    }
}

/// `X1=1,X2=i,X3=-1,X4=-i`.
impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self
            .values
            .iter()
            .enumerate()
            .map(|(j, &v)| format!("X{}={}", j + 1, PhaseExp::new(v)));
        f.write_str(&parts.collect::<Vec<_>>().join(","))
    }
}

/// First satisfying assignment in lexicographic order.
pub fn satisfiable(cs: &[Constraint]) -> Option<Assignment> {
    Assignment::all().find(|a| cs.iter().all(|c| c.holds(a)))
}

/// Smallest unsatisfiable subset; among equal sizes, the lexicographically
/// first by position in `cs`.
pub fn minimal_unsat_core(cs: &[Constraint]) -> Result<Vec<Constraint>> {
    for size in 1..=cs.len() {
        for idx in (0..cs.len()).combinations(size) {
            let subset: Vec<Constraint> = idx.iter().map(|&i| cs[i]).collect();
            if satisfiable(&subset).is_none() {
                return Ok(subset);
            }
        }
    }
    Err(DavnError::Satisfiable)
}

/// Family of a supported outcome of the resource state.
pub fn classify_type(o: &OutcomeTuple) -> Result<Family> {
    Family::ALL
        .into_iter()
        .find(|f| f.outcomes().contains(o))
        .ok_or_else(|| DavnError::Unclassified { outcome: o.to_string() })
}

#[derive(Debug, Clone)]
pub struct ParadoxReport {
    pub outcome: OutcomeTuple,
    pub family: Option<Family>,
    pub probability: Rational64,
    pub rows: Vec<ConstraintRow>,
    pub constraints_basic: Vec<Constraint>,
    pub constraints_extended: Vec<Constraint>,
    /// Basic followed by extended, duplicates removed; the LHV instance.
    pub constraints: Vec<Constraint>,
    pub satisfiable: bool,
    pub witness: Option<Assignment>,
    pub minimal_core: Vec<Constraint>,
    pub extended_only_unsat: bool,
}

impl ParadoxReport {
    pub fn is_paradox(&self) -> bool {
        !self.satisfiable
    }
}

pub fn verify_paradox(s: &StateVector, o: &OutcomeTuple) -> Result<ParadoxReport> {
    let rows = table_for_outcome(s, o)?;
    let probability = s.joint_z_probability(o)?;
    let mut constraints_basic = Vec::new();
    let mut constraints_extended = Vec::new();
    for row in &rows {
        let sites = row.residual.sites;
        if let Some(b) = &row.basic {
            constraints_basic.push(Constraint::from_relation(b, sites));
        }
        if let Some(e) = &row.extended {
            constraints_extended.push(Constraint::from_relation(e, sites));
        }
    }
    let constraints: Vec<Constraint> =
        constraints_basic.iter().chain(&constraints_extended).copied().unique().collect();
    let witness = satisfiable(&constraints);
    let minimal_core = match witness {
        Some(_) => Vec::new(),
        None => minimal_unsat_core(&constraints)?,
    };
    let extended_only_unsat = satisfiable(&constraints_extended).is_none();
    Ok(ParadoxReport {
        outcome: o.clone(),
        family: classify_type(o).ok(),
        probability,
        rows,
        constraints_basic,
        constraints_extended,
        constraints,
        satisfiable: witness.is_some(),
        witness,
        minimal_core,
        extended_only_unsat,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "DAVN")]
    Davn,
    #[serde(rename = "NOT-DAVN")]
    NotDavn,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Davn => "DAVN",
            Verdict::NotDavn => "NOT-DAVN",
        })
    }
}

#[derive(Debug, Clone)]
pub struct DavnReport {
    /// Ordered by outcome tuple.
    pub reports: Vec<ParadoxReport>,
    pub support_size: usize,
    pub probability_sum: Rational64,
    /// Keyed by paradox type `I`..`VI`; unclassified outcomes are not counted.
    pub type_counts: BTreeMap<&'static str, usize>,
    pub failing: Vec<BasisKet>,
    pub verdict: Verdict,
}

impl DavnReport {
    pub fn unsat_count(&self) -> usize {
        self.reports.iter().filter(|r| r.is_paradox()).count()
    }
}

/// Runs [`verify_paradox`] on every supported outcome. `workers` caps the
/// thread count; `None` uses the rayon default.
pub fn verify_davn(s: &StateVector, workers: Option<usize>) -> Result<DavnReport> {
    let support = s.z_support();
    let run = || support.par_iter().map(|o| verify_paradox(s, o)).collect::<Result<Vec<_>>>();
    let reports = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("thread pool")
            .install(run)?,
        None => run()?,
    };
    let probability_sum: Rational64 = reports.iter().map(|r| r.probability).sum();
    let mut type_counts = BTreeMap::new();
    for r in &reports {
        if let Some(f) = r.family {
            *type_counts.entry(f.paradox_type()).or_insert(0) += 1;
        }
    }
    let failing: Vec<BasisKet> = reports.iter().filter(|r| r.satisfiable).map(|r| r.outcome.clone()).collect();
    let verdict = if probability_sum == Rational64::from(1) && failing.is_empty() && !reports.is_empty() {
        Verdict::Davn
    } else {
        Verdict::NotDavn
    };
    Ok(DavnReport { support_size: support.len(), reports, probability_sum, type_counts, failing, verdict })
}
