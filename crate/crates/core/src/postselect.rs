//! Conditioning on two Z outcomes and scanning the residual two-site state for
//! `X_k^u X_l^v` eigen-relations.

use std::fmt;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{DavnError, Result};
use crate::gauss::PhaseExp;
use crate::pauli::{BasisKet, PauliWord, QUDIT_LEVELS};
use crate::state::{OutcomeTuple, StateVector};

/// Site pairs in the order rows are generated: 12, 13, 14, 23, 24, 34.
pub const PAIR_ORDER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Post-selection of `Z_i = i^{m_i}`, `Z_j = i^{m_j}`. Sites are 0-based and
/// stored ascending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PairSelection {
    pub site_i: usize,
    pub site_j: usize,
    pub m_i: PhaseExp,
    pub m_j: PhaseExp,
}

impl PairSelection {
    pub fn new(site_a: usize, m_a: PhaseExp, site_b: usize, m_b: PhaseExp) -> Result<Self> {
        if site_a == site_b {
            return Err(DavnError::RepeatedSite { site: site_a });
        }
        let ((site_i, m_i), (site_j, m_j)) =
            if site_a < site_b { ((site_a, m_a), (site_b, m_b)) } else { ((site_b, m_b), (site_a, m_a)) };
        Ok(Self { site_i, site_j, m_i, m_j })
    }

    /// The selection an outcome tuple induces on a pair of sites.
    pub fn from_outcome(o: &OutcomeTuple, site_a: usize, site_b: usize) -> Result<Self> {
        for site in [site_a, site_b] {
            if site >= o.n_sites() {
                return Err(DavnError::InvalidSite { site, n_sites: o.n_sites() });
            }
        }
        Self::new(site_a, PhaseExp::new(o.digit(site_a)), site_b, PhaseExp::new(o.digit(site_b)))
    }

    /// The two sites left after selection, ascending.
    pub fn remaining(&self, n_sites: usize) -> Vec<usize> {
        (0..n_sites).filter(|&s| s != self.site_i && s != self.site_j).collect()
    }

    pub fn consistent_with(&self, o: &OutcomeTuple) -> bool {
        o.digit(self.site_i) == self.m_i.exp() && o.digit(self.site_j) == self.m_j.exp()
    }
}

/// `Z1=1,Z2=-i` (1-based, eigenvalue notation).
impl fmt::Display for PairSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}={},Z{}={}", self.site_i + 1, self.m_i, self.site_j + 1, self.m_j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualState {
    /// Remaining sites of the parent register, ascending, 0-based.
    pub sites: [usize; 2],
    pub state: StateVector,
}

impl fmt::Display for ResidualState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.state.fmt(f)
    }
}

/// `X_k^u X_l^v = i^target` on the residual sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EigenRelation {
    pub exponents: [u8; 2],
    pub target: PhaseExp,
}

impl EigenRelation {
    /// Square of the relation; an all-even word is its own extension since
    /// its square is the identity.
    pub fn extended(&self) -> Self {
        if self.exponents.iter().all(|e| e % 2 == 0) {
            return *self;
        }
        Self {
            exponents: self.exponents.map(|e| (2 * e) % 4),
            target: self.target.pow(2),
        }
    }

    /// The word embedded into an `n_sites` register on `sites`.
    pub fn word(&self, sites: [usize; 2], n_sites: usize) -> PauliWord {
        let mut exps = vec![0u8; n_sites];
        exps[sites[0]] = self.exponents[0];
        exps[sites[1]] = self.exponents[1];
        PauliWord::x_word(&exps)
    }

    /// `X3*X4^3=-i` style rendering.
    pub fn render(&self, sites: [usize; 2], n_sites: usize) -> String {
        format!("{}={}", self.word(sites, n_sites), self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintRow {
    pub pair: PairSelection,
    pub residual: ResidualState,
    pub basic: Option<EigenRelation>,
    pub extended: Option<EigenRelation>,
    pub all_eigenwords: Vec<EigenRelation>,
}

/// Amplitudes of `s` on kets matching the selection, re-indexed to the two
/// remaining sites. The global phase is left as found.
pub fn postselect_pair(s: &StateVector, p: &PairSelection) -> Result<ResidualState> {
    if s.n_sites() != 4 {
        return Err(DavnError::SiteCountMismatch { expected: 4, found: s.n_sites() });
    }
    if p.site_j >= s.n_sites() {
        return Err(DavnError::InvalidSite { site: p.site_j, n_sites: s.n_sites() });
    }
    let rest = p.remaining(s.n_sites());
    let terms = s
        .iter()
        .filter(|(k, _)| p.consistent_with(k))
        .map(|(k, &a)| (BasisKet::new([k.digit(rest[0]), k.digit(rest[1])]), a));
    let state = StateVector::from_terms(2, s.levels(), terms)?;
    if state.is_zero() {
        return Err(DavnError::ZeroProbabilitySelection { pair: p.to_string() });
    }
    Ok(ResidualState { sites: [rest[0], rest[1]], state })
}

/// Every `(u, v) ∈ {1,2,3}²` eigen-relation of the residual, in row-major
/// order. Returns `(basic, extended, all)`.
pub fn derive_constraints(
    r: &ResidualState,
) -> Result<(Option<EigenRelation>, Option<EigenRelation>, Vec<EigenRelation>)> {
    if r.state.levels() != QUDIT_LEVELS {
        return Err(DavnError::LevelMismatch { expected: QUDIT_LEVELS, found: r.state.levels() });
    }
    let mut all = Vec::new();
    for (u, v) in (1..4u8).cartesian_product(1..4u8) {
        if let Some(target) = PauliWord::x_word(&[u, v]).eigenvalue_of(&r.state)? {
            all.push(EigenRelation { exponents: [u, v], target });
        }
    }
    let basic = all.first().copied();
    Ok((basic, basic.map(|b| b.extended()), all))
}

pub fn constraint_row(s: &StateVector, pair: PairSelection) -> Result<ConstraintRow> {
    let residual = postselect_pair(s, &pair)?;
    let (basic, extended, all_eigenwords) = derive_constraints(&residual)?;
    Ok(ConstraintRow { pair, residual, basic, extended, all_eigenwords })
}

/// The six rows for an outcome, one per site pair in [`PAIR_ORDER`].
pub fn table_for_outcome(s: &StateVector, o: &OutcomeTuple) -> Result<Vec<ConstraintRow>> {
    if o.n_sites() != s.n_sites() || s.amplitude(o).is_zero() {
        return Err(DavnError::OutcomeOutsideSupport { outcome: o.to_string() });
    }
    PAIR_ORDER
        .iter()
        .map(|&(i, j)| constraint_row(s, PairSelection::from_outcome(o, i, j)?))
        .collect()
}
