//! Generalized Pauli operators for four-level sites.
//!
//! `X|k> = |k+1 mod 4>` and `Z|k> = i^k |k>`, so `Z X = i X Z`. A [`PauliWord`]
//! is kept normal-ordered as `i^t · Π_j X_j^{a_j} Z_j^{b_j}` with every
//! exponent reduced mod 4, which makes word equality structural.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{DavnError, Result};
use crate::gauss::{GaussScalar, PhaseExp};
use crate::state::StateVector;

/// Local dimension handled by the Pauli algebra.
pub const QUDIT_LEVELS: u8 = 4;

/// Computational basis ket `|k₁k₂…kₙ>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisKet(Vec<u8>);

impl BasisKet {
    pub fn new(digits: impl Into<Vec<u8>>) -> Self {
        Self(digits.into())
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn n_sites(&self) -> usize {
        self.0.len()
    }

    pub fn digit(&self, site: usize) -> u8 {
        self.0[site]
    }

    pub fn digit_sum(&self) -> u32 {
        self.0.iter().map(|&d| d as u32).sum()
    }

    /// Parses a run of decimal digits such as `0233`.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| DavnError::parse(None, format!("bad ket digit {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// Enumerates all `levels^n` kets in lexicographic order.
    pub fn all(n_sites: usize, levels: u8) -> impl Iterator<Item = BasisKet> {
        let total = (levels as usize).pow(n_sites as u32);
        (0..total).map(move |mut idx| {
            let mut digits = vec![0u8; n_sites];
            for d in digits.iter_mut().rev() {
                *d = (idx % levels as usize) as u8;
                idx /= levels as usize;
            }
            BasisKet(digits)
        })
    }
}

impl fmt::Display for BasisKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|d| write!(f, "{d}"))
    }
}

/// `i^t · Π_j X_j^{a_j} Z_j^{b_j}`, stored normal-ordered (X before Z per site).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliWord {
    phase: PhaseExp,
    sites: Vec<(u8, u8)>,
}

impl PauliWord {
    pub fn identity(n_sites: usize) -> Self {
        Self { phase: PhaseExp::ONE, sites: vec![(0, 0); n_sites] }
    }

    pub fn new(phase: PhaseExp, sites: impl IntoIterator<Item = (u8, u8)>) -> Self {
        Self {
            phase,
            sites: sites.into_iter().map(|(a, b)| (a % 4, b % 4)).collect(),
        }
    }

    /// `X_site^power` on an `n_sites` register (sites are 0-based).
    pub fn x(n_sites: usize, site: usize, power: u8) -> Self {
        let mut w = Self::identity(n_sites);
        w.sites[site].0 = power % 4;
        w
    }

    pub fn z(n_sites: usize, site: usize, power: u8) -> Self {
        let mut w = Self::identity(n_sites);
        w.sites[site].1 = power % 4;
        w
    }

    /// Product of X powers only, one exponent per site.
    pub fn x_word(exponents: &[u8]) -> Self {
        Self::new(PhaseExp::ONE, exponents.iter().map(|&a| (a, 0)))
    }

    /// `Z₁Z₂…Zₙ`.
    pub fn z_all(n_sites: usize) -> Self {
        Self::new(PhaseExp::ONE, std::iter::repeat_n((0, 1), n_sites))
    }

    pub fn phase(&self) -> PhaseExp {
        self.phase
    }

    pub fn sites(&self) -> &[(u8, u8)] {
        &self.sites
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn is_identity(&self) -> bool {
        self.phase == PhaseExp::ONE && self.sites.iter().all(|&s| s == (0, 0))
    }

    pub fn with_phase(mut self, phase: PhaseExp) -> Self {
        self.phase = phase;
        self
    }

    fn check_sites(&self, found: usize) -> Result<()> {
        if self.sites.len() != found {
            return Err(DavnError::SiteCountMismatch { expected: self.sites.len(), found });
        }
        Ok(())
    }

    /// Image of a basis ket: `X^a Z^b |k> = i^{bk} |k+a>` per site.
    pub fn apply_word(&self, ket: &BasisKet) -> Result<(PhaseExp, BasisKet)> {
        self.check_sites(ket.n_sites())?;
        let mut phase = self.phase;
        let mut digits = Vec::with_capacity(ket.n_sites());
        for (&(a, b), &k) in self.sites.iter().zip(ket.digits()) {
            if k >= QUDIT_LEVELS {
                return Err(DavnError::DigitOutOfRange { digit: k, levels: QUDIT_LEVELS });
            }
            phase = phase.mul(PhaseExp::new(b * k % 4));
            digits.push((k + a) % 4);
        }
        Ok((phase, BasisKet(digits)))
    }

    /// Operator product `self · rhs` (rhs acts first), normal-ordered via
    /// `Z^b X^c = i^{bc} X^c Z^b`.
    pub fn mul_words(&self, rhs: &PauliWord) -> Result<PauliWord> {
        self.check_sites(rhs.n_sites())?;
        let mut phase = self.phase.mul(rhs.phase);
        let sites = self
            .sites
            .iter()
            .zip(&rhs.sites)
            .map(|(&(a1, b1), &(a2, b2))| {
                phase = phase.mul(PhaseExp::new(b1 * a2 % 4));
                ((a1 + a2) % 4, (b1 + b2) % 4)
            })
            .collect();
        Ok(PauliWord { phase, sites })
    }

    pub fn pow(&self, k: u32) -> PauliWord {
        let mut acc = PauliWord::identity(self.n_sites());
        for _ in 0..k {
            acc = acc.mul_words(self).expect("same site count");
        }
        acc
    }

    /// Linear extension of [`apply_word`](Self::apply_word).
    pub fn apply_to_state(&self, s: &StateVector) -> Result<StateVector> {
        self.check_sites(s.n_sites())?;
        if s.levels() != QUDIT_LEVELS {
            return Err(DavnError::LevelMismatch { expected: QUDIT_LEVELS, found: s.levels() });
        }
        let terms = s
            .iter()
            .map(|(ket, amp)| {
                let (phase, image) = self.apply_word(ket)?;
                Ok((image, amp.rotate(phase)))
            })
            .collect::<Result<Vec<_>>>()?;
        StateVector::from_terms(s.n_sites(), QUDIT_LEVELS, terms)
    }

    /// The exponent `c` with `w·s = i^c · s` exactly, or `None` when `s` is not
    /// an eigenvector with a fourth-root eigenvalue.
    pub fn eigenvalue_of(&self, s: &StateVector) -> Result<Option<PhaseExp>> {
        if s.is_zero() {
            return Err(DavnError::ZeroState);
        }
        let image = self.apply_to_state(s)?;
        Ok(s.proportionality_phase(&image))
    }

    /// Parses the text syntax, e.g. `X3*X4^3`, `Z1*Z2*Z3*Z4`, `i^3*X1^2*Z2`.
    /// Site indices are 1-based; factors multiply left to right.
    pub fn parse(text: &str, n_sites: usize) -> Result<PauliWord> {
        let bad = |msg: String| DavnError::parse(None, format!("{msg} in word {text:?}"));
        let mut word = PauliWord::identity(n_sites);
        for (pos, factor) in text.split('*').map(str::trim).enumerate() {
            if factor == "I" {
                continue;
            }
            if let Some(p) = factor.strip_prefix("i^") {
                if pos != 0 {
                    return Err(bad("phase factor must come first".into()));
                }
                word.phase = PhaseExp::parse_power_notation(factor)
                    .ok_or_else(|| bad(format!("bad phase exponent {p:?}")))?;
                continue;
            }
            let mut chars = factor.chars();
            let kind = chars.next().ok_or_else(|| bad("empty factor".into()))?;
            let rest = chars.as_str();
            let (site, power) = match rest.split_once('^') {
                Some((s, p)) => (s, p.parse::<u8>().map_err(|_| bad(format!("bad power {p:?}")))?),
                None => (rest, 1),
            };
            let site: usize = site.parse().map_err(|_| bad(format!("bad site {site:?}")))?;
            if site == 0 || site > n_sites {
                return Err(DavnError::InvalidSite { site, n_sites });
            }
            let f = match kind {
                'X' => PauliWord::x(n_sites, site - 1, power),
                'Z' => PauliWord::z(n_sites, site - 1, power),
                _ => return Err(bad(format!("unknown operator {kind:?}"))),
            };
            word = word.mul_words(&f)?;
        }
        Ok(word)
    }
}

fn push_factor(parts: &mut Vec<String>, op: char, site: usize, power: u8) {
    match power {
        0 => {}
        1 => parts.push(format!("{op}{site}")),
        p => parts.push(format!("{op}{site}^{p}")),
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.phase != PhaseExp::ONE {
            parts.push(self.phase.power_notation());
        }
        for (j, &(a, b)) in self.sites.iter().enumerate() {
            push_factor(&mut parts, 'X', j + 1, a);
            push_factor(&mut parts, 'Z', j + 1, b);
        }
        if parts.is_empty() {
            return f.write_str("I");
        }
        f.write_str(&parts.join("*"))
    }
}

/// Unnormalized eigenvector of `X` on one site: amplitudes `i^{mk}`, k = 0..3.
///
/// `X` shifts the amplitudes by one place, so the eigenvalue is `i^{-m}`.
pub fn x_eigenstate(m: u8) -> StateVector {
    let terms = (0..QUDIT_LEVELS).map(|k| {
        (BasisKet::new([k]), GaussScalar::from(PhaseExp::new(m % 4).pow(k)))
    });
    StateVector::from_terms(1, QUDIT_LEVELS, terms).expect("valid single-site state")
}
