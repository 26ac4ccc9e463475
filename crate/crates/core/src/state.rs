//! Sparse, unnormalized pure states with Gaussian-integer amplitudes and the
//! exact quantities derived from them: reduced density matrices, stabilizer
//! audits and the joint Z-measurement distribution.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;

use crate::error::{DavnError, Result};
use crate::gauss::{GaussScalar, PhaseExp};
use crate::pauli::{BasisKet, PauliWord, QUDIT_LEVELS};

/// Outcome of measuring every `Z_j` in the computational basis: digit `k_j`
/// stands for the eigenvalue `i^{k_j}` (for two-level sites, `(-1)^{k_j}`).
pub type OutcomeTuple = BasisKet;

/// Unnormalized state `Σ amp(k) |k>`; the physical state is this vector
/// divided by `sqrt(norm_sq)`. Zero amplitudes are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVector {
    n_sites: usize,
    levels: u8,
    amps: BTreeMap<BasisKet, GaussScalar>,
    norm_sq: i64,
}

impl StateVector {
    /// Builds a state from `(ket, amplitude)` terms. Repeated kets are summed
    /// and cancelled terms dropped.
    pub fn from_terms(
        n_sites: usize,
        levels: u8,
        terms: impl IntoIterator<Item = (BasisKet, GaussScalar)>,
    ) -> Result<Self> {
        let mut amps: BTreeMap<BasisKet, GaussScalar> = BTreeMap::new();
        for (ket, amp) in terms {
            if ket.n_sites() != n_sites {
                return Err(DavnError::SiteCountMismatch { expected: n_sites, found: ket.n_sites() });
            }
            if let Some(&digit) = ket.digits().iter().find(|&&d| d >= levels) {
                return Err(DavnError::DigitOutOfRange { digit, levels });
            }
            let slot = amps.entry(ket).or_default();
            *slot = slot.checked_add(amp)?;
        }
        amps.retain(|_, a| !a.is_zero());
        let mut norm_sq = 0i64;
        for a in amps.values() {
            norm_sq = norm_sq
                .checked_add(a.checked_norm_sq()?)
                .ok_or(DavnError::Arithmetic(crate::gauss::ArithmeticError::Overflow {
                    op: "norm",
                    lhs: *a,
                    rhs: GaussScalar::ZERO,
                }))?;
        }
        Ok(Self { n_sites, levels, amps, norm_sq })
    }

    /// A single basis ket with amplitude 1.
    pub fn basis(levels: u8, ket: BasisKet) -> Result<Self> {
        Self::from_terms(ket.n_sites(), levels, [(ket, GaussScalar::ONE)])
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn levels(&self) -> u8 {
        self.levels
    }

    pub fn norm_sq(&self) -> i64 {
        self.norm_sq
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitude(&self, ket: &BasisKet) -> GaussScalar {
        self.amps.get(ket).copied().unwrap_or_default()
    }

    /// Nonzero components in lexicographic ket order.
    pub fn iter(&self) -> impl Iterator<Item = (&BasisKet, &GaussScalar)> {
        self.amps.iter()
    }

    /// Every amplitude multiplied by `i^t`.
    pub fn scaled(&self, t: PhaseExp) -> Self {
        Self {
            amps: self.amps.iter().map(|(k, a)| (k.clone(), a.rotate(t))).collect(),
            ..self.clone()
        }
    }

    /// The `c` with `other == i^c · self` amplitude-for-amplitude, if any.
    pub fn proportionality_phase(&self, other: &StateVector) -> Option<PhaseExp> {
        if self.n_sites != other.n_sites || self.amps.len() != other.amps.len() || self.is_zero() {
            return None;
        }
        let (k0, a0) = self.amps.iter().next()?;
        let b0 = other.amps.get(k0)?;
        let c = (0..4).map(PhaseExp::new).find(|&c| a0.rotate(c) == *b0)?;
        self.amps
            .iter()
            .all(|(k, a)| other.amps.get(k) == Some(&a.rotate(c)))
            .then_some(c)
    }

    /// Equality up to a global phase in `{1, i, -1, -i}`.
    pub fn equals_up_to_phase(&self, other: &StateVector) -> bool {
        self.proportionality_phase(other).is_some()
    }

    /// Exact partial trace onto one site, over the common denominator `norm_sq`.
    pub fn reduced_density(&self, site: usize) -> Result<DensityMatrix> {
        if site >= self.n_sites {
            return Err(DavnError::InvalidSite { site, n_sites: self.n_sites });
        }
        if self.is_zero() {
            return Err(DavnError::ZeroState);
        }
        let dim = self.levels as usize;
        // group amplitudes by the digits of the traced-out sites
        let mut by_env: BTreeMap<Vec<u8>, Vec<(usize, GaussScalar)>> = BTreeMap::new();
        for (ket, &amp) in &self.amps {
            let mut env = ket.digits().to_vec();
            let local = env.remove(site) as usize;
            by_env.entry(env).or_default().push((local, amp));
        }
        let mut numerators = vec![GaussScalar::ZERO; dim * dim];
        for group in by_env.values() {
            for &(r, a) in group {
                for &(c, b) in group {
                    let cell = &mut numerators[r * dim + c];
                    *cell = cell.checked_add(a.checked_mul(b.conj())?)?;
                }
            }
        }
        Ok(DensityMatrix { dim, denom: self.norm_sq, numerators })
    }

    /// Probability `|amp(o)|² / norm_sq` of the joint Z outcome `o`.
    pub fn joint_z_probability(&self, o: &OutcomeTuple) -> Result<Rational64> {
        if self.is_zero() {
            return Err(DavnError::ZeroState);
        }
        if o.n_sites() != self.n_sites {
            return Err(DavnError::SiteCountMismatch { expected: self.n_sites, found: o.n_sites() });
        }
        Ok(Rational64::new(self.amplitude(o).norm_sq(), self.norm_sq))
    }

    /// Outcome tuples with nonzero probability, in lexicographic order.
    pub fn z_support(&self) -> Vec<OutcomeTuple> {
        self.amps.keys().cloned().collect()
    }

    /// Per-site comparison of the one-site reduced states against `I/d`.
    ///
    /// The criterion separates stabilizer from non-stabilizer states only for
    /// fully entangled inputs; that precondition is assumed, not checked.
    pub fn nonstabilizer_test(&self) -> Result<NonStabilizerVerdict> {
        let sites = (0..self.n_sites)
            .map(|site| {
                let rho = self.reduced_density(site)?;
                let maximally_mixed = rho.is_maximally_mixed();
                Ok(SiteVerdict { site, rho, maximally_mixed })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NonStabilizerVerdict { sites })
    }

    /// Checks `Z₁⋯Zₙ |s> = |s>` and audits, ket by ket, that a support ket is
    /// fixed by `Z₁⋯Zₙ` exactly when its digit sum vanishes mod `d`.
    pub fn check_global_stabilizer(&self) -> Result<StabilizerAudit> {
        let levels = self.levels;
        // Z for d levels is diag(ω^k); express ω^k in Z₄ when d divides 4
        let step = match levels {
            2 => 2u8,
            QUDIT_LEVELS => 1,
            found => return Err(DavnError::LevelMismatch { expected: QUDIT_LEVELS, found }),
        };
        let stabilized = if levels == QUDIT_LEVELS {
            PauliWord::z_all(self.n_sites).apply_to_state(self)? == *self
        } else {
            self.amps
                .keys()
                .all(|k| PhaseExp::from_i64((k.digit_sum() * step as u32) as i64) == PhaseExp::ONE)
        };
        let mut violations = Vec::new();
        for ket in self.amps.keys() {
            let phase = PhaseExp::from_i64((ket.digit_sum() * step as u32) as i64);
            let fixed = phase == PhaseExp::ONE;
            let sum_vanishes = ket.digit_sum() % levels as u32 == 0;
            if fixed != sum_vanishes {
                violations.push(ket.clone());
            }
        }
        Ok(StabilizerAudit {
            stabilized,
            kets_checked: self.amps.len(),
            observation_violations: violations,
        })
    }

    /// Line-oriented dump: a `norm_sq=<N>` header, then `<digits> <t>` per
    /// component meaning amplitude `i^t`. Only unit-modulus amplitudes are
    /// representable.
    pub fn dump(&self) -> Result<String> {
        let mut out = format!("norm_sq={}\n", self.norm_sq);
        for (ket, amp) in &self.amps {
            let t = amp.as_phase().ok_or_else(|| DavnError::NonUnitAmplitude {
                ket: ket.to_string(),
                amplitude: amp.to_string(),
            })?;
            out.push_str(&format!("{ket} {}\n", t.exp()));
        }
        Ok(out)
    }

    /// Inverse of [`dump`](Self::dump). The header must match the recomputed norm.
    pub fn parse_dump(text: &str, levels: u8) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| DavnError::parse(Some(1), "missing header"))?;
        let declared: i64 = header
            .strip_prefix("norm_sq=")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| DavnError::parse(Some(1), format!("bad header {header:?}")))?;
        let mut terms = Vec::new();
        let mut n_sites = None;
        for (idx, line) in lines {
            let lineno = Some(idx + 1);
            let (ket, t) = line
                .split_once(' ')
                .ok_or_else(|| DavnError::parse(lineno, format!("expected '<ket> <t>', got {line:?}")))?;
            let ket = BasisKet::parse(ket).map_err(|_| DavnError::parse(lineno, format!("bad ket {ket:?}")))?;
            let t: u8 = match t {
                "0" | "1" | "2" | "3" => t.parse().unwrap(),
                _ => return Err(DavnError::parse(lineno, format!("bad phase {t:?}"))),
            };
            if *n_sites.get_or_insert(ket.n_sites()) != ket.n_sites() {
                return Err(DavnError::parse(lineno, "inconsistent ket length"));
            }
            if terms.iter().any(|(k, _)| *k == ket) {
                return Err(DavnError::parse(lineno, format!("duplicate ket {ket}")));
            }
            terms.push((ket, GaussScalar::from(PhaseExp::new(t))));
        }
        let n_sites = n_sites.ok_or_else(|| DavnError::parse(None, "no components"))?;
        let state = Self::from_terms(n_sites, levels, terms)?;
        if state.norm_sq != declared {
            return Err(DavnError::parse(
                Some(1),
                format!("header norm_sq={declared} but components give {}", state.norm_sq),
            ));
        }
        Ok(state)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (ket, amp)) in self.amps.iter().enumerate() {
            let coeff = match (amp.re, amp.im) {
                (1, 0) => String::new(),
                (-1, 0) => "-".into(),
                _ if amp.re != 0 && amp.im != 0 => format!("({amp})"),
                _ => amp.to_string(),
            };
            let sep = if n == 0 || coeff.starts_with('-') { "" } else { "+" };
            write!(f, "{sep}{coeff}|{ket}>")?;
        }
        Ok(())
    }
}

/// Single-site density matrix with entries `numerators[r][c] / denom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityMatrix {
    dim: usize,
    denom: i64,
    numerators: Vec<GaussScalar>,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn numerator(&self, r: usize, c: usize) -> GaussScalar {
        self.numerators[r * self.dim + c]
    }

    /// Entry as exact `(re, im)` rationals.
    pub fn entry(&self, r: usize, c: usize) -> (Rational64, Rational64) {
        let n = self.numerator(r, c);
        (Rational64::new(n.re, self.denom), Rational64::new(n.im, self.denom))
    }

    pub fn diagonal(&self) -> Vec<Rational64> {
        (0..self.dim).map(|k| self.entry(k, k).0).collect()
    }

    pub fn trace(&self) -> Rational64 {
        self.diagonal().into_iter().sum()
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| self.numerator(r, c) == self.numerator(c, r).conj()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|r| (0..self.dim).all(|c| r == c || self.numerator(r, c).is_zero()))
    }

    /// `ρ = I/d` exactly.
    pub fn is_maximally_mixed(&self) -> bool {
        self.is_diagonal()
            && (0..self.dim).all(|k| self.entry(k, k).0 == Rational64::new(1, self.dim as i64))
    }
}

impl fmt::Display for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |(re, im): (Rational64, Rational64)| match (*re.numer(), *im.numer()) {
            (_, 0) => re.to_string(),
            (0, _) => format!("{im}i"),
            _ => format!("{re}+{im}i"),
        };
        if self.is_diagonal() {
            let diag: Vec<String> = (0..self.dim).map(|k| show(self.entry(k, k))).collect();
            return write!(f, "diag({})", diag.join(", "));
        }
        let rows: Vec<String> = (0..self.dim)
            .map(|r| {
                let cells: Vec<String> = (0..self.dim).map(|c| show(self.entry(r, c))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[derive(Debug, Clone)]
pub struct SiteVerdict {
    pub site: usize,
    pub rho: DensityMatrix,
    pub maximally_mixed: bool,
}

#[derive(Debug, Clone)]
pub struct NonStabilizerVerdict {
    pub sites: Vec<SiteVerdict>,
}

impl NonStabilizerVerdict {
    /// True when at least one reduced state deviates from `I/d`.
    pub fn is_non_stabilizer(&self) -> bool {
        self.sites.iter().any(|s| !s.maximally_mixed)
    }

    pub fn deviating_sites(&self) -> Vec<usize> {
        self.sites.iter().filter(|s| !s.maximally_mixed).map(|s| s.site).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerAudit {
    /// `Z₁⋯Zₙ` fixes the state exactly.
    pub stabilized: bool,
    pub kets_checked: usize,
    /// Support kets where "fixed by `Z₁⋯Zₙ`" and "digit sum ≡ 0" disagree.
    pub observation_violations: Vec<BasisKet>,
}

impl StabilizerAudit {
    pub fn observation_holds(&self) -> bool {
        self.observation_violations.is_empty()
    }
}
