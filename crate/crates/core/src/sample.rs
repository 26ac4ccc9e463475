//! Seeded draws from the exact joint Z distribution.

use std::collections::BTreeMap;

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{DavnError, Result};
use crate::pauli::BasisKet;
use crate::state::{OutcomeTuple, StateVector};

/// Identifies the generator and the draw procedure; part of every summary.
pub const SAMPLER_ALGORITHM: &str =
    "chacha20-seed_from_u64/gen_range(0..norm_sq)/cumulative-lexicographic";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSummary {
    pub seed: u64,
    pub runs: u64,
    pub algorithm: &'static str,
    /// Every outcome tuple of the register, zeros included.
    pub counts: BTreeMap<OutcomeTuple, u64>,
    /// `max_o |count(o) − runs·p(o)|`.
    pub max_abs_deviation: Rational64,
}

impl SampleSummary {
    pub fn count(&self, o: &OutcomeTuple) -> u64 {
        self.counts.get(o).copied().unwrap_or(0)
    }
}

pub fn sample_outcomes(s: &StateVector, runs: u64, seed: u64) -> Result<SampleSummary> {
    if runs == 0 {
        return Err(DavnError::ZeroRuns);
    }
    if s.is_zero() {
        return Err(DavnError::ZeroState);
    }
    // cumulative integer weights |amp|² in ket order; total is norm_sq
    let mut cumulative = Vec::with_capacity(s.len());
    let mut acc = 0i64;
    for (k, a) in s.iter() {
        acc += a.norm_sq();
        cumulative.push((acc, k.clone()));
    }
    let mut counts: BTreeMap<OutcomeTuple, u64> =
        BasisKet::all(s.n_sites(), s.levels()).map(|k| (k, 0)).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..runs {
        let r = rng.gen_range(0..s.norm_sq());
        let idx = cumulative.partition_point(|(c, _)| *c <= r);
        *counts.get_mut(&cumulative[idx].1).expect("support ket is a register ket") += 1;
    }
    let runs_i = i64::try_from(runs).map_err(|_| DavnError::parse(None, "run count too large"))?;
    let max_abs_deviation = counts
        .iter()
        .map(|(k, &c)| {
            let expected = Rational64::new(runs_i * s.amplitude(k).norm_sq(), s.norm_sq());
            let d = Rational64::from(c as i64) - expected;
            if d < Rational64::from(0) {
                -d
            } else {
                d
            }
        })
        .max()
        .unwrap_or_default();
    Ok(SampleSummary { seed, runs, algorithm: SAMPLER_ALGORITHM, counts, max_abs_deviation })
}
