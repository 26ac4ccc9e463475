//! Literal constructions of the four-ququart resource state and the qubit
//! seed state, plus the d/2-power commutation audit.

use crate::error::{DavnError, Result};
use crate::gauss::{GaussScalar, PhaseExp};
use crate::pauli::{BasisKet, QUDIT_LEVELS};
use crate::state::StateVector;

/// `(ket digits, t)` meaning amplitude `i^t`, seven rows of the defining sum.
/// Row 0 holds the two type-I terms; every later row lists one type-II term
/// followed by one term of each III-A, III-B, IV-A, IV-B, V-A, V-B, VI-A, VI-B.
pub const PSI_1234_TERMS: [([u8; 4], u8); 56] = [
    ([0, 0, 0, 0], 0), ([2, 2, 2, 2], 0),
    ([0, 0, 2, 2], 2), ([0, 2, 3, 3], 1), ([2, 0, 3, 3], 3), ([0, 2, 1, 1], 1), ([2, 0, 1, 1], 3),
    ([1, 3, 0, 0], 1), ([3, 1, 0, 0], 3), ([1, 3, 2, 2], 3), ([3, 1, 2, 2], 1),
    ([2, 0, 0, 2], 2), ([3, 0, 2, 3], 1), ([3, 2, 0, 3], 3), ([1, 0, 2, 1], 1), ([1, 2, 0, 1], 3),
    ([0, 1, 3, 0], 1), ([0, 3, 1, 0], 3), ([2, 1, 3, 2], 3), ([2, 3, 1, 2], 1),
    ([2, 2, 0, 0], 2), ([3, 3, 0, 2], 1), ([3, 3, 2, 0], 3), ([1, 1, 0, 2], 1), ([1, 1, 2, 0], 3),
    ([0, 0, 1, 3], 1), ([0, 0, 3, 1], 3), ([2, 2, 1, 3], 3), ([2, 2, 3, 1], 1),
    ([0, 2, 2, 0], 2), ([2, 3, 3, 0], 1), ([0, 3, 3, 2], 3), ([2, 1, 1, 0], 1), ([0, 1, 1, 2], 3),
    ([3, 0, 0, 1], 1), ([1, 0, 0, 3], 3), ([3, 2, 2, 1], 3), ([1, 2, 2, 3], 1),
    ([0, 2, 0, 2], 2), ([0, 3, 2, 3], 1), ([2, 3, 0, 3], 3), ([0, 1, 2, 1], 1), ([2, 1, 0, 1], 3),
    ([1, 0, 3, 0], 1), ([3, 0, 1, 0], 3), ([1, 2, 3, 2], 3), ([3, 2, 1, 2], 1),
    ([2, 0, 2, 0], 2), ([3, 0, 3, 2], 1), ([3, 2, 3, 0], 3), ([1, 0, 1, 2], 1), ([1, 2, 1, 0], 3),
    ([0, 1, 0, 3], 1), ([0, 3, 0, 1], 3), ([2, 1, 2, 3], 3), ([2, 3, 2, 1], 1),
];

/// Σ (position+1)·(base-4 ket value + 256·t) over the table, mod 2³¹−1.
pub const PSI_1234_CHECKSUM: u64 = psi_checksum(&PSI_1234_TERMS);

pub const fn psi_checksum(terms: &[([u8; 4], u8)]) -> u64 {
    let mut acc = 0u64;
    let mut n = 0;
    while n < terms.len() {
        let (k, t) = terms[n];
        let v = k[0] as u64 * 64 + k[1] as u64 * 16 + k[2] as u64 * 4 + k[3] as u64 + 256 * t as u64;
        acc = (acc + (n as u64 + 1) * v) % 2_147_483_647;
        n += 1;
    }
    acc
}

/// The 56-component four-ququart state, unnormalized (norm² 56).
pub fn build_psi_1234() -> StateVector {
    let terms = PSI_1234_TERMS
        .iter()
        .map(|&(k, t)| (BasisKet::new(k), GaussScalar::from(PhaseExp::new(t))));
    StateVector::from_terms(4, QUDIT_LEVELS, terms).expect("embedded table is well formed")
}

/// Four-qubit seed state `|↑↑↑↑> − |S(2,2)>` with `↑ = 0`, `↓ = 1`, norm² 7.
pub fn build_psi4_qubit() -> StateVector {
    let up = std::iter::once((BasisKet::new([0, 0, 0, 0]), GaussScalar::ONE));
    let weight_two = BasisKet::all(4, 2)
        .filter(|k| k.digit_sum() == 2)
        .map(|k| (k, -GaussScalar::ONE));
    StateVector::from_terms(4, 2, up.chain(weight_two)).expect("qubit seed is well formed")
}

/// Relabels a two-level state into four levels: `0 → 0`, `1 → target_digit`.
pub fn embed_qubit_state(s: &StateVector, target_digit: u8) -> Result<StateVector> {
    if s.levels() != 2 {
        return Err(DavnError::LevelMismatch { expected: 2, found: s.levels() });
    }
    if target_digit >= QUDIT_LEVELS {
        return Err(DavnError::DigitOutOfRange { digit: target_digit, levels: QUDIT_LEVELS });
    }
    let terms = s.iter().map(|(k, &a)| {
        let digits: Vec<u8> = k.digits().iter().map(|&b| if b == 0 { 0 } else { target_digit }).collect();
        (BasisKet::new(digits), a)
    });
    StateVector::from_terms(s.n_sites(), QUDIT_LEVELS, terms)
}

pub const MAX_AUDIT_DIMENSION: u32 = 64;

/// Phase `c` in `X^{d/2} Z^{d/2} = c · Z^{d/2} X^{d/2}` for even `d`, which is
/// `ω^{(d/2)²}` with `ω = e^{2πi/d}`; always `+1` or `−1`.
pub fn commutation_phase_audit(d: u32) -> Result<PhaseExp> {
    if d < 2 || !d.is_multiple_of(2) || d > MAX_AUDIT_DIMENSION {
        return Err(DavnError::InvalidDimension { d, max: MAX_AUDIT_DIMENSION });
    }
    let h = d / 2;
    // ω^e = e^{2πi e/d}; with e = h² mod d this is a multiple of π since d | 2h²
    let e = (h * h) % d;
    Ok(PhaseExp::new(((4 * e) / d) as u8))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_rational::Rational64;

    // Independent transcription, written in ket notation and parsed here.
    const PSI_TEXT: &str = "
        |0000> + |2222>
        - |0022> + i|0233> - i|2033> + i|0211> - i|2011> + i|1300> - i|3100> - i|1322> + i|3122>
        - |2002> + i|3023> - i|3203> + i|1021> - i|1201> + i|0130> - i|0310> - i|2132> + i|2312>
        - |2200> + i|3302> - i|3320> + i|1102> - i|1120> + i|0013> - i|0031> - i|2213> + i|2231>
        - |0220> + i|2330> - i|0332> + i|2110> - i|0112> + i|3001> - i|1003> - i|3221> + i|1223>
        - |0202> + i|0323> - i|2303> + i|0121> - i|2101> + i|1030> - i|3010> - i|1232> + i|3212>
        - |2020> + i|3032> - i|3230> + i|1012> - i|1210> + i|0103> - i|0301> - i|2123> + i|2321>";

    fn parse_ket_sum(text: &str) -> Vec<(BasisKet, GaussScalar)> {
        let compact: String = text.split_whitespace().collect();
        let mut out = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let bar = rest.find('|').unwrap();
            let close = rest.find('>').unwrap();
            let coeff = &rest[..bar];
            let amp = match coeff {
                "" | "+" => GaussScalar::ONE,
                "-" => -GaussScalar::ONE,
                "i" | "+i" => GaussScalar::I,
                "-i" => -GaussScalar::I,
                other => panic!("unexpected coefficient {other:?}"),
            };
            out.push((BasisKet::parse(&rest[bar + 1..close]).unwrap(), amp));
            rest = &rest[close + 1..];
        }
        out
    }

    #[test]
    fn literal_table_matches_second_transcription() {
        let parsed = parse_ket_sum(PSI_TEXT);
        assert_eq!(parsed.len(), 56);
        let other = StateVector::from_terms(4, 4, parsed).unwrap();
        assert_eq!(other, build_psi_1234());
    }

    #[test]
    fn checksum_guards_the_table() {
        assert_eq!(PSI_1234_CHECKSUM, psi_checksum(&PSI_1234_TERMS));
        let mut edited = PSI_1234_TERMS;
        edited[7].1 = 3;
        assert_ne!(psi_checksum(&edited), PSI_1234_CHECKSUM);
    }

    #[test]
    fn psi_1234_examples() {
        let s = build_psi_1234();
        assert_eq!(s.len(), 56);
        assert_eq!(s.norm_sq(), 56);
        assert_eq!(s.amplitude(&BasisKet::new([0, 0, 0, 0])), GaussScalar::ONE);
        assert_eq!(s.amplitude(&BasisKet::new([0, 0, 2, 2])), -GaussScalar::ONE);
        assert!(s.amplitude(&BasisKet::new([1, 1, 1, 1])).is_zero());
        let real = s.iter().filter(|(_, a)| a.im == 0).count();
        assert_eq!(real, 8);
        assert!(s.iter().all(|(k, a)| k.digit_sum() % 4 == 0 && a.as_phase().is_some()));
    }

    #[test]
    fn psi4_qubit_examples() {
        let s = build_psi4_qubit();
        assert_eq!(s.norm_sq(), 7);
        assert_eq!(s.amplitude(&BasisKet::new([0, 0, 0, 0])), GaussScalar::ONE);
        assert_eq!(s.amplitude(&BasisKet::new([0, 1, 1, 0])), -GaussScalar::ONE);
        assert!(s.amplitude(&BasisKet::new([1, 1, 1, 1])).is_zero());
        assert_eq!(s.z_support().len(), 7);
        let rho = s.reduced_density(0).unwrap();
        // first qubit up: |0000> plus three weight-two kets; down: the other three
        assert_eq!(rho.diagonal(), vec![Rational64::new(4, 7), Rational64::new(3, 7)]);
    }

    #[test]
    fn embedding_relabels_down_only() {
        let e = embed_qubit_state(&build_psi4_qubit(), 1).unwrap();
        assert_eq!(e.levels(), 4);
        assert_eq!(e.norm_sq(), 7);
        assert_eq!(e.amplitude(&BasisKet::new([0, 1, 1, 0])), -GaussScalar::ONE);
        assert_eq!(e.amplitude(&BasisKet::new([0, 0, 0, 0])), GaussScalar::ONE);
        assert!(matches!(embed_qubit_state(&build_psi_1234(), 1), Err(DavnError::LevelMismatch { .. })));
    }

    fn shift_and_clock(d: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
        let mut x = vec![Complex64::new(0.0, 0.0); d * d];
        let mut z = x.clone();
        for k in 0..d {
            x[((k + 1) % d) * d + k] = Complex64::new(1.0, 0.0);
            z[k * d + k] = omega.powu(k as u32);
        }
        (x, z)
    }

    fn matmul(a: &[Complex64], b: &[Complex64], d: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                out[r * d + c] = (0..d).map(|k| a[r * d + k] * b[k * d + c]).sum();
            }
        }
        out
    }

    fn matpow(a: &[Complex64], p: usize, d: usize) -> Vec<Complex64> {
        let mut out: Vec<Complex64> =
            (0..d * d).map(|n| if n / d == n % d { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect();
        for _ in 0..p {
            out = matmul(&out, a, d);
        }
        out
    }

    /// Numerical oracle: ratio of X^{d/2}Z^{d/2} to Z^{d/2}X^{d/2}.
    fn float_commutation_sign(d: usize) -> f64 {
        let (x, z) = shift_and_clock(d);
        let (xh, zh) = (matpow(&x, d / 2, d), matpow(&z, d / 2, d));
        let (xz, zx) = (matmul(&xh, &zh, d), matmul(&zh, &xh, d));
        let n = (0..d * d).find(|&n| zx[n].norm() > 0.5).unwrap();
        let ratio = xz[n] / zx[n];
        assert!(xz.iter().zip(&zx).all(|(a, b)| (a - ratio * b).norm() < 1e-9));
        assert!(ratio.im.abs() < 1e-9);
        ratio.re
    }

    #[test]
    fn commutation_audit_matches_float_oracle() {
        for d in (2..=12).step_by(2) {
            let sign = if commutation_phase_audit(d).unwrap() == PhaseExp::ONE { 1.0 } else { -1.0 };
            assert!((float_commutation_sign(d as usize) - sign).abs() < 1e-9, "d={d}");
        }
        assert_eq!(commutation_phase_audit(2).unwrap(), PhaseExp::MINUS_ONE);
        assert_eq!(commutation_phase_audit(6).unwrap(), PhaseExp::MINUS_ONE);
        assert_eq!(commutation_phase_audit(4).unwrap(), PhaseExp::ONE);
    }

    #[test]
    fn commutation_audit_rejects_bad_dimension() {
        for d in [0, 3, 7, 66] {
            assert!(matches!(commutation_phase_audit(d), Err(DavnError::InvalidDimension { .. })));
        }
    }
}
