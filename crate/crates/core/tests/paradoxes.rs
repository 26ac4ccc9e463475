use std::collections::BTreeMap;

use davn_core::factory::build_psi_1234;
use davn_core::lhv::{minimal_unsat_core, satisfiable, verify_davn, verify_paradox, Constraint};
use davn_core::pauli::PauliWord;
use davn_core::{BasisKet, Verdict};
use num_rational::Rational64;

fn c(text: &str) -> Constraint {
    Constraint::parse(text).unwrap()
}

#[test]
fn all_outcomes_are_refuted_with_and_without_basic_constraints() {
    let r = verify_davn(&build_psi_1234(), None).unwrap();
    assert_eq!(r.verdict, Verdict::Davn);
    assert_eq!(r.support_size, 56);
    assert_eq!(r.probability_sum, Rational64::from(1));
    for p in &r.reports {
        assert!(p.is_paradox(), "{}", p.outcome);
        assert!(p.witness.is_none());
        assert!(p.extended_only_unsat, "{}", p.outcome);
        assert_eq!(p.probability, Rational64::new(1, 56));
    }
}

/// Size distribution of the per-outcome constraint sets, computed by a
/// separate script that scans the residuals with complex floats.
#[test]
fn constraint_set_sizes_match_independent_scan() {
    let r = verify_davn(&build_psi_1234(), None).unwrap();
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for p in &r.reports {
        *sizes.entry(p.constraints.len()).or_default() += 1;
    }
    assert_eq!(sizes, BTreeMap::from([(4, 8), (6, 24), (8, 14), (9, 8), (12, 2)]));
}

#[test]
fn cores_are_sound_and_minimal() {
    let r = verify_davn(&build_psi_1234(), Some(2)).unwrap();
    for p in &r.reports {
        assert!(satisfiable(&p.minimal_core).is_none());
        for drop in 0..p.minimal_core.len() {
            let mut sub = p.minimal_core.clone();
            sub.remove(drop);
            assert!(satisfiable(&sub).is_some(), "{}", p.outcome);
        }
    }
}

#[test]
fn constraints_are_quantum_verified() {
    let s = build_psi_1234();
    for o in s.z_support() {
        let p = verify_paradox(&s, &o).unwrap();
        for row in &p.rows {
            for rel in row.basic.iter().chain(&row.extended) {
                let w = PauliWord::x_word(&rel.exponents);
                assert_eq!(w.eigenvalue_of(&row.residual.state).unwrap(), Some(rel.target));
            }
        }
    }
}

#[test]
fn type_one_three_basic_relations_form_a_core() {
    let cs = [c("X3*X4^3=-i"), c("X2*X4^3=-i"), c("X2*X3^3=-i")];
    assert!(satisfiable(&cs).is_none());
    assert_eq!(minimal_unsat_core(&cs).unwrap().len(), 3);
    let p = verify_paradox(&build_psi_1234(), &BasisKet::new([0, 0, 0, 0])).unwrap();
    for x in &cs {
        assert!(p.constraints_basic.contains(x), "{x}");
    }
    assert_eq!(p.minimal_core.len(), 3);
}

#[test]
fn type_two_three_relation_core() {
    let cs = [c("X3^2*X4^2=-1"), c("X2^2*X4^2=1"), c("X2^2*X3^2=1")];
    assert_eq!(minimal_unsat_core(&cs).unwrap(), cs.to_vec());
    let p = verify_paradox(&build_psi_1234(), &BasisKet::new([0, 0, 2, 2])).unwrap();
    for x in &cs {
        assert!(p.constraints.contains(x), "{x}");
    }
}

#[test]
fn type_three_cores() {
    let s = build_psi_1234();
    let first = [c("X3^2*X4^2=1"), c("X2^2*X4^2=-1"), c("X2*X3^3=1")];
    assert!(satisfiable(&first).is_none());
    let p = verify_paradox(&s, &BasisKet::new([0, 2, 3, 3])).unwrap();
    assert!(first.iter().all(|x| p.constraints.contains(x)));

    let second = [c("X2^2*X4^2=-1"), c("X2^2*X3^2=-1"), c("X1^2*X4^2=1"), c("X1^2*X3^2=-1")];
    assert!(satisfiable(&second).is_none());
    let p = verify_paradox(&s, &BasisKet::new([3, 0, 2, 3])).unwrap();
    assert_eq!(p.constraints_basic, second.to_vec());
}

#[test]
fn outside_support_is_an_error() {
    let err = verify_paradox(&build_psi_1234(), &BasisKet::new([1, 1, 1, 1])).unwrap_err();
    assert!(err.to_string().contains("probability 0"));
}
