mod common;

use common::*;
use proptest::prelude::*;
use verdier::catalog::{builtin, builtin_names};
use verdier::verify::check_identity_formal;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms_hold(a in base_class(), b in base_class(), c in base_class()) {
        ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn products_respect_the_grading(a in base_class(), b in base_class()) {
        graded_product(&a, &b)?;
    }

    #[test]
    fn series_inversion_round_trips(a in base_class()) {
        series_inversion(&a)?;
    }

    #[test]
    fn push_of_relative_top_power_is_one(t in twists(4), extra in 0u32..3) {
        relative_top_power(&t, extra)?;
    }

    #[test]
    fn projection_formula_holds(t in twists(3), k in 0u32..6, beta in base_class()) {
        projection_formula(&t, k, &beta)?;
    }

    #[test]
    fn fibre_euler_characteristics(a in -3i64..=3, b in -3i64..=3, k in 0i64..=4) {
        generic_fibre_euler(a, b, k)?;
    }

    #[test]
    fn stratified_push_is_additive(t1 in table(), t2 in table(), l in 1i64..=4) {
        stratified_additivity(&t1, &t2, l)?;
    }

    #[test]
    fn delta_of_one_component(m in 1u32..=6, l in 1i64..=3, k in 1i64..=3) {
        single_component_delta(m, l, k)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn renaming_a_line_symbol_keeps_the_verdict(
        family in prop::sample::select(builtin_names().to_vec()),
        d in 1u32..=3,
        fresh in "[MNPR][a-z]{0,3}",
    ) {
        let spec = builtin(family).unwrap();
        let renamed = spec.with_renamed_symbol("L", &fresh);
        prop_assert!(!renamed.line_symbols().contains("L"));
        let a = check_identity_formal(&spec, d).unwrap();
        let b = check_identity_formal(&renamed, d).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!(b.passed());
    }
}

#[test]
fn every_single_term_mutation_is_detected() {
    assert_eq!(undetected_mutations(), Vec::<String>::new());
}
