//! Properties of the constraint engine, checked against brute-force
//! enumeration of the integer box [-5, 5]³.

mod common;

use proptest::prelude::*;

use common::props::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn widening(a in rows(4), b in rows(4)) {
        widening_is_entailed_by_both_arguments(&a, &b)?;
    }

    #[test]
    fn projection(a in rows(4), keep in prop::array::uniform3(any::<bool>())) {
        projection_holds_on_every_model(&a, keep)?;
    }

    #[test]
    fn reflexivity(a in rows(4)) {
        entailment_is_reflexive(&a)?;
    }

    #[test]
    fn transitivity(
        a in rows(4),
        drop1 in prop::collection::vec(any::<bool>(), 4),
        drop2 in prop::collection::vec(any::<bool>(), 4),
        other in rows(2),
    ) {
        entailment_is_transitive(&a, &drop1, &drop2, &other)?;
    }

    #[test]
    fn soundness(a in rows(3), b in rows(2)) {
        entailment_is_sound(&a, &b)?;
    }

    #[test]
    fn elimination_vs_grid(a in rows(4)) {
        satisfiability_matches_grid_enumeration(&a)?;
    }
}
