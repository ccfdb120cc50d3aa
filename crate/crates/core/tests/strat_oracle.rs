mod common;

use patholab_core::parse;
use patholab_core::strat::{stratify, verify_conflict, verify_levels, StratResult};
use proptest::prelude::*;

fn agrees(f: &patholab_core::Formula) {
    let result = stratify(f);
    match &result {
        StratResult::Stratified(levels) => {
            assert!(verify_levels(f, levels), "{f}: levels do not satisfy")
        }
        StratResult::Unstratified(cycle) => {
            assert!(verify_conflict(f, cycle), "{f}: conflict is not a cycle")
        }
    }
    if common::variable_count(f) <= 4 {
        assert_eq!(
            result.is_stratified(),
            common::brute_stratifiable(f, 0, 8),
            "{f}"
        );
    }
}

#[test]
fn fixed_examples_match_brute_force() {
    for (text, want) in [
        ("not (x in x)", false),
        ("exists y: ((x in y) & (y in x))", false),
        ("exists y: ((y in x) & (x = y))", false),
        ("x in {y : y = x}", true),
        ("x in {y : x in y}", false),
        ("exists y: (y in x)", true),
        ("forall y: (y in x -> y = y)", true),
        ("x = {y : y in y}", false),
        ("{y : Verum} in x", true),
    ] {
        let f = parse(text).unwrap();
        assert_eq!(common::brute_stratifiable(&f, 0, 8), want, "{text}");
        agrees(&f);
    }
}

#[test]
fn fuzz_set_matches_brute_force() {
    for f in common::fuzz_set(7, 300, 5) {
        agrees(&f);
    }
}

proptest! {
    #[test]
    fn random_formulas_match_brute_force(seed in any::<u64>()) {
        agrees(&common::nearly_closed_formula(&mut common::rng(seed), 4));
    }
}
