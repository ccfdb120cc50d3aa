mod common;

use patholab_core::pipeline::prepare_formula;
use patholab_core::refuter::{build_cosi_theory, check_proof, refute, Budget, Proof};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn found_proofs_check_and_survive_text(seed in any::<u64>()) {
        let f = common::nearly_closed_formula(&mut common::rng(seed), 4);
        let (a, _) = prepare_formula(&f).unwrap();
        let theory = build_cosi_theory(&a);
        if let Some(p) = refute(&theory, Budget { max_depth: 2, max_steps: 20_000 }).proof() {
            prop_assert!(check_proof(&theory, p), "{}", f);
            let back = Proof::from_text(&p.to_text()).unwrap();
            prop_assert!(check_proof(&theory, &back), "{}", f);
        }
    }

    #[test]
    fn dropping_a_line_breaks_the_proof(seed in any::<u64>()) {
        let f = common::nearly_closed_formula(&mut common::rng(seed), 3);
        let (a, _) = prepare_formula(&f).unwrap();
        let theory = build_cosi_theory(&a);
        if let Some(p) = refute(&theory, Budget { max_depth: 2, max_steps: 20_000 }).proof() {
            for i in 0..p.steps.len() {
                let mut broken = p.clone();
                broken.steps.remove(i);
                prop_assert!(!check_proof(&theory, &broken), "{}: line {} removable", f, i + 1);
            }
        }
    }
}

#[test]
fn budgets_are_monotone() {
    for f in common::fuzz_set(17, 40, 3) {
        let (a, _) = prepare_formula(&f).unwrap();
        let theory = build_cosi_theory(&a);
        let small = refute(
            &theory,
            Budget {
                max_depth: 2,
                max_steps: 5_000,
            },
        );
        if let Some(p) = small.proof() {
            let large = refute(
                &theory,
                Budget {
                    max_depth: 4,
                    max_steps: 50_000,
                },
            );
            assert_eq!(large.proof(), Some(p), "{f}");
        }
    }
}
