//! Refutation search for comprehension theories, with checkable proofs.

mod checker;
mod proof;
mod search;
mod theory;

use serde::Serialize;

pub use checker::{check_proof, verify_proof, CheckError};
pub use proof::{Proof, ProofTextError, Rule, Step};
pub use theory::{build_cosi_theory, AbsConstant, AxiomClass, Theory};

use crate::formula::NearlyClosed;
use search::{Search, SearchResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Largest term depth used to instantiate universal formulas.
    pub max_depth: usize,
    pub max_steps: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_depth: 3,
            max_steps: 50_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    Proof(Proof),
    /// No refutation within the budget; `depth` is the last level searched.
    BudgetExhausted {
        depth: usize,
        steps: usize,
    },
}

impl Refutation {
    pub fn proof(&self) -> Option<&Proof> {
        match self {
            Refutation::Proof(p) => Some(p),
            Refutation::BudgetExhausted { .. } => None,
        }
    }
}

/// Iterative deepening over term depth `1..=max_depth`; all levels share
/// the step budget.
pub fn refute(theory: &Theory, budget: Budget) -> Refutation {
    match Search::new(theory, budget.max_steps).run(budget.max_depth) {
        SearchResult::Found(p) => Refutation::Proof(p),
        SearchResult::Exhausted { depth, steps } => Refutation::BudgetExhausted { depth, steps },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathoOutcome {
    ProvedPatho { theory: Theory, proof: Proof },
    Unknown { depth: usize, steps: usize },
}

impl PathoOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, PathoOutcome::ProvedPatho { .. })
    }
}

pub fn patho_check(a: &NearlyClosed, budget: Budget) -> PathoOutcome {
    let theory = build_cosi_theory(a);
    match refute(&theory, budget) {
        Refutation::Proof(proof) => PathoOutcome::ProvedPatho { theory, proof },
        Refutation::BudgetExhausted { depth, steps } => PathoOutcome::Unknown { depth, steps },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{nearly_closed, wrap_closed, Formula};
    use crate::parser::parse;
    use crate::syntpatho::ncn;

    fn nc(s: &str) -> NearlyClosed {
        nearly_closed(&parse(s).unwrap()).unwrap()
    }

    fn proved(a: &NearlyClosed, budget: Budget) -> (Theory, Proof) {
        match patho_check(a, budget) {
            PathoOutcome::ProvedPatho { theory, proof } => (theory, proof),
            other => panic!("expected a proof, got {other:?}"),
        }
    }

    #[test]
    fn russell_is_refuted_at_depth_one() {
        let (theory, proof) = proved(&nc("not (x in x)"), Budget::default());
        assert_eq!(proof.depth_used, 1);
        verify_proof(&theory, &proof).unwrap();
    }

    #[test]
    fn ncn_two_and_three_are_refuted() {
        for n in [2, 3] {
            let a = nearly_closed(&ncn(n)).unwrap();
            let (theory, proof) = proved(&a, Budget::default());
            verify_proof(&theory, &proof).unwrap();
            assert!(proof.depth_used <= 3);
        }
    }

    #[test]
    fn self_membership_is_not_refuted() {
        assert!(!patho_check(&nc("x in x"), Budget::default()).is_proved());
        let falsum = nearly_closed(&wrap_closed(&Formula::Falsum)).unwrap();
        assert!(!patho_check(&falsum, Budget::default()).is_proved());
    }

    #[test]
    fn deleting_a_step_breaks_the_proof() {
        let (theory, proof) = proved(&nc("not (x in x)"), Budget::default());
        for i in 0..proof.steps.len() {
            let mut broken = proof.clone();
            broken.steps.remove(i);
            for (k, s) in broken.steps.iter_mut().enumerate() {
                s.id = k + 1;
            }
            assert!(!check_proof(&theory, &broken), "step {i} removed");
        }
    }

    #[test]
    fn proofs_survive_the_text_form() {
        let (theory, proof) = proved(&nearly_closed(&ncn(3)).unwrap(), Budget::default());
        let back = Proof::from_text(&proof.to_text()).unwrap();
        assert_eq!(back.steps, proof.steps);
        assert!(check_proof(&theory, &back));
    }

    #[test]
    fn larger_budgets_find_the_same_proof() {
        let a = nearly_closed(&ncn(2)).unwrap();
        let (_, small) = proved(&a, Budget::default());
        let (_, large) = proved(
            &a,
            Budget {
                max_depth: 5,
                max_steps: 200_000,
            },
        );
        assert_eq!(small, large);
    }
}
