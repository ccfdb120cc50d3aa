//! Combined verdict for one nearly-closed predicate: refutation search and
//! model search side by side.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::formula::NearlyClosed;
use crate::modelfinder::{certify_nonpatho, Certification, Model, ModelError};
use crate::refuter::{build_cosi_theory, check_proof, refute, Budget, Proof, Refutation, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Verdict {
    /// The comprehension theory was refuted by a checked proof.
    ProvedPatho,
    /// A finite model of the comprehension theory was found and re-checked.
    CertifiedNonPatho,
    /// Neither search succeeded within its budget.
    Unknown,
    /// Not refuted, and the model search cannot handle the function symbols.
    Unsupported,
}

impl Verdict {
    pub const ALL: [Verdict; 4] = [
        Verdict::ProvedPatho,
        Verdict::CertifiedNonPatho,
        Verdict::Unknown,
        Verdict::Unsupported,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verdict::ProvedPatho => "ProvedPatho",
            Verdict::CertifiedNonPatho => "CertifiedNonPatho",
            Verdict::Unknown => "Unknown",
            Verdict::Unsupported => "Unsupported",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Verdict, String> {
        Verdict::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown verdict `{}`", s.trim()))
    }
}

#[derive(Clone, Debug)]
pub struct Evidence {
    pub verdict: Verdict,
    pub theory: Theory,
    pub refutation: Refutation,
    pub proof_checked: bool,
    pub model: Option<Model>,
    pub model_error: Option<ModelError>,
}

impl Evidence {
    pub fn proof(&self) -> Option<&Proof> {
        self.refutation.proof().filter(|_| self.proof_checked)
    }

    /// Both a refutation and a model: impossible unless an engine is wrong.
    pub fn disagrees(&self) -> bool {
        self.refutation.proof().is_some() && self.model.is_some()
    }
}

/// Run the refuter and the model finder on `a` (concurrently) and combine.
pub fn decide(a: &NearlyClosed, budget: Budget, max_size: usize) -> Evidence {
    let theory = build_cosi_theory(a);
    let (refutation, certification) =
        rayon::join(|| refute(&theory, budget), || certify_nonpatho(a, max_size));
    let proof_checked = refutation.proof().is_some_and(|p| check_proof(&theory, p));
    let (model, model_error) = match certification {
        Ok(Certification::CertifiedNonPatho { model, .. }) => (Some(model), None),
        Ok(Certification::Unknown { .. }) => (None, None),
        Err(e) => (None, Some(e)),
    };
    let verdict = if proof_checked {
        Verdict::ProvedPatho
    } else if model.is_some() {
        Verdict::CertifiedNonPatho
    } else if matches!(model_error, Some(ModelError::UnsupportedTerm(_))) {
        Verdict::Unsupported
    } else {
        Verdict::Unknown
    };
    Evidence {
        verdict,
        theory,
        refutation,
        proof_checked,
        model,
        model_error,
    }
}
