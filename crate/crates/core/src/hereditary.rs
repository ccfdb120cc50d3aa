//! Hereditary scan: every subformula with exactly one free variable is
//! renamed to `x` and classified on its own.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::formula::{nearly_closed, var, Formula, NearlyClosed, CANONICAL_VAR};
use crate::refuter::Budget;
use crate::verdict::{decide, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail")]
pub enum SubStatus {
    Checked(Verdict),
    /// No free variable: cannot define a class.
    SkippedClosed,
    /// Two or more free variables, listed.
    SkippedParameters(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubEntry {
    /// Pre-order position; 0 is the whole formula.
    pub position: usize,
    pub subformula: String,
    /// The subformula with its free variable renamed to `x`.
    pub canonical: Option<String>,
    #[serde(flatten)]
    pub status: SubStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Overall {
    SubPatho,
    CertifiedHnP,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HereditaryReport {
    pub overall: Overall,
    pub entries: Vec<SubEntry>,
}

impl HereditaryReport {
    /// Pre-order positions of the entries proved pathological.
    pub fn patho_positions(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter(|e| e.status == SubStatus::Checked(Verdict::ProvedPatho))
            .map(|e| e.position)
            .collect()
    }
}

/// Aggregate per-entry verdicts: any ProvedPatho makes the formula SubPatho,
/// all CertifiedNonPatho make it CertifiedHnP, anything else is Unknown.
/// Skipped entries do not take part.
pub fn overall_of<'a>(verdicts: impl IntoIterator<Item = &'a Verdict>) -> Overall {
    let mut all_certified = true;
    for v in verdicts {
        match v {
            Verdict::ProvedPatho => return Overall::SubPatho,
            Verdict::CertifiedNonPatho => {}
            _ => all_certified = false,
        }
    }
    if all_certified {
        Overall::CertifiedHnP
    } else {
        Overall::Unknown
    }
}

pub fn hereditary_scan(a: &NearlyClosed, budget: Budget, max_size: usize) -> HereditaryReport {
    hereditary_scan_with(a, |sub| decide(sub, budget, max_size).verdict)
}

/// As [`hereditary_scan`] with a caller-supplied classifier for the
/// nearly-closed subformulas. Identical canonical subformulas are
/// classified once.
pub fn hereditary_scan_with<F>(a: &NearlyClosed, classify: F) -> HereditaryReport
where
    F: Fn(&NearlyClosed) -> Verdict + Sync,
{
    let whole = a.canonical();
    let subs = whole.subformulas();
    let canonical: Vec<Option<Formula>> = subs
        .iter()
        .map(|(f, free)| {
            if free.len() != 1 {
                return None;
            }
            let v = free.iter().next().expect("one free variable");
            Some(if v == CANONICAL_VAR {
                f.clone()
            } else {
                f.substitute(v, &var(CANONICAL_VAR))
            })
        })
        .collect();

    let mut distinct: Vec<&Formula> = Vec::new();
    for c in canonical.iter().flatten() {
        if !distinct.contains(&c) {
            distinct.push(c);
        }
    }
    let verdicts: BTreeMap<&Formula, Verdict> = distinct
        .par_iter()
        .map(|f| (*f, classify(&nearly_closed(f).expect("one free variable"))))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let entries: Vec<SubEntry> = subs
        .iter()
        .zip(&canonical)
        .enumerate()
        .map(|(position, ((f, free), c))| {
            let status = match c {
                Some(c) => SubStatus::Checked(verdicts[c]),
                None if free.is_empty() => SubStatus::SkippedClosed,
                None => SubStatus::SkippedParameters(free.iter().cloned().collect()),
            };
            SubEntry {
                position,
                subformula: f.to_string(),
                canonical: c.as_ref().map(|c| c.to_string()),
                status,
            }
        })
        .collect();
    let overall = overall_of(entries.iter().filter_map(|e| match &e.status {
        SubStatus::Checked(v) => Some(v),
        _ => None,
    }));
    HereditaryReport { overall, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn scan(s: &str) -> HereditaryReport {
        hereditary_scan(
            &nearly_closed(&parse(s).unwrap()).unwrap(),
            Budget::default(),
            5,
        )
    }

    #[test]
    fn russell_is_sub_patho() {
        let r = scan("not (x in x)");
        assert_eq!(r.overall, Overall::SubPatho);
        assert_eq!(r.patho_positions(), vec![0]);
    }

    #[test]
    fn verum_wrapper_is_certified() {
        let r = scan("Verum & (x = x)");
        assert_eq!(r.overall, Overall::CertifiedHnP);
        assert_eq!(r.entries[1].status, SubStatus::SkippedClosed);
        assert_eq!(
            r.entries
                .iter()
                .filter(|e| matches!(e.status, SubStatus::Checked(_)))
                .count(),
            2
        );
    }

    #[test]
    fn inner_russell_is_found() {
        let r = scan("exists y: ((y in x) & not (y in y))");
        assert_eq!(r.overall, Overall::SubPatho);
        let hit = r
            .entries
            .iter()
            .find(|e| e.subformula == "not (y in y)")
            .unwrap();
        assert_eq!(hit.canonical.as_deref(), Some("not (x in x)"));
        assert_eq!(hit.status, SubStatus::Checked(Verdict::ProvedPatho));
        assert!(r
            .entries
            .iter()
            .any(|e| matches!(&e.status, SubStatus::SkippedParameters(v) if v.len() == 2)));
    }

    #[test]
    fn truth_table() {
        use Verdict::*;
        assert_eq!(
            overall_of(&[CertifiedNonPatho, ProvedPatho]),
            Overall::SubPatho
        );
        assert_eq!(
            overall_of(&[CertifiedNonPatho, CertifiedNonPatho]),
            Overall::CertifiedHnP
        );
        assert_eq!(overall_of(&[CertifiedNonPatho, Unknown]), Overall::Unknown);
        assert_eq!(overall_of(&[Unsupported]), Overall::Unknown);
    }
}
