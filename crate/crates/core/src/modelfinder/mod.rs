//! Finite model search for comprehension theories. A model certifies that
//! the theory is consistent.
//!
//! Models are searched by increasing size. Within a size the first model is
//! the one whose membership matrix, read row by row, is lexicographically
//! first when a present edge (`1`) sorts before an absent one (`0`); the
//! denotations are then the smallest possible indices.

mod ground;
mod model;
pub mod sat;

pub use model::{eval_formula, eval_term, size_class, Env, Model, ModelError, SizeClass};

use crate::formula::NearlyClosed;
use crate::refuter::{build_cosi_theory, AxiomClass, Theory};
use ground::Grounding;
use sat::Lit;

/// Check a model against every sentence of the theory.
pub fn verify_model(theory: &Theory, m: &Model) -> Result<bool, ModelError> {
    if !m.is_extensional() {
        return Ok(false);
    }
    for s in &theory.sentences {
        if !eval_formula(m, s, &Env::new())? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn find_model(a: &NearlyClosed, max_size: usize) -> Result<Option<Model>, ModelError> {
    find_model_of(&build_cosi_theory(a), max_size)
}

pub fn find_model_of(theory: &Theory, max_size: usize) -> Result<Option<Model>, ModelError> {
    if let Some((f, _)) = theory.functions.first() {
        return Err(ModelError::UnsupportedTerm(f.clone()));
    }
    for size in 1..=max_size {
        if let Some(m) = first_model(theory, size)? {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

fn first_model(theory: &Theory, size: usize) -> Result<Option<Model>, ModelError> {
    let names: Vec<String> = theory.constants.iter().map(|c| c.name.clone()).collect();
    let mut g = Grounding::new(size, names.clone());
    for (s, class) in theory.sentences.iter().zip(&theory.classes) {
        // equality axioms hold in every structure where `=` is identity
        if *class != AxiomClass::Equality {
            g.assert(s)?;
        }
    }
    let Some(mut current) = g.solver.solve(&[]) else {
        return Ok(None);
    };
    let holds = |assignment: &[bool], l: Lit| assignment[l.var() as usize] == l.is_positive();
    let mut fixed = Vec::new();
    for i in 0..size {
        for j in 0..size {
            let l = g.member(i, j);
            if !holds(&current, l) {
                let mut trial = fixed.clone();
                trial.push(l);
                if let Some(better) = g.solver.solve(&trial) {
                    current = better;
                }
            }
            fixed.push(if holds(&current, l) { l } else { !l });
        }
    }
    for c in 0..names.len() {
        for j in 0..size {
            let l = g.denote(c, j);
            if !holds(&current, l) {
                let mut trial = fixed.clone();
                trial.push(l);
                if let Some(better) = g.solver.solve(&trial) {
                    current = better;
                }
            }
            if holds(&current, l) {
                fixed.push(l);
                break;
            }
            fixed.push(!l);
        }
    }
    let mut m = Model::new(size);
    for i in 0..size {
        for j in 0..size {
            m.member[i][j] = holds(&current, g.member(i, j));
        }
    }
    for (c, name) in names.iter().enumerate() {
        let j = (0..size)
            .find(|&j| holds(&current, g.denote(c, j)))
            .expect("one-hot denotation");
        m.denotations.insert(name.clone(), j);
    }
    Ok(Some(m))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    CertifiedNonPatho { theory: Theory, model: Model },
    Unknown { max_size: usize },
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::CertifiedNonPatho { .. })
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            Certification::CertifiedNonPatho { model, .. } => Some(model),
            Certification::Unknown { .. } => None,
        }
    }
}

/// A model of the theory, re-checked sentence by sentence before it is
/// returned.
pub fn certify_nonpatho(a: &NearlyClosed, max_size: usize) -> Result<Certification, ModelError> {
    let theory = build_cosi_theory(a);
    match find_model_of(&theory, max_size)? {
        Some(model) => {
            assert!(
                verify_model(&theory, &model)?,
                "model search returned a non-model:\n{model}"
            );
            Ok(Certification::CertifiedNonPatho { theory, model })
        }
        None => Ok(Certification::Unknown { max_size }),
    }
}
