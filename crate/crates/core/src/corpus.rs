//! Corpus files: one entry per line, `name :: formula [:: expected]`.
//!
//! Blank lines are ignored and `#` starts a comment line. Comment lines
//! directly above an entry become its note.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub formula_text: String,
    pub expected: Option<Verdict>,
    pub note: Option<String>,
    pub line: usize,
}

/// A line that could not be read as an entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusError {
    pub line: usize,
    pub name: Option<String>,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    pub errors: Vec<CorpusError>,
}

pub fn parse_corpus(text: &str) -> Corpus {
    let mut corpus = Corpus::default();
    let mut names = BTreeSet::new();
    let mut note: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            note.clear();
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            note.push(comment.trim().to_string());
            continue;
        }
        let entry_note = (!note.is_empty()).then(|| note.join(" "));
        note.clear();
        let fields: Vec<&str> = trimmed.split("::").map(str::trim).collect();
        let name = fields[0].to_string();
        let error = |message: String| CorpusError {
            line,
            name: (!name.is_empty()).then(|| name.clone()),
            message,
        };
        if fields.len() < 2 || fields.len() > 3 {
            corpus
                .errors
                .push(error("expected `name :: formula [:: expected]`".into()));
            continue;
        }
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            corpus
                .errors
                .push(error("entry name must be a single non-empty word".into()));
            continue;
        }
        if fields[1].is_empty() {
            corpus.errors.push(error("empty formula".into()));
            continue;
        }
        let expected = match fields.get(2) {
            None => None,
            Some(v) => match v.parse::<Verdict>() {
                Ok(v) => Some(v),
                Err(e) => {
                    corpus.errors.push(error(e));
                    continue;
                }
            },
        };
        if !names.insert(name.clone()) {
            corpus
                .errors
                .push(error(format!("duplicate entry name `{name}`")));
            continue;
        }
        corpus.entries.push(CorpusEntry {
            name,
            formula_text: fields[1].to_string(),
            expected,
            note: entry_note,
            line,
        });
    }
    corpus
}

pub const BUNDLED_CORPUS: &str = include_str!("../corpus/classics.corpus");

pub fn bundled() -> Corpus {
    parse_corpus(BUNDLED_CORPUS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_entries_notes_and_errors() {
        let text = "# the classic\nrussell :: not (x in x) :: ProvedPatho\n\nplain :: x in x\nbroken line\nplain :: x = x\nbad :: x = x :: Maybe\n";
        let c = parse_corpus(text);
        assert_eq!(c.entries.len(), 2);
        assert_eq!(c.entries[0].expected, Some(Verdict::ProvedPatho));
        assert_eq!(c.entries[0].note.as_deref(), Some("the classic"));
        assert_eq!(c.entries[1].expected, None);
        assert_eq!(c.entries[1].note, None);
        let lines: Vec<usize> = c.errors.iter().map(|e| e.line).collect();
        assert_eq!(lines, [5, 6, 7]);
        assert!(c.errors[1].message.contains("duplicate"));
    }

    #[test]
    fn empty_text_is_an_empty_corpus() {
        assert_eq!(parse_corpus(""), Corpus::default());
    }

    #[test]
    fn bundled_corpus_is_well_formed() {
        let c = bundled();
        assert!(c.errors.is_empty(), "{:?}", c.errors);
        assert!(c.entries.len() >= 12);
        for e in &c.entries {
            crate::parser::parse(&e.formula_text).unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
    }
}
