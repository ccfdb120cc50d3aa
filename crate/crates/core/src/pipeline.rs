//! End-to-end classification of corpus entries and the reports built from it.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{parse_corpus, Corpus, CorpusEntry, CorpusError};
use crate::formula::{nearly_closed, wrap_closed, Formula, NearlyClosed};
use crate::hereditary::{hereditary_scan_with, HereditaryReport, Overall};
use crate::modelfinder::{size_class, SizeClass};
use crate::parser::parse;
use crate::refuter::{Budget, Refutation};
use crate::strat::{stratify, StratSummary};
use crate::syntpatho::{synt_classify, SyntSummary};
use crate::verdict::{decide, Evidence, Verdict};

pub const TOOL: &str = "patholab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    pub refute_depth: usize,
    pub refute_steps: usize,
    pub model_size: usize,
}

impl Default for Config {
    fn default() -> Config {
        let b = Budget::default();
        Config {
            refute_depth: b.max_depth,
            refute_steps: b.max_steps,
            model_size: 5,
        }
    }
}

impl Config {
    pub fn budget(&self) -> Budget {
        Budget {
            max_depth: self.refute_depth,
            max_steps: self.refute_steps,
        }
    }
}

/// Stable content hash used to name proofs and models in reports.
fn content_id(prefix: &str, text: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{prefix}-{h:016x}")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefutationSummary {
    pub found: bool,
    pub checked: bool,
    pub depth_used: Option<usize>,
    /// Last depth level searched when no proof was found.
    pub depth_reached: Option<usize>,
    pub steps: usize,
    pub proof_id: Option<String>,
    pub proof: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateSummary {
    pub size: usize,
    pub model_id: String,
    pub certificate: Vec<String>,
    pub size_class: Option<SizeClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub line: Option<usize>,
    pub input: String,
    pub note: Option<String>,
    pub formula: Option<String>,
    pub nearly_closed: bool,
    pub wrapper: Option<String>,
    pub error: Option<String>,
    pub expected: Option<Verdict>,
    pub verdict: Option<Verdict>,
    pub matches_expected: Option<bool>,
    pub stratification: Option<StratSummary>,
    pub syntactic: Option<SyntSummary>,
    pub refutation: Option<RefutationSummary>,
    pub certificate: Option<CertificateSummary>,
    pub model_error: Option<String>,
    pub hereditary: Option<HereditaryReport>,
    pub engines_agree: bool,
}

impl Report {
    fn errored(
        name: String,
        line: Option<usize>,
        input: String,
        expected: Option<Verdict>,
        error: String,
    ) -> Report {
        Report {
            name,
            line,
            input,
            note: None,
            formula: None,
            nearly_closed: false,
            wrapper: None,
            error: Some(error),
            expected,
            verdict: None,
            matches_expected: expected.map(|_| false),
            stratification: None,
            syntactic: None,
            refutation: None,
            certificate: None,
            model_error: None,
            hereditary: None,
            engines_agree: true,
        }
    }

    pub fn is_stratified(&self) -> bool {
        self.stratification.as_ref().is_some_and(|s| s.stratified)
    }

    pub fn hereditary_overall(&self) -> Option<Overall> {
        self.hereditary.as_ref().map(|h| h.overall)
    }
}

/// Wall time per stage in milliseconds.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timing {
    pub parse: f64,
    pub stratify: f64,
    pub syntactic: f64,
    pub patho: f64,
    pub hereditary: f64,
}

fn millis(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

pub const WRAPPER_NOTE: &str = "closed formula B classified as B & (x = x)";

/// Parse and bring to nearly-closed form: closed formulas are wrapped,
/// formulas with two or more free variables are rejected.
pub fn prepare(text: &str) -> Result<(NearlyClosed, bool), String> {
    let f = parse(text).map_err(|e| e.to_string())?;
    prepare_formula(&f)
}

pub fn prepare_formula(f: &Formula) -> Result<(NearlyClosed, bool), String> {
    if f.free_vars().is_empty() {
        let wrapped = nearly_closed(&wrap_closed(f)).expect("wrapper has one free variable");
        return Ok((wrapped.canonicalized(), true));
    }
    let a = nearly_closed(f).map_err(|e| e.to_string())?;
    Ok((a.canonicalized(), false))
}

fn refutation_summary(e: &Evidence) -> RefutationSummary {
    match &e.refutation {
        Refutation::Proof(p) => {
            let text = p.to_text();
            RefutationSummary {
                found: true,
                checked: e.proof_checked,
                depth_used: Some(p.depth_used),
                depth_reached: None,
                steps: p.search_steps,
                proof_id: Some(content_id("proof", &text)),
                proof: Some(text.lines().map(str::to_string).collect()),
            }
        }
        Refutation::BudgetExhausted { depth, steps } => RefutationSummary {
            found: false,
            checked: false,
            depth_used: None,
            depth_reached: Some(*depth),
            steps: *steps,
            proof_id: None,
            proof: None,
        },
    }
}

fn certificate_summary(e: &Evidence) -> Option<CertificateSummary> {
    let m = e.model.as_ref()?;
    let text = m.to_text();
    let top = &e.theory.top_constant().name;
    Some(CertificateSummary {
        size: m.size,
        model_id: content_id("model", &text),
        certificate: text.lines().map(str::to_string).collect(),
        size_class: size_class(m, top),
    })
}

/// Full pipeline for one entry. Never panics on bad input: parse and
/// free-variable problems end up in the report's `error` field.
pub fn classify(entry: &CorpusEntry, config: &Config) -> (Report, Timing) {
    let mut timing = Timing::default();
    let t = Instant::now();
    let prepared = prepare(&entry.formula_text);
    timing.parse = millis(t);
    let (a, wrapped) = match prepared {
        Ok(p) => p,
        Err(e) => {
            let mut r = Report::errored(
                entry.name.clone(),
                Some(entry.line),
                entry.formula_text.clone(),
                entry.expected,
                e,
            );
            r.note = entry.note.clone();
            return (r, timing);
        }
    };
    let canonical = a.canonical();

    let t = Instant::now();
    let strat = stratify(&canonical).summary();
    timing.stratify = millis(t);

    let t = Instant::now();
    let synt = synt_classify(&a).summary();
    timing.syntactic = millis(t);

    let t = Instant::now();
    let evidence = decide(&a, config.budget(), config.model_size);
    timing.patho = millis(t);

    let t = Instant::now();
    let hereditary = hereditary_scan_with(&a, |sub| {
        if sub.formula() == &canonical {
            evidence.verdict
        } else {
            decide(sub, config.budget(), config.model_size).verdict
        }
    });
    timing.hereditary = millis(t);

    let verdict = evidence.verdict;
    let report = Report {
        name: entry.name.clone(),
        line: Some(entry.line),
        input: entry.formula_text.clone(),
        note: entry.note.clone(),
        formula: Some(canonical.to_string()),
        nearly_closed: !wrapped,
        wrapper: wrapped.then(|| WRAPPER_NOTE.to_string()),
        error: None,
        expected: entry.expected,
        verdict: Some(verdict),
        matches_expected: entry.expected.map(|e| e == verdict),
        stratification: Some(strat),
        syntactic: Some(synt),
        refutation: Some(refutation_summary(&evidence)),
        certificate: certificate_summary(&evidence),
        model_error: evidence.model_error.as_ref().map(|e| e.to_string()),
        hereditary: Some(hereditary),
        engines_agree: !evidence.disagrees(),
    };
    (report, timing)
}

/// Classify a single formula given on the command line.
pub fn classify_text(text: &str, config: &Config) -> (Report, Timing) {
    let entry = CorpusEntry {
        name: "input".into(),
        formula_text: text.into(),
        expected: None,
        note: None,
        line: 1,
    };
    classify(&entry, config)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Audits {
    /// Entries with both a refutation and a model.
    pub engine_disagreements: Vec<String>,
    /// Stratified entries whose hereditary scan found a pathological part.
    pub stratified_sub_patho: Vec<String>,
    /// Entries refuted although their certificate extension is Slim or
    /// Mighty in the minimal model. Reported only.
    pub slim_or_mighty_patho: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub errors: usize,
    pub verdicts: BTreeMap<Verdict, usize>,
    pub hereditary: BTreeMap<String, usize>,
    pub mismatches: Vec<String>,
    pub audits: Audits,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Config,
    pub entries: Vec<Report>,
    pub summary: Summary,
    /// Per-entry stage timings; the only part of the report that varies
    /// between runs.
    pub timing: BTreeMap<String, Timing>,
}

impl RunReport {
    pub fn has_mismatch(&self) -> bool {
        !self.summary.mismatches.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The JSON report with the timing block removed.
    pub fn to_json_without_timing(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.entries {
            out.push_str(&report_line(r));
            out.push('\n');
        }
        let s = &self.summary;
        out.push_str(&format!("\n{} entries, {} errors\n", s.total, s.errors));
        for (v, n) in &s.verdicts {
            out.push_str(&format!("  {v}: {n}\n"));
        }
        if s.mismatches.is_empty() {
            out.push_str("expected verdicts: all match\n");
        } else {
            out.push_str(&format!(
                "expected verdicts: MISMATCH in {}\n",
                s.mismatches.join(", ")
            ));
        }
        out
    }
}

fn report_line(r: &Report) -> String {
    if let Some(e) = &r.error {
        return format!("{:<24} ERROR {e}", r.name);
    }
    let verdict = r.verdict.map(|v| v.name()).unwrap_or("-");
    let strat = if r.is_stratified() {
        "Stratified"
    } else {
        "Unstratified"
    };
    let synt = r.syntactic.as_ref().map(|s| s.verdict).unwrap_or("-");
    let her = r
        .hereditary_overall()
        .map(|o| format!("{o:?}"))
        .unwrap_or_default();
    let flag = match r.matches_expected {
        Some(false) => "  (expected mismatch)",
        _ => "",
    };
    format!(
        "{:<24} {verdict:<18} {synt:<8} {strat:<13} {her}{flag}",
        r.name
    )
}

/// Human-readable rendering of a single report.
pub fn report_text(r: &Report) -> String {
    let mut out = String::new();
    if let Some(e) = &r.error {
        out.push_str(&format!("error: {e}\n"));
        return out;
    }
    out.push_str(&format!(
        "formula:        {}\n",
        r.formula.as_deref().unwrap_or("")
    ));
    if let Some(w) = &r.wrapper {
        out.push_str(&format!("note:           {w}\n"));
    }
    out.push_str(&format!(
        "verdict:        {}\n",
        r.verdict.map(|v| v.name()).unwrap_or("-")
    ));
    if let Some(s) = &r.stratification {
        let status = if s.stratified {
            "Stratified"
        } else {
            "Unstratified"
        };
        out.push_str(&format!("stratification: {status}\n"));
    }
    if let Some(s) = &r.syntactic {
        match s.n {
            Some(n) => out.push_str(&format!("syntactic:      {} (n={n})\n", s.verdict)),
            None => out.push_str(&format!("syntactic:      {}\n", s.verdict)),
        }
    }
    if let Some(h) = &r.hereditary {
        out.push_str(&format!("hereditary:     {:?}\n", h.overall));
    }
    if let Some(rf) = &r.refutation {
        if let Some(p) = &rf.proof {
            out.push_str(&format!(
                "proof:          depth {}, {} search steps, {}\n",
                rf.depth_used.unwrap_or(0),
                rf.steps,
                if rf.checked { "checked" } else { "NOT checked" }
            ));
            for l in p {
                out.push_str(&format!("  {l}\n"));
            }
        }
    }
    if let Some(c) = &r.certificate {
        let class = c.size_class.map(|s| s.name()).unwrap_or("-");
        out.push_str(&format!(
            "model:          size {}, extension {class}\n",
            c.size
        ));
        for l in &c.certificate {
            out.push_str(&format!("  {l}\n"));
        }
    }
    if let Some(e) = &r.model_error {
        out.push_str(&format!("model search:   {e}\n"));
    }
    out
}

fn errored_from(e: &CorpusError) -> Report {
    let name = e.name.clone().unwrap_or_else(|| format!("line-{}", e.line));
    Report::errored(name, Some(e.line), String::new(), None, e.message.clone())
}

pub fn run_corpus_text(text: &str, config: &Config) -> RunReport {
    run(&parse_corpus(text), config)
}

pub fn run_corpus(path: &Path, config: &Config) -> std::io::Result<RunReport> {
    Ok(run_corpus_text(&std::fs::read_to_string(path)?, config))
}

/// Classify every entry (concurrently) and assemble the report in name order.
pub fn run(corpus: &Corpus, config: &Config) -> RunReport {
    let mut results: Vec<(Report, Timing)> = corpus
        .entries
        .par_iter()
        .map(|e| classify(e, config))
        .collect();
    results.extend(
        corpus
            .errors
            .iter()
            .map(|e| (errored_from(e), Timing::default())),
    );
    results.sort_by(|a, b| (&a.0.name, a.0.line).cmp(&(&b.0.name, b.0.line)));

    let mut summary = Summary {
        total: results.len(),
        ..Summary::default()
    };
    let mut timing = BTreeMap::new();
    let mut entries = Vec::with_capacity(results.len());
    for (r, t) in results {
        if r.error.is_some() {
            summary.errors += 1;
        }
        if let Some(v) = r.verdict {
            *summary.verdicts.entry(v).or_default() += 1;
        }
        if let Some(o) = r.hereditary_overall() {
            *summary.hereditary.entry(format!("{o:?}")).or_default() += 1;
        }
        if r.matches_expected == Some(false) {
            summary.mismatches.push(r.name.clone());
        }
        if !r.engines_agree {
            summary.audits.engine_disagreements.push(r.name.clone());
        }
        if r.is_stratified() && r.hereditary_overall() == Some(Overall::SubPatho) {
            summary.audits.stratified_sub_patho.push(r.name.clone());
        }
        let lopsided = r
            .certificate
            .as_ref()
            .and_then(|c| c.size_class)
            .is_some_and(|c| !matches!(c, SizeClass::Balanced { .. }));
        if lopsided && r.verdict == Some(Verdict::ProvedPatho) {
            summary.audits.slim_or_mighty_patho.push(r.name.clone());
        }
        let key = match r.line {
            Some(l) if timing.contains_key(&r.name) => format!("{}@{l}", r.name),
            _ => r.name.clone(),
        };
        timing.insert(key, t);
        entries.push(r);
    }
    RunReport {
        tool: TOOL,
        version: VERSION,
        config: *config,
        entries,
        summary,
        timing,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditPair {
    pub name: String,
    pub formula: String,
    pub verdict: Verdict,
    pub negated_formula: String,
    pub negated_verdict: Verdict,
    pub both_patho: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditError {
    pub name: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Config,
    pub pass: bool,
    pub pairs: Vec<AuditPair>,
    pub errors: Vec<AuditError>,
}

impl AuditReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.pairs {
            let mark = if p.both_patho { "FAIL" } else { "ok" };
            out.push_str(&format!(
                "{:<24} {:<18} negation {:<18} {mark}\n",
                p.name, p.verdict, p.negated_verdict
            ));
        }
        for e in &self.errors {
            out.push_str(&format!("{:<24} ERROR {}\n", e.name, e.message));
        }
        out.push_str(if self.pass {
            "audit: PASS\n"
        } else {
            "audit: FAIL\n"
        });
        out
    }
}

/// The negated predicate. Closed formulas are negated before wrapping, so
/// the wrapper itself is never negated.
pub fn negate_input(text: &str) -> Result<NearlyClosed, String> {
    let f = parse(text).map_err(|e| e.to_string())?;
    let negated = match f {
        Formula::Not(inner) => *inner,
        other => Formula::not(other),
    };
    prepare_formula(&negated).map(|(a, _)| a)
}

/// For every entry A, classify A and its negation; the audit fails when
/// some pair is refuted on both sides.
pub fn audit_1jt(corpus: &Corpus, config: &Config) -> AuditReport {
    let mut results: Vec<Result<AuditPair, AuditError>> = corpus
        .entries
        .par_iter()
        .map(|e| {
            let err = |message: String| AuditError {
                name: e.name.clone(),
                message,
            };
            let (a, _) = prepare(&e.formula_text).map_err(err)?;
            let neg = negate_input(&e.formula_text).map_err(err)?;
            let (va, vn) = rayon::join(
                || decide(&a, config.budget(), config.model_size).verdict,
                || decide(&neg, config.budget(), config.model_size).verdict,
            );
            Ok(AuditPair {
                name: e.name.clone(),
                formula: a.formula().to_string(),
                verdict: va,
                negated_formula: neg.formula().to_string(),
                negated_verdict: vn,
                both_patho: va == Verdict::ProvedPatho && vn == Verdict::ProvedPatho,
            })
        })
        .collect();
    results.sort_by(|a, b| {
        let name = |r: &Result<AuditPair, AuditError>| match r {
            Ok(p) => p.name.clone(),
            Err(e) => e.name.clone(),
        };
        name(a).cmp(&name(b))
    });
    let mut pairs = Vec::new();
    let mut errors: Vec<AuditError> = corpus
        .errors
        .iter()
        .map(|e| AuditError {
            name: e.name.clone().unwrap_or_else(|| format!("line-{}", e.line)),
            message: e.message.clone(),
        })
        .collect();
    for r in results {
        match r {
            Ok(p) => pairs.push(p),
            Err(e) => errors.push(e),
        }
    }
    let pass = pairs.iter().all(|p| !p.both_patho);
    AuditReport {
        tool: TOOL,
        version: VERSION,
        config: *config,
        pass,
        pairs,
        errors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::bundled;

    #[test]
    fn russell_report() {
        let (r, _) = classify_text("not (x in x)", &Config::default());
        assert_eq!(r.verdict, Some(Verdict::ProvedPatho));
        assert!(!r.is_stratified());
        assert_eq!(r.syntactic.as_ref().unwrap().verdict, "SyntP");
        assert_eq!(r.hereditary_overall(), Some(Overall::SubPatho));
        assert_eq!(r.refutation.as_ref().unwrap().depth_used, Some(1));
    }

    #[test]
    fn verum_report() {
        let (r, _) = classify_text("Verum", &Config::default());
        assert_eq!(r.verdict, Some(Verdict::CertifiedNonPatho));
        assert!(r.is_stratified());
        assert_eq!(r.syntactic.as_ref().unwrap().verdict, "SyntHnP");
        assert_eq!(r.hereditary_overall(), Some(Overall::CertifiedHnP));
        assert_eq!(r.wrapper.as_deref(), Some(WRAPPER_NOTE));
    }

    #[test]
    fn too_many_free_variables_is_an_entry_error() {
        let (r, _) = classify_text("x in y", &Config::default());
        assert!(r.error.unwrap().contains("free variables"));
    }

    #[test]
    fn bundled_corpus_meets_its_expectations() {
        let report = run(&bundled(), &Config::default());
        assert!(report.summary.mismatches.is_empty(), "{}", report.to_text());
        assert!(report.summary.verdicts[&Verdict::ProvedPatho] >= 3);
        assert!(report.summary.verdicts[&Verdict::CertifiedNonPatho] >= 4);
        assert!(report.summary.audits.engine_disagreements.is_empty());
        assert!(report.summary.audits.stratified_sub_patho.is_empty());
        assert!(report.summary.audits.slim_or_mighty_patho.is_empty());
    }

    #[test]
    fn empty_corpus() {
        let report = run_corpus_text("", &Config::default());
        assert!(report.entries.is_empty());
        assert!(!report.has_mismatch());
    }

    #[test]
    fn audit_examples() {
        let corpus = parse_corpus(
            "russell :: not (x in x)\nverum :: Verum\nnc2 :: not exists a: ((x in a) & (a in x))\n",
        );
        let audit = audit_1jt(&corpus, &Config::default());
        assert!(audit.pass);
        let get = |n: &str| audit.pairs.iter().find(|p| p.name == n).unwrap();
        assert_eq!(get("russell").negated_verdict, Verdict::CertifiedNonPatho);
        assert_eq!(get("russell").negated_formula, "x in x");
        assert_eq!(get("verum").verdict, Verdict::CertifiedNonPatho);
        assert_eq!(get("verum").negated_verdict, Verdict::CertifiedNonPatho);
        assert_eq!(get("nc2").verdict, Verdict::ProvedPatho);
        assert_eq!(get("nc2").negated_verdict, Verdict::CertifiedNonPatho);
    }
}
