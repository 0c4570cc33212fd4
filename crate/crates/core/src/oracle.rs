//! Exhaustive finite-model oracle for grading checks.
//!
//! Two answers differ when some small interpretation separates them. The
//! oracle looks for one by brute force; finding one is conclusive, not
//! finding one is not.

use crate::corpus::{CorpusFile, Expected};
use crate::grader::{grade_with, Exercise, GraderConfig, Verdict};
use crate::models::{enumerate_models, EnumerationError};
use crate::mutate::mutants;
use crate::parser::{parse, ParseError};
use crate::semantics::Interpretation;
use crate::syntax::{Formula, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleAnswer {
    /// An interpretation where exactly one of the two answers holds.
    Differ(Interpretation),
    /// No separating interpretation up to the given domain size.
    NoneUpTo(usize),
    TooLarge(EnumerationError),
}

impl OracleAnswer {
    pub fn is_conclusive(&self) -> bool {
        matches!(self, OracleAnswer::Differ(_))
    }
}

pub fn oracle(a: &Formula, b: &Formula, sig: &Signature, max_domain: usize) -> OracleAnswer {
    let differ = Formula::not(Formula::iff(a.clone(), b.clone()));
    match enumerate_models(&differ, sig, max_domain) {
        Ok(Some(i)) => OracleAnswer::Differ(i),
        Ok(None) => OracleAnswer::NoneUpTo(max_domain),
        Err(e) => OracleAnswer::TooLarge(e),
    }
}

#[derive(Debug, Clone)]
pub struct Agreement {
    pub text: String,
    pub oracle: OracleAnswer,
    pub verdict: Verdict,
}

impl Agreement {
    /// Correct although the oracle separated the answers.
    pub fn unsound_correct(&self) -> bool {
        self.oracle.is_conclusive() && self.verdict == Verdict::Correct
    }

    /// A conclusive oracle demands Incorrect; every countermodel must certify.
    pub fn agrees(&self) -> bool {
        let certified = self.verdict.countermodel().map_or(true, |cm| cm.certify());
        let decided = !self.oracle.is_conclusive() || matches!(self.verdict, Verdict::Incorrect(_));
        certified && decided
    }
}

/// Grades `text` and asks the oracle about the same pair.
pub fn check(ex: &Exercise, text: &str, config: &GraderConfig, max_domain: usize) -> Result<Agreement, ParseError> {
    let student = parse(text, &ex.signature)?;
    Ok(Agreement {
        text: text.to_string(),
        oracle: oracle(&ex.model_answer, &student, &ex.signature, max_domain),
        verdict: grade_with(ex, text, config),
    })
}

/// Submission texts for an agreement suite: the model answer, every corpus
/// submission expected to be correct or incorrect, and all single-site
/// mutants of the model answer and of the correct submissions.
pub fn agreement_suite(corpus: &CorpusFile) -> Vec<(Exercise, String)> {
    let mut out = Vec::new();
    for entry in &corpus.entries {
        let ex = &entry.exercise;
        let mut texts = vec![ex.model_answer.to_string()];
        let mut seeds = vec![ex.model_answer.clone()];
        for sub in &entry.submissions {
            match sub.expected {
                Expected::Correct | Expected::Incorrect => texts.push(sub.text.clone()),
                _ => continue,
            }
            if sub.expected == Expected::Correct {
                if let Ok(f) = parse(&sub.text, &ex.signature) {
                    seeds.push(f);
                }
            }
        }
        for seed in &seeds {
            texts.extend(mutants(seed).into_iter().map(|(_, g)| g.to_string()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in texts {
            if seen.insert(t.clone()) {
                out.push((ex.clone(), t));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_inferring;

    #[test]
    fn oracle_separates_converse() {
        let (a, sig) = parse_inferring("all x (P(x) -> Q(x))").unwrap();
        let b = parse("all x (Q(x) -> P(x))", &sig).unwrap();
        assert!(oracle(&a, &b, &sig, 1).is_conclusive());
        let c = parse("all x (-Q(x) -> -P(x))", &sig).unwrap();
        assert_eq!(oracle(&a, &c, &sig, 3), OracleAnswer::NoneUpTo(3));
    }

    #[test]
    fn unsound_correct_is_flagged() {
        let (a, sig) = parse_inferring("P(A)").unwrap();
        let b = parse("-P(A)", &sig).unwrap();
        let fake = Agreement {
            text: "-P(A)".into(),
            oracle: oracle(&a, &b, &sig, 1),
            verdict: Verdict::Correct,
        };
        assert!(fake.unsound_correct());
        assert!(!fake.agrees());
    }
}
