//! Student-facing feedback text for verdicts.

use std::fmt;

use serde::Serialize;

use crate::countermodel::Countermodel;
use crate::grader::{Exercise, Verdict};
use crate::normalize::Literal;
use crate::semantics::evaluate_sentence;
use crate::syntax::{Formula, Term};

pub const CORRECT_MESSAGE: &str = "Correct. Your formula is logically equivalent to the model answer.";
pub const INCORRECT_MESSAGE: &str = "Incorrect. Your formula is not logically equivalent to the model answer.";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Feedback {
    pub status: &'static str,
    pub message: String,
    /// Countermodel explanation, one sentence per line.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

impl fmt::Display for Feedback {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)?;
        for line in &self.details {
            write!(f, "\n  {line}")?;
        }
        Ok(())
    }
}

pub fn render_feedback(v: &Verdict, ex: &Exercise) -> Feedback {
    let (message, details) = match v {
        Verdict::Correct => (CORRECT_MESSAGE.to_string(), Vec::new()),
        Verdict::Incorrect(None) => (INCORRECT_MESSAGE.to_string(), Vec::new()),
        Verdict::Incorrect(Some(cm)) => (
            "Incorrect. Your formula and the model answer disagree in this situation:".to_string(),
            narrate(cm, ex),
        ),
        Verdict::TimeLimitExceeded(msg) => (msg.clone(), Vec::new()),
        Verdict::Rejected(e) => (format!("Your formula could not be read: {e}."), Vec::new()),
    };
    Feedback {
        status: v.status(),
        message,
        details,
    }
}

fn term_text(t: &Term, ex: &Exercise) -> String {
    match t {
        Term::Const(c) if !ex.signature.constants.contains(c) => format!("individual {c}"),
        _ => t.to_string(),
    }
}

fn fill(template: &str, args: &[String]) -> String {
    let mut out = template.to_string();
    for (i, a) in args.iter().enumerate() {
        out = out.replace(&format!("{{{}}}", i + 1), a);
    }
    out
}

fn sentence(l: &Literal, ex: &Exercise) -> String {
    let args: Vec<String> = l.atom.args.iter().map(|t| term_text(t, ex)).collect();
    if l.atom.is_equality() {
        let rel = if l.positive { "is" } else { "is not" };
        return capitalize(&format!("{} {rel} the same individual as {}.", args[0], args[1]));
    }
    let fact = match ex.symbol_glossary.get(&l.atom.predicate) {
        Some(template) if template.contains("{1}") => fill(template, &args),
        _ => l.atom.to_string(),
    };
    if l.positive {
        capitalize(&format!("{fact}."))
    } else {
        format!("It is not the case that {fact}.")
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn narrate(cm: &Countermodel, ex: &Exercise) -> Vec<String> {
    let mut lines = Vec::new();
    let n = cm.domain.len();
    let (verb, noun) = if n == 1 { ("is", "individual") } else { ("are", "individuals") };
    lines.push(format!("There {verb} {n} {noun}: {}.", cm.domain.join(", ")));
    for l in &cm.literals {
        lines.push(sentence(l, ex));
    }
    lines.push("Every other fact is false.".to_string());
    if let Formula::Iff(model, student) = &cm.falsified {
        let s = evaluate_sentence(student, &cm.interpretation).unwrap_or(false);
        let m = evaluate_sentence(model, &cm.interpretation).unwrap_or(false);
        let truth = |b: bool| if b { "true" } else { "false" };
        lines.push(format!(
            "Here your formula is {}, but the model answer is {}.",
            truth(s),
            truth(m)
        ));
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grader::{grade_with, GraderConfig, DEFAULT_TIME_LIMIT, TIMEOUT_MESSAGE};
    use crate::syntax::Signature;
    use std::collections::BTreeMap;

    fn lawyer() -> Exercise {
        let sig = Signature::new()
            .with_constants(["Joe", "Lawyer"])
            .with_predicate("Occupation", 2)
            .with_predicate("Customer", 2);
        let glossary: BTreeMap<String, String> = [
            ("Occupation", "{1} works as a {2}"),
            ("Customer", "{1} is a customer of {2}"),
        ]
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        Exercise::new(
            "lawyer",
            "Joe does not have a lawyer.",
            sig,
            "-(exists x (Occupation(x,Lawyer) & Customer(Joe,x)))",
            DEFAULT_TIME_LIMIT,
        )
        .unwrap()
        .with_glossary(glossary)
    }

    #[test]
    fn lawyer_narrative_names_both_lawyers() {
        let ex = lawyer();
        let v = grade_with(
            &ex,
            "exists x (Occupation(x,Lawyer) & -Customer(Joe,x))",
            &GraderConfig::default(),
        );
        let fb = render_feedback(&v, &ex);
        assert_eq!(fb.status, "incorrect");
        let text = fb.to_string();
        assert!(text.contains("Individual B works as a Lawyer."), "{text}");
        assert!(text.contains("It is not the case that Joe is a customer of individual B."), "{text}");
        assert!(text.contains("Joe is a customer of individual C."), "{text}");
        assert!(text.contains("Here your formula is true, but the model answer is false."));
        assert_eq!(render_feedback(&v, &ex), fb);
    }

    #[test]
    fn fixed_messages() {
        let ex = lawyer();
        assert_eq!(render_feedback(&Verdict::Correct, &ex).message, CORRECT_MESSAGE);
        let t = render_feedback(&Verdict::TimeLimitExceeded(TIMEOUT_MESSAGE.into()), &ex);
        assert!(t.message.contains("talk to an instructor"));
    }

    #[test]
    fn arity_rejection_cites_declared_arity() {
        let ex = lawyer();
        let v = grade_with(&ex, "Occupation(Joe)", &GraderConfig::default());
        let fb = render_feedback(&v, &ex);
        assert_eq!(fb.status, "rejected");
        assert!(fb.message.contains("arity 2"), "{}", fb.message);
    }
}
