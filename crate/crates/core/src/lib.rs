//! Grading of first-order logic translation exercises.
//!
//! A submission is correct when it is logically equivalent to the
//! instructor's model answer. Equivalence is established by resolution
//! refutation of the negated biconditional; inequivalence is reported with a
//! countermodel found by a ground tableau or by finite-model enumeration.

pub mod congruence;
pub mod corpus;
pub mod countermodel;
pub mod feedback;
pub mod grader;
pub mod models;
pub mod mutate;
pub mod normalize;
pub mod oracle;
pub mod parser;
pub mod printer;
pub mod resolution;
pub mod semantics;
pub mod stop;
pub mod syntax;
pub mod tableau;
pub mod unify;

pub use countermodel::{find_countermodel, Countermodel};
pub use feedback::{render_feedback, Feedback};
pub use grader::{grade, grade_with, Exercise, GraderConfig, Submission, Verdict};
pub use parser::{parse, parse_inferring, ParseError};
pub use printer::format;
pub use semantics::{evaluate, evaluate_sentence, EvalError, Interpretation};
pub use stop::StopToken;
pub use syntax::{Formula, Signature, Term};
pub use tableau::TableauBudget;
