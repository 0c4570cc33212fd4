//! Parser for the formula text format.
//!
//! ```text
//! formula := quantified | iff
//! iff     := imp ( "<->" iff )?
//! imp     := or ( "->" imp )?
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "-" unary | quantified | "(" formula ")" | atomic
//! quantified := ("all" | "exists") var formula
//! atomic  := term ( ("=" | "!=") term )?
//! ```
//!
//! Quantifier bodies extend as far right as possible. Lowercase identifiers
//! are variables; uppercase identifiers are symbols looked up in a
//! [`Signature`].

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{is_reserved_name, is_variable_name, Formula, Signature, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown symbol `{name}` at position {position}")]
    UnknownSymbol { name: String, position: usize },
    #[error("`{name}` is declared with arity {declared} but used with {used} argument(s) at position {position}")]
    ArityMismatch {
        name: String,
        declared: usize,
        used: usize,
        position: usize,
    },
    #[error("variable `{name}` is not bound by any quantifier")]
    FreeVariable { name: String },
    #[error("`{name}` at position {position} uses a reserved name")]
    ReservedSymbol { name: String, position: usize },
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { position, .. }
            | ParseError::UnknownSymbol { position, .. }
            | ParseError::ArityMismatch { position, .. }
            | ParseError::ReservedSymbol { position, .. } => Some(*position),
            ParseError::FreeVariable { .. } => None,
        }
    }

    /// Short machine-readable name of the rejection reason.
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "SyntaxError",
            ParseError::UnknownSymbol { .. } => "UnknownSymbol",
            ParseError::ArityMismatch { .. } => "ArityMismatch",
            ParseError::FreeVariable { .. } => "FreeVariable",
            ParseError::ReservedSymbol { .. } => "ReservedSymbol",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,
    Neq,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Not => "`-`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position: usize, expected: &str| ParseError::Syntax {
        position,
        expected: expected.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b',' => out.push((Tok::Comma, start)),
            b'&' => out.push((Tok::And, start)),
            b'|' => out.push((Tok::Or, start)),
            b'=' => out.push((Tok::Eq, start)),
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    out.push((Tok::Implies, start));
                } else {
                    out.push((Tok::Not, start));
                }
            }
            b'!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 1;
                    out.push((Tok::Neq, start));
                } else {
                    return Err(err(start, "`!=`"));
                }
            }
            b'<' => {
                if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') {
                    i += 2;
                    out.push((Tok::Iff, start));
                } else {
                    return Err(err(start, "`<->`"));
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => return Err(err(start, "a formula symbol (ASCII only)")),
        }
        i += 1;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

/// Uppercase name with optional arguments, before it is classified as a
/// predicate, function or constant.
enum RawTerm {
    Var(String),
    Sym(String, Option<Vec<RawTerm>>, usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    Constant,
    Function,
    Predicate,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Constant => "a constant",
            Kind::Function => "a function symbol",
            Kind::Predicate => "a predicate symbol",
        }
    }
}

enum Symbols<'s> {
    Declared(&'s Signature),
    Inferred(BTreeMap<String, (Kind, usize)>),
}

struct Parser<'s> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    symbols: Symbols<'s>,
}

impl<'s> Parser<'s> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expected<T>(&self, what: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.offset(),
            expected: format!("{what}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.expected(&tok.describe())
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(word) if word == "all" || word == "exists" => {
                self.bump();
                let (tok, at) = self.bump();
                let var = match tok {
                    Tok::Ident(v) if is_variable_name(&v) && v != "all" && v != "exists" => v,
                    other => {
                        return Err(ParseError::Syntax {
                            position: at,
                            expected: format!(
                                "a lowercase variable after `{word}`, found {}",
                                other.describe()
                            ),
                        })
                    }
                };
                if is_reserved_name(&var) {
                    return Err(ParseError::ReservedSymbol { name: var, position: at });
                }
                let body = self.formula()?;
                Ok(if word == "all" {
                    Formula::forall(&var, body)
                } else {
                    Formula::exists(&var, body)
                })
            }
            Tok::Ident(_) => self.atomic(),
            _ => self.expected("a formula"),
        }
    }

    fn atomic(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.raw_term()?;
        match self.peek() {
            Tok::Eq | Tok::Neq => {
                let negated = *self.peek() == Tok::Neq;
                self.bump();
                let rhs = self.raw_term()?;
                let eq = Formula::Eq(self.resolve_term(lhs)?, self.resolve_term(rhs)?);
                Ok(if negated { Formula::not(eq) } else { eq })
            }
            _ => match lhs {
                RawTerm::Sym(name, args, at) => {
                    let args = args.unwrap_or_default();
                    self.check_symbol(&name, Kind::Predicate, args.len(), at)?;
                    let args = args
                        .into_iter()
                        .map(|a| self.resolve_term(a))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(Formula::Atom(name, args))
                }
                RawTerm::Var(..) => self.expected("`=` or `!=` after a variable"),
            },
        }
    }

    fn raw_term(&mut self) -> Result<RawTerm, ParseError> {
        let (tok, at) = self.bump();
        let name = match tok {
            Tok::Ident(name) => name,
            other => {
                return Err(ParseError::Syntax {
                    position: at,
                    expected: format!("a term, found {}", other.describe()),
                })
            }
        };
        if is_reserved_name(&name) {
            return Err(ParseError::ReservedSymbol { name, position: at });
        }
        if is_variable_name(&name) {
            if name == "all" || name == "exists" {
                return Err(ParseError::Syntax {
                    position: at,
                    expected: "a term, found a quantifier".into(),
                });
            }
            if *self.peek() == Tok::LParen {
                return self.expected("an operator (variables take no arguments)");
            }
            return Ok(RawTerm::Var(name));
        }
        if !name.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
            return Err(ParseError::Syntax {
                position: at,
                expected: "an identifier starting with a letter".into(),
            });
        }
        if *self.peek() != Tok::LParen {
            return Ok(RawTerm::Sym(name, None, at));
        }
        self.bump();
        let mut args = vec![self.raw_term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.raw_term()?);
        }
        self.expect(Tok::RParen)?;
        Ok(RawTerm::Sym(name, Some(args), at))
    }

    fn resolve_term(&mut self, raw: RawTerm) -> Result<Term, ParseError> {
        match raw {
            RawTerm::Var(v) => Ok(Term::Var(v)),
            RawTerm::Sym(name, None, at) => {
                self.check_symbol(&name, Kind::Constant, 0, at)?;
                Ok(Term::Const(name))
            }
            RawTerm::Sym(name, Some(args), at) => {
                self.check_symbol(&name, Kind::Function, args.len(), at)?;
                let args = args
                    .into_iter()
                    .map(|a| self.resolve_term(a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Term::App(name, args))
            }
        }
    }

    fn check_symbol(&mut self, name: &str, want: Kind, used: usize, at: usize) -> Result<(), ParseError> {
        let found = match &self.symbols {
            Symbols::Declared(sig) => {
                if sig.constants.contains(name) {
                    Some((Kind::Constant, 0))
                } else if let Some(&a) = sig.functions.get(name) {
                    Some((Kind::Function, a))
                } else {
                    sig.predicates.get(name).map(|&a| (Kind::Predicate, a))
                }
            }
            Symbols::Inferred(map) => map.get(name).copied(),
        };
        let Some((kind, declared)) = found else {
            return match &mut self.symbols {
                Symbols::Declared(_) => Err(ParseError::UnknownSymbol {
                    name: name.to_string(),
                    position: at,
                }),
                Symbols::Inferred(map) => {
                    map.insert(name.to_string(), (want, used));
                    Ok(())
                }
            };
        };
        // a constant and a function are both terms; arity decides the report
        let term_kinds = matches!(kind, Kind::Constant | Kind::Function)
            && matches!(want, Kind::Constant | Kind::Function);
        if kind != want && !term_kinds {
            return Err(ParseError::Syntax {
                position: at,
                expected: format!("{} but `{name}` is {}", want.name(), kind.name()),
            });
        }
        if declared != used {
            return Err(ParseError::ArityMismatch {
                name: name.to_string(),
                declared,
                used,
                position: at,
            });
        }
        Ok(())
    }
}

fn run<'s>(text: &str, symbols: Symbols<'s>) -> Result<(Formula, Symbols<'s>), ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, symbols };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.expected("an operator or end of input");
    }
    if let Some(name) = f.free_variables_ordered().into_iter().next() {
        return Err(ParseError::FreeVariable { name });
    }
    Ok((f, p.symbols))
}

/// Parses a sentence whose symbols must all be declared in `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    run(text, Symbols::Declared(sig)).map(|(f, _)| f)
}

/// Parses a sentence and infers its signature from how symbols are used.
/// Inconsistent uses of one symbol are rejected.
pub fn parse_inferring(text: &str) -> Result<(Formula, Signature), ParseError> {
    let (f, symbols) = run(text, Symbols::Inferred(BTreeMap::new()))?;
    let mut sig = Signature::new();
    if let Symbols::Inferred(map) = symbols {
        for (name, (kind, arity)) in map {
            match kind {
                Kind::Constant => {
                    sig.constants.insert(name);
                }
                Kind::Function => {
                    sig.functions.insert(name, arity);
                }
                Kind::Predicate => {
                    sig.predicates.insert(name, arity);
                }
            }
        }
    }
    Ok((f, sig))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn occupation_sig() -> Signature {
        Signature::new()
            .with_constants(["Doctor", "Surgeon", "Joe", "Lawyer", "Actor"])
            .with_predicate("Occupation", 2)
            .with_predicate("Customer", 2)
    }

    fn occ(x: Term, y: &str) -> Formula {
        Formula::atom("Occupation", vec![x, Term::constant(y)])
    }

    #[test]
    fn parses_surgeon_model_answer() {
        let f = parse("all x (Occupation(x,Surgeon) -> Occupation(x,Doctor))", &occupation_sig()).unwrap();
        let x = Term::var("x");
        assert_eq!(
            f,
            Formula::forall("x", Formula::implies(occ(x.clone(), "Surgeon"), occ(x, "Doctor")))
        );
    }

    #[test]
    fn quantifier_scope_extends_right() {
        let sig = occupation_sig();
        let a = parse("all x Occupation(x,Surgeon) -> Occupation(x,Doctor)", &sig).unwrap();
        let b = parse("all x (Occupation(x,Surgeon) -> Occupation(x,Doctor))", &sig).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parses_lawyer_model_answer() {
        let f = parse("-(exists x (Occupation(x,Lawyer) & Customer(Joe,x)))", &occupation_sig()).unwrap();
        let x = Term::var("x");
        let expected = Formula::not(Formula::exists(
            "x",
            Formula::and(
                occ(x.clone(), "Lawyer"),
                Formula::atom("Customer", vec![Term::constant("Joe"), x]),
            ),
        ));
        assert_eq!(f, expected);
    }

    #[test]
    fn precedence_and_associativity() {
        let sig = Signature::new().with_predicate("P", 1).with_constants(["A"]);
        let p = || Formula::atom("P", vec![Term::constant("A")]);
        let f = parse("-P(A) & P(A) | P(A) -> P(A) -> P(A) <-> P(A)", &sig).unwrap();
        let expected = Formula::iff(
            Formula::implies(
                Formula::or(Formula::and(Formula::not(p()), p()), p()),
                Formula::implies(p(), p()),
            ),
            p(),
        );
        assert_eq!(f, expected);
        let g = parse("P(A) & P(A) & P(A)", &sig).unwrap();
        assert_eq!(g, Formula::and(Formula::and(p(), p()), p()));
    }

    #[test]
    fn equality_and_disequality() {
        let sig = occupation_sig();
        let f = parse("exists x (Occupation(Joe,x) & x != Actor)", &sig).unwrap();
        let x = Term::var("x");
        assert_eq!(
            f,
            Formula::exists(
                "x",
                Formula::and(
                    Formula::atom("Occupation", vec![Term::constant("Joe"), x.clone()]),
                    Formula::not(Formula::eq(x, Term::constant("Actor")))
                )
            )
        );
    }

    #[test]
    fn rejects_free_variable() {
        let err = parse("Occupation(x,Doctor)", &occupation_sig()).unwrap_err();
        assert_eq!(err, ParseError::FreeVariable { name: "x".into() });
    }

    #[test]
    fn rejects_arity_mismatch() {
        let err = parse("Occupation(Joe)", &occupation_sig()).unwrap_err();
        assert!(matches!(
            err,
            ParseError::ArityMismatch { ref name, declared: 2, used: 1, .. } if name == "Occupation"
        ));
    }

    #[test]
    fn rejects_unknown_symbol() {
        let err = parse("all x Occupation(x, Nurse)", &occupation_sig()).unwrap_err();
        assert!(matches!(err, ParseError::UnknownSymbol { ref name, position: 20 } if name == "Nurse"));
    }

    #[test]
    fn rejects_reserved_skolem_names() {
        let err = parse("all sk1 Occupation(sk1, Doctor)", &occupation_sig()).unwrap_err();
        assert!(matches!(err, ParseError::ReservedSymbol { .. }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let sig = occupation_sig();
        let err = parse("Occupation(Joe, Doctor) &", &sig).unwrap_err();
        assert_eq!(err.position(), Some(25));
        let err = parse("(Occupation(Joe, Doctor)", &sig).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 24, .. }));
        let err = parse("Occupation(Joe, Doctor) ∧ Occupation(Joe, Actor)", &sig).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 24, .. }));
        let err = parse("Joe", &sig).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn predicate_in_term_position_is_rejected() {
        let sig = occupation_sig();
        let err = parse("Occupation(Customer, Joe)", &sig).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 11, .. }));
    }

    #[test]
    fn inferred_signature() {
        let (f, sig) = parse_inferring("all x (P(x) -> Q(F(x), A))").unwrap();
        assert!(f.is_sentence());
        assert_eq!(sig.predicates.get("P"), Some(&1));
        assert_eq!(sig.predicates.get("Q"), Some(&2));
        assert_eq!(sig.functions.get("F"), Some(&1));
        assert!(sig.constants.contains("A"));
        let err = parse_inferring("P(A) & P(A, A)").unwrap_err();
        assert!(matches!(err, ParseError::ArityMismatch { .. }));
    }
}
