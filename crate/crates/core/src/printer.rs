//! Rendering formulas back into the text format accepted by the parser.

use std::fmt::{self, Write};

use crate::syntax::{Formula, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => f.write_str(x),
            Term::App(g, args) => {
                write!(f, "{g}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

// `tail_open` is true when nothing follows this subformula before the
// enclosing closing parenthesis, so a quantifier may extend to the end.
fn write_formula(out: &mut impl Write, f: &Formula, ctx: u8, tail_open: bool) -> fmt::Result {
    match f {
        Formula::Atom(p, args) => {
            write!(out, "{p}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.write_str(", ")?;
                }
                write!(out, "{a}")?;
            }
            out.write_str(")")
        }
        Formula::Eq(l, r) => write!(out, "{l} = {r}"),
        Formula::Not(g) => match g.as_ref() {
            Formula::Eq(l, r) => write!(out, "{l} != {r}"),
            _ => {
                out.write_str("-")?;
                write_formula(out, g, UNARY, tail_open)
            }
        },
        Formula::And(l, r) => binary(out, l, r, " & ", AND, (AND, AND + 1), ctx, tail_open),
        Formula::Or(l, r) => binary(out, l, r, " | ", OR, (OR, OR + 1), ctx, tail_open),
        Formula::Implies(l, r) => {
            binary(out, l, r, " -> ", IMPLIES, (IMPLIES + 1, IMPLIES), ctx, tail_open)
        }
        Formula::Iff(l, r) => binary(out, l, r, " <-> ", IFF, (IFF + 1, IFF + 1), ctx, tail_open),
        Formula::ForAll(v, body) | Formula::Exists(v, body) => {
            let word = if matches!(f, Formula::ForAll(..)) { "all" } else { "exists" };
            if !tail_open {
                out.write_str("(")?;
            }
            write!(out, "{word} {v} ")?;
            let binary_body = matches!(
                body.as_ref(),
                Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..)
            );
            if binary_body {
                out.write_str("(")?;
            }
            write_formula(out, body, 0, true)?;
            if binary_body {
                out.write_str(")")?;
            }
            if !tail_open {
                out.write_str(")")?;
            }
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn binary(
    out: &mut impl Write,
    l: &Formula,
    r: &Formula,
    op: &str,
    prec: u8,
    (lctx, rctx): (u8, u8),
    ctx: u8,
    tail_open: bool,
) -> fmt::Result {
    let wrap = prec < ctx;
    if wrap {
        out.write_str("(")?;
    }
    write_formula(out, l, lctx, false)?;
    out.write_str(op)?;
    write_formula(out, r, rctx, wrap || tail_open)?;
    if wrap {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0, true)
    }
}

/// Renders a formula in the text format; the output re-parses to the same formula.
pub fn format(f: &Formula) -> String {
    f.to_string()
}
