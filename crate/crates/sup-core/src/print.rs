//! Pretty-printer for propositions and terms.
//!
//! The printed form round-trips through the parser up to alpha-equivalence.
//! Unit weights are elided in plain mode only.

use crate::reduction::Mode;
use crate::scalar::Scalar;
use crate::syntax::{Prop, Term, Weighted};

#[derive(Debug, Clone, Copy, Default)]
pub struct PrintOptions {
    /// Emit `⊙`, `λ` and `∥` instead of `(+)`, `\` and `||`.
    pub unicode: bool,
}

pub fn print_prop(p: &Prop) -> String {
    print_prop_opts(p, &PrintOptions::default())
}

pub fn print_prop_opts(p: &Prop, opts: &PrintOptions) -> String {
    let mut s = String::new();
    prop_prec(p, 0, opts, &mut s);
    s
}

// Proposition precedence, loosest first: -> (right-assoc), (+), \/, /\.
fn prop_prec(p: &Prop, level: u8, opts: &PrintOptions, out: &mut String) {
    let (text_level, left, op, right): (u8, &Prop, &str, &Prop) = match p {
        Prop::Top => {
            out.push('T');
            return;
        }
        Prop::Bottom => {
            out.push('F');
            return;
        }
        Prop::Implies(a, b) => (0, a, " -> ", b),
        Prop::Sup(a, b) => (1, a, if opts.unicode { " ⊙ " } else { " (+) " }, b),
        Prop::Or(a, b) => (2, a, r" \/ ", b),
        Prop::And(a, b) => (3, a, r" /\ ", b),
    };
    let needs_parens = text_level < level;
    if needs_parens {
        out.push('(');
    }
    // -> is right-associative, the others left-associative.
    let (lp, rp) = if text_level == 0 { (text_level + 1, text_level) } else { (text_level, text_level + 1) };
    prop_prec(left, lp, opts, out);
    out.push_str(op);
    prop_prec(right, rp, opts, out);
    if needs_parens {
        out.push(')');
    }
}

pub fn print_term(t: &Term, mode: Mode) -> String {
    print_term_opts(t, mode, &PrintOptions::default())
}

pub fn print_term_opts(t: &Term, mode: Mode, opts: &PrintOptions) -> String {
    let mut s = String::new();
    term_prec(t, 0, mode, opts, &mut s);
    s
}

// Term levels: 0 sum/par and lambda bodies, 2 weighted operands,
// 3 application, 4 atoms.
fn term_prec(t: &Term, level: u8, mode: Mode, opts: &PrintOptions, out: &mut String) {
    match t {
        Term::Sum(a, b) | Term::Par(a, b) => {
            let op = match (t, opts.unicode) {
                (Term::Sum(_, _), _) => " + ",
                (_, true) => " ∥ ",
                (_, false) => " || ",
            };
            let needs_parens = level > 0;
            if needs_parens {
                out.push('(');
            }
            weighted(a, mode, opts, out);
            out.push_str(op);
            weighted(b, mode, opts, out);
            if needs_parens {
                out.push(')');
            }
        }
        Term::Lam { binder, domain, body } => {
            let needs_parens = level > 0;
            if needs_parens {
                out.push('(');
            }
            out.push_str(if opts.unicode { "λ" } else { "\\" });
            out.push_str(binder);
            out.push(':');
            out.push_str(&print_prop_opts(domain, opts));
            out.push_str(". ");
            term_prec(body, 0, mode, opts, out);
            if needs_parens {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            let needs_parens = level > 3;
            if needs_parens {
                out.push('(');
            }
            term_prec(f, 3, mode, opts, out);
            out.push(' ');
            term_prec(a, 4, mode, opts, out);
            if needs_parens {
                out.push(')');
            }
        }
        Term::Var(x) => out.push_str(x),
        Term::Star => out.push('*'),
        Term::Pair(a, b) => {
            out.push('<');
            term_prec(a, 0, mode, opts, out);
            out.push_str(", ");
            term_prec(b, 0, mode, opts, out);
            out.push('>');
        }
        Term::Inl { body, right } => {
            out.push_str("inl(");
            term_prec(body, 0, mode, opts, out);
            out.push_str(", ");
            out.push_str(&print_prop_opts(right, opts));
            out.push(')');
        }
        Term::Inr { body, left } => {
            out.push_str("inr(");
            term_prec(body, 0, mode, opts, out);
            out.push_str(", ");
            out.push_str(&print_prop_opts(left, opts));
            out.push(')');
        }
        Term::ElimBot { scrutinee, target } => {
            out.push_str("absurd(");
            term_prec(scrutinee, 0, mode, opts, out);
            out.push_str(", ");
            out.push_str(&print_prop_opts(target, opts));
            out.push(')');
        }
        Term::ElimAnd { scrutinee, x, y, body } => {
            out.push_str("case_and(");
            term_prec(scrutinee, 0, mode, opts, out);
            out.push_str(&format!(", [{x},{y}] "));
            term_prec(body, 0, mode, opts, out);
            out.push(')');
        }
        Term::ElimOr { scrutinee, x, left, y, right } => {
            eliminator("case_or", scrutinee, x, left, y, right, mode, opts, out)
        }
        Term::ElimSup { scrutinee, x, left, y, right } => {
            eliminator("case_sup", scrutinee, x, left, y, right, mode, opts, out)
        }
        Term::ElimSupPar { scrutinee, x, left, y, right } => {
            eliminator("case_sup_par", scrutinee, x, left, y, right, mode, opts, out)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn eliminator(
    name: &str,
    scrutinee: &Term,
    x: &str,
    left: &Term,
    y: &str,
    right: &Term,
    mode: Mode,
    opts: &PrintOptions,
    out: &mut String,
) {
    out.push_str(name);
    out.push('(');
    term_prec(scrutinee, 0, mode, opts, out);
    out.push_str(&format!(", [{x}] "));
    term_prec(left, 0, mode, opts, out);
    out.push_str(&format!(", [{y}] "));
    term_prec(right, 0, mode, opts, out);
    out.push(')');
}

fn weighted(w: &Weighted, mode: Mode, opts: &PrintOptions, out: &mut String) {
    if mode == Mode::Plain && w.weight == Scalar::ONE {
        term_prec(&w.body, 2, mode, opts, out);
        return;
    }
    out.push_str(&weight_text(w.weight));
    out.push_str(" . ");
    term_prec(&w.body, 2, mode, opts, out);
}

/// A scalar rendered so it can stand before `.` in a weighted operand:
/// forms with an infix `+`/`-` get parenthesized.
fn weight_text(s: Scalar) -> String {
    let text = s.to_string();
    if text[1..].contains(['+', '-']) {
        format!("({text})")
    } else {
        text
    }
}
