//! Pretty printer whose output parses back to the same tree.

use crate::formula::{Formula, Term};

pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Mem(s, t) => {
            write_term(s, out);
            out.push_str(" in ");
            write_term(t, out);
        }
        Formula::Eq(s, t) => {
            write_term(s, out);
            out.push_str(" = ");
            write_term(t, out);
        }
        Formula::Verum => out.push_str("Verum"),
        Formula::Falsum => out.push_str("Falsum"),
        Formula::Not(g) => {
            out.push_str("not ");
            match **g {
                Formula::Verum
                | Formula::Falsum
                | Formula::Not(_)
                | Formula::Forall(..)
                | Formula::Exists(..) => write_formula(g, out),
                _ => parenthesized(g, out),
            }
        }
        Formula::And(a, b) => binary(a, " & ", b, out),
        Formula::Or(a, b) => binary(a, " | ", b, out),
        Formula::Implies(a, b) => binary(a, " -> ", b, out),
        Formula::Iff(a, b) => binary(a, " <-> ", b, out),
        Formula::Forall(v, body) => quantifier("forall", v, body, out),
        Formula::Exists(v, body) => quantifier("exists", v, body, out),
    }
}

fn parenthesized(f: &Formula, out: &mut String) {
    out.push('(');
    write_formula(f, out);
    out.push(')');
}

fn quantifier(kw: &str, v: &str, body: &Formula, out: &mut String) {
    out.push_str(kw);
    out.push(' ');
    out.push_str(v);
    out.push_str(": ");
    parenthesized(body, out);
}

// A negation chain may stand bare next to a binary connective unless it ends
// in a quantifier, whose body would swallow the rest of the line.
fn bare_operand(f: &Formula) -> bool {
    match f {
        Formula::Verum | Formula::Falsum => true,
        Formula::Not(g) => match **g {
            Formula::Forall(..) | Formula::Exists(..) => false,
            Formula::Not(_) => bare_operand(g),
            _ => true,
        },
        _ => false,
    }
}

fn binary(a: &Formula, op: &str, b: &Formula, out: &mut String) {
    for (i, side) in [a, b].into_iter().enumerate() {
        if i == 1 {
            out.push_str(op);
        }
        if bare_operand(side) {
            write_formula(side, out);
        } else {
            parenthesized(side, out);
        }
    }
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(n) | Term::Const(n) => out.push_str(n),
        Term::SetAbs(v, body) => {
            out.push('{');
            out.push_str(v);
            out.push_str(" : ");
            write_formula(body, out);
            out.push('}');
        }
        Term::App(f, args) => {
            out.push_str(f);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(a, out);
            }
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::var;
    use crate::parser::parse;

    #[test]
    fn print_examples() {
        assert_eq!(
            print(&Formula::not(Formula::mem(var("x"), var("x")))),
            "not (x in x)"
        );
        assert_eq!(print(&Formula::Verum), "Verum");
        assert_eq!(
            print(&parse("not exists a: x in a & a in x").unwrap()),
            "not exists a: ((x in a) & (a in x))"
        );
        assert_eq!(
            print(&parse("y in {x : not x in x}").unwrap()),
            "y in {x : not (x in x)}"
        );
    }

    #[test]
    fn negated_quantifier_operand_keeps_parens() {
        let f = Formula::and(
            Formula::not(Formula::exists("a", Formula::mem(var("a"), var("x")))),
            Formula::Verum,
        );
        let s = print(&f);
        assert_eq!(s, "(not exists a: (a in x)) & Verum");
        assert_eq!(parse(&s).unwrap(), f);
    }

    #[test]
    fn nested_set_builders_round_trip() {
        let text = "x in {y : y in {z : z = y & not (z in x)}} | f(x, {w : Verum}) = x";
        let f = parse(text).unwrap();
        assert_eq!(parse(&print(&f)).unwrap(), f);
    }
}
