//! Canonical printer. Binary connectives are always parenthesized; `BR[N]`
//! and path quantifiers print bare only where they span the rest of the
//! enclosing text (the whole statement, a quantifier body, or a bracket
//! body after `:` or `/`).

use std::fmt::{self, Write};

use super::{Agents, Formula, Obligation, OughtStatement, Statement};

fn spans_rest(f: &Formula) -> bool {
    matches!(
        f,
        Formula::BoundedRelease(..) | Formula::ForallPaths(_) | Formula::ExistsPaths(_)
    )
}

fn is_prefix_op(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Not(_)
            | Formula::Next(_)
            | Formula::NextPow(..)
            | Formula::Eventually(_)
            | Formula::EventuallyBounded(..)
            | Formula::Always(_)
    )
}

fn write_formula(out: &mut String, f: &Formula, top: bool) {
    use Formula::*;
    if !top && spans_rest(f) {
        out.push('(');
        write_formula(out, f, true);
        out.push(')');
        return;
    }
    match f {
        Atom(a) => out.push_str(a),
        True => out.push_str("true"),
        False => out.push_str("false"),
        Not(a) => {
            out.push('!');
            write_formula(out, a, false);
        }
        And(a, b) => binary(out, a, " & ", b),
        Or(a, b) => binary(out, a, " | ", b),
        Implies(a, b) => binary(out, a, " -> ", b),
        Until(a, b) => binary(out, a, " U ", b),
        Release(a, b) => binary(out, a, " R ", b),
        Next(a) => prefix(out, "X ", a),
        NextPow(t, a) => prefix(out, &format!("X^{t} "), a),
        Eventually(a) => prefix(out, "F ", a),
        EventuallyBounded(n, m, a) => prefix(out, &format!("F[{n}:{m}] "), a),
        Always(a) => prefix(out, "G ", a),
        BoundedRelease(n, a, b) => {
            br_operand(out, a);
            let _ = write!(out, " BR[{n}] ");
            br_operand(out, b);
        }
        ForallPaths(a) => {
            out.push_str("A ");
            write_formula(out, a, true);
        }
        ExistsPaths(a) => {
            out.push_str("E ");
            write_formula(out, a, true);
        }
        Cstit(agent, body) => stit(out, agent, "cstit", body),
        Dstit(agent, body) => stit(out, agent, "dstit", body),
    }
}

fn binary(out: &mut String, a: &Formula, op: &str, b: &Formula) {
    out.push('(');
    write_formula(out, a, false);
    out.push_str(op);
    write_formula(out, b, false);
    out.push(')');
}

fn prefix(out: &mut String, op: &str, a: &Formula) {
    out.push_str(op);
    write_formula(out, a, false);
}

fn br_operand(out: &mut String, a: &Formula) {
    if is_prefix_op(a) {
        out.push('(');
        write_formula(out, a, false);
        out.push(')');
    } else {
        write_formula(out, a, false);
    }
}

fn stit(out: &mut String, agent: &str, kind: &str, body: &Obligation) {
    let _ = write!(out, "[{agent} {kind}: ");
    write_obligation(out, body, true);
    out.push(']');
}

fn write_obligation(out: &mut String, o: &Obligation, top: bool) {
    match o {
        Obligation::Plain(f) => write_formula(out, f, top),
        Obligation::DstitOf(agent, body) => stit(out, agent, "dstit", body),
        Obligation::Negated(inner) => {
            out.push('!');
            write_obligation(out, inner, false);
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(&mut s, self, true);
        f.write_str(&s)
    }
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_obligation(&mut s, self, true);
        f.write_str(&s)
    }
}

impl fmt::Display for Agents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Agents::Single(a) => f.write_str(a),
            Agents::Group(g) => write!(f, "{{{}}}", g.join(", ")),
        }
    }
}

impl fmt::Display for OughtStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O[{} cstit: {}", self.agents, self.body)?;
        if let Some(c) = &self.condition {
            write!(f, " / {c}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Ought(o) => o.fmt(f),
            Statement::Obligation(o) => o.fmt(f),
            Statement::Formula(x) => x.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::formula::{parse, Formula as F, Obligation, OughtStatement};

    #[test]
    fn canonical_forms() {
        assert_eq!(Obligation::dstit("alpha", Obligation::atom("p")).to_string(), "[alpha dstit: p]");
        assert_eq!(F::atom("a").and(F::atom("b")).to_string(), "(a & b)");
        assert_eq!(F::atom("g").bounded_release(3, F::atom("q")).to_string(), "g BR[3] q");
        assert_eq!(F::atom("p").next_pow(2).to_string(), "X^2 p");
        assert_eq!(F::atom("p").eventually_within(0, 2).to_string(), "F[0:2] p");
    }

    #[test]
    fn nested_quantifiers_and_releases_are_wrapped() {
        let f = F::atom("p").always().forall().and(F::atom("q"));
        assert_eq!(f.to_string(), "((A G p) & q)");
        let g = F::atom("a").bounded_release(1, F::atom("b")).not();
        assert_eq!(g.to_string(), "!(a BR[1] b)");
    }

    #[test]
    fn conditional_refraining_shape() {
        let body = Obligation::Plain(F::atom("p").not().bounded_release(3, F::atom("g")));
        let o = OughtStatement::conditional(
            "alpha",
            Obligation::dstit("alpha", body).negate(),
            Obligation::atom("w"),
        );
        let text = o.to_string();
        assert_eq!(text, "O[alpha cstit: ![alpha dstit: (!p) BR[3] g] / w]");
        assert_eq!(parse(&text).unwrap(), o.into());
    }
}
