//! Structural rewrites: bounded-operator expansion and `dstit` collapsing.

use super::{Formula, Obligation};

fn next_n(f: Formula, n: u32) -> Formula {
    (0..n).fold(f, |acc, _| acc.next())
}

/// Replaces `X^t`, `F[n:m]` and `BR[N]` by their definitions over `X`,
/// `&` and `|`, recursing into stit bodies.
///
/// * `F[n:m] φ` becomes `X^n φ | … | X^m φ`.
/// * `ψ BR[N] φ` becomes `ψ | (φ & X ψ) | … | (φ & … & X^{N-1} φ & X^N ψ) | (φ & … & X^N φ)`.
pub fn expand_bounded(f: &Formula) -> Formula {
    use Formula::*;
    let e = |x: &Formula| Box::new(expand_bounded(x));
    match f {
        Atom(_) | True | False => f.clone(),
        Not(a) => Not(e(a)),
        And(a, b) => And(e(a), e(b)),
        Or(a, b) => Or(e(a), e(b)),
        Implies(a, b) => Implies(e(a), e(b)),
        Next(a) => Next(e(a)),
        NextPow(t, a) => next_n(expand_bounded(a), *t),
        Until(a, b) => Until(e(a), e(b)),
        Release(a, b) => Release(e(a), e(b)),
        Eventually(a) => Eventually(e(a)),
        EventuallyBounded(n, m, a) => {
            let a = expand_bounded(a);
            Formula::disj((*n..=*m).map(|k| next_n(a.clone(), k)))
        }
        Always(a) => Always(e(a)),
        BoundedRelease(n, psi, phi) => {
            let psi = expand_bounded(psi);
            let phi = expand_bounded(phi);
            let mut disjuncts = Vec::with_capacity(*n as usize + 2);
            for k in 0..=*n {
                let prefix = (0..k).map(|i| next_n(phi.clone(), i));
                disjuncts.push(Formula::conj(prefix.chain([next_n(psi.clone(), k)])));
            }
            disjuncts.push(Formula::conj((0..=*n).map(|i| next_n(phi.clone(), i))));
            Formula::disj(disjuncts)
        }
        ForallPaths(a) => ForallPaths(e(a)),
        ExistsPaths(a) => ExistsPaths(e(a)),
        Cstit(agent, o) => Cstit(agent.clone(), Box::new(expand_bounded_obligation(o))),
        Dstit(agent, o) => Dstit(agent.clone(), Box::new(expand_bounded_obligation(o))),
    }
}

pub fn expand_bounded_obligation(o: &Obligation) -> Obligation {
    match o {
        Obligation::Plain(f) => Obligation::Plain(expand_bounded(f)),
        Obligation::DstitOf(a, body) => Obligation::DstitOf(a.clone(), Box::new(expand_bounded_obligation(body))),
        Obligation::Negated(body) => Obligation::Negated(Box::new(expand_bounded_obligation(body))),
    }
}

fn rewrite_once(o: Obligation) -> Obligation {
    use Obligation::*;
    match o {
        DstitOf(a, body) => {
            let body = rewrite_once(*body);
            match body {
                DstitOf(b, inner) if a == b => DstitOf(a, inner),
                Negated(n1) => match *n1 {
                    DstitOf(b, n2) if a == b => match *n2 {
                        Negated(n3) => match *n3 {
                            DstitOf(c, inner) if a == c => DstitOf(a, inner),
                            n3 => DstitOf(a, Box::new(Negated(Box::new(DstitOf(b, Box::new(Negated(Box::new(n3)))))))),
                        },
                        n2 => DstitOf(a, Box::new(Negated(Box::new(DstitOf(b, Box::new(n2)))))),
                    },
                    n1 => DstitOf(a, Box::new(Negated(Box::new(n1)))),
                },
                body => DstitOf(a, Box::new(body)),
            }
        }
        Negated(body) => Negated(Box::new(rewrite_once(*body))),
        Plain(f) => Plain(f),
    }
}

/// Collapses `[a dstit: [a dstit: A]]` to `[a dstit: A]` and
/// `[a dstit: ![a dstit: ![a dstit: A]]]` to `[a dstit: A]` until neither
/// pattern remains. Different agents are left alone.
pub fn rewrite_dstit_idempotent(o: &Obligation) -> Obligation {
    let mut cur = o.clone();
    loop {
        let next = rewrite_once(cur.clone());
        if next == cur {
            return cur;
        }
        cur = next;
    }
}
