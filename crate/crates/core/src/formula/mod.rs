//! Abstract syntax for DAU statements: CTL* formulas extended with `cstit`
//! and `dstit`, obligations, and (conditional) dominance oughts.
//!
//! The concrete text grammar lives in [`parser`] and the canonical printer in
//! [`render`]. Both are documented in `docs/grammar.md`.

pub mod parser;
pub mod random;
pub mod render;
pub mod transform;

pub use parser::{parse, parse_formula, parse_obligation, parse_ought, FormulaError};
pub use transform::{expand_bounded, expand_bounded_obligation, rewrite_dstit_idempotent};

/// A CTL* formula, possibly containing stit operators.
///
/// State and path formulas share one type; whether a formula is a state
/// formula is decided where it is evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    /// `X^t φ`: `X` repeated `t` times.
    NextPow(u32, Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    /// `F[n:m] φ` with `n <= m`.
    EventuallyBounded(u32, u32, Box<Formula>),
    Always(Box<Formula>),
    /// `ψ BR[N] φ`; the left operand is `ψ`, the right operand `φ`.
    BoundedRelease(u32, Box<Formula>, Box<Formula>),
    ForallPaths(Box<Formula>),
    ExistsPaths(Box<Formula>),
    Cstit(String, Box<Obligation>),
    Dstit(String, Box<Obligation>),
}

/// `A ::= φ | [α dstit: A] | ¬A` with `φ` a stit-free CTL* formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obligation {
    Plain(Formula),
    DstitOf(String, Box<Obligation>),
    Negated(Box<Obligation>),
}

/// The bearer of an ought: a single agent or a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Agents {
    Single(String),
    Group(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OughtStatement {
    pub agents: Agents,
    pub body: Obligation,
    /// `None` for a plain dominance ought, `Some(B)` for `O[α cstit: A / B]`.
    pub condition: Option<Obligation>,
}

/// Anything the parser can produce, classified by the most specific production.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Ought(OughtStatement),
    Obligation(Obligation),
    Formula(Formula),
}

fn bx(f: Formula) -> Box<Formula> {
    Box::new(f)
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(bx(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(bx(self), bx(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(bx(self), bx(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(bx(self), bx(rhs))
    }

    pub fn next(self) -> Formula {
        Formula::Next(bx(self))
    }

    pub fn next_pow(self, t: u32) -> Formula {
        Formula::NextPow(t, bx(self))
    }

    pub fn until(self, rhs: Formula) -> Formula {
        Formula::Until(bx(self), bx(rhs))
    }

    pub fn release(self, rhs: Formula) -> Formula {
        Formula::Release(bx(self), bx(rhs))
    }

    pub fn eventually(self) -> Formula {
        Formula::Eventually(bx(self))
    }

    pub fn eventually_within(self, lo: u32, hi: u32) -> Formula {
        assert!(lo <= hi, "F[n:m] requires n <= m");
        Formula::EventuallyBounded(lo, hi, bx(self))
    }

    pub fn always(self) -> Formula {
        Formula::Always(bx(self))
    }

    pub fn bounded_release(self, n: u32, rhs: Formula) -> Formula {
        Formula::BoundedRelease(n, bx(self), bx(rhs))
    }

    pub fn forall(self) -> Formula {
        Formula::ForallPaths(bx(self))
    }

    pub fn exists(self) -> Formula {
        Formula::ExistsPaths(bx(self))
    }

    /// Conjunction of all items; `true` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(|a, b| a.and(b))
            .unwrap_or(Formula::True)
    }

    /// Disjunction of all items; `false` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(|a, b| a.or(b))
            .unwrap_or(Formula::False)
    }

    pub fn has_stit(&self) -> bool {
        self.any_node(&mut |f| matches!(f, Formula::Cstit(..) | Formula::Dstit(..)))
    }

    pub fn has_path_quantifier(&self) -> bool {
        self.any_node(&mut |f| matches!(f, Formula::ForallPaths(_) | Formula::ExistsPaths(_)))
    }

    pub fn has_bounded(&self) -> bool {
        self.any_node(&mut |f| {
            matches!(
                f,
                Formula::NextPow(..) | Formula::EventuallyBounded(..) | Formula::BoundedRelease(..)
            )
        })
    }

    /// Whether `pred` holds for any node, descending into stit bodies.
    pub fn any_node(&self, pred: &mut dyn FnMut(&Formula) -> bool) -> bool {
        if pred(self) {
            return true;
        }
        use Formula::*;
        match self {
            Atom(_) | True | False => false,
            Not(a) | Next(a) | NextPow(_, a) | Eventually(a) | EventuallyBounded(_, _, a)
            | Always(a) | ForallPaths(a) | ExistsPaths(a) => a.any_node(pred),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b)
            | BoundedRelease(_, a, b) => a.any_node(pred) || b.any_node(pred),
            Cstit(_, o) | Dstit(_, o) => o.any_formula_node(pred),
        }
    }

    /// Atom names in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.any_node(&mut |f| {
            if let Formula::Atom(a) = f {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            false
        });
        out
    }

    /// Number of nodes, counting stit bodies.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.any_node(&mut |_| {
            n += 1;
            false
        });
        n
    }

    /// Whether this is a CTL* state formula: an atom, constant, path
    /// quantification, or a boolean combination of those.
    pub fn is_state_formula(&self) -> bool {
        use Formula::*;
        match self {
            Atom(_) | True | False | ForallPaths(_) | ExistsPaths(_) => true,
            Not(a) => a.is_state_formula(),
            And(a, b) | Or(a, b) | Implies(a, b) => a.is_state_formula() && b.is_state_formula(),
            Cstit(..) | Dstit(..) => true,
            _ => false,
        }
    }
}

impl Obligation {
    pub fn plain(f: Formula) -> Obligation {
        debug_assert!(!f.has_stit(), "plain obligations are stit-free");
        Obligation::Plain(f)
    }

    pub fn atom(name: impl Into<String>) -> Obligation {
        Obligation::Plain(Formula::atom(name))
    }

    pub fn dstit(agent: impl Into<String>, body: Obligation) -> Obligation {
        Obligation::DstitOf(agent.into(), Box::new(body))
    }

    /// Negation that stays canonical: `¬φ` of a plain formula stays plain.
    pub fn negate(self) -> Obligation {
        match self {
            Obligation::Plain(f) => Obligation::Plain(f.not()),
            other => Obligation::Negated(Box::new(other)),
        }
    }

    pub fn as_plain(&self) -> Option<&Formula> {
        match self {
            Obligation::Plain(f) => Some(f),
            _ => None,
        }
    }

    pub fn any_formula_node(&self, pred: &mut dyn FnMut(&Formula) -> bool) -> bool {
        match self {
            Obligation::Plain(f) => f.any_node(pred),
            Obligation::DstitOf(_, o) | Obligation::Negated(o) => o.any_formula_node(pred),
        }
    }

    /// Agents named by `dstit` operators, outermost first.
    pub fn stit_agents(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Obligation::Plain(f) => {
                    f.any_node(&mut |n| {
                        if let Formula::Cstit(a, _) | Formula::Dstit(a, _) = n {
                            out.push(a.clone());
                        }
                        false
                    });
                    return out;
                }
                Obligation::DstitOf(a, o) => {
                    out.push(a.clone());
                    cur = o;
                }
                Obligation::Negated(o) => cur = o,
            }
        }
    }
}

impl Agents {
    pub fn single(name: impl Into<String>) -> Agents {
        Agents::Single(name.into())
    }

    /// A group; rejects empty or duplicate-containing member lists.
    pub fn group<S: Into<String>>(members: impl IntoIterator<Item = S>) -> Result<Agents, String> {
        let members: Vec<String> = members.into_iter().map(Into::into).collect();
        if members.is_empty() {
            return Err("agent group is empty".into());
        }
        for (i, m) in members.iter().enumerate() {
            if members[..i].contains(m) {
                return Err(format!("agent `{m}` listed twice in group"));
            }
        }
        Ok(Agents::Group(members))
    }

    pub fn members(&self) -> Vec<&str> {
        match self {
            Agents::Single(a) => vec![a.as_str()],
            Agents::Group(g) => g.iter().map(String::as_str).collect(),
        }
    }
}

impl OughtStatement {
    pub fn new(agent: impl Into<String>, body: Obligation) -> Self {
        OughtStatement {
            agents: Agents::Single(agent.into()),
            body,
            condition: None,
        }
    }

    pub fn conditional(agent: impl Into<String>, body: Obligation, condition: Obligation) -> Self {
        OughtStatement {
            agents: Agents::Single(agent.into()),
            body,
            condition: Some(condition),
        }
    }

    pub fn group(agents: Agents, body: Obligation) -> Self {
        OughtStatement {
            agents,
            body,
            condition: None,
        }
    }
}

impl From<Formula> for Statement {
    fn from(f: Formula) -> Self {
        Statement::Formula(f)
    }
}

impl From<Obligation> for Statement {
    fn from(o: Obligation) -> Self {
        Statement::Obligation(o)
    }
}

impl From<OughtStatement> for Statement {
    fn from(o: OughtStatement) -> Self {
        Statement::Ought(o)
    }
}
