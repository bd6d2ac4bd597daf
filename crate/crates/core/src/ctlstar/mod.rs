//! CTL* model checking over the unweighted view of a stit automaton.
//!
//! Path formulas are translated to generalized Büchi automata and checked
//! against the product with the transition system. State subformulas are
//! handled bottom-up: each `E ψ` or `A ψ` is solved on its own and replaced
//! by a fresh atom labeling the states that satisfy it.

mod lasso;
mod ltl;
mod search;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{AutomatonError, StitAutomaton};
use crate::formula::Formula;

pub use lasso::{eval_lasso, eval_positions, LassoWord};
pub use ltl::{ltl_to_buchi, BuchiAutomaton, BuchiState};
use search::Product;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CtlError {
    #[error("`{0}` is not a path formula: path quantifiers must be labeled away first")]
    NotPathFormula(String),
    #[error("`{0}` is not a state formula")]
    NotStateFormula(String),
    #[error("stit operator in `{0}` is not part of CTL*")]
    StitOperator(String),
    #[error("lasso word has an empty loop")]
    EmptyCycle,
    #[error("internal error: counterexample for `{0}` does not violate it")]
    CounterexampleRejected(String),
}

/// A finite graph of labeled states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    pub states: Vec<String>,
    pub initial: usize,
    pub succ: Vec<Vec<usize>>,
    pub labels: Vec<BTreeSet<String>>,
}

impl TransitionSystem {
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn is_total(&self) -> bool {
        self.succ.iter().all(|s| !s.is_empty())
    }

    /// Adds `atom` to the label of every state `i` with `holds[i]`.
    pub fn add_atom(&mut self, atom: &str, holds: &[bool]) {
        for (i, &h) in holds.iter().enumerate() {
            if h {
                self.labels[i].insert(atom.to_string());
            }
        }
    }

    /// The word read along `stem · cycle^ω`.
    pub fn word(&self, stem: &[usize], cycle: &[usize]) -> LassoWord {
        let letters = |v: &[usize]| v.iter().map(|&s| self.labels[s].clone()).collect();
        LassoWord { stem: letters(stem), cycle: letters(cycle) }
    }
}

/// Forgets actions and weights; parallel edges collapse.
pub fn strip_weights(t: &StitAutomaton) -> Result<TransitionSystem, AutomatonError> {
    let g = t.graph()?;
    let mut succ = vec![Vec::new(); g.len()];
    for &(from, to, _, _) in &g.edges {
        if !succ[from].contains(&to) {
            succ[from].push(to);
        }
    }
    Ok(TransitionSystem {
        states: g.state_names.clone(),
        initial: g.init,
        succ,
        labels: g.state_names.iter().map(|s| t.labels_of(s).iter().cloned().collect()).collect(),
    })
}

/// A path violating a universally checked formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub stem: Vec<String>,
    pub cycle: Vec<String>,
    pub violated: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalResult {
    pub holds: bool,
    pub counterexample: Option<Counterexample>,
}

/// A formula with its state subformulas replaced by fresh atoms, and the
/// states each fresh atom holds at.
#[derive(Debug, Clone)]
pub struct Labeled {
    pub formula: Formula,
    pub atoms: Vec<(String, Vec<bool>)>,
}

/// States from which some path satisfies the quantifier-free `psi`.
fn exists_states(ts: &TransitionSystem, psi: &Formula) -> Result<Vec<bool>, CtlError> {
    let ba = ltl_to_buchi(psi)?;
    let all: Vec<usize> = (0..ts.states.len()).collect();
    Ok(Product::build(ts, &ba, &all).satisfying_starts(ts.states.len()))
}

/// Replaces every maximal `E ψ` / `A ψ` in `f`, innermost first, by a fresh
/// atom `#sN` labeled on the states of `ts` that satisfy it.
pub fn label_state_subformulas(ts: &TransitionSystem, f: &Formula) -> Result<Labeled, CtlError> {
    struct Ctx {
        ts: TransitionSystem,
        atoms: Vec<(String, Vec<bool>)>,
        memo: HashMap<Formula, String>,
    }
    fn go(cx: &mut Ctx, f: &Formula) -> Result<Formula, CtlError> {
        use Formula::*;
        let b = |x: Formula| Box::new(x);
        Ok(match f {
            Atom(_) | True | False => f.clone(),
            Not(a) => Not(b(go(cx, a)?)),
            And(x, y) => And(b(go(cx, x)?), b(go(cx, y)?)),
            Or(x, y) => Or(b(go(cx, x)?), b(go(cx, y)?)),
            Implies(x, y) => Implies(b(go(cx, x)?), b(go(cx, y)?)),
            Until(x, y) => Until(b(go(cx, x)?), b(go(cx, y)?)),
            Release(x, y) => Release(b(go(cx, x)?), b(go(cx, y)?)),
            BoundedRelease(n, x, y) => BoundedRelease(*n, b(go(cx, x)?), b(go(cx, y)?)),
            Next(a) => Next(b(go(cx, a)?)),
            NextPow(t, a) => NextPow(*t, b(go(cx, a)?)),
            Eventually(a) => Eventually(b(go(cx, a)?)),
            EventuallyBounded(lo, hi, a) => EventuallyBounded(*lo, *hi, b(go(cx, a)?)),
            Always(a) => Always(b(go(cx, a)?)),
            ForallPaths(a) | ExistsPaths(a) => {
                if let Some(name) = cx.memo.get(f) {
                    return Ok(Atom(name.clone()));
                }
                let inner = go(cx, a)?;
                let holds = if matches!(f, ExistsPaths(_)) {
                    exists_states(&cx.ts, &inner)?
                } else {
                    exists_states(&cx.ts, &inner.not())?.into_iter().map(|x| !x).collect()
                };
                let name = format!("#s{}", cx.atoms.len());
                cx.ts.add_atom(&name, &holds);
                cx.atoms.push((name.clone(), holds));
                cx.memo.insert(f.clone(), name.clone());
                Atom(name)
            }
            Cstit(..) | Dstit(..) => return Err(CtlError::StitOperator(f.to_string())),
        })
    }
    let mut cx = Ctx { ts: ts.clone(), atoms: Vec::new(), memo: HashMap::new() };
    let formula = go(&mut cx, f)?;
    Ok(Labeled { formula, atoms: cx.atoms })
}

fn eval_state(f: &Formula, label: &BTreeSet<String>) -> Result<bool, CtlError> {
    use Formula::*;
    Ok(match f {
        Atom(a) => label.contains(a),
        True => true,
        False => false,
        Not(a) => !eval_state(a, label)?,
        And(a, b) => eval_state(a, label)? && eval_state(b, label)?,
        Or(a, b) => eval_state(a, label)? || eval_state(b, label)?,
        Implies(a, b) => !eval_state(a, label)? || eval_state(b, label)?,
        _ => return Err(CtlError::NotStateFormula(f.to_string())),
    })
}

/// Satisfaction of the state formula `f` at every state of `ts`.
pub fn check_ctls(ts: &TransitionSystem, f: &Formula) -> Result<Vec<bool>, CtlError> {
    if f.has_stit() {
        let mut stit = String::new();
        f.any_node(&mut |g| {
            if matches!(g, Formula::Cstit(..) | Formula::Dstit(..)) {
                stit = g.to_string();
                return true;
            }
            false
        });
        return Err(CtlError::StitOperator(stit));
    }
    if !f.is_state_formula() {
        return Err(CtlError::NotStateFormula(f.to_string()));
    }
    let labeled = label_state_subformulas(ts, f)?;
    let mut ext = ts.clone();
    for (a, holds) in &labeled.atoms {
        ext.add_atom(a, holds);
    }
    ext.labels.iter().map(|l| eval_state(&labeled.formula, l)).collect()
}

/// Whether every infinite path from the initial state satisfies `f`. On
/// failure the counterexample is re-evaluated against `f` before it is
/// returned.
pub fn check_universal(ts: &TransitionSystem, f: &Formula) -> Result<UniversalResult, CtlError> {
    let labeled = label_state_subformulas(ts, f)?;
    let mut ext = ts.clone();
    for (a, holds) in &labeled.atoms {
        ext.add_atom(a, holds);
    }
    let ba = ltl_to_buchi(&labeled.formula.clone().not())?;
    let product = Product::build(&ext, &ba, &[ext.initial]);
    let Some((stem, cycle)) = product.lasso(&ba) else {
        return Ok(UniversalResult { holds: true, counterexample: None });
    };
    if eval_lasso(&labeled.formula, &ext.word(&stem, &cycle))? {
        return Err(CtlError::CounterexampleRejected(f.to_string()));
    }
    let names = |v: &[usize]| v.iter().map(|&s| ts.states[s].clone()).collect();
    Ok(UniversalResult {
        holds: false,
        counterexample: Some(Counterexample { stem: names(&stem), cycle: names(&cycle), violated: f.to_string() }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{restrict_first_action, prime_automaton, StitAutomaton};
    use crate::formula::parse_formula;

    fn t0() -> StitAutomaton {
        StitAutomaton::from_json(
            r#"{"states": ["q0", "q1", "q2"], "init": "q0", "actions": ["K1", "K2"],
                "transitions": [
                  {"from": "q0", "action": "K1", "to": "q1", "weight": "4"},
                  {"from": "q1", "action": "K1", "to": "q1", "weight": "5"},
                  {"from": "q0", "action": "K2", "to": "q2", "weight": "3"},
                  {"from": "q2", "action": "K2", "to": "q2", "weight": "2"}],
                "labels": {"q0": ["p"], "q1": ["p"]}}"#,
        )
        .unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn strip_t0() {
        let ts = strip_weights(&t0()).unwrap();
        assert_eq!(ts.states.len(), 3);
        assert_eq!(ts.succ, vec![vec![1, 2], vec![1], vec![2]]);
        assert!(ts.labels[1].contains("p"));
        assert!(ts.labels[2].is_empty());
    }

    #[test]
    fn nondeterministic_action_keeps_both_edges() {
        let mut t = t0();
        t.transitions[2].action = "K1".into();
        let ts = strip_weights(&t).unwrap();
        assert_eq!(ts.succ[0], vec![1, 2]);
    }

    #[test]
    fn universal_on_t0() {
        let ts = strip_weights(&t0()).unwrap();
        let r = check_universal(&ts, &f("G p")).unwrap();
        assert!(!r.holds);
        let cx = r.counterexample.unwrap();
        assert!(cx.stem.iter().chain(&cx.cycle).any(|s| s == "q2"));
        assert!(check_universal(&ts, &f("true")).unwrap().holds);

        let t = t0();
        let t1 = restrict_first_action(&t, "K1").unwrap();
        let primed = prime_automaton(&t1, &t);
        let ts1 = strip_weights(&primed.automaton).unwrap();
        assert!(check_universal(&ts1, &f("G p")).unwrap().holds);
    }

    #[test]
    fn state_formulas() {
        let ts = TransitionSystem {
            states: vec!["s".into()],
            initial: 0,
            succ: vec![vec![0]],
            labels: vec![BTreeSet::from(["p".to_string()])],
        };
        assert_eq!(check_ctls(&ts, &f("A G p")).unwrap(), vec![true]);

        let ts = TransitionSystem {
            states: vec!["s0".into(), "s1".into(), "s2".into()],
            initial: 0,
            succ: vec![vec![1], vec![1], vec![2]],
            labels: vec![BTreeSet::new(), BTreeSet::from(["q".to_string()]), BTreeSet::new()],
        };
        assert_eq!(check_ctls(&ts, &f("E F q")).unwrap(), vec![true, true, false]);
        assert_eq!(check_ctls(&ts, &f("A (F p | G !p)")).unwrap(), vec![true; 3]);
        assert_eq!(check_ctls(&ts, &f("A X E X q")).unwrap(), vec![true, true, false]);
        assert!(matches!(check_ctls(&ts, &f("F q")), Err(CtlError::NotStateFormula(_))));
    }

    #[test]
    fn nested_state_formula_inside_universal_check() {
        let ts = strip_weights(&t0()).unwrap();
        assert!(check_universal(&ts, &f("E G p")).unwrap().holds);
        assert!(!check_universal(&ts, &f("X E F p")).unwrap().holds);
    }
}
