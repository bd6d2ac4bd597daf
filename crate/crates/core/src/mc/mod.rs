//! Deciding dominance oughts at the root of the tree unrolled from a stit
//! automaton, without building the tree.
//!
//! For each first action `K` the automaton is restricted to `K` at the
//! initial state (`T_K`) and glued back onto the full automaton so that
//! executions returning to the initial state may continue freely (`T_K′`).
//! The executions of `T_K′` are the executions of `T` that start with `K`.
//! Their extremal bottleneck values decide dominance, and universal CTL*
//! checks on `T_K′` and `T` decide whether an optimal action guarantees the
//! obligation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::{extremal_values, prime_automaton, restrict_first_action, AutomatonError, Primed, StitAutomaton};
use crate::ctlstar::{check_universal, label_state_subformulas, strip_weights, Counterexample, CtlError, Labeled, TransitionSystem};
use crate::formula::{rewrite_dstit_idempotent, Agents, Formula, Obligation, OughtStatement};
use crate::value::Value;

#[derive(Debug, Error)]
pub enum McError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Ctl(#[from] CtlError),
    #[error("unsupported obligation `{0}`: expected φ, [{1} dstit: φ] or ![{1} dstit: φ] with φ stit-free")]
    UnsupportedObligation(String, String),
    #[error("ought is addressed to `{found}` but the automaton models agent `{agent}`")]
    WrongAgent { agent: String, found: String },
    #[error("group oughts are checked on explicit models only")]
    GroupOught,
}

/// The shape of an obligation after collapsing repeated `dstit`s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    Ctls,
    DstitPositive,
    DstitNegated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueInterval {
    pub action: String,
    pub lo: Value,
    pub hi: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionCheck {
    pub action: String,
    pub case_taken: Case,
    /// Whether the action guarantees the obligation; `None` when it was not
    /// evaluated because the action fails the condition.
    pub guarantees: Option<bool>,
    /// Whether the action guarantees the condition of a conditional ought.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    /// One interval per first action, in declaration order.
    pub intervals: Vec<ValueInterval>,
    pub optimal_actions: Vec<String>,
    /// One entry per optimal action.
    pub checks: Vec<ActionCheck>,
    pub failing_action: Option<String>,
    pub counterexample: Option<Counterexample>,
    /// Set when no optimal action guarantees the condition.
    #[serde(default)]
    pub vacuous: bool,
}

#[derive(Debug, Clone)]
enum Shape {
    Ctls(Formula),
    DstitPositive(Formula),
    DstitNegated(Formula),
}

impl Shape {
    fn case(&self) -> Case {
        match self {
            Shape::Ctls(_) => Case::Ctls,
            Shape::DstitPositive(_) => Case::DstitPositive,
            Shape::DstitNegated(_) => Case::DstitNegated,
        }
    }

    fn body(&self) -> &Formula {
        match self {
            Shape::Ctls(f) | Shape::DstitPositive(f) | Shape::DstitNegated(f) => f,
        }
    }
}

fn classify(o: &Obligation, agent: &str) -> Result<Shape, McError> {
    let unsupported = || McError::UnsupportedObligation(o.to_string(), agent.to_string());
    fn go(o: &Obligation, agent: &str, negated: bool) -> Option<Shape> {
        match o {
            Obligation::Plain(f) if negated => Some(Shape::Ctls(f.clone().not())),
            Obligation::Plain(f) => Some(Shape::Ctls(f.clone())),
            Obligation::Negated(inner) => go(inner, agent, !negated),
            Obligation::DstitOf(a, inner) if a == agent => match inner.as_ref() {
                Obligation::Plain(f) if negated => Some(Shape::DstitNegated(f.clone())),
                Obligation::Plain(f) => Some(Shape::DstitPositive(f.clone())),
                _ => None,
            },
            Obligation::DstitOf(..) => None,
        }
    }
    go(&rewrite_dstit_idempotent(o), agent, false).ok_or_else(unsupported)
}

/// Per-automaton state shared by all first actions.
struct Checker {
    ts: TransitionSystem,
    labeled: HashMap<Formula, Labeled>,
    primed: Vec<(String, Primed, TransitionSystem)>,
}

#[derive(Debug)]
struct Outcome {
    ok: bool,
    counterexample: Option<Counterexample>,
}

impl Checker {
    fn new(t: &StitAutomaton) -> Result<Self, McError> {
        t.checked_graph()?;
        let ts = strip_weights(t)?;
        let mut primed = Vec::new();
        for k in t.first_actions() {
            let tk = restrict_first_action(t, &k)?;
            let p = prime_automaton(&tk, t);
            let pts = strip_weights(&p.automaton)?;
            primed.push((k, p, pts));
        }
        Ok(Checker { ts, labeled: HashMap::new(), primed })
    }

    fn labeled(&mut self, f: &Formula) -> Result<Labeled, McError> {
        if let Some(l) = self.labeled.get(f) {
            return Ok(l.clone());
        }
        let l = label_state_subformulas(&self.ts, f)?;
        self.labeled.insert(f.clone(), l.clone());
        Ok(l)
    }

    fn to_original(&self, primed: &Primed, cx: Counterexample, f: &Formula) -> Counterexample {
        let back = |v: Vec<String>| v.into_iter().map(|s| primed.origin[&s].clone()).collect();
        Counterexample { stem: back(cx.stem), cycle: back(cx.cycle), violated: f.to_string() }
    }

    /// `T_K′ ⊨ ∀f`, with state subformulas labeled on `T`.
    fn universal_primed(&mut self, k: usize, f: &Formula) -> Result<Outcome, McError> {
        let l = self.labeled(f)?;
        let (_, primed, pts) = &self.primed[k];
        let mut ext = pts.clone();
        let index: HashMap<&str, usize> = self.ts.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        for (atom, holds) in &l.atoms {
            let lifted: Vec<bool> = ext.states.iter().map(|s| holds[index[primed.origin[s].as_str()]]).collect();
            ext.add_atom(atom, &lifted);
        }
        let r = check_universal(&ext, &l.formula)?;
        Ok(Outcome { ok: r.holds, counterexample: r.counterexample.map(|cx| self.to_original(primed, cx, f)) })
    }

    fn universal_root(&mut self, f: &Formula) -> Result<bool, McError> {
        let l = self.labeled(f)?;
        let mut ext = self.ts.clone();
        for (atom, holds) in &l.atoms {
            ext.add_atom(atom, holds);
        }
        Ok(check_universal(&ext, &l.formula)?.holds)
    }

    /// Whether first action `k` guarantees the obligation.
    fn guarantees(&mut self, k: usize, shape: &Shape) -> Result<Outcome, McError> {
        Ok(match shape {
            Shape::Ctls(f) => self.universal_primed(k, f)?,
            Shape::DstitPositive(f) => {
                if self.universal_root(f)? {
                    Outcome { ok: false, counterexample: None }
                } else {
                    self.universal_primed(k, f)?
                }
            }
            Shape::DstitNegated(f) => {
                let fails = !self.universal_root(f)? && self.universal_primed(k, f)?.ok;
                Outcome { ok: !fails, counterexample: None }
            }
        })
    }

    fn intervals(&self) -> Result<Vec<ValueInterval>, McError> {
        self.primed
            .iter()
            .map(|(k, p, _)| {
                let e = extremal_values(&p.automaton)?;
                Ok(ValueInterval { action: k.clone(), lo: e.lo, hi: e.hi })
            })
            .collect()
    }
}

/// Interval `a` is strictly dominated by `b`: every value of `a` is at most
/// every value of `b`, and not the other way round.
pub fn interval_dominated(a: &ValueInterval, b: &ValueInterval) -> bool {
    a.hi <= b.lo && b.hi > a.lo
}

/// Indices of the intervals no other interval strictly dominates.
pub fn undominated(intervals: &[ValueInterval]) -> Vec<usize> {
    (0..intervals.len())
        .filter(|&i| !intervals.iter().any(|b| interval_dominated(&intervals[i], b)))
        .collect()
}

fn run(t: &StitAutomaton, agent: &str, body: &Obligation, condition: Option<&Obligation>) -> Result<Verdict, McError> {
    let shape = classify(body, agent)?;
    let cond_shape = condition.map(|c| classify(c, agent)).transpose()?;
    let mut checker = Checker::new(t)?;
    let intervals = checker.intervals()?;
    let optimal = undominated(&intervals);

    let mut verdict = Verdict {
        holds: true,
        optimal_actions: optimal.iter().map(|&i| intervals[i].action.clone()).collect(),
        intervals,
        checks: Vec::new(),
        failing_action: None,
        counterexample: None,
        vacuous: false,
    };
    let mut retained = 0;
    for &k in &optimal {
        let action = verdict.intervals[k].action.clone();
        let condition = match &cond_shape {
            Some(c) => Some(checker.guarantees(k, c)?.ok),
            None => None,
        };
        if condition == Some(false) {
            verdict.checks.push(ActionCheck { action, case_taken: shape.case(), guarantees: None, condition });
            continue;
        }
        retained += 1;
        let out = checker.guarantees(k, &shape)?;
        if !out.ok && verdict.failing_action.is_none() {
            verdict.holds = false;
            verdict.failing_action = Some(action.clone());
            verdict.counterexample = out.counterexample;
        }
        verdict.checks.push(ActionCheck { action, case_taken: shape.case(), guarantees: Some(out.ok), condition });
    }
    if cond_shape.is_some() && retained == 0 {
        verdict.vacuous = true;
    }
    log::debug!("checked {} on {} first actions: holds={}", shape.body(), checker.primed.len(), verdict.holds);
    Ok(verdict)
}

/// Decides `O[agent cstit: a]` at the root of the tree unrolled from `t`.
pub fn check_ought(t: &StitAutomaton, agent: &str, a: &Obligation) -> Result<Verdict, McError> {
    run(t, agent, a, None)
}

/// Decides `O[agent cstit: a / b]`: among the optimal first actions, those
/// that guarantee `b` must guarantee `a`. If none guarantees `b` the ought
/// holds vacuously and the verdict says so.
pub fn check_conditional_ought(t: &StitAutomaton, agent: &str, a: &Obligation, b: &Obligation) -> Result<Verdict, McError> {
    run(t, agent, a, Some(b))
}

/// Dispatches a parsed ought. The ought must be addressed to `agent`.
pub fn check_statement(t: &StitAutomaton, agent: &str, o: &OughtStatement) -> Result<Verdict, McError> {
    match &o.agents {
        Agents::Group(_) => Err(McError::GroupOught),
        Agents::Single(a) if a != agent => Err(McError::WrongAgent { agent: agent.to_string(), found: a.clone() }),
        Agents::Single(_) => run(t, agent, &o.body, o.condition.as_ref()),
    }
}
