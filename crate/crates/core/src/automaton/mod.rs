//! Weighted stit automata: validation, products, unrolling into explicit
//! models, the first-action surgeries used by the model checker, and exact
//! extremal values under `min` accumulation.

mod cycles;
mod extremal;
mod product;
pub mod random;
mod surgery;
mod unroll;

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::value::Value;

pub use cycles::{build_cycle_automaton, enumerate_abstract_schedules, simple_cycles, AbstractSchedule, CycleAutomaton, UEdge, UEdgeKind};
pub use extremal::{extremal_values, Extremes, Lasso};
pub use product::{product, LabelPolicy, WeightPolicy};
pub use surgery::{prime_automaton, restrict_first_action, Primed};
pub use unroll::unroll;

pub const RESOURCE_LIMIT_VAR: &str = "DEONTIC_MC_RESOURCE_LIMIT";
const DEFAULT_RESOURCE_LIMIT: usize = 10_000;

/// Cap on enumerated cycles, paths, schedules and unrolled moments.
pub fn resource_limit() -> usize {
    std::env::var(RESOURCE_LIMIT_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_RESOURCE_LIMIT)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Accumulation {
    #[default]
    Min,
    /// Parsed so products and unrolling can use it; the model checker
    /// rejects it.
    Sum,
}

impl Accumulation {
    pub fn combine(self, a: Value, b: Value) -> Value {
        match self {
            Accumulation::Min => a.min(b),
            Accumulation::Sum => a + b,
        }
    }

    /// Accumulates a non-empty finite weight sequence.
    pub fn fold(self, weights: impl IntoIterator<Item = Value>) -> Option<Value> {
        weights.into_iter().reduce(|a, b| self.combine(a, b))
    }
}

impl fmt::Display for Accumulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Accumulation::Min => "min",
            Accumulation::Sum => "sum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transition {
    pub from: String,
    pub action: String,
    pub to: String,
    pub weight: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StitAutomaton {
    pub states: Vec<String>,
    pub init: String,
    #[serde(rename = "final", default)]
    pub final_states: Vec<String>,
    pub actions: Vec<String>,
    pub transitions: Vec<Transition>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub accumulation: Accumulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutomatonAxiom {
    DuplicateState,
    DuplicateAction,
    UnknownInit,
    UnknownState,
    UnknownAction,
    DuplicateTransition,
    /// Two actions label transitions between the same pair of states.
    EdgeUniqueness,
    /// A reachable state has no outgoing transition.
    DeadEnd,
}

impl fmt::Display for AutomatonAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("axiom serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonViolation {
    pub axiom: AutomatonAxiom,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<String>,
    pub detail: String,
}

impl fmt::Display for AutomatonViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.axiom)?;
        if !self.states.is_empty() {
            write!(f, " states={{{}}}", self.states.join(","))?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Debug, Error)]
pub enum AutomatonError {
    #[error("automaton violates {} constraint(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<AutomatonViolation>),
    #[error("reachable state `{0}` has no outgoing transition, so no infinite execution passes through it")]
    DeadEnd(String),
    #[error("accumulation `{found}` is not supported by {operation}")]
    UnsupportedAccumulation { found: Accumulation, operation: &'static str },
    #[error("product components disagree on accumulation: {0} vs {1}")]
    AccumulationMismatch(Accumulation, Accumulation),
    #[error("action `{0}` is not enabled at the initial state")]
    ActionNotEnabled(String),
    #[error("unroll depth must be positive")]
    ZeroDepth,
    #[error("{what} exceeded the resource limit of {limit} (set {RESOURCE_LIMIT_VAR} to raise it)")]
    ResourceLimit { what: &'static str, limit: usize },
    #[error("product of zero automata")]
    EmptyProduct,
}

/// Index-based view of an automaton. Transition indices follow the
/// declaration order of `transitions`.
#[derive(Debug, Clone)]
pub struct Graph {
    pub init: usize,
    pub state_names: Vec<String>,
    /// `(from, to, weight, action index)` per transition.
    pub edges: Vec<(usize, usize, Value, usize)>,
    /// Outgoing transition indices per state.
    pub out: Vec<Vec<usize>>,
}

impl Graph {
    pub fn len(&self) -> usize {
        self.state_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.state_names.is_empty()
    }

    /// States reachable from `from` using only transitions accepted by `keep`.
    pub fn reachable_by(&self, from: usize, keep: impl Fn(usize) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(s) = queue.pop_front() {
            for &t in &self.out[s] {
                let to = self.edges[t].1;
                if keep(t) && !seen[to] {
                    seen[to] = true;
                    queue.push_back(to);
                }
            }
        }
        seen
    }

    pub fn reachable(&self) -> Vec<bool> {
        self.reachable_by(self.init, |_| true)
    }
}

impl StitAutomaton {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("automaton serializes")
    }

    pub fn labels_of(&self, state: &str) -> &[String] {
        self.labels.get(state).map(Vec::as_slice).unwrap_or(&[])
    }

    /// First actions, `Choice^root`, in declaration order of `actions`.
    pub fn first_actions(&self) -> Vec<String> {
        let enabled: HashSet<&str> = self
            .transitions
            .iter()
            .filter(|t| t.from == self.init)
            .map(|t| t.action.as_str())
            .collect();
        self.actions.iter().filter(|a| enabled.contains(a.as_str())).cloned().collect()
    }

    /// The index view; fails if the automaton does not validate.
    pub fn graph(&self) -> Result<Graph, AutomatonError> {
        let violations: Vec<AutomatonViolation> = validate_automaton(self)
            .into_iter()
            .filter(|v| v.axiom != AutomatonAxiom::DeadEnd)
            .collect();
        if !violations.is_empty() {
            return Err(AutomatonError::Invalid(violations));
        }
        Ok(self.graph_unchecked())
    }

    fn graph_unchecked(&self) -> Graph {
        let index: HashMap<&str, usize> = self.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let action_index: HashMap<&str, usize> = self.actions.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
        let mut out = vec![Vec::new(); self.states.len()];
        let edges = self
            .transitions
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let from = index[t.from.as_str()];
                out[from].push(i);
                (from, index[t.to.as_str()], t.weight, action_index[t.action.as_str()])
            })
            .collect();
        Graph {
            init: index[self.init.as_str()],
            state_names: self.states.clone(),
            edges,
            out,
        }
    }

    /// Validates and additionally rejects reachable dead ends.
    pub fn checked_graph(&self) -> Result<Graph, AutomatonError> {
        let g = self.graph()?;
        let reach = g.reachable();
        if let Some(s) = (0..g.len()).find(|&s| reach[s] && g.out[s].is_empty()) {
            return Err(AutomatonError::DeadEnd(g.state_names[s].clone()));
        }
        Ok(g)
    }
}

/// Checks the structural constraints on a stit automaton. An empty result
/// means every execution from the initial state can be extended forever and
/// each pair of states is linked by at most one action.
pub fn validate_automaton(t: &StitAutomaton) -> Vec<AutomatonViolation> {
    let mut out = Vec::new();
    let mut push = |axiom, states: Vec<String>, detail: String| out.push(AutomatonViolation { axiom, states, detail });
    let mut states = HashSet::new();
    for s in &t.states {
        if !states.insert(s.as_str()) {
            push(AutomatonAxiom::DuplicateState, vec![s.clone()], "state declared twice".into());
        }
    }
    let mut actions = HashSet::new();
    for a in &t.actions {
        if !actions.insert(a.as_str()) {
            push(AutomatonAxiom::DuplicateAction, vec![], format!("action `{a}` declared twice"));
        }
    }
    if !states.contains(t.init.as_str()) {
        push(AutomatonAxiom::UnknownInit, vec![t.init.clone()], "initial state is not declared".into());
    }
    for f in &t.final_states {
        if !states.contains(f.as_str()) {
            push(AutomatonAxiom::UnknownState, vec![f.clone()], "final state is not declared".into());
        }
    }
    for s in t.labels.keys() {
        if !states.contains(s.as_str()) {
            push(AutomatonAxiom::UnknownState, vec![s.clone()], "labels for an undeclared state".into());
        }
    }
    let mut structurally_ok = true;
    let mut pair_action: HashMap<(&str, &str), &str> = HashMap::new();
    let mut seen = HashSet::new();
    for tr in &t.transitions {
        for s in [&tr.from, &tr.to] {
            if !states.contains(s.as_str()) {
                push(AutomatonAxiom::UnknownState, vec![s.clone()], "transition endpoint is not declared".into());
                structurally_ok = false;
            }
        }
        if !actions.contains(tr.action.as_str()) {
            push(AutomatonAxiom::UnknownAction, vec![tr.from.clone()], format!("action `{}` is not declared", tr.action));
            structurally_ok = false;
        }
        if !seen.insert((tr.from.as_str(), tr.action.as_str(), tr.to.as_str())) {
            push(
                AutomatonAxiom::DuplicateTransition,
                vec![tr.from.clone(), tr.to.clone()],
                format!("transition ({}, {}, {}) listed twice", tr.from, tr.action, tr.to),
            );
            continue;
        }
        match pair_action.get(&(tr.from.as_str(), tr.to.as_str())) {
            Some(&k) if k != tr.action => push(
                AutomatonAxiom::EdgeUniqueness,
                vec![tr.from.clone(), tr.to.clone()],
                format!("actions `{k}` and `{}` both lead from {} to {}", tr.action, tr.from, tr.to),
            ),
            Some(_) => {}
            None => {
                pair_action.insert((tr.from.as_str(), tr.to.as_str()), tr.action.as_str());
            }
        }
    }
    if structurally_ok && states.contains(t.init.as_str()) && states.len() == t.states.len() {
        let g = t.graph_unchecked();
        let reach = g.reachable();
        for s in 0..g.len() {
            if reach[s] && g.out[s].is_empty() {
                push(AutomatonAxiom::DeadEnd, vec![g.state_names[s].clone()], "reachable state has no outgoing transition".into());
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn t0() -> StitAutomaton {
        StitAutomaton::from_json(
            r#"{
              "states": ["q0", "q1", "q2"], "init": "q0", "final": [],
              "actions": ["K1", "K2"],
              "transitions": [
                {"from": "q0", "action": "K1", "to": "q1", "weight": "4"},
                {"from": "q1", "action": "K1", "to": "q1", "weight": "5"},
                {"from": "q0", "action": "K2", "to": "q2", "weight": "3"},
                {"from": "q2", "action": "K2", "to": "q2", "weight": "2"}
              ],
              "labels": {"q0": ["p"], "q1": ["p"]},
              "accumulation": "min"
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn t0_is_valid() {
        assert_eq!(validate_automaton(&t0()), vec![]);
        assert_eq!(t0().first_actions(), vec!["K1", "K2"]);
    }

    #[test]
    fn edge_uniqueness() {
        let mut t = t0();
        t.transitions.push(Transition {
            from: "q0".into(),
            action: "K2".into(),
            to: "q1".into(),
            weight: Value::int(1),
        });
        let v = validate_automaton(&t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axiom, AutomatonAxiom::EdgeUniqueness);
    }

    #[test]
    fn reachable_dead_end() {
        let mut t = t0();
        t.transitions.retain(|x| !(x.from == "q2" && x.to == "q2"));
        let v = validate_automaton(&t);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axiom, AutomatonAxiom::DeadEnd);
        assert_eq!(v[0].states, vec!["q2".to_string()]);
        assert!(matches!(t.checked_graph(), Err(AutomatonError::DeadEnd(s)) if s == "q2"));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = t0().to_json().replace("\"init\"", "\"initial\"");
        assert!(StitAutomaton::from_json(&text).is_err());
    }
}
