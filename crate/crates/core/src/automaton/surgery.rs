//! The first-action surgeries: `T_n` keeps a single action at the initial
//! state, `T_n′` lets a `T_n` execution continue in the full automaton once
//! it returns to the initial state.

use std::collections::{BTreeMap, HashSet};

use super::{AutomatonError, StitAutomaton, Transition};

/// Drops every transition leaving the initial state with an action other
/// than `action`.
pub fn restrict_first_action(t: &StitAutomaton, action: &str) -> Result<StitAutomaton, AutomatonError> {
    if !t.transitions.iter().any(|tr| tr.from == t.init && tr.action == action) {
        return Err(AutomatonError::ActionNotEnabled(action.to_string()));
    }
    let mut out = t.clone();
    out.transitions.retain(|tr| tr.from != t.init || tr.action == action);
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct Primed {
    pub automaton: StitAutomaton,
    /// State of the original automaton each primed state stands for.
    pub origin: BTreeMap<String, String>,
}

/// Builds `T_n′` from `T_n` and `T`: a renamed copy of `T_n` beside `T`,
/// where renamed transitions into the renamed initial state go to `T`'s
/// initial state instead.
pub fn prime_automaton(tn: &StitAutomaton, t: &StitAutomaton) -> Primed {
    let taken: HashSet<&str> = t.states.iter().map(String::as_str).collect();
    let mut suffix = String::from("'");
    while tn.states.iter().any(|s| taken.contains(format!("{s}{suffix}").as_str())) {
        suffix.push('\'');
    }
    let ren = |s: &str| format!("{s}{suffix}");

    let mut origin: BTreeMap<String, String> = t.states.iter().map(|s| (s.clone(), s.clone())).collect();
    let mut states = Vec::new();
    for s in &tn.states {
        states.push(ren(s));
        origin.insert(ren(s), s.clone());
    }
    states.extend(t.states.iter().cloned());

    let mut transitions: Vec<Transition> = tn
        .transitions
        .iter()
        .map(|tr| Transition {
            from: ren(&tr.from),
            action: tr.action.clone(),
            to: if tr.to == tn.init { t.init.clone() } else { ren(&tr.to) },
            weight: tr.weight,
        })
        .collect();
    transitions.extend(t.transitions.iter().cloned());

    let mut labels = BTreeMap::new();
    for (s, atoms) in &tn.labels {
        labels.insert(ren(s), atoms.clone());
    }
    labels.extend(t.labels.iter().map(|(s, a)| (s.clone(), a.clone())));

    let mut final_states: Vec<String> = tn.final_states.iter().map(|s| ren(s)).collect();
    final_states.extend(t.final_states.iter().cloned());

    let mut actions = t.actions.clone();
    for a in &tn.actions {
        if !actions.contains(a) {
            actions.push(a.clone());
        }
    }

    Primed {
        automaton: StitAutomaton {
            states,
            init: ren(&tn.init),
            final_states,
            actions,
            transitions,
            labels,
            accumulation: t.accumulation,
        },
        origin,
    }
}
