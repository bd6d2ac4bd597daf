//! Synchronous product of stit automata.

use std::collections::{BTreeMap, BTreeSet};

use super::{AutomatonError, StitAutomaton, Transition};
use crate::value::Value;

/// How component weights combine on a product transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightPolicy {
    Min,
    Sum,
}

/// How component labels combine on a product state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelPolicy {
    /// Plain union of the component atoms.
    Union,
    /// Each atom is prefixed with its component's agent, as `agent.atom`.
    AgentQualified,
}

fn cartesian(lists: &[Vec<String>]) -> Vec<Vec<String>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

/// Product state and action names join the component names with `,`.
/// A single component with [`LabelPolicy::Union`] yields an identical
/// automaton.
pub fn product(components: &[(&str, &StitAutomaton)], weights: WeightPolicy, labels: LabelPolicy) -> Result<StitAutomaton, AutomatonError> {
    let (_, first) = components.first().ok_or(AutomatonError::EmptyProduct)?;
    for (_, t) in components {
        if t.accumulation != first.accumulation {
            return Err(AutomatonError::AccumulationMismatch(first.accumulation, t.accumulation));
        }
        t.graph()?;
    }
    let join = |parts: &[String]| parts.join(",");
    let state_tuples = cartesian(&components.iter().map(|(_, t)| t.states.clone()).collect::<Vec<_>>());
    let action_tuples = cartesian(&components.iter().map(|(_, t)| t.actions.clone()).collect::<Vec<_>>());
    let finals: Vec<String> = cartesian(&components.iter().map(|(_, t)| t.final_states.clone()).collect::<Vec<_>>())
        .iter()
        .map(|v| join(v))
        .collect();

    let mut transitions = Vec::new();
    let mut label_map = BTreeMap::new();
    for tuple in &state_tuples {
        let outs: Vec<Vec<&Transition>> = components
            .iter()
            .zip(tuple)
            .map(|((_, t), q)| t.transitions.iter().filter(|tr| &tr.from == q).collect())
            .collect();
        let mut combos: Vec<Vec<&Transition>> = vec![Vec::new()];
        for out in &outs {
            combos = combos
                .iter()
                .flat_map(|c| {
                    out.iter().map(move |tr| {
                        let mut v = c.clone();
                        v.push(*tr);
                        v
                    })
                })
                .collect();
        }
        for combo in combos {
            let ws = combo.iter().map(|tr| tr.weight);
            let weight = match weights {
                WeightPolicy::Min => ws.min(),
                WeightPolicy::Sum => ws.reduce(|a, b| a + b),
            }
            .unwrap_or_else(Value::zero);
            transitions.push(Transition {
                from: join(tuple),
                action: join(&combo.iter().map(|tr| tr.action.clone()).collect::<Vec<_>>()),
                to: join(&combo.iter().map(|tr| tr.to.clone()).collect::<Vec<_>>()),
                weight,
            });
        }
        let mut atoms = BTreeSet::new();
        for ((agent, t), q) in components.iter().zip(tuple) {
            for a in t.labels_of(q) {
                atoms.insert(match labels {
                    LabelPolicy::Union => a.clone(),
                    LabelPolicy::AgentQualified => format!("{agent}.{a}"),
                });
            }
        }
        if !atoms.is_empty() {
            label_map.insert(join(tuple), atoms.into_iter().collect());
        }
    }

    Ok(StitAutomaton {
        states: state_tuples.iter().map(|v| join(v)).collect(),
        init: join(&components.iter().map(|(_, t)| t.init.clone()).collect::<Vec<_>>()),
        final_states: finals,
        actions: action_tuples.iter().map(|v| join(v)).collect(),
        transitions,
        labels: label_map,
        accumulation: first.accumulation,
    })
}
