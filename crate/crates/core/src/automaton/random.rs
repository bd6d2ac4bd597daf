//! Seeded generator of small valid automata.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Accumulation, StitAutomaton, Transition};
use crate::value::Value;

#[derive(Debug, Clone)]
pub struct RandomAutomatonConfig {
    pub max_states: usize,
    pub max_out: usize,
    /// Out-degree cap at the initial state.
    pub max_first: usize,
    pub actions: Vec<String>,
    pub atoms: Vec<String>,
    pub weights: Vec<Value>,
    pub label_density: f64,
}

impl Default for RandomAutomatonConfig {
    fn default() -> Self {
        RandomAutomatonConfig {
            max_states: 6,
            max_out: 2,
            max_first: 3,
            actions: vec!["a".into(), "b".into(), "c".into()],
            atoms: vec!["p".into(), "q".into()],
            weights: (1..=5).map(Value::int).collect(),
            label_density: 0.4,
        }
    }
}

/// Every state gets at least one successor and no two transitions share a
/// source and target, so the result always validates.
pub fn random_automaton<R: Rng + ?Sized>(rng: &mut R, cfg: &RandomAutomatonConfig) -> StitAutomaton {
    let n = rng.gen_range(1..=cfg.max_states.max(1));
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let mut transitions = Vec::new();
    for (i, from) in states.iter().enumerate() {
        let cap = if i == 0 { cfg.max_first } else { cfg.max_out }.clamp(1, n);
        let k = rng.gen_range(1..=cap);
        let mut targets: Vec<&String> = states.iter().collect();
        targets.shuffle(rng);
        for to in targets.into_iter().take(k) {
            transitions.push(Transition {
                from: from.clone(),
                action: cfg.actions.choose(rng).expect("actions non-empty").clone(),
                to: to.clone(),
                weight: *cfg.weights.choose(rng).expect("weights non-empty"),
            });
        }
    }
    let mut labels = BTreeMap::new();
    for s in &states {
        let atoms: Vec<String> = cfg.atoms.iter().filter(|_| rng.gen_bool(cfg.label_density)).cloned().collect();
        if !atoms.is_empty() {
            labels.insert(s.clone(), atoms);
        }
    }
    StitAutomaton {
        states,
        init: "q0".into(),
        final_states: vec![],
        actions: cfg.actions.clone(),
        transitions,
        labels,
        accumulation: Accumulation::Min,
    }
}
