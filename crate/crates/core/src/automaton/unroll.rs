//! Unrolling an automaton into a finite explicit model.

use std::collections::BTreeSet;

use super::{resource_limit, AutomatonError, StitAutomaton};
use crate::tree_model::{ChoiceSpec, ExplicitStitModel, HistorySpec, LabelSpec, MomentId, MomentSpec, ALL_HISTORIES};

struct Node {
    state: usize,
    /// Transition that created this moment; `None` at the root.
    via: Option<usize>,
    parent: Option<usize>,
    children: Vec<usize>,
}

/// Expands `t` for `depth` steps. Each moment records the automaton state
/// it was created for; each non-leaf moment gives `agent` one action per
/// enabled automaton action. History values accumulate the weights along
/// the root-to-leaf path.
pub fn unroll(t: &StitAutomaton, depth: usize, agent: &str) -> Result<ExplicitStitModel, AutomatonError> {
    if depth == 0 {
        return Err(AutomatonError::ZeroDepth);
    }
    let g = t.checked_graph()?;
    let limit = resource_limit();
    let mut nodes = vec![Node { state: g.init, via: None, parent: None, children: vec![] }];
    let mut frontier = vec![0];
    for _ in 0..depth {
        let mut next = Vec::new();
        for &n in &frontier {
            for &tr in &g.out[nodes[n].state] {
                if nodes.len() >= limit {
                    return Err(AutomatonError::ResourceLimit { what: "unrolled moments", limit });
                }
                let id = nodes.len();
                nodes.push(Node { state: g.edges[tr].1, via: Some(tr), parent: Some(n), children: vec![] });
                nodes[n].children.push(id);
                next.push(id);
            }
        }
        frontier = next;
    }

    let mut histories = Vec::new();
    let mut leaf_history = vec![None; nodes.len()];
    for &leaf in &frontier {
        let mut path = vec![leaf];
        while let Some(p) = nodes[*path.last().unwrap()].parent {
            path.push(p);
        }
        path.reverse();
        let value = t
            .accumulation
            .fold(path.iter().filter_map(|&n| nodes[n].via).map(|tr| g.edges[tr].2))
            .expect("depth is positive");
        leaf_history[leaf] = Some(histories.len());
        histories.push(HistorySpec {
            id: format!("h{}", histories.len()),
            moments: path.iter().map(|&n| n as MomentId).collect(),
            value,
        });
    }

    fn leaves_below(nodes: &[Node], n: usize, out: &mut Vec<usize>) {
        if nodes[n].children.is_empty() {
            out.push(n);
        }
        for &c in &nodes[n].children {
            leaves_below(nodes, c, out);
        }
    }

    let mut choices = Vec::new();
    for (n, node) in nodes.iter().enumerate() {
        if node.children.is_empty() {
            continue;
        }
        let mut actions = Vec::new();
        for a in 0..t.actions.len() {
            let mut members = Vec::new();
            for &c in node.children.iter().filter(|&&c| g.edges[nodes[c].via.unwrap()].3 == a) {
                let mut leaves = Vec::new();
                leaves_below(&nodes, c, &mut leaves);
                members.extend(leaves.iter().map(|&l| histories[leaf_history[l].unwrap()].id.clone()));
            }
            if !members.is_empty() {
                actions.push(members);
            }
        }
        choices.push(ChoiceSpec { agent: agent.to_string(), moment: n as MomentId, actions });
    }

    let mut labels = Vec::new();
    for (n, node) in nodes.iter().enumerate() {
        let atoms = t.labels_of(&g.state_names[node.state]);
        if !atoms.is_empty() {
            labels.push(LabelSpec { moment: n as MomentId, history: ALL_HISTORIES.to_string(), atoms: atoms.to_vec() });
        }
    }
    let atoms: BTreeSet<String> = t.labels.values().flatten().cloned().collect();

    Ok(ExplicitStitModel {
        agents: vec![agent.to_string()],
        atoms: atoms.into_iter().collect(),
        moments: nodes
            .iter()
            .enumerate()
            .map(|(n, node)| MomentSpec { id: n as MomentId, parent: node.parent.map(|p| p as MomentId) })
            .collect(),
        histories,
        choices,
        labels,
    })
}
