//! Named models and automata for the worked scenarios.
//!
//! Values not fixed by the scenarios are chosen to produce the optimal
//! actions each scenario describes; the tests below pin those outcomes.

use serde::Serialize;

use crate::automaton::{Accumulation, StitAutomaton, Transition};
use crate::tree_model::{ChoiceSpec, ExplicitStitModel, HistorySpec, LabelSpec, MomentId, MomentSpec, ALL_HISTORIES};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FixtureData {
    Model(ExplicitStitModel),
    Automaton(StitAutomaton),
}

impl FixtureData {
    pub fn to_json(&self) -> String {
        match self {
            FixtureData::Model(m) => m.to_json(),
            FixtureData::Automaton(t) => t.to_json(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub data: FixtureData,
}

struct Tree(ExplicitStitModel);

impl Tree {
    fn new(agents: &[&str], atoms: &[&str]) -> Self {
        Tree(ExplicitStitModel {
            agents: agents.iter().map(|s| s.to_string()).collect(),
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
            moments: vec![MomentSpec { id: 0, parent: None }],
            ..Default::default()
        })
    }

    fn moments(mut self, pairs: &[(MomentId, MomentId)]) -> Self {
        for &(id, parent) in pairs {
            self.0.moments.push(MomentSpec { id, parent: Some(parent) });
        }
        self
    }

    fn history(mut self, id: &str, moments: &[MomentId], value: i64) -> Self {
        self.0.histories.push(HistorySpec {
            id: id.into(),
            moments: moments.to_vec(),
            value: Value::int(value),
        });
        self
    }

    fn choice(mut self, agent: &str, moment: MomentId, actions: &[&[&str]]) -> Self {
        self.0.choices.push(ChoiceSpec {
            agent: agent.into(),
            moment,
            actions: actions.iter().map(|k| k.iter().map(|h| h.to_string()).collect()).collect(),
        });
        self
    }

    fn label(mut self, moment: MomentId, history: &str, atoms: &[&str]) -> Self {
        self.0.labels.push(LabelSpec {
            moment,
            history: history.into(),
            atoms: atoms.iter().map(|s| s.to_string()).collect(),
        });
        self
    }
}

/// Moments `0 = m` and `1 = m′`; `K1 = {h1..h4}`, `K2 = {h5,h6}`, and at
/// `m′` the actions `K3 = {h1}`, `K4 = {h2}`, `K5 = {h3,h4}`.
pub fn fig1() -> ExplicitStitModel {
    Tree::new(&["alpha"], &["A"])
        .moments(&[(1, 0), (2, 0), (3, 1), (4, 1), (5, 1), (6, 1), (7, 2), (8, 2)])
        .history("h1", &[0, 1, 3], 3)
        .history("h2", &[0, 1, 4], 5)
        .history("h3", &[0, 1, 5], 4)
        .history("h4", &[0, 1, 6], 6)
        .history("h5", &[0, 2, 7], 7)
        .history("h6", &[0, 2, 8], 8)
        .choice("alpha", 0, &[&["h1", "h2", "h3", "h4"], &["h5", "h6"]])
        .choice("alpha", 1, &[&["h1"], &["h2"], &["h3", "h4"]])
        .label(0, "h1", &["A"])
        .label(0, "h2", &["A"])
        .label(0, "h3", &["A"])
        .label(0, "h5", &["A"])
        .label(0, "h6", &["A"])
        .label(1, "h1", &["A"])
        .label(1, "h2", &["A"])
        .label(1, "h3", &["A"])
        .0
}

/// Overtaking. At `m = 0`, `K1` stays in lane (`hs1`, `hs2`) and `K2`
/// moves into the opposite lane, reaching `m′ = 6`. At `m′` the agent
/// either stays there (`h_pi`, collision at `8`) or returns within 0, 1
/// or 2 steps (`h0`, `h1`, `h2`).
pub fn fig2() -> ExplicitStitModel {
    let k2 = [0, 4, 5, 6];
    let under = |a: MomentId, b: MomentId| [k2[0], k2[1], k2[2], k2[3], a, b];
    Tree::new(&["alpha"], &["p", "chi", "collision"])
        .moments(&[(1, 0), (2, 1), (3, 1), (4, 0), (5, 4), (6, 5)])
        .moments(&[(7, 6), (8, 7), (9, 6), (10, 9), (11, 6), (12, 11), (13, 6), (14, 13)])
        .history("hs1", &[0, 1, 2], 10)
        .history("hs2", &[0, 1, 3], 9)
        .history("h_pi", &under(7, 8), 0)
        .history("h0", &under(9, 10), 5)
        .history("h1", &under(11, 12), 4)
        .history("h2", &under(13, 14), 3)
        .choice("alpha", 0, &[&["hs1", "hs2"], &["h_pi", "h0", "h1", "h2"]])
        .choice("alpha", 6, &[&["h_pi"], &["h0", "h1", "h2"]])
        .label(0, "hs1", &["chi"])
        .label(0, "hs2", &["chi"])
        .label(8, "h_pi", &["collision"])
        .label(6, "h0", &["p"])
        .label(11, "h1", &["p"])
        .label(14, "h2", &["p"])
        .0
}

/// Lane change with right-of-way. `K1 = {h_tilde, h_a}` through `m′ = 1`,
/// `K2 = {h_b}`. `h_tilde` proceeds without being granted the right-of-way
/// and is excluded from the optimal action at `m′`.
pub fn fig3() -> ExplicitStitModel {
    Tree::new(&["alpha"], &["p_alpha", "g_alpha", "w_alpha"])
        .moments(&[(1, 0), (2, 0), (3, 1), (4, 1), (5, 2)])
        .history("h_tilde", &[0, 1, 3], 1)
        .history("h_a", &[0, 1, 4], 5)
        .history("h_b", &[0, 2, 5], 0)
        .choice("alpha", 0, &[&["h_tilde", "h_a"], &["h_b"]])
        .choice("alpha", 1, &[&["h_tilde"], &["h_a"]])
        .label(0, ALL_HISTORIES, &["w_alpha"])
        .label(0, "h_tilde", &["p_alpha"])
        .label(1, "h_tilde", &["p_alpha"])
        .label(3, "h_tilde", &["p_alpha", "g_alpha"])
        .label(1, "h_a", &["g_alpha"])
        .label(4, "h_a", &["g_alpha", "p_alpha"])
        .0
}

/// Two actions, and every history is a rear-end collision at the root.
pub fn unavoidable() -> ExplicitStitModel {
    Tree::new(&["alpha"], &[super::HIT_FROM_BEHIND])
        .moments(&[(1, 0), (2, 0)])
        .history("h1", &[0, 1], 1)
        .history("h2", &[0, 2], 2)
        .choice("alpha", 0, &[&["h1"], &["h2"]])
        .label(0, ALL_HISTORIES, &[super::HIT_FROM_BEHIND])
        .0
}

/// Two actions; only the worse one leads to a collision.
pub fn avoidable() -> ExplicitStitModel {
    Tree::new(&["alpha"], &[super::HIT_FROM_BEHIND])
        .moments(&[(1, 0), (2, 0)])
        .history("h1", &[0, 1], 0)
        .history("h2", &[0, 2], 3)
        .choice("alpha", 0, &[&["h1"], &["h2"]])
        .label(1, "h1", &[super::HIT_FROM_BEHIND])
        .0
}

/// `alpha` and `beta` each choose `go` or `yield` at a conflict region.
/// History ids name the pair of choices, `alpha` first. The grant is
/// settled at the root along each history.
pub fn rss3_grid() -> ExplicitStitModel {
    Tree::new(&["alpha", "beta"], &["p_alpha", "p_beta", "g_alpha", "g_beta"])
        .moments(&[(1, 0), (2, 0), (3, 0), (4, 0)])
        .history("gg", &[0, 1], 0)
        .history("gy", &[0, 2], 5)
        .history("yg", &[0, 3], 5)
        .history("yy", &[0, 4], 1)
        .choice("alpha", 0, &[&["gg", "gy"], &["yg", "yy"]])
        .choice("beta", 0, &[&["gg", "yg"], &["gy", "yy"]])
        .label(1, "gg", &["p_alpha", "p_beta"])
        .label(0, "gy", &["g_alpha"])
        .label(2, "gy", &["p_alpha", "g_alpha"])
        .label(0, "yg", &["g_beta"])
        .label(3, "yg", &["p_beta", "g_beta"])
        .0
}

/// `alpha` cannot avoid proceeding. Its better action happens to be the one
/// along which `beta` gives way.
pub fn force_others() -> ExplicitStitModel {
    Tree::new(&["alpha", "beta"], &["p_alpha", "grow_beta_alpha"])
        .moments(&[(1, 0), (2, 0), (3, 0), (4, 0)])
        .history("h1", &[0, 1], 5)
        .history("h2", &[0, 2], 4)
        .history("h3", &[0, 3], 1)
        .history("h4", &[0, 4], 0)
        .choice("alpha", 0, &[&["h1", "h2"], &["h3", "h4"]])
        .choice("beta", 0, &[&["h1", "h3"], &["h2", "h4"]])
        .label(0, ALL_HISTORIES, &["p_alpha"])
        .label(0, "h1", &["grow_beta_alpha"])
        .label(0, "h2", &["grow_beta_alpha"])
        .0
}

fn automaton(states: &[&str], actions: &[&str], edges: &[(&str, &str, &str, i64)], labels: &[(&str, &[&str])]) -> StitAutomaton {
    StitAutomaton {
        states: states.iter().map(|s| s.to_string()).collect(),
        init: states[0].to_string(),
        final_states: Vec::new(),
        actions: actions.iter().map(|s| s.to_string()).collect(),
        transitions: edges
            .iter()
            .map(|&(from, action, to, w)| Transition {
                from: from.into(),
                action: action.into(),
                to: to.into(),
                weight: Value::int(w),
            })
            .collect(),
        labels: labels
            .iter()
            .map(|(q, atoms)| (q.to_string(), atoms.iter().map(|a| a.to_string()).collect()))
            .collect(),
        accumulation: Accumulation::Min,
    }
}

/// `K1` leads to an all-`p` loop of weight 5, `K2` to an unlabeled loop of
/// weight 2.
pub fn t0() -> StitAutomaton {
    automaton(
        &["q0", "q1", "q2"],
        &["K1", "K2"],
        &[("q0", "K1", "q1", 4), ("q1", "K1", "q1", 5), ("q0", "K2", "q2", 3), ("q2", "K2", "q2", 2)],
        &[("q0", &["p"]), ("q1", &["p"])],
    )
}

/// Lane merge: waiting keeps the bottleneck at 1 for as long as it lasts,
/// merging at once is worth 3.
pub fn merge() -> StitAutomaton {
    automaton(
        &["q0", "qw", "qm"],
        &["wait", "merge"],
        &[
            ("q0", "wait", "qw", 1),
            ("qw", "wait", "qw", 1),
            ("qw", "merge", "qm", 2),
            ("q0", "merge", "qm", 3),
            ("qm", "merge", "qm", 3),
        ],
        &[("q0", &["w_alpha", "p_alpha", "g_alpha"]), ("qm", &["p_alpha"])],
    )
}

pub fn fixtures() -> Vec<Fixture> {
    use FixtureData::*;
    vec![
        Fixture { name: "fig1", description: "choices, cstit, dstit and optimal actions at two moments", data: Model(fig1()) },
        Fixture { name: "fig2", description: "overtaking: obligations before and after entering the opposite lane", data: Model(fig2()) },
        Fixture { name: "fig3", description: "right-of-way structure behind both lane-change oughts", data: Model(fig3()) },
        Fixture { name: "unavoidable", description: "every history is a rear-end collision", data: Model(unavoidable()) },
        Fixture { name: "avoidable", description: "the optimal action avoids the collision", data: Model(avoidable()) },
        Fixture { name: "rss3-grid", description: "two agents choosing go or yield", data: Model(rss3_grid()) },
        Fixture { name: "force-others", description: "an agent that must proceed", data: Model(force_others()) },
        Fixture { name: "t0", description: "two first actions with self-loops", data: Automaton(t0()) },
        Fixture { name: "merge", description: "wait or merge into the next lane", data: Automaton(merge()) },
    ]
}

pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|f| f.name == name)
}
