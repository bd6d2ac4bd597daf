use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ExplicitStitModel, MomentId, ALL_HISTORIES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// Exactly one parentless moment, with id 0.
    Root,
    DuplicateMoment,
    UnknownParent,
    /// Parent links contain a cycle.
    Acyclic,
    DuplicateHistory,
    /// A history's moments are not a root-to-leaf path.
    HistoryPath,
    /// A leaf is not the endpoint of any history.
    LeafCoverage,
    DuplicateAgent,
    UnknownAgent,
    UnknownMoment,
    UnknownHistory,
    UnknownAtom,
    DuplicateChoice,
    EmptyAction,
    /// Actions at `(α, m)` must partition `H_m`.
    Partition,
    /// Every selection of one action per agent has a non-empty intersection.
    Independence,
    /// Histories sharing a later moment lie in the same action.
    NoChoiceBetweenUndivided,
    /// A label names a history that does not pass through its moment.
    Label,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("axiom serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment: Option<MomentId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub histories: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.axiom)?;
        if let Some(a) = &self.agent {
            write!(f, " agent={a}")?;
        }
        if let Some(m) = self.moment {
            write!(f, " moment={m}")?;
        }
        if !self.histories.is_empty() {
            write!(f, " histories={{{}}}", self.histories.join(","))?;
        }
        write!(f, ": {}", self.detail)
    }
}

struct Out(Vec<Violation>);

impl Out {
    fn push(&mut self, axiom: Axiom, agent: Option<&str>, moment: Option<MomentId>, histories: Vec<String>, detail: String) {
        self.0.push(Violation {
            axiom,
            agent: agent.map(str::to_string),
            moment,
            histories,
            detail,
        });
    }
}

/// Checks the tree, history, choice and label invariants. An empty result
/// means the model is a well-formed utilitarian stit model.
pub fn validate_model(model: &ExplicitStitModel) -> Vec<Violation> {
    let mut out = Out(Vec::new());
    if !structure(model, &mut out) {
        return out.0;
    }
    choices(model, &mut out);
    labels(model, &mut out);
    out.0
}

fn structure(model: &ExplicitStitModel, out: &mut Out) -> bool {
    let mut parent: HashMap<MomentId, Option<MomentId>> = HashMap::new();
    for m in &model.moments {
        if parent.insert(m.id, m.parent).is_some() {
            out.push(Axiom::DuplicateMoment, None, Some(m.id), vec![], format!("moment {} declared twice", m.id));
        }
    }
    let roots: Vec<MomentId> = model.moments.iter().filter(|m| m.parent.is_none()).map(|m| m.id).collect();
    if roots != [0] {
        out.push(
            Axiom::Root,
            None,
            None,
            vec![],
            format!("expected exactly one parentless moment with id 0, found {roots:?}"),
        );
    }
    for m in &model.moments {
        if let Some(p) = m.parent {
            if !parent.contains_key(&p) {
                out.push(Axiom::UnknownParent, None, Some(m.id), vec![], format!("parent {p} does not exist"));
            }
        }
    }
    if !out.0.is_empty() {
        return false;
    }
    for m in &model.moments {
        let mut seen = HashSet::new();
        let mut cur = m.id;
        while let Some(Some(p)) = parent.get(&cur) {
            if !seen.insert(cur) {
                out.push(Axiom::Acyclic, None, Some(m.id), vec![], "parent chain loops".into());
                return false;
            }
            cur = *p;
        }
    }

    let has_child: HashSet<MomentId> = model.moments.iter().filter_map(|m| m.parent).collect();
    let mut ids = HashSet::new();
    let mut endpoints = HashSet::new();
    for h in &model.histories {
        if h.id == ALL_HISTORIES || !ids.insert(h.id.as_str()) {
            out.push(
                Axiom::DuplicateHistory,
                None,
                None,
                vec![h.id.clone()],
                format!("history id `{}` is reserved or repeated", h.id),
            );
        }
        let bad = |detail: String, out: &mut Out| out.push(Axiom::HistoryPath, None, None, vec![h.id.clone()], detail);
        if h.moments.first() != Some(&0) {
            bad("does not start at the root".into(), out);
            continue;
        }
        if let Some(m) = h.moments.iter().find(|m| !parent.contains_key(m)) {
            bad(format!("unknown moment {m}"), out);
            continue;
        }
        if let Some(w) = h.moments.windows(2).find(|w| parent[&w[1]] != Some(w[0])) {
            bad(format!("moment {} is not a child of {}", w[1], w[0]), out);
            continue;
        }
        let last = *h.moments.last().unwrap();
        if has_child.contains(&last) {
            bad(format!("ends at {last}, which is not a leaf"), out);
            continue;
        }
        endpoints.insert(last);
    }
    let mut leaves: Vec<MomentId> = model
        .moments
        .iter()
        .map(|m| m.id)
        .filter(|id| !has_child.contains(id) && !endpoints.contains(id))
        .collect();
    leaves.sort_unstable();
    for leaf in leaves {
        out.push(Axiom::LeafCoverage, None, Some(leaf), vec![], "leaf is not the end of any history".into());
    }
    out.0.is_empty()
}

fn through(model: &ExplicitStitModel, m: MomentId) -> BTreeSet<&str> {
    model
        .histories
        .iter()
        .filter(|h| h.moments.contains(&m))
        .map(|h| h.id.as_str())
        .collect()
}

fn choices(model: &ExplicitStitModel, out: &mut Out) {
    let mut agents = HashSet::new();
    for a in &model.agents {
        if !agents.insert(a.as_str()) {
            out.push(Axiom::DuplicateAgent, Some(a), None, vec![], "agent listed twice".into());
        }
    }
    let moments: HashSet<MomentId> = model.moments.iter().map(|m| m.id).collect();
    let hist_ids: HashSet<&str> = model.histories.iter().map(|h| h.id.as_str()).collect();
    let mut seen = HashSet::new();
    // Valid partitions, keyed by (agent, moment), for the cross-agent checks.
    let mut parts: HashMap<(&str, MomentId), Vec<BTreeSet<&str>>> = HashMap::new();

    for c in &model.choices {
        let (a, m) = (c.agent.as_str(), c.moment);
        if !agents.contains(a) {
            out.push(Axiom::UnknownAgent, Some(a), Some(m), vec![], "choice for undeclared agent".into());
            continue;
        }
        if !moments.contains(&m) {
            out.push(Axiom::UnknownMoment, Some(a), Some(m), vec![], "choice at undeclared moment".into());
            continue;
        }
        if !seen.insert((a, m)) {
            out.push(Axiom::DuplicateChoice, Some(a), Some(m), vec![], "two choice entries".into());
            continue;
        }
        let unknown: Vec<String> = c.actions.iter().flatten().filter(|h| !hist_ids.contains(h.as_str())).cloned().collect();
        if !unknown.is_empty() {
            out.push(Axiom::UnknownHistory, Some(a), Some(m), unknown, "action names unknown histories".into());
            continue;
        }
        let h_m = through(model, m);
        let mut ok = true;
        let mut covered: BTreeSet<&str> = BTreeSet::new();
        for (i, k) in c.actions.iter().enumerate() {
            if k.is_empty() {
                out.push(Axiom::EmptyAction, Some(a), Some(m), vec![], format!("action #{i} is empty"));
                ok = false;
            }
            for h in k {
                if !covered.insert(h.as_str()) {
                    out.push(Axiom::Partition, Some(a), Some(m), vec![h.clone()], "history in more than one action".into());
                    ok = false;
                }
            }
        }
        let outside: Vec<String> = covered.difference(&h_m).map(|s| s.to_string()).collect();
        if !outside.is_empty() {
            out.push(Axiom::Partition, Some(a), Some(m), outside, "action contains histories not through the moment".into());
            ok = false;
        }
        let missing: Vec<String> = h_m.difference(&covered).map(|s| s.to_string()).collect();
        if !missing.is_empty() {
            out.push(Axiom::Partition, Some(a), Some(m), missing, "histories through the moment in no action".into());
            ok = false;
        }
        if !ok {
            continue;
        }
        let actions: Vec<BTreeSet<&str>> = c.actions.iter().map(|k| k.iter().map(String::as_str).collect()).collect();
        for child in model.moments.iter().filter(|x| x.parent == Some(m)) {
            let under = through(model, child.id);
            let hit: Vec<usize> = (0..actions.len()).filter(|&i| !actions[i].is_disjoint(&under)).collect();
            if hit.len() > 1 {
                out.push(
                    Axiom::NoChoiceBetweenUndivided,
                    Some(a),
                    Some(m),
                    under.iter().map(|s| s.to_string()).collect(),
                    format!("histories sharing moment {} are split across actions", child.id),
                );
            }
        }
        parts.insert((a, m), actions);
    }

    for m in model.moments.iter().map(|m| m.id) {
        let per_agent: Vec<(&str, &Vec<BTreeSet<&str>>)> = model
            .agents
            .iter()
            .filter_map(|a| parts.get(&(a.as_str(), m)).map(|p| (a.as_str(), p)))
            .collect();
        if per_agent.len() < 2 {
            continue;
        }
        let mut selection = vec![0usize; per_agent.len()];
        'outer: loop {
            let mut inter = per_agent[0].1[selection[0]].clone();
            for (i, &s) in selection.iter().enumerate().skip(1) {
                inter = inter.intersection(&per_agent[i].1[s]).copied().collect();
            }
            if inter.is_empty() {
                let desc: Vec<String> = per_agent
                    .iter()
                    .zip(&selection)
                    .map(|((a, p), &s)| format!("{a}:{{{}}}", p[s].iter().copied().collect::<Vec<_>>().join(",")))
                    .collect();
                out.push(
                    Axiom::Independence,
                    None,
                    Some(m),
                    vec![],
                    format!("empty intersection of {}", desc.join(" ∩ ")),
                );
            }
            for i in 0..selection.len() {
                selection[i] += 1;
                if selection[i] < per_agent[i].1.len() {
                    continue 'outer;
                }
                selection[i] = 0;
            }
            break;
        }
    }
}

fn labels(model: &ExplicitStitModel, out: &mut Out) {
    let atoms: HashSet<&str> = model.atoms.iter().map(String::as_str).collect();
    let moments: HashSet<MomentId> = model.moments.iter().map(|m| m.id).collect();
    for l in &model.labels {
        if !moments.contains(&l.moment) {
            out.push(Axiom::UnknownMoment, None, Some(l.moment), vec![], "label at undeclared moment".into());
            continue;
        }
        if l.history != ALL_HISTORIES {
            match model.histories.iter().find(|h| h.id == l.history) {
                None => {
                    out.push(Axiom::UnknownHistory, None, Some(l.moment), vec![l.history.clone()], "label names unknown history".into());
                    continue;
                }
                Some(h) if !h.moments.contains(&l.moment) => {
                    out.push(Axiom::Label, None, Some(l.moment), vec![l.history.clone()], "history does not pass through the labeled moment".into());
                    continue;
                }
                Some(_) => {}
            }
        }
        for a in &l.atoms {
            if !atoms.contains(a.as_str()) {
                out.push(Axiom::UnknownAtom, None, Some(l.moment), vec![], format!("atom `{a}` is not declared"));
            }
        }
    }
}
