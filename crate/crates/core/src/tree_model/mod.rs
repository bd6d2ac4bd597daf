//! Explicit finite-depth utilitarian stit models.
//!
//! A model is a tree of moments rooted at moment `0`, a set of histories
//! (root-to-leaf paths carrying a value), per-agent choice partitions and
//! per-`m/h` labels. Histories are conceptually infinite: every formula is
//! evaluated as if the leaf's label repeated forever.
//!
//! [`ExplicitStitModel`] is the file format; [`TreeModel`] is the validated,
//! indexed form every semantic operation runs on.

mod semantics;
mod validate;

pub mod random;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::value::Value;

pub use semantics::{ActionSet, InferenceReport, InferenceWitness};
pub use validate::{validate_model, Axiom, Violation};

pub type MomentId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentSpec {
    pub id: MomentId,
    #[serde(default)]
    pub parent: Option<MomentId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistorySpec {
    pub id: String,
    pub moments: Vec<MomentId>,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiceSpec {
    pub agent: String,
    pub moment: MomentId,
    pub actions: Vec<Vec<String>>,
}

/// Labels for one moment on one history, or on every history through the
/// moment when `history` is `"*"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelSpec {
    pub moment: MomentId,
    pub history: String,
    pub atoms: Vec<String>,
}

pub const ALL_HISTORIES: &str = "*";

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitStitModel {
    pub agents: Vec<String>,
    pub atoms: Vec<String>,
    pub moments: Vec<MomentSpec>,
    pub histories: Vec<HistorySpec>,
    #[serde(default)]
    pub choices: Vec<ChoiceSpec>,
    #[serde(default)]
    pub labels: Vec<LabelSpec>,
}

impl ExplicitStitModel {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model violates {} axiom(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error("unknown moment {0}")]
    UnknownMoment(MomentId),
    #[error("unknown history `{0}`")]
    UnknownHistory(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("history `{history}` does not pass through moment {moment}")]
    NotThrough { history: String, moment: MomentId },
    #[error("condition unsatisfiable at moment {0}: no history satisfies it")]
    ConditionUnsatisfiable(MomentId),
    #[error("stit operator in a path formula: {0}")]
    StitInPathFormula(String),
}

/// A set of histories of one model, stored as a bit set over history indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HistorySet(FixedBitSet);

impl HistorySet {
    pub fn empty(n: usize) -> Self {
        HistorySet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        HistorySet(b)
    }

    pub fn from_indices(n: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for i in items {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.0.insert(i);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_subset(&self, other: &HistorySet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &HistorySet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersection(&self, other: &HistorySet) -> HistorySet {
        let mut b = self.0.clone();
        b.intersect_with(&other.0);
        HistorySet(b)
    }

    pub fn union(&self, other: &HistorySet) -> HistorySet {
        let mut b = self.0.clone();
        b.union_with(&other.0);
        HistorySet(b)
    }

    pub fn difference(&self, other: &HistorySet) -> HistorySet {
        let mut b = self.0.clone();
        b.difference_with(&other.0);
        HistorySet(b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }
}

impl fmt::Debug for HistorySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A validated model with index structures for evaluation.
#[derive(Debug, Clone)]
pub struct TreeModel {
    source: ExplicitStitModel,
    moment_ids: Vec<MomentId>,
    moment_index: HashMap<MomentId, usize>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    children: Vec<Vec<usize>>,
    history_ids: Vec<String>,
    history_index: HashMap<String, usize>,
    paths: Vec<Vec<usize>>,
    values: Vec<Value>,
    through: Vec<HistorySet>,
    agents: Vec<String>,
    agent_index: HashMap<String, usize>,
    /// `choices[agent][moment]`; moments without an entry get `[H_m]`.
    choices: Vec<Vec<Vec<HistorySet>>>,
    /// `labels[history][position]`.
    labels: Vec<Vec<BTreeSet<String>>>,
    atom_set: HashSet<String>,
}

impl TreeModel {
    /// Validates and indexes a model.
    pub fn new(source: ExplicitStitModel) -> Result<Self, ModelError> {
        let violations = validate_model(&source);
        if !violations.is_empty() {
            return Err(ModelError::Invalid(violations));
        }
        Ok(Self::index(source))
    }

    pub fn from_json(text: &str) -> Result<Self, Box<dyn std::error::Error + Send + Sync>> {
        Ok(Self::new(ExplicitStitModel::from_json(text)?)?)
    }

    fn index(source: ExplicitStitModel) -> Self {
        let mut moment_ids: Vec<MomentId> = source.moments.iter().map(|m| m.id).collect();
        moment_ids.sort_unstable();
        let moment_index: HashMap<MomentId, usize> =
            moment_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let nm = moment_ids.len();
        let mut parent = vec![None; nm];
        let mut children = vec![Vec::new(); nm];
        for m in &source.moments {
            if let Some(p) = m.parent {
                let (c, p) = (moment_index[&m.id], moment_index[&p]);
                parent[c] = Some(p);
                children[p].push(c);
            }
        }
        for c in &mut children {
            c.sort_unstable();
        }
        let mut depth = vec![0; nm];
        for i in 0..nm {
            let (mut d, mut cur) = (0, i);
            while let Some(p) = parent[cur] {
                d += 1;
                cur = p;
            }
            depth[i] = d;
        }

        let history_ids: Vec<String> = source.histories.iter().map(|h| h.id.clone()).collect();
        let history_index: HashMap<String, usize> =
            history_ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let nh = history_ids.len();
        let paths: Vec<Vec<usize>> = source
            .histories
            .iter()
            .map(|h| h.moments.iter().map(|m| moment_index[m]).collect())
            .collect();
        let values = source.histories.iter().map(|h| h.value).collect();
        let mut through = vec![HistorySet::empty(nh); nm];
        for (h, path) in paths.iter().enumerate() {
            for &m in path {
                through[m].insert(h);
            }
        }

        let agents = source.agents.clone();
        let agent_index: HashMap<String, usize> =
            agents.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
        let mut choices: Vec<Vec<Vec<HistorySet>>> =
            (0..agents.len()).map(|_| through.iter().map(|t| vec![t.clone()]).collect()).collect();
        for c in &source.choices {
            let a = agent_index[&c.agent];
            let m = moment_index[&c.moment];
            choices[a][m] = c
                .actions
                .iter()
                .map(|k| HistorySet::from_indices(nh, k.iter().map(|h| history_index[h])))
                .collect();
        }

        let mut labels: Vec<Vec<BTreeSet<String>>> =
            paths.iter().map(|p| vec![BTreeSet::new(); p.len()]).collect();
        for l in &source.labels {
            let m = moment_index[&l.moment];
            let targets: Vec<usize> = if l.history == ALL_HISTORIES {
                through[m].iter().collect()
            } else {
                vec![history_index[&l.history]]
            };
            for h in targets {
                labels[h][depth[m]].extend(l.atoms.iter().cloned());
            }
        }
        let atom_set = source.atoms.iter().cloned().collect();

        TreeModel {
            source,
            moment_ids,
            moment_index,
            parent,
            depth,
            children,
            history_ids,
            history_index,
            paths,
            values,
            through,
            agents,
            agent_index,
            choices,
            labels,
            atom_set,
        }
    }

    pub fn source(&self) -> &ExplicitStitModel {
        &self.source
    }

    pub fn root(&self) -> MomentId {
        0
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn atoms(&self) -> &[String] {
        &self.source.atoms
    }

    pub fn moments(&self) -> &[MomentId] {
        &self.moment_ids
    }

    pub fn history_count(&self) -> usize {
        self.history_ids.len()
    }

    pub fn history_id(&self, h: usize) -> &str {
        &self.history_ids[h]
    }

    pub fn history_ids(&self) -> &[String] {
        &self.history_ids
    }

    pub fn ids(&self, set: &HistorySet) -> Vec<String> {
        set.iter().map(|h| self.history_ids[h].clone()).collect()
    }

    pub fn set_of<S: AsRef<str>>(&self, ids: &[S]) -> Result<HistorySet, ModelError> {
        let mut s = HistorySet::empty(self.history_count());
        for id in ids {
            s.insert(self.history(id.as_ref())?);
        }
        Ok(s)
    }

    pub fn history(&self, id: &str) -> Result<usize, ModelError> {
        self.history_index
            .get(id)
            .copied()
            .ok_or_else(|| ModelError::UnknownHistory(id.to_string()))
    }

    pub fn value(&self, h: usize) -> Value {
        self.values[h]
    }

    pub fn depth_of(&self, m: MomentId) -> Result<usize, ModelError> {
        Ok(self.depth[self.moment(m)?])
    }

    pub fn parent_of(&self, m: MomentId) -> Result<Option<MomentId>, ModelError> {
        Ok(self.parent[self.moment(m)?].map(|p| self.moment_ids[p]))
    }

    pub fn children_of(&self, m: MomentId) -> Result<Vec<MomentId>, ModelError> {
        Ok(self.children[self.moment(m)?].iter().map(|&c| self.moment_ids[c]).collect())
    }

    /// Moment ids along history `h`, root first.
    pub fn path_of(&self, h: usize) -> Vec<MomentId> {
        self.paths[h].iter().map(|&m| self.moment_ids[m]).collect()
    }

    /// Atoms labeling `h` at the given position (clamped to the leaf).
    pub fn label_at(&self, h: usize, pos: usize) -> &BTreeSet<String> {
        let l = &self.labels[h];
        &l[pos.min(l.len() - 1)]
    }

    fn moment(&self, m: MomentId) -> Result<usize, ModelError> {
        self.moment_index.get(&m).copied().ok_or(ModelError::UnknownMoment(m))
    }

    fn agent(&self, a: &str) -> Result<usize, ModelError> {
        self.agent_index
            .get(a)
            .copied()
            .ok_or_else(|| ModelError::UnknownAgent(a.to_string()))
    }

    /// `H_m`: the histories through `m`.
    pub fn histories_through(&self, m: MomentId) -> Result<HistorySet, ModelError> {
        Ok(self.through[self.moment(m)?].clone())
    }

    /// `Choice_α^m`.
    pub fn choice(&self, agent: &str, m: MomentId) -> Result<Vec<HistorySet>, ModelError> {
        Ok(self.choices[self.agent(agent)?][self.moment(m)?].clone())
    }

    /// `Choice_α^m(h)`: the action at `m` containing `h`.
    pub fn choice_of(&self, agent: &str, m: MomentId, h: usize) -> Result<HistorySet, ModelError> {
        let actions = &self.choices[self.agent(agent)?][self.moment(m)?];
        actions
            .iter()
            .find(|k| k.contains(h))
            .cloned()
            .ok_or_else(|| ModelError::NotThrough {
                history: self.history_ids[h].clone(),
                moment: m,
            })
    }
}
