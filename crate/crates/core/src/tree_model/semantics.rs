//! The satisfaction relation over explicit models: CTL* with stutter-extended
//! leaves, `cstit`/`dstit`, dominance and conditional oughts, and group
//! oughts over intersected member choices.

use std::collections::HashSet;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use super::{HistorySet, ModelError, MomentId, TreeModel};
use crate::formula::{Agents, Formula, Obligation, OughtStatement, Statement};

/// Actions at one moment, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSet {
    pub moment: MomentId,
    pub agents: Agents,
    pub actions: Vec<HistorySet>,
}

impl ActionSet {
    pub fn contains(&self, k: &HistorySet) -> bool {
        self.actions.contains(k)
    }

    pub fn union(&self, n: usize) -> HistorySet {
        self.actions.iter().fold(HistorySet::empty(n), |acc, k| acc.union(k))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InferenceWitness {
    pub action: Vec<String>,
    pub history: String,
    pub moment: MomentId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InferenceReport {
    pub holds: bool,
    pub witnesses: Vec<InferenceWitness>,
    /// One entry per optimal action that has no witness.
    pub failures: Vec<String>,
}

fn warn_unknown_atom(name: &str) {
    static WARNED: OnceLock<Mutex<HashSet<String>>> = OnceLock::new();
    let mut set = WARNED.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
    if set.insert(name.to_string()) {
        log::warn!("atom `{name}` is not declared by the model; treating it as false");
    }
}

impl TreeModel {
    fn last(&self, h: usize) -> usize {
        self.paths[h].len() - 1
    }

    fn moment_at(&self, h: usize, pos: usize) -> usize {
        self.paths[h][pos.min(self.last(h))]
    }

    fn check_through(&self, m: MomentId, h: &str) -> Result<(usize, usize), ModelError> {
        let mi = self.moment(m)?;
        let hi = self.history(h)?;
        if !self.through[mi].contains(hi) {
            return Err(ModelError::NotThrough {
                history: h.to_string(),
                moment: m,
            });
        }
        Ok((mi, hi))
    }

    pub(crate) fn eval(&self, f: &Formula, h: usize, pos: usize) -> Result<bool, ModelError> {
        use Formula::*;
        let pos = pos.min(self.last(h));
        let last = self.last(h);
        Ok(match f {
            Atom(a) => {
                if !self.atom_set.contains(a) {
                    warn_unknown_atom(a);
                }
                self.labels[h][pos].contains(a)
            }
            True => true,
            False => false,
            Not(a) => !self.eval(a, h, pos)?,
            And(a, b) => self.eval(a, h, pos)? && self.eval(b, h, pos)?,
            Or(a, b) => self.eval(a, h, pos)? || self.eval(b, h, pos)?,
            Implies(a, b) => !self.eval(a, h, pos)? || self.eval(b, h, pos)?,
            Next(a) => self.eval(a, h, pos + 1)?,
            NextPow(t, a) => self.eval(a, h, pos + *t as usize)?,
            Until(a, b) => {
                for k in pos..=last {
                    if self.eval(b, h, k)? {
                        return Ok(true);
                    }
                    if !self.eval(a, h, k)? {
                        return Ok(false);
                    }
                }
                false
            }
            Release(a, b) => {
                for k in pos..=last {
                    if !self.eval(b, h, k)? {
                        return Ok(false);
                    }
                    if self.eval(a, h, k)? {
                        return Ok(true);
                    }
                }
                true
            }
            Eventually(a) => {
                for k in pos..=last {
                    if self.eval(a, h, k)? {
                        return Ok(true);
                    }
                }
                false
            }
            Always(a) => {
                for k in pos..=last {
                    if !self.eval(a, h, k)? {
                        return Ok(false);
                    }
                }
                true
            }
            EventuallyBounded(n, m, a) => {
                for k in *n..=*m {
                    if self.eval(a, h, pos + k as usize)? {
                        return Ok(true);
                    }
                }
                false
            }
            BoundedRelease(n, psi, phi) => {
                for k in 0..=*n as usize {
                    if self.eval(psi, h, pos + k)? {
                        return Ok(true);
                    }
                    if !self.eval(phi, h, pos + k)? {
                        return Ok(false);
                    }
                }
                true
            }
            ForallPaths(a) => {
                let m = self.moment_at(h, pos);
                for h2 in self.through[m].iter() {
                    if !self.eval(a, h2, pos)? {
                        return Ok(false);
                    }
                }
                true
            }
            ExistsPaths(a) => {
                let m = self.moment_at(h, pos);
                for h2 in self.through[m].iter() {
                    if self.eval(a, h2, pos)? {
                        return Ok(true);
                    }
                }
                false
            }
            Cstit(agent, body) => self.stit(agent, body, h, pos, false)?,
            Dstit(agent, body) => self.stit(agent, body, h, pos, true)?,
        })
    }

    fn stit(&self, agent: &str, body: &Obligation, h: usize, pos: usize, deliberative: bool) -> Result<bool, ModelError> {
        let m = self.moment_at(h, pos);
        let a = self.agent(agent)?;
        let ext = self.extension_idx(body, m)?;
        let k = self.choices[a][m].iter().find(|k| k.contains(h)).expect("validated partition");
        Ok(k.is_subset(&ext) && (!deliberative || ext != self.through[m]))
    }

    pub(crate) fn eval_obligation(&self, o: &Obligation, h: usize, pos: usize) -> Result<bool, ModelError> {
        match o {
            Obligation::Plain(f) => self.eval(f, h, pos),
            Obligation::DstitOf(agent, body) => self.stit(agent, body, h, pos, true),
            Obligation::Negated(body) => Ok(!self.eval_obligation(body, h, pos)?),
        }
    }

    fn extension_idx(&self, o: &Obligation, m: usize) -> Result<HistorySet, ModelError> {
        let mut out = HistorySet::empty(self.history_count());
        for h in self.through[m].iter() {
            if self.eval_obligation(o, h, self.depth[m])? {
                out.insert(h);
            }
        }
        Ok(out)
    }

    /// `|A|_m`: the histories through `m` where `A` holds at `m`.
    pub fn extension(&self, m: MomentId, o: &Obligation) -> Result<HistorySet, ModelError> {
        self.extension_idx(o, self.moment(m)?)
    }

    /// `|φ|_m` for any formula, including ones with stit operators.
    pub fn formula_extension(&self, m: MomentId, f: &Formula) -> Result<HistorySet, ModelError> {
        let mi = self.moment(m)?;
        let mut out = HistorySet::empty(self.history_count());
        for h in self.through[mi].iter() {
            if self.eval(f, h, self.depth[mi])? {
                out.insert(h);
            }
        }
        Ok(out)
    }

    /// CTL* satisfaction of a stit-free formula at `m/h`.
    pub fn sat_path(&self, m: MomentId, h: &str, f: &Formula) -> Result<bool, ModelError> {
        if f.has_stit() {
            return Err(ModelError::StitInPathFormula(f.to_string()));
        }
        self.sat_formula(m, h, f)
    }

    pub fn sat_formula(&self, m: MomentId, h: &str, f: &Formula) -> Result<bool, ModelError> {
        let (mi, hi) = self.check_through(m, h)?;
        self.eval(f, hi, self.depth[mi])
    }

    pub fn sat_obligation(&self, m: MomentId, h: &str, o: &Obligation) -> Result<bool, ModelError> {
        let (mi, hi) = self.check_through(m, h)?;
        self.eval_obligation(o, hi, self.depth[mi])
    }

    /// Dominance or conditional ought at `m`; no history is involved.
    pub fn sat_ought(&self, m: MomentId, o: &OughtStatement) -> Result<bool, ModelError> {
        let optimal = self.optimal_actions(&o.agents, m, o.condition.as_ref())?;
        let ext = self.extension(m, &o.body)?;
        Ok(optimal.actions.iter().all(|k| k.is_subset(&ext)))
    }

    pub fn sat_statement(&self, m: MomentId, h: &str, s: &Statement) -> Result<bool, ModelError> {
        match s {
            Statement::Formula(f) => self.sat_formula(m, h, f),
            Statement::Obligation(o) => self.sat_obligation(m, h, o),
            Statement::Ought(o) => {
                self.check_through(m, h)?;
                self.sat_ought(m, o)
            }
        }
    }

    fn selections(&self, agents: &[usize], m: usize) -> Vec<HistorySet> {
        let mut acc = vec![self.through[m].clone()];
        for &a in agents {
            let mut next = Vec::new();
            for s in &acc {
                for k in &self.choices[a][m] {
                    let i = s.intersection(k);
                    if !i.is_empty() {
                        next.push(i);
                    }
                }
            }
            acc = next;
        }
        acc
    }

    fn member_indices(&self, members: &[&str]) -> Result<Vec<usize>, ModelError> {
        members.iter().map(|a| self.agent(a)).collect()
    }

    /// Group actions: non-empty intersections of one action per member.
    pub fn group_choice(&self, members: &[&str], m: MomentId) -> Result<Vec<HistorySet>, ModelError> {
        let idx = self.member_indices(members)?;
        Ok(self.selections(&idx, self.moment(m)?))
    }

    /// `State^m` for the given focal agents: non-empty intersections of one
    /// action per remaining agent, or `{H_m}` when nobody remains.
    pub fn background_states(&self, members: &[&str], m: MomentId) -> Result<Vec<HistorySet>, ModelError> {
        let idx = self.member_indices(members)?;
        let others: Vec<usize> = (0..self.agents.len()).filter(|a| !idx.contains(a)).collect();
        Ok(self.selections(&others, self.moment(m)?))
    }

    /// `K ⪯ K'`: within every background state, every value in `K` is at most
    /// every value in `K'`. Empty sides compare vacuously.
    pub fn weakly_below(&self, k: &HistorySet, k2: &HistorySet, states: &[HistorySet]) -> bool {
        states.iter().all(|s| {
            let hi = k.intersection(s).iter().map(|h| self.values[h]).max();
            let lo = k2.intersection(s).iter().map(|h| self.values[h]).min();
            match (hi, lo) {
                (Some(hi), Some(lo)) => hi <= lo,
                _ => true,
            }
        })
    }

    /// `K ≺ K'`.
    pub fn strictly_below(&self, k: &HistorySet, k2: &HistorySet, states: &[HistorySet]) -> bool {
        self.weakly_below(k, k2, states) && !self.weakly_below(k2, k, states)
    }

    /// `Optimal^m` for a single agent or a group, optionally conditioned on
    /// `B`: comparisons are then restricted to `|B|_m` and actions disjoint
    /// from `|B|_m` are not candidates.
    pub fn optimal_actions(&self, agents: &Agents, m: MomentId, condition: Option<&Obligation>) -> Result<ActionSet, ModelError> {
        let members = agents.members();
        let candidates = self.group_choice(&members, m)?;
        let states = self.background_states(&members, m)?;
        let restrict = match condition {
            Some(b) => {
                let ext = self.extension(m, b)?;
                if ext.is_empty() {
                    return Err(ModelError::ConditionUnsatisfiable(m));
                }
                Some(ext)
            }
            None => None,
        };
        let view: Vec<(HistorySet, HistorySet)> = candidates
            .into_iter()
            .map(|k| {
                let r = match &restrict {
                    Some(x) => k.intersection(x),
                    None => k.clone(),
                };
                (k, r)
            })
            .filter(|(_, r)| !r.is_empty())
            .collect();
        let actions = view
            .iter()
            .filter(|(_, r)| !view.iter().any(|(_, r2)| self.strictly_below(r, r2, &states)))
            .map(|(k, _)| k.clone())
            .collect();
        Ok(ActionSet {
            moment: m,
            agents: agents.clone(),
            actions,
        })
    }

    /// Checks the sufficient structure for an agent to carry both the
    /// right-of-way prohibition and the no-waiting ought at `m`: every
    /// optimal action has at least two histories, one of which violates
    /// `G(!g -> !p)` and is excluded from every optimal action at a later
    /// moment where the agent has a real choice.
    pub fn check_inference_condition(&self, agent: &str, m: MomentId, g: &str, p: &str) -> Result<InferenceReport, ModelError> {
        let mi = self.moment(m)?;
        let prohibition = Formula::atom(g).not().implies(Formula::atom(p).not()).always();
        let optimal = self.optimal_actions(&Agents::single(agent), m, None)?;
        let a = self.agent(agent)?;
        let mut report = InferenceReport {
            holds: true,
            witnesses: Vec::new(),
            failures: Vec::new(),
        };
        'actions: for k in &optimal.actions {
            let ids = self.ids(k);
            if k.len() < 2 {
                report.failures.push(format!("{{{}}} has fewer than two histories", ids.join(",")));
                report.holds = false;
                continue;
            }
            for h in k.iter() {
                if self.eval(&prohibition, h, self.depth[mi])? {
                    continue;
                }
                for pos in self.depth[mi] + 1..=self.last(h) {
                    let later = self.paths[h][pos];
                    if self.choices[a][later].len() < 2 {
                        continue;
                    }
                    let later_id = self.moment_ids[later];
                    let opt = self.optimal_actions(&Agents::single(agent), later_id, None)?;
                    if !opt.union(self.history_count()).contains(h) {
                        report.witnesses.push(InferenceWitness {
                            action: ids.clone(),
                            history: self.history_ids[h].clone(),
                            moment: later_id,
                        });
                        continue 'actions;
                    }
                }
            }
            report.failures.push(format!("{{{}}} has no qualifying history", ids.join(",")));
            report.holds = false;
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::rss::fixtures;

    fn fig1() -> TreeModel {
        TreeModel::new(fixtures::fig1()).unwrap()
    }

    fn ext(m: &TreeModel, at: MomentId, text: &str) -> Vec<String> {
        m.ids(&m.formula_extension(at, &parse_formula(text).unwrap()).unwrap())
    }

    #[test]
    fn atom_extension() {
        assert_eq!(ext(&fig1(), 0, "A"), ["h1", "h2", "h3", "h5", "h6"]);
        assert_eq!(ext(&fig1(), 1, "A"), ["h1", "h2", "h3"]);
    }

    #[test]
    fn dstit_extension() {
        assert_eq!(ext(&fig1(), 0, "[alpha dstit: A]"), ["h5", "h6"]);
        assert_eq!(ext(&fig1(), 0, "[alpha cstit: A]"), ["h5", "h6"]);
        assert!(ext(&fig1(), 0, "[alpha dstit: true]").is_empty());
    }

    #[test]
    fn true_is_every_history() {
        let m = fig1();
        assert_eq!(m.formula_extension(0, &Formula::True).unwrap(), m.histories_through(0).unwrap());
        assert_eq!(ext(&m, 2, "true"), ["h5", "h6"]);
    }

    #[test]
    fn conditional_ought_on_an_unsatisfiable_condition() {
        let m = fig1();
        let o = OughtStatement::conditional("alpha", Obligation::atom("A"), Obligation::plain(Formula::False));
        assert!(matches!(m.sat_ought(0, &o), Err(ModelError::ConditionUnsatisfiable(0))));
    }

    #[test]
    fn inference_condition_needs_labels() {
        let r = fig1().check_inference_condition("alpha", 0, "g_alpha", "p_alpha").unwrap();
        assert!(!r.holds);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn inference_condition_rejects_singleton_actions() {
        let m = TreeModel::new(fixtures::avoidable()).unwrap();
        let r = m.check_inference_condition("alpha", 0, "g_alpha", "p_alpha").unwrap();
        assert!(!r.holds);
        assert!(r.failures[0].contains("fewer than two"), "{:?}", r.failures);
    }

    #[test]
    fn fig3_witness() {
        let m = TreeModel::new(fixtures::fig3()).unwrap();
        let r = m.check_inference_condition("alpha", 0, "g_alpha", "p_alpha").unwrap();
        assert!(r.holds);
        assert_eq!(r.witnesses[0].history, "h_tilde");
        assert_eq!(r.witnesses[0].moment, 1);
    }
}
