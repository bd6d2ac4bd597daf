//! Extremal bottleneck values over the infinite executions of an automaton.

use serde::Serialize;

use super::{Accumulation, AutomatonError, Graph, StitAutomaton};
use crate::value::Value;

/// Smallest and largest bottleneck over all infinite executions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Extremes {
    pub lo: Value,
    pub hi: Value,
}

/// An execution as a stem followed by a loop repeated forever, both as
/// transition indices of a [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub stem: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Lasso {
    /// Checks that the stem starts at the initial state, the transitions
    /// chain, and the loop is non-empty and closes.
    pub fn is_valid(&self, g: &Graph) -> bool {
        if self.cycle.is_empty() {
            return false;
        }
        let mut at = g.init;
        for &t in self.stem.iter().chain(&self.cycle) {
            if g.edges[t].0 != at {
                return false;
            }
            at = g.edges[t].1;
        }
        g.edges[self.cycle[0]].0 == at
    }

    /// Minimum weight over every transition the execution takes.
    pub fn bottleneck(&self, g: &Graph) -> Value {
        self.stem.iter().chain(&self.cycle).map(|&t| g.edges[t].2).min().expect("loop is non-empty")
    }

    /// State visited at each position of the unfolded execution, for
    /// `len` positions.
    pub fn states(&self, g: &Graph, len: usize) -> Vec<usize> {
        let mut out = vec![g.init];
        let mut trs = self.stem.iter().chain(self.cycle.iter().cycle());
        while out.len() < len {
            out.push(g.edges[*trs.next().unwrap()].1);
        }
        out.truncate(len);
        out
    }
}

/// True if the edges accepted by `keep` contain a cycle reachable from the
/// initial state along kept edges.
fn has_reachable_cycle(g: &Graph, keep: impl Fn(usize) -> bool + Copy) -> bool {
    let reach = g.reachable_by(g.init, keep);
    let mut indegree = vec![0usize; g.len()];
    for (t, e) in g.edges.iter().enumerate() {
        if keep(t) && reach[e.0] {
            indegree[e.1] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..g.len()).filter(|&s| reach[s] && indegree[s] == 0).collect();
    let mut removed = 0;
    while let Some(s) = stack.pop() {
        removed += 1;
        for &t in &g.out[s] {
            if keep(t) {
                let to = g.edges[t].1;
                indegree[to] -= 1;
                if indegree[to] == 0 {
                    stack.push(to);
                }
            }
        }
    }
    removed < reach.iter().filter(|&&r| r).count()
}

/// Exact `[ℓ, u]` for `min` accumulation.
///
/// `u` is the largest weight `w` such that the transitions of weight at
/// least `w` admit a reachable cycle. `ℓ` is the smallest weight of a
/// reachable transition: with no reachable dead end, every reachable
/// transition extends to an infinite execution.
pub fn extremal_values(t: &StitAutomaton) -> Result<Extremes, AutomatonError> {
    if t.accumulation != Accumulation::Min {
        return Err(AutomatonError::UnsupportedAccumulation { found: t.accumulation, operation: "extremal value computation" });
    }
    let g = t.checked_graph()?;
    let reach = g.reachable();
    let mut weights: Vec<Value> = g.edges.iter().filter(|e| reach[e.0]).map(|e| e.2).collect();
    weights.sort_unstable();
    weights.dedup();
    let lo = weights[0];
    let hi = *weights
        .iter()
        .rev()
        .find(|&&w| has_reachable_cycle(&g, |tr| g.edges[tr].2 >= w))
        .expect("the unrestricted automaton has a reachable cycle");
    Ok(Extremes { lo, hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::t0;
    use crate::automaton::{restrict_first_action, Transition};

    fn tr(from: &str, action: &str, to: &str, w: i64) -> Transition {
        Transition { from: from.into(), action: action.into(), to: to.into(), weight: Value::int(w) }
    }

    #[test]
    fn t0_branches() {
        let k1 = extremal_values(&restrict_first_action(&t0(), "K1").unwrap()).unwrap();
        assert_eq!((k1.lo, k1.hi), (Value::int(4), Value::int(4)));
        let k2 = extremal_values(&restrict_first_action(&t0(), "K2").unwrap()).unwrap();
        assert_eq!((k2.lo, k2.hi), (Value::int(2), Value::int(2)));
    }

    #[test]
    fn max_reachable_weight_overestimates() {
        let t = StitAutomaton {
            states: vec!["q0".into(), "q1".into(), "q2".into()],
            init: "q0".into(),
            final_states: vec![],
            actions: vec!["K".into()],
            transitions: vec![tr("q0", "K", "q1", 10), tr("q1", "K", "q1", 1), tr("q0", "K", "q2", 2), tr("q2", "K", "q2", 3)],
            labels: Default::default(),
            accumulation: Accumulation::Min,
        };
        let e = extremal_values(&t).unwrap();
        assert_eq!(e.hi, Value::int(2));
        assert_eq!(e.lo, Value::int(1));
    }

    #[test]
    fn constant_weights() {
        let mut t = t0();
        for x in &mut t.transitions {
            x.weight = Value::new(7, 3);
        }
        let e = extremal_values(&t).unwrap();
        assert_eq!((e.lo, e.hi), (Value::new(7, 3), Value::new(7, 3)));
    }

    #[test]
    fn sum_is_rejected() {
        let mut t = t0();
        t.accumulation = Accumulation::Sum;
        assert!(matches!(extremal_values(&t), Err(AutomatonError::UnsupportedAccumulation { .. })));
    }

    #[test]
    fn lasso_helpers() {
        let g = t0().graph().unwrap();
        let l = Lasso { stem: vec![0], cycle: vec![1] };
        assert!(l.is_valid(&g));
        assert_eq!(l.bottleneck(&g), Value::int(4));
        assert_eq!(l.states(&g, 4), vec![0, 1, 1, 1]);
        assert!(!Lasso { stem: vec![], cycle: vec![1] }.is_valid(&g));
    }
}
