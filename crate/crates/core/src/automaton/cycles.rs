//! The cycle automaton `U` and abstract schedules.
//!
//! `U` has a node for the initial state and one node per simple cycle
//! reachable from it. Its edges are finite paths of the source automaton:
//! entry paths from the initial state to a cycle, connecting paths between
//! cycles, and weight-0 links between cycles that share a state. A
//! schedule is a simple path of `U` from the initial node to a cycle node;
//! it stands for the executions that follow the entry path, go round each
//! listed cycle in turn and stay on the last cycle forever.

use std::collections::HashSet;

use serde::Serialize;

use super::{resource_limit, Accumulation, AutomatonError, Graph, Lasso, StitAutomaton};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UEdgeKind {
    Entry,
    Connector,
    Link,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UEdge {
    /// `U` node indices: 0 is the initial node, `i + 1` is `cycles[i]`.
    pub from: usize,
    pub to: usize,
    pub kind: UEdgeKind,
    /// Source-automaton transitions; empty for links and for the entry into
    /// a cycle through the initial state.
    pub path: Vec<usize>,
    /// Minimum weight on `path`; `Some(0)` for links, `None` for an empty
    /// entry path.
    pub weight: Option<Value>,
}

#[derive(Debug, Clone)]
pub struct CycleAutomaton {
    pub graph: Graph,
    /// Each simple cycle as transition indices, starting from its smallest
    /// state.
    pub cycles: Vec<Vec<usize>>,
    pub edges: Vec<UEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractSchedule {
    /// `U` edge indices, starting with an entry edge.
    pub steps: Vec<usize>,
    /// Cycle indices in visiting order.
    pub cycles: Vec<usize>,
    /// Combined value. Links act as the neutral element.
    pub value: Value,
}

fn cycle_states(g: &Graph, cycle: &[usize]) -> Vec<usize> {
    cycle.iter().map(|&t| g.edges[t].0).collect()
}

/// Simple cycles among the states reachable from the initial state, each
/// listed once.
pub fn simple_cycles(g: &Graph) -> Result<Vec<Vec<usize>>, AutomatonError> {
    let limit = resource_limit();
    let reach = g.reachable();
    let mut out = Vec::new();
    for s in (0..g.len()).filter(|&s| reach[s]) {
        let mut on_path = vec![false; g.len()];
        let mut path = Vec::new();
        fn dfs(g: &Graph, s: usize, at: usize, on_path: &mut [bool], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) -> Result<(), AutomatonError> {
            for &t in &g.out[at] {
                let to = g.edges[t].1;
                if to == s {
                    if out.len() >= limit {
                        return Err(AutomatonError::ResourceLimit { what: "simple cycles", limit });
                    }
                    path.push(t);
                    out.push(path.clone());
                    path.pop();
                } else if to > s && !on_path[to] {
                    on_path[to] = true;
                    path.push(t);
                    dfs(g, s, to, on_path, path, out, limit)?;
                    path.pop();
                    on_path[to] = false;
                }
            }
            Ok(())
        }
        on_path[s] = true;
        dfs(g, s, s, &mut on_path, &mut path, &mut out, limit)?;
    }
    Ok(out)
}

/// Simple paths from each state in `starts` that avoid `blocked` after the
/// first state and end on the first state in `targets`.
fn paths_into(g: &Graph, starts: &[usize], blocked: &[bool], targets: &[bool], limit: usize, out: &mut Vec<Vec<usize>>) -> Result<(), AutomatonError> {
    fn dfs(g: &Graph, at: usize, blocked: &[bool], targets: &[bool], seen: &mut [bool], path: &mut Vec<usize>, limit: usize, out: &mut Vec<Vec<usize>>) -> Result<(), AutomatonError> {
        for &t in &g.out[at] {
            let to = g.edges[t].1;
            if targets[to] {
                if out.len() >= limit {
                    return Err(AutomatonError::ResourceLimit { what: "cycle-automaton paths", limit });
                }
                path.push(t);
                out.push(path.clone());
                path.pop();
            } else if !blocked[to] && !seen[to] {
                seen[to] = true;
                path.push(t);
                dfs(g, to, blocked, targets, seen, path, limit, out)?;
                path.pop();
                seen[to] = false;
            }
        }
        Ok(())
    }
    for &s in starts {
        let mut seen = vec![false; g.len()];
        seen[s] = true;
        dfs(g, s, blocked, targets, &mut seen, &mut Vec::new(), limit, out)?;
    }
    Ok(())
}

fn path_weight(g: &Graph, path: &[usize]) -> Option<Value> {
    path.iter().map(|&t| g.edges[t].2).min()
}

pub fn build_cycle_automaton(t: &StitAutomaton) -> Result<CycleAutomaton, AutomatonError> {
    let g = t.checked_graph()?;
    let limit = resource_limit();
    let cycles = simple_cycles(&g)?;
    let members: Vec<Vec<bool>> = cycles
        .iter()
        .map(|c| {
            let mut m = vec![false; g.len()];
            for s in cycle_states(&g, c) {
                m[s] = true;
            }
            m
        })
        .collect();
    let mut edges = Vec::new();
    let push = |edges: &mut Vec<UEdge>, e: UEdge| {
        if edges.len() >= limit {
            return Err(AutomatonError::ResourceLimit { what: "cycle-automaton edges", limit });
        }
        edges.push(e);
        Ok(())
    };

    for (i, m) in members.iter().enumerate() {
        let mut paths = Vec::new();
        if m[g.init] {
            paths.push(Vec::new());
        } else {
            paths_into(&g, &[g.init], m, m, limit, &mut paths)?;
        }
        for path in paths {
            let weight = path_weight(&g, &path);
            push(&mut edges, UEdge { from: 0, to: i + 1, kind: UEdgeKind::Entry, path, weight })?;
        }
    }

    for (i, mi) in members.iter().enumerate() {
        for (j, mj) in members.iter().enumerate() {
            if i == j {
                continue;
            }
            let shared = (0..g.len()).any(|s| mi[s] && mj[s]);
            if shared {
                push(&mut edges, UEdge { from: i + 1, to: j + 1, kind: UEdgeKind::Link, path: vec![], weight: Some(Value::zero()) })?;
            }
            let starts: Vec<usize> = (0..g.len()).filter(|&s| mi[s] && !mj[s]).collect();
            let targets: Vec<bool> = (0..g.len()).map(|s| mj[s] && !mi[s]).collect();
            let blocked: Vec<bool> = (0..g.len()).map(|s| mi[s] || mj[s]).collect();
            let mut paths = Vec::new();
            paths_into(&g, &starts, &blocked, &targets, limit, &mut paths)?;
            for path in paths {
                let weight = path_weight(&g, &path);
                push(&mut edges, UEdge { from: i + 1, to: j + 1, kind: UEdgeKind::Connector, path, weight })?;
            }
        }
    }
    Ok(CycleAutomaton { graph: g, cycles, edges })
}

/// Every simple path of `U` from the initial node to a cycle node.
pub fn enumerate_abstract_schedules(u: &CycleAutomaton) -> Result<Vec<AbstractSchedule>, AutomatonError> {
    let limit = resource_limit();
    let mut out_edges = vec![Vec::new(); u.cycles.len() + 1];
    for (i, e) in u.edges.iter().enumerate() {
        out_edges[e.from].push(i);
    }
    let cycle_value: Vec<Value> = u.cycles.iter().map(|c| path_weight(&u.graph, c).expect("cycles are non-empty")).collect();

    struct Walk<'a> {
        u: &'a CycleAutomaton,
        out_edges: Vec<Vec<usize>>,
        cycle_value: Vec<Value>,
        visited: Vec<bool>,
        steps: Vec<usize>,
        limit: usize,
        out: Vec<AbstractSchedule>,
    }
    impl Walk<'_> {
        fn go(&mut self, node: usize, value: Option<Value>) -> Result<(), AutomatonError> {
            for k in 0..self.out_edges[node].len() {
                let ei = self.out_edges[node][k];
                let e = &self.u.edges[ei];
                if self.visited[e.to] {
                    continue;
                }
                let mut v = value;
                if e.kind != UEdgeKind::Link {
                    v = Accumulation::Min.fold(v.into_iter().chain(e.weight));
                }
                let v = Accumulation::Min.fold(v.into_iter().chain([self.cycle_value[e.to - 1]])).unwrap();
                if self.out.len() >= self.limit {
                    return Err(AutomatonError::ResourceLimit { what: "abstract schedules", limit: self.limit });
                }
                self.visited[e.to] = true;
                self.steps.push(ei);
                self.out.push(AbstractSchedule {
                    steps: self.steps.clone(),
                    cycles: self.steps.iter().map(|&s| self.u.edges[s].to - 1).collect(),
                    value: v,
                });
                self.go(e.to, Some(v))?;
                self.steps.pop();
                self.visited[e.to] = false;
            }
            Ok(())
        }
    }
    let mut visited = vec![false; u.cycles.len() + 1];
    visited[0] = true;
    let mut w = Walk { u, out_edges, cycle_value, visited, steps: vec![], limit, out: vec![] };
    w.go(0, None)?;
    Ok(w.out)
}

impl AbstractSchedule {
    /// A concrete execution following this schedule. Each cycle but the last
    /// is traversed once, moving along it to where the next step leaves.
    pub fn concrete(&self, u: &CycleAutomaton) -> Lasso {
        let g = &u.graph;
        let rotate_from = |cycle: &[usize], state: usize| -> Vec<usize> {
            let k = cycle.iter().position(|&t| g.edges[t].0 == state).expect("state lies on the cycle");
            cycle[k..].iter().chain(&cycle[..k]).copied().collect()
        };
        let mut walk: Vec<usize> = Vec::new();
        let mut at = g.init;
        let mut loop_part = Vec::new();
        for (i, &si) in self.steps.iter().enumerate() {
            let e = &u.edges[si];
            let cycle = &u.cycles[e.to - 1];
            let leave_at = match e.kind {
                UEdgeKind::Entry => None,
                UEdgeKind::Connector => Some(g.edges[e.path[0]].0),
                UEdgeKind::Link => {
                    let next: HashSet<usize> = cycle_states(g, cycle).into_iter().collect();
                    let prev = rotate_from(&u.cycles[e.from - 1], at);
                    Some(prev.iter().map(|&t| g.edges[t].0).find(|s| next.contains(s)).expect("linked cycles share a state"))
                }
            };
            if let Some(target) = leave_at {
                let prev = rotate_from(&u.cycles[e.from - 1], at);
                walk.extend(&prev);
                walk.extend(prev.iter().take_while(|&&t| g.edges[t].0 != target));
                at = target;
            }
            walk.extend(&e.path);
            if let Some(&last) = e.path.last() {
                at = g.edges[last].1;
            }
            if i + 1 == self.steps.len() {
                loop_part = rotate_from(cycle, at);
            }
        }
        Lasso { stem: walk, cycle: loop_part }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::t0;
    use crate::automaton::{extremal_values, Transition};

    fn tr(from: &str, action: &str, to: &str, w: i64) -> Transition {
        Transition { from: from.into(), action: action.into(), to: to.into(), weight: Value::int(w) }
    }

    fn automaton(states: &[&str], transitions: Vec<Transition>) -> StitAutomaton {
        let mut actions: Vec<String> = transitions.iter().map(|t| t.action.clone()).collect();
        actions.dedup();
        actions.sort();
        actions.dedup();
        StitAutomaton {
            states: states.iter().map(|s| s.to_string()).collect(),
            init: states[0].into(),
            final_states: vec![],
            actions,
            transitions,
            labels: Default::default(),
            accumulation: Accumulation::Min,
        }
    }

    #[test]
    fn single_self_loop() {
        let t = automaton(&["q0", "q1"], vec![tr("q0", "k", "q1", 3), tr("q1", "k", "q1", 5)]);
        let u = build_cycle_automaton(&t).unwrap();
        assert_eq!(u.cycles.len(), 1);
        assert_eq!(u.edges.len(), 1);
        assert_eq!(u.edges[0].kind, UEdgeKind::Entry);
        let s = enumerate_abstract_schedules(&u).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].value, Value::int(3));
    }

    #[test]
    fn t0_cycles_are_isolated() {
        let u = build_cycle_automaton(&t0()).unwrap();
        assert_eq!(u.cycles.len(), 2);
        assert!(u.edges.iter().all(|e| e.kind == UEdgeKind::Entry));
        let mut values: Vec<Value> = enumerate_abstract_schedules(&u).unwrap().iter().map(|s| s.value).collect();
        values.sort();
        assert_eq!(values, vec![Value::int(2), Value::int(4)]);
        let e = extremal_values(&t0()).unwrap();
        assert_eq!((values[0], values[1]), (e.lo, e.hi));
    }

    #[test]
    fn shared_state_links_both_ways() {
        let t = automaton(&["q0", "q1"], vec![tr("q0", "a", "q0", 4), tr("q0", "b", "q1", 2), tr("q1", "b", "q0", 6)]);
        let u = build_cycle_automaton(&t).unwrap();
        assert_eq!(u.cycles.len(), 2);
        let links: Vec<(usize, usize)> = u.edges.iter().filter(|e| e.kind == UEdgeKind::Link).map(|e| (e.from, e.to)).collect();
        assert_eq!(links, vec![(1, 2), (2, 1)]);
        assert!(u.edges.iter().filter(|e| e.kind == UEdgeKind::Link).all(|e| e.weight == Some(Value::zero())));
        let schedules = enumerate_abstract_schedules(&u).unwrap();
        let mut shapes: Vec<Vec<usize>> = schedules.iter().map(|s| s.cycles.clone()).collect();
        shapes.sort();
        assert_eq!(shapes, vec![vec![0], vec![0, 1], vec![1], vec![1, 0]]);
        for s in &schedules {
            let l = s.concrete(&u);
            assert!(l.is_valid(&u.graph));
            assert_eq!(l.bottleneck(&u.graph), s.value);
        }
        let by_shape = |c: &[usize]| schedules.iter().find(|s| s.cycles == c).unwrap().value;
        assert_eq!(by_shape(&[0, 1]), by_shape(&[1, 0]));
    }

    #[test]
    fn connector_between_disjoint_cycles() {
        let t = automaton(
            &["q0", "q1", "q2"],
            vec![tr("q0", "a", "q0", 5), tr("q0", "b", "q1", 3), tr("q1", "b", "q2", 4), tr("q2", "b", "q2", 6)],
        );
        let u = build_cycle_automaton(&t).unwrap();
        let connectors: Vec<&UEdge> = u.edges.iter().filter(|e| e.kind == UEdgeKind::Connector).collect();
        assert_eq!(connectors.len(), 1);
        assert_eq!(connectors[0].weight, Some(Value::int(3)));
        let schedules = enumerate_abstract_schedules(&u).unwrap();
        assert_eq!(schedules.len(), 3);
        for s in &schedules {
            let l = s.concrete(&u);
            assert!(l.is_valid(&u.graph), "{s:?} {l:?}");
            assert_eq!(l.bottleneck(&u.graph), s.value);
        }
    }

    #[test]
    fn schedules_agree_with_extremes_on_random_automata() {
        use crate::automaton::random::{random_automaton, RandomAutomatonConfig};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let mut checked = 0;
        for _ in 0..300 {
            let t = random_automaton(&mut rng, &RandomAutomatonConfig::default());
            let u = build_cycle_automaton(&t).unwrap();
            let schedules = match enumerate_abstract_schedules(&u) {
                Err(AutomatonError::ResourceLimit { .. }) => continue,
                r => r.unwrap(),
            };
            checked += 1;
            for s in &schedules {
                let l = s.concrete(&u);
                assert!(l.is_valid(&u.graph), "{}", t.to_json());
                assert_eq!(l.bottleneck(&u.graph), s.value, "{}", t.to_json());
            }
            let e = extremal_values(&t).unwrap();
            assert_eq!(schedules.iter().map(|s| s.value).max(), Some(e.hi), "{}", t.to_json());
            assert_eq!(schedules.iter().map(|s| s.value).min(), Some(e.lo), "{}", t.to_json());
        }
        assert!(checked > 250);
    }
}
