//! Product of a transition system with a Büchi automaton and the search
//! for accepting lassos.

use std::collections::{HashMap, VecDeque};

use super::ltl::BuchiAutomaton;
use super::{LassoWord, TransitionSystem};

pub(crate) struct Product {
    /// `(system state, automaton state)` per node.
    nodes: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    initial: Vec<usize>,
    scc: Vec<usize>,
    accepting_scc: Vec<bool>,
}

impl Product {
    pub(crate) fn build(ts: &TransitionSystem, ba: &BuchiAutomaton, starts: &[usize]) -> Product {
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        let mut intern = |key: (usize, usize), nodes: &mut Vec<(usize, usize)>, succ: &mut Vec<Vec<usize>>, queue: &mut VecDeque<usize>| {
            *index.entry(key).or_insert_with(|| {
                nodes.push(key);
                succ.push(Vec::new());
                queue.push_back(nodes.len() - 1);
                nodes.len() - 1
            })
        };
        let mut initial = Vec::new();
        for &s in starts {
            for &q in &ba.initial {
                if ba.states[q].admits(&ts.labels[s]) {
                    initial.push(intern((s, q), &mut nodes, &mut succ, &mut queue));
                }
            }
        }
        while let Some(n) = queue.pop_front() {
            let (s, q) = nodes[n];
            for &s2 in &ts.succ[s] {
                for &q2 in &ba.succ[q] {
                    if ba.states[q2].admits(&ts.labels[s2]) {
                        let m = intern((s2, q2), &mut nodes, &mut succ, &mut queue);
                        succ[n].push(m);
                    }
                }
            }
        }
        let scc = tarjan(&succ);
        let n_scc = scc.iter().copied().max().map_or(0, |m| m + 1);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_scc];
        for (n, &c) in scc.iter().enumerate() {
            members[c].push(n);
        }
        let accepting_scc = members
            .iter()
            .map(|ms| {
                let nontrivial = ms.len() > 1 || succ[ms[0]].contains(&ms[0]);
                nontrivial && ba.accepting.iter().all(|f| ms.iter().any(|&n| f[nodes[n].1]))
            })
            .collect();
        Product { nodes, succ, initial, scc, accepting_scc }
    }

    /// Nodes from which an accepting cycle is reachable.
    pub(crate) fn good(&self) -> Vec<bool> {
        let mut pred = vec![Vec::new(); self.nodes.len()];
        for (n, out) in self.succ.iter().enumerate() {
            for &m in out {
                pred[m].push(n);
            }
        }
        let mut good: Vec<bool> = self.scc.iter().map(|&c| self.accepting_scc[c]).collect();
        let mut stack: Vec<usize> = (0..self.nodes.len()).filter(|&n| good[n]).collect();
        while let Some(n) = stack.pop() {
            for &p in &pred[n] {
                if !good[p] {
                    good[p] = true;
                    stack.push(p);
                }
            }
        }
        good
    }

    /// System states whose initial product nodes reach an accepting cycle.
    pub(crate) fn satisfying_starts(&self, n_states: usize) -> Vec<bool> {
        let good = self.good();
        let mut out = vec![false; n_states];
        for &i in &self.initial {
            if good[i] {
                out[self.nodes[i].0] = true;
            }
        }
        out
    }

    /// Shortest path from some node of `starts` to a node satisfying
    /// `target`, staying inside `allowed`; both ends included.
    fn bfs(&self, starts: &[usize], allowed: impl Fn(usize) -> bool, target: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        let mut parent: HashMap<usize, Option<usize>> = HashMap::new();
        let mut queue = VecDeque::new();
        for &s in starts {
            if allowed(s) && !parent.contains_key(&s) {
                parent.insert(s, None);
                queue.push_back(s);
            }
        }
        while let Some(n) = queue.pop_front() {
            if target(n) {
                let mut path = vec![n];
                let mut at = n;
                while let Some(Some(p)) = parent.get(&at) {
                    path.push(*p);
                    at = *p;
                }
                path.reverse();
                return Some(path);
            }
            for &m in &self.succ[n] {
                if allowed(m) && !parent.contains_key(&m) {
                    parent.insert(m, Some(n));
                    queue.push_back(m);
                }
            }
        }
        None
    }

    /// An accepting lasso from an initial node, as system states.
    pub(crate) fn lasso(&self, ba: &BuchiAutomaton) -> Option<(Vec<usize>, Vec<usize>)> {
        let in_acc = |n: usize| self.accepting_scc[self.scc[n]];
        let entry = self.bfs(&self.initial, |_| true, in_acc)?;
        let e = *entry.last().unwrap();
        let comp = self.scc[e];
        let inside = |n: usize| self.scc[n] == comp;
        let mut cycle = vec![e];
        let mut at = e;
        for f in &ba.accepting {
            if f[self.nodes[at].1] {
                continue;
            }
            let piece = self.bfs(&self.succ[at], inside, |n| f[self.nodes[n].1])?;
            at = *piece.last().unwrap();
            cycle.extend(piece);
        }
        let back = self.bfs(&self.succ[at], inside, |n| n == e)?;
        cycle.extend(&back[..back.len() - 1]);
        let proj = |v: &[usize]| v.iter().map(|&n| self.nodes[n].0).collect();
        Some((proj(&entry[..entry.len() - 1]), proj(&cycle)))
    }
}

/// Strongly connected component index per node (iterative Tarjan).
fn tarjan(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut k)) = call.last_mut() {
            if *k < succ[v].len() {
                let w = succ[v][*k];
                *k += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

impl BuchiAutomaton {
    /// Whether the automaton accepts the ultimately periodic word `w`.
    pub fn accepts(&self, w: &LassoWord) -> bool {
        let n = w.stem.len() + w.cycle.len();
        let ts = TransitionSystem {
            states: (0..n).map(|i| i.to_string()).collect(),
            initial: 0,
            succ: (0..n).map(|i| vec![if i + 1 < n { i + 1 } else { w.stem.len() }]).collect(),
            labels: w.stem.iter().chain(&w.cycle).cloned().collect(),
        };
        Product::build(&ts, self, &[0]).satisfying_starts(n)[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tarjan_components() {
        let succ = vec![vec![1], vec![2], vec![0, 3], vec![3], vec![]];
        let c = tarjan(&succ);
        assert_eq!(c[0], c[1]);
        assert_eq!(c[1], c[2]);
        assert_ne!(c[2], c[3]);
        assert_ne!(c[3], c[4]);
    }
}
