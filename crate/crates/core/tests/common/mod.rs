//! Brute-force oracles shared by the integration tests. Everything here is
//! written directly from the definitions and shares no code with the
//! library's checkers.

#![allow(dead_code)]

pub mod suites;

use std::collections::BTreeSet;

use deontic_mc::formula::Formula;

pub type Letter = BTreeSet<String>;

/// An ultimately periodic word: `letters[..loop_start]` then
/// `letters[loop_start..]` forever.
pub struct Word<'a> {
    pub letters: &'a [Letter],
    pub loop_start: usize,
}

impl Word<'_> {
    fn next(&self, i: usize) -> usize {
        if i + 1 < self.letters.len() {
            i + 1
        } else {
            self.loop_start
        }
    }

    fn at(&self, i: usize, k: u32) -> usize {
        (0..k).fold(i, |j, _| self.next(j))
    }

    /// Positions `i, i+1, …` for long enough to see every future position.
    fn future(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let mut j = i;
        let mut first = true;
        std::iter::from_fn(move || {
            if !first {
                j = self.next(j);
            }
            first = false;
            Some(j)
        })
        .take(self.letters.len() + 1)
    }
}

/// Semantics of a quantifier-free path formula at position `i`.
/// `state` answers state subformulas at a position.
pub fn eval_path(f: &Formula, w: &Word, i: usize, state: &dyn Fn(&Formula, usize) -> bool) -> bool {
    use Formula::*;
    let ev = |g: &Formula, j: usize| eval_path(g, w, j, state);
    match f {
        Atom(a) => w.letters[i].contains(a),
        True => true,
        False => false,
        Not(a) => !ev(a, i),
        And(a, b) => ev(a, i) && ev(b, i),
        Or(a, b) => ev(a, i) || ev(b, i),
        Implies(a, b) => !ev(a, i) || ev(b, i),
        Next(a) => ev(a, w.next(i)),
        NextPow(t, a) => ev(a, w.at(i, *t)),
        Until(a, b) => {
            for j in w.future(i) {
                if ev(b, j) {
                    return true;
                }
                if !ev(a, j) {
                    return false;
                }
            }
            false
        }
        Release(a, b) => {
            for j in w.future(i) {
                if !ev(b, j) {
                    return false;
                }
                if ev(a, j) {
                    return true;
                }
            }
            true
        }
        Eventually(a) => w.future(i).any(|j| ev(a, j)),
        Always(a) => w.future(i).all(|j| ev(a, j)),
        EventuallyBounded(lo, hi, a) => (*lo..=*hi).any(|k| ev(a, w.at(i, k))),
        BoundedRelease(n, psi, phi) => {
            for k in 0..=*n {
                let j = w.at(i, k);
                if ev(psi, j) {
                    return true;
                }
                if !ev(phi, j) {
                    return false;
                }
            }
            true
        }
        ForallPaths(_) | ExistsPaths(_) => state(f, i),
        Cstit(..) | Dstit(..) => panic!("stit in path formula"),
    }
}

/// Every lasso from `init` with a stem of at most `max_stem` states and a
/// loop of between 1 and `max_loop` states, as the visited state sequence
/// and the index where the loop starts.
pub fn lassos(succ: &[Vec<usize>], init: usize, max_stem: usize, max_loop: usize) -> Vec<(Vec<usize>, usize)> {
    let mut out = Vec::new();
    let mut path = vec![init];
    fn go(succ: &[Vec<usize>], path: &mut Vec<usize>, max_stem: usize, max_loop: usize, out: &mut Vec<(Vec<usize>, usize)>) {
        let last = *path.last().unwrap();
        for start in 0..path.len() {
            let loop_len = path.len() - start;
            if start <= max_stem && loop_len <= max_loop && succ[last].contains(&path[start]) {
                out.push((path.clone(), start));
            }
        }
        if path.len() < max_stem + max_loop {
            for &n in &succ[last] {
                path.push(n);
                go(succ, path, max_stem, max_loop, out);
                path.pop();
            }
        }
    }
    go(succ, &mut path, max_stem, max_loop, &mut out);
    out
}

use std::cell::RefCell;
use std::collections::HashMap;

use deontic_mc::automaton::StitAutomaton;
use deontic_mc::formula::Obligation;
use deontic_mc::value::Value;

/// One execution of an automaton as a lasso of state indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct History {
    pub states: Vec<usize>,
    pub loop_start: usize,
}

/// Explicit-enumeration semantics of an automaton's unrolled tree at the
/// root: histories are lassos, values are bottlenecks, and path
/// quantifiers range over lassos from the current state.
pub struct AutomatonOracle {
    pub n: usize,
    pub init: usize,
    pub names: Vec<String>,
    pub succ: Vec<Vec<usize>>,
    pub labels: Vec<Letter>,
    edge: HashMap<(usize, usize), (String, Value)>,
    /// Bounds for lassos witnessing path quantifiers.
    pub quant_stem: usize,
    pub quant_loop: usize,
    memo: RefCell<HashMap<(Formula, usize), bool>>,
}

impl AutomatonOracle {
    pub fn new(t: &StitAutomaton) -> Self {
        let names = t.states.clone();
        let idx = |s: &str| names.iter().position(|x| x == s).unwrap();
        let mut succ = vec![Vec::new(); names.len()];
        let mut edge = HashMap::new();
        for tr in &t.transitions {
            let (a, b) = (idx(&tr.from), idx(&tr.to));
            if !succ[a].contains(&b) {
                succ[a].push(b);
            }
            edge.insert((a, b), (tr.action.clone(), tr.weight));
        }
        let labels = names.iter().map(|s| t.labels.get(s).map(|v| v.iter().cloned().collect()).unwrap_or_default()).collect();
        let n = names.len();
        AutomatonOracle {
            n,
            init: idx(&t.init),
            names,
            succ,
            labels,
            edge,
            quant_stem: n + 2,
            quant_loop: n + 2,
            memo: RefCell::new(HashMap::new()),
        }
    }

    fn edges_of<'a>(&self, h: &'a History) -> impl Iterator<Item = (usize, usize)> + 'a {
        let k = h.states.len();
        (0..k).map(move |i| (h.states[i], if i + 1 < k { h.states[i + 1] } else { h.states[h.loop_start] }))
    }

    pub fn first_action(&self, h: &History) -> String {
        let e = self.edges_of(h).next().unwrap();
        self.edge[&e].0.clone()
    }

    pub fn value(&self, h: &History) -> Value {
        self.edges_of(h).map(|e| self.edge[&e].1).min().unwrap()
    }

    /// Root histories: lassos with stem and loop of at most `n` states.
    pub fn histories(&self) -> Vec<History> {
        lassos(&self.succ, self.init, self.n, self.n)
            .into_iter()
            .map(|(states, loop_start)| History { states, loop_start })
            .collect()
    }

    pub fn history_from_names(&self, stem: &[String], cycle: &[String]) -> History {
        let idx = |s: &String| self.names.iter().position(|x| x == s).unwrap();
        History { states: stem.iter().chain(cycle).map(idx).collect(), loop_start: stem.len() }
    }

    fn quantified(&self, f: &Formula, s: usize) -> bool {
        if let Some(&v) = self.memo.borrow().get(&(f.clone(), s)) {
            return v;
        }
        let (exists, body) = match f {
            Formula::ExistsPaths(b) => (true, b),
            Formula::ForallPaths(b) => (false, b),
            _ => unreachable!(),
        };
        let mut result = !exists;
        for (states, loop_start) in lassos(&self.succ, s, self.quant_stem, self.quant_loop) {
            let h = History { states, loop_start };
            if self.path(body, &h) == exists {
                result = exists;
                break;
            }
        }
        self.memo.borrow_mut().insert((f.clone(), s), result);
        result
    }

    /// Path formula `f` at the start of `h`.
    pub fn path(&self, f: &Formula, h: &History) -> bool {
        let letters: Vec<Letter> = h.states.iter().map(|&s| self.labels[s].clone()).collect();
        let w = Word { letters: &letters, loop_start: h.loop_start };
        eval_path(f, &w, 0, &|g, i| self.quantified(g, h.states[i]))
    }

    /// `|o|_root` as a truth vector over `hs`, with `hs` standing for `H_root`.
    pub fn extension(&self, o: &Obligation, hs: &[History]) -> Vec<bool> {
        match o {
            Obligation::Plain(f) => hs.iter().map(|h| self.path(f, h)).collect(),
            Obligation::Negated(x) => self.extension(x, hs).into_iter().map(|t| !t).collect(),
            Obligation::DstitOf(_, x) => {
                let truth = self.extension(x, hs);
                let actions: Vec<String> = hs.iter().map(|h| self.first_action(h)).collect();
                let not_settled = truth.iter().any(|t| !t);
                (0..hs.len())
                    .map(|i| not_settled && (0..hs.len()).filter(|&j| actions[j] == actions[i]).all(|j| truth[j]))
                    .collect()
            }
        }
    }
}

/// The dominance ought at the root decided by enumeration.
pub struct OracleVerdict {
    pub holds: bool,
    /// `(action, min, max)` per first action, sorted by action.
    pub intervals: Vec<(String, Value, Value)>,
    pub optimal: Vec<String>,
}

pub fn oracle_ought(or: &AutomatonOracle, hs: &[History], body: &Obligation, condition: Option<&Obligation>) -> OracleVerdict {
    let mut by_action: std::collections::BTreeMap<String, Vec<usize>> = Default::default();
    for (i, h) in hs.iter().enumerate() {
        by_action.entry(or.first_action(h)).or_default().push(i);
    }
    let intervals: Vec<(String, Value, Value)> = by_action
        .iter()
        .map(|(k, ids)| {
            let vals = ids.iter().map(|&i| or.value(&hs[i]));
            (k.clone(), vals.clone().min().unwrap(), vals.max().unwrap())
        })
        .collect();
    let below = |a: &(String, Value, Value), b: &(String, Value, Value)| a.2 <= b.1;
    let optimal: Vec<String> = intervals
        .iter()
        .filter(|a| !intervals.iter().any(|b| below(a, b) && !below(b, a)))
        .map(|a| a.0.clone())
        .collect();
    let body_truth = or.extension(body, hs);
    let cond_truth = condition.map(|c| or.extension(c, hs));
    let holds = optimal.iter().all(|k| {
        let ids = &by_action[k];
        if let Some(ct) = &cond_truth {
            if !ids.iter().all(|&i| ct[i]) {
                return true;
            }
        }
        ids.iter().all(|&i| body_truth[i])
    });
    OracleVerdict { holds, intervals, optimal }
}
