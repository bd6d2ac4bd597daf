//! LTL to generalized Büchi automata by the on-the-fly tableau of Gerth,
//! Peled, Vardi and Wolper.

use std::collections::{BTreeSet, HashMap};

use super::CtlError;
use crate::formula::{expand_bounded, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum L {
    True,
    False,
    Lit(bool, String),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    Until(usize, usize),
    Release(usize, usize),
}

#[derive(Default)]
struct Closure {
    nodes: Vec<L>,
    index: HashMap<L, usize>,
}

impl Closure {
    fn intern(&mut self, l: L) -> usize {
        if let Some(&i) = self.index.get(&l) {
            return i;
        }
        self.nodes.push(l.clone());
        self.index.insert(l, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    /// Negation normal form of `f` (or of `¬f` when `neg`).
    fn nnf(&mut self, f: &Formula, neg: bool) -> Result<usize, CtlError> {
        use Formula::*;
        let l = match f {
            Atom(a) => L::Lit(!neg, a.clone()),
            True if neg => L::False,
            True => L::True,
            False if neg => L::True,
            False => L::False,
            Not(a) => return self.nnf(a, !neg),
            And(a, b) | Or(a, b) => {
                let (x, y) = (self.nnf(a, neg)?, self.nnf(b, neg)?);
                if matches!(f, And(..)) != neg {
                    L::And(x, y)
                } else {
                    L::Or(x, y)
                }
            }
            Implies(a, b) => {
                let (x, y) = (self.nnf(a, !neg)?, self.nnf(b, neg)?);
                if neg {
                    L::And(x, y)
                } else {
                    L::Or(x, y)
                }
            }
            Next(a) => L::Next(self.nnf(a, neg)?),
            Until(a, b) | Release(a, b) => {
                let (x, y) = (self.nnf(a, neg)?, self.nnf(b, neg)?);
                if matches!(f, Until(..)) != neg {
                    L::Until(x, y)
                } else {
                    L::Release(x, y)
                }
            }
            Eventually(a) | Always(a) => {
                let x = self.nnf(a, neg)?;
                if matches!(f, Eventually(_)) != neg {
                    let t = self.intern(L::True);
                    L::Until(t, x)
                } else {
                    let ff = self.intern(L::False);
                    L::Release(ff, x)
                }
            }
            NextPow(..) | EventuallyBounded(..) | BoundedRelease(..) => return self.nnf(&expand_bounded(f), neg),
            ForallPaths(_) | ExistsPaths(_) => return Err(CtlError::NotPathFormula(f.to_string())),
            Cstit(..) | Dstit(..) => return Err(CtlError::StitOperator(f.to_string())),
        };
        Ok(self.intern(l))
    }
}

/// A state of the automaton constrains the letter read on entering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiState {
    pub pos: BTreeSet<String>,
    pub neg: BTreeSet<String>,
}

impl BuchiState {
    pub fn admits(&self, letter: &BTreeSet<String>) -> bool {
        self.pos.is_subset(letter) && self.neg.is_disjoint(letter)
    }
}

/// Generalized Büchi automaton with state-based letters: a run
/// `q0 q1 …` reads `w0 w1 …` when each `qi` admits `wi`, `q0` is initial,
/// and every accepting set is visited infinitely often.
#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    pub states: Vec<BuchiState>,
    pub initial: Vec<usize>,
    pub succ: Vec<Vec<usize>>,
    pub accepting: Vec<Vec<bool>>,
}

const INIT: usize = usize::MAX;

struct TNode {
    incoming: BTreeSet<usize>,
    new: BTreeSet<usize>,
    old: BTreeSet<usize>,
    next: BTreeSet<usize>,
}

/// Translates a quantifier-free, stit-free formula. Bounded operators are
/// expanded first.
pub fn ltl_to_buchi(f: &Formula) -> Result<BuchiAutomaton, CtlError> {
    let mut cl = Closure::default();
    let root = cl.nnf(f, false)?;

    let mut done: Vec<TNode> = Vec::new();
    let mut by_key: HashMap<(BTreeSet<usize>, BTreeSet<usize>), usize> = HashMap::new();
    let mut stack = vec![TNode {
        incoming: BTreeSet::from([INIT]),
        new: BTreeSet::from([root]),
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    }];
    while let Some(mut n) = stack.pop() {
        let Some(eta) = n.new.pop_first() else {
            let key = (n.old.clone(), n.next.clone());
            if let Some(&i) = by_key.get(&key) {
                done[i].incoming.extend(n.incoming);
            } else {
                let i = done.len();
                by_key.insert(key, i);
                stack.push(TNode {
                    incoming: BTreeSet::from([i]),
                    new: n.next.clone(),
                    old: BTreeSet::new(),
                    next: BTreeSet::new(),
                });
                done.push(n);
            }
            continue;
        };
        let add = |n: &mut TNode, xs: &[usize]| {
            for &x in xs {
                if !n.old.contains(&x) {
                    n.new.insert(x);
                }
            }
        };
        match cl.nodes[eta].clone() {
            L::False => {}
            L::True => {
                n.old.insert(eta);
                stack.push(n);
            }
            L::Lit(pos, a) => {
                let contradicted = cl.index.get(&L::Lit(!pos, a)).is_some_and(|c| n.old.contains(c));
                if !contradicted {
                    n.old.insert(eta);
                    stack.push(n);
                }
            }
            L::And(a, b) => {
                add(&mut n, &[a, b]);
                n.old.insert(eta);
                stack.push(n);
            }
            L::Next(a) => {
                n.old.insert(eta);
                n.next.insert(a);
                stack.push(n);
            }
            L::Or(a, b) | L::Until(a, b) | L::Release(a, b) => {
                let mut n2 = TNode {
                    incoming: n.incoming.clone(),
                    new: n.new.clone(),
                    old: n.old.clone(),
                    next: n.next.clone(),
                };
                match cl.nodes[eta] {
                    L::Or(..) => {
                        add(&mut n, &[a]);
                        add(&mut n2, &[b]);
                    }
                    L::Until(..) => {
                        add(&mut n, &[a]);
                        n.next.insert(eta);
                        add(&mut n2, &[b]);
                    }
                    _ => {
                        add(&mut n, &[b]);
                        n.next.insert(eta);
                        add(&mut n2, &[a, b]);
                    }
                }
                n.old.insert(eta);
                n2.old.insert(eta);
                stack.push(n2);
                stack.push(n);
            }
        }
    }

    let mut succ = vec![Vec::new(); done.len()];
    let mut initial = Vec::new();
    for (q, node) in done.iter().enumerate() {
        for &p in &node.incoming {
            if p == INIT {
                initial.push(q);
            } else {
                succ[p].push(q);
            }
        }
    }
    let states = done
        .iter()
        .map(|node| {
            let mut s = BuchiState { pos: BTreeSet::new(), neg: BTreeSet::new() };
            for &x in &node.old {
                if let L::Lit(p, a) = &cl.nodes[x] {
                    if *p {
                        s.pos.insert(a.clone());
                    } else {
                        s.neg.insert(a.clone());
                    }
                }
            }
            s
        })
        .collect();
    let accepting = (0..cl.nodes.len())
        .filter_map(|u| match cl.nodes[u] {
            L::Until(_, b) => Some(done.iter().map(|node| !node.old.contains(&u) || node.old.contains(&b)).collect()),
            _ => None,
        })
        .collect();
    Ok(BuchiAutomaton { states, initial, succ, accepting })
}
