//! Direct evaluation of path formulas on ultimately periodic words.

use std::collections::BTreeSet;

use super::CtlError;
use crate::formula::Formula;

/// The word `stem · cycle^ω` over sets of atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoWord {
    pub stem: Vec<BTreeSet<String>>,
    pub cycle: Vec<BTreeSet<String>>,
}

impl LassoWord {
    pub fn new<S: AsRef<str>>(stem: &[&[S]], cycle: &[&[S]]) -> LassoWord {
        let conv = |xs: &[&[S]]| xs.iter().map(|l| l.iter().map(|a| a.as_ref().to_string()).collect()).collect();
        LassoWord { stem: conv(stem), cycle: conv(cycle) }
    }

    fn len(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }

    fn letter(&self, i: usize) -> &BTreeSet<String> {
        if i < self.stem.len() {
            &self.stem[i]
        } else {
            &self.cycle[i - self.stem.len()]
        }
    }

    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.stem.len()
        }
    }

    fn shift(&self, i: usize, k: u32) -> usize {
        (0..k).fold(i, |j, _| self.succ(j))
    }
}

/// Truth value of `f` at the first position of `w`.
pub fn eval_lasso(f: &Formula, w: &LassoWord) -> Result<bool, CtlError> {
    Ok(eval_positions(f, w)?[0])
}

/// Truth value of `f` at every distinct position of `w`, stem first.
pub fn eval_positions(f: &Formula, w: &LassoWord) -> Result<Vec<bool>, CtlError> {
    if w.cycle.is_empty() {
        return Err(CtlError::EmptyCycle);
    }
    let n = w.len();
    use Formula::*;
    let fix = |init: bool, step: &dyn Fn(usize, &[bool]) -> bool| {
        let mut v = vec![init; n];
        loop {
            let mut changed = false;
            for i in (0..n).rev() {
                let x = step(i, &v);
                if x != v[i] {
                    v[i] = x;
                    changed = true;
                }
            }
            if !changed {
                return v;
            }
        }
    };
    Ok(match f {
        Atom(a) => (0..n).map(|i| w.letter(i).contains(a)).collect(),
        True => vec![true; n],
        False => vec![false; n],
        Not(a) => eval_positions(a, w)?.into_iter().map(|x| !x).collect(),
        And(a, b) => {
            let (a, b) = (eval_positions(a, w)?, eval_positions(b, w)?);
            (0..n).map(|i| a[i] && b[i]).collect()
        }
        Or(a, b) => {
            let (a, b) = (eval_positions(a, w)?, eval_positions(b, w)?);
            (0..n).map(|i| a[i] || b[i]).collect()
        }
        Implies(a, b) => {
            let (a, b) = (eval_positions(a, w)?, eval_positions(b, w)?);
            (0..n).map(|i| !a[i] || b[i]).collect()
        }
        Next(a) => {
            let a = eval_positions(a, w)?;
            (0..n).map(|i| a[w.succ(i)]).collect()
        }
        NextPow(t, a) => {
            let a = eval_positions(a, w)?;
            (0..n).map(|i| a[w.shift(i, *t)]).collect()
        }
        Until(a, b) => {
            let (a, b) = (eval_positions(a, w)?, eval_positions(b, w)?);
            fix(false, &|i, v| b[i] || (a[i] && v[w.succ(i)]))
        }
        Release(a, b) => {
            let (a, b) = (eval_positions(a, w)?, eval_positions(b, w)?);
            fix(true, &|i, v| b[i] && (a[i] || v[w.succ(i)]))
        }
        Eventually(a) => {
            let a = eval_positions(a, w)?;
            fix(false, &|i, v| a[i] || v[w.succ(i)])
        }
        Always(a) => {
            let a = eval_positions(a, w)?;
            fix(true, &|i, v| a[i] && v[w.succ(i)])
        }
        EventuallyBounded(lo, hi, a) => {
            let a = eval_positions(a, w)?;
            (0..n).map(|i| (*lo..=*hi).any(|k| a[w.shift(i, k)])).collect()
        }
        BoundedRelease(bound, psi, phi) => {
            let (psi, phi) = (eval_positions(psi, w)?, eval_positions(phi, w)?);
            (0..n)
                .map(|i| {
                    for k in 0..=*bound {
                        let j = w.shift(i, k);
                        if psi[j] {
                            return true;
                        }
                        if !phi[j] {
                            return false;
                        }
                    }
                    true
                })
                .collect()
        }
        ForallPaths(_) | ExistsPaths(_) => return Err(CtlError::NotPathFormula(f.to_string())),
        Cstit(..) | Dstit(..) => return Err(CtlError::StitOperator(f.to_string())),
    })
}
