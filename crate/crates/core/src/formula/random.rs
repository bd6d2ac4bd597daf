//! Seeded random generation of formulas, obligations and oughts.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Agents, Formula, Obligation, OughtStatement};

#[derive(Debug, Clone)]
pub struct FormulaGen {
    pub atoms: Vec<String>,
    pub agents: Vec<String>,
    pub max_depth: u32,
    pub temporal: bool,
    pub bounded: bool,
    pub quantifiers: bool,
    /// Allow `cstit`/`dstit` nodes inside generated formulas.
    pub stit: bool,
    pub max_bound: u32,
}

impl Default for FormulaGen {
    fn default() -> Self {
        FormulaGen {
            atoms: vec!["p".into(), "q".into(), "r".into()],
            agents: vec!["alpha".into()],
            max_depth: 3,
            temporal: true,
            bounded: true,
            quantifiers: true,
            stit: false,
            max_bound: 3,
        }
    }
}

impl FormulaGen {
    pub fn with_atoms<S: Into<String>>(mut self, atoms: impl IntoIterator<Item = S>) -> Self {
        self.atoms = atoms.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_agents<S: Into<String>>(mut self, agents: impl IntoIterator<Item = S>) -> Self {
        self.agents = agents.into_iter().map(Into::into).collect();
        self
    }

    pub fn depth(mut self, d: u32) -> Self {
        self.max_depth = d;
        self
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::Atom(self.atoms.choose(rng).expect("atoms").clone()),
        }
    }

    /// A formula of depth at most `max_depth`.
    pub fn formula<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.gen(rng, self.max_depth, self.stit)
    }

    /// A stit-free formula.
    pub fn plain<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        self.gen(rng, self.max_depth, false)
    }

    fn gen<R: Rng + ?Sized>(&self, rng: &mut R, depth: u32, stit: bool) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.leaf(rng);
        }
        let d = depth - 1;
        loop {
            let f = match rng.gen_range(0..17) {
                0 => self.gen(rng, d, stit).not(),
                1 => self.gen(rng, d, stit).and(self.gen(rng, d, stit)),
                2 => self.gen(rng, d, stit).or(self.gen(rng, d, stit)),
                3 => self.gen(rng, d, stit).implies(self.gen(rng, d, stit)),
                4 if self.temporal => self.gen(rng, d, stit).next(),
                5 if self.temporal => self.gen(rng, d, stit).until(self.gen(rng, d, stit)),
                6 if self.temporal => self.gen(rng, d, stit).release(self.gen(rng, d, stit)),
                7 if self.temporal => self.gen(rng, d, stit).eventually(),
                8 if self.temporal => self.gen(rng, d, stit).always(),
                9 if self.bounded => {
                    let t = rng.gen_range(0..=self.max_bound);
                    self.gen(rng, d, stit).next_pow(t)
                }
                10 if self.bounded => {
                    let lo = rng.gen_range(0..=self.max_bound);
                    let hi = rng.gen_range(lo..=self.max_bound);
                    self.gen(rng, d, stit).eventually_within(lo, hi)
                }
                11 if self.bounded => {
                    let n = rng.gen_range(0..=self.max_bound);
                    self.gen(rng, d, stit).bounded_release(n, self.gen(rng, d, stit))
                }
                12 if self.quantifiers => self.gen(rng, d, stit).forall(),
                13 if self.quantifiers => self.gen(rng, d, stit).exists(),
                14 if stit && !self.agents.is_empty() => {
                    let a = self.agents.choose(rng).unwrap().clone();
                    Formula::Cstit(a, Box::new(self.obligation_at(rng, d)))
                }
                15 if stit && !self.agents.is_empty() => {
                    let a = self.agents.choose(rng).unwrap().clone();
                    Formula::Dstit(a, Box::new(self.obligation_at(rng, d)))
                }
                16 => self.leaf(rng),
                _ => continue,
            };
            return f;
        }
    }

    /// An obligation in canonical form (plain negations stay plain).
    pub fn obligation<R: Rng + ?Sized>(&self, rng: &mut R) -> Obligation {
        self.obligation_at(rng, self.max_depth)
    }

    fn obligation_at<R: Rng + ?Sized>(&self, rng: &mut R, depth: u32) -> Obligation {
        if depth == 0 || self.agents.is_empty() || rng.gen_bool(0.4) {
            return Obligation::Plain(self.gen(rng, depth, false));
        }
        if rng.gen_bool(0.6) {
            let a = self.agents.choose(rng).unwrap().clone();
            Obligation::dstit(a, self.obligation_at(rng, depth - 1))
        } else {
            self.obligation_at(rng, depth - 1).negate()
        }
    }

    /// A single-agent ought, conditional with probability one third.
    pub fn ought<R: Rng + ?Sized>(&self, rng: &mut R) -> OughtStatement {
        let agent = self.agents.choose(rng).expect("agents").clone();
        let body = self.obligation(rng);
        if rng.gen_bool(1.0 / 3.0) {
            OughtStatement::conditional(agent, body, self.obligation(rng))
        } else {
            OughtStatement::new(agent, body)
        }
    }

    /// An ought whose bearer is a non-empty subset of the agents.
    pub fn group_ought<R: Rng + ?Sized>(&self, rng: &mut R) -> OughtStatement {
        let mut members: Vec<String> = self.agents.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if members.is_empty() {
            members.push(self.agents.choose(rng).expect("agents").clone());
        }
        let agents = if members.len() == 1 {
            Agents::Single(members.pop().unwrap())
        } else {
            Agents::Group(members)
        };
        OughtStatement::group(agents, self.obligation(rng))
    }
}
