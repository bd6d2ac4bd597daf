//! Responsibility-Sensitive Safety rules as ought statements, plus the
//! worked models they are exercised on.

pub mod fixtures;

use crate::formula::{Agents, Formula, Obligation, OughtStatement};

pub use fixtures::{fixture, fixtures, Fixture, FixtureData};

/// Atom names for one agent. Names depend only on agent names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RssAtoms {
    pub agent: String,
}

impl RssAtoms {
    pub fn new(agent: impl Into<String>) -> Self {
        RssAtoms { agent: agent.into() }
    }

    /// `p_α`: the agent proceeds through the conflict region.
    pub fn proceeds(&self) -> String {
        format!("p_{}", self.agent)
    }

    /// `g_α`: right-of-way is granted to the agent.
    pub fn granted(&self) -> String {
        format!("g_{}", self.agent)
    }

    /// `w_α`: the agent wants to change lanes.
    pub fn wants_lane_change(&self) -> String {
        format!("w_{}", self.agent)
    }

    /// `GROW_β^α`: `giver` gives right-of-way to this agent.
    pub fn given_by(&self, giver: &str) -> String {
        format!("grow_{}_{}", giver, self.agent)
    }

    /// Everyone in `others` gives way to this agent.
    pub fn given_by_all(&self, others: &[&str]) -> Formula {
        Formula::conj(others.iter().map(|b| Formula::atom(self.given_by(b))))
    }

    /// `TROW_α = p_α ∧ ¬⋀ GROW_β^α`.
    pub fn takes_row(&self, others: &[&str]) -> Formula {
        Formula::atom(self.proceeds()).and(self.given_by_all(others).not())
    }
}

pub const HIT_FROM_BEHIND: &str = "hit_from_behind";

/// `[α dstit: ¬[α dstit: A]]`.
pub fn refrain(agent: &str, a: Obligation) -> Obligation {
    Obligation::dstit(agent, Obligation::dstit(agent, a).negate())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rss1 {
    pub naive: OughtStatement,
    pub refined: OughtStatement,
}

/// `O[α cstit: ¬φ]` and the refraining form `O[α cstit: ¬[α dstit: φ]]`.
pub fn rss1(agent: &str, collision: Formula) -> Rss1 {
    Rss1 {
        naive: OughtStatement::new(agent, Obligation::plain(collision.clone().not())),
        refined: OughtStatement::new(agent, Obligation::dstit(agent, Obligation::plain(collision)).negate()),
    }
}

/// `O[α cstit: A G((ψ ∨ ψ_r) → ¬ψ_r)]`.
pub fn rss2(agent: &str, nonreckless: Formula, reckless: Formula) -> OughtStatement {
    let body = nonreckless.or(reckless.clone()).implies(reckless.not()).always().forall();
    OughtStatement::new(agent, Obligation::plain(body))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rss3 {
    /// `O[α cstit: ¬TROW_α]` per agent.
    pub prohib0: Vec<OughtStatement>,
    /// `O[Agents cstit: E ⋁ g_α]`.
    pub pos: OughtStatement,
    /// `O[α cstit: G(¬g_α → ¬p_α)]` per agent.
    pub prohib: Vec<OughtStatement>,
}

/// Right-of-way rules for `agents`. Needs at least two agents for the
/// group ought.
pub fn rss3(agents: &[&str]) -> Result<Rss3, String> {
    if agents.len() < 2 {
        return Err(format!("right-of-way rules need at least two agents, got {}", agents.len()));
    }
    let prohib0 = agents
        .iter()
        .map(|a| {
            let others: Vec<&str> = agents.iter().copied().filter(|b| b != a).collect();
            OughtStatement::new(*a, Obligation::plain(RssAtoms::new(*a).takes_row(&others).not()))
        })
        .collect();
    let someone = Formula::disj(agents.iter().map(|a| Formula::atom(RssAtoms::new(*a).granted()))).exists();
    let pos = OughtStatement::group(Agents::group(agents.iter().copied())?, Obligation::plain(someone));
    let prohib = agents.iter().map(|a| rss3_prohib(a)).collect();
    Ok(Rss3 { prohib0, pos, prohib })
}

/// `O[α cstit: G(¬g_α → ¬p_α)]`.
pub fn rss3_prohib(agent: &str) -> OughtStatement {
    OughtStatement::new(agent, Obligation::plain(waits_for_grant(agent)))
}

fn waits_for_grant(agent: &str) -> Formula {
    let at = RssAtoms::new(agent);
    Formula::atom(at.granted()).not().implies(Formula::atom(at.proceeds()).not()).always()
}

/// `O[α cstit: ¬[α dstit: (¬p_α) BR[N] g_α] / w_α]`.
pub fn rss6(agent: &str, n: u32) -> OughtStatement {
    let at = RssAtoms::new(agent);
    let waiting = Formula::atom(at.proceeds()).not().bounded_release(n, Formula::atom(at.granted()));
    OughtStatement::conditional(
        agent,
        Obligation::dstit(agent, Obligation::plain(waiting)).negate(),
        Obligation::atom(at.wants_lane_change()),
    )
}
