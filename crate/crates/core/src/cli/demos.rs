//! Named RSS demonstrations. Each one is a list of checked assertions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::formula::random::FormulaGen;
use crate::formula::{parse_formula, parse_ought, Formula, Obligation, OughtStatement};
use crate::mc::check_statement;
use crate::rss::{fixtures, refrain, rss1, rss3, rss6, HIT_FROM_BEHIND};
use crate::tree_model::random::{random_model, RandomModelConfig};
use crate::tree_model::{ModelError, MomentId, TreeModel};

pub const DEMOS: &[&str] = &[
    "rss1-unavoidable",
    "force-others",
    "fig1-caption",
    "fig2-obligations",
    "fig3-inference",
    "refrain-refrain",
    "merge-rss6",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub claim: String,
    pub expected: bool,
    pub actual: bool,
    pub pass: bool,
}

#[derive(Default)]
struct Sheet(Vec<Assertion>);

impl Sheet {
    fn claim(&mut self, claim: impl Into<String>, expected: bool, actual: bool) {
        self.0.push(Assertion {
            claim: claim.into(),
            expected,
            actual,
            pass: expected == actual,
        });
    }
}

fn model(m: crate::tree_model::ExplicitStitModel) -> TreeModel {
    TreeModel::new(m).expect("fixture is valid")
}

fn ought(m: &TreeModel, at: MomentId, o: &OughtStatement) -> Result<bool, ModelError> {
    m.sat_ought(at, o)
}

/// Runs a demonstration; `None` for an unknown name.
pub fn run_demo(name: &str, seed: u64) -> Option<Result<Vec<Assertion>, String>> {
    let r = match name {
        "rss1-unavoidable" => rss1_unavoidable(),
        "force-others" => force_others(),
        "fig1-caption" => fig1_caption(),
        "fig2-obligations" => fig2_obligations(),
        "fig3-inference" => fig3_inference(),
        "refrain-refrain" => refrain_refrain(seed),
        "merge-rss6" => merge_rss6(),
        _ => return None,
    };
    Some(r.map(|s| s.0))
}

fn rss1_unavoidable() -> Result<Sheet, String> {
    let mut s = Sheet::default();
    let r = rss1("alpha", Formula::atom(HIT_FROM_BEHIND));
    let m = model(fixtures::unavoidable());
    let all = m.histories_through(0).map_err(|e| e.to_string())?;
    let hit = m.formula_extension(0, &Formula::atom(HIT_FROM_BEHIND)).map_err(|e| e.to_string())?;
    s.claim("collision is unavoidable at m", true, hit == all);
    s.claim(format!("{} at m", r.naive), false, ought(&m, 0, &r.naive).map_err(|e| e.to_string())?);
    s.claim(format!("{} at m", r.refined), true, ought(&m, 0, &r.refined).map_err(|e| e.to_string())?);
    let r = rss1("alpha", Formula::atom(HIT_FROM_BEHIND).eventually());
    let m = model(fixtures::avoidable());
    s.claim(format!("avoidable: {}", r.naive), true, ought(&m, 0, &r.naive).map_err(|e| e.to_string())?);
    s.claim(format!("avoidable: {}", r.refined), true, ought(&m, 0, &r.refined).map_err(|e| e.to_string())?);
    Ok(s)
}

fn force_others() -> Result<Sheet, String> {
    let e = |e: ModelError| e.to_string();
    let mut s = Sheet::default();
    let m = model(fixtures::force_others());
    let r = rss3(&["alpha", "beta"])?;
    let a = Obligation::plain(Formula::atom("p_alpha").not());
    let b = Obligation::atom("grow_beta_alpha");
    let a_or_b = Obligation::plain(Formula::atom("p_alpha").not().or(Formula::atom("grow_beta_alpha")));
    let ext_a = m.extension(0, &a).map_err(e)?;
    s.claim("alpha must proceed: |!p_alpha| is empty", true, ext_a.is_empty());
    s.claim(
        "|A | B| = |A| ∪ |B|",
        true,
        m.extension(0, &a_or_b).map_err(e)? == ext_a.union(&m.extension(0, &b).map_err(e)?),
    );
    s.claim(format!("{} at m", r.prohib0[0]), true, ought(&m, 0, &r.prohib0[0]).map_err(e)?);
    let forced = OughtStatement::new("alpha", b);
    s.claim(format!("{forced} at m (alpha must make beta give way)"), true, ought(&m, 0, &forced).map_err(e)?);
    s.claim(format!("{} at m", r.prohib[0]), false, ought(&m, 0, &r.prohib[0]).map_err(e)?);
    Ok(s)
}

fn fig1_caption() -> Result<Sheet, String> {
    let e = |e: ModelError| e.to_string();
    let mut s = Sheet::default();
    let m = model(fixtures::fig1());
    let ids = |set| m.ids(&set).join(",");
    s.claim(
        "H_m = {h1..h6} and H_m' = {h1..h4}",
        true,
        ids(m.histories_through(0).map_err(e)?) == "h1,h2,h3,h4,h5,h6" && ids(m.histories_through(1).map_err(e)?) == "h1,h2,h3,h4",
    );
    let at_m = m.choice("alpha", 0).map_err(e)?;
    let at_m1 = m.choice("alpha", 1).map_err(e)?;
    s.claim("K2 = {h5,h6} and K4 = {h2}", true, ids(at_m[1].clone()) == "h5,h6" && ids(at_m1[1].clone()) == "h2");
    let cstit = parse_formula("[alpha cstit: A]").map_err(|e| e.to_string())?;
    s.claim("m/h5 |= [alpha cstit: A]", true, m.sat_formula(0, "h5", &cstit).map_err(e)?);
    s.claim("m/h1 |= [alpha cstit: A]", false, m.sat_formula(0, "h1", &cstit).map_err(e)?);
    let single = crate::formula::Agents::single("alpha");
    let opt = m.optimal_actions(&single, 0, None).map_err(e)?;
    s.claim("Optimal_m = {K2}", true, opt.actions == vec![at_m[1].clone()]);
    let o = parse_ought("O[alpha cstit: A]").map_err(|e| e.to_string())?;
    s.claim("m |= O[alpha cstit: A]", true, ought(&m, 0, &o).map_err(e)?);
    let opt1 = m.optimal_actions(&single, 1, None).map_err(e)?;
    let k45 = at_m1[1].union(&at_m1[2]);
    let mut covered = false;
    for atom in m.atoms() {
        covered |= k45.is_subset(&m.formula_extension(1, &Formula::atom(atom.clone())).map_err(e)?);
    }
    s.claim(
        "Optimal_m' = {K4,K5} and no atom covers K4 ∪ K5",
        true,
        opt1.actions == vec![at_m1[1].clone(), at_m1[2].clone()] && !covered && !ought(&m, 1, &o).map_err(e)?,
    );
    let dstit = parse_formula("[alpha dstit: A]").map_err(|e| e.to_string())?;
    s.claim(
        "m/h5 |= [alpha dstit: A] with |A|_m = {h1,h2,h3,h5,h6}",
        true,
        m.sat_formula(0, "h5", &dstit).map_err(e)? && ids(m.formula_extension(0, &Formula::atom("A")).map_err(e)?) == "h1,h2,h3,h5,h6",
    );
    Ok(s)
}

fn fig2_obligations() -> Result<Sheet, String> {
    let mut s = Sheet::default();
    let m = model(fixtures::fig2());
    for (at, text, expected) in [
        (0, "O[alpha cstit: G !p & chi]", true),
        (6, "O[alpha cstit: F[0:2] p]", true),
        (6, "O[alpha cstit: F[0:1] p]", false),
        (0, "O[alpha cstit: E F[1:2] p]", false),
    ] {
        let o = parse_ought(text).map_err(|e| e.to_string())?;
        s.claim(format!("{text} at moment {at}"), expected, ought(&m, at, &o).map_err(|e| e.to_string())?);
    }
    for (at, text) in [(6, "F collision"), (7, "A F collision")] {
        let f = parse_formula(text).map_err(|e| e.to_string())?;
        s.claim(format!("{at}/h_pi |= {text}"), true, m.sat_formula(at, "h_pi", &f).map_err(|e| e.to_string())?);
    }
    Ok(s)
}

fn fig3_inference() -> Result<Sheet, String> {
    let e = |e: ModelError| e.to_string();
    let mut s = Sheet::default();
    let m = model(fixtures::fig3());
    let report = m.check_inference_condition("alpha", 0, "g_alpha", "p_alpha").map_err(e)?;
    s.claim("inference condition at m", true, report.holds);
    let six = rss6("alpha", 3);
    s.claim(format!("{six} at m"), true, ought(&m, 0, &six).map_err(e)?);
    let prohib = &rss3(&["alpha", "beta"])?.prohib[0];
    s.claim(format!("{prohib} at m'"), true, ought(&m, 1, prohib).map_err(e)?);
    Ok(s)
}

fn refrain_refrain(seed: u64) -> Result<Sheet, String> {
    let mut s = Sheet::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = RandomModelConfig::default();
    let gen = FormulaGen::default().with_atoms(["p", "q"]).depth(2);
    let (mut checked, mut violations) = (0usize, 0usize);
    for _ in 0..100 {
        let m = TreeModel::new(random_model(&mut rng, &cfg)).map_err(|e| e.to_string())?;
        let agent = m.agents()[0].clone();
        let phi = Obligation::plain(gen.plain(&mut rng));
        let rr = refrain(&agent, Obligation::dstit(&agent, phi.clone()).negate());
        let plain = Obligation::dstit(&agent, phi);
        for &mo in m.moments() {
            for h in m.histories_through(mo).map_err(|e| e.to_string())?.iter() {
                let id = m.history_id(h).to_string();
                checked += 1;
                let a = m.sat_obligation(mo, &id, &rr).map_err(|e| e.to_string())?;
                let b = m.sat_obligation(mo, &id, &plain).map_err(|e| e.to_string())?;
                violations += (a != b) as usize;
            }
        }
    }
    s.claim(format!("refraining from refraining equals doing on {checked} m/h pairs of 100 models"), true, violations == 0);
    Ok(s)
}

fn merge_rss6() -> Result<Sheet, String> {
    let mut s = Sheet::default();
    let o = rss6("alpha", 3);
    let v = check_statement(&fixtures::merge(), "alpha", &o).map_err(|e| e.to_string())?;
    s.claim(format!("{o} on the merge automaton"), true, v.holds && !v.vacuous);
    s.claim("waiting is not optimal", true, v.optimal_actions == ["merge"]);
    Ok(s)
}
