//! Seeded randomized suites. Each returns counts so that both the focused
//! tests and the acceptance report can run them.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use deontic_mc::automaton::random::{random_automaton, RandomAutomatonConfig};
use deontic_mc::automaton::{extremal_values, prime_automaton, restrict_first_action, unroll, StitAutomaton, Transition};
use deontic_mc::formula::random::FormulaGen;
use deontic_mc::formula::{Agents, Obligation, OughtStatement};
use deontic_mc::mc::{check_conditional_ought, check_ought, McError, Verdict};
use deontic_mc::tree_model::random::{random_model, RandomModelConfig};
use deontic_mc::tree_model::{validate_model, TreeModel};
use deontic_mc::value::Value;

use super::{oracle_ought, AutomatonOracle};

#[derive(Debug, Default, Clone)]
pub struct Tally {
    pub name: &'static str,
    pub instances: usize,
    pub violations: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, ..Default::default() }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.violations.push(detail());
        }
    }
}

/// The explicit-model theorem suites over `n` random models.
pub fn theorem_suites(seed: u64, n: usize) -> Vec<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = RandomModelConfig::default();
    let mut force = Tally::new("force-others");
    let mut idem = Tally::new("dstit idempotence");
    let mut rr = Tally::new("refrain-refrain");
    let mut indep = Tally::new("ought history-independence");
    let mut conj = Tally::new("conjunction distribution");
    let mut nonempty = Tally::new("optimal non-emptiness");
    let mut vacuous_force = 0;
    for _ in 0..n {
        let src = random_model(&mut rng, &cfg);
        let m = TreeModel::new(src.clone()).expect("generated models are valid");
        let gen = FormulaGen::default().with_atoms(["p", "q"]).with_agents(m.agents().iter().cloned()).depth(2);
        let agents = m.agents().to_vec();
        let json = || src.to_json();
        let phi = gen.plain(&mut rng);
        let psi = gen.plain(&mut rng);
        let a = gen.plain(&mut rng).and(gen.plain(&mut rng));
        let ought = gen.ought(&mut rng);
        for &mo in m.moments() {
            let through = m.histories_through(mo).unwrap();
            for agent in &agents {
                let o = |f| OughtStatement::new(agent.clone(), Obligation::plain(f));

                let ext_a = m.formula_extension(mo, &a).unwrap();
                let ext_b = m.formula_extension(mo, &psi).unwrap();
                let ext_ab = m.formula_extension(mo, &a.clone().or(psi.clone())).unwrap();
                force.check(ext_ab == ext_a.union(&ext_b), || format!("|A|B| != |A|∪|B| at {mo}\n{}", json()));
                if m.sat_ought(mo, &o(a.clone().or(psi.clone()))).unwrap() && ext_a.is_empty() {
                    force.check(m.sat_ought(mo, &o(psi.clone())).unwrap(), || format!("A={a} B={psi} at {mo}\n{}", json()));
                } else {
                    vacuous_force += 1;
                }

                let d = |x: Obligation| Obligation::dstit(agent.clone(), x);
                let base = d(Obligation::plain(phi.clone()));
                let twice = d(base.clone());
                let refrain2 = d(d(d(Obligation::plain(phi.clone())).negate()).negate());
                for h in through.iter() {
                    let id = m.history_id(h);
                    let b = m.sat_obligation(mo, id, &base).unwrap();
                    idem.check(m.sat_obligation(mo, id, &twice).unwrap() == b, || format!("φ={phi} at {mo}/{id}\n{}", json()));
                    rr.check(m.sat_obligation(mo, id, &refrain2).unwrap() == b, || format!("φ={phi} at {mo}/{id}\n{}", json()));
                }

                let both = m.sat_ought(mo, &o(phi.clone())).unwrap() && m.sat_ought(mo, &o(psi.clone())).unwrap();
                conj.check(both == m.sat_ought(mo, &o(phi.clone().and(psi.clone()))).unwrap(), || {
                    format!("φ={phi} ψ={psi} at {mo}\n{}", json())
                });

                let single = Agents::single(agent.clone());
                nonempty.check(!m.optimal_actions(&single, mo, None).unwrap().actions.is_empty(), || format!("{agent} at {mo}\n{}", json()));
            }
            if agents.len() > 1 {
                let group = Agents::group(agents.iter().cloned()).unwrap();
                nonempty.check(!m.optimal_actions(&group, mo, None).unwrap().actions.is_empty(), || format!("group at {mo}\n{}", json()));
            }
            let answers: BTreeSet<Option<bool>> = through
                .iter()
                .map(|h| m.sat_statement(mo, m.history_id(h), &ought.clone().into()).ok())
                .collect();
            indep.check(answers.len() == 1, || format!("{ought} at {mo}\n{}", json()));
        }
    }
    assert!(vacuous_force < force.instances, "force-others never exercised");
    vec![force, idem, rr, indep, conj, nonempty]
}

#[derive(Debug, Default)]
pub struct McTally {
    pub compared: usize,
    pub unsupported: usize,
    pub holds: usize,
    pub vacuous: usize,
    pub disagreements: Vec<String>,
}

pub fn compare(or: &AutomatonOracle, v: &Verdict, body: &Obligation, cond: Option<&Obligation>) -> Result<(), String> {
    let mut hs = or.histories();
    if let Some(cx) = &v.counterexample {
        hs.push(or.history_from_names(&cx.stem, &cx.cycle));
    }
    let o = oracle_ought(or, &hs, body, cond);
    let mut intervals: Vec<(String, Value, Value)> = v.intervals.iter().map(|i| (i.action.clone(), i.lo, i.hi)).collect();
    intervals.sort();
    if intervals != o.intervals {
        return Err(format!("intervals {intervals:?} vs oracle {:?}", o.intervals));
    }
    let mut opt = v.optimal_actions.clone();
    opt.sort();
    if opt != o.optimal {
        return Err(format!("optimal {opt:?} vs oracle {:?}", o.optimal));
    }
    if v.holds != o.holds {
        return Err(format!("verdict {} vs oracle {}", v.holds, o.holds));
    }
    Ok(())
}

/// `check_ought` (or the conditional form) against lasso enumeration.
pub fn mc_oracle_suite(seed: u64, n: usize, depth: u32, conditional: bool) -> McTally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = RandomAutomatonConfig::default();
    let gen = FormulaGen::default().with_atoms(["p", "q"]).depth(depth);
    let mut tally = McTally::default();
    while tally.compared < n {
        let t = random_automaton(&mut rng, &cfg);
        let a = gen.obligation(&mut rng);
        let b = conditional.then(|| gen.obligation(&mut rng));
        let v = match &b {
            Some(b) => check_conditional_ought(&t, "alpha", &a, b),
            None => check_ought(&t, "alpha", &a),
        };
        let v = match v {
            Err(McError::UnsupportedObligation(..)) => {
                tally.unsupported += 1;
                continue;
            }
            r => r.expect("random automata are valid"),
        };
        tally.compared += 1;
        tally.holds += v.holds as usize;
        tally.vacuous += v.vacuous as usize;
        let or = AutomatonOracle::new(&t);
        if let Err(e) = compare(&or, &v, &a, b.as_ref()) {
            let cond = b.map(|b| format!(" / {b}")).unwrap_or_default();
            tally.disagreements.push(format!("{e}\nobligation {a}{cond}\n{}", t.to_json()));
        }
    }
    tally
}

/// `extremal_values` against the extremes of lasso bottlenecks.
pub fn extremal_suite(seed: u64, n: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = RandomAutomatonConfig::default();
    let mut tally = Tally::new("extremal values");
    for _ in 0..n {
        let t = random_automaton(&mut rng, &cfg);
        let e = extremal_values(&t).unwrap();
        let or = AutomatonOracle::new(&t);
        let values: Vec<Value> = or.histories().iter().map(|h| or.value(h)).collect();
        let (lo, hi) = (*values.iter().min().unwrap(), *values.iter().max().unwrap());
        tally.check((e.lo, e.hi) == (lo, hi), || format!("[{}, {}] vs oracle [{lo}, {hi}]\n{}", e.lo, e.hi, t.to_json()));
    }
    tally
}

/// Unrolled models satisfy every model axiom.
pub fn unroll_suite(seed: u64, n: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = RandomAutomatonConfig::default();
    let mut tally = Tally::new("unroll validity");
    for i in 0..n {
        let t = random_automaton(&mut rng, &cfg);
        let depth = 1 + i % 4;
        let m = unroll(&t, depth, "alpha").unwrap();
        let v = validate_model(&m);
        tally.check(v.is_empty(), || format!("depth {depth}: {:?}\n{}", v, t.to_json()));
    }
    tally
}

type Trace = Vec<(String, String)>;

fn traces(t: &StitAutomaton, len: usize, first: Option<&str>, rename: &dyn Fn(&str) -> String) -> BTreeSet<Trace> {
    fn go(t: &StitAutomaton, at: &str, len: usize, first: Option<&str>, rename: &dyn Fn(&str) -> String, path: &mut Trace, out: &mut BTreeSet<Trace>) {
        if path.len() == len {
            out.insert(path.clone());
            return;
        }
        let outgoing: Vec<&Transition> = t.transitions.iter().filter(|x| x.from == at).collect();
        for x in outgoing {
            if path.is_empty() && first.is_some_and(|k| k != x.action) {
                continue;
            }
            path.push((x.action.clone(), rename(&x.to)));
            go(t, &x.to, len, first, rename, path, out);
            path.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(t, &t.init, len, first, rename, &mut Vec::new(), &mut out);
    out
}

/// Depth-limited traces of `T_n′`, read through its origin map, equal the
/// traces of `T` that start with `K_n`. Labels are compared through the
/// origin map as well.
pub fn primed_trace_suite(seed: u64, n: usize, depth: usize) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = RandomAutomatonConfig::default();
    let mut tally = Tally::new("primed traces");
    for _ in 0..n {
        let t = random_automaton(&mut rng, &cfg);
        for k in t.first_actions() {
            let tn = restrict_first_action(&t, &k).unwrap();
            let primed = prime_automaton(&tn, &t);
            let origin = |s: &str| primed.origin[s].clone();
            let lhs = traces(&primed.automaton, depth, None, &origin);
            let rhs = traces(&t, depth, Some(&k), &|s: &str| s.to_string());
            let labels_ok = primed.automaton.states.iter().all(|s| primed.automaton.labels_of(s) == t.labels_of(&origin(s)));
            let init_ok = origin(&primed.automaton.init) == t.init;
            tally.check(lhs == rhs && labels_ok && init_ok, || format!("action {k}\n{}", t.to_json()));
        }
    }
    tally
}

/// `m` first actions on an automaton whose state set does not depend on `m`.
/// Each first action enters a lane; every lane is reachable from the shared
/// core, so each branch explores the same subgraph.
pub fn complexity_family(m: usize) -> StitAutomaton {
    const LANES: usize = 10;
    assert!((1..=LANES).contains(&m));
    let mut states = vec!["q0".to_string()];
    states.extend((1..=LANES).map(|i| format!("s{i}")));
    states.extend((0..6).map(|i| format!("c{i}")));
    let tr = |from: String, action: &str, to: String, w: i64| Transition { from, action: action.into(), to, weight: Value::int(w) };
    let mut transitions = Vec::new();
    for i in 1..=LANES {
        if i <= m {
            transitions.push(tr("q0".into(), &format!("K{i}"), format!("s{i}"), 1 + (i as i64 % 5)));
        }
        transitions.push(tr(format!("s{i}"), "go", format!("s{i}"), 1 + (i as i64 * 3) % 5));
        transitions.push(tr(format!("s{i}"), "go", format!("c{}", i % 6), 2));
    }
    for c in 0..6 {
        transitions.push(tr(format!("c{c}"), "go", format!("c{}", (c + 1) % 6), 1 + c as i64 % 4));
        for lane in [c + 1, c + 7].into_iter().filter(|&l| l <= LANES) {
            transitions.push(tr(format!("c{c}"), "back", format!("s{lane}"), 3));
        }
    }
    let mut actions: Vec<String> = (1..=LANES).map(|i| format!("K{i}")).collect();
    actions.extend(["go".to_string(), "back".to_string()]);
    let labels = states
        .iter()
        .enumerate()
        .filter(|(i, _)| i % 3 == 0)
        .map(|(_, s)| (s.clone(), vec!["p".to_string()]))
        .collect();
    StitAutomaton {
        states,
        init: "q0".into(),
        final_states: Vec::new(),
        actions,
        transitions,
        labels,
        accumulation: deontic_mc::automaton::Accumulation::Min,
    }
}
