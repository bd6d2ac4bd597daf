//! Command-line front end. `run` does all the work so that it can be tested
//! in-process; the binary only prints and exits.

pub mod demos;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};
use sha2::{Digest, Sha256};

use crate::automaton::{build_cycle_automaton, enumerate_abstract_schedules, unroll, validate_automaton, StitAutomaton};
use crate::formula::{parse, Statement};
use crate::mc::check_statement;
use crate::rss::fixtures;
use crate::tree_model::{validate_model, ExplicitStitModel, MomentId, TreeModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "deontic-mc", version, about = "Check dominance oughts on stit models and stit automata")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "human", global = true)]
    pub format: Format,
    /// Seed for randomized demonstrations.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a model or automaton file.
    Validate { path: PathBuf },
    /// Evaluate a statement on an explicit model.
    Check {
        model: PathBuf,
        /// Moment id.
        #[arg(long)]
        at: MomentId,
        /// History id; non-ought statements are checked on every history through the moment when absent.
        #[arg(long)]
        history: Option<String>,
        /// Formula, obligation or ought.
        #[arg(long)]
        formula: String,
    },
    /// Decide an ought at the root of an automaton's model.
    Mc {
        automaton: PathBuf,
        /// Agent whose choices are the first actions.
        #[arg(long)]
        agent: String,
        /// Plain or conditional ought.
        #[arg(long)]
        ought: String,
        /// Decide the ought at a moment whose current state is this one.
        #[arg(long)]
        from_state: Option<String>,
        /// Also list the abstract schedules and their values.
        #[arg(long)]
        schedules: bool,
    },
    /// Unroll an automaton into an explicit model.
    Unroll {
        automaton: PathBuf,
        /// Number of transitions below the root, at least 1.
        #[arg(long)]
        depth: usize,
        /// Agent that owns the actions.
        #[arg(long, default_value = "alpha")]
        agent: String,
        /// Output file; the model goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named RSS demonstration.
    Rss {
        /// One of rss1-unavoidable, force-others, fig1-caption, fig2-obligations,
        /// fig3-inference, refrain-refrain, merge-rss6.
        name: String,
    },
    /// Write every built-in fixture to a directory.
    Fixtures {
        /// Target directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs_digest: Option<String>,
    pub exit_code: i32,
    pub result: Json,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Done {
    code: i32,
    result: Json,
    human: Vec<String>,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

#[derive(Default)]
struct Inputs(Vec<u8>);

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, Usage> {
        let bytes = fs::read(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        let mut h = Sha256::new();
        h.update(&bytes);
        self.0.extend_from_slice(&h.finalize());
        String::from_utf8(bytes).map_err(|e| Usage(format!("{}: {e}", path.display())))
    }

    fn digest(&self) -> Option<String> {
        (!self.0.is_empty()).then(|| hex::encode(Sha256::digest(&self.0)))
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let done = dispatch(&cli, &mut inputs);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let (done, err) = match done {
        Ok(d) => (d, None),
        Err(Usage(msg)) => (
            Done {
                code: EXIT_USAGE,
                result: json!({ "error": msg }),
                human: Vec::new(),
            },
            Some(msg),
        ),
    };
    let report = Report {
        command: echo,
        inputs_digest: inputs.digest(),
        exit_code: done.code,
        result: done.result,
        timing_ms: cli.timing.then_some(elapsed),
    };
    let mut stdout = match cli.format {
        Format::Machine => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Human => {
            let mut s = done.human.join("\n");
            if !s.is_empty() {
                s.push('\n');
            }
            if cli.timing {
                s.push_str(&format!("time: {elapsed:.3} ms\n"));
            }
            s
        }
    };
    let stderr = match (&err, cli.format) {
        (Some(msg), Format::Human) => format!("error: {msg}\n"),
        _ => String::new(),
    };
    if err.is_some() && cli.format == Format::Human {
        stdout.clear();
    }
    Outcome {
        code: done.code,
        stdout,
        stderr,
    }
}

fn dispatch(cli: &Cli, inputs: &mut Inputs) -> Result<Done, Usage> {
    match &cli.command {
        Command::Validate { path } => cmd_validate(&inputs.read(path)?),
        Command::Check { model, at, history, formula } => cmd_check(&inputs.read(model)?, *at, history.as_deref(), formula),
        Command::Mc {
            automaton,
            agent,
            ought,
            from_state,
            schedules,
        } => cmd_mc(&inputs.read(automaton)?, agent, ought, from_state.as_deref(), *schedules),
        Command::Unroll { automaton, depth, agent, out } => cmd_unroll(&inputs.read(automaton)?, *depth, agent, out.as_deref()),
        Command::Rss { name } => cmd_rss(name, cli.seed),
        Command::Fixtures { out } => cmd_fixtures(out),
    }
}

enum Loaded {
    Model(ExplicitStitModel),
    Automaton(StitAutomaton),
}

fn load(text: &str) -> Result<Loaded, Usage> {
    let v: Json = serde_json::from_str(text)?;
    let obj = v.as_object().ok_or_else(|| Usage("expected a JSON object".into()))?;
    if obj.contains_key("states") {
        Ok(Loaded::Automaton(serde_json::from_value(v)?))
    } else if obj.contains_key("moments") {
        Ok(Loaded::Model(serde_json::from_value(v)?))
    } else {
        Err(Usage("not a model (no `moments`) or automaton (no `states`)".into()))
    }
}

fn cmd_validate(text: &str) -> Result<Done, Usage> {
    let (kind, violations): (&str, Vec<Json>) = match load(text)? {
        Loaded::Model(m) => ("model", validate_model(&m).iter().map(|v| json!(v)).collect()),
        Loaded::Automaton(t) => ("automaton", validate_automaton(&t).iter().map(|v| json!(v)).collect()),
    };
    let mut human = vec![format!("{kind}: {}", if violations.is_empty() { "valid" } else { "invalid" })];
    for v in &violations {
        let axiom = v["axiom"].as_str().unwrap_or("?");
        human.push(format!("  [{axiom}] {}", v["detail"].as_str().unwrap_or("")));
    }
    Ok(Done {
        code: if violations.is_empty() { EXIT_OK } else { EXIT_FAIL },
        result: json!({ "kind": kind, "valid": violations.is_empty(), "violations": violations }),
        human,
    })
}

fn set(ids: Vec<String>) -> String {
    format!("{{{}}}", ids.join(","))
}

fn cmd_check(text: &str, at: MomentId, history: Option<&str>, formula: &str) -> Result<Done, Usage> {
    let src = match load(text)? {
        Loaded::Model(m) => m,
        Loaded::Automaton(_) => return Err(Usage("check expects an explicit model; use `mc` for automata".into())),
    };
    let m = TreeModel::new(src)?;
    let statement = parse(formula)?;
    if let Some(h) = history {
        m.sat_statement(at, h, &statement)?;
    }
    match &statement {
        Statement::Ought(o) => {
            let members = o.agents.members();
            let actions = m.group_choice(&members, at)?;
            let optimal = m.optimal_actions(&o.agents, at, o.condition.as_ref())?;
            let ext = m.extension(at, &o.body)?;
            let holds = m.sat_ought(at, o)?;
            let mut rows = Vec::new();
            let mut human = vec![
                format!("{}: {}", o, if holds { "holds" } else { "fails" }),
                format!("|A|_{at} = {}", set(m.ids(&ext))),
            ];
            for k in &actions {
                let (opt, guar) = (optimal.contains(k), k.is_subset(&ext));
                human.push(format!(
                    "  action {:<24} optimal={:<5} guarantees={}",
                    set(m.ids(k)),
                    opt,
                    guar
                ));
                rows.push(json!({ "action": m.ids(k), "optimal": opt, "guarantees": guar }));
            }
            let optimal_ids: Vec<Vec<String>> = optimal.actions.iter().map(|k| m.ids(k)).collect();
            Ok(Done {
                code: if holds { EXIT_OK } else { EXIT_FAIL },
                result: json!({
                    "statement": o.to_string(),
                    "moment": at,
                    "holds": holds,
                    "extension": m.ids(&ext),
                    "optimal": optimal_ids,
                    "actions": rows,
                }),
                human,
            })
        }
        _ => {
            let through = m.histories_through(at)?;
            let targets: Vec<String> = match history {
                Some(h) => vec![h.to_string()],
                None => m.ids(&through),
            };
            let mut rows = Vec::new();
            let mut human = Vec::new();
            let mut all = true;
            for h in &targets {
                let v = m.sat_statement(at, h, &statement)?;
                all &= v;
                human.push(format!("  {at}/{h}: {v}"));
                rows.push(json!({ "history": h, "holds": v }));
            }
            human.insert(0, format!("{formula}: {}", if all { "holds" } else { "fails" }));
            Ok(Done {
                code: if all { EXIT_OK } else { EXIT_FAIL },
                result: json!({ "statement": formula, "moment": at, "holds": all, "histories": rows }),
                human,
            })
        }
    }
}

fn cmd_mc(text: &str, agent: &str, ought: &str, from_state: Option<&str>, schedules: bool) -> Result<Done, Usage> {
    let mut t = match load(text)? {
        Loaded::Automaton(t) => t,
        Loaded::Model(_) => return Err(Usage("mc expects an automaton; use `check` for explicit models".into())),
    };
    if let Some(q) = from_state {
        if !t.states.iter().any(|s| s == q) {
            return Err(Usage(format!("unknown state `{q}`")));
        }
        t.init = q.to_string();
    }
    let violations = validate_automaton(&t);
    if let Some(v) = violations.first() {
        return Err(Usage(format!("automaton is invalid: {v}")));
    }
    let o = crate::formula::parse_ought(ought)?;
    let v = check_statement(&t, agent, &o)?;
    let mut human = vec![format!(
        "{o}: {}{}",
        if v.holds { "holds" } else { "fails" },
        if v.vacuous { " (vacuously: no optimal action guarantees the condition)" } else { "" }
    )];
    for i in &v.intervals {
        let opt = v.optimal_actions.contains(&i.action);
        human.push(format!("  {:<12} [{}, {}]{}", i.action, i.lo, i.hi, if opt { " optimal" } else { "" }));
    }
    for c in &v.checks {
        let g = c.guarantees.map_or("-".to_string(), |b| b.to_string());
        human.push(format!("  check {:<12} case={} guarantees={g}", c.action, json!(c.case_taken).as_str().unwrap_or("?")));
    }
    if let Some(a) = &v.failing_action {
        human.push(format!("  failing action: {a}"));
    }
    if let Some(cx) = &v.counterexample {
        human.push(format!("  counterexample: {} ({})^ω violates {}", cx.stem.join(" "), cx.cycle.join(" "), cx.violated));
    }
    let mut result = json!(v);
    result["statement"] = json!(o.to_string());
    if schedules {
        let u = build_cycle_automaton(&t)?;
        let list = enumerate_abstract_schedules(&u)?;
        let names = |ts: &[usize]| -> Vec<String> { ts.iter().map(|&e| u.graph.state_names[u.graph.edges[e].0].clone()).collect() };
        let mut rows = Vec::new();
        human.push(format!("  {} abstract schedules", list.len()));
        for s in &list {
            let lasso = s.concrete(&u);
            let cycles: Vec<Vec<String>> = s.cycles.iter().map(|&c| names(&u.cycles[c])).collect();
            human.push(format!("    value {} via cycles {:?}, stem {}", s.value, cycles, names(&lasso.stem).join(" ")));
            rows.push(json!({ "cycles": cycles, "value": s.value, "stem": names(&lasso.stem), "loop": names(&lasso.cycle) }));
        }
        result["schedules"] = json!(rows);
    }
    Ok(Done {
        code: if v.holds { EXIT_OK } else { EXIT_FAIL },
        result,
        human,
    })
}

fn cmd_unroll(text: &str, depth: usize, agent: &str, out: Option<&Path>) -> Result<Done, Usage> {
    let t = match load(text)? {
        Loaded::Automaton(t) => t,
        Loaded::Model(_) => return Err(Usage("unroll expects an automaton".into())),
    };
    let m = unroll(&t, depth, agent)?;
    let json_text = m.to_json();
    let mut human = Vec::new();
    let result = match out {
        Some(p) => {
            fs::write(p, format!("{json_text}\n")).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
            human.push(format!(
                "wrote {} ({} moments, {} histories)",
                p.display(),
                m.moments.len(),
                m.histories.len()
            ));
            json!({ "out": p.display().to_string(), "moments": m.moments.len(), "histories": m.histories.len() })
        }
        None => {
            human.push(json_text);
            json!({ "model": m })
        }
    };
    Ok(Done { code: EXIT_OK, result, human })
}

fn cmd_rss(name: &str, seed: u64) -> Result<Done, Usage> {
    let assertions = match demos::run_demo(name, seed) {
        None => return Err(Usage(format!("unknown demonstration `{name}`; known: {}", demos::DEMOS.join(", ")))),
        Some(r) => r.map_err(Usage)?,
    };
    let pass = assertions.iter().all(|a| a.pass);
    let mut human = vec![format!("{name}: {}", if pass { "pass" } else { "FAIL" })];
    for a in &assertions {
        human.push(format!("  [{}] {} (expected {}, got {})", if a.pass { "pass" } else { "FAIL" }, a.claim, a.expected, a.actual));
    }
    Ok(Done {
        code: if pass { EXIT_OK } else { EXIT_FAIL },
        result: json!({ "demo": name, "pass": pass, "assertions": assertions }),
        human,
    })
}

fn cmd_fixtures(out: &Path) -> Result<Done, Usage> {
    fs::create_dir_all(out).map_err(|e| Usage(format!("{}: {e}", out.display())))?;
    let mut written = Vec::new();
    for f in fixtures() {
        let p = out.join(format!("{}.json", f.name));
        fs::write(&p, format!("{}\n", f.data.to_json())).map_err(|e| Usage(format!("{}: {e}", p.display())))?;
        written.push(p.display().to_string());
    }
    Ok(Done {
        code: EXIT_OK,
        human: written.iter().map(|p| format!("wrote {p}")).collect(),
        result: json!({ "written": written }),
    })
}
