//! `nabla-pi` command line.
//!
//! Exit status: 0 for an affirmative answer, 1 for a negative one, 2 for
//! any error (reported on stderr as a single `error:` line).

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use nabla_pi::bisim::{check, distinguishing_formula, BisimResult, Goal, Mode, Options, Side, Step};
use nabla_pi::lts::{lts_graph, successors_at, successors_bound_at, theta_text, Transition};
use nabla_pi::modal::{parse_formula, sat_ground, sat_open, FormulaPrinter, SatContext};
use nabla_pi::syntax::{Naming, Term};
use nabla_pi::{encode, parse_decls, parse_prefix, parse_process, Decls, Distinction, Prefix, Process};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "nabla-pi", version, about = "Bisimulation and modal logic checking for the finite pi-calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Quantifier prefix declaring the free names, e.g. "forall x, nabla y".
    #[arg(long, default_value = "")]
    prefix: String,
    /// File of process declarations, one `Name(params) := proc` per line.
    #[arg(long)]
    defs: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a process and print it back.
    Parse {
        /// Process text, or `-` for stdin.
        expr: String,
        #[command(flatten)]
        common: Common,
    },
    /// List the one-step transitions of a process.
    Steps {
        expr: String,
        /// Only bound transitions.
        #[arg(long)]
        bound: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Build the reachable transition graph.
    Lts {
        expr: String,
        /// Write the graph in Graphviz format.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        max_states: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Decide bisimilarity of two processes.
    Bisim {
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = BisimMode::Open)]
        mode: BisimMode,
        /// Extra distinct pairs, e.g. "a#b,c#d" (open mode).
        #[arg(long)]
        distinct: Option<String>,
        /// Give up after exploring this many goals.
        #[arg(long)]
        max_states: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Check a process against a modal formula.
    Check {
        expr: String,
        formula: String,
        #[arg(long, value_enum, default_value_t = CheckMode::Ground)]
        mode: CheckMode,
        #[arg(long)]
        distinct: Option<String>,
        /// Number of fresh names for input modalities (ground mode).
        #[arg(long)]
        fresh: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BisimMode {
    Open,
    Late,
    Early,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMode {
    Ground,
    Open,
}

struct Outcome {
    ok: bool,
    text: String,
    json: Value,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("error: {line}");
            return ExitCode::from(2);
        }
    };
    let json = match &cli.command {
        Command::Parse { common, .. }
        | Command::Steps { common, .. }
        | Command::Lts { common, .. }
        | Command::Bisim { common, .. }
        | Command::Check { common, .. } => common.json,
    };
    match run(cli.command) {
        Ok(out) => {
            if json {
                println!("{}", out.json);
            } else if !out.text.is_empty() {
                println!("{}", out.text.trim_end());
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {}", e.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}

fn report(command: &str, ok: bool, text: String, extra: Value) -> Outcome {
    let mut v = json!({
        "command": command,
        "verdict": ok,
        "witness": null,
        "certificate": null,
        "stats": {"goals": 0, "branches": 0, "time_ms": 0},
    });
    if let (Value::Object(m), Value::Object(x)) = (&mut v, extra) {
        m.extend(x);
    }
    Outcome { ok, text, json: v }
}

fn run(cmd: Command) -> Result<Outcome, String> {
    match cmd {
        Command::Parse { expr, common } => {
            let (p, pf) = load(&[&expr], &common)?;
            let text = Naming::from_prefix(&pf).process(&p[0]);
            Ok(report("parse", true, text.clone(), json!({"process": text})))
        }
        Command::Steps { expr, bound, common } => {
            let (p, pf) = load(&[&expr], &common)?;
            let ts = if bound { successors_bound_at(&p[0], pf.depth()) } else { successors_at(&p[0], pf.depth()) };
            let naming = Naming::from_prefix(&pf);
            let lines: Vec<String> = ts.iter().map(|t| step_line(t, &naming)).collect();
            Ok(report("steps", !lines.is_empty(), lines.join("\n"), json!({"transitions": lines})))
        }
        Command::Lts { expr, dot, max_states, common } => {
            let (p, pf) = load(&[&expr], &common)?;
            let g = lts_graph(&p[0], max_states).map_err(|e| e.to_string())?;
            let naming = Naming::from_prefix(&pf);
            if let Some(path) = dot {
                fs::write(&path, g.to_dot(&naming)).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            let text = format!("{} states, {} transitions", g.states.len(), g.edges.len());
            let extra = json!({"states": g.states.len(), "transitions": g.edges.len()});
            Ok(report("lts", true, text, extra))
        }
        Command::Bisim { left, right, mode, distinct, max_states, common } => {
            let mode = match mode {
                BisimMode::Open => Mode::Open,
                BisimMode::Late => Mode::Late,
                BisimMode::Early => Mode::Early,
            };
            let (ps, pf) = load_for(&[&left, &right], &common, mode != Mode::Open)?;
            let dist = distinction(distinct.as_deref(), &pf)?;
            let goal = Goal::new(&pf, dist, ps[0].clone(), ps[1].clone());
            let opts = Options { max_goals: max_states, ..Options::new(mode) };
            let r = check(&goal, &opts).map_err(|e| e.to_string())?;
            bisim_outcome(&r, &pf)
        }
        Command::Check { expr, formula, mode, distinct, fresh, common } => {
            let start = Instant::now();
            let ground = matches!(mode, CheckMode::Ground);
            let (p, pf) = load_for(&[&expr], &common, ground)?;
            let f = parse_formula(&formula, &pf).map_err(|e| e.to_string())?;
            let dist = distinction(distinct.as_deref(), &pf)?;
            let ok = if ground {
                sat_ground(&p[0], &f, pf.depth(), fresh)
            } else {
                sat_open(&p[0], &f, &SatContext::from_prefix(&pf, dist))
            }
            .map_err(|e| e.to_string())?;
            let text = if ok { "satisfied" } else { "not satisfied" };
            let stats = json!({"goals": 0, "branches": 0, "time_ms": start.elapsed().as_millis() as u64});
            Ok(report("check", ok, text.into(), json!({"stats": stats})))
        }
    }
}

fn load(exprs: &[&str], common: &Common) -> Result<(Vec<Process>, Prefix), String> {
    load_for(exprs, common, false)
}

/// Parse and encode processes. `ground` reads every prefix entry as a
/// nabla, which is how late, early and ground modal checking see names.
fn load_for(exprs: &[&str], common: &Common, ground: bool) -> Result<(Vec<Process>, Prefix), String> {
    let decls = match &common.defs {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            parse_decls(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => Decls::default(),
    };
    let terms: Vec<Term> = exprs.iter().map(|s| parse_process(&input(s)?).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    let mut pf = parse_prefix(&common.prefix).map_err(|e| e.to_string())?;
    if ground {
        pf = pf.to_all_nabla();
    }
    let pf = pf.with_reserved_for(&terms.iter().collect::<Vec<_>>());
    let ps = terms.iter().map(|t| encode(t, &pf, &decls).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    Ok((ps, pf))
}

fn input(arg: &str) -> Result<String, String> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).map_err(|e| format!("stdin: {e}"))?;
    Ok(s)
}

fn distinction(text: Option<&str>, pf: &Prefix) -> Result<Distinction, String> {
    let mut d = Distinction::default();
    for pair in text.unwrap_or("").split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = pair.split_once('#').ok_or_else(|| format!("distinct pair `{pair}` is not of the form a#b"))?;
        let look = |n: &str| pf.lookup(n.trim()).ok_or_else(|| format!("distinct pair names `{}`, which is not in the prefix", n.trim()));
        d.insert(look(a)?, look(b)?).map_err(|e| e.to_string())?;
    }
    Ok(d)
}

fn step_line(t: &Transition, naming: &Naming) -> String {
    let theta = theta_text(&t.theta, naming);
    if t.action.is_bound() {
        let (binder, cont) = naming.abstraction(&t.cont);
        format!("{theta} ; {} ; {cont}", naming.action(t.action, &binder))
    } else {
        format!("{theta} ; {} ; {}", naming.action(t.action, ""), naming.process(&t.cont))
    }
}

fn side_text(s: Side) -> &'static str {
    match s {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn step_json(s: &Step, naming: &Naming) -> Value {
    let binder = s.instance.map(|n| naming.name(n)).unwrap_or_else(|| naming.fresh_binder(&[]));
    json!({
        "side": side_text(s.side),
        "action": naming.action(s.action, &binder),
        "theta": theta_text(&s.theta, naming),
        "move": s.move_index,
        "answer": s.candidate,
    })
}

fn bisim_outcome(r: &BisimResult, pf: &Prefix) -> Result<Outcome, String> {
    let naming = Naming::from_prefix(pf);
    let stats = serde_json::to_value(r.stats).map_err(|e| e.to_string())?;
    let certificate = r.certificate.as_ref().map(|c| serde_json::to_value(c).map_err(|e| e.to_string())).transpose()?;
    let Some(w) = &r.witness else {
        let text = String::from("bisimilar");
        let extra = json!({"mode": r.mode, "goal": r.goal, "certificate": certificate, "stats": stats});
        return Ok(report("bisim", true, text, extra));
    };
    let formula = distinguishing_formula(r).map_err(|e| e.to_string())?;
    let formula_text = FormulaPrinter { naming: &naming }.print(&formula);
    let trace = w.trace();
    let mut text = String::from("not bisimilar\n");
    for s in &trace {
        let j = step_json(s, &naming);
        let answer = s.candidate.map(|c| format!(", answer {c}")).unwrap_or_else(|| ", no answer".into());
        text += &format!("  {} {} {} (move {}{answer})\n", j["side"].as_str().unwrap(), j["theta"].as_str().unwrap(), j["action"].as_str().unwrap(), s.move_index);
    }
    text += &format!("formula: {formula_text}");
    let witness = json!({
        "trace": trace.iter().map(|s| step_json(s, &naming)).collect::<Vec<_>>(),
        "formula": formula_text,
        "tree": w,
    });
    Ok(report("bisim", false, text, json!({"mode": r.mode, "goal": r.goal, "witness": witness, "stats": stats})))
}
