//! `plog`: query, inspect and check P-log programs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use plog::bayes::{self, BayesNet, Intervention};
use plog::coherency::{self, CoherencyReport, Verdict};
use plog::syntax::ast::Statement;
use plog::syntax::ground::ground;
use plog::syntax::parser;
use plog::syntax::program::Program;
use plog::translate::translate;
use plog::updates::{apply_update, Update};
use plog::worlds::{Formula, Model};
use plog::{Error, Rational};

#[derive(Parser)]
#[command(
    name = "plog",
    version,
    about = "Exact inference and coherency analysis for P-log programs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Probability of a formula, e.g. `prize = 3` or `a & ~b | c`.
    Query {
        /// Query formula.
        query: String,
        #[command(flatten)]
        prog: ProgramArgs,
    },
    /// Possible worlds with their unnormalized and normalized measures.
    Worlds {
        #[command(flatten)]
        prog: ProgramArgs,
    },
    /// Coherency analysis: leveling, causal order, unitarity and the resulting verdict.
    Check {
        #[command(flatten)]
        prog: ProgramArgs,
        /// Also print the tableau.
        #[arg(long, value_enum)]
        tableau: Option<TableauFormat>,
    },
    /// Ground program, or its answer-set translation with `--dump-asp`.
    Ground {
        #[command(flatten)]
        prog: ProgramArgs,
        #[arg(long)]
        dump_asp: bool,
    },
    /// Translate a JSON Bayesian network into a P-log program.
    ImportBn {
        net: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compare interventional probabilities of a network with its P-log program under `do`.
    CheckBn {
        net: PathBuf,
        /// Comma-separated intervention such as `a=true,d=false`; repeatable. Default: every intervention.
        #[arg(long = "intervention", short = 'r')]
        interventions: Vec<String>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ProgramArgs {
    /// Program files; statements of all files form one program.
    #[arg(required = true, num_args = 1..)]
    files: Vec<PathBuf>,
    /// Observed literal, e.g. `~found(p1,1)`; repeatable.
    #[arg(long)]
    obs: Vec<String>,
    /// Action atom, e.g. `look(2)=p1`; repeatable.
    #[arg(long = "do")]
    act: Vec<String>,
    /// Extra statements in program syntax; repeatable.
    #[arg(long)]
    add: Vec<String>,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableauFormat {
    Text,
    Dot,
}

/// Exit status for a library error.
fn status(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. }
        | Error::Sort(_)
        | Error::Range(_)
        | Error::TypeMismatch(_)
        | Error::UnboundedSort(_)
        | Error::DuplicateDeclaration(_)
        | Error::InvalidNet(_) => 2,
        Error::Inconsistent => 3,
        Error::ProbabilityUndefined | Error::DefaultUndefined(_) | Error::NegativeDefault { .. } => 4,
        Error::ConditionViolation(_) => 5,
        _ => 1,
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "SyntaxError",
        Error::Sort(_) => "SortError",
        Error::Range(_) => "RangeError",
        Error::TypeMismatch(_) => "TypeMismatch",
        Error::UnboundedSort(_) => "UnboundedSort",
        Error::DuplicateDeclaration(_) => "DuplicateDeclaration",
        Error::InvalidNet(_) => "InvalidNet",
        Error::Inconsistent => "Inconsistent",
        Error::ProbabilityUndefined => "ProbabilityUndefined",
        Error::DefaultUndefined(_) => "DefaultUndefined",
        Error::NegativeDefault { .. } => "NegativeDefault",
        Error::ConditionViolation(_) => "ConditionViolation",
        Error::NotCausallyOrdered(_) => "NotCausallyOrdered",
        _ => "Error",
    }
}

fn decimal(r: &Rational) -> String {
    r.to_decimal(6)
}

fn load(args: &ProgramArgs) -> anyhow::Result<Program> {
    let mut stmts: Vec<Statement> = Vec::new();
    for f in &args.files {
        let src = std::fs::read_to_string(f).with_context(|| format!("cannot read {}", f.display()))?;
        stmts.extend(parser::parse(&src).with_context(|| format!("in {}", f.display()))?);
    }
    let mut p = Program::from_statements(stmts)?;
    if !args.obs.is_empty() {
        p = apply_update(&p, &Update::obs(&args.obs)?)?;
    }
    if !args.act.is_empty() {
        p = apply_update(&p, &Update::act(&args.act)?)?;
    }
    for s in &args.add {
        p = apply_update(&p, &Update::statements(s)?)?;
    }
    Ok(p)
}

fn cmd_query(prog: &ProgramArgs, query: &str) -> anyhow::Result<String> {
    let m = Model::new(&load(prog)?)?;
    let f = m.formula(query)?;
    let p = m.prob(&f)?;
    Ok(if prog.json {
        json!({ "query": f.to_string(), "probability": p.to_fraction_string(), "decimal": decimal(&p) }).to_string()
    } else {
        let shown = f.to_string();
        let shown = match &f {
            Formula::Lit(_) => shown.as_str(),
            _ => &shown[1..shown.len() - 1],
        };
        format!("P({}) = {} ≈ {}", shown, p, decimal(&p))
    })
}

fn cmd_worlds(prog: &ProgramArgs) -> anyhow::Result<String> {
    let m = Model::new(&load(prog)?)?;
    let t = m.table()?;
    if prog.json {
        return Ok(t.to_json().to_string());
    }
    let mut out = String::new();
    let _ = writeln!(out, "{} possible worlds", t.worlds.len());
    for (i, w) in t.worlds.iter().enumerate() {
        let _ = writeln!(out, "W{}: {}", i + 1, w.world);
        let _ = writeln!(
            out,
            "    unnormalized {}  measure {} ≈ {}",
            w.unnormalized,
            w.measure,
            decimal(&w.measure)
        );
    }
    Ok(out.trim_end().to_string())
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::CoherentByTheorem => json!({ "verdict": "coherent-by-theorem" }),
        Verdict::Unknown(why) => json!({ "verdict": "unknown", "reason": why }),
        Verdict::Incoherent(w) => json!({ "verdict": "incoherent", "witness": w.to_string() }),
    }
}

fn report_text(g: &plog::syntax::ground::GroundProgram, rep: &CoherencyReport) -> String {
    let mut out = String::new();
    match &rep.leveling {
        Some(Ok(l)) => {
            let _ = writeln!(out, "leveling: {}", l);
        }
        Some(Err(e)) => {
            let _ = writeln!(out, "leveling: none ({})", e);
        }
        None => {}
    }
    if let Some(fails) = &rep.order {
        if fails.is_empty() {
            let _ = writeln!(out, "causally ordered: yes");
        } else {
            let _ = writeln!(out, "causally ordered: no");
            for f in fails {
                let _ = writeln!(out, "  {}", f);
            }
        }
    }
    if let Some(u) = &rep.unitary {
        let _ = writeln!(out, "unitary: {}", if u.is_unitary() { "yes" } else { "no" });
        for r in &u.rules {
            let _ = writeln!(out, "  {}", g.selections[r.selection]);
            for (i, (sc, c)) in r.scenarios.iter().enumerate() {
                let _ = writeln!(out, "    scenario {} ({} worlds): {}", i + 1, sc.worlds.len(), c);
            }
        }
    }
    if let Some(s) = &rep.semantic {
        let _ = writeln!(out, "direct check:");
        for (_, pr, c) in &s.checks {
            let _ = writeln!(out, "  {}: {}", pr.to_string().trim_end_matches('.'), c);
        }
    }
    let _ = writeln!(out, "verdict: {}", rep.verdict);
    out
}

fn cmd_check(prog: &ProgramArgs, tableau: Option<TableauFormat>) -> anyhow::Result<String> {
    let g = ground(&load(prog)?)?;
    let rep = coherency::coherency_report(&g)?;
    let tab = match (tableau, &rep.leveling) {
        (Some(fmt), Some(Ok(lev))) if rep.order.as_ref().map_or(false, |f| f.is_empty()) => {
            let t = coherency::build_tableau(&g, lev)?;
            Some(match fmt {
                TableauFormat::Text => t.to_text(),
                TableauFormat::Dot => t.to_dot(),
            })
        }
        (Some(_), _) => Some("no tableau: the program is not causally ordered\n".to_string()),
        _ => None,
    };
    if prog.json {
        let mut v = verdict_json(&rep.verdict);
        v["leveling"] = match &rep.leveling {
            Some(Ok(l)) => json!(l
                .ranks
                .iter()
                .map(|(t, r)| (t.to_string(), *r))
                .collect::<std::collections::BTreeMap<_, _>>()),
            _ => Value::Null,
        };
        v["causally_ordered"] = rep.order.as_ref().map_or(Value::Null, |f| json!(f.is_empty()));
        v["unitary"] = rep.unitary.as_ref().map_or(Value::Null, |u| json!(u.is_unitary()));
        if let Some(t) = tab {
            v["tableau"] = json!(t);
        }
        return Ok(v.to_string());
    }
    let mut out = report_text(&g, &rep);
    if let Some(t) = tab {
        out.push_str(&t);
    }
    Ok(out.trim_end().to_string())
}

fn cmd_ground(prog: &ProgramArgs, dump_asp: bool) -> anyhow::Result<String> {
    let g = ground(&load(prog)?)?;
    let text = if dump_asp {
        translate(&g).asp.dump()
    } else {
        g.to_string()
    };
    Ok(if prog.json {
        json!({ "program": text }).to_string()
    } else {
        text.trim_end().to_string()
    })
}

fn read_net(path: &Path) -> anyhow::Result<BayesNet> {
    let src = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(BayesNet::from_json(&src)?)
}

fn cmd_import_bn(path: &Path, as_json: bool) -> anyhow::Result<String> {
    let src = bayes::net_to_plog_source(&read_net(path)?);
    Ok(if as_json {
        json!({ "program": src }).to_string()
    } else {
        src.trim_end().to_string()
    })
}

fn cmd_check_bn(path: &Path, items: &[String], as_json: bool) -> anyhow::Result<(String, bool)> {
    let b = read_net(path)?;
    let rs: Vec<Intervention> = if items.is_empty() {
        bayes::InterventionalDistribution::from_net(&b)
            .rows
            .into_keys()
            .collect()
    } else {
        items
            .iter()
            .map(|s| {
                let parts: Vec<&str> = s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
                b.intervention(&parts)
            })
            .collect::<plog::Result<_>>()?
    };
    let describe = |r: &Intervention| {
        let parts: Vec<String> = r
            .iter()
            .map(|(&i, &j)| format!("{}={}", b.vars[i].name, b.vars[i].domain[j]))
            .collect();
        format!("{{{}}}", parts.join(", "))
    };
    let mut all_ok = true;
    let mut text = String::new();
    let mut rows_json = Vec::new();
    for r in &rs {
        let rows = bayes::theorem_rows(&b, r)?;
        let ok = rows.iter().all(|x| x.net == x.program);
        all_ok &= ok;
        if as_json {
            rows_json.push(json!({
                "intervention": describe(r),
                "holds": ok,
                "rows": rows.iter().map(|x| json!({
                    "assignment": b.describe(&x.assignment),
                    "network": x.net.to_fraction_string(),
                    "program": x.program.to_fraction_string(),
                })).collect::<Vec<_>>(),
            }));
        } else {
            let _ = writeln!(text, "do{}: {}", describe(r), if ok { "equal" } else { "DIFFERENT" });
            for x in &rows {
                let mark = if x.net == x.program { "" } else { "  <-" };
                let _ = writeln!(
                    text,
                    "  {}: network {} program {}{}",
                    b.describe(&x.assignment),
                    x.net,
                    x.program,
                    mark
                );
            }
        }
    }
    let out = if as_json {
        json!({ "holds": all_ok, "interventions": rows_json }).to_string()
    } else {
        text.trim_end().to_string()
    };
    Ok((out, all_ok))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let out = match &cli.cmd {
        Cmd::Query { prog, query } => cmd_query(prog, query)?,
        Cmd::Worlds { prog } => cmd_worlds(prog)?,
        Cmd::Check { prog, tableau } => cmd_check(prog, *tableau)?,
        Cmd::Ground { prog, dump_asp } => cmd_ground(prog, *dump_asp)?,
        Cmd::ImportBn { net, json } => cmd_import_bn(net, *json)?,
        Cmd::CheckBn {
            net,
            interventions,
            json,
        } => {
            let (out, ok) = cmd_check_bn(net, interventions, *json)?;
            emit(&out);
            return Ok(if ok { 0 } else { 1 });
        }
    };
    emit(&out);
    Ok(0)
}

/// Prints to stdout, ignoring a closed pipe.
fn emit(out: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{}", out);
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let code = e.downcast_ref::<Error>().map_or(1, status);
            let name = e.downcast_ref::<Error>().map_or("Error", kind);
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("error[{}]: {}", name, chain.join(": "));
            ExitCode::from(code)
        }
    }
}
