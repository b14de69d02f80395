//! Command-line front end: `analyze`, `generate`, `audit bese|lattice`, `verdict`.
//!
//! Every report is a JSON object with sorted keys carrying `version`,
//! `schema` and `field`. Exit codes: 0 success, 1 input error, 2 budget or
//! search failure, 3 internal inconsistency.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{Field, FieldSpec, Gf, Rationals};
use crate::defect::{defect_of_points, factoriality_verdict, VerdictInputs};
use crate::error::Error;
use crate::piclattice::{lattice_audit, GramTable};
use crate::projgeo::{eisenbud_koh_check, parse_points, pencil_of_quadrics_test, read_field_header, PointConfig};
use crate::quartic::{
    birational_models, certify_node, contains_plane, contains_quadric_surface, generate_example, lines_through_node,
    node_on_y, parse_quartic_input, singular_points_enumerate, NodeRecord, QuadricSearch, QuarticInput,
};
use crate::surfgeo::{bese_invariants, condition_iii_bound, condition_iii_classes, RuledClass};

pub const DEFAULT_BUDGET: u128 = 1 << 32;
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "nodal-quartic", version, about = "Nodes, defect and factoriality audits of quartic threefolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full analysis of a quartic: nodes, containment facts, configuration, defect, verdict.
    Analyze(AnalyzeArgs),
    /// Seeded example `Q Q' - L C` with 12 nodes rational over `GF(p^2)`.
    Generate {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u128,
    },
    /// Recomputed numerical tables.
    Audit {
        #[command(subcommand)]
        which: AuditCommand,
    },
    /// The decision-tree verdict only.
    Verdict(AnalyzeArgs),
}

#[derive(Debug, clap::Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Overrides the `field` header of the input.
    #[arg(long)]
    pub field: Option<FieldSpec>,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Singular points to certify instead of searching.
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum AuditCommand {
    Bese {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Lattice {
        /// JSON 3x3 symmetric matrix of pairings of `h, f, e`.
        #[arg(long)]
        gram: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. } | Error::SearchFailed(_)) => 2,
            CliError::Core(Error::Inconsistency(_)) => 3,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        msg: e.to_string(),
    })
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

/// Adds the common header fields to a report object.
fn envelope(command: &str, field: Option<FieldSpec>, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("report is an object");
    obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    obj.insert("schema".into(), json!(format!("nodal-quartic/{command}/v{SCHEMA_VERSION}")));
    obj.insert("field".into(), field.map_or(Value::Null, |f| json!(f.to_string())));
    body
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command; the returned text is what goes to standard output.
pub fn execute(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Analyze(a) => {
            let report = analyze_file(a)?;
            emit(&report, a.out.as_deref())
        }
        Command::Verdict(a) => {
            let full = analyze_file(a)?;
            let keep = ["field", "s", "defect", "verdict", "containment", "nodal"];
            let body: serde_json::Map<String, Value> = full
                .as_object()
                .expect("object")
                .iter()
                .filter(|(k, _)| keep.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect();
            let field = a.field.or(read_field_header(&read(&a.input)?)?);
            emit(&envelope("verdict", field, Value::Object(body)), a.out.as_deref())
        }
        Command::Generate { seed, p, out, budget } => cmd_generate(*seed, *p, out, *budget),
        Command::Audit { which } => match which {
            AuditCommand::Bese { out } => emit(&audit_bese()?, out.as_deref()),
            AuditCommand::Lattice { gram, out } => {
                let g = match gram {
                    Some(path) => serde_json::from_str::<GramTable>(&read(path)?)
                        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
                    None => GramTable::printed(),
                };
                let body = json!({ "audit": to_value(&lattice_audit(&g)) });
                emit(&envelope("audit-lattice", None, body), out.as_deref())
            }
        },
    }
}

fn emit(report: &Value, out: Option<&Path>) -> CliResult<String> {
    let text = render(report);
    match out {
        Some(path) => {
            write(path, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn check_budget(budget: u128) -> CliResult<()> {
    if budget == 0 {
        return Err(CliError::Usage("--budget must be positive".into()));
    }
    Ok(())
}

fn analyze_file(a: &AnalyzeArgs) -> CliResult<Value> {
    check_budget(a.budget)?;
    let text = read(&a.input)?;
    let spec = match a.field {
        Some(f) => f,
        None => read_field_header(&text)?
            .ok_or_else(|| CliError::Usage("no field: add a `field p=..` header or pass --field".into()))?,
    };
    let points = a.points.as_deref().map(read).transpose()?;
    let body = match spec {
        FieldSpec::Rationals => analyze(&Rationals, &text, points.as_deref(), a.budget)?,
        FieldSpec::Finite { .. } => analyze(&Gf::from_spec(spec)?, &text, points.as_deref(), a.budget)?,
    };
    Ok(envelope("analyze", Some(spec), body))
}

/// The analysis pipeline over a fixed field.
pub fn analyze<F: Field>(field: &F, text: &str, points: Option<&str>, budget: u128) -> Result<Value, Error> {
    let inp = parse_quartic_input(field, text)?;
    let records = singular_records(&inp, points, budget)?;
    let nodal = records.iter().all(|r| r.is_node);
    let node_source = match (points, field.as_finite()) {
        (Some(_), _) => "supplied points, certified".to_string(),
        (None, Some(gf)) => format!("all singular points over {}", gf.spec()),
        (None, None) => unreachable!("checked in singular_records"),
    };
    let nodes: Vec<_> = records.iter().filter(|r| r.is_node).map(|r| r.point.clone()).collect();
    let s = nodes.len();
    let plane = contains_plane(&inp.f, budget)?;
    let quadric = match &inp.decomposition {
        Some(d) => contains_quadric_surface(
            &inp.f,
            QuadricSearch::Candidate {
                l: d.l.clone(),
                q: d.q.clone(),
            },
        )?,
        None => contains_quadric_surface(&inp.f, QuadricSearch::Search { budget })?,
    };
    let inputs = VerdictInputs {
        contains_plane: plane.contains_plane(),
        contains_quadric: quadric.contains_quadric(),
    };
    let cfg = PointConfig::new(field, 4, nodes)?;
    let configuration = if s == 0 {
        Value::Null
    } else {
        json!({
            "span_dim": cfg.span_dim(&cfg.all_indices())?,
            "quadrics": to_value(&pencil_of_quadrics_test(&cfg)?),
            "eisenbud_koh": to_value(&eisenbud_koh_check(&cfg, 3)?),
        })
    };
    let defect = if s == 0 { 0 } else { defect_of_points(&cfg, 3)? };
    let verdict = if nodal {
        let v = factoriality_verdict(s, inputs, &cfg)?;
        if !v.consistent {
            return Err(Error::Inconsistency(format!(
                "decision tree gives {:?} but the defect is {}",
                v.theorem_path, v.defect
            )));
        }
        to_value(&v)
    } else {
        Value::Null
    };
    Ok(json!({
        "s": s,
        "nodal": nodal,
        "node_source": node_source,
        "singular_points": records.iter().map(|r| to_value(&r.to_json(field))).collect::<Vec<_>>(),
        "decomposition": inp.decomposition.as_ref().map(|d| json!({
            "Q": d.q.to_string(), "Q'": d.q_prime.to_string(), "L": d.l.to_string(), "C": d.c.to_string(),
        })),
        "degenerate": inp.degenerate,
        "containment": { "plane": to_value(&plane), "quadric_surface": to_value(&quadric) },
        "configuration": configuration,
        "defect": defect,
        "verdict": verdict,
    }))
}

fn singular_records<F: Field>(inp: &QuarticInput<F>, points: Option<&str>, budget: u128) -> Result<Vec<NodeRecord<F>>, Error> {
    let field = inp.field();
    if let Some(text) = points {
        let cfg = parse_points(field, text)?;
        if cfg.ambient_dim() != 4 {
            return Err(Error::dimension("supplied points must lie in P^4"));
        }
        return cfg
            .points()
            .iter()
            .map(|x| {
                let r = certify_node(&inp.f, x)?;
                if !r.gradient_zero {
                    return Err(Error::invalid(format!("supplied point {} is not singular", x.format(field))));
                }
                Ok(r)
            })
            .collect();
    }
    let Some(gf) = field.as_finite() else {
        return Err(Error::invalid("over Q the singular points must be supplied with --points"));
    };
    let f = inp.f.map_coefficients(gf, |c| field.to_finite_elem(c).expect("finite"));
    singular_points_enumerate(&f, budget)?
        .into_iter()
        .map(|r| {
            let coords = r.point.coords().iter().map(|&c| field.from_finite_elem(c).expect("finite")).collect();
            Ok(NodeRecord {
                point: crate::projgeo::ProjPoint::new(field, coords)?,
                gradient_zero: r.gradient_zero,
                hessian_rank: r.hessian_rank,
                is_node: r.is_node,
            })
        })
        .collect()
}

fn cmd_generate(seed: u64, p: u64, out: &Path, budget: u128) -> CliResult<String> {
    check_budget(budget)?;
    let ex = generate_example(seed, p, budget)?;
    let field = ex.input.field().clone();
    let (y, y_prime) = birational_models(&ex.input)?;
    let cfg = PointConfig::new(&field, 4, ex.nodes.iter().map(|n| n.point.clone()).collect())?;
    let model_json = |m: &crate::quartic::ModelY<Gf>| -> CliResult<Value> {
        Ok(json!({
            "equations": m.equations.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "node": to_value(&node_on_y(m)?),
        }))
    };
    let lines = lines_through_node(&y, 4, budget)?;
    fs::create_dir_all(out).map_err(|e| CliError::Io {
        path: out.to_path_buf(),
        msg: e.to_string(),
    })?;
    let stem = format!("quartic_p{p}_seed{seed}");
    let instance = out.join(format!("{stem}.txt"));
    write(&instance, &ex.render())?;
    let body = json!({
        "instance": instance.file_name().map(|n| n.to_string_lossy().into_owned()),
        "generation": to_value(&ex.log),
        "nodes": ex.nodes.iter().map(|n| to_value(&n.to_json(&field))).collect::<Vec<_>>(),
        "defect": defect_of_points(&cfg, 3)?,
        "quadrics": to_value(&pencil_of_quadrics_test(&cfg)?),
        "models": { "Y": model_json(&y)?, "Y'": model_json(&y_prime)? },
        "lines_through_node": to_value(&lines),
    });
    let report = render(&envelope("generate", Some(field.spec()), body));
    write(&out.join(format!("{stem}.json")), &report)?;
    Ok(report)
}

/// The three instances of the ruled-surface tables: `(r, D)`.
pub const BESE_INSTANCES: [(u32, i64, i64); 3] = [(0, 3, 3), (2, 3, 6), (2, 2, 5)];

pub fn audit_bese() -> Result<Value, Error> {
    let mut instances = Vec::new();
    for (r, a, b) in BESE_INSTANCES {
        let d = RuledClass::new(a, b);
        let inv = bese_invariants(r, d)?;
        let table: Vec<Value> = condition_iii_classes(r, d)
            .into_iter()
            .map(|c| json!({ "class": [c.a, c.b], "bound": condition_iii_bound(r, d, c) }))
            .collect();
        instances.push(json!({
            "r": r,
            "D": [a, b],
            "rho": inv.rho,
            "h": inv.h,
            "D2": inv.d2,
            "condition_iii": table,
        }));
    }
    Ok(envelope("audit-bese", None, json!({ "instances": instances })))
}
