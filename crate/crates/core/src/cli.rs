//! Command-line front end. Every subcommand is a thin adapter over the
//! library; exit code 0 means success, 2 an infeasible or insufficient
//! instance, 1 a usage or validation error.

use crate::anchors::{anchor_weights, AnchorError};
use crate::constructions::{
    boolean_counterexample, counterexample_for, grid_counterexample_on, label_wall, zero_grid, zero_triangles, Core,
    Labelling,
};
use crate::graph::LabelledGraph;
use crate::group::{epp_condition, epp_mod, EppVerdict, Group, GroupElement};
use crate::linkage::{max_pure_sublinkage, Linkage};
use crate::oracle::{certify, sweep, Query, WitnessKind};
use crate::reduction::{reduce, verify_reduction, ReductionError};
use crate::wall::{extract_zero_subwall, ExtractionResult, Wall};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "epp", version, about = "Erdős–Pósa toolkit for group-labelled A-paths")]
pub struct Cli {
    /// Output format; sweeps default to tsv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps and anchor checks.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the group condition for A-paths of weight gamma.
    EppCheck {
        #[arg(long, value_delimiter = ',', required = true)]
        moduli: Vec<i64>,
        #[arg(long)]
        gamma: String,
    },
    /// Decide the condition for Z_m and residue d.
    EppMod {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        m: i64,
    },
    /// Build a counterexample graph.
    Counterexample {
        #[arg(long, value_delimiter = ',', required = true)]
        moduli: Vec<i64>,
        /// Target weight (ignored by the boolean family).
        #[arg(long, default_value = "0")]
        gamma: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FamilyKind::Grid)]
        family: FamilyKind,
        /// Put the attachments on an elementary wall instead of the grid.
        #[arg(long)]
        wall_core: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum packing of target witnesses.
    Pack(OracleArgs),
    /// Minimum cover of target witnesses.
    Cover(OracleArgs),
    /// Packing and covering numbers over a family.
    Sweep {
        #[arg(long, value_enum)]
        family: SweepFamily,
        /// Range such as 2..5 (inclusive) or a single value.
        #[arg(long)]
        n: String,
    },
    /// Build a labelled elementary wall, optionally extracting a zero subwall.
    Wall {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        moduli: Vec<i64>,
        /// const:<residues>, random, or sparse:<probability>.
        #[arg(long, default_value = "const:0")]
        label: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        extract_zero: bool,
        #[arg(long, default_value_t = 1)]
        target: usize,
    },
    /// Relabel a weight-gamma instance into a weight-0 instance.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Anchor set and anchor weights for a terminal set B.
    Anchors {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "B", value_delimiter = ',', required = true)]
        b: Vec<usize>,
    },
    /// Largest pure sublinkage.
    Purelink {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Grid,
    Boolean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepFamily {
    /// Grid counterexample for Z4 and weight 1.
    Z4Gamma1,
    /// Boolean counterexample over Z2xZ2 and weight 0.
    BooleanZ2z2,
    /// n disjoint zero triangles, zero cycles.
    ZeroTriangles,
    /// n x n zero grid with boundary terminals, zero A-paths.
    ZeroGrid,
}

#[derive(Debug, clap::Args)]
pub struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    gamma: String,
    #[arg(long, default_value = "a-paths")]
    kind: String,
    /// Minimum number of edges (default 1 for paths, 3 for cycles).
    #[arg(long, default_value_t = 0)]
    min_length: usize,
    #[arg(long, default_value_t = crate::graph::DEFAULT_WITNESS_CAP)]
    cap: usize,
    #[arg(long)]
    node_limit: Option<u64>,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn infeasible(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Parses `[1,2]`, `1` or `1,2` as residues of `g`.
fn parse_element(g: &Group, text: &str, field: &str) -> Result<GroupElement, Failure> {
    let t = text.trim();
    let residues: Vec<i64> = if t.starts_with('[') {
        serde_json::from_str(t).map_err(|e| usage(format!("{field}: {e}")))?
    } else {
        t.split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|e| usage(format!("{field}: {x:?}: {e}"))))
            .collect::<Result<_, _>>()?
    };
    g.element(&residues).map_err(|e| usage(format!("{field}: {e}")))
}

fn group(moduli: &[i64]) -> Result<Group, Failure> {
    Group::new(moduli).map_err(|e| usage(format!("--moduli: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<LabelledGraph, Failure> {
    LabelledGraph::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn verdict_json(g: &Group, gamma: &GroupElement, v: &EppVerdict) -> Value {
    json!({"group": g.to_string(), "gamma": gamma, "holds": v.holds, "witness": v.witness})
}

fn parse_range(text: &str) -> Result<Vec<usize>, Failure> {
    let bad = || usage(format!("--n: expected a..b or a number, got {text:?}"));
    match text.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![text.trim().parse().map_err(|_| bad())?]),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    let newline = if text.ends_with('\n') { "" } else { "\n" };
    match out.write_all(text.as_bytes()).and_then(|()| out.write_all(newline.as_bytes())) {
        // A closed pipe (`| head`) is not an error.
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(usage(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn write_or_emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => emit(out, text),
    }
}

fn graph_text(g: &LabelledGraph, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(g.to_json()),
        Format::Dot => Ok(g.to_dot()),
        Format::Tsv => Err(usage("--format tsv is only available for sweeps")),
    }
}

fn parse_labelling(text: &str, g: &Group, seed: Option<u64>) -> Result<Labelling<'static>, Failure> {
    let need_seed = || seed.ok_or_else(|| usage("--seed is required for random labels"));
    if let Some(rest) = text.strip_prefix("const:") {
        Ok(Labelling::Constant(parse_element(g, rest, "--label")?))
    } else if text == "random" {
        Ok(Labelling::Random(need_seed()?))
    } else if let Some(p) = text.strip_prefix("sparse:") {
        let p: f64 = p.parse().map_err(|_| usage(format!("--label: bad probability {p:?}")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(usage("--label: probability must lie in [0, 1]"));
        }
        Ok(Labelling::Sparse { seed: need_seed()?, p })
    } else {
        Err(usage(format!("--label: expected const:<residues>, random or sparse:<p>, got {text:?}")))
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let format = cli.format;
    let json_only = |what: &str| match format {
        None | Some(Format::Json) => Ok(()),
        Some(f) => Err(usage(format!("{what} does not support --format {f:?}").to_lowercase())),
    };
    match cli.command {
        Command::EppCheck { moduli, gamma } => {
            json_only("epp-check")?;
            let g = group(&moduli)?;
            let gamma = parse_element(&g, &gamma, "--gamma")?;
            let v = epp_condition(&g, &gamma).map_err(|e| usage(e.to_string()))?;
            emit(out, &pretty(&verdict_json(&g, &gamma, &v)))
        }
        Command::EppMod { d, m } => {
            json_only("epp-mod")?;
            let v = epp_mod(d, m).map_err(|e| usage(e.to_string()))?;
            let g = group(&[m])?;
            let gamma = g.reduce(&[d]).map_err(|e| usage(e.to_string()))?;
            emit(out, &pretty(&verdict_json(&g, &gamma, &v)))
        }
        Command::Counterexample { moduli, gamma, n, family, wall_core, out: path } => {
            let g = group(&moduli)?;
            let graph = match family {
                FamilyKind::Grid => {
                    let gamma = parse_element(&g, &gamma, "--gamma")?;
                    let cx = counterexample_for(&g, &gamma, n).map_err(|e| match e {
                        crate::constructions::ConstructionError::ConditionHolds { .. } => infeasible(e.to_string()),
                        other => usage(other.to_string()),
                    })?;
                    if wall_core {
                        grid_counterexample_on(&g, n, cx.alphas, Core::Wall).map_err(|e| usage(e.to_string()))?.graph
                    } else {
                        cx.graph
                    }
                }
                FamilyKind::Boolean => boolean_counterexample(&g, n).map_err(|e| infeasible(e.to_string()))?,
            };
            write_or_emit(out, path.as_deref(), &graph_text(&graph, format.unwrap_or(Format::Json))?)
        }
        Command::Pack(args) => oracle_command(out, format, args, true),
        Command::Cover(args) => oracle_command(out, format, args, false),
        Command::Sweep { family, n } => {
            let ns = parse_range(&n)?;
            let build = move |n: usize| -> Result<(LabelledGraph, Query), String> {
                Ok(match family {
                    SweepFamily::Z4Gamma1 => {
                        let g = Group::new(&[4]).map_err(|e| e.to_string())?;
                        let gamma = g.element(&[1]).map_err(|e| e.to_string())?;
                        let cx = counterexample_for(&g, &gamma, n).map_err(|e| e.to_string())?;
                        (cx.graph, Query::new(WitnessKind::APaths, gamma))
                    }
                    SweepFamily::BooleanZ2z2 => {
                        let g = Group::new(&[2, 2]).map_err(|e| e.to_string())?;
                        (boolean_counterexample(&g, n).map_err(|e| e.to_string())?, Query::new(WitnessKind::APaths, g.zero()))
                    }
                    SweepFamily::ZeroTriangles => {
                        let g = Group::new(&[2]).map_err(|e| e.to_string())?;
                        (zero_triangles(&g, n), Query::new(WitnessKind::Cycles, g.zero()))
                    }
                    SweepFamily::ZeroGrid => {
                        let g = Group::new(&[2]).map_err(|e| e.to_string())?;
                        (zero_grid(&g, n), Query::new(WitnessKind::APaths, g.zero()))
                    }
                })
            };
            let (rows, verdict) = sweep(&ns, cli.jobs, build).map_err(|e| infeasible(e.to_string()))?;
            match format.unwrap_or(Format::Tsv) {
                Format::Tsv => {
                    let mut s = String::from("n\tnu\ttau\truntime_ms\n");
                    for r in &rows {
                        s.push_str(&format!("{}\t{}\t{}\t{}\n", r.n, r.nu, r.tau, r.runtime_ms));
                    }
                    s.push_str(&format!("# verdict: {verdict}\n"));
                    emit(out, &s)
                }
                Format::Json => emit(out, &pretty(&json!({"rows": rows, "verdict": verdict}))),
                Format::Dot => Err(usage("sweep does not support --format dot")),
            }
        }
        Command::Wall { rows, cols, moduli, label, seed, extract_zero, target } => {
            let g = group(&moduli)?;
            let strategy = parse_labelling(&label, &g, seed)?;
            if rows < 2 || cols < 2 {
                return Err(infeasible(format!("wall {rows}x{cols} is too small (need at least 2x2)")));
            }
            let w = Wall::elementary(&g, rows, cols).map_err(|e| usage(e.to_string()))?;
            let w = label_wall(&w, &strategy).map_err(|e| usage(e.to_string()))?;
            let fmt = format.unwrap_or(Format::Json);
            if fmt == Format::Tsv {
                return Err(usage("wall does not support --format tsv"));
            }
            if !extract_zero {
                let text = if fmt == Format::Dot { w.to_dot() } else { w.to_json() };
                return emit(out, &text);
            }
            let report = extract_zero_subwall(&w, target).map_err(|e| usage(e.to_string()))?;
            let text = match (&report.result, fmt) {
                (ExtractionResult::Success { wall }, Format::Dot) => wall.to_dot(),
                _ => pretty(&report.to_json()),
            };
            emit(out, &text)?;
            match report.result {
                ExtractionResult::Success { .. } => Ok(()),
                ExtractionResult::Insufficient { pass, reason } => {
                    Err(infeasible(format!("insufficient at {pass}: {reason}")))
                }
            }
        }
        Command::Reduce { input, gamma, out: path } => {
            let g = load_graph(&input)?;
            let gamma = parse_element(g.group(), &gamma, "--gamma")?;
            let r = reduce(&g, &gamma).map_err(|e| match e {
                ReductionError::NoDelta(_) => infeasible(e.to_string()),
                other => usage(format!("{}: {other}", input.display())),
            })?;
            let pruned = g
                .rebuild(&g.a_set(), |i, e| (!r.removed_a_edges.contains(&i)).then(|| e.label.clone()))
                .map_err(|e| usage(e.to_string()))?;
            let check = verify_reduction(&pruned, &r.h, &gamma).map_err(|e| usage(e.to_string()))?;
            let h_text = graph_text(&r.h, format.unwrap_or(Format::Json))?;
            let summary = json!({
                "delta": r.delta,
                "removed_a_edges": r.removed_a_edges,
                "a_matching": r.a_matching,
                "a_cover": r.a_cover,
                "verified": check.equal,
                "discrepancy": check.discrepancy,
            });
            match path {
                Some(p) => {
                    write_or_emit(out, Some(&p), &h_text)?;
                    emit(out, &pretty(&summary))
                }
                None if format == Some(Format::Dot) => emit(out, &h_text),
                None => {
                    let h: Value = serde_json::from_str(&h_text).expect("graph json");
                    let mut all = summary;
                    all["h"] = h;
                    emit(out, &pretty(&all))
                }
            }
        }
        Command::Anchors { input, b } => {
            json_only("anchors")?;
            let g = load_graph(&input)?;
            match anchor_weights(&g, &b, cli.jobs) {
                Ok(report) => emit(out, &pretty(&json!(report))),
                Err(AnchorError::NonZeroBPath(p)) => {
                    emit(out, &pretty(&json!({"hypothesis": false, "path": p})))?;
                    Err(infeasible(AnchorError::NonZeroBPath(p).to_string()))
                }
                Err(e) => Err(usage(format!("{}: {e}", input.display()))),
            }
        }
        Command::Purelink { input } => {
            json_only("purelink")?;
            let text = read(&input)?;
            let raw: Linkage =
                serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", input.display())))?;
            let l = Linkage::new(raw.intervals).map_err(|e| usage(format!("{}: {e}", input.display())))?;
            if l.is_empty() {
                return Err(usage(format!("{}: intervals: linkage is empty", input.display())));
            }
            let (class, sub) = max_pure_sublinkage(&l);
            emit(out, &pretty(&json!({"class": class, "size": sub.len(), "intervals": sub.intervals})))
        }
    }
}

fn oracle_command(out: &mut dyn Write, format: Option<Format>, args: OracleArgs, pack: bool) -> Result<(), Failure> {
    if !matches!(format, None | Some(Format::Json)) {
        return Err(usage("pack and cover only support --format json"));
    }
    let g = load_graph(&args.input)?;
    let gamma = parse_element(g.group(), &args.gamma, "--gamma")?;
    let kind: WitnessKind = args.kind.parse().map_err(|e: crate::oracle::OracleError| usage(format!("--kind: {e}")))?;
    let mut q = Query::new(kind, gamma).min_length(args.min_length);
    q.cap = args.cap;
    q.node_limit = args.node_limit;
    let c = certify(&g, &q).map_err(|e| infeasible(format!("{}: {e}", args.input.display())))?;
    let v = if pack {
        json!({"nu": c.nu, "packing": c.packing, "exhaustive": c.exhaustive, "witnesses": c.witnesses})
    } else {
        json!({"tau": c.tau, "cover": c.cover, "exhaustive": c.exhaustive, "witnesses": c.witnesses})
    };
    emit(out, &pretty(&v))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
