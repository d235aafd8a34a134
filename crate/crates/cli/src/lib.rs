//! Command-line front end. [`run`] takes the argument vector and standard
//! input and returns what the process would print, so the binary is a thin
//! wrapper and tests can drive every path without spawning processes.
//!
//! Exit codes: 0 success, 1 usage, 2 input or domain error, 3 failed
//! verification.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use toric_liaison::graph::{enumerate_cycles_bounded, parse_edge_list, Graph, GraphError};
use toric_liaison::groebner::{render_polys, GroebnerError};
use toric_liaison::liaison::{run_chain, ChainOptions, LiaisonError};
use toric_liaison::pom::{extend_pom, find_maximal_pom, is_maximal, validate_pom, PathOrderedMatching, PomError};
use toric_liaison::poly::{LexOrder, PolyError};
use toric_liaison::simplicial::{verify_corollary_vd, SimplicialError, VdChecker, VdOutcome, VdWitness};
use toric_liaison::toric::{toric_ideal, ToricError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "toric-liaison", version, about = "Toric ideals of bipartite graphs and their biliaison chains")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Refuse inputs with more simple cycles than this.
    #[arg(long, value_name = "N", global = true)]
    pub max_cycles: Option<usize>,
    /// Lex priority list, highest first, e.g. "e3,e1,e2" or "e3 > e1 > e2".
    #[arg(long, value_name = "EDGES", global = true)]
    pub order: Option<String>,
    /// Inline graph: edge lines separated by ';', e.g. "1 3; 3 2; 2 4; 4 1".
    #[arg(long, value_name = "EDGES", global = true)]
    pub graph: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Graph file (edge list or JSON); "-" reads standard input.
    pub input: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the simple cycles.
    Cycles(Input),
    /// Generators of the toric ideal.
    Toric(Input),
    /// Reduced Gröbner basis, initial ideal and height.
    Gb(Input),
    /// Path ordered matchings.
    Pom {
        #[command(subcommand)]
        action: PomAction,
    },
    /// Run and verify the biliaison chain.
    Chain {
        #[command(flatten)]
        input: Input,
        /// Skip the verifiers and emit only the chain skeleton.
        #[arg(long)]
        no_verify: bool,
        /// Matching to start the first stage from, e.g. "e2,e5".
        #[arg(long, value_name = "EDGES")]
        seed_pom: Option<String>,
        /// Write the certificate to a file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Vertex decomposability of the initial complex.
    Vd {
        #[command(flatten)]
        input: Input,
        /// Matching whose ideal is used; empty by default.
        #[arg(long, value_name = "EDGES")]
        pom: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PomAction {
    /// A maximal matching grown from the smallest edge id.
    Find(Input),
    /// Check an ordered edge list.
    Validate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "EDGES")]
        edges: String,
    },
    /// Extend an ordered edge list to a maximal matching.
    Extend {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "EDGES")]
        edges: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pom(#[from] PomError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Liaison(LiaisonError),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl From<PolyError> for CliError {
    fn from(e: PolyError) -> Self {
        CliError::Groebner(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Verification(_) => EXIT_VERIFY,
            _ => EXIT_INPUT,
        }
    }

    /// Short machine-readable name of the failure.
    pub fn kind(&self) -> String {
        match self {
            CliError::Usage(_) => "Usage".into(),
            CliError::Io { .. } => "Io".into(),
            CliError::Graph(e) => graph_kind(e).into(),
            CliError::Pom(e) => pom_kind(e),
            CliError::Toric(ToricError::Graph(e)) => graph_kind(e).into(),
            CliError::Toric(_) => "Toric".into(),
            CliError::Groebner(_) => "Groebner".into(),
            CliError::Simplicial(SimplicialError::Pom(e)) => pom_kind(e),
            CliError::Simplicial(_) => "Simplicial".into(),
            CliError::Liaison(LiaisonError::Graph(e)) => graph_kind(e).into(),
            CliError::Liaison(LiaisonError::Pom(e)) => pom_kind(e),
            CliError::Liaison(LiaisonError::Hypothesis(_)) => "Hypothesis".into(),
            CliError::Liaison(_) => "Liaison".into(),
            CliError::Verification(_) => "VerificationFailed".into(),
        }
    }
}

fn graph_kind(e: &GraphError) -> &'static str {
    match e {
        GraphError::Malformed { .. } => "Malformed",
        GraphError::Loop { .. } => "Loop",
        GraphError::DuplicateEdge { .. } => "DuplicateEdge",
        GraphError::DuplicateEdgeId(_) => "DuplicateEdgeId",
        GraphError::BadVertex(_) => "BadVertex",
        GraphError::UnknownVertex { .. } => "UnknownVertex",
        GraphError::UnknownEdge(_) => "UnknownEdge",
        GraphError::BadEdgeId(_) => "BadEdgeId",
        GraphError::OddCycleFound { .. } => "OddCycleFound",
        GraphError::TooManyCycles { .. } => "TooManyCycles",
        GraphError::Json(_) => "Json",
    }
}

fn pom_kind(e: &PomError) -> String {
    match e {
        PomError::UnknownEdge(_) => "UnknownEdge".into(),
        PomError::NotAMatching(..) => "NotAMatching".into(),
        PomError::ConditionA { .. } => "ConditionA".into(),
        PomError::ConditionB { .. } => "ConditionB".into(),
        PomError::NoFreeVariable(_) => "NoFreeVariable".into(),
        PomError::BadPosition(_) => "BadPosition".into(),
        PomError::Graph(g) => graph_kind(g).into(),
        PomError::Toric(_) => "Toric".into(),
        PomError::Groebner(_) => "Groebner".into(),
    }
}

/// What the process prints and returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let format = cli.format;
    match execute(&cli, stdin) {
        Ok(out) => out,
        Err(e) => {
            let stdout = match format {
                Format::Json => {
                    pretty(&json!({ "error": { "kind": e.kind(), "message": e.to_string() } }))
                }
                Format::Text => String::new(),
            };
            Outcome { code: e.exit_code(), stdout, stderr: format!("error: {e}\n") }
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn ok(stdout: String) -> Result<Outcome, CliError> {
    Ok(Outcome { code: EXIT_OK, stdout, stderr: String::new() })
}

// Flags are checked before the input is read.
fn parsed_order(cli: &Cli) -> Result<Option<Vec<toric_liaison::EdgeId>>, CliError> {
    match &cli.order {
        None => Ok(None),
        Some(s) => {
            let list = parse_edge_list(&s.replace('>', " ")).map_err(|e| CliError::Usage(format!("--order: {e}")))?;
            if list.is_empty() {
                return Err(CliError::Usage("--order: empty list".into()));
            }
            Ok(Some(list))
        }
    }
}

fn usage_edges(flag: &str, s: &str) -> Result<Vec<toric_liaison::EdgeId>, CliError> {
    parse_edge_list(s).map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

fn load_graph(cli: &Cli, input: &Input, stdin: &mut dyn Read) -> Result<Graph, CliError> {
    let text = match (&cli.graph, input.input.as_deref()) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give either --graph or an input file, not both".into()));
        }
        (Some(inline), None) => inline.replace(';', "\n"),
        (None, Some("-")) => {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io { path: "<stdin>".into(), message: e.to_string() })?;
            s
        }
        (None, Some(path)) => {
            fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), message: e.to_string() })?
        }
        (None, None) => return Err(CliError::Usage("no input graph: pass a file, \"-\" or --graph".into())),
    };
    let g = Graph::parse(&text)?;
    if let Some(limit) = cli.max_cycles {
        enumerate_cycles_bounded(&g, Some(limit))?;
    }
    Ok(g)
}

fn order_for(g: &Graph, list: &Option<Vec<toric_liaison::EdgeId>>) -> Result<LexOrder, CliError> {
    match list {
        None => Ok(LexOrder::by_ascending_id(g.edge_ids())),
        Some(list) => {
            let o = LexOrder::new(list.clone())?;
            if let Some(e) = g.edge_ids().find(|e| !o.contains(*e)) {
                return Err(PolyError::UnknownVariable(e).into());
            }
            Ok(o)
        }
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    let order = parsed_order(cli)?;
    match &cli.command {
        Command::Cycles(input) => cmd_cycles(&load_graph(cli, input, stdin)?, cli.format),
        Command::Toric(input) => {
            let g = load_graph(cli, input, stdin)?;
            cmd_toric(&g, &order_for(&g, &order)?, cli.format)
        }
        Command::Gb(input) => {
            let g = load_graph(cli, input, stdin)?;
            cmd_gb(&g, &order_for(&g, &order)?, cli.format)
        }
        Command::Pom { action } => match action {
            PomAction::Find(input) => {
                let g = load_graph(cli, input, stdin)?;
                let p = find_maximal_pom(&g)?;
                pom_report(&g, &p, "found", cli.format)
            }
            PomAction::Validate { input, edges } => {
                let edges = usage_edges("--edges", edges)?;
                let g = load_graph(cli, input, stdin)?;
                let p = validate_pom(&g, &edges)?;
                pom_report(&g, &p, "valid", cli.format)
            }
            PomAction::Extend { input, edges } => {
                let edges = usage_edges("--edges", edges)?;
                let g = load_graph(cli, input, stdin)?;
                let p = extend_pom(&g, &validate_pom(&g, &edges)?)?;
                pom_report(&g, &p, "extended", cli.format)
            }
        },
        Command::Chain { input, no_verify, seed_pom, output } => {
            let seed = seed_pom.as_deref().map(|s| usage_edges("--seed-pom", s)).transpose()?;
            let g = load_graph(cli, input, stdin)?;
            let opts = ChainOptions {
                verify: !no_verify,
                seed_pom: seed,
                order: order.as_ref().map(|_| order_for(&g, &order)).transpose()?,
            };
            cmd_chain(&g, &opts, output.as_ref(), cli.format)
        }
        Command::Vd { input, pom } => {
            let edges = pom.as_deref().map(|s| usage_edges("--pom", s)).transpose()?.unwrap_or_default();
            let g = load_graph(cli, input, stdin)?;
            cmd_vd(&g, &edges, &order, cli.format)
        }
    }
}

pub fn cmd_cycles(g: &Graph, format: Format) -> Result<Outcome, CliError> {
    let cycles = toric_liaison::graph::enumerate_cycles(g);
    match format {
        Format::Json => {
            let list: Vec<Vec<String>> =
                cycles.iter().map(|c| c.edges().iter().map(|e| e.to_string()).collect()).collect();
            ok(pretty(&json!({ "graph": g.snapshot(), "count": cycles.len(), "cycles": list })))
        }
        Format::Text => {
            let mut out = format!("{} cycles\n", cycles.len());
            for c in &cycles {
                out.push_str(&format!("{c}\n"));
            }
            ok(out)
        }
    }
}

pub fn cmd_toric(g: &Graph, ord: &LexOrder, format: Format) -> Result<Outcome, CliError> {
    let p = toric_ideal(g, ord)?;
    let gens = render_polys(p.generators());
    match format {
        Format::Json => ok(pretty(&json!({ "graph": g.snapshot(), "order": ord.to_string(), "generators": gens }))),
        Format::Text => {
            let mut out = format!("order: {ord}\n{} generators\n", gens.len());
            for s in gens {
                out.push_str(&format!("  {s}\n"));
            }
            ok(out)
        }
    }
}

pub fn cmd_gb(g: &Graph, ord: &LexOrder, format: Format) -> Result<Outcome, CliError> {
    let p = toric_ideal(g, ord)?;
    let gb = render_polys(p.reduced_gb()?);
    let init = p.initial_ideal()?;
    let height = init.height()?;
    match format {
        Format::Json => ok(pretty(&json!({
            "graph": g.snapshot(),
            "order": ord.to_string(),
            "reduced_gb": gb,
            "initial_ideal": init.to_string(),
            "height": height,
        }))),
        Format::Text => {
            let mut out = format!("order: {ord}\nreduced Groebner basis ({} elements):\n", gb.len());
            for s in gb {
                out.push_str(&format!("  {s}\n"));
            }
            out.push_str(&format!("initial ideal: {init}\nheight: {height}\n"));
            ok(out)
        }
    }
}

fn pom_report(g: &Graph, p: &PathOrderedMatching, status: &str, format: Format) -> Result<Outcome, CliError> {
    let maximal = is_maximal(g, p);
    let edges: Vec<String> = p.edges().iter().map(|e| e.to_string()).collect();
    match format {
        Format::Json => {
            let labeling: serde_json::Map<String, Value> =
                p.labeling().iter().map(|(v, l)| (v.to_string(), json!(l))).collect();
            ok(pretty(&json!({
                "status": status,
                "edges": edges,
                "length": p.len(),
                "maximal": maximal,
                "labeling": labeling,
            })))
        }
        Format::Text => {
            let mut out = format!("{status}: [{}] length {} maximal {maximal}\n", edges.join(", "), p.len());
            for (v, l) in p.labeling() {
                out.push_str(&format!("  vertex {v} -> {l}\n"));
            }
            ok(out)
        }
    }
}

pub fn cmd_chain(
    g: &Graph,
    opts: &ChainOptions,
    output: Option<&PathBuf>,
    format: Format,
) -> Result<Outcome, CliError> {
    let (cert, failure) = match run_chain(g, opts) {
        Ok(c) => (c, None),
        Err(LiaisonError::VerificationFailed { step, failed, certificate }) => {
            (*certificate, Some(format!("step {step}: {}", failed.join(", "))))
        }
        Err(e) => return Err(CliError::Liaison(e)),
    };
    let body = match format {
        Format::Json => format!("{}\n", cert.to_json()),
        Format::Text => cert.to_text(),
    };
    let stdout = match output {
        Some(path) => {
            fs::write(path, &body)
                .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
            String::new()
        }
        None => body,
    };
    match failure {
        None => ok(stdout),
        Some(msg) => Ok(Outcome {
            code: EXIT_VERIFY,
            stdout,
            stderr: format!("error: {}\n", CliError::Verification(msg)),
        }),
    }
}

fn witness_text(w: &VdWitness, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match w {
        VdWitness::Empty => out.push_str(&format!("{pad}empty\n")),
        VdWitness::Simplex { facet } => {
            let f: Vec<String> = facet.iter().map(|e| e.to_string()).collect();
            out.push_str(&format!("{pad}simplex {{{}}}\n", f.join(",")));
        }
        VdWitness::Shed { vertex, link, deletion } => {
            out.push_str(&format!("{pad}shed {vertex}\n{pad}  link:\n"));
            witness_text(link, depth + 2, out);
            out.push_str(&format!("{pad}  deletion:\n"));
            witness_text(deletion, depth + 2, out);
        }
    }
}

pub fn cmd_vd(
    g: &Graph,
    pom_edges: &[toric_liaison::EdgeId],
    order: &Option<Vec<toric_liaison::EdgeId>>,
    format: Format,
) -> Result<Outcome, CliError> {
    let pom = validate_pom(g, pom_edges)?;
    let base = order_for(g, order)?;
    // With a matching and no explicit order, use e_r > ... > e_1 > rest.
    let ord = if order.is_none() && !pom.is_empty() {
        base.with_top(pom.term_order(pom.len(), [])?.priority())?
    } else {
        base
    };
    let mut checker = VdChecker::new();
    let report = verify_corollary_vd(g, &pom, &ord, &mut checker)?;
    let facets: Vec<String> = report.complex.facets().iter().map(|f| f.to_string()).collect();
    let holds = report.holds();
    let reason = match &report.outcome {
        VdOutcome::NotVd { reason } => Some(reason.clone()),
        VdOutcome::Decomposable(_) => None,
    };
    let extension = report.extension.as_ref().map(|x| {
        json!({
            "edge": x.edge.to_string(),
            "deletion_matches": x.deletion_matches,
            "link_matches": x.link_matches,
            "cone": x.cone,
        })
    });
    let split = report.split.as_ref().map(|x| {
        json!({ "x": x.x.to_string(), "restriction_matches": x.restriction_matches, "x_not_face": x.x_not_face })
    });
    let stdout = match format {
        Format::Json => pretty(&json!({
            "graph": g.snapshot(),
            "order": ord.to_string(),
            "pom": pom.edges().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "facets": facets,
            "dim": report.complex.dim(),
            "vertex_decomposable": report.outcome.is_vd(),
            "witness": report.outcome.witness(),
            "replayed": report.replayed,
            "extension": extension,
            "split": split,
            "notes": report.notes,
            "holds": holds,
        })),
        Format::Text => {
            let mut out = format!(
                "order: {ord}\nfacets: {}\nvertex decomposable: {}\n",
                facets.join(" "),
                report.outcome.is_vd()
            );
            if let Some(w) = report.outcome.witness() {
                witness_text(w, 1, &mut out);
            }
            if let Some(r) = &reason {
                out.push_str(&format!("reason: {r}\n"));
            }
            if let Some(x) = &report.extension {
                out.push_str(&format!(
                    "extension by {}: deletion {}, link {}, cone {}\n",
                    x.edge, x.deletion_matches, x.link_matches, x.cone
                ));
            }
            if let Some(x) = &report.split {
                out.push_str(&format!(
                    "split by {}: restriction {}, non-face {}\n",
                    x.x, x.restriction_matches, x.x_not_face
                ));
            }
            for n in &report.notes {
                out.push_str(&format!("note: {n}\n"));
            }
            out
        }
    };
    if holds {
        ok(stdout)
    } else {
        Ok(Outcome {
            code: EXIT_VERIFY,
            stdout,
            stderr: format!("error: {}\n", CliError::Verification("vertex decomposability".into())),
        })
    }
}
