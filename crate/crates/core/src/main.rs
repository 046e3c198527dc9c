use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use csp_monitors::decomposition::Decomposition;
use csp_monitors::graph::{parse_edge_list, random_connected_graph, Graph, MonitorSet, NodeId};
use csp_monitors::oracle::{self, OracleConfig, OracleError, DEFAULT_NODE_CAP};
use csp_monitors::placement::{omp_csp, PlacementError};

const EXIT_NOT_IDENTIFIABLE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_CAP: u8 = 4;

#[derive(Parser)]
#[command(
    name = "csp-monitors",
    version,
    about = "Monitor placement for single node failure localization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Place a minimum monitor set.
    Place(Common),
    /// Check whether a monitor set localizes every single node failure.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated monitor tokens.
        #[arg(long, value_delimiter = ',')]
        monitors: Vec<String>,
    },
    /// Print blocks and polygon-less components.
    Decompose(Common),
    /// Exhaustive minimum monitor search.
    OracleMin(Common),
    /// Generate a seeded random connected graph.
    Gen {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        edges: usize,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Args)]
struct Common {
    /// Edge-list file.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args)]
struct Options {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Node cap for the exhaustive oracle.
    #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
    cap: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Forbid monitors in the interior of measurement paths.
    #[arg(long)]
    strict_paths: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

/// Settings echoed into every output document.
#[derive(Serialize)]
struct Run<'a> {
    command: &'a str,
    seed: u64,
    node_cap: usize,
    path_cap: usize,
    strict_paths: bool,
}

impl Run<'_> {
    fn line(&self) -> String {
        format!(
            "command={} seed={} node_cap={} path_cap={} strict_paths={}",
            self.command, self.seed, self.node_cap, self.path_cap, self.strict_paths
        )
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure {
        code,
        message: message.to_string(),
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    let code = if e.is_cap() { EXIT_CAP } else { EXIT_INPUT };
    fail(code, e)
}

fn read_graph(path: &PathBuf) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| fail(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn json_with_run<T: Serialize>(value: &T, run: &Run) -> String {
    let mut doc = serde_json::to_value(value).expect("output serializes");
    if let Value::Object(map) = &mut doc {
        map.insert(
            "run".into(),
            serde_json::to_value(run).expect("run serializes"),
        );
    }
    let mut out = serde_json::to_string_pretty(&doc).expect("output serializes");
    out.push('\n');
    out
}

fn dot_with_run(g: &Graph, monitors: &MonitorSet, run: &Run) -> String {
    format!("// {}\n{}", run.line(), g.to_dot(monitors))
}

fn tokens(nodes: impl IntoIterator<Item = impl AsRef<str>>) -> String {
    nodes
        .into_iter()
        .map(|v| v.as_ref().to_owned())
        .collect::<Vec<_>>()
        .join(" ")
}

/// `label` followed by space-separated tokens, with no trailing blank.
fn labeled(label: &str, nodes: impl IntoIterator<Item = impl AsRef<str>>) -> String {
    let list = tokens(nodes);
    if list.is_empty() {
        label.to_owned()
    } else {
        format!("{label} {list}")
    }
}

fn place(common: &Common, run: &Run) -> Result<(String, u8), Failure> {
    let g = read_graph(&common.input)?;
    let result = omp_csp(&g, common.opts.seed).map_err(|e| match e {
        PlacementError::Disconnected => {
            fail(EXIT_PRECONDITION, "input graph is empty or disconnected")
        }
        other => fail(EXIT_PRECONDITION, other),
    })?;
    let out = match common.opts.format.unwrap_or(Format::Json) {
        Format::Json => json_with_run(&result, run),
        Format::Dot => dot_with_run(&g, &result.monitors, run),
        Format::Text => {
            let mut s = format!("# {}\n", run.line());
            writeln!(s, "count {}", result.count).unwrap();
            writeln!(
                s,
                "{}",
                labeled("monitors", result.monitors.iter().map(NodeId::as_str))
            )
            .unwrap();
            for r in &result.trace {
                writeln!(
                    s,
                    "{} chosen=[{}]",
                    r.rule,
                    tokens(r.chosen.iter().map(NodeId::as_str))
                )
                .unwrap();
            }
            s
        }
    };
    Ok((out, 0))
}

fn verify(
    common: &Common,
    monitors: &[String],
    cfg: &OracleConfig,
    run: &Run,
) -> Result<(String, u8), Failure> {
    let g = read_graph(&common.input)?;
    let m: MonitorSet = monitors.iter().map(|t| NodeId::new(t.trim())).collect();
    m.check_within(&g).map_err(|e| fail(EXIT_INPUT, e))?;
    let report = oracle::is_one_identifiable(&g, &m, cfg).map_err(oracle_failure)?;
    let code = if report.verdict {
        0
    } else {
        EXIT_NOT_IDENTIFIABLE
    };
    let out = match common.opts.format.unwrap_or(Format::Json) {
        Format::Json => json_with_run(&report, run),
        Format::Dot => dot_with_run(&g, &m, run),
        Format::Text => {
            let mut s = format!("# {}\n", run.line());
            writeln!(s, "identifiable {}", report.verdict).unwrap();
            writeln!(
                s,
                "{}",
                labeled("uncovered", report.uncovered.iter().map(NodeId::as_str))
            )
            .unwrap();
            for (u, w) in &report.confusable_pairs {
                writeln!(s, "confusable {u} {w}").unwrap();
            }
            s
        }
    };
    Ok((out, code))
}

fn decompose(common: &Common, run: &Run) -> Result<(String, u8), Failure> {
    let g = read_graph(&common.input)?;
    let d = Decomposition::of(&g);
    let out = match common.opts.format.unwrap_or(Format::Json) {
        Format::Json => json_with_run(&d, run),
        Format::Dot => dot_with_run(&g, &MonitorSet::new(), run),
        Format::Text => {
            let mut s = format!("# {}\n", run.line());
            for b in &d.blocks {
                writeln!(
                    s,
                    "block {} nodes=[{}] cut=[{}]{}",
                    b.id,
                    tokens(b.nodes.iter().map(NodeId::as_str)),
                    tokens(b.cut_vertices.iter().map(NodeId::as_str)),
                    if b.is_bond { " bond" } else { "" }
                )
                .unwrap();
            }
            for p in &d.plcs {
                writeln!(
                    s,
                    "plc {} block={} nodes=[{}] agents=[{}]{}",
                    p.id,
                    p.parent_block,
                    tokens(p.nodes.iter().map(NodeId::as_str)),
                    tokens(p.agents.iter().map(NodeId::as_str)),
                    if p.is_bond { " bond" } else { "" }
                )
                .unwrap();
            }
            s
        }
    };
    Ok((out, 0))
}

fn oracle_min(common: &Common, cfg: &OracleConfig, run: &Run) -> Result<(String, u8), Failure> {
    let g = read_graph(&common.input)?;
    let min = oracle::min_monitors_bruteforce(&g, cfg).map_err(oracle_failure)?;
    let out = match common.opts.format.unwrap_or(Format::Json) {
        Format::Json => json_with_run(&min, run),
        Format::Dot => dot_with_run(&g, &min.witness, run),
        Format::Text => format!(
            "# {}\nk {}\n{}\n",
            run.line(),
            min.k,
            labeled("witness", min.witness.iter().map(NodeId::as_str))
        ),
    };
    Ok((out, 0))
}

fn gen(nodes: usize, edges: usize, opts: &Options, run: &Run) -> Result<(String, u8), Failure> {
    let g = random_connected_graph(nodes, edges, opts.seed).map_err(|e| fail(EXIT_INPUT, e))?;
    let out = match opts.format.unwrap_or(Format::Text) {
        Format::Json => json_with_run(&g, run),
        Format::Dot => dot_with_run(&g, &MonitorSet::new(), run),
        Format::Text => format!("# {}\n{}", run.line(), g.to_edge_list()),
    };
    Ok((out, 0))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, opts) = match &cli.command {
        Command::Place(c) => ("place", &c.opts),
        Command::Verify { common, .. } => ("verify", &common.opts),
        Command::Decompose(c) => ("decompose", &c.opts),
        Command::OracleMin(c) => ("oracle-min", &c.opts),
        Command::Gen { opts, .. } => ("gen", opts),
    };
    let cfg = OracleConfig {
        node_cap: opts.cap,
        strict_paths: opts.strict_paths,
        ..OracleConfig::default()
    };
    let run = Run {
        command: name,
        seed: opts.seed,
        node_cap: cfg.node_cap,
        path_cap: cfg.path_cap,
        strict_paths: cfg.strict_paths,
    };
    let outcome = match &cli.command {
        Command::Place(c) => place(c, &run),
        Command::Verify { common, monitors } => verify(common, monitors, &cfg, &run),
        Command::Decompose(c) => decompose(c, &run),
        Command::OracleMin(c) => oracle_min(c, &cfg, &run),
        Command::Gen { nodes, edges, opts } => gen(*nodes, *edges, opts, &run),
    };
    match outcome {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
