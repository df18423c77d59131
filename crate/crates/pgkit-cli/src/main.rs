//! `pgkit`: inspect principal graphs, run the obstructions, classify weeds and evaluate jellyfish
//! expressions. Results are printed as JSON lines.

use std::fmt::Display;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use pgkit::classify::{classify_weed, ClassifyError, SurvivorReport, Weed};
use pgkit::graph_codec::{parse, serialize};
use pgkit::jellyfish::{derive_generator_system, evaluate, evaluate_direct, parse_diagram, parse_expr, JellyfishKind};
use pgkit::obstructions::{is_spoke, is_stable_at, jellyfish_verdict, qt_obstruction};
use pgkit::scalar::Scalar;
use pgkit::spectral::{fp_weights, graph_norm, DEFAULT_TOL};
use pgkit::tl_algebra::TLElement;
use pgkit::{Error, GraphPair};

const EXIT_DOMAIN: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "pgkit", version, about = "Subfactor principal graphs and Temperley-Lieb diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph string and report its canonical form and counts.
    Parse { graph: String },
    /// Graph norm (largest adjacency eigenvalue).
    Norm { graph: String },
    /// Frobenius-Perron weights, normalised to 1 at the basepoint.
    Weights { graph: String },
    /// Whether the graph is stable at a depth.
    Stable {
        graph: String,
        #[arg(long)]
        depth: usize,
    },
    /// Whether the graph is a spoke graph, and the depth of its centre.
    Spoke { graph: String },
    /// Which jellyfish generators a principal graph pair admits.
    Verdict { principal: String, dual: String },
    /// Quadratic-tangles obstruction for given n, δ and weight ratio r ≥ 1.
    Qt {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        r: f64,
        /// Also require ω to be an n-th root of unity.
        #[arg(long)]
        root_of_unity: bool,
    },
    /// Enumerate and prune a weed given as a JSON file.
    Classify {
        weed: String,
        /// Print an aligned table instead of JSON lines.
        #[arg(long)]
        table: bool,
    },
    /// Evaluate a closed s-expression by the jellyfish algorithm and directly in TL.
    Eval {
        expr: String,
        #[arg(long)]
        system: String,
    },
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(_) => Failure::Resource(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}

fn emit(v: Value) {
    println!("{v}");
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Parse { graph } => {
            let g = parse(&graph)?;
            emit(json!({
                "canonical": serialize(&g)?,
                "depth_sizes": g.depth_sizes(),
                "vertices": g.num_vertices(),
                "edges": g.num_edges(),
                "supertransitivity": g.supertransitivity(),
                "has_duals": g.duals().is_some(),
            }));
        }
        Command::Norm { graph } => emit(json!({ "norm": graph_norm(&parse(&graph)?, DEFAULT_TOL)? })),
        Command::Weights { graph } => {
            let w = fp_weights(&parse(&graph)?, DEFAULT_TOL)?;
            emit(json!({ "eigenvalue": w.eigenvalue, "weights": w.weights }));
        }
        Command::Stable { graph, depth } => {
            emit(json!({ "depth": depth, "stable": is_stable_at(&parse(&graph)?, depth) }));
        }
        Command::Spoke { graph } => {
            let c = is_spoke(&parse(&graph)?);
            emit(json!({ "spoke": c.is_some(), "center_depth": c.map(|v| v.0) }));
        }
        Command::Verdict { principal, dual } => {
            let v = jellyfish_verdict(&GraphPair::new(parse(&principal)?, parse(&dual)?));
            emit(serde_json::to_value(v).expect("plain struct"));
        }
        Command::Qt { n, delta, r, root_of_unity } => {
            let o = qt_obstruction(n, delta, r, root_of_unity)?;
            emit(json!({
                "status": o.verdict.status,
                "rule": o.verdict.rule,
                "note": o.verdict.note,
                "omega_sum": o.omega_sum,
            }));
        }
        Command::Classify { weed, table } => classify(&weed, table)?,
        Command::Eval { expr, system } => eval(&expr, &system)?,
    }
    Ok(())
}

fn read(path: &str) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {path}: {e}")))
}

#[derive(Deserialize)]
struct WeedFile {
    pair: [String; 2],
    max_index: f64,
    max_depth: usize,
    max_new_vertices: usize,
    max_mult: u32,
}

fn classify(path: &str, table: bool) -> Outcome {
    let f: WeedFile = serde_json::from_str(&read(path)?).map_err(|e| Failure::Domain(format!("weed file: {e}")))?;
    let w = Weed::from_strings(&f.pair[0], &f.pair[1], f.max_index, f.max_depth, f.max_new_vertices, f.max_mult)?;
    let (reports, failure) = match classify_weed(&w) {
        Ok(r) => (r, None),
        Err(ClassifyError::Budget { budget, partial }) => {
            (partial, Some(Failure::Resource(format!("node budget {budget} exhausted; partial report printed"))))
        }
        Err(ClassifyError::Core(e)) => return Err(e.into()),
    };
    if table {
        print_table(&reports);
    } else {
        for r in &reports {
            emit(serde_json::to_value(r).expect("plain struct"));
        }
    }
    failure.map_or(Ok(()), Err)
}

fn print_table(reports: &[SurvivorReport]) {
    let status =
        |r: &SurvivorReport| serde_json::to_value(r.status).expect("plain enum").as_str().unwrap_or("").to_string();
    let w0 = reports.iter().map(|r| r.pair[0].len()).max().unwrap_or(0).max(8);
    println!("{:<15} {:<15} {:>3}  {:<w0$}  dual", "status", "decided_by", "k", "principal");
    for r in reports {
        println!(
            "{:<15} {:<15} {:>3}  {:<w0$}  {}",
            status(r),
            r.decided_by.as_deref().unwrap_or("-"),
            r.translation,
            r.pair[0],
            r.pair[1]
        );
    }
}

#[derive(Deserialize)]
struct SystemFile {
    n: usize,
    delta: Value,
    #[serde(default)]
    kind: Option<String>,
    generators: Vec<GeneratorFile>,
}

#[derive(Deserialize)]
struct GeneratorFile {
    label: String,
    terms: Vec<TermFile>,
}

#[derive(Deserialize)]
struct TermFile {
    coeff: Value,
    pairs: String,
}

/// Scalars read from JSON: exact rationals when δ is given as a string, floats otherwise.
trait FromJson: Scalar + Display {
    fn from_json(v: &Value) -> std::result::Result<Self, Failure>;
}

impl FromJson for f64 {
    fn from_json(v: &Value) -> std::result::Result<Self, Failure> {
        match v {
            Value::Number(x) => x.as_f64().ok_or_else(|| Failure::Domain(format!("bad number {x}"))),
            Value::String(s) => s.trim().parse().map_err(|_| Failure::Domain(format!("bad number {s:?}"))),
            _ => Err(Failure::Domain(format!("expected a number, got {v}"))),
        }
    }
}

impl FromJson for BigRational {
    fn from_json(v: &Value) -> std::result::Result<Self, Failure> {
        let text = match v {
            Value::Number(x) if x.is_i64() => x.to_string(),
            Value::String(s) => s.trim().to_string(),
            _ => return Err(Failure::Domain(format!("exact systems need integer or \"p/q\" coefficients, got {v}"))),
        };
        text.parse().map_err(|_| Failure::Domain(format!("bad rational {text:?}")))
    }
}

fn eval(expr_path: &str, system_path: &str) -> Outcome {
    let sys: SystemFile =
        serde_json::from_str(&read(system_path)?).map_err(|e| Failure::Domain(format!("system file: {e}")))?;
    let expr = read(expr_path)?;
    if sys.delta.is_string() {
        eval_in::<BigRational>(&expr, &sys)
    } else {
        eval_in::<f64>(&expr, &sys)
    }
}

fn eval_in<S: FromJson>(text: &str, sys: &SystemFile) -> Outcome {
    let delta = S::from_json(&sys.delta)?;
    let kind = match sys.kind.as_deref().unwrap_or("both") {
        "one_strand" => JellyfishKind::OneStrand,
        "two_strand" => JellyfishKind::TwoStrand,
        "both" => JellyfishKind::Both,
        k => return Err(Failure::Domain(format!("kind must be one_strand, two_strand or both, got {k:?}"))),
    };
    let mut elements = Vec::new();
    for g in &sys.generators {
        let mut x = TLElement::zero(sys.n, sys.n, true, delta.clone());
        for t in &g.terms {
            x.add_term(parse_diagram(&t.pairs, sys.n, sys.n, true)?, S::from_json(&t.coeff)?);
        }
        elements.push((g.label.clone(), x));
    }
    let system = derive_generator_system(sys.n, &elements, &delta, kind)?;
    let e = parse_expr(text)?;
    let value = evaluate(&e, &system)?;
    let direct = evaluate_direct(&e, &system)?;
    emit(json!({
        "value": value.to_string(),
        "direct": direct.to_string(),
        "agree": value.diff(&direct).approx().abs() <= 1e-9 * (1.0 + direct.approx().abs()),
        "generators": e.num_generators(),
        "rotations": e.num_rotations(),
    }));
    Ok(())
}
