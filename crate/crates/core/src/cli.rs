//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when a `--target`
//! comparison fails (`|z| > 3`).

use crate::error::Error;
use crate::forms::FormSpec;
use crate::gc::homology_report_bounded;
use crate::graph::{enumerate_stable_weighted, named_graph, Graph};
use crate::period::{compare_constant, integrate, to_decimal, IntegralEstimate, Integrand, IntegrationOptions, SamplerKind, Target};
use crate::poly::{cycle_basis, divergent_subgraphs, graph_polynomial, laplacian};
use crate::voronoi::{minimal_vectors, torelli_point, voronoi_cell, QuadraticForm};
use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_TARGET_MISSED: i32 = 3;

/// Version of the JSON output schema.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "periodforge", version, about = "Feynman periods, canonical forms, graph complex homology and Voronoi cells")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for Monte Carlo integration.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the graph polynomial.
    Psi { graph: String },
    /// Print the graph Laplacian in the default cycle basis.
    Laplacian { graph: String },
    /// List edge subsets with at most twice as many edges as loops.
    Divergences { graph: String },
    /// Estimate the Feynman residue.
    Residue {
        graph: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value = "tropical")]
        sampler: String,
        /// Evaluate in the chart where this edge (1-based) is one.
        #[arg(long)]
        chart: Option<usize>,
    },
    /// Estimate a canonical integral.
    Canonical {
        graph: String,
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        target: Option<String>,
    },
    /// Graph complex homology at a loop order.
    GcHomology {
        #[arg(long)]
        loops: usize,
        /// Permit seven loops, which needs considerably more time and memory.
        #[arg(long)]
        allow_seven: bool,
    },
    /// Stable weighted graphs of a genus.
    Stable {
        #[arg(long)]
        genus: usize,
    },
    /// Minimal vectors of a quadratic form file.
    Minvec { matrix: String },
    /// Voronoi cell generators of a quadratic form file.
    Cell { matrix: String },
    /// Laplacian at rational edge lengths.
    Torelli {
        graph: String,
        #[arg(long, value_delimiter = ',')]
        lengths: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub version: String,
    pub wall_time_ms: u128,
}

struct Outcome {
    text: String,
    json: Value,
    code: i32,
    seed: Option<u64>,
    samples: Option<u64>,
}

impl Outcome {
    fn plain(text: String, json: Value) -> Outcome {
        Outcome { text, json, code: EXIT_OK, seed: None, samples: None }
    }
}

/// Loads a graph from a file path or a builtin name such as `wheel3`.
pub fn load_graph(spec: &str) -> Result<Graph, Error> {
    let path = std::path::Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, msg: format!("{spec}: {e}") })?;
        return Graph::parse(&text);
    }
    named_graph(spec).map_err(|_| Error::InvalidGraph(format!("'{spec}' is neither a graph file nor a builtin name")))
}

fn load_form(path: &str) -> Result<QuadraticForm, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse { line: 0, msg: format!("{path}: {e}") })?;
    QuadraticForm::parse(&text)
}

/// Rational edge length such as `3`, `1/2` or `0.25`.
fn parse_rational(tok: &str) -> Result<BigRational, Error> {
    if tok.contains(|c: char| c.is_alphabetic()) {
        return Err(Error::Expression(format!("'{tok}' is not a rational number")));
    }
    Ok(Target::parse(tok)?.exact().clone())
}

/// JSON description of a graph with 1-based vertex and edge ids.
pub fn graph_json(g: &Graph) -> Value {
    json!({
        "vertices": g.num_vertices(),
        "weights": g.weights(),
        "edges": g.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect::<Vec<_>>(),
    })
}

fn estimate_json(graph: &str, integrand: &str, est: &IntegralEstimate, target: Option<(&Target, f64)>) -> Value {
    let mut v = json!({
        "graph": graph,
        "integrand": integrand,
        "samples": est.samples,
        "seed": est.seed,
        "sampler": est.sampler,
        "mean": est.mean,
        "stderr": est.stderr,
    });
    if let Some((t, z)) = target {
        v["target"] = json!({ "expression": t.source(), "value": to_decimal(t.exact(), 30) });
        v["z"] = json!(z);
    }
    v
}

fn finish_estimate(graph: &str, integrand: &str, est: IntegralEstimate, target: Option<String>) -> Result<Outcome, Error> {
    let mut text = format!("{integrand} on {graph}: {:.10} +- {:.3e} ({} samples, seed {})\n", est.mean, est.stderr, est.samples, est.seed);
    let mut code = EXIT_OK;
    let json = match target {
        Some(expr) => {
            let t = Target::parse(&expr)?;
            let z = compare_constant(&est, t.value())?;
            text.push_str(&format!("target {} = {}\nz = {:.3}\n", t.source(), to_decimal(t.exact(), 30), z));
            if z.abs() > 3.0 {
                code = EXIT_TARGET_MISSED;
                text.push_str("target missed\n");
            }
            estimate_json(graph, integrand, &est, Some((&t, z)))
        }
        None => estimate_json(graph, integrand, &est, None),
    };
    Ok(Outcome { text, json, code, seed: Some(est.seed), samples: Some(est.samples) })
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Psi { graph } => {
            let g = load_graph(graph)?;
            let psi = graph_polynomial(&g)?;
            Ok(Outcome::plain(format!("{psi}\n"), json!({ "graph": graph_json(&g), "psi": psi.to_string(), "terms": psi.to_json() })))
        }
        Command::Laplacian { graph } => {
            let g = load_graph(graph)?;
            let basis = cycle_basis(&g)?;
            let lap = laplacian(&g, &basis)?;
            let rows: Vec<Vec<String>> = lap.entries().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            Ok(Outcome::plain(
                format!("{}\n", lap.to_text()),
                json!({ "graph": graph_json(&g), "cycle_basis": basis.vectors(), "laplacian": rows, "det": lap.det().to_string() }),
            ))
        }
        Command::Divergences { graph } => {
            let g = load_graph(graph)?;
            let subs: Vec<Vec<usize>> = divergent_subgraphs(&g)?.into_iter().map(|s| s.into_iter().map(|e| e + 1).collect()).collect();
            let text = if subs.is_empty() {
                "no divergent subgraphs\n".to_string()
            } else {
                subs.iter().map(|s| format!("{{{}}}\n", s.iter().map(ToString::to_string).collect::<Vec<_>>().join(","))).collect()
            };
            Ok(Outcome::plain(text, json!({ "graph": graph_json(&g), "divergent_subgraphs": subs })))
        }
        Command::Residue { graph, samples, seed, target, sampler, chart } => {
            let g = load_graph(graph)?;
            let mut ig = Integrand::residue(&g)?;
            if let Some(c) = chart {
                ig = ig.in_chart(c.checked_sub(1).ok_or(Error::UnknownEdge(0))?)?;
            }
            let kind: SamplerKind = sampler.parse()?;
            let opts = options(cli, *samples, *seed).with_sampler(kind);
            let est = integrate(&ig, &opts)?;
            finish_estimate(graph, "residue", est, target.clone())
        }
        Command::Canonical { graph, form, samples, seed, target } => {
            let g = load_graph(graph)?;
            let spec = FormSpec::parse(form)?;
            let est = crate::period::integrate_canonical(&g, &spec, &options(cli, *samples, *seed))?;
            finish_estimate(graph, &format!("canonical {spec}"), est, target.clone())
        }
        Command::GcHomology { loops, allow_seven } => {
            let bound = if *allow_seven { 7 } else { crate::gc::DEFAULT_LOOP_BOUND };
            let report = homology_report_bounded(*loops, bound)?;
            let dims: serde_json::Map<String, Value> = report.dims().into_iter().map(|(d, n)| (d.to_string(), json!(n))).collect();
            Ok(Outcome::plain(report.to_table(), json!({ "loops": report.loops, "rows": report.rows, "homology": dims })))
        }
        Command::Stable { genus } => {
            let graphs = enumerate_stable_weighted(*genus)?;
            let mut text = format!("{} stable graphs of genus {genus}\n", graphs.len());
            for (i, g) in graphs.iter().enumerate() {
                text.push_str(&format!("# graph {}\n{}", i + 1, g.to_text()));
            }
            Ok(Outcome::plain(
                text,
                json!({ "genus": genus, "count": graphs.len(), "graphs": graphs.iter().map(graph_json).collect::<Vec<_>>() }),
            ))
        }
        Command::Minvec { matrix } => {
            let q = load_form(matrix)?;
            let mv = minimal_vectors(&q)?;
            let min = q.value(&mv[0]);
            let text = format!("minimum {min}\n{}", mv.iter().map(|v| format!("{v:?}\n")).collect::<String>());
            Ok(Outcome::plain(text, json!({ "form": q.to_json(), "minimum": min.to_string(), "minimal_vectors": mv })))
        }
        Command::Cell { matrix } => {
            let q = load_form(matrix)?;
            let cell = voronoi_cell(&q)?;
            let text = cell.generators().iter().map(|m| format!("{m:?}\n")).collect();
            Ok(Outcome::plain(text, json!({ "form": q.to_json(), "vectors": cell.vectors(), "generators": cell.generators() })))
        }
        Command::Torelli { graph, lengths } => {
            let g = load_graph(graph)?;
            let ls: Vec<BigRational> = lengths.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
            let q = torelli_point(&g, &ls)?;
            Ok(Outcome::plain(
                q.to_text(),
                json!({ "graph": graph_json(&g), "form": q.to_json(), "positive_definite": q.is_positive_definite() }),
            ))
        }
    }
}

fn options(cli: &Cli, samples: u64, seed: u64) -> IntegrationOptions {
    let mut o = IntegrationOptions::new(samples, seed);
    if let Some(t) = cli.threads {
        o = o.with_threads(t);
    }
    o
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Psi { .. } => "psi",
        Command::Laplacian { .. } => "laplacian",
        Command::Divergences { .. } => "divergences",
        Command::Residue { .. } => "residue",
        Command::Canonical { .. } => "canonical",
        Command::GcHomology { .. } => "gc-homology",
        Command::Stable { .. } => "stable",
        Command::Minvec { .. } => "minvec",
        Command::Cell { .. } => "cell",
        Command::Torelli { .. } => "torelli",
    }
}

/// Runs the command line, writing reports to `out` and diagnostics to
/// `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok(o) => {
            let result = if cli.json {
                let manifest = RunManifest {
                    command: command_name(&cli.command).to_string(),
                    arguments: args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect(),
                    seed: o.seed,
                    samples: o.samples,
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    wall_time_ms: start.elapsed().as_millis(),
                };
                let doc = json!({ "schema": SCHEMA_VERSION, "manifest": manifest, "result": o.json });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializable report"))
            } else {
                write!(out, "{}", o.text)
            };
            if result.is_err() {
                return EXIT_INVALID;
            }
            o.code
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({ "schema": SCHEMA_VERSION, "error": e.to_string() }));
            }
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}
