//! `looprate`: exact looping rates, lattice tables, Monte Carlo estimates,
//! sandpile stabilization and oracle checks from the command line.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use looprate_core::forests::oracle::MAX_ORACLE_EDGES;
use looprate_core::forests::{forest_count, unicycles_via_dual};
use looprate_core::graph::io::parse_graph;
use looprate_core::kernels::kernel_at_sink;
use looprate_core::lattice::{self, LatticeSpec, BUILTIN_NAMES};
use looprate_core::looping::loop_stats;
use looprate_core::numerics::{parse_rational, rational_to_string, Backend};
use looprate_core::sampler::{estimate_edge_probabilities, estimate_looping};
use looprate_core::sandpile::{level_stats, parse_sandpile, stabilize_report};
use looprate_core::{Embedded, Error, LoopStats, Rational, Result, Scalar};

#[derive(Parser, Debug)]
#[command(name = "looprate", version, about = "Loop-erased random walk looping rates, spanning forests and sandpiles")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format; `table` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the result to this file (atomically) instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact looping statistics and forest counts of an embedded graph file.
    Exact {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
        backend: BackendArg,
    },
    /// Lattice-limit table rows for a built-in lattice or `all`.
    Table {
        #[arg(default_value = "all")]
        lattice: String,
        /// Edge-weight parameter for the weighted lattices, e.g. `2` or `1/3`.
        #[arg(long, default_value = "1")]
        beta: String,
    },
    /// Monte Carlo estimates of looping rates and edge probabilities.
    Sample {
        graph: PathBuf,
        /// Chain length for the looping-rate estimate.
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        /// Number of Wilson trees for the edge probabilities.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, env = "LOOPRATE_SEED", default_value_t = 1)]
        seed: u64,
    },
    /// Stabilize a sandpile file.
    Sandpile {
        file: PathBuf,
        /// Also report exact level statistics over recurrent configurations.
        #[arg(long)]
        stats: bool,
    },
    /// Check closed forms against brute-force enumeration.
    Verify {
        #[arg(long, default_value_t = MAX_ORACLE_EDGES)]
        max_edges: usize,
    },
    /// Potential kernel on a wired `n x n` patch against the lattice value.
    LatticeCheck {
        /// Built-in lattice name or a lattice file.
        lattice: String,
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Auto,
    Exact,
    Float,
}

/// Command output plus whether it counts as success.
struct Outcome {
    text: String,
    ok: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

trait Render {
    fn render(&self) -> Value;
}

impl Render for Rational {
    fn render(&self) -> Value {
        Value::String(rational_to_string(self))
    }
}

impl Render for String {
    fn render(&self) -> Value {
        Value::String(self.clone())
    }
}

impl Render for f64 {
    fn render(&self) -> Value {
        json!(self)
    }
}

fn stats_object<T: Render>(st: &LoopStats<T>) -> Map<String, Value> {
    let mut m = Map::new();
    for (k, v) in [
        ("tau", &st.tau),
        ("rho", &st.rho),
        ("lambda", &st.lambda),
        ("mean_lerw_loop", &st.mean_lerw_loop),
        ("delta_rho", &st.delta_rho),
        ("sand_density", &st.sand_density),
        ("edge_in_tree", &st.edge_in_tree),
    ] {
        m.insert(k.into(), v.render());
    }
    m
}

fn exact_object<S: Scalar + Render>(emb: &Embedded) -> Result<Map<String, Value>> {
    let g = emb.graph();
    let mut m = stats_object(&loop_stats::<S>(emb)?);
    m.insert("f1".into(), forest_count::<S>(g, 1)?.value.render());
    if g.vertex_count() >= 2 {
        m.insert("f2".into(), forest_count::<S>(g, 2)?.value.render());
    }
    let uni = unicycles_via_dual(emb)?;
    m.insert("unicycles".into(), S::from_rational(&uni).render());
    Ok(m)
}

fn csv_of(rows: &[Map<String, Value>], columns: &[&str]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(columns).map_err(io)?;
    for r in rows {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| match r.get(*c) {
                Some(Value::String(s)) => s.clone(),
                Some(Value::Null) | None => String::new(),
                Some(v) => v.to_string(),
            })
            .collect();
        w.write_record(&cells).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

fn flatten(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

/// JSON, or a two-column `key,value` CSV of the flattened object.
fn emit(v: &Value, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(v).expect("json value") + "\n"),
        Format::Csv => {
            let mut flat = Map::new();
            flatten("", v, &mut flat);
            let rows: Vec<Map<String, Value>> = flat
                .into_iter()
                .map(|(k, x)| Map::from_iter([("key".to_string(), Value::String(k)), ("value".to_string(), x)]))
                .collect();
            csv_of(&rows, &["key", "value"])
        }
    }
}

fn cmd_exact(path: &Path, backend: BackendArg, format: Format) -> Result<Outcome> {
    let loaded = parse_graph(&read(path)?)?;
    let emb = loaded.embedded()?;
    let backend = match backend {
        BackendArg::Auto => Backend::auto(emb.graph().vertex_count()),
        BackendArg::Exact => Backend::Exact,
        BackendArg::Float => Backend::Float,
    };
    let m = match backend {
        Backend::Exact => exact_object::<Rational>(&emb)?,
        Backend::Float => exact_object::<f64>(&emb)?,
    };
    Ok(Outcome { text: emit(&Value::Object(m), format)?, ok: true })
}

const TABLE_COLUMNS: [&str; 8] = ["lattice", "beta", "tau", "lambda", "mean_lerw_loop", "rho", "delta_rho", "sand_density"];

fn cmd_table(name: &str, beta: &str, format: Format) -> Result<Outcome> {
    let beta = parse_rational(beta)?;
    let names: Vec<&str> = if name == "all" { BUILTIN_NAMES.to_vec() } else { vec![name] };
    let mut rows = Vec::new();
    for n in names {
        let spec = lattice::builtin(n)?;
        let row = lattice::table_row(&spec, &beta)?;
        let mut m = match &row.exact {
            Some(ex) => stats_object(ex),
            None => stats_object(&row.value),
        };
        m.insert("lattice".into(), json!(row.lattice));
        m.insert("beta".into(), json!(row.beta));
        if let Some((t, r)) = &row.alpha_form {
            m.insert("tau_alpha".into(), json!(t));
            m.insert("rho_alpha".into(), json!(r));
        }
        rows.push(m);
    }
    let text = match format {
        Format::Csv => csv_of(&rows, &TABLE_COLUMNS)?,
        Format::Json => emit(&Value::Array(rows.into_iter().map(Value::Object).collect()), Format::Json)?,
    };
    Ok(Outcome { text, ok: true })
}


fn cmd_sample(path: &Path, steps: u64, samples: u64, seed: u64, format: Format) -> Result<Outcome> {
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let loaded = parse_graph(&read(path)?)?;
    let g = &loaded.graph;
    let looping = estimate_looping(g, steps, seed)?;
    let root = g.sink().unwrap_or(g.vertex_count() - 1);
    let edges = estimate_edge_probabilities(g, root, samples, seed);
    let mut out = json!({
        "seed": seed,
        "looping": looping,
        "edge_in_tree": edges,
    });
    if g.vertex_count() <= Backend::EXACT_VERTEX_LIMIT {
        let (_, k) = kernel_at_sink::<f64>(g)?;
        let probs: Vec<f64> = (0..g.edge_count()).map(|e| k.edge_in_tree_prob(g, e)).collect();
        let mut exact = json!({ "edge_in_tree": probs });
        if let Ok(emb) = loaded.embedded() {
            let st = loop_stats::<Rational>(&emb)?;
            exact["tau"] = st.tau.render();
            exact["rho"] = st.rho.render();
            exact["lambda"] = st.lambda.render();
            exact["mean_lerw_loop"] = st.mean_lerw_loop.render();
        }
        out["exact"] = exact;
    }
    Ok(Outcome { text: emit(&out, format)?, ok: true })
}

fn cmd_sandpile(path: &Path, stats: bool, format: Format) -> Result<Outcome> {
    let (pile, config) = parse_sandpile(&read(path)?)?;
    let report = stabilize_report(&pile, &config);
    let mut out = serde_json::to_value(&report).expect("serializable");
    if stats {
        out["level_stats"] = serde_json::to_value(level_stats(&pile)?).expect("serializable");
    }
    Ok(Outcome { text: emit(&out, format)?, ok: true })
}

fn cmd_verify(max_edges: usize, format: Format) -> Result<Outcome> {
    let report = looprate_core::verify::verify(max_edges)?;
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    let text = match format {
        Format::Json => emit(&serde_json::to_value(&report).expect("serializable"), Format::Json)?,
        Format::Csv => {
            let rows: Vec<Map<String, Value>> = report
                .checks
                .iter()
                .map(|c| {
                    Map::from_iter([
                        ("check".to_string(), json!(c.name)),
                        ("graphs".to_string(), json!(c.graphs)),
                        ("passed".to_string(), json!(c.passed)),
                        ("failures".to_string(), json!(c.failures.join("; "))),
                    ])
                })
                .collect();
            csv_of(&rows, &["check", "graphs", "passed", "failures"])?
        }
    };
    Ok(Outcome { text, ok: report.passed })
}

fn load_lattice(name: &str) -> Result<LatticeSpec> {
    if BUILTIN_NAMES.contains(&name) {
        return lattice::builtin(name);
    }
    let path = Path::new(name);
    if path.exists() {
        return lattice::parse_lattice(&read(path)?);
    }
    Err(Error::UnknownLattice(name.to_string()))
}

fn cmd_lattice_check(name: &str, n: usize, beta: &str, tol: f64, format: Format) -> Result<Outcome> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let spec = load_lattice(name)?;
    let report = lattice::limit_check(&spec, n, &parse_rational(beta)?, tol)?;
    Ok(Outcome { text: emit(&serde_json::to_value(&report).expect("serializable"), format)?, ok: true })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let fmt = |default| cli.format.unwrap_or(default);
    match &cli.command {
        Command::Exact { graph, backend } => cmd_exact(graph, *backend, fmt(Format::Json)),
        Command::Table { lattice, beta } => cmd_table(lattice, beta, fmt(Format::Csv)),
        Command::Sample { graph, steps, samples, seed } => cmd_sample(graph, *steps, *samples, *seed, fmt(Format::Json)),
        Command::Sandpile { file, stats } => cmd_sandpile(file, *stats, fmt(Format::Json)),
        Command::Verify { max_edges } => cmd_verify(*max_edges, fmt(Format::Json)),
        Command::LatticeCheck { lattice, n, beta, tol } => cmd_lattice_check(lattice, *n, beta, *tol, fmt(Format::Json)),
    }
}

fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (text, ok) = match run(&cli) {
        Ok(o) => (o.text, o.ok),
        Err(e) => {
            let v = json!({ "error": e.kind(), "message": e.to_string() });
            (serde_json::to_string_pretty(&v).expect("json value") + "\n", false)
        }
    };
    let written = match &cli.output {
        Some(p) => write_atomic(p, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("looprate: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
