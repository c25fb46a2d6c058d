//! `kolmo`: run the worked scenarios, check correlation vectors, find
//! frequency-inequality witnesses and build unified probability spaces.
//!
//! Exit codes: 0 success, 1 a verdict failed, 2 bad input or usage,
//! 3 numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use kolmo::extension::{build_unified_space_with, observed_correlation_vector, BuildOptions, SetupFile};
use kolmo::hilbert::{matrix_from_pairs, projector_from_span, Projector, StateVector};
use kolmo::lattice::{commutator_norm, commutes, construct_violating_state, meet};
use kolmo::polytope::{
    clauser_horne_check_exact, is_member, vertices, CorrelationQuery, CorrelationVector, PairSet,
};
use kolmo::rational::{format_float, format_rational, round_sig, Rational};
use kolmo::scenarios::{epr_setup, run_scenario, SCENARIOS};
use kolmo::{random, Error};

#[derive(Debug, Parser)]
#[command(name = "kolmo", version, about = "Classical representability of quantum probabilities")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Tolerance for float verdicts in reports.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Keep zero-probability patterns (the full 81-point EPR table).
    #[arg(long, global = true)]
    full_table: bool,
    /// Seed for randomly generated instances.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Add a generation timestamp to the output.
    #[arg(long, global = true)]
    timestamps: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a worked scenario and print its report.
    Scenario {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SCENARIOS))]
        name: String,
    },
    /// Decide membership of a correlation vector in C(n, S).
    Check { file: PathBuf },
    /// Find a state violating p(E1) + p(E2) - p(E1 ∧ E2) <= 1.
    Witness {
        /// Projector pair file; omit to draw a random pair with --seed.
        file: Option<PathBuf>,
        /// Dimension of the random pair.
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Build the unified space of a measurement setup.
    Build {
        setup: PathBuf,
        /// Write the space JSON here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the vertices of C(n, S), e.g. `vertices 2 1-2`.
    Vertices { n: usize, pairs: String },
}

/// What a command produced: JSON, a text rendering and the overall verdict.
struct Output {
    json: Value,
    text: String,
    ok: bool,
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CmdResult = Result<Output, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Scenario { name } => scenario(&cli, name),
        Command::Check { file } => check(file),
        Command::Witness { file, dim } => witness(&cli, file.as_deref(), *dim),
        Command::Build { setup, out } => build(&cli, setup, out.as_deref()),
        Command::Vertices { n, pairs } => list_vertices(*n, pairs),
    };
    match result {
        Ok(out) => {
            print!("{}", render(&cli, out.json, out.text));
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn render(cli: &Cli, mut json: Value, mut text: String) -> String {
    if cli.timestamps {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        if let Value::Object(map) = &mut json {
            map.insert("generated_at_unix".into(), json!(secs));
        }
        text = format!("generated at unix time {secs}\n{text}");
    }
    match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => text,
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Left-aligned columns separated by two spaces.
fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let line: Vec<String> = r.iter().enumerate().map(|(c, s)| format!("{s:<w$}", w = widths[c])).collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    out
}

fn coordinates_json<T: Clone>(p: &CorrelationVector<T>, show: impl Fn(&T) -> Value) -> Value {
    let names = p.layout().coordinate_names();
    Value::Object(names.into_iter().zip(p.flat().iter().map(show)).collect::<Map<_, _>>())
}

fn scenario(cli: &Cli, name: &str) -> CmdResult {
    let mut report = run_scenario(name)?;
    if let Some(t) = cli.tolerance {
        report = report.with_tolerance(t);
    }
    let mut json = report.to_json();
    let mut text = report.to_text();
    if cli.full_table && name == "epr" {
        let unified = build_unified_space_with(&epr_setup()?, BuildOptions { include_zero_patterns: true })?;
        let rows: Vec<(String, String)> =
            unified.space.weighted_points().map(|(l, w)| (l.to_string(), format_rational(w))).collect();
        let mut t = vec![vec!["a a' b b'".to_string(), "weight".to_string()]];
        t.extend(rows.iter().map(|(l, w)| vec![l.clone(), w.clone()]));
        let _ = write!(text, "\nfull table ({} elementary events)\n{}", rows.len(), table(&t));
        if let Value::Object(map) = &mut json {
            let points: Vec<Value> = rows.iter().map(|(l, w)| json!({ "label": l, "weight": w })).collect();
            map.insert("full_table".into(), Value::Array(points));
        }
    }
    Ok(Output { json, text, ok: report.passed() })
}

fn check(file: &Path) -> CmdResult {
    let query: CorrelationQuery = read_json(file)?;
    let exact = query.to_vector()?;
    let p = exact.to_f64();
    let cert = is_member(&p)?;
    let layout = p.layout().clone();

    let mut text = String::new();
    let _ = writeln!(text, "layout: {layout}");
    let coords: Vec<Vec<String>> = layout
        .coordinate_names()
        .into_iter()
        .zip(exact.flat())
        .map(|(n, v)| vec![format!("  {n}"), format_rational(&v)])
        .collect();
    text.push_str(&table(&coords));
    let mut json = Map::new();
    json.insert("layout".into(), json!({ "n": layout.n(), "pairs": layout.pairs() }));
    json.insert("vector".into(), coordinates_json(&exact, |r| json!(format_rational(r))));
    json.insert("member".into(), json!(cert.member));
    json.insert("residual".into(), json!(round_sig(cert.residual)));

    if cert.member {
        let _ = writeln!(text, "verdict: member of C({})", layout);
        let recon = cert.reconstruct(&layout);
        let err = recon.flat().iter().zip(p.flat()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let _ = writeln!(text, "certificate: {} vertices, reconstruction error {}", cert.weights.len(), format_float(err));
        let mut rows = vec![vec!["  vertex".to_string(), "weight".to_string()]];
        rows.extend(cert.weights.iter().map(|(v, w)| vec![format!("  {v}"), format_float(*w)]));
        text.push_str(&table(&rows));
        let weights: Map<String, Value> = cert.weights.iter().map(|(v, w)| (v.to_string(), json!(round_sig(*w)))).collect();
        json.insert("certificate".into(), json!({ "weights": weights, "reconstruction_error": round_sig(err) }));
    } else {
        let _ = writeln!(text, "verdict: NOT a member of C({})", layout);
        let _ = writeln!(text, "phase-one infeasibility: {}", format_float(cert.residual));
    }

    if layout.is_s4() {
        let checks = clauser_horne_check_exact(&exact)?;
        let worst = checks.iter().max_by(|a, b| a.value.cmp(&b.value)).expect("nonempty system");
        if worst.value > Rational::from_integer(0.into()) {
            let _ = writeln!(text, "violated facet: {} (exceeded by {})", worst.name, format_rational(&worst.value));
            json.insert("violated_facet".into(), json!({ "name": worst.name, "excess": format_rational(&worst.value) }));
        }
        let mut rows = vec![vec!["  inequality (value <= 0)".to_string(), "value".to_string(), "holds".to_string()]];
        rows.extend(checks.iter().map(|c| {
            vec![format!("  {}", c.name), format_rational(&c.value), if c.satisfied { "yes" } else { "NO" }.to_string()]
        }));
        text.push_str("clauser-horne system (exact):\n");
        text.push_str(&table(&rows));
        let list: Vec<Value> = checks
            .iter()
            .map(|c| json!({ "name": c.name, "value": format_rational(&c.value), "satisfied": c.satisfied }))
            .collect();
        json.insert("clauser_horne".into(), Value::Array(list));
        let all_hold = checks.iter().all(|c| c.satisfied);
        if all_hold != cert.member {
            return Err(Failure::Numerical(format!(
                "LP verdict ({}) disagrees with the Clauser-Horne system ({})",
                cert.member, all_hold
            )));
        }
    }
    Ok(Output { json: Value::Object(json), text, ok: true })
}

/// A projector given as a matrix or as the span of some vectors.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ProjectorSpec {
    Matrix { matrix: Vec<Vec<[f64; 2]>> },
    Span { span: Vec<Vec<[f64; 2]>> },
}

impl ProjectorSpec {
    fn to_projector(&self) -> kolmo::Result<Projector> {
        match self {
            ProjectorSpec::Matrix { matrix } => Projector::new(matrix_from_pairs(matrix)?),
            ProjectorSpec::Span { span } => {
                let vectors = span
                    .iter()
                    .map(|v| StateVector::normalized(v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()))
                    .collect::<kolmo::Result<Vec<_>>>()?;
                projector_from_span(&vectors)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
struct WitnessFile {
    e1: ProjectorSpec,
    e2: ProjectorSpec,
}

fn witness(cli: &Cli, file: Option<&Path>, dim: usize) -> CmdResult {
    let (e1, e2, source) = match (file, cli.seed) {
        (Some(path), _) => {
            let spec: WitnessFile = read_json(path)?;
            (spec.e1.to_projector()?, spec.e2.to_projector()?, path.display().to_string())
        }
        (None, Some(seed)) => {
            if !(2..=kolmo::hilbert::MAX_DIM).contains(&dim) {
                return Err(Failure::Input(format!("--dim must be between 2 and {}", kolmo::hilbert::MAX_DIM)));
            }
            let mut rng = random::rng(seed);
            let (e1, e2) = random::noncommuting_pair(&mut rng, dim);
            (e1, e2, format!("random pair, dim {dim}, seed {seed}"))
        }
        (None, None) => return Err(Failure::Input("give a projector file or --seed".into())),
    };
    let mut text = format!("source: {source}\n");
    let mut json = Map::new();
    json.insert("dim".into(), json!(e1.dim()));
    json.insert("rank_e1".into(), json!(e1.rank()));
    json.insert("rank_e2".into(), json!(e2.rank()));
    json.insert("rank_meet".into(), json!(meet(&e1, &e2)?.rank()));
    json.insert("commutator_norm".into(), json!(round_sig(commutator_norm(&e1, &e2)?)));
    let _ = writeln!(
        text,
        "dim {}, rank E1 = {}, rank E2 = {}, rank E1∧E2 = {}, ‖[E1,E2]‖ = {}",
        e1.dim(),
        e1.rank(),
        e2.rank(),
        meet(&e1, &e2)?.rank(),
        format_float(commutator_norm(&e1, &e2)?)
    );
    if commutes(&e1, &e2)? {
        text.push_str("commuting: no witness exists\n");
        json.insert("commuting".into(), json!(true));
        return Ok(Output { json: Value::Object(json), text, ok: true });
    }
    let w = construct_violating_state(&e1, &e2)?;
    let amps: Vec<Value> =
        w.state.with_canonical_phase().amplitudes().iter().map(|c| json!([round_sig(c.re), round_sig(c.im)])).collect();
    json.insert("commuting".into(), json!(false));
    json.insert("state".into(), Value::Array(amps));
    json.insert("p_e1".into(), json!(round_sig(w.p1)));
    json.insert("p_e2".into(), json!(round_sig(w.p2)));
    json.insert("p_meet".into(), json!(round_sig(w.p12)));
    json.insert("lhs".into(), json!(round_sig(w.lhs)));
    json.insert("violates".into(), json!(w.violates()));
    let rows = vec![
        vec!["  p(E1)".to_string(), format_float(w.p1)],
        vec!["  p(E2)".to_string(), format_float(w.p2)],
        vec!["  p(E1∧E2)".to_string(), format_float(w.p12)],
        vec!["  p(E1)+p(E2)-p(E1∧E2)".to_string(), format_float(w.lhs)],
    ];
    text.push_str("witness state (canonical phase):\n");
    for c in w.state.with_canonical_phase().amplitudes().iter() {
        let im = format_float(c.im.abs());
        let _ = writeln!(text, "  {} {} {im}i", format_float(c.re), if c.im < 0.0 { "-" } else { "+" });
    }
    text.push_str(&table(&rows));
    let _ = writeln!(text, "verdict: {}", if w.violates() { "frequency inequality violated" } else { "NO violation found" });
    Ok(Output { json: Value::Object(json), text, ok: w.violates() })
}

fn build(cli: &Cli, path: &Path, out: Option<&Path>) -> CmdResult {
    let file: SetupFile = read_json(path)?;
    let setup = file.to_setup()?;
    let unified = build_unified_space_with(&setup, BuildOptions { include_zero_patterns: cli.full_table })?;
    let model = unified.space.to_json_model();
    let names: Vec<&str> = setup.measurements.iter().map(|m| m.name()).collect();
    let space_json = json!({
        "measurements": names,
        "exact": unified.exact,
        "points": model.points,
        "events": model.events,
    });

    let observed = observed_correlation_vector(&setup, &unified)?;
    let p = observed.to_f64();
    let cert = is_member(&p)?;

    let mut text = String::new();
    let mut json = Map::new();
    let positive = unified.positive_points().count();
    let _ = writeln!(
        text,
        "unified space: {} elementary events ({} with positive weight), weights {}",
        unified.points.len(),
        positive,
        if unified.exact { "exact" } else { "rescaled from floats" }
    );
    json.insert("points".into(), json!(unified.points.len()));
    json.insert("positive_points".into(), json!(positive));
    json.insert("exact".into(), json!(unified.exact));
    match out {
        Some(o) => {
            let mut s = serde_json::to_string_pretty(&space_json).expect("serializable");
            s.push('\n');
            std::fs::write(o, s).map_err(|e| Failure::Input(format!("{}: {e}", o.display())))?;
            let _ = writeln!(text, "written to {}", o.display());
            json.insert("written_to".into(), json!(o.display().to_string()));
        }
        None => {
            let mut rows = vec![vec![format!("  {}", names.join(" ")), "weight".to_string()]];
            rows.extend(model.points.iter().map(|pt| vec![format!("  {}", pt.label), pt.weight.clone()]));
            text.push_str(&table(&rows));
            json.insert("space".into(), space_json);
        }
    }

    let _ = writeln!(text, "observed correlation vector ({}):", p.layout());
    let rows: Vec<Vec<String>> = p
        .layout()
        .coordinate_names()
        .into_iter()
        .zip(observed.flat())
        .map(|(n, v)| vec![format!("  {n}"), format_rational(&v)])
        .collect();
    text.push_str(&table(&rows));
    let _ = writeln!(text, "verdict: {}", if cert.member { "member" } else { "NOT a member" });
    json.insert(
        "observed".into(),
        json!({
            "layout": { "n": p.layout().n(), "pairs": p.layout().pairs() },
            "vector": coordinates_json(&observed, |r| json!(format_rational(r))),
            "member": cert.member,
        }),
    );
    Ok(Output { json: Value::Object(json), text, ok: cert.member })
}

fn list_vertices(n: usize, pairs: &str) -> CmdResult {
    let layout = PairSet::parse(n, pairs)?;
    let verts = vertices(&layout)?;
    let names = layout.coordinate_names();
    let mut rows = vec![std::iter::once("vertex".to_string()).chain(names.iter().cloned()).collect::<Vec<_>>()];
    let mut list = Vec::new();
    for (label, v) in &verts {
        let values: Vec<u8> = v.flat().iter().map(|&x| x as u8).collect();
        rows.push(std::iter::once(label.to_string()).chain(values.iter().map(u8::to_string)).collect());
        list.push(json!({ "label": label.to_string(), "coordinates": values }));
    }
    let text = format!("{} vertices of C({layout})\n{}", verts.len(), table(&rows));
    let json = json!({
        "layout": { "n": layout.n(), "pairs": layout.pairs() },
        "coordinates": names,
        "vertices": list,
    });
    Ok(Output { json, text, ok: true })
}
