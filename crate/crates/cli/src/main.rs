//! `foinv`: command-line front end. Every command prints one JSON result
//! record on stdout.

mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use foinv::acceptance::{run_all, DEFAULT_SEED};
use foinv::calculus::{casson, check_admissibility, d0_invariant, expand_surgery_chain, lambda_fo, CalcError, FourManifold};
use foinv::exact::fmt_q;
use foinv::flow::{flow, Clock, FlowError, FlowParams};
use foinv::knot::{
    alexander_second_derivative_at_1, branched_cover_h1_order, tristram_levine_signature, KnotError, SeifertMatrix,
};
use foinv::pillowcase::{
    apply_gluing_plane, random_transverse_curve, signed_intersection_count, surgery_count_identity, PillowError,
};

use manifest::{parse_flow_batch, parse_scene_text, read_file, FlowItem, Manifest, ManifestError, Manifold, Scene};

#[derive(Parser)]
#[command(name = "foinv", version, about = "Casson and Furuta-Ohta invariant calculator with pillowcase and flow models")]
struct Cli {
    /// Manifest with knots, manifolds, scenes and flow batches.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Emit JSON (the only output format; accepted for explicitness).
    #[arg(long, global = true)]
    json: bool,
    /// Also print the evaluation trace to stderr.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Knot invariants from a catalog label or a Seifert matrix in JSON.
    Knot {
        knot: String,
        #[command(subcommand)]
        what: KnotWhat,
    },
    /// Evaluate a named manifold from the manifest, or an inline expression.
    Invariant {
        /// Manifold name in the manifest.
        name: Option<String>,
        /// Inline JSON expression instead of a manifest name.
        #[arg(long)]
        expr: Option<String>,
        #[arg(long, value_enum, default_value_t = What::Value)]
        what: What,
    },
    /// Signed intersection counts for a pillowcase scene.
    Scene {
        /// Scene file.
        file: Option<PathBuf>,
        /// Scene name in the manifest.
        #[arg(long)]
        name: Option<String>,
        /// Check the counting identity on this many seeded random curves.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Chern-Simons flow from nine initial coordinates or a batch.
    Flow(FlowArgs),
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Subcommand, Clone)]
enum KnotWhat {
    Alexander,
    Ddelta,
    Signature { m: i64, n: i64 },
    Cover { n: i64 },
}

#[derive(Copy, Clone, ValueEnum)]
enum What {
    Value,
    Admissibility,
    D0,
    Chain,
}

#[derive(Args)]
struct FlowArgs {
    /// X1, X2, X3 as nine numbers. Rationals like 1/2 are accepted; put
    /// negative rationals after `--`.
    #[arg(allow_negative_numbers = true)]
    coords: Vec<String>,
    /// JSON file holding an array of initial conditions.
    #[arg(long)]
    batch: Option<PathBuf>,
    /// Batch name in the manifest.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<f64>,
    #[arg(long, value_enum)]
    clock: Option<ClockArg>,
    #[arg(long)]
    sample_every: Option<usize>,
    /// Keep integrating the cut-off field after the truncation radius.
    #[arg(long)]
    continue_past_truncation: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum ClockArg {
    Physical,
    Rescaled,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    #[error(transparent)]
    Calc(#[from] CalcError),
    #[error(transparent)]
    Knot(#[from] KnotError),
    #[error(transparent)]
    Pillow(#[from] PillowError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Located { context: String, source: Box<CliError> },
    #[error("{0} acceptance criteria failed")]
    Selftest(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Calc(CalcError::Unresolvable { .. }) => 3,
            CliError::Located { source, .. } => source.exit_code(),
            CliError::Selftest(_) => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Manifest(_) => "InvalidManifest",
            CliError::Calc(e) => match e {
                CalcError::NotAHomologySphere(_) => "NotAHomologySphere",
                CalcError::NotAdmissible { .. } => "NotAdmissible",
                CalcError::Unresolvable { .. } => "Unresolvable",
                CalcError::NonIntegralCasson { .. } => "NonIntegralCasson",
                CalcError::BadChain(_) => "BadChain",
                CalcError::Knot(_) => "KnotError",
            },
            CliError::Knot(e) => match e {
                KnotError::UnknownKnot(_) => "UnknownKnot",
                KnotError::SingularForm { .. } => "SingularForm",
                _ => "InvalidKnot",
            },
            CliError::Pillow(e) => match e {
                PillowError::NonTransverse { .. } | PillowError::ThroughCentralClass(_) => "NonTransverse",
                PillowError::NotInvariant { .. } => "NotInvariant",
                PillowError::NonUnimodular(_) => "NonUnimodular",
                _ => "InvalidScene",
            },
            CliError::Flow(_) => "InvalidParams",
            CliError::Usage(_) => "Usage",
            CliError::Located { source, .. } => source.kind(),
            CliError::Selftest(_) => "SelftestFailed",
        }
    }
}

#[derive(Serialize)]
struct Timing {
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct ResultRecord {
    input_digest: String,
    operation: String,
    value: Value,
    trace: Value,
    timing: Timing,
}

struct Output {
    value: Value,
    trace: Value,
}

impl Output {
    fn plain(value: Value) -> Self {
        Output { value, trace: json!([]) }
    }
}

fn digest(operation: &str, args: &Value, inputs: &[&str]) -> String {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(&json!({ "operation": operation, "args": args })).unwrap_or_default());
    for i in inputs {
        h.update((i.len() as u64).to_le_bytes());
        h.update(i.as_bytes());
    }
    hex::encode(h.finalize())
}

fn big(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

fn load_manifest(cli: &Cli) -> Result<Manifest, CliError> {
    Ok(match &cli.manifest {
        Some(p) => Manifest::load(p)?,
        None => Manifest::empty(),
    })
}

fn seifert_from_arg(m: &Manifest, knot: &str) -> Result<(String, SeifertMatrix), CliError> {
    let t = knot.trim();
    if t.starts_with('[') {
        let s: SeifertMatrix = serde_json::from_str(t).map_err(|e| CliError::Usage(format!("Seifert matrix `{t}`: {e}")))?;
        Ok(("K".into(), s))
    } else {
        Ok((t.to_string(), m.catalog.get(t)?))
    }
}

fn cmd_knot(cli: &Cli, m: &Manifest, knot: &str, what: &KnotWhat) -> Result<(String, Value, Output), CliError> {
    let (label, v) = seifert_from_arg(m, knot)?;
    let (op, args, value) = match what {
        KnotWhat::Alexander => ("knot.alexander", json!([knot]), json!(foinv::knot::alexander_polynomial(&v).to_string())),
        KnotWhat::Ddelta => ("knot.ddelta", json!([knot]), big(&alexander_second_derivative_at_1(&v))),
        KnotWhat::Signature { m: mm, n } => {
            ("knot.signature", json!([knot, mm, n]), json!(tristram_levine_signature(&v, *mm, *n)?))
        }
        KnotWhat::Cover { n } => ("knot.cover", json!([knot, n]), json!(branched_cover_h1_order(&v, *n)?.to_string())),
    };
    let _ = cli;
    Ok((op.into(), args, Output::plain(json!({ "knot": label, "result": value }))))
}

fn eval_manifold(mf: &Manifold, what: What) -> Result<Output, CliError> {
    match (mf, what) {
        (Manifold::Three(y), What::Value) => {
            let v = casson(y)?;
            Ok(Output { value: json!({ "invariant": "casson", "manifold": y.to_string(), "value": fmt_q(&v.value) }), trace: serde_json::to_value(&v.trace).unwrap_or_default() })
        }
        (Manifold::Three(y), _) => Err(CliError::Usage(format!("`{y}` is a 3-manifold; only --what value applies"))),
        (Manifold::Four(x), What::Value) => {
            let v = lambda_fo(x)?;
            Ok(Output { value: json!({ "invariant": "lambda_fo", "manifold": x.to_string(), "value": fmt_q(&v.value) }), trace: serde_json::to_value(&v.trace).unwrap_or_default() })
        }
        (Manifold::Four(x), What::Admissibility) => {
            let r = check_admissibility(x);
            Ok(Output::plain(json!({ "manifold": x.to_string(), "admissibility": r })))
        }
        (Manifold::Four(x), What::D0) => {
            let v = d0_invariant(x)?;
            Ok(Output { value: json!({ "invariant": "d0", "manifold": x.to_string(), "value": fmt_q(&v.value) }), trace: serde_json::to_value(&v.trace).unwrap_or_default() })
        }
        (Manifold::Four(x), What::Chain) => {
            let steps = match x {
                FourManifold::TorusSurgery { q, .. } => q.unsigned_abs(),
                _ => return Err(CalcError::BadChain(format!("{x} is not a torus surgery")).into()),
            };
            let v = expand_surgery_chain(x, steps)?;
            Ok(Output { value: json!({ "invariant": "lambda_fo", "route": "surgery-chain", "manifold": x.to_string(), "value": fmt_q(&v.value) }), trace: serde_json::to_value(&v.trace).unwrap_or_default() })
        }
    }
}

fn cmd_invariant(m: &Manifest, name: Option<&str>, expr: Option<&str>, what: What) -> Result<(String, Value, Output), CliError> {
    let what_s = match what {
        What::Value => "value",
        What::Admissibility => "admissibility",
        What::D0 => "d0",
        What::Chain => "chain",
    };
    let (label, mf) = match (name, expr) {
        (Some(n), None) => (n.to_string(), m.manifold(n)?.clone()),
        (None, Some(e)) => {
            let v: Value = serde_json::from_str(e).map_err(|err| CliError::Usage(format!("--expr: {err}")))?;
            ("<expr>".to_string(), m.parse_expression(&v)?)
        }
        _ => return Err(CliError::Usage("give exactly one of a manifold name or --expr".into())),
    };
    let out = eval_manifold(&mf, what).map_err(|e| CliError::Located { context: format!("manifold `{label}`"), source: Box::new(e) })?;
    Ok((format!("invariant.{what_s}"), json!([name, expr, what_s]), out))
}

fn count_scene(scene: &Scene) -> Result<Value, CliError> {
    let planes = scene.planes.clone();
    let curves: Vec<Value> = scene
        .curves
        .par_iter()
        .enumerate()
        .map(|(i, c)| -> Result<Value, CliError> {
            let mut counts = serde_json::Map::new();
            for p in &planes {
                let n = signed_intersection_count(c, p)
                    .map_err(|e| CliError::Located { context: format!("curve {i}"), source: Box::new(e.into()) })?;
                counts.insert(p.label.clone(), json!(n));
            }
            let identity = match surgery_count_identity(c) {
                Ok(r) => serde_json::to_value(r).unwrap_or_default(),
                Err(e) => json!({ "error": e.to_string() }),
            };
            Ok(json!({ "curve": i, "counts": counts, "identity": identity }))
        })
        .collect::<Result<_, _>>()?;
    let mut checks = Vec::new();
    for c in &scene.checks {
        let a = scene.matrices[&c.matrix];
        let (Some(p), Some(q)) = (scene.plane(&c.plane), scene.plane(&c.equals)) else {
            return Err(CliError::Usage(format!("check references unknown planes {} / {}", c.plane, c.equals)));
        };
        let img = apply_gluing_plane(&a, &p)?;
        let pass = if c.mode == "quotient" { img.quotient_eq(&q) } else { img.set_eq(&q) };
        checks.push(json!({ "matrix": c.matrix, "plane": c.plane, "equals": c.equals, "mode": c.mode, "image": img, "pass": pass }));
    }
    let all_hold = curves.iter().all(|c| c["identity"]["holds"] != json!(false));
    let checks_pass = checks.iter().all(|c| c["pass"] == json!(true));
    Ok(json!({
        "planes": scene.planes.iter().map(|p| p.label.clone()).collect::<Vec<_>>(),
        "curves": curves,
        "checks": checks,
        "identity_holds_on_all_curves": all_hold,
        "checks_pass": checks_pass,
    }))
}

fn cmd_scene(cli: &Cli, m: &Manifest, file: Option<&PathBuf>, name: Option<&str>, random: Option<usize>) -> Result<(String, Value, Output, String), CliError> {
    if let Some(n) = random {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let reports: Vec<Value> = (0..n)
            .map(|i| {
                let k = rng.gen_range(4..=9);
                let (c, r) = random_transverse_curve(&mut rng, k, 1009);
                json!({ "curve": i, "vertices": c, "identity": r })
            })
            .collect();
        let all = reports.iter().all(|r| r["identity"]["holds"] == json!(true) && r["identity"]["boundary_total"] == json!(0));
        let value = json!({ "seed": cli.seed, "curves": reports, "identity_holds_on_all_curves": all });
        return Ok(("scene.random".into(), json!([n, cli.seed]), Output::plain(value), String::new()));
    }
    let (scene, src) = match (file, name) {
        (Some(f), None) => {
            let t = read_file(f)?;
            (parse_scene_text(&t)?, t)
        }
        (None, Some(n)) => (
            m.scenes.get(n).cloned().ok_or_else(|| CliError::Usage(format!("scene `{n}` is not in the manifest")))?,
            String::new(),
        ),
        _ => return Err(CliError::Usage("give a scene file, --name, or --random N".into())),
    };
    let value = count_scene(&scene)?;
    Ok(("scene.count".into(), json!([file.map(|f| f.display().to_string()), name]), Output::plain(value), src))
}

fn params_from(a: &FlowArgs, base: FlowParams) -> FlowParams {
    let mut p = base;
    if let Some(x) = a.step {
        p.step = x;
    }
    if let Some(x) = a.t_max {
        p.t_max = x;
    }
    if let Some(x) = a.radius {
        p.truncation_radius = x;
    }
    if let Some(x) = a.sign {
        p.sign_convention = x;
    }
    if let Some(c) = a.clock {
        p.clock = match c {
            ClockArg::Physical => Clock::Physical,
            ClockArg::Rescaled => Clock::Rescaled,
        };
    }
    if let Some(s) = a.sample_every {
        p.sample_every = s;
    }
    if a.continue_past_truncation {
        p.stop_at_truncation = false;
    }
    p
}

fn cmd_flow(m: &Manifest, a: &FlowArgs) -> Result<(String, Value, Output, String), CliError> {
    let (items, src): (Vec<FlowItem>, String) = match (&a.batch, &a.name, a.coords.is_empty()) {
        (Some(f), None, true) => {
            let t = read_file(f)?;
            let v: Value = serde_json::from_str(&t).map_err(|e| CliError::Usage(format!("batch {}: {e}", f.display())))?;
            (parse_flow_batch(&v)?, t)
        }
        (None, Some(n), true) => (
            m.flows.get(n).cloned().ok_or_else(|| CliError::Usage(format!("flow batch `{n}` is not in the manifest")))?,
            String::new(),
        ),
        (None, None, false) => {
            let v = Value::Array(a.coords.iter().map(|c| json!(c)).collect());
            (parse_flow_batch(&json!([v]))?, String::new())
        }
        _ => return Err(CliError::Usage("give nine coordinates, --batch FILE, or --name BATCH".into())),
    };
    let items: Vec<FlowItem> = items.into_iter().map(|it| FlowItem { params: params_from(a, it.params), ..it }).collect();
    for (i, it) in items.iter().enumerate() {
        it.params.validate().map_err(|e| CliError::Located { context: format!("item {i}"), source: Box::new(e.into()) })?;
    }
    let results: Vec<Value> = items
        .par_iter()
        .map(|it| {
            let tr = flow(&it.b0, &it.params)?;
            let drift = tr.max_drift.iter().copied().fold(0.0, f64::max);
            Ok(json!({
                "b0": it.b0,
                "params": it.params,
                "classification": tr.classification,
                "max_first_integral_drift": drift,
                "trajectory": tr,
            }))
        })
        .collect::<Result<_, FlowError>>()?;
    let args = json!({ "coords": a.coords, "batch": a.batch.as_ref().map(|b| b.display().to_string()), "name": a.name,
        "step": a.step, "t_max": a.t_max, "radius": a.radius, "sign": a.sign, "sample_every": a.sample_every,
        "continue": a.continue_past_truncation, "clock": a.clock.map(|c| match c { ClockArg::Physical => "physical", ClockArg::Rescaled => "rescaled" }) });
    Ok(("flow".into(), args, Output::plain(json!({ "trajectories": results })), src))
}

fn cmd_selftest(cli: &Cli) -> Result<(String, Value, Output), CliError> {
    let reports = run_all(cli.seed);
    for r in &reports {
        eprintln!("{}", r.line());
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    let value = json!({ "seed": cli.seed, "all_passed": failed == 0, "criteria": reports });
    Ok(("selftest".into(), json!([cli.seed]), Output::plain(value)))
}

fn run(cli: &Cli) -> Result<(String, String, Output), CliError> {
    let m = load_manifest(cli)?;
    let (op, args, out, extra) = match &cli.command {
        Command::Knot { knot, what } => {
            let (op, args, out) = cmd_knot(cli, &m, knot, what)?;
            (op, args, out, String::new())
        }
        Command::Invariant { name, expr, what } => {
            let (op, args, out) = cmd_invariant(&m, name.as_deref(), expr.as_deref(), *what)?;
            (op, args, out, String::new())
        }
        Command::Scene { file, name, random } => cmd_scene(cli, &m, file.as_ref(), name.as_deref(), *random)?,
        Command::Flow(a) => cmd_flow(&m, a)?,
        Command::Selftest => {
            let (op, args, out) = cmd_selftest(cli)?;
            (op, args, out, String::new())
        }
    };
    Ok((op.clone(), digest(&op, &args, &[&m.source, &extra]), out))
}

fn emit<T: Serialize>(rec: &T) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(rec).unwrap_or_default();
    let mut out = std::io::stdout().lock();
    // A closed pipe downstream is not our error.
    let _ = writeln!(out, "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok((operation, input_digest, out)) => {
            if cli.trace {
                if let Some(steps) = out.trace.as_array() {
                    for s in steps {
                        eprintln!("{} [{}] {} = {}", s["rule"].as_str().unwrap_or(""), s["term"].as_str().unwrap_or(""), s["detail"].as_str().unwrap_or(""), s["value"].as_str().unwrap_or(""));
                    }
                }
            }
            let failed = operation == "selftest" && out.value["all_passed"] == json!(false);
            let rec = ResultRecord { input_digest, operation, value: out.value, trace: out.trace, timing: Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 } };
            emit(&rec);
            if failed {
                let n = rec.value["criteria"].as_array().map(|c| c.iter().filter(|r| r["passed"] == json!(false)).count()).unwrap_or(0);
                let e = CliError::Selftest(n);
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            let rec = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            emit(&rec);
            ExitCode::from(e.exit_code())
        }
    }
}
