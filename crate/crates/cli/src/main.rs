//! `hamanneal`: generate instances, solve them, and run the threshold
//! experiments.
//!
//! Results go to stdout (or `--out`), progress and audit lines to stderr.
//! Exit codes: 0 done / cycle found, 1 no cycle within budget (`solve`,
//! `decide`, `oracle`), 2 usage or input error.

mod presets;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hamanneal::experiments::{decide_hcp, sweep, SweepParameter, SweepSpec, DEFAULT_DECIDE_ATTEMPTS};
use hamanneal::seed::RNG_ALGORITHM;
use hamanneal::{anneal, brute_force_hc, verify_hc, AnnealParams, GeneratorKind, GeneratorSpec, Instance};

use presets::Preset;

#[derive(Parser, Debug)]
#[command(name = "hamanneal", version, about = "Simulated annealing for directed Hamiltonian cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Run one annealing trial on an instance file.
    Solve(SolveArgs),
    /// Run a parameter sweep and write a CSV or JSON report.
    Sweep(SweepArgs),
    /// Augment to 0.58 N ln N roads and anneal (heuristic verdict).
    Decide(DecideArgs),
    /// Exact Hamiltonian-cycle search for instances of at most 14 cities.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: GeneratorKind,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
struct AnnealArgs {
    /// Initial temperature.
    #[arg(long)]
    t0: Option<f64>,
    /// Cooling factor per step.
    #[arg(long)]
    fc: Option<f64>,
    /// Number of annealing steps.
    #[arg(long)]
    na: Option<u32>,
    /// Moves per step are round(moves_mult * N^2).
    #[arg(long)]
    moves_mult: Option<f64>,
    /// Boltzmann-like constant.
    #[arg(long)]
    k: Option<f64>,
    /// Probability of proposing a swap instead of a transport.
    #[arg(long)]
    swap_prob: Option<f64>,
    /// Longest transported segment.
    #[arg(long)]
    max_segment: Option<usize>,
}

impl AnnealArgs {
    fn resolve(&self, seed: u64) -> AnnealParams {
        let d = AnnealParams::default();
        AnnealParams {
            t0: self.t0.unwrap_or(d.t0),
            fc: self.fc.unwrap_or(d.fc),
            na: self.na.unwrap_or(d.na),
            moves_mult: self.moves_mult.unwrap_or(d.moves_mult),
            k: self.k.unwrap_or(d.k),
            swap_prob: self.swap_prob.unwrap_or(d.swap_prob),
            max_segment: self.max_segment.or(d.max_segment),
            seed,
        }
    }
}

/// Flags reproducing `p` exactly, seed excluded.
fn anneal_flags(p: &AnnealParams) -> Vec<String> {
    let mut v = vec![
        "--t0".into(),
        p.t0.to_string(),
        "--fc".into(),
        p.fc.to_string(),
        "--na".into(),
        p.na.to_string(),
        "--moves-mult".into(),
        p.moves_mult.to_string(),
        "--k".into(),
        p.k.to_string(),
        "--swap-prob".into(),
        p.swap_prob.to_string(),
    ];
    if let Some(s) = p.max_segment {
        v.extend(["--max-segment".into(), s.to_string()]);
    }
    v
}

#[derive(Args, Debug)]
struct SolveArgs {
    instance: PathBuf,
    #[command(flatten)]
    anneal: AnnealArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ParamName {
    K,
    M,
    N,
}

impl From<ParamName> for SweepParameter {
    fn from(p: ParamName) -> Self {
        match p {
            ParamName::K => SweepParameter::K,
            ParamName::M => SweepParameter::M,
            ParamName::N => SweepParameter::N,
        }
    }
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Load a generator and value grid matching one of the standard
    /// experiments; other flags override it.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long, value_parser = parse_kind)]
    kind: Option<GeneratorKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<f64>,
    /// Parameter varied across the sweep.
    #[arg(long, value_enum)]
    param: Option<ParamName>,
    /// Comma-separated, strictly increasing values of the swept parameter.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 1)]
    master_seed: u64,
    /// Share one instance across the trials of each point.
    #[arg(long)]
    single_instance: bool,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    anneal: AnnealArgs,
}

#[derive(Args, Debug)]
struct DecideArgs {
    instance: PathBuf,
    #[command(flatten)]
    anneal: AnnealArgs,
    #[arg(long, default_value_t = DEFAULT_DECIDE_ATTEMPTS)]
    attempts: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct OracleArgs {
    instance: PathBuf,
}

fn parse_kind(s: &str) -> Result<GeneratorKind, String> {
    s.parse().map_err(|e: hamanneal::Error| e.to_string())
}

/// Failure that maps to exit code 2.
struct Fail(String);

impl<E: std::fmt::Display> From<E> for Fail {
    fn from(e: E) -> Self {
        Fail(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Decide(a) => cmd_decide(a),
        Command::Oracle(a) => cmd_oracle(a),
    };
    match outcome {
        Ok(code) => code,
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<Instance, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail(format!("{}: {e}", path.display())))?;
    Instance::parse(&text).map_err(|e| Fail(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Fail(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> Result<(), Fail> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    emit(out, &s)
}

fn path_arg(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let spec = GeneratorSpec::new(a.kind, a.n, a.m, a.seed)?;
    let inst = spec.generate()?;
    let exact = a.m * a.n as f64 * (a.n as f64).ln();
    let mut command = vec![
        "gen".to_string(),
        "--kind".into(),
        a.kind.to_string(),
        "--n".into(),
        a.n.to_string(),
        "--m".into(),
        a.m.to_string(),
        "--seed".into(),
        a.seed.to_string(),
    ];
    if let Some(p) = &a.out {
        command.extend(["--out".into(), path_arg(p)]);
    }
    eprintln!(
        "{}",
        json!({
            "command": command,
            "generator": spec,
            "roads": inst.road_count(),
            "road_formula": format!("round_half_up({} * {} * ln {}) = round_half_up({exact:.4})", a.m, a.n, a.n),
            "rng": RNG_ALGORITHM,
        })
    );
    emit(a.out.as_deref(), &inst.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let params = a.anneal.resolve(a.seed);
    let start = Instant::now();
    let result = anneal(&inst, &params)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let verified = verify_hc(&inst, result.tour.order())?;
    let planted_found = match (result.found, inst.planted_cycle()) {
        (true, Some(p)) => Some(result.tour.same_cycle(p)),
        _ => None,
    };

    let mut command = vec!["solve".to_string(), path_arg(&a.instance)];
    command.extend(anneal_flags(&params));
    command.extend(["--seed".into(), params.seed.to_string()]);
    let found = result.found;
    emit_json(
        None,
        &json!({
            "command": command,
            "rng": RNG_ALGORITHM,
            "instance": {
                "path": path_arg(&a.instance),
                "n_cities": inst.n_cities(),
                "roads": inst.road_count(),
                "planted": inst.planted_cycle().is_some(),
            },
            "params": params,
            "result": result,
            "verified": verified,
            "planted_found": planted_found,
            "wall_ms": wall_ms,
        }),
    )?;
    Ok(if found { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_sweep(a: SweepArgs) -> CmdResult {
    let preset = a.preset.map(Preset::shape);
    let kind =
        a.kind.or(preset.as_ref().map(|p| p.kind)).ok_or_else(|| Fail("--kind is required without --preset".into()))?;
    let parameter: SweepParameter = match (a.param, &preset) {
        (Some(p), _) => p.into(),
        (None, Some(p)) => p.parameter,
        (None, None) => return Err(Fail("--param is required without --preset".into())),
    };
    let n = a.n.or(preset.as_ref().map(|p| p.n)).ok_or_else(|| Fail("--n is required".into()))?;
    let m = a.m.or(preset.as_ref().and_then(|p| p.m)).unwrap_or(0.7);
    let values = match (&a.values, &preset) {
        (Some(v), _) => v.clone(),
        // A fixed city count collapses a city-count preset to one row.
        (None, Some(_)) if parameter == SweepParameter::N && a.n.is_some() => vec![n as f64],
        (None, Some(p)) => p.values.clone(),
        (None, None) => return Err(Fail("--values is required without --preset".into())),
    };
    let trials = a.trials.or(preset.as_ref().map(|p| p.trials)).unwrap_or(16);
    let params = a.anneal.resolve(0);

    let template_n = match parameter {
        SweepParameter::N => values.first().map(|&v| v as usize).unwrap_or(n),
        _ => n,
    };
    let template_m = match parameter {
        SweepParameter::M => values.first().copied().unwrap_or(m),
        _ => m,
    };
    let generator = GeneratorSpec { kind, n_cities: template_n, m: template_m, seed: 0 };
    let spec = SweepSpec {
        generator,
        swept_parameter: parameter,
        values,
        trials,
        params,
        master_seed: a.master_seed,
        fresh_instance_per_trial: !a.single_instance,
    };
    spec.validate()?;

    let mut command = vec![
        "sweep".to_string(),
        "--kind".into(),
        kind.to_string(),
        "--n".into(),
        n.to_string(),
        "--m".into(),
        m.to_string(),
        "--param".into(),
        param_name(parameter).into(),
        "--values".into(),
        spec.values.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
        "--trials".into(),
        trials.to_string(),
        "--master-seed".into(),
        a.master_seed.to_string(),
    ];
    if a.single_instance {
        command.push("--single-instance".into());
    }
    command.extend(anneal_flags(&params));
    command.extend(["--format".into(), format_name(a.format).into()]);
    if let Some(p) = &a.out {
        command.extend(["--out".into(), path_arg(p)]);
    }

    eprintln!("sweep: {} over {} values x {} trials on {kind}", param_name(parameter), spec.values.len(), trials);
    let report = sweep(&spec, a.jobs)?;
    match a.format {
        Format::Csv => {
            eprintln!("{}", json!({ "command": command, "spec": spec, "rng": RNG_ALGORITHM }));
            emit(a.out.as_deref(), &report.to_csv())?;
        }
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            v["command"] = json!(command);
            emit_json(a.out.as_deref(), &v)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn param_name(p: SweepParameter) -> &'static str {
    match p {
        SweepParameter::K => "k",
        SweepParameter::M => "m",
        SweepParameter::N => "n",
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn cmd_decide(a: DecideArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let params = a.anneal.resolve(0);
    let start = Instant::now();
    let decision = decide_hcp(&inst, &params, a.attempts, a.seed)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut command = vec!["decide".to_string(), path_arg(&a.instance)];
    command.extend(anneal_flags(&params));
    command.extend(["--attempts".into(), a.attempts.to_string(), "--seed".into(), a.seed.to_string()]);
    let found = decision.verdict == hamanneal::experiments::Verdict::HcFound;
    let mut v = serde_json::to_value(&decision)?;
    v["certifies_original"] = json!(decision.certifies_original());
    v["command"] = json!(command);
    v["rng"] = json!(RNG_ALGORITHM);
    v["params"] = serde_json::to_value(params)?;
    v["wall_ms"] = json!(wall_ms);
    emit_json(None, &v)?;
    Ok(if found { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_oracle(a: OracleArgs) -> CmdResult {
    let inst = load(&a.instance)?;
    let hc = brute_force_hc(&inst)?;
    let found = hc.is_some();
    emit_json(
        None,
        &json!({
            "command": ["oracle", path_arg(&a.instance)],
            "n_cities": inst.n_cities(),
            "roads": inst.road_count(),
            "hamiltonian": found,
            "tour": hc,
        }),
    )?;
    Ok(if found { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
