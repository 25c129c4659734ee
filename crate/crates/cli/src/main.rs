//! `frobdisc`: traces, endomorphism-ring discriminants and prime sweeps
//! from the command line.
//!
//! Curve models must be globally minimal: good reduction at `p >= 5` is
//! decided by `p` not dividing the model's discriminant.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use frobdisc::curve::{builtin_registry, parse_registry, Registry};
use frobdisc::endoring::{Engine, EngineConfig, ModularPolynomials};
use frobdisc::sweep::{format_csv, parse_csv, run_sweep, summarize, SweepConfig, ThresholdFunction};
use frobdisc::trace::DEFAULT_NAIVE_THRESHOLD;
use frobdisc::{verify, CurveQ, Error};

use config::ConfigFile;

// stdout may be a closed pipe (`| head`); output is best effort
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

fn out_raw(s: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(s.as_bytes());
}

const EXIT_USAGE: u8 = 1;
const EXIT_BAD_REDUCTION: u8 = 2;
const EXIT_CHECKPOINT: u8 = 3;
const EXIT_CM: u8 = 4;
const EXIT_VERIFY: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "frobdisc", version, about = "Frobenius traces and endomorphism-ring discriminants of elliptic curves")]
struct Cli {
    /// Extra curve registry file (`label:a1,a2,a3,a4,a6` per line).
    #[arg(long, global = true)]
    registry: Option<PathBuf>,
    /// `key=value` defaults; explicit flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frobenius trace a_p.
    Trace(PointArgs),
    /// a_p, b_p, delta_p, r_p, m_p at one prime.
    Disc(PointArgs),
    /// Records for every good prime up to x, with summary statistics.
    Sweep(SweepArgs),
    /// Run the oracle suite.
    Verify(VerifyArgs),
    /// Summarize (or re-emit) a sweep CSV.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Registry label or path to a registry file.
    #[arg(long)]
    curve: Option<String>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    naive_threshold: Option<u64>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    curve: Option<String>,
    #[arg(long)]
    x: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Threshold function: log, loglog, power(A), constant(C). Repeatable.
    #[arg(long = "f")]
    f: Vec<String>,
    /// Final CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Resumable CSV written block by block.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Sweep a curve with complex multiplication anyway.
    #[arg(long)]
    override_cm: bool,
    #[arg(long)]
    naive_threshold: Option<u64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    max_p: Option<u64>,
    /// Restrict to these curves (default: whole registry).
    #[arg(long)]
    curve: Vec<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long = "f")]
    f: Vec<String>,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BadReduction(_) => EXIT_BAD_REDUCTION,
            Error::CheckpointCorrupt(_) | Error::InvariantViolation { .. } => EXIT_CHECKPOINT,
            Error::CmRefused(_) => EXIT_CM,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path).map_err(Failure::usage)?,
        None => ConfigFile::default(),
    };
    let mut registry = builtin_registry();
    if let Some(path) = cli.registry.as_ref().or(cfg.path("registry").as_ref()) {
        registry.extend(load_registry_file(path)?);
    }
    match cli.command {
        Command::Trace(args) => cmd_trace(&registry, &cfg, args),
        Command::Disc(args) => cmd_disc(&registry, &cfg, args),
        Command::Sweep(args) => cmd_sweep(&registry, &cfg, args),
        Command::Verify(args) => cmd_verify(&registry, &cfg, args),
        Command::Report(args) => cmd_report(&cfg, args),
    }
}

fn load_registry_file(path: &Path) -> Result<Registry, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok(parse_registry(&text)?)
}

/// A registry label, or a registry file holding exactly one curve.
fn resolve_curve(registry: &Registry, spec: &str) -> Result<CurveQ, Failure> {
    if let Some(e) = registry.get(spec) {
        return Ok(e.clone());
    }
    let path = Path::new(spec);
    if path.is_file() {
        let reg = load_registry_file(path)?;
        return match reg.curves() {
            [e] => Ok(e.clone()),
            _ => Err(Failure::usage(format!("{spec}: expected exactly one curve"))),
        };
    }
    Err(Error::UnknownCurve(spec.to_string()).into())
}

fn required<T>(value: Option<T>, name: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::usage(format!("--{name} is required")))
}

fn engine(cfg: &ConfigFile, naive_threshold: Option<u64>) -> Result<Engine, Failure> {
    let naive_threshold = match naive_threshold {
        Some(t) => t,
        None => cfg.parsed("naive-threshold").map_err(Failure::usage)?.unwrap_or(DEFAULT_NAIVE_THRESHOLD),
    };
    let modpolys = ModularPolynomials::load()?;
    Ok(Engine::new(EngineConfig { naive_threshold, ..EngineConfig::default() }, modpolys))
}

fn point_inputs(registry: &Registry, cfg: &ConfigFile, args: &PointArgs) -> Result<(CurveQ, u64), Failure> {
    let curve = required(args.curve.clone().or(cfg.get("curve")), "curve")?;
    let p = match args.p {
        Some(p) => p,
        None => required(cfg.parsed("p").map_err(Failure::usage)?, "p")?,
    };
    if !frobdisc::arith::is_prime(p) {
        return Err(Failure::usage(format!("{p} is not prime")));
    }
    if p < 5 {
        return Err(Error::PrimeTooSmall(p).into());
    }
    Ok((resolve_curve(registry, &curve)?, p))
}

fn cmd_trace(registry: &Registry, cfg: &ConfigFile, args: PointArgs) -> CmdResult {
    let (e, p) = point_inputs(registry, cfg, &args)?;
    let t = engine(cfg, args.naive_threshold)?.trace(&e, p)?;
    out!("p={} ap={} method={}", t.p, t.a, t.method);
    Ok(())
}

fn cmd_disc(registry: &Registry, cfg: &ConfigFile, args: PointArgs) -> CmdResult {
    let (e, p) = point_inputs(registry, cfg, &args)?;
    let r = engine(cfg, args.naive_threshold)?.endo_data(&e, p)?;
    out!(
        "p={} ap={} b={} delta={} r={} m={} ordinary={} extremal={}",
        r.p, r.a, r.b, r.delta, r.r, r.m, r.ordinary as u8, r.extremal as u8
    );
    Ok(())
}

fn threshold_list(names: &[String], cfg: &ConfigFile) -> Result<Vec<ThresholdFunction>, Failure> {
    let names: Vec<String> = if names.is_empty() {
        cfg.get("f").map(|s| s.split(',').map(str::to_string).collect()).unwrap_or_default()
    } else {
        names.to_vec()
    };
    if names.is_empty() {
        return Ok(ThresholdFunction::default_list());
    }
    names.iter().map(|n| n.parse().map_err(|e: Error| Failure::usage(e.to_string()))).collect()
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    std::fs::write(path, contents).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn print_summary(summary: &frobdisc::sweep::Summary) {
    out!(
        "curve={} x={} count={} skipped={} unresolved={}",
        summary.curve,
        summary.x,
        summary.count,
        summary.skipped.len(),
        summary.unresolved
    );
    for (name, ratio) in &summary.threshold_ratios {
        match ratio {
            Some(r) => out!("f={name} ratio={r:.6}"),
            None => out!("f={name} ratio=nan"),
        }
    }
    out!("extremal_count={} reference={:.6}", summary.extremal_count, summary.extremal_reference);
    match summary.schoof_statistic {
        Some(s) => out!("schoof_statistic={s:.6}"),
        None => out!("schoof_statistic=nan"),
    }
}

fn cmd_sweep(registry: &Registry, cfg: &ConfigFile, args: SweepArgs) -> CmdResult {
    let curve = required(args.curve.clone().or(cfg.get("curve")), "curve")?;
    let e = resolve_curve(registry, &curve)?;
    let x = match args.x {
        Some(x) => x,
        None => required(cfg.parsed("x").map_err(Failure::usage)?, "x")?,
    };
    if x < 5 {
        return Err(Failure::usage("--x must be at least 5"));
    }
    let jobs = match args.jobs {
        Some(j) => j,
        None => cfg.parsed("jobs").map_err(Failure::usage)?.unwrap_or(1),
    };
    if jobs == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    let fs = threshold_list(&args.f, cfg)?;
    let out = args.out.or(cfg.path("out"));
    let json = args.json.or(cfg.path("json"));
    let checkpoint = args.checkpoint.or(cfg.path("checkpoint"));
    let override_cm = args.override_cm || cfg.flag("override-cm").map_err(Failure::usage)?;
    if e.is_cm() && !override_cm {
        eprintln!("{} has complex multiplication; the statistics assume End = Z", e.label);
    }
    let sweep_cfg = SweepConfig { x, jobs, checkpoint: checkpoint.clone(), override_cm };
    let engine = engine(cfg, args.naive_threshold)?;
    let result = run_sweep(&e, &sweep_cfg, &engine)?;
    if result.unresolved_count() > 0 {
        eprintln!("{} unresolved records excluded", result.unresolved_count());
    }
    if let Some(out) = &out {
        if checkpoint.as_deref() != Some(out.as_path()) {
            write_file(out, &format_csv(&result)?)?;
        }
    }
    let summary = summarize(&result, &fs);
    if let Some(json) = &json {
        let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
        write_file(json, &(text + "\n"))?;
    }
    print_summary(&summary);
    Ok(())
}

fn cmd_verify(registry: &Registry, cfg: &ConfigFile, args: VerifyArgs) -> CmdResult {
    let max_p = match args.max_p {
        Some(m) => m,
        None => cfg.parsed("max-p").map_err(Failure::usage)?.unwrap_or(10_000),
    };
    let curves: Vec<CurveQ> = if args.curve.is_empty() {
        registry.curves().iter().filter(|e| !e.is_cm()).cloned().collect()
    } else {
        args.curve.iter().map(|c| resolve_curve(registry, c)).collect::<Result<_, _>>()?
    };
    let engine = engine(cfg, None)?;
    let reports = verify::run_all(&engine, &curves, max_p)?;
    let mut ok = true;
    for rep in &reports {
        out!("{rep}");
        for f in &rep.failures {
            eprintln!("  {}: {f}", rep.name);
        }
        ok &= rep.passed();
    }
    if ok {
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY, message: "verification failed".into() })
    }
}

fn cmd_report(cfg: &ConfigFile, args: ReportArgs) -> CmdResult {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.input.display())))?;
    let result = parse_csv(&text).map_err(|e| match e {
        Error::Parse(msg) => Failure { code: EXIT_CHECKPOINT, message: msg },
        other => other.into(),
    })?;
    match args.format {
        Format::Csv => out_raw(&format_csv(&result)?),
        Format::Json => {
            let summary = summarize(&result, &threshold_list(&args.f, cfg)?);
            out!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
        }
    }
    Ok(())
}
