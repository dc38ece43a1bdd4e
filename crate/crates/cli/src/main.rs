//! Batch front end: load channels and chains from JSON, evaluate the
//! log-moment functionals and leakage bounds, sweep rate regions, and
//! replay the soundness corpus. Scalar results print as plain numbers
//! with 15 significant digits; `--format json` or `csv` switches to a
//! record per result. All values are nats unless `--bits` is given.
//!
//! Exit codes: 0 success; 1 `verify` found a bound violation; 2 invalid
//! input or configuration; 3 an optimiser failed to converge.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use secrecy_bounds::bounds::{
    achievable_secret_size, leakage_exponent, pa_bound_discrete, pa_bound_expectation,
    pa_bound_optimized, random_coding_leakage_bound, resolvability_bound,
    resolvability_bound_optimized, BoundResult, RateTriple, RhoSearch,
};
use secrecy_bounds::gallager::{maximize_phi_over_input, phi, psi, Rho, DEFAULT_PHI_OPT_TOL};
use secrecy_bounds::numeric::format_sig;
use secrecy_bounds::oracle::{corpus_to_jsonl, run_soundness_sweep, CorpusParams};
use secrecy_bounds::region::{inner_bound_sweep, sweep_to_csv, RegionKind, SweepGrid};
use secrecy_bounds::{Channel, Distribution, Error, MarkovChainSpec};

const LN_2: f64 = std::f64::consts::LN_2;

#[derive(Parser)]
#[command(
    name = "secrecy-bounds",
    version,
    about = "Strong-secrecy leakage bounds and achievable rate regions for broadcast channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Gallager-style log-moment functional phi, or its
    /// certified maximum over inputs.
    Phi(PhiArgs),
    /// Evaluate the hashed-moment functional psi.
    Psi(PsiArgs),
    /// Privacy-amplification leakage bound for a hashed source.
    PaBound(PaBoundArgs),
    /// Resolvability-route leakage bound for a two-index uniform source.
    Resolvability(ResolvabilityArgs),
    /// Codebook-averaged leakage bound for the layered construction.
    RandomCoding(RandomCodingArgs),
    /// Signed decay rate of the codebook-averaged leakage bound
    /// (negative means the bound shrinks with blocklength).
    Exponent(ExponentArgs),
    /// Sweep auxiliary chains and emit the certified Pareto frontier.
    RegionSweep(RegionSweepArgs),
    /// Replay the seeded soundness corpus; nonzero exit on any violation.
    Verify(VerifyArgs),
    /// Secret size extractable from a wiretap layer at a given blocklength.
    AchievableSize(AchievableSizeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Bare value, one line.
    Text,
    /// One JSON object.
    Json,
    /// Header row plus one data row.
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct DisplayArgs {
    /// Output shape for the result record.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Display rates and bound values in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(Args)]
struct PhiArgs {
    /// Channel JSON path.
    #[arg(long)]
    channel: PathBuf,
    /// Input law: a JSON path or the literal `uniform`.
    #[arg(long, default_value = "uniform")]
    input: String,
    /// Tilt in (0, 1); phi excludes 1 itself.
    #[arg(long)]
    rho: f64,
    /// Maximise over inputs instead of evaluating at `--input`.
    #[arg(long)]
    maximize: bool,
    #[command(flatten)]
    display: DisplayArgs,
}

#[derive(Args)]
struct PsiArgs {
    /// Channel JSON path.
    #[arg(long)]
    channel: PathBuf,
    /// Input law: a JSON path or the literal `uniform`.
    #[arg(long, default_value = "uniform")]
    input: String,
    /// Tilt in (0, 1].
    #[arg(long)]
    rho: f64,
    #[command(flatten)]
    display: DisplayArgs,
}

#[derive(Args)]
struct PaBoundArgs {
    /// Eavesdropper channel JSON path (inputs are the source alphabet).
    #[arg(long)]
    channel: PathBuf,
    /// Secret alphabet size |M|.
    #[arg(long)]
    m_size: u64,
    /// Fixed tilt; mutually exclusive with --optimize.
    #[arg(long, conflicts_with = "optimize")]
    rho: Option<f64>,
    /// Search the tilt by bisection on the log bound.
    #[arg(long)]
    optimize: bool,
    /// Source law JSON path; omitted means the uniform-source route.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    display: DisplayArgs,
}

#[derive(Args)]
struct ResolvabilityArgs {
    /// Channel JSON path; its input alphabet must have k_size * l_size letters.
    #[arg(long)]
    channel: PathBuf,
    /// Secret alphabet size |M|.
    #[arg(long)]
    m_size: u64,
    /// First uniform index size |K|.
    #[arg(long)]
    k_size: u64,
    /// Second uniform index size |L|.
    #[arg(long)]
    l_size: u64,
    /// Fixed tilt; mutually exclusive with --optimize.
    #[arg(long, conflicts_with = "optimize")]
    rho: Option<f64>,
    /// Search the tilt by bisection on the log bound.
    #[arg(long)]
    optimize: bool,
    #[command(flatten)]
    display: DisplayArgs,
}

#[derive(Args)]
struct RandomCodingArgs {
    /// Auxiliary chain JSON path.
    #[arg(long)]
    chain: PathBuf,
    /// Secret rate R_1 in nats per letter.
    #[arg(long)]
    r1: f64,
    /// Pre-hash private rate R'_1 in nats per letter.
    #[arg(long)]
    r1_prime: f64,
    /// Blocklength.
    #[arg(long)]
    n: usize,
    /// Fixed tilt; mutually exclusive with --optimize.
    #[arg(long, conflicts_with = "optimize")]
    rho: Option<f64>,
    /// Pick the best tilt on a 20-point grid.
    #[arg(long)]
    optimize: bool,
    #[command(flatten)]
    display: DisplayArgs,
}

#[derive(Args)]
struct ExponentArgs {
    /// Auxiliary chain JSON path.
    #[arg(long)]
    chain: PathBuf,
    /// Secret rate R_1 in nats per letter.
    #[arg(long)]
    r1: f64,
    /// Pre-hash private rate R'_1 in nats per letter.
    #[arg(long)]
    r1_prime: f64,
    #[command(flatten)]
    display: DisplayArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Bcc,
    Strong,
    Bcd,
}

impl From<KindArg> for RegionKind {
    fn from(k: KindArg) -> RegionKind {
        match k {
            KindArg::Bcc => RegionKind::Bcc,
            KindArg::Strong => RegionKind::Strong,
            KindArg::Bcd => RegionKind::Bcd,
        }
    }
}

#[derive(Args)]
struct RegionSweepArgs {
    /// Intended receiver channel JSON path.
    #[arg(long)]
    y: PathBuf,
    /// Eavesdropper channel JSON path.
    #[arg(long)]
    z: PathBuf,
    /// Constraint set to certify against.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Largest common-layer alphabet.
    #[arg(long)]
    max_u: Option<usize>,
    /// Largest sampled private-layer alphabet.
    #[arg(long)]
    max_v: Option<usize>,
    /// Lattice denominator.
    #[arg(long)]
    resolution: Option<usize>,
    /// Number of seeded interior chains.
    #[arg(long)]
    restarts: Option<usize>,
    /// Seed for the interior chains.
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on candidate chains.
    #[arg(long)]
    max_candidates: Option<usize>,
    /// Reduce two-dimensional frontiers to concave-hull vertices.
    #[arg(long)]
    hull: bool,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output shape.
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Number of corpus instances.
    #[arg(long, default_value_t = 200)]
    instances: usize,
    /// Largest source length in bits.
    #[arg(long, default_value_t = 4)]
    max_k: usize,
    /// Largest eavesdropper output alphabet.
    #[arg(long, default_value_t = 6)]
    max_z: usize,
    /// Tilt grid points per bound.
    #[arg(long, default_value_t = 20)]
    rho_grid: usize,
    /// Master seed.
    #[arg(long, default_value_t = secrecy_bounds::oracle::CORPUS_MASTER_SEED)]
    seed: u64,
    /// Write the JSON-lines report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct AchievableSizeArgs {
    /// Eavesdropper channel JSON path.
    #[arg(long)]
    channel: PathBuf,
    /// Private codeword count |B|.
    #[arg(long)]
    b_size: u64,
    /// Common codeword count |E|.
    #[arg(long)]
    e_size: u64,
    /// Blocklength.
    #[arg(long)]
    n: usize,
    /// Capacity slack per letter, nats, positive.
    #[arg(long)]
    delta: f64,
    #[command(flatten)]
    display: DisplayArgs,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read_to_string(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path, e: Error) -> Failure {
    Failure { code: 2, message: format!("{}: {e}", path.display()) }
}

fn load_channel(path: &Path) -> Result<Channel, Failure> {
    Channel::from_json_str(&read_to_string(path)?).map_err(|e| in_file(path, e))
}

fn load_chain(path: &Path) -> Result<MarkovChainSpec, Failure> {
    MarkovChainSpec::from_json_str(&read_to_string(path)?).map_err(|e| in_file(path, e))
}

fn load_input(spec: &str, channel: &Channel) -> Result<Distribution, Failure> {
    if spec == "uniform" {
        return Ok(Distribution::uniform(channel.input_size()));
    }
    let path = Path::new(spec);
    Distribution::from_json_str(&read_to_string(path)?).map_err(|e| in_file(path, e))
}

fn parse_rho(value: f64) -> Result<Rho, Failure> {
    Ok(Rho::new(value)?)
}

/// One flat result record; insertion order is the CSV column order.
struct Record {
    fields: Vec<(&'static str, serde_json::Value)>,
}

impl Record {
    fn new() -> Self {
        Record { fields: Vec::new() }
    }

    fn push_str(&mut self, key: &'static str, v: impl Into<String>) -> &mut Self {
        self.fields.push((key, serde_json::Value::String(v.into())));
        self
    }

    fn push_num(&mut self, key: &'static str, v: f64) -> &mut Self {
        let n = serde_json::Number::from_f64(v)
            .unwrap_or_else(|| serde_json::Number::from_f64(0.0).expect("zero is finite"));
        self.fields.push((key, serde_json::Value::Number(n)));
        self
    }

    fn push_bool(&mut self, key: &'static str, v: bool) -> &mut Self {
        self.fields.push((key, serde_json::Value::Bool(v)));
        self
    }

    fn push_list(&mut self, key: &'static str, v: &[f64]) -> &mut Self {
        let items = v
            .iter()
            .map(|&x| {
                serde_json::Number::from_f64(x)
                    .map(serde_json::Value::Number)
                    .unwrap_or(serde_json::Value::Null)
            })
            .collect();
        self.fields.push((key, serde_json::Value::Array(items)));
        self
    }

    fn to_json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.fields {
            map.insert((*k).to_string(), v.clone());
        }
        serde_json::Value::Object(map).to_string()
    }

    fn to_csv(&self) -> String {
        let mut header = String::new();
        let mut row = String::new();
        for (i, (k, v)) in self.fields.iter().enumerate() {
            if i > 0 {
                header.push(',');
                row.push(',');
            }
            header.push_str(k);
            row.push_str(&csv_cell(v));
        }
        format!("{header}\n{row}\n")
    }
}

fn csv_cell(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Number(n) => match n.as_f64() {
            Some(x) => format_sig(x, 15),
            None => n.to_string(),
        },
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Bool(b) => b.to_string(),
        serde_json::Value::Array(items) => {
            let cells: Vec<String> = items.iter().map(csv_cell).collect();
            cells.join(";")
        }
        other => other.to_string(),
    }
}

/// The scale factor and unit label the `--bits` flag selects.
fn units(bits: bool) -> (f64, &'static str) {
    if bits {
        (LN_2, "bits")
    } else {
        (1.0, "nats")
    }
}

/// Renders a record whose leading field is the headline value.
fn emit(record: &Record, display: &DisplayArgs) -> String {
    match display.format {
        Format::Text => {
            let (_, v) = record
                .fields
                .iter()
                .find(|(k, _)| *k == "value")
                .expect("records carry a value field");
            let mut line = csv_cell(v);
            line.push('\n');
            line
        }
        Format::Json => {
            let mut s = record.to_json();
            s.push('\n');
            s
        }
        Format::Csv => record.to_csv(),
    }
}

fn bound_record(name: &'static str, b: &BoundResult, bits: bool) -> Record {
    let (scale, unit) = units(bits);
    let mut r = Record::new();
    r.push_num("value", b.value / scale);
    r.push_str("bound", name);
    r.push_num("rho", b.rho);
    r.push_str("units", unit);
    let flags: Vec<String> = b
        .flags
        .iter()
        .map(|f| {
            serde_json::to_value(f)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_else(|| format!("{f:?}"))
        })
        .collect();
    if !flags.is_empty() {
        r.push_str("flags", flags.join(";"));
    }
    if let Some(w) = &b.witness {
        r.push_list("witness", w);
    }
    r
}

fn cmd_phi(args: &PhiArgs) -> Result<String, Failure> {
    let channel = load_channel(&args.channel)?;
    let rho = parse_rho(args.rho)?;
    let (scale, unit) = units(args.display.bits);
    let mut record = Record::new();
    if args.maximize {
        let m = maximize_phi_over_input(rho, &channel, DEFAULT_PHI_OPT_TOL)?;
        record.push_num("value", m.value / scale);
        record.push_str("functional", "phi-max");
        record.push_num("rho", rho.value());
        record.push_str("units", unit);
        record.push_num("gap", m.gap / scale);
        record.push_list("witness", m.input.probs());
    } else {
        let input = load_input(&args.input, &channel)?;
        let v = phi(rho, &channel, &input)?;
        record.push_num("value", v / scale);
        record.push_str("functional", "phi");
        record.push_num("rho", rho.value());
        record.push_str("units", unit);
    }
    Ok(emit(&record, &args.display))
}

fn cmd_psi(args: &PsiArgs) -> Result<String, Failure> {
    let channel = load_channel(&args.channel)?;
    let input = load_input(&args.input, &channel)?;
    let rho = parse_rho(args.rho)?;
    let v = psi(rho, &channel, &input)?;
    let (scale, unit) = units(args.display.bits);
    let mut record = Record::new();
    record
        .push_num("value", v / scale)
        .push_str("functional", "psi")
        .push_num("rho", rho.value())
        .push_str("units", unit);
    Ok(emit(&record, &args.display))
}

fn cmd_pa_bound(args: &PaBoundArgs) -> Result<String, Failure> {
    let channel = load_channel(&args.channel)?;
    let input = match &args.input {
        None => None,
        Some(path) => Some(
            Distribution::from_json_str(&read_to_string(path)?)
                .map_err(|e| in_file(path, e))?,
        ),
    };
    let bound = match (args.rho, args.optimize) {
        (Some(r), false) => {
            let rho = parse_rho(r)?;
            match &input {
                None => pa_bound_discrete(rho, args.m_size, &channel)?,
                Some(p) => pa_bound_expectation(rho, args.m_size, &channel, p)?,
            }
        }
        (None, true) => pa_bound_optimized(
            args.m_size,
            &channel,
            input.as_ref(),
            &RhoSearch::default(),
        )?,
        _ => return Err(Failure::validation("pass exactly one of --rho or --optimize")),
    };
    Ok(emit(
        &bound_record("pa", &bound, args.display.bits),
        &args.display,
    ))
}

fn cmd_resolvability(args: &ResolvabilityArgs) -> Result<String, Failure> {
    let channel = load_channel(&args.channel)?;
    let bound = match (args.rho, args.optimize) {
        (Some(r), false) => resolvability_bound(
            parse_rho(r)?,
            args.m_size,
            args.k_size,
            args.l_size,
            &channel,
        )?,
        (None, true) => resolvability_bound_optimized(
            args.m_size,
            args.k_size,
            args.l_size,
            &channel,
            &RhoSearch::default(),
        )?,
        _ => return Err(Failure::validation("pass exactly one of --rho or --optimize")),
    };
    Ok(emit(
        &bound_record("resolvability", &bound, args.display.bits),
        &args.display,
    ))
}

fn random_coding_rates(r1: f64, r1_prime: f64) -> Result<RateTriple, Failure> {
    Ok(RateTriple::new(r1, 0.0, 0.0)?.with_r1_prime(r1_prime)?)
}

fn cmd_random_coding(args: &RandomCodingArgs) -> Result<String, Failure> {
    let chain = load_chain(&args.chain)?;
    let rates = random_coding_rates(args.r1, args.r1_prime)?;
    let bound = match (args.rho, args.optimize) {
        (Some(r), false) => random_coding_leakage_bound(&chain, &rates, parse_rho(r)?, args.n)?,
        (None, true) => {
            let mut best: Option<BoundResult> = None;
            for i in 1..=20 {
                let r = if i == 20 { 1.0 - 1e-6 } else { i as f64 / 20.0 };
                let b = random_coding_leakage_bound(&chain, &rates, parse_rho(r)?, args.n)?;
                if best.as_ref().is_none_or(|x| b.value < x.value) {
                    best = Some(b);
                }
            }
            best.expect("nonempty grid")
        }
        _ => return Err(Failure::validation("pass exactly one of --rho or --optimize")),
    };
    Ok(emit(
        &bound_record("random-coding", &bound, args.display.bits),
        &args.display,
    ))
}

fn cmd_exponent(args: &ExponentArgs) -> Result<String, Failure> {
    let chain = load_chain(&args.chain)?;
    let rates = random_coding_rates(args.r1, args.r1_prime)?;
    let e = leakage_exponent(&chain, &rates)?;
    let (scale, unit) = units(args.display.bits);
    let mut record = Record::new();
    record
        .push_num("value", e.exponent / scale)
        .push_str("quantity", "leakage-exponent")
        .push_num("rho", e.rho)
        .push_str("units", unit)
        .push_bool("flat", e.flat);
    Ok(emit(&record, &args.display))
}

fn cmd_region_sweep(args: &RegionSweepArgs) -> Result<String, Failure> {
    let y = load_channel(&args.y)?;
    let z = load_channel(&args.z)?;
    let kind: RegionKind = args.kind.into();
    let mut grid = SweepGrid::default_for(y.input_size());
    if let Some(v) = args.max_u {
        grid.max_u = v;
    }
    if let Some(v) = args.max_v {
        grid.max_v = v;
    }
    if let Some(v) = args.resolution {
        grid.resolution = v;
    }
    if let Some(v) = args.restarts {
        grid.restarts = v;
    }
    if let Some(v) = args.seed {
        grid.seed = v;
    }
    if let Some(v) = args.max_candidates {
        grid.max_candidates = v;
    }
    grid.convex_hull = args.hull;
    let points = inner_bound_sweep(&y, &z, kind, &grid)?;
    let body = match args.format {
        TableFormat::Csv => sweep_to_csv(&points, kind),
        TableFormat::Json => {
            let mut out = String::new();
            for p in &points {
                let mut residuals = serde_json::Map::new();
                for r in &p.residuals {
                    residuals.insert(
                        r.constraint.to_string(),
                        serde_json::json!(r.residual),
                    );
                }
                let obj = serde_json::json!({
                    "r0": p.rates.r0(),
                    "r1": p.rates.r1(),
                    "re": p.rates.re(),
                    "residuals": residuals,
                    "chain_fingerprint": p.fingerprint,
                });
                let _ = writeln!(out, "{obj}");
            }
            out
        }
    };
    Ok(body)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, usize, usize), Failure> {
    let params = CorpusParams {
        instances: args.instances,
        max_k: args.max_k,
        max_z: args.max_z,
        rho_grid: args.rho_grid,
        seed: args.seed,
    };
    let records = run_soundness_sweep(&params)?;
    let violations = records.iter().filter(|r| !r.sound).count();
    Ok((corpus_to_jsonl(&records), records.len(), violations))
}

fn cmd_achievable_size(args: &AchievableSizeArgs) -> Result<String, Failure> {
    let channel = load_channel(&args.channel)?;
    let v = achievable_secret_size(args.b_size, args.e_size, &channel, args.n, args.delta)?;
    let (scale, unit) = units(args.display.bits);
    let mut record = Record::new();
    record
        .push_num("value", v / scale)
        .push_str("quantity", "achievable-secret-size")
        .push_str("units", unit);
    Ok(emit(&record, &args.display))
}

fn write_artifact(output: Option<&PathBuf>, body: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::validation(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("SECRECY_BOUNDS_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.parse().map_err(|_| {
        Failure::validation(format!(
            "SECRECY_BOUNDS_THREADS must be a positive integer, got {raw:?}"
        ))
    })?;
    if n == 0 {
        return Err(Failure::validation(
            "SECRECY_BOUNDS_THREADS must be a positive integer, got 0",
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::validation(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Phi(a) => write_artifact(None, &cmd_phi(a)?)?,
        Command::Psi(a) => write_artifact(None, &cmd_psi(a)?)?,
        Command::PaBound(a) => write_artifact(None, &cmd_pa_bound(a)?)?,
        Command::Resolvability(a) => write_artifact(None, &cmd_resolvability(a)?)?,
        Command::RandomCoding(a) => write_artifact(None, &cmd_random_coding(a)?)?,
        Command::Exponent(a) => write_artifact(None, &cmd_exponent(a)?)?,
        Command::RegionSweep(a) => {
            let body = cmd_region_sweep(a)?;
            write_artifact(a.output.as_ref(), &body)?;
        }
        Command::Verify(a) => {
            let (body, total, violations) = cmd_verify(a)?;
            write_artifact(a.output.as_ref(), &body)?;
            eprintln!("{}/{total} instances sound", total - violations);
            if violations > 0 {
                return Ok(1);
            }
        }
        Command::AchievableSize(a) => write_artifact(None, &cmd_achievable_size(a)?)?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
