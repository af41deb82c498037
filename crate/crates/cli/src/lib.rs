//! The `magrand` command line: `gen`, `analyze`, `witness` and `batch`.
//!
//! Exit codes: 0 on success, 1 when `--expect-random` is set and a verdict
//! fails (or a witness query finds nothing), 2 on usage, I/O and format
//! errors. Messages go to stderr.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use magrand_core::codec::{deserialize, serialize, serialize_edges};
use magrand_core::temporal::{find_noncontiguous_witness, NoncontiguityQuery, SweepConfig};
use magrand_core::topology::DEFAULT_NODE_BUDGET;
use magrand_core::{
    analyze, batch_summary, generate, AnalysisConfig, AnalysisReport, CompositeVertex, Error,
    GeneratorKind, GeneratorSpec, Mag, MagSignature,
};

#[derive(Debug, Parser)]
#[command(
    name = "magrand",
    version,
    about = "Randomness and topology checks for multiaspect graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a MAG and write it as `.magc`.
    Gen(GenArgs),
    /// Analyze a `.magc` file and emit a JSON report.
    Analyze(AnalyzeArgs),
    /// Find the noncontiguous edge between two composite vertices.
    Witness(WitnessArgs),
    /// Generate and analyze a range of seeds, then summarize.
    Batch(BatchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    UniformHalf,
    Empty,
    Complete,
    Banded,
    Periodic,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Payload {
    #[default]
    Bits,
    Edges,
}

#[derive(Debug, Args)]
struct GraphArgs {
    /// Aspect sizes, aspect 1 first.
    #[arg(long, value_delimiter = ',', required = true)]
    tau: Vec<usize>,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Time-gap window for `banded`.
    #[arg(long)]
    window: Option<usize>,
    /// Pattern length for `periodic`.
    #[arg(long)]
    period: Option<usize>,
    /// Time aspect position, or `none`. Defaults to 2 when there are two or more aspects.
    #[arg(long)]
    time_aspect: Option<String>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "bits")]
    payload: Payload,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[arg(long, default_value_t = 3.0)]
    c_deficiency: f64,
    #[arg(long, default_value_t = 2.0)]
    c_degree: f64,
    /// Node budget for the automorphism search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    rigidity_budget: u64,
    /// Seed for sampled witness sweeps.
    #[arg(long, default_value_t = 0)]
    sweep_seed: u64,
    /// Exit 1 unless every verdict passes.
    #[arg(long)]
    expect_random: bool,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    input: PathBuf,
    #[command(flatten)]
    thresholds: ThresholdArgs,
    /// Report path; stdout when omitted.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WitnessArgs {
    input: PathBuf,
    /// Comma-separated coordinates of the first vertex, aspect 1 first.
    #[arg(long)]
    u: String,
    #[arg(long)]
    v: String,
    /// Aspect to test; defaults to the time aspect.
    #[arg(long)]
    aspect: Option<usize>,
}

#[derive(Debug, Args)]
struct BatchArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// First seed.
    #[arg(long)]
    seed: u64,
    /// Number of consecutive seeds.
    #[arg(long)]
    seeds: u64,
    #[command(flatten)]
    thresholds: ThresholdArgs,
    /// Output directory.
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verdict(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Verdict(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Verdict(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoWitness => Failure::Verdict(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Batch(a) => cmd_batch(a),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("magrand: {f}");
            f.code()
        }
    }
}

fn parse_time_aspect(raw: &Option<String>, order: usize) -> Result<Option<usize>, Failure> {
    match raw.as_deref() {
        None => Ok((order >= 2).then_some(2)),
        Some("none") => Ok(None),
        Some(s) => s
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("invalid --time-aspect '{s}'"))),
    }
}

fn signature(g: &GraphArgs) -> Result<MagSignature, Failure> {
    let time = parse_time_aspect(&g.time_aspect, g.tau.len())?;
    Ok(MagSignature::with_time_aspect(g.tau.clone(), time)?)
}

fn generator_kind(g: &GraphArgs) -> Result<GeneratorKind, Failure> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--kind {} needs --{flag}", kind_name(g.kind))))
    };
    Ok(match g.kind {
        Kind::UniformHalf => GeneratorKind::UniformHalf,
        Kind::Empty => GeneratorKind::Empty,
        Kind::Complete => GeneratorKind::Complete,
        Kind::Banded => GeneratorKind::Banded {
            window: need(g.window, "window")?,
        },
        Kind::Periodic => GeneratorKind::Periodic {
            period: need(g.period, "period")?,
        },
    })
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::UniformHalf => "uniform-half",
        Kind::Empty => "empty",
        Kind::Complete => "complete",
        Kind::Banded => "banded",
        Kind::Periodic => "periodic",
    }
}

fn spec_for(g: &GraphArgs, seed: u64) -> Result<GeneratorSpec, Failure> {
    Ok(GeneratorSpec::new(signature(g)?, generator_kind(g)?, seed)?)
}

fn config(t: &ThresholdArgs, generator: Option<GeneratorSpec>) -> Result<AnalysisConfig, Failure> {
    let cfg = AnalysisConfig {
        c_deficiency: t.c_deficiency,
        c_degree: t.c_degree,
        rigidity_budget: t.rigidity_budget,
        sweep: SweepConfig {
            seed: t.sweep_seed,
            ..SweepConfig::default()
        },
        generator,
        ..AnalysisConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn read_mag(path: &Path) -> Result<Mag, Failure> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    deserialize(&bytes).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn failed_verdicts(r: &AnalysisReport) -> Vec<String> {
    r.verdicts()
        .into_iter()
        .filter(|(_, v)| !v.passed())
        .map(|(k, _)| k)
        .collect()
}

fn cmd_gen(a: GenArgs) -> Result<(), Failure> {
    let g = generate(&spec_for(&a.graph, a.seed)?)?;
    let bytes = match a.payload {
        Payload::Bits => serialize(&g),
        Payload::Edges => serialize_edges(&g),
    };
    write(&a.output, &bytes)
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let cfg = config(&a.thresholds, None)?;
    let g = read_mag(&a.input)?;
    let report = analyze(&g, &cfg)?;
    let json = report.to_json();
    match &a.output {
        Some(p) => write(p, json.as_bytes())?,
        None => print!("{json}"),
    }
    let failed = failed_verdicts(&report);
    if a.thresholds.expect_random && !failed.is_empty() {
        return Err(Failure::Verdict(format!(
            "verdicts failed: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

fn parse_coords(raw: &str, flag: &str) -> Result<CompositeVertex, Failure> {
    raw.split(',')
        .map(|c| c.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map(CompositeVertex)
        .map_err(|_| Failure::Usage(format!("malformed --{flag} coordinates '{raw}'")))
}

fn cmd_witness(a: WitnessArgs) -> Result<(), Failure> {
    let u = parse_coords(&a.u, "u")?;
    let v = parse_coords(&a.v, "v")?;
    let g = read_mag(&a.input)?;
    let sig = g.signature();
    let h = match a.aspect.or(sig.time_aspect()) {
        Some(h) => h,
        None => return Err(Failure::Usage("no time aspect; pass --aspect".into())),
    };
    let q = NoncontiguityQuery::new(sig, u, v, h)?;
    let w = find_noncontiguous_witness(&g, &q)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&w).expect("witness serializes")
    );
    Ok(())
}

fn cmd_batch(a: BatchArgs) -> Result<(), Failure> {
    let end = a
        .seed
        .checked_add(a.seeds)
        .ok_or_else(|| Failure::Usage("seed range overflows".into()))?;
    if a.seeds == 0 {
        return Err(Failure::Usage("--seeds must be at least 1".into()));
    }
    // Validate everything once before doing any work.
    config(&a.thresholds, Some(spec_for(&a.graph, a.seed)?))?;
    fs::create_dir_all(&a.output).map_err(|e| io_err(&a.output, e))?;

    let reports = (a.seed..end)
        .into_par_iter()
        .map(|seed| -> Result<AnalysisReport, Failure> {
            let spec = spec_for(&a.graph, seed)?;
            let g = generate(&spec)?;
            let report = analyze(&g, &config(&a.thresholds, Some(spec))?)?;
            write(&a.output.join(format!("seed-{seed}.magc")), &serialize(&g))?;
            write(
                &a.output.join(format!("seed-{seed}.json")),
                report.to_json().as_bytes(),
            )?;
            Ok(report)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let summary = batch_summary(&reports)?;
    write(&a.output.join("summary.json"), summary.to_json().as_bytes())?;

    let failing: Vec<u64> = (a.seed..end)
        .zip(&reports)
        .filter(|(_, r)| !r.all_passed())
        .map(|(s, _)| s)
        .collect();
    if a.thresholds.expect_random && !failing.is_empty() {
        return Err(Failure::Verdict(format!(
            "{} of {} seeds failed a verdict (first: {})",
            failing.len(),
            reports.len(),
            failing[0]
        )));
    }
    Ok(())
}
