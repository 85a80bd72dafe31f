use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dynapsp::format::{load_graph, parse_stream, serialize_graph, write_stream, StreamRecord};
use dynapsp::harness::{
    bench_stream, generate_graph, generate_stream, run_stream, verify_adaptive, verify_stream, write_csv, Adversary,
    WorkloadSpec,
};
use dynapsp::{EngineConfig, Error, Graph, Variant};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NEGATIVE_CYCLE: u8 = 3;

#[derive(Parser)]
#[command(name = "dynapsp", version, about = "Fully dynamic all-pairs shortest paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph and an oblivious update stream.
    Gen(GenArgs),
    /// Replay updates and compare every answer with a brute-force oracle.
    Verify(VerifyArgs),
    /// Replay updates and report per-update counters.
    Bench(BenchArgs),
    /// Replay a stream and answer its queries.
    Run(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    RandWeighted,
    Unweighted,
    Deterministic,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdversaryArg {
    None,
    Path,
    Center,
}

#[derive(Args)]
struct EngineArgs {
    #[arg(long, value_enum, default_value = "rand-weighted")]
    variant: VariantArg,
    /// Confidence parameter (at least 1).
    #[arg(long, default_value_t = 3.0)]
    c: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override of the rebuild period.
    #[arg(long)]
    delta: Option<usize>,
}

impl EngineArgs {
    fn config(&self) -> EngineConfig {
        let variant = match self.variant {
            VariantArg::RandWeighted => Variant::RandWeighted,
            VariantArg::Unweighted => Variant::Unweighted,
            VariantArg::Deterministic => Variant::Deterministic,
        };
        EngineConfig {
            variant,
            c: self.c,
            seed: self.seed,
            delta_override: self.delta,
        }
    }
}

#[derive(Args)]
struct WorkloadArgs {
    /// Edge probability per ordered pair.
    #[arg(long, default_value_t = 0.1)]
    density: f64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    wmin: i64,
    #[arg(long, default_value_t = 100, allow_hyphen_values = true)]
    wmax: i64,
    #[arg(long, default_value_t = 50)]
    updates: usize,
    #[arg(long, default_value_t = 1.0)]
    insert_ratio: f64,
    #[arg(long, default_value_t = 1.0)]
    delete_ratio: f64,
    #[arg(long, default_value_t = 0.0)]
    query_ratio: f64,
}

impl WorkloadArgs {
    fn spec(&self, n: usize, seed: u64, adversary: Adversary) -> WorkloadSpec {
        WorkloadSpec {
            n,
            density: self.density,
            weight_min: self.wmin,
            weight_max: self.wmax,
            updates: self.updates,
            insert_ratio: self.insert_ratio,
            delete_ratio: self.delete_ratio,
            query_ratio: self.query_ratio,
            adversary,
            seed,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    workload: WorkloadArgs,
    /// Output path of the graph file.
    #[arg(long)]
    graph: PathBuf,
    /// Output path of the update stream.
    #[arg(long)]
    stream: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Update stream; required unless an adversary drives the updates.
    #[arg(long)]
    stream: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    adversary: AdversaryArg,
    /// Seed of the adversary and its insertions.
    #[arg(long, default_value_t = 0)]
    workload_seed: u64,
    #[command(flatten)]
    workload: WorkloadArgs,
    /// Writes the replayed updates and adversary queries here.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    stream: PathBuf,
    /// Emit one CSV row per update instead of a summary.
    #[arg(long)]
    csv: bool,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    stream: PathBuf,
    #[command(flatten)]
    engine: EngineArgs,
}

enum Failure {
    Engine(Error),
    Io(PathBuf, io::Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load(graph: &Path) -> Result<Graph, Failure> {
    Ok(load_graph(&read(graph)?)?)
}

fn load_stream(stream: &Path) -> Result<Vec<StreamRecord>, Failure> {
    Ok(parse_stream(&read(stream)?)?)
}

fn stdout_err(e: io::Error) -> Failure {
    Failure::Io(PathBuf::from("<stdout>"), e)
}

fn cmd_gen(a: &GenArgs) -> Result<(), Failure> {
    let spec = a.workload.spec(a.n, a.seed, Adversary::Oblivious);
    let g = generate_graph(&spec)?;
    let records = generate_stream(&spec, &g)?;
    write(&a.graph, &serialize_graph(&g))?;
    let header = format!("# dynapsp stream n={} updates={} seed={}\n", a.n, spec.updates, a.seed);
    write(&a.stream, &(header + &write_stream(&records)))?;
    Ok(())
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let g = load(&a.graph)?;
    let cfg = a.engine.config();
    let report = match (a.adversary, &a.stream) {
        (AdversaryArg::None, Some(path)) => verify_stream(&g, &load_stream(path)?, cfg)?,
        (AdversaryArg::None, None) => {
            return Err(Error::SpecInvalid("verify needs --stream or --adversary".into()).into());
        }
        (adv, _) => {
            let kind = if adv == AdversaryArg::Path {
                Adversary::PathAttacker
            } else {
                Adversary::CenterHunter
            };
            let spec = a.workload.spec(g.capacity(), a.workload_seed, kind);
            verify_adaptive(&g, &spec, cfg)?
        }
    };
    if let Some(path) = &a.trace {
        write(path, &write_stream(&report.trace))?;
    }
    match report.mismatch {
        Some(m) => Err(Failure::Mismatch(m.to_string())),
        None => {
            println!(
                "ok: {} updates, {} pairs and {} paths checked",
                report.updates, report.pairs_checked, report.paths_checked
            );
            Ok(())
        }
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<(), Failure> {
    let g = load(&a.graph)?;
    let records = bench_stream(&g, &load_stream(&a.stream)?, a.engine.config())?;
    let mut out = io::stdout().lock();
    if a.csv {
        write_csv(&records, &mut out).map_err(stdout_err)?;
    } else {
        let k = records.len().max(1) as u64;
        let relax: u64 = records.iter().map(|r| r.relaxations).sum();
        let ns: u128 = records.iter().map(|r| r.wall_ns).sum();
        let swaps = records.iter().filter(|r| r.swapped).count();
        writeln!(
            out,
            "updates={} mean_relaxations={} mean_wall_ns={} swaps={}",
            records.len(),
            relax / k,
            ns / u128::from(k),
            swaps
        )
        .map_err(stdout_err)?;
    }
    Ok(())
}

fn cmd_run(a: &RunArgs) -> Result<(), Failure> {
    let g = load(&a.graph)?;
    let text = run_stream(&g, &load_stream(&a.stream)?, a.engine.config())?;
    io::stdout().lock().write_all(text.as_bytes()).map_err(stdout_err)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Run(a) => cmd_run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(m)) => {
            eprintln!("{m}");
            ExitCode::from(EXIT_MISMATCH)
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("{}: {e}", path.display());
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::NegativeCycle | Error::NegativeCycleIntroduced(_) => ExitCode::from(EXIT_NEGATIVE_CYCLE),
                _ => ExitCode::from(EXIT_INPUT),
            }
        }
    }
}
