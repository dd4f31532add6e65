//! Command-line front end: analytic sweeps, Monte Carlo timing, and oracle
//! verification, emitted as deterministic CSV or JSON datasets.

mod commands;
mod config;
mod table;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{parse_values, pick, FileConfig, Values};
use scw_repeater::herald::Parity;
use scw_repeater::link::PairSymmetry;
use scw_repeater::timing::FIBER_VELOCITY_KM_S;
use std::path::PathBuf;
use std::process::ExitCode;
use table::Format;

const DEFAULT_R_BS: f64 = 0.2;
const DEFAULT_ETA: f64 = 0.95;
const DEFAULT_XI: f64 = 0.9;
const DEFAULT_KAPPA: f64 = 0.2;
const DEFAULT_A_GRID: &str = "0:4:81";
const DEFAULT_LENGTH_GRID: &str = "10:60:51";
const DEFAULT_TIMING_A: f64 = 0.01;
const DEFAULT_LENGTH: f64 = 50.0;
const DEFAULT_AMP: f64 = 0.25;
const DEFAULT_INDEX: f64 = 1.1;
const DEFAULT_TRIALS: u64 = 100_000;
const DEFAULT_SEED: u64 = 7;
const OUT_DIR_ENV: &str = "SCW_REPEATER_OUT_DIR";

#[derive(Parser)]
#[command(name = "scw-repeater", version, about = "Quantum repeater model on modulated cat states")]
struct Cli {
    /// JSON configuration file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: $SCW_REPEATER_OUT_DIR, else the working directory).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Output file stem (default: the subcommand name).
    #[arg(long, global = true)]
    name: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Figure-reproduction datasets.
    Fig {
        #[command(subcommand)]
        figure: Figure,
    },
    /// Runs the analytic-versus-Fock oracle suite; exits 2 on any mismatch.
    Verify,
    /// Monte Carlo attempt-count statistics against the analytic expectations.
    Simulate(SimulateArgs),
}

#[derive(Subcommand)]
enum Figure {
    /// Relay outcome probabilities of the loss-free link.
    LinkProbs(LinkProbsArgs),
    /// Conditional click-parity probabilities of the lossy relay detector.
    ClickProbs(ClickProbsArgs),
    /// Heralded success probabilities under loss.
    Success(SuccessArgs),
    /// Fidelities of the heralded state to the target cat pair.
    Fidelity(FidelityArgs),
    /// Attempt counts, preparation time, and memory waiting time versus distance.
    Timing(TimingArgs),
    /// Phase-teleportation truth table.
    Teleport(TeleportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl FormatArg {
    fn to_format(self) -> Format {
        match self {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    OddOdd,
    EvenEven,
    Cross,
    All,
}

impl PairArg {
    fn resolve(self) -> Vec<PairSymmetry> {
        match self {
            PairArg::OddOdd => vec![PairSymmetry::ODD_ODD],
            PairArg::EvenEven => vec![PairSymmetry::EVEN_EVEN],
            PairArg::Cross => vec![PairSymmetry::CROSS],
            PairArg::All => vec![
                PairSymmetry::ODD_ODD,
                PairSymmetry::EVEN_EVEN,
                PairSymmetry::CROSS,
            ],
        }
    }

    fn single(self) -> Result<PairSymmetry, String> {
        let list = self.resolve();
        if list.len() == 1 {
            Ok(list[0])
        } else {
            Err("this subcommand needs a single pair, not `all`".into())
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
    Both,
}

impl ParityArg {
    fn resolve(self) -> Vec<Parity> {
        match self {
            ParityArg::Even => vec![Parity::Even],
            ParityArg::Odd => vec![Parity::Odd],
            ParityArg::Both => vec![Parity::Even, Parity::Odd],
        }
    }

    fn single(self) -> Result<Parity, String> {
        let list = self.resolve();
        if list.len() == 1 {
            Ok(list[0])
        } else {
            Err("this subcommand needs a single parity, not `both`".into())
        }
    }
}

#[derive(Args)]
struct LinkProbsArgs {
    /// Mean photon number |alpha|^2; a list `0.1,1` or a sweep `start:stop:count`.
    #[arg(long)]
    a: Option<String>,
    /// Relay tap ratio; list or sweep.
    #[arg(long)]
    r_bs: Option<String>,
    #[arg(long, value_enum)]
    pair: Option<PairArg>,
}

#[derive(Args)]
struct ClickProbsArgs {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    r_bs: Option<f64>,
    /// Channel transmittance.
    #[arg(long)]
    eta: Option<f64>,
    /// Detector efficiency.
    #[arg(long)]
    xi: Option<f64>,
}

#[derive(Args)]
struct SuccessArgs {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    r_bs: Option<String>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long, value_enum)]
    pair: Option<PairArg>,
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    /// Report a single relay detector instead of both.
    #[arg(long)]
    per_detector: bool,
}

#[derive(Args)]
struct FidelityArgs {
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    r_bs: Option<String>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long, value_enum)]
    pair: Option<PairArg>,
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
}

#[derive(Args)]
struct TimingArgs {
    /// Node-to-relay distance in km; list or sweep.
    #[arg(long, visible_alias = "L")]
    length: Option<String>,
    /// Fiber attenuation in dB/km.
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    r_bs: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    /// Signal velocity in km/s.
    #[arg(long)]
    velocity: Option<f64>,
    #[arg(long, value_enum)]
    pair: Option<PairArg>,
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    #[arg(long)]
    per_detector: bool,
}

#[derive(Args)]
struct TeleportArgs {
    /// Coherent amplitude magnitude of the shared state.
    #[arg(long)]
    amp: Option<f64>,
    /// Modulation index.
    #[arg(long, visible_alias = "m")]
    index: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, visible_alias = "L")]
    length: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long)]
    r_bs: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    velocity: Option<f64>,
    #[arg(long, value_enum)]
    pair: Option<PairArg>,
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    #[arg(long)]
    per_detector: bool,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn values_of(
    flag: &Option<String>,
    file: &Option<Values>,
    default: &str,
) -> Result<Vec<f64>, String> {
    if let Some(spec) = flag {
        parse_values(spec)
    } else if let Some(values) = file {
        values.resolve()
    } else {
        parse_values(default)
    }
}

fn scalar_of(flag: Option<f64>, file: &Option<Values>, default: f64) -> Result<f64, String> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file {
        Some(values) => {
            let list = values.resolve()?;
            if list.len() == 1 {
                Ok(list[0])
            } else {
                Err("this subcommand needs a single value, not a list".into())
            }
        }
        None => Ok(default),
    }
}

fn enum_of<T: ValueEnum + Copy>(
    flag: Option<T>,
    file: &Option<String>,
    default: T,
) -> Result<T, String> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match file {
        Some(s) => T::from_str(s, true).map_err(|e| format!("bad config value `{s}`: {e}")),
        None => Ok(default),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };

    let (stem_default, result): (&str, commands::CmdResult) = match &cli.command {
        Command::Fig { figure } => match figure {
            Figure::LinkProbs(args) => {
                let a = values_of(&args.a, &file.a, DEFAULT_A_GRID)?;
                let r = values_of(&args.r_bs, &file.r_bs, &format!("{DEFAULT_R_BS}"))?;
                let pairs = enum_of(args.pair, &file.pair, PairArg::All)?.resolve();
                ("link-probs", commands::link_probs(&a, &r, &pairs))
            }
            Figure::ClickProbs(args) => {
                let a = values_of(&args.a, &file.a, DEFAULT_A_GRID)?;
                let r = scalar_of(args.r_bs, &file.r_bs, DEFAULT_R_BS)?;
                let eta = pick(args.eta, file.eta, DEFAULT_ETA);
                let xi = pick(args.xi, file.xi, DEFAULT_XI);
                ("click-probs", commands::click_probs(&a, r, eta, xi))
            }
            Figure::Success(args) => {
                let a = values_of(&args.a, &file.a, DEFAULT_A_GRID)?;
                let r = values_of(&args.r_bs, &file.r_bs, &format!("{DEFAULT_R_BS}"))?;
                let eta = pick(args.eta, file.eta, DEFAULT_ETA);
                let xi = pick(args.xi, file.xi, DEFAULT_XI);
                let pairs = enum_of(args.pair, &file.pair, PairArg::All)?.resolve();
                let parities = enum_of(args.parity, &file.parity, ParityArg::Both)?.resolve();
                let per_det = args.per_detector || file.per_detector.unwrap_or(false);
                (
                    "success",
                    commands::success(&a, &r, eta, xi, &pairs, &parities, per_det),
                )
            }
            Figure::Fidelity(args) => {
                let a = values_of(&args.a, &file.a, DEFAULT_A_GRID)?;
                let r = values_of(&args.r_bs, &file.r_bs, &format!("{DEFAULT_R_BS}"))?;
                let eta = pick(args.eta, file.eta, DEFAULT_ETA);
                let xi = pick(args.xi, file.xi, DEFAULT_XI);
                let pairs = enum_of(args.pair, &file.pair, PairArg::All)?.resolve();
                let parities = enum_of(args.parity, &file.parity, ParityArg::Both)?.resolve();
                (
                    "fidelity",
                    commands::fidelity(&a, &r, eta, xi, &pairs, &parities),
                )
            }
            Figure::Timing(args) => {
                let lengths = values_of(&args.length, &file.length, DEFAULT_LENGTH_GRID)?;
                let kappa = pick(args.kappa, file.kappa, DEFAULT_KAPPA);
                let xi = pick(args.xi, file.xi, DEFAULT_XI);
                let r = scalar_of(args.r_bs, &file.r_bs, DEFAULT_R_BS)?;
                let a = scalar_of(args.a, &file.a, DEFAULT_TIMING_A)?;
                let velocity = pick(args.velocity, file.velocity, FIBER_VELOCITY_KM_S);
                let pair = enum_of(args.pair, &file.pair, PairArg::OddOdd)?.single()?;
                let parity = enum_of(args.parity, &file.parity, ParityArg::Odd)?.single()?;
                let per_det = args.per_detector || file.per_detector.unwrap_or(false);
                (
                    "timing",
                    commands::timing(&lengths, kappa, xi, r, a, velocity, pair, parity, per_det),
                )
            }
            Figure::Teleport(args) => {
                let amp = pick(args.amp, file.amp, DEFAULT_AMP);
                let index = pick(args.index, file.index, DEFAULT_INDEX);
                ("teleport", commands::teleport(amp, index))
            }
        },
        Command::Simulate(args) => {
            let length = scalar_of(args.length, &file.length, DEFAULT_LENGTH)?;
            let kappa = pick(args.kappa, file.kappa, DEFAULT_KAPPA);
            let xi = pick(args.xi, file.xi, DEFAULT_XI);
            let r = scalar_of(args.r_bs, &file.r_bs, DEFAULT_R_BS)?;
            let a = scalar_of(args.a, &file.a, DEFAULT_TIMING_A)?;
            let velocity = pick(args.velocity, file.velocity, FIBER_VELOCITY_KM_S);
            let pair = enum_of(args.pair, &file.pair, PairArg::OddOdd)?.single()?;
            let parity = enum_of(args.parity, &file.parity, ParityArg::Odd)?.single()?;
            let per_det = args.per_detector || file.per_detector.unwrap_or(false);
            let trials = pick(args.trials, file.trials, DEFAULT_TRIALS);
            let seed = pick(args.seed, file.seed, DEFAULT_SEED);
            (
                "simulate",
                commands::simulate(
                    length, kappa, xi, r, a, velocity, pair, parity, per_det, trials, seed,
                ),
            )
        }
        Command::Verify => {
            let (table, all_ok) = commands::verify()?;
            let format = resolve_format(&cli, &file, Format::Json)?;
            let path = write(&cli, &file, table, format, "verify")?;
            if all_ok {
                println!("verify: all checks passed ({path})");
                return Ok(ExitCode::SUCCESS);
            }
            eprintln!("verify: oracle mismatch, see {path}");
            return Ok(ExitCode::from(2));
        }
    };

    let table = result?;
    let format = resolve_format(&cli, &file, Format::Csv)?;
    let path = write(&cli, &file, table, format, stem_default)?;
    println!("wrote {path}");
    Ok(ExitCode::SUCCESS)
}

fn resolve_format(cli: &Cli, file: &FileConfig, default: Format) -> Result<Format, String> {
    if let Some(f) = cli.format {
        return Ok(f.to_format());
    }
    match &file.format {
        Some(s) => Ok(FormatArg::from_str(s, true)
            .map_err(|e| format!("bad config value `{s}`: {e}"))?
            .to_format()),
        None => Ok(default),
    }
}

fn write(
    cli: &Cli,
    file: &FileConfig,
    table: table::Table,
    format: Format,
    stem_default: &str,
) -> Result<String, String> {
    let dir = cli
        .out_dir
        .clone()
        .or_else(|| file.out_dir.as_ref().map(PathBuf::from))
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let stem = cli
        .name
        .clone()
        .or_else(|| file.name.clone())
        .unwrap_or_else(|| stem_default.to_string());
    let path = table::write_table(&table, format, &dir, &stem)
        .map_err(|e| format!("cannot write output: {e}"))?;
    Ok(path.display().to_string())
}
