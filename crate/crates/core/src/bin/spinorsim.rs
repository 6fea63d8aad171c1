use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spinorsim::chsh::ChshConfig;
use spinorsim::estimators::Pipeline;
use spinorsim::ga::Direction;
use spinorsim::harness::config::{parse_direction, parse_pipelines};
use spinorsim::harness::verify::{verify, Suite};
use spinorsim::harness::{
    analyze, chsh_run, default_quadruple, record, render_rows, simulate, AngleSweep, ConfigError, ExperimentConfig,
    OutputFormat, Settings, TrialLog,
};

#[derive(Parser)]
#[command(name = "spinorsim", version, about = "Event-by-event spin-correlation simulator and invariant checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate trials and report correlations for each setting pair.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        dirs: DirArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Draw trials and store them as a binary log.
    Record {
        #[command(flatten)]
        run: RunArgs,
        /// Destination of the trial log.
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a stored trial log.
    Analyze {
        /// Trial log written by `record`.
        log: PathBuf,
        #[command(flatten)]
        dirs: DirArgs,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// CHSH combinations and the variance bound for a quadruple of settings.
    Chsh {
        #[command(flatten)]
        run: RunArgs,
        /// Alice's first setting (degrees in the xy-plane, or x,y,z). Default 0.
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
        a: Option<Direction>,
        /// Default 90.
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
        a_prime: Option<Direction>,
        /// Default 45.
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
        b: Option<Direction>,
        /// Default -45.
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
        b_prime: Option<Direction>,
        /// Draw independent trials for each setting pair.
        #[arg(long)]
        strict_sampling: bool,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run an invariant suite; exits 1 if any case fails.
    Verify {
        /// subalgebra, bivector-identity, torsion, appendix-c, gill-claims or sigma.
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Args)]
struct DirArgs {
    /// Sweep START:STOP:STEP in degrees; a along +x, b in the xy-plane.
    #[arg(long, default_value = "0:180:5")]
    angles: AngleSweep,
    /// Explicit setting pair (degrees or x,y,z); overrides --angles.
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    a: Option<Direction>,
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    b: Option<Direction>,
    #[arg(long, default_value = "standard,raw-sign,raw-lambda", value_parser = parse_pipelines)]
    pipelines: std::collections::BTreeSet<Pipeline>,
}

impl DirArgs {
    fn settings(&self) -> Result<Settings, ConfigError> {
        match (self.a, self.b) {
            (Some(a), Some(b)) => Ok(Settings::Pair { a, b }),
            (Some(_), None) => Err(ConfigError::MissingPartner("a", "b")),
            (None, Some(_)) => Err(ConfigError::MissingPartner("b", "a")),
            (None, None) => Ok(Settings::Sweep(self.angles)),
        }
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
    /// Write to PATH instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(path: Option<&Path>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            f.write_all(text.as_bytes())?;
            f.flush()
        }
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Simulate { run, dirs, out } => {
            let config = ExperimentConfig::new(run.trials, run.seed, dirs.settings()?)
                .with_pipelines(dirs.pipelines.iter().copied())
                .with_workers(run.workers)
                .with_format(out.format);
            let rows = simulate(&config)?;
            emit(out.out.as_deref(), &render_rows(&rows, out.format))?;
        }
        Command::Record { run, out } => {
            let config = ExperimentConfig::new(run.trials, run.seed, Settings::Sweep(AngleSweep::new(0.0, 0.0, 1.0)?))
                .with_workers(run.workers);
            let log = record(&config)?;
            log.write_to(BufWriter::new(File::create(&out)?))?;
        }
        Command::Analyze { log, dirs, workers, out } => {
            let log = TrialLog::read_from(BufReader::new(File::open(&log)?))?;
            let config = ExperimentConfig::new(1, log.seed, dirs.settings()?)
                .with_pipelines(dirs.pipelines.iter().copied())
                .with_workers(workers)
                .with_format(out.format);
            let rows = analyze(&log, &config)?;
            emit(out.out.as_deref(), &render_rows(&rows, out.format))?;
        }
        Command::Chsh { run, a, a_prime, b, b_prime, strict_sampling, out } => {
            let d = default_quadruple();
            let quad = ChshConfig {
                a: a.unwrap_or(d.a),
                a_prime: a_prime.unwrap_or(d.a_prime),
                b: b.unwrap_or(d.b),
                b_prime: b_prime.unwrap_or(d.b_prime),
            };
            let mut config = ExperimentConfig::new(run.trials, run.seed, Settings::Quad(quad))
                .with_workers(run.workers)
                .with_format(out.format);
            config.strict_sampling = strict_sampling;
            let report = chsh_run(&config)?.to_key_value();
            let text = match out.format {
                OutputFormat::Csv => report.to_csv(),
                OutputFormat::Json => report.to_json(),
            };
            emit(out.out.as_deref(), &text)?;
        }
        Command::Verify { suite, samples, seed, out } => {
            let report = verify(suite, samples, seed);
            emit(out.as_deref(), &report.to_json())?;
            if !report.passed {
                eprintln!("verify {suite}: {} of {} cases failed", report.failures.len(), report.cases);
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
