use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ansec::corr::CorrelationSpec;
use ansec::numerics::QuadratureSpec;
use ansec::rate::{db_to_linear, search_best_s1, SystemConfig};
use ansec_cli::config::load_recipe;
use ansec_cli::pdf_dump::{pdf_dump, PdfDumpSpec};
use ansec_cli::sweep::{any_failed, run_sweep, sig9, write_csv};
use ansec_cli::validate::{corrupted_eve, validate, validate_against};
use ansec_cli::{CliError, CliResult};
use clap::{Args, Parser, Subcommand};

/// Ergodic secrecy rates of artificial-noise MIMO transmission under
/// receiver-side correlated Rayleigh fading.
#[derive(Debug, Parser)]
#[command(name = "ansec", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Seed for every Monte Carlo stream (overrides the recipe).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo trials (overrides the recipe).
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file (directory for pdf-dump); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Absolute tolerance of every quadrature.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a recipe's sweep and write CSV.
    Sweep {
        recipe: PathBuf,
        /// Record per-row wall time (makes the CSV run-dependent).
        #[arg(long)]
        timing: bool,
    },
    /// Compare exact rates with Monte Carlo for every message split.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Simulate a deliberately different Eve to check that mismatches are caught.
        #[arg(long)]
        negative_control: bool,
    },
    /// Tabulate the ordered-eigenvalue densities of one Wishart law.
    PdfDump {
        /// Correlated-side dimension.
        #[arg(long, default_value_t = 4)]
        antennas: usize,
        /// Free-side dimension.
        #[arg(long, default_value_t = 6)]
        b: usize,
        #[arg(long, default_value_t = 0.8)]
        spacing: f64,
        #[arg(long, default_value_t = 30.0)]
        aoa_deg: f64,
        #[arg(long, default_value_t = 10.0)]
        ras_deg: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long)]
        x_max: Option<f64>,
    },
    /// Find the best number of message streams.
    SearchS1 {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// Recipe whose [scenario] section to use; the reference system otherwise.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Transmit SNR in dB (overrides the scenario).
    #[arg(long, allow_negative_numbers = true)]
    snr_db: Option<f64>,
}

impl ScenarioArgs {
    fn resolve(&self) -> CliResult<SystemConfig> {
        let mut config = match &self.config {
            Some(path) => load_recipe(path)?.scenario.to_config()?,
            None => SystemConfig::reference(),
        };
        if let Some(db) = self.snr_db {
            config.power = db_to_linear(db);
        }
        config
            .validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(config)
    }
}

/// How a command ended when it did not fail outright.
enum Outcome {
    Ok,
    /// Some rows carry errors or failed their check.
    RowErrors,
}

fn open_out(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let c = &cli.common;
    if !(c.tolerance > 0.0) {
        return Err(CliError::Config(format!(
            "tolerance {} must be positive",
            c.tolerance
        )));
    }
    let quad = QuadratureSpec::default().with_tolerance(c.tolerance);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(c.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    match &cli.command {
        Command::Sweep { recipe, timing } => {
            let file = load_recipe(recipe)?;
            let base = file.scenario.to_config()?;
            let section = file.sweep.as_ref().ok_or_else(|| {
                CliError::Config(format!("{} has no [sweep] section", recipe.display()))
            })?;
            let mut spec = section.to_spec(base)?;
            if let Some(seed) = c.seed {
                spec.seed = seed;
            }
            if let Some(trials) = c.trials {
                spec.trials = trials;
            }
            spec.validate()?;
            let rows = pool.install(|| run_sweep(&spec, &quad, *timing));
            write_csv(&rows, open_out(c.out.as_deref())?)?;
            for row in rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "{}={} s1={} {}: {}",
                    row.variable.as_str(),
                    row.value,
                    row.s1,
                    row.method.as_str(),
                    row.error.unwrap_or("")
                );
            }
            Ok(if any_failed(&rows) {
                Outcome::RowErrors
            } else {
                Outcome::Ok
            })
        }
        Command::Validate {
            scenario,
            negative_control,
        } => {
            let config = scenario.resolve()?;
            let trials = c.trials.unwrap_or(100_000);
            let seed = c.seed.unwrap_or(0);
            let report = pool.install(|| {
                if *negative_control {
                    validate_against(&config, &corrupted_eve(&config), trials, seed, &quad)
                } else {
                    validate(&config, trials, seed, &quad)
                }
            })?;
            let mut out = open_out(c.out.as_deref())?;
            writeln!(out, "{report}")?;
            Ok(if report.passed() {
                Outcome::Ok
            } else {
                Outcome::RowErrors
            })
        }
        Command::PdfDump {
            antennas,
            b,
            spacing,
            aoa_deg,
            ras_deg,
            points,
            x_max,
        } => {
            let spec = PdfDumpSpec {
                corr: CorrelationSpec::new(*antennas, *spacing, *aoa_deg, *ras_deg),
                b: *b,
                points: *points,
                x_max: *x_max,
            };
            spec.corr
                .validate()
                .map_err(|e| CliError::Config(e.to_string()))?;
            let dir = c.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in pdf_dump(&spec, &dir, &quad)? {
                println!("{}", path.display());
            }
            Ok(Outcome::Ok)
        }
        Command::SearchS1 { scenario } => {
            let config = scenario.resolve()?;
            let found = pool.install(|| search_best_s1(&config, &quad))?;
            let mut out = open_out(c.out.as_deref())?;
            writeln!(out, "s1,rate_bits")?;
            for (i, r) in found.rates.iter().enumerate() {
                writeln!(out, "{},{}", i + 1, sig9(*r))?;
            }
            writeln!(out, "# best s1 = {}", found.s1_star)?;
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::RowErrors) => ExitCode::from(2),
        Err(e) => {
            eprintln!("ansec: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
