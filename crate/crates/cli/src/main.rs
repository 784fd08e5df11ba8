//! `sublevel`: growth exponents of polynomial sublevel sets from the command line.
//!
//! Exit codes: 0 success, 1 usage or I/O failure, 2 parse error,
//! 3 internal inconsistency, 4 MG violation, 5 empirics unsupported.

mod commands;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sublevel::empirics::{SweepKind, VolumeMethod};
use sublevel::mgcheck::EpsilonChoice;

use crate::commands::{EmpiricsSettings, ProbeRequest};
use crate::error::{CliError, EXIT_FAILURE, EXIT_OK};
use crate::report::{envelope, preset_inputs, read_map, write_report, MapInput};

#[derive(Parser)]
#[command(
    name = "sublevel",
    version,
    about = "Newton-polytope asymptotics of polynomial sublevel sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Number of variables x1..xn.
    #[arg(short = 'n', long = "dim")]
    n: Option<usize>,
    /// Map text: components separated by ';', e.g. "x1^2 + x2^2; x1*x2".
    #[arg(short = 'f', long = "map")]
    map: Option<String>,
    /// Read the map from a file (one component per line, '#' comments).
    #[arg(long)]
    file: Option<PathBuf>,
    /// Master seed for every randomized step.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    PaperExamples,
}

impl Preset {
    fn name(self) -> &'static str {
        match self {
            Preset::PaperExamples => "paper-examples",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lattice,
    Volume,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Grid,
    MonteCarlo,
}

#[derive(Subcommand)]
enum Command {
    /// Newton polytopes, exponent profiles, LP cross-check and MG search.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Analyse the bundled example corpus instead of one map.
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Evaluation budget per MG search start.
        #[arg(long)]
        budget: Option<u64>,
        /// Also run lattice and volume sweeps with exponent fits.
        #[arg(long)]
        empirics: bool,
        /// Largest r of the empirical sweeps.
        #[arg(long, default_value_t = 1e4)]
        r_max: f64,
    },
    /// Search for face-polynomial common zeros (the MG condition).
    CheckMg {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        /// Evaluation budget per MG search start.
        #[arg(long)]
        budget: Option<u64>,
        /// Number of random coefficient perturbations to re-check.
        #[arg(long)]
        perturb: Option<usize>,
        /// Perturbation size: "auto" or a positive number.
        #[arg(long, default_value = "auto")]
        epsilon: String,
    },
    /// Measure counts or volumes over an r-sweep and fit the growth exponents.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Volume estimator.
        #[arg(long, value_enum, default_value = "monte-carlo")]
        method: Method,
        /// Lattice: largest box half-width. Volume: samples per point
        /// (Monte Carlo) or cells per axis (grid).
        #[arg(long)]
        budget: Option<u64>,
        /// Largest r of the sweep (defaults: 1e6 for counts, 1e5 for volumes).
        #[arg(long)]
        r_max: Option<f64>,
        /// Write the sweep as CSV (r,measurement,stderr).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

const DEFAULT_MAX_BOX: i64 = 1 << 21;
const DEFAULT_SAMPLES: u64 = 1_000_000;
const DEFAULT_RESOLUTION: u64 = 1024;

fn volume_method(method: Method, budget: Option<u64>) -> VolumeMethod {
    match method {
        Method::Grid => VolumeMethod::Grid {
            resolution: budget.unwrap_or(DEFAULT_RESOLUTION) as usize,
        },
        Method::MonteCarlo => VolumeMethod::MonteCarlo {
            samples: budget.unwrap_or(DEFAULT_SAMPLES) as usize,
        },
    }
}

fn inputs(common: &Common, preset: Option<Preset>) -> Result<Vec<MapInput>, CliError> {
    match preset {
        Some(p) => {
            if common.map.is_some() || common.file.is_some() {
                return Err(CliError::Usage("--preset replaces -f/--file".into()));
            }
            preset_inputs(p.name())
        }
        None => Ok(vec![read_map(common.map.as_deref(), common.file.as_deref(), common.n)?]),
    }
}

fn set_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn parse_epsilon(text: &str) -> Result<EpsilonChoice, CliError> {
    if text == "auto" {
        return Ok(EpsilonChoice::Auto);
    }
    text.parse::<f64>()
        .ok()
        .filter(|e| e.is_finite() && *e > 0.0)
        .map(EpsilonChoice::Fixed)
        .ok_or_else(|| CliError::Usage(format!("--epsilon must be 'auto' or a positive number, got '{text}'")))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Analyze {
            common,
            preset,
            budget,
            empirics,
            r_max,
        } => {
            set_threads(common.threads)?;
            let maps = inputs(&common, preset)?;
            let settings = EmpiricsSettings {
                seed: common.seed,
                method: volume_method(Method::MonteCarlo, None),
                max_box: DEFAULT_MAX_BOX,
                r_max: Some(r_max),
            };
            let (body, code) = commands::analyze(
                &maps,
                preset.map(Preset::name),
                common.seed,
                budget,
                empirics.then_some(&settings),
            )?;
            write_report(&envelope("analyze", common.seed, body), common.out.as_ref())?;
            Ok(code)
        }
        Command::CheckMg {
            common,
            preset,
            budget,
            perturb,
            epsilon,
        } => {
            set_threads(common.threads)?;
            let maps = inputs(&common, preset)?;
            let probe = match perturb {
                Some(trials) => Some(ProbeRequest {
                    trials,
                    epsilon: parse_epsilon(&epsilon)?,
                }),
                None => None,
            };
            let (body, code) =
                commands::check_mg_command(&maps, preset.map(Preset::name), common.seed, budget, probe.as_ref())?;
            write_report(&envelope("check-mg", common.seed, body), common.out.as_ref())?;
            Ok(code)
        }
        Command::Verify {
            common,
            kind,
            method,
            budget,
            r_max,
            csv,
        } => {
            set_threads(common.threads)?;
            let input = read_map(common.map.as_deref(), common.file.as_deref(), common.n)?;
            let kind = match kind {
                Kind::Lattice => SweepKind::LatticeCount,
                Kind::Volume => SweepKind::Volume,
            };
            let settings = EmpiricsSettings {
                seed: common.seed,
                method: volume_method(method, budget),
                max_box: match kind {
                    SweepKind::LatticeCount => budget.map_or(DEFAULT_MAX_BOX, |b| b as i64),
                    SweepKind::Volume => DEFAULT_MAX_BOX,
                },
                r_max,
            };
            let verification = commands::verify(&input, kind, &settings)?;
            eprint!("{}", verification.table);
            if let Some(path) = csv {
                std::fs::write(path, verification.sweep.to_csv()?)?;
            }
            write_report(
                &envelope("verify", common.seed, verification.report),
                common.out.as_ref(),
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors; everything else is a usage error
            let code = if e.use_stderr() { EXIT_FAILURE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("sublevel: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_flag_parsing() {
        assert!(matches!(parse_epsilon("auto"), Ok(EpsilonChoice::Auto)));
        assert!(matches!(parse_epsilon("0.25"), Ok(EpsilonChoice::Fixed(e)) if e == 0.25));
        for bad in ["0", "-1", "nan", "inf", "big"] {
            assert!(matches!(parse_epsilon(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn budget_selects_the_volume_method_size() {
        assert_eq!(
            volume_method(Method::Grid, Some(64)),
            VolumeMethod::Grid { resolution: 64 }
        );
        assert_eq!(
            volume_method(Method::MonteCarlo, None),
            VolumeMethod::MonteCarlo {
                samples: DEFAULT_SAMPLES as usize
            }
        );
    }

    #[test]
    fn command_line_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
