use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use interdict_core::dual::opt_f_exact;
use interdict_core::fptas::approx_interdiction;
use interdict_core::generator::{generate, GenParams};
use interdict_core::oracles::{oracle_report, DEFAULT_MAX_N};
use interdict_core::{parse_instance, preprocess, Error, Instance, Rat};

mod bench;
mod report;

#[derive(Parser, Debug)]
#[command(name = "interdict", version, about = "Knapsack interdiction solvers")]
struct Cli {
    /// Worker threads (default: one per core). Output does not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Approximate interdiction: (2+eps) for one constraint, (1+t+eps) for t.
    Solve {
        #[arg(long)]
        input: PathBuf,
        /// Decimal ("0.5") or fraction ("1/2").
        #[arg(long)]
        eps: String,
        #[arg(long, value_enum, default_value = "json")]
        output: Format,
        /// Include wall-clock time (makes output non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Exact optimum of the LP-relaxed problem (pseudopolynomial).
    ExactOptf {
        #[arg(long)]
        input: PathBuf,
    },
    /// Brute-force ground truth for small instances.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Write a seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        pmax: u64,
        #[arg(long, default_value_t = 100)]
        wmax: u64,
        #[arg(long, default_value_t = 100)]
        cmax: u64,
        #[arg(long, default_value = "1/3")]
        budget_frac: String,
        #[arg(long, default_value = "1/2")]
        cap_frac: String,
        /// Output path, `-` for stdout.
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the relaxed approximation over a directory of instances.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        /// Comma-separated list, e.g. `1,0.5,1/10`.
        #[arg(long)]
        eps: String,
        #[arg(long)]
        csv: PathBuf,
        /// Largest reduced n for which the exact relaxed optimum is computed.
        #[arg(long, default_value_t = 40)]
        exact_max_n: usize,
        /// Write 0 in the wall_ms column.
        #[arg(long)]
        no_timing: bool,
    },
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MalformedSyntax(_)
            | Error::SchemaViolation { .. }
            | Error::NegativeValue { .. }
            | Error::DimensionMismatch(_) => 2,
            Error::NonPositiveEps(_) | Error::InvalidParameter(_) | Error::NonPositiveDivisor => 3,
            Error::TooLarge { .. } => 4,
            Error::InvariantViolation(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

pub fn load_instance(path: &Path) -> Result<Instance, Failure> {
    let bytes = fs::read(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    parse_instance(&bytes).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

pub fn parse_eps(text: &str) -> Result<Rat, Failure> {
    let eps: Rat = text
        .parse()
        .map_err(|_| fail(3, format!("invalid eps {text:?}")))?;
    if !eps.is_positive() {
        return Err(fail(3, format!("eps must be positive, got {text}")));
    }
    Ok(eps)
}

fn parse_frac(name: &str, text: &str) -> Result<Rat, Failure> {
    text.parse()
        .map_err(|_| fail(3, format!("invalid {name} {text:?}")))
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| fail(1, format!("stdout: {e}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve {
            input,
            eps,
            output,
            timing,
        } => {
            let inst = load_instance(&input)?;
            let eps = parse_eps(&eps)?;
            let start = Instant::now();
            let sol = approx_interdiction(&inst, &eps)?;
            let elapsed = timing.then(|| start.elapsed().as_millis());
            let out = report::SolveReport::build(&inst, &sol, elapsed)?;
            match output {
                Format::Json => emit(&(serde_json::to_string_pretty(&out).unwrap() + "\n")),
                Format::Text => emit(&out.to_text()),
            }
        }
        Command::ExactOptf { input } => {
            let inst = load_instance(&input)?;
            let pre = preprocess(&inst);
            let exact = opt_f_exact(&pre.instance)?;
            let out = report::ExactReport {
                opt_f: exact.value,
                x: report::bits(&pre.lift(&inst, &exact.x)),
                alpha: exact.alpha.alpha,
                candidates: exact.candidates,
            };
            emit(&(serde_json::to_string_pretty(&out).unwrap() + "\n"))
        }
        Command::Oracle { input, max_n } => {
            let inst = load_instance(&input)?;
            if inst.n() > max_n {
                return Err(fail(4, format!("n = {} exceeds --max-n {max_n}", inst.n())));
            }
            let pre = preprocess(&inst);
            let mut rep = oracle_report(&pre.instance, max_n)?;
            rep.optimal_x_list = rep
                .optimal_x_list
                .iter()
                .map(|x| pre.lift(&inst, x))
                .collect();
            emit(&(serde_json::to_string_pretty(&rep).unwrap() + "\n"))
        }
        Command::Gen {
            n,
            t,
            seed,
            pmax,
            wmax,
            cmax,
            budget_frac,
            cap_frac,
            output,
        } => {
            let params = GenParams {
                n,
                t,
                seed,
                pmax,
                wmax,
                cmax,
                budget_frac: parse_frac("budget-frac", &budget_frac)?,
                cap_frac: parse_frac("cap-frac", &cap_frac)?,
            };
            let text = generate(&params)?.to_json() + "\n";
            if output.as_os_str() == "-" {
                emit(&text)
            } else {
                fs::write(&output, text).map_err(|e| fail(1, format!("{}: {e}", output.display())))
            }
        }
        Command::Bench {
            dir,
            eps,
            csv,
            exact_max_n,
            no_timing,
        } => {
            let eps_list = eps
                .split(',')
                .map(|s| parse_eps(s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            bench::run(&dir, &eps_list, &csv, exact_max_n, !no_timing)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if workers == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(3);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
