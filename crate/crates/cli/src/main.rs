use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toricnp::family::{ABParams, GRange, NondegMode};
use toricnp::field::DEFAULT_BUDGET;
use toricnp_cli::commands::{self, HodgeInput, LfunctionArgs, TriangulateArgs};
use toricnp_cli::error::{EXIT_BUDGET, EXIT_INPUT, EXIT_OK, EXIT_VERIFICATION};
use toricnp_cli::experiment::run_experiment;
use toricnp_cli::spec::{ExperimentSpec, RunFlags};
use toricnp_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "toricnp", version, about = "Hodge and Newton polygons of toric exponential sums")]
struct Cli {
    /// Print compact JSON on one line.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight counts, Hodge numbers and the Hodge polygon.
    Hodge {
        /// Family as A,B,d,n.
        #[arg(long, value_parser = parse_family, conflicts_with = "polytope", required_unless_present = "polytope")]
        family: Option<ABParams>,
        /// Polytope file: the dimension on the first line, then one vertex per line.
        #[arg(long)]
        polytope: Option<PathBuf>,
        /// Write the polygon as CSV (x,num,den).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sample one member of a family and compare its Newton polygon with the Hodge polygon.
    Lfunction {
        #[arg(long, value_parser = parse_family)]
        family: ABParams,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        run: RunOpts,
        #[arg(long)]
        np_csv: Option<PathBuf>,
        #[arg(long)]
        hp_csv: Option<PathBuf>,
    },
    /// Build the triangulation of the far facet of a family.
    Triangulate {
        #[arg(long, value_parser = parse_family)]
        family: ABParams,
        /// Run every verification check; exit code 2 on failure.
        #[arg(long)]
        verify: bool,
        /// Refine non-simplex unit cells (needed for n >= 4).
        #[arg(long)]
        extended: bool,
        /// Include every cell in the output.
        #[arg(long)]
        full: bool,
        /// Write the lifted cells in OFF format.
        #[arg(long)]
        off: Option<PathBuf>,
    },
    /// Denominators and ordinarity moduli of a family.
    VerifyAb {
        #[arg(long, value_parser = parse_family)]
        family: ABParams,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Smith normal form of an integer matrix file (`rows cols` then the entries).
    Snf {
        #[arg(long)]
        matrix: PathBuf,
        /// Also run the diagonal criteria at this prime.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Run an experiment spec, appending records to a JSONL file and resuming where it stopped.
    Experiment {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Print one progress line per record on stderr.
        #[arg(long)]
        progress: bool,
    },
}

#[derive(Args)]
struct RunOpts {
    /// Maximum number of torus evaluations.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Also check that the two coefficients past the degree vanish.
    #[arg(long)]
    check_overdegree: bool,
    /// Require f to vanish too at a common zero of the partials.
    #[arg(long)]
    nondeg_with_f: bool,
    /// Largest extension degree searched for degeneracy witnesses.
    #[arg(long, default_value_t = 4)]
    k_max: usize,
    /// Let g reach degree dB/(A+B), so it also covers lattice points on the far facet.
    #[arg(long)]
    g_closed: bool,
}

fn parse_family(s: &str) -> Result<ABParams, String> {
    ABParams::parse(s).map_err(|e| e.to_string())
}

fn print(value: &serde_json::Value, compact: bool) {
    let text = if compact { serde_json::to_string(value) } else { serde_json::to_string_pretty(value) };
    let mut stdout = std::io::stdout().lock();
    // A closed pipe on the reader side is not an error of the computation.
    let _ = writeln!(stdout, "{}", text.expect("JSON values serialize"));
}

fn run(cli: Cli) -> CliResult<i32> {
    let outcome = match cli.command {
        Command::Hodge { family, polytope, csv } => {
            let input = match (&family, &polytope) {
                (Some(q), _) => HodgeInput::Family(*q),
                (None, Some(path)) => HodgeInput::PolytopeFile(path),
                (None, None) => return Err(CliError::Input("give --family or --polytope".into())),
            };
            commands::hodge(input, csv.as_deref())?
        }
        Command::Lfunction { family, p, seed, run, np_csv, hp_csv } => {
            let flags = RunFlags {
                check_overdegree: run.check_overdegree,
                nondeg: NondegMode { include_f: run.nondeg_with_f, k_max: run.k_max, ..NondegMode::default() },
                g_range: if run.g_closed { GRange::Closed } else { GRange::Strict },
            };
            commands::lfunction(LfunctionArgs {
                family,
                p,
                seed,
                budget: run.budget,
                flags,
                np_csv: np_csv.as_deref(),
                hp_csv: hp_csv.as_deref(),
            })?
        }
        Command::Triangulate { family, verify, extended, full, off } => {
            commands::triangulate(TriangulateArgs { family, extended, verify, full, off: off.as_deref() })?
        }
        Command::VerifyAb { family, p } => commands::verify_ab(family, p)?,
        Command::Snf { matrix, p } => commands::snf(&matrix, p)?,
        Command::Experiment { spec, out, progress } => {
            let text = std::fs::read_to_string(&spec).map_err(|e| CliError::io(&spec, e))?;
            let spec = ExperimentSpec::parse(&text)?;
            let summary = run_experiment(&spec, &out, |cell, r| {
                if progress {
                    eprintln!(
                        "[{}] {} p={} sample={} {} {}",
                        cell.index,
                        r.family.label(),
                        r.p,
                        cell.sample,
                        r.status.as_str(),
                        r.verdict.map(|v| v.as_str()).unwrap_or("-")
                    );
                }
            })?;
            let code = if summary.any_violation() {
                EXIT_VERIFICATION
            } else if summary.any_refused() {
                EXIT_BUDGET
            } else {
                EXIT_OK
            };
            commands::Outcome { output: summary.to_json(), code }
        }
    };
    print(&outcome.output, cli.compact);
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { EXIT_OK as u8 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
