//! Thin command-line front-end over the library's certificate pipelines.

use clap::{Parser, Subcommand};
use std::process::ExitCode;

use frobpen::cli::{self, CheckOpts, CmdOutput, Suite};
use frobpen::metric::Chart;
use frobpen::ExactScalar;

#[derive(Parser)]
#[command(
    name = "frobpen",
    about = "Exact construction and certification of Frobenius pencils of flat metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Forest validity plus the pencil conditions (i)-(iii).
    Validate {
        specfile: String,
        #[arg(long)]
        pretty: bool,
    },
    /// Assemble the metric and print it as JSON.
    Build {
        specfile: String,
        /// Chart: x (diagonal), y (block companion) or u (Frobenius).
        #[arg(long, default_value = "y")]
        chart: String,
    },
    /// Run certificate suites.
    Check {
        specfile: String,
        /// flat | frobenius | compat | algebra | all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Polys-only JSON file with a second pencil member.
        #[arg(long)]
        second: Option<String>,
        /// Constant m^0 for the partner form h.
        #[arg(long)]
        m0: Option<String>,
        /// Comma-separated m-vector for the partner form h.
        #[arg(long)]
        m: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        pretty: bool,
    },
    /// Pencil dimension and an exact basis of admissible coefficients.
    Basis { specfile: String },
    /// Worked examples: aff2, aff3, example1, fig1.
    Demo {
        name: String,
        #[arg(long)]
        pretty: bool,
    },
}

fn read(path: &str) -> Result<String, CmdOutput> {
    std::fs::read_to_string(path).map_err(|e| CmdOutput {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: cannot read {path}: {e}\n"),
    })
}

fn emit(out: CmdOutput) -> ExitCode {
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Validate { specfile, pretty } => match read(&specfile) {
            Ok(text) => cli::cmd_validate(&text, pretty),
            Err(e) => e,
        },
        Command::Build { specfile, chart } => {
            let chart = match chart.as_str() {
                "x" => Chart::DiagonalX,
                "y" => Chart::BlockY,
                "u" => Chart::FrobeniusU,
                other => {
                    return emit(CmdOutput {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("error: unknown chart {other:?} (use x, y or u)\n"),
                    })
                }
            };
            match read(&specfile) {
                Ok(text) => cli::cmd_build(&text, chart),
                Err(e) => e,
            }
        }
        Command::Check {
            specfile,
            suite,
            second,
            m0,
            m,
            seed,
            pretty,
        } => {
            let Some(suite) = Suite::parse(&suite) else {
                return emit(CmdOutput {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("error: unknown suite {suite:?}\n"),
                });
            };
            let second = match second {
                None => None,
                Some(path) => match read(&path) {
                    Ok(text) => Some(text),
                    Err(e) => return emit(e),
                },
            };
            let m0 = match m0.map(|s| s.parse::<ExactScalar>()).transpose() {
                Ok(v) => v,
                Err(_) => {
                    return emit(CmdOutput {
                        code: 2,
                        stdout: String::new(),
                        stderr: "error: --m0 must be a rational like 3/2\n".into(),
                    })
                }
            };
            let m = match m.map(|s| {
                s.split(',')
                    .map(|p| p.trim().parse::<ExactScalar>())
                    .collect::<Result<Vec<_>, _>>()
            }) {
                None => None,
                Some(Ok(v)) => Some(v),
                Some(Err(_)) => {
                    return emit(CmdOutput {
                        code: 2,
                        stdout: String::new(),
                        stderr: "error: --m must be comma-separated rationals\n".into(),
                    })
                }
            };
            match read(&specfile) {
                Ok(text) => cli::cmd_check(
                    &text,
                    &CheckOpts {
                        suite,
                        second,
                        m0,
                        m,
                        seed,
                        pretty,
                    },
                ),
                Err(e) => e,
            }
        }
        Command::Basis { specfile } => match read(&specfile) {
            Ok(text) => cli::cmd_basis(&text),
            Err(e) => e,
        },
        Command::Demo { name, pretty } => cli::cmd_demo(&name, pretty),
    };
    emit(out)
}
