//! Experiment runner for quantum neural network dynamics and recurrence
//! analysis. Subcommands emit CSV (or PGM for recurrence plots) and are
//! byte-deterministic for identical configurations.

mod archfile;
mod cmd;
mod config;
mod csvio;
mod exit;
mod pgm;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_dims, parse_env, parse_radii, ConfigFile, LagSpec};
use exit::{CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "quann",
    version,
    about = "Quantum neural network dynamics and recurrence analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct NetworkArgs {
    /// Optional TOML config file; command-line flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in architecture preset (example3)
    #[arg(long)]
    preset: Option<String>,
    /// Architecture description file (TOML)
    #[arg(long)]
    arch: Option<PathBuf>,
    /// Environment start: `uniform` or a 1-based eigenstate index
    #[arg(long)]
    env: Option<String>,
    /// Output file (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the firing-pattern selector and verify the final state
    SelectPattern {
        /// Target firing pattern as a 0/1 string
        #[arg(long)]
        q: Option<String>,
        /// Input-layer size; must match the target pattern length
        #[arg(long)]
        m: Option<usize>,
        /// Input-layer start: uniform | basis:BITS | file:PATH
        #[arg(long)]
        psi0: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Represent an n-to-m Boolean function and verify the final state
    BooleanRep {
        /// Function input width in bits
        #[arg(long)]
        n: Option<usize>,
        /// Function output width in bits
        #[arg(long)]
        m: Option<usize>,
        /// Truth-table file with one `input,output` bit-string row per line
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mean firing-energy series for one p or a p sweep
    Dynamics {
        #[command(flatten)]
        net: NetworkArgs,
        /// p value or START:STOP:STEP sweep
        #[arg(long)]
        p: Option<String>,
        /// Iterations to apply (the run records steps+1 values)
        #[arg(long)]
        steps: Option<usize>,
        /// Leading recorded values to drop as transients
        #[arg(long)]
        drop: Option<usize>,
    },
    /// Diagonal recurrence statistics of the mean-energy series
    Rqa {
        #[command(flatten)]
        net: NetworkArgs,
        /// p value
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        drop: Option<usize>,
        /// Embedding dimension
        #[arg(long)]
        dim: Option<usize>,
        /// Embedding lag: positive integer or `auto`
        #[arg(long)]
        lag: Option<String>,
        /// Radii: absolute CSV list or sigma:START:STOP:STEP
        #[arg(long)]
        radii: Option<String>,
        /// One row per environment eigenstate instead of per radius
        #[arg(long, conflicts_with = "epochs")]
        per_eigenstate: bool,
        /// Split the kept series into this many sequential epochs
        #[arg(long)]
        epochs: Option<usize>,
        /// Write the persistent full-line periods here (epoch mode)
        #[arg(long)]
        out_lines: Option<PathBuf>,
        /// Write the gap distribution here (epoch mode)
        #[arg(long)]
        out_gaps: Option<PathBuf>,
    },
    /// Correlation-dimension grid over epochs and embedding dimensions
    CorrDim {
        #[command(flatten)]
        net: NetworkArgs,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        drop: Option<usize>,
        /// Embedding dimensions: single value or inclusive A:B range
        #[arg(long)]
        dims: Option<String>,
        #[arg(long)]
        epochs: Option<usize>,
        /// Embedded points per epoch
        #[arg(long)]
        epoch_size: Option<usize>,
        #[arg(long)]
        lag: Option<String>,
        #[arg(long)]
        radii: Option<String>,
    },
    /// Binary PGM recurrence plot of the mean-energy series
    RecPlot {
        #[command(flatten)]
        net: NetworkArgs,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        drop: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        lag: Option<String>,
        /// A single radius: absolute value or sigma:X:X:STEP
        #[arg(long)]
        radii: Option<String>,
    },
    /// Probability of full-recurrence diagonals across a p sweep
    ProbScan {
        #[command(flatten)]
        net: NetworkArgs,
        /// p value or START:STOP:STEP sweep
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        drop: Option<usize>,
        /// Embedding dimensions: single value or inclusive A:B range
        #[arg(long)]
        dims: Option<String>,
        #[arg(long)]
        lag: Option<String>,
        /// A single radius: absolute value or sigma:X:X:STEP
        #[arg(long)]
        radii: Option<String>,
    },
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::usage(format!("missing required option --{flag}")))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::SelectPattern { q, m, psi0, config, out } => {
            let file = ConfigFile::load(config.as_ref())?;
            let q = require(file.merge_str(q, "q")?, "q")?;
            let m = file.merge_usize(m, "m")?;
            let psi0 = file
                .merge_str(psi0, "psi0")?
                .unwrap_or_else(|| "uniform".into());
            let out = file.merge_path(out, "out")?;
            cmd::select_pattern::run(cmd::select_pattern::Resolved { q, m, psi0, out })
        }
        Command::BooleanRep { n, m, table, config, out } => {
            let file = ConfigFile::load(config.as_ref())?;
            let n = require(file.merge_usize(n, "n")?, "n")?;
            let m = require(file.merge_usize(m, "m")?, "m")?;
            let table = require(file.merge_path(table, "table")?, "table")?;
            let out = file.merge_path(out, "out")?;
            cmd::boolean_rep::run(cmd::boolean_rep::Resolved { n, m, table, out })
        }
        Command::Dynamics { net, p, steps, drop } => {
            let file = ConfigFile::load(net.config.as_ref())?;
            let p = require(file.merge_str(p, "p")?, "p")?;
            let steps = file.merge_usize(steps, "steps")?.unwrap_or(10_999);
            let drop = file.merge_usize(drop, "drop")?.unwrap_or(1_000);
            let env = parse_env(&file.merge_str(net.env, "env")?.unwrap_or_else(|| "uniform".into()))?;
            cmd::dynamics::run(cmd::dynamics::Resolved {
                preset: file.merge_str(net.preset, "preset")?,
                arch: file.merge_path(net.arch, "arch")?,
                p,
                steps,
                drop,
                env,
                out: file.merge_path(net.out, "out")?,
            })
        }
        Command::Rqa {
            net,
            p,
            steps,
            drop,
            dim,
            lag,
            radii,
            per_eigenstate,
            epochs,
            out_lines,
            out_gaps,
        } => {
            let file = ConfigFile::load(net.config.as_ref())?;
            let p_text = require(file.merge_str(p, "p")?, "p")?;
            let p: f64 = p_text
                .parse()
                .map_err(|_| CliError::usage(format!("bad p value `{p_text}`")))?;
            let steps = file.merge_usize(steps, "steps")?.unwrap_or(5_999);
            let drop = file.merge_usize(drop, "drop")?.unwrap_or(1_000);
            let dim = file.merge_usize(dim, "dim")?.unwrap_or(7);
            let lag = LagSpec::parse(&file.merge_str(lag, "lag")?.unwrap_or_else(|| "1".into()))?;
            let radii = parse_radii(
                &file
                    .merge_str(radii, "radii")?
                    .unwrap_or_else(|| "sigma:0.5:2.0:0.1".into()),
            )?;
            let env = parse_env(&file.merge_str(net.env, "env")?.unwrap_or_else(|| "uniform".into()))?;
            let epochs = file.merge_usize(epochs, "epochs")?;
            let mode = if per_eigenstate {
                cmd::rqa_cmd::Mode::PerEigenstate
            } else if let Some(n) = epochs {
                cmd::rqa_cmd::Mode::Epochs(n)
            } else {
                cmd::rqa_cmd::Mode::RadiusSweep
            };
            cmd::rqa_cmd::run(cmd::rqa_cmd::Resolved {
                preset: file.merge_str(net.preset, "preset")?,
                arch: file.merge_path(net.arch, "arch")?,
                p,
                steps,
                drop,
                dim,
                lag,
                radii,
                env,
                mode,
                out: file.merge_path(net.out, "out")?,
                out_lines: file.merge_path(out_lines, "out_lines")?,
                out_gaps: file.merge_path(out_gaps, "out_gaps")?,
            })
        }
        Command::CorrDim {
            net,
            p,
            drop,
            dims,
            epochs,
            epoch_size,
            lag,
            radii,
        } => {
            let file = ConfigFile::load(net.config.as_ref())?;
            let p_text = require(file.merge_str(p, "p")?, "p")?;
            let p: f64 = p_text
                .parse()
                .map_err(|_| CliError::usage(format!("bad p value `{p_text}`")))?;
            let drop = file.merge_usize(drop, "drop")?.unwrap_or(1_000);
            let dims = parse_dims(&file.merge_str(dims, "dims")?.unwrap_or_else(|| "3:9".into()))?;
            let epochs = file.merge_usize(epochs, "epochs")?.unwrap_or(4);
            let epoch_size = file.merge_usize(epoch_size, "epoch_size")?.unwrap_or(1_000);
            let lag = LagSpec::parse(&file.merge_str(lag, "lag")?.unwrap_or_else(|| "1".into()))?;
            let radii = parse_radii(
                &file
                    .merge_str(radii, "radii")?
                    .unwrap_or_else(|| "sigma:1.0:1.7:0.1".into()),
            )?;
            let env = parse_env(&file.merge_str(net.env, "env")?.unwrap_or_else(|| "uniform".into()))?;
            cmd::corr_dim::run(cmd::corr_dim::Resolved {
                preset: file.merge_str(net.preset, "preset")?,
                arch: file.merge_path(net.arch, "arch")?,
                p,
                drop,
                dims,
                epochs,
                epoch_size,
                lag,
                radii,
                env,
                out: file.merge_path(net.out, "out")?,
            })
        }
        Command::RecPlot {
            net,
            p,
            steps,
            drop,
            dim,
            lag,
            radii,
        } => {
            let file = ConfigFile::load(net.config.as_ref())?;
            let p_text = require(file.merge_str(p, "p")?, "p")?;
            let p: f64 = p_text
                .parse()
                .map_err(|_| CliError::usage(format!("bad p value `{p_text}`")))?;
            let steps = file.merge_usize(steps, "steps")?.unwrap_or(10_999);
            let drop = file.merge_usize(drop, "drop")?.unwrap_or(1_000);
            let dim = file.merge_usize(dim, "dim")?.unwrap_or(7);
            let lag = LagSpec::parse(&file.merge_str(lag, "lag")?.unwrap_or_else(|| "1".into()))?;
            let radii = parse_radii(
                &file
                    .merge_str(radii, "radii")?
                    .unwrap_or_else(|| "sigma:2:2:1".into()),
            )?;
            let env = parse_env(&file.merge_str(net.env, "env")?.unwrap_or_else(|| "uniform".into()))?;
            let out = require(file.merge_path(net.out, "out")?, "out")?;
            cmd::rec_plot::run(cmd::rec_plot::Resolved {
                preset: file.merge_str(net.preset, "preset")?,
                arch: file.merge_path(net.arch, "arch")?,
                p,
                steps,
                drop,
                dim,
                lag,
                radii,
                env,
                out,
            })
        }
        Command::ProbScan {
            net,
            p,
            steps,
            drop,
            dims,
            lag,
            radii,
        } => {
            let file = ConfigFile::load(net.config.as_ref())?;
            let p = file.merge_str(p, "p")?.unwrap_or_else(|| "0:1:0.001".into());
            let steps = file.merge_usize(steps, "steps")?.unwrap_or(2_999);
            let drop = file.merge_usize(drop, "drop")?.unwrap_or(1_000);
            let dims = parse_dims(&file.merge_str(dims, "dims")?.unwrap_or_else(|| "3:8".into()))?;
            let lag = LagSpec::parse(&file.merge_str(lag, "lag")?.unwrap_or_else(|| "auto".into()))?;
            let radii = parse_radii(
                &file
                    .merge_str(radii, "radii")?
                    .unwrap_or_else(|| "sigma:1:1:1".into()),
            )?;
            let env = parse_env(&file.merge_str(net.env, "env")?.unwrap_or_else(|| "uniform".into()))?;
            cmd::prob_scan::run(cmd::prob_scan::Resolved {
                preset: file.merge_str(net.preset, "preset")?,
                arch: file.merge_path(net.arch, "arch")?,
                p,
                steps,
                drop,
                dims,
                lag,
                radii,
                env,
                out: file.merge_path(net.out, "out")?,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{err}");
                    ExitCode::SUCCESS
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(64)
                }
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.kind.code())
        }
    }
}
