//! Command-line interface for the holonomy library. The binary is a thin
//! dispatcher; everything it does is available as library calls (see the
//! crate examples for the API route).

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use holonomy::config::{OutputFormat, RunConfig, SweepSpec};
use holonomy::error::{Error, Result};
use holonomy::report::{emit_to_path, EmitFormat};
use holonomy::{run, verify};

#[derive(Parser)]
#[command(
    name = "holonomy",
    about = "Geometric phases of mixed quantum states: Uhlmann, interferometric, and open-system holonomies",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the phases requested by a JSON configuration file.
    Compute {
        /// Path to the configuration file (`-` for stdin).
        config: String,
    },
    /// Run the built-in verification suite of published closed-form values
    /// and structural properties; exits nonzero if any criterion fails.
    VerifyPaper {
        /// Only run criteria whose name (or number) contains this string.
        #[arg(long)]
        filter: Option<String>,
        /// Divide every tolerance by this factor (sanity inversion: large
        /// factors must make the 2-significant-figure targets fail).
        #[arg(long, default_value_t = 1.0)]
        tighten: f64,
    },
    /// List the scenario presets and their parameter schemas.
    Presets,
    /// Sweep one scenario parameter over a linear range.
    Sweep {
        /// Path to the configuration file (`-` for stdin).
        config: String,
        /// Parameter to sweep.
        #[arg(long)]
        param: String,
        /// Range `from:to:points`, e.g. `0.2:1.4:7`.
        #[arg(long)]
        range: String,
    },
}

fn read_config(path: &str) -> Result<String> {
    if path == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Io {
                path: "<stdin>".into(),
                source: e,
            })?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_string(),
            source: e,
        })
    }
}

fn emit_format(f: OutputFormat) -> EmitFormat {
    match f {
        OutputFormat::Text => EmitFormat::Text,
        OutputFormat::Csv => EmitFormat::Csv,
        OutputFormat::JsonLines => EmitFormat::JsonLines,
    }
}

fn parse_range(range: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "range must be `from:to:points`, got `{range}`"
        )));
    }
    let from: f64 = parts[0]
        .parse()
        .map_err(|_| Error::Config(format!("bad range start `{}`", parts[0])))?;
    let to: f64 = parts[1]
        .parse()
        .map_err(|_| Error::Config(format!("bad range end `{}`", parts[1])))?;
    let points: usize = parts[2]
        .parse()
        .map_err(|_| Error::Config(format!("bad range point count `{}`", parts[2])))?;
    Ok((from, to, points))
}

fn main_inner() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Compute { config } => {
            let cfg = RunConfig::from_json(&read_config(&config)?)?;
            let rows = run::run(&cfg)?;
            emit_to_path(&rows, emit_format(cfg.output_format), cfg.output_path.as_deref())?;
            Ok(true)
        }
        Command::Sweep {
            config,
            param,
            range,
        } => {
            let mut cfg = RunConfig::from_json(&read_config(&config)?)?;
            let (from, to, points) = parse_range(&range)?;
            // validate against the source like an embedded sweep block
            match &cfg.source {
                holonomy::config::CurveSource::InlineBloch { .. } => {
                    return Err(Error::Config(
                        "sweeps require a scenario preset (field: sweep)".into(),
                    ))
                }
                holonomy::config::CurveSource::Preset { name, params } => {
                    if param == "steps" || !params.contains_key(&param) {
                        return Err(Error::Config(format!(
                            "scenario `{name}` has no sweepable parameter `{param}` (field: sweep.param)"
                        )));
                    }
                    if points < 2 || !from.is_finite() || !to.is_finite() || from >= to {
                        return Err(Error::Config(
                            "sweep needs finite from < to and at least 2 points (field: sweep)"
                                .into(),
                        ));
                    }
                }
            }
            cfg.sweep = Some(SweepSpec {
                param,
                from,
                to,
                points,
            });
            let rows = run::run(&cfg)?;
            emit_to_path(&rows, emit_format(cfg.output_format), cfg.output_path.as_deref())?;
            Ok(true)
        }
        Command::Presets => {
            print!("{}", run::presets_text());
            Ok(true)
        }
        Command::VerifyPaper { filter, tighten } => {
            if !(tighten.is_finite() && tighten > 0.0) {
                return Err(Error::Config(format!(
                    "--tighten must be positive and finite, got {tighten}"
                )));
            }
            let reports = verify::run_all(filter.as_deref(), tighten)?;
            if reports.is_empty() {
                return Err(Error::Config(format!(
                    "no criteria match filter `{}`",
                    filter.unwrap_or_default()
                )));
            }
            print!("{}", verify::render(&reports));
            Ok(reports.iter().all(|r| r.passed))
        }
    }
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_class() as u8)
        }
    }
}
