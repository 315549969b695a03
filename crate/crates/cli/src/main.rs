use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gravwitness_cli::commands::{
    cmd_calibrate, cmd_cp, cmd_inflect, cmd_jump, cmd_sweep, cmd_trace, cmd_vismin, Report,
    DEFAULT_JUMP_TOL, DEFAULT_SENSITIVITY,
};
use gravwitness_cli::config::{load_config, OutputKind, RunConfig};
use gravwitness_cli::error::CliError;

/// Pancharatnam phase and visibility of two gravitationally coupled
/// Stern-Gerlach interferometers, semiclassical vs quantum gravity.
#[derive(Debug, Parser)]
#[command(name = "gravwitness", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Flat `key = value` config file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Coupling convention: m0sq (G m0^2) or m0m (G m0 m, twice the phases).
    #[arg(long, global = true, value_name = "m0sq|m0m")]
    convention: Option<String>,
    #[arg(long, global = true, value_name = "quantum|semiclassical")]
    model: Option<String>,
    /// Output file for CSV data; an SVG goes next to it with an .svg extension.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Uniform trace grid size.
    #[arg(long, global = true, value_name = "N")]
    points: Option<String>,
    /// Unwrap the semiclassical phase column.
    #[arg(long, global = true)]
    unwrap: bool,
    /// Comma list of csv, svg.
    #[arg(long, global = true, value_name = "LIST")]
    outputs: Option<String>,
    /// Any config key, applied after the file. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Worker threads for trace and sweep evaluation.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Time trace of phases, visibilities and concurrence as CSV (and SVG).
    Trace,
    /// Locate the first phase jump.
    Jump {
        /// Bracket width in seconds.
        #[arg(long, default_value_t = DEFAULT_JUMP_TOL)]
        tol: f64,
    },
    /// First inflection point of the quantum phase.
    Inflect,
    /// Visibility minimum in the window.
    Vismin {
        #[arg(long, value_name = "global|reduced")]
        which: Option<String>,
    },
    /// Accumulated phase against an interferometer sensitivity.
    Calibrate {
        /// Phase sensitivity in radians.
        #[arg(long, default_value_t = DEFAULT_SENSITIVITY)]
        sensitivity: f64,
    },
    /// Casimir-Polder order-of-magnitude estimate.
    Cp {
        /// Sphere radius in metres.
        #[arg(long = "R", value_name = "METRES")]
        radius: f64,
        /// Relative permittivity.
        #[arg(long)]
        epsilon: f64,
        /// Second permittivity to compare against.
        #[arg(long, value_name = "EPSILON")]
        reference_epsilon: Option<f64>,
    },
    /// One-dimensional parameter sweep as CSV.
    Sweep {
        #[arg(long, value_name = "m0|d|dx|T")]
        param: Option<String>,
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        stop: Option<String>,
        #[arg(long)]
        count: Option<String>,
        #[arg(long, value_name = "t_jump|v_min|delta_phi|concurrence_max")]
        scalar: Option<String>,
    },
}

fn overrides(cli: &Cli) -> Result<Vec<(String, String)>, CliError> {
    let g = &cli.global;
    let mut out = Vec::new();
    for item in &g.set {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{item}`")))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    let mut push = |key: &str, value: &Option<String>| {
        if let Some(v) = value {
            out.push((key.to_string(), v.clone()));
        }
    };
    push("convention", &g.convention);
    push("model", &g.model);
    push("trace_points", &g.points);
    push("outputs", &g.outputs);
    match &cli.command {
        Command::Vismin { which } => push("visibility", which),
        Command::Sweep {
            param,
            start,
            stop,
            count,
            scalar,
        } => {
            push("sweep_param", param);
            push("sweep_start", start);
            push("sweep_stop", stop);
            push("sweep_count", count);
            push("sweep_scalar", scalar);
        }
        _ => {}
    }
    if g.unwrap {
        out.push(("unwrap".into(), "true".into()));
    }
    Ok(out)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        context: format!("cannot write {}", path.display()),
        source,
    })
}

fn print_report(report: Report) {
    print!("{report}");
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg: RunConfig = load_config(cli.global.config.as_deref(), &overrides(cli)?)?;
    let out = cli.global.out.as_deref();
    match &cli.command {
        Command::Trace => {
            if cfg.outputs.contains(&OutputKind::Svg) && out.is_none() {
                return Err(CliError::Usage("svg output needs --out PATH".into()));
            }
            let trace = cmd_trace(&cfg)?;
            if let Some(csv) = &trace.csv {
                match out {
                    Some(path) => write_file(path, csv)?,
                    None => print!("{csv}"),
                }
            }
            if let (Some(svg), Some(path)) = (&trace.svg, out) {
                write_file(&path.with_extension("svg"), svg)?;
            }
        }
        Command::Jump { tol } => print_report(cmd_jump(&cfg, *tol)?),
        Command::Inflect => print_report(cmd_inflect(&cfg)?),
        Command::Vismin { .. } => print_report(cmd_vismin(&cfg)?),
        Command::Calibrate { sensitivity } => print_report(cmd_calibrate(&cfg, *sensitivity)?),
        Command::Cp {
            radius,
            epsilon,
            reference_epsilon,
        } => print_report(cmd_cp(&cfg, *radius, *epsilon, *reference_epsilon)?),
        Command::Sweep { .. } => {
            let csv = cmd_sweep(&cfg)?.to_csv();
            match out {
                Some(path) => write_file(path, &csv)?,
                None => print!("{csv}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.global.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(&cli)),
            Err(e) => Err(CliError::Usage(format!(
                "cannot start {n} worker threads: {e}"
            ))),
        },
        None => run(&cli),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
