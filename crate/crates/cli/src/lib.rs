//! Command-line front end for the `dirac_degen` verification library.
//!
//! Exit codes: 0 when every check passes, 1 when a tolerance check fails,
//! 2 for usage or configuration errors (no CSV is written then).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{RunConfig, Settings, CONFIG_ENV};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("evaluation error: {0}")]
    Eval(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Eval(_) => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dirac-degen",
    version,
    about = "Verify degenerate Dirac solutions and emit CSV"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dirac residuals for the built-in spinor/potential matrix
    Verify(Flags),
    /// E and B fields over a grid
    Fields(Flags),
    /// Tunneling transmittance against p/mc
    Transmit(Flags),
    /// Near-degenerate perturbation residuals
    Perturb(Flags),
    /// `fields` with the plane-wave preset
    Wave(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// key = value config file (default: $DIRAC_DEGEN_CONFIG)
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    #[arg(long)]
    pub mass: Option<String>,
    /// Mass used to build spinors and potentials (to probe a deliberate mismatch)
    #[arg(long)]
    pub spinor_mass: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub charge: Option<String>,
    /// Spinor amplitude as `re,im`
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub f_expr: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub g_expr: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_expr: Option<String>,
    /// Grid axis as `AXIS=origin:step:count`, AXIS one of t, x, y, z; repeatable
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Vec<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub fd_tol: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Points sampled per family and potential
    #[arg(long)]
    pub points: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// natural or si
    #[arg(long)]
    pub units: Option<String>,
    /// Append Maxwell residual columns
    #[arg(long)]
    pub maxwell: bool,
    #[arg(long)]
    pub maxwell_step: Option<String>,
    /// + or -
    #[arg(long, allow_hyphen_values = true)]
    pub kappa2_sign: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub ew1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub ew2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta2: Option<String>,
    #[arg(long)]
    pub kw: Option<String>,
    /// Barrier width (metres with --units si)
    #[arg(long)]
    pub width: Option<String>,
    #[arg(long)]
    pub p_min: Option<String>,
    #[arg(long)]
    pub p_max: Option<String>,
    #[arg(long)]
    pub p_count: Option<String>,
    /// electron or proton
    #[arg(long)]
    pub particle: Option<String>,
    #[arg(long)]
    pub mass_kg: Option<String>,
    /// Comma-separated list
    #[arg(long, allow_hyphen_values = true)]
    pub e1: Option<String>,
    /// Comma-separated list
    #[arg(long)]
    pub e2: Option<String>,
    /// Comma-separated list
    #[arg(long)]
    pub s_amp: Option<String>,
    /// first-order or exact
    #[arg(long)]
    pub form: Option<String>,
}

impl Flags {
    fn settings(&self) -> Result<Settings, ConfigError> {
        let mut s = Settings::default();
        let scalar = [
            ("xi", &self.xi),
            ("mass", &self.mass),
            ("spinor-mass", &self.spinor_mass),
            ("charge", &self.charge),
            ("c1", &self.c1),
            ("f-expr", &self.f_expr),
            ("g-expr", &self.g_expr),
            ("s-expr", &self.s_expr),
            ("tol", &self.tol),
            ("fd-tol", &self.fd_tol),
            ("seed", &self.seed),
            ("points", &self.points),
            ("units", &self.units),
            ("maxwell-step", &self.maxwell_step),
            ("kappa2-sign", &self.kappa2_sign),
            ("ew1", &self.ew1),
            ("delta1", &self.delta1),
            ("ew2", &self.ew2),
            ("delta2", &self.delta2),
            ("kw", &self.kw),
            ("width", &self.width),
            ("p-min", &self.p_min),
            ("p-max", &self.p_max),
            ("p-count", &self.p_count),
            ("particle", &self.particle),
            ("mass-kg", &self.mass_kg),
            ("e1", &self.e1),
            ("e2", &self.e2),
            ("s-amp", &self.s_amp),
            ("form", &self.form),
        ];
        for (key, value) in scalar {
            if let Some(v) = value {
                s.set(key, v.clone())?;
            }
        }
        for g in &self.grid {
            let (axis, spec) = g
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("--grid expects AXIS=origin:step:count, got `{g}`")))?;
            let axis = axis.trim();
            if !["t", "x", "y", "z"].contains(&axis) {
                return Err(ConfigError(format!("unknown grid axis `{axis}`")));
            }
            s.set(&format!("grid.{axis}"), spec)?;
        }
        if let Some(out) = &self.out {
            s.set("out", out.display().to_string())?;
        }
        if self.maxwell {
            s.set("maxwell", "true")?;
        }
        Ok(s)
    }
}

/// Config file (explicit or from the environment) overlaid by flags.
pub fn resolve_config(flags: &Flags, env_config: Option<OsString>) -> Result<RunConfig, ConfigError> {
    let path = flags.config.clone().or_else(|| env_config.map(PathBuf::from));
    let mut settings = match path {
        Some(p) => Settings::from_file(&p)?,
        None => Settings::default(),
    };
    settings.overlay(flags.settings()?);
    RunConfig::from_settings(&settings)
}

type CommandFn = fn(&RunConfig) -> Result<commands::Outcome, CliError>;

pub fn execute(command: &Command, env_config: Option<OsString>) -> Result<(commands::Outcome, RunConfig), CliError> {
    let (flags, run): (&Flags, CommandFn) = match command {
        Command::Verify(f) => (f, commands::verify),
        Command::Fields(f) => (f, |c| commands::fields(c, false)),
        Command::Wave(f) => (f, |c| commands::fields(c, true)),
        Command::Transmit(f) => (f, commands::transmit),
        Command::Perturb(f) => (f, commands::perturb),
    };
    let cfg = resolve_config(flags, env_config)?;
    let outcome = run(&cfg)?;
    Ok((outcome, cfg))
}

/// Parses `args`, runs the command and writes its CSV. Returns the exit code.
pub fn run_with<I, T>(args: I, env_config: Option<OsString>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let (outcome, cfg) = match execute(&cli.command, env_config) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "dirac-degen: {e}");
            return e.exit_code();
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.csv),
        None => stdout.write_all(outcome.csv.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "dirac-degen: cannot write output: {e}");
        return 2;
    }
    if outcome.passed {
        0
    } else {
        let _ = writeln!(stderr, "dirac-degen: tolerance check failed");
        1
    }
}

pub fn run() -> i32 {
    run_with(
        std::env::args_os(),
        std::env::var_os(CONFIG_ENV),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
