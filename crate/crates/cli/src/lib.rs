//! Command-line front end for `chlattice`: counting runs, route comparisons,
//! identity checks and volume tables, written as CSV or JSON.

mod commands;
mod table;
pub mod verify;

use std::path::PathBuf;

use chlattice::chgeom::BallPoint;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

pub use commands::{cmd_average, cmd_count, cmd_mainterm, cmd_verify, cmd_volume};
pub use table::{Cell, Table, TABLE_VERSION};

/// Exit code when every contract held.
pub const EXIT_PASS: i32 = 0;
/// Exit code for a numerical-contract failure.
pub const EXIT_NUMERICAL: i32 = 1;
/// Exit code for bad flags or unreadable input.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("bad input file {path}: {source}")]
    Input { path: PathBuf, source: chlattice::Error },
    #[error(transparent)]
    Numerical(#[from] chlattice::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "chlattice", version, about = "Lattice point counts in complex hyperbolic space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write the table here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for orbit enumeration (default: all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// N(T, z, z') for each T.
    Count(GroupArgs),
    /// Direct and wave-route averages with the sandwich check.
    Average(AverageArgs),
    /// N(T) against the discrete-spectrum main term.
    Mainterm(MaintermArgs),
    /// Identity battery: kernel, H_n, bump, volume, hypergeometric checks.
    Verify(VerifyArgs),
    /// Closed-form ball volume against cubature.
    Volume(VolumeArgs),
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Group JSON: {"n", "generators", "include_inverses", "max_word_length"}.
    #[arg(long)]
    pub group: PathBuf,
    /// Comma-separated radii, ascending.
    #[arg(long = "t-grid", value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub t_grid: Vec<f64>,
    /// Ball center z as re,im,re,im,... (default: origin).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub z: Option<Vec<f64>>,
    /// Orbit base z' as re,im,... (default: origin).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub zp: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct AverageArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Bump radius.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Largest accepted |I_wave - I_direct|.
    #[arg(long, default_value_t = 1e-3)]
    pub route_tol: f64,
    /// Gauss nodes per panel of the wave time integral.
    #[arg(long, default_value_t = 24)]
    pub wave_t_nodes: usize,
    /// Gauss nodes per panel of the wave radial integral.
    #[arg(long, default_value_t = 24)]
    pub wave_radial_nodes: usize,
    /// Relative tolerance of the wave-route spherical means.
    #[arg(long, default_value_t = 1e-9)]
    pub wave_tol: f64,
}

#[derive(Debug, Args)]
pub struct MaintermArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Spectral JSON: {"covolume", "entries": [{"lambda", "phi"}]}.
    #[arg(long)]
    pub spectral: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Multiply the closed-form kernel constant (mutation testing).
    #[arg(long, default_value_t = 1.0, hide = true)]
    pub inject_kernel_scale: f64,
    /// Random draws for the connection-formula overlap check.
    #[arg(long, default_value_t = 200)]
    pub draws: usize,
}

#[derive(Debug, Args)]
pub struct VolumeArgs {
    /// Complex dimension.
    #[arg(long)]
    pub n: usize,
    #[arg(long = "t-grid", value_delimiter = ',', required = true)]
    pub t_grid: Vec<f64>,
    /// Relative tolerance of the cubature.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

/// Settled configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub group_file: Option<PathBuf>,
    pub spectral_file: Option<PathBuf>,
    pub n: Option<usize>,
    pub t_grid: Vec<f64>,
    pub alpha: f64,
    pub z: Option<Vec<f64>>,
    pub z_prime: Option<Vec<f64>>,
    pub tolerances: Tolerances,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub workers: Option<usize>,
    pub verify_draws: usize,
    pub kernel_constant_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Count,
    Average,
    Mainterm,
    Verify,
    Volume,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub route: f64,
    pub volume: f64,
    pub wave: chlattice::average::WaveConfig,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { route: 1e-3, volume: 1e-6, wave: Default::default() }
    }
}

impl RunConfig {
    fn base(command: CommandKind) -> Self {
        RunConfig {
            command,
            group_file: None,
            spectral_file: None,
            n: None,
            t_grid: Vec::new(),
            alpha: 0.05,
            z: None,
            z_prime: None,
            tolerances: Tolerances::default(),
            output: None,
            format: Format::Csv,
            workers: None,
            verify_draws: 200,
            kernel_constant_scale: 1.0,
        }
    }

    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let mut cfg = match cli.command {
            Command::Count(g) => Self::base(CommandKind::Count).with_group(g),
            Command::Average(a) => {
                let mut c = Self::base(CommandKind::Average).with_group(a.group);
                c.alpha = a.alpha;
                c.tolerances.route = a.route_tol;
                c.tolerances.wave.t_quad_points = a.wave_t_nodes;
                c.tolerances.wave.radial_quad_points = a.wave_radial_nodes;
                c.tolerances.wave.tol = a.wave_tol;
                c
            }
            Command::Mainterm(m) => {
                let mut c = Self::base(CommandKind::Mainterm).with_group(m.group);
                c.spectral_file = Some(m.spectral);
                c
            }
            Command::Verify(v) => {
                let mut c = Self::base(CommandKind::Verify);
                c.kernel_constant_scale = v.inject_kernel_scale;
                c.verify_draws = v.draws;
                c
            }
            Command::Volume(v) => {
                let mut c = Self::base(CommandKind::Volume);
                c.n = Some(v.n);
                c.t_grid = v.t_grid;
                c.tolerances.volume = v.tol;
                c
            }
        };
        cfg.format = cli.format;
        cfg.output = cli.output;
        cfg.workers = cli.workers;
        cfg.validate()?;
        Ok(cfg)
    }

    fn with_group(mut self, g: GroupArgs) -> Self {
        self.group_file = Some(g.group);
        self.t_grid = g.t_grid;
        self.z = g.z;
        self.z_prime = g.zp;
        self
    }

    /// A config for `command` with the given grid and defaults elsewhere.
    pub fn new(command: CommandKind, t_grid: Vec<f64>) -> Self {
        let mut c = Self::base(command);
        c.t_grid = t_grid;
        c
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let needs_grid = self.command != CommandKind::Verify;
        if needs_grid && self.t_grid.is_empty() {
            return Err(CliError::Usage("empty T grid".into()));
        }
        if self.t_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(CliError::Usage(format!("T values must be positive: {:?}", self.t_grid)));
        }
        if self.t_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage(format!("T grid must be strictly ascending: {:?}", self.t_grid)));
        }
        if !(self.alpha > 0.0 && self.alpha <= chlattice::average::MAX_ALPHA) {
            return Err(CliError::Usage(format!(
                "alpha must lie in (0, {}], got {}",
                chlattice::average::MAX_ALPHA,
                self.alpha
            )));
        }
        if self.workers == Some(0) {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        if self.command == CommandKind::Volume && self.n.unwrap_or(0) == 0 {
            return Err(CliError::Usage("--n must be at least 1".into()));
        }
        if !(self.tolerances.route > 0.0 && self.tolerances.volume > 0.0) {
            return Err(CliError::Usage("tolerances must be positive".into()));
        }
        self.tolerances.wave.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(())
    }
}

/// Parse `re,im,re,im,...` into a ball point of dimension `n`.
pub(crate) fn parse_point(flag: &str, raw: Option<&Vec<f64>>, n: usize) -> Result<BallPoint, CliError> {
    let Some(raw) = raw else {
        return Ok(BallPoint::origin(n));
    };
    if raw.len() != 2 * n {
        return Err(CliError::Usage(format!("--{flag} needs {} numbers for n = {n}, got {}", 2 * n, raw.len())));
    }
    let coords = raw.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
    BallPoint::new(coords).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

/// Run the configured command.
pub fn execute(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.command {
        CommandKind::Count => cmd_count(cfg),
        CommandKind::Average => cmd_average(cfg),
        CommandKind::Mainterm => cmd_mainterm(cfg),
        CommandKind::Verify => cmd_verify(cfg),
        CommandKind::Volume => cmd_volume(cfg),
    }
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

/// Parse, run, and write; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let outcome = RunConfig::from_cli(cli).and_then(|cfg| {
        let table = execute(&cfg)?;
        let text = render(&table, cfg.format);
        match &cfg.output {
            Some(path) => {
                std::fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })?
            }
            None => print!("{text}"),
        }
        Ok(table.pass)
    });
    match outcome {
        Ok(true) => EXIT_PASS,
        Ok(false) => {
            eprintln!("chlattice: a numerical contract failed; see the table");
            EXIT_NUMERICAL
        }
        Err(e) => {
            eprintln!("chlattice: {e}");
            e.exit_code()
        }
    }
}
