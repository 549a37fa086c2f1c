use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shor_noise::experiment::{DEFAULT_ETA, DEFAULT_PEAK_FLOOR};
use shor_noise::numth::DEFAULT_MULTIPLIER_BOUND;
use shor_noise::qcircuit::MAX_QUBITS;
use shor_noise::{ErrorMode, ErrorModel64, ShorInstance};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    /// Usage errors and `--help`/`--version` requests, rendered by clap.
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "shor-noise", version, about = "Shor order finding with imperfect gates")]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Outcome distribution from the effective error model (direct sum or closed form).
    Spectrum(Flags),
    /// Outcome distribution from the gate-level noisy QFT.
    Circuit(Flags),
    /// Mean and standard deviation over random error realizations.
    Ensemble(Flags),
    /// Order-recovery success over a grid of error magnitudes.
    Sweep(Flags),
    /// Full pipeline: measure, recover the order, split N.
    Factor(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    None,
    Systematic,
    Uniform,
    Gaussian,
}

impl From<ModeArg> for ErrorMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::None => ErrorMode::None,
            ModeArg::Systematic => ErrorMode::Systematic,
            ModeArg::Uniform => ErrorMode::Uniform,
            ModeArg::Gaussian => ErrorMode::Gaussian,
        }
    }
}

/// How `spectrum` evaluates the distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpectrumMethod {
    /// Noiseless sum for `--model none`, direct summation otherwise.
    Auto,
    Direct,
    /// Closed form; systematic model only.
    Closed,
}

#[derive(Debug, Args)]
struct Flags {
    /// Number to factor.
    #[arg(long = "N")]
    n: Option<u64>,
    /// Base of the modular exponentiation, coprime to N.
    #[arg(long = "y")]
    y: Option<u64>,
    /// First-register qubits (derived from N when omitted).
    #[arg(long = "L")]
    l_bits: Option<u32>,
    /// Order for synthetic instances.
    #[arg(long = "r")]
    r: Option<u64>,
    /// Offset fixed by the second-register measurement.
    #[arg(long = "l", default_value_t = 0)]
    offset: u64,

    #[arg(long, value_enum, default_value = "none")]
    model: ModeArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    delta0: f64,
    #[arg(long = "smax", alias = "s-max", default_value_t = 0.0)]
    s_max: f64,
    #[arg(long = "sigma", default_value_t = 0.0)]
    sigma: f64,
    #[arg(long)]
    amplitude_errors: bool,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    init_delta: f64,

    /// Decimal or 0x-prefixed hexadecimal.
    #[arg(long, default_value = "42", value_parser = parse_seed)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    realizations: usize,
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ETA)]
    eta: f64,
    #[arg(long, default_value_t = DEFAULT_MULTIPLIER_BOUND)]
    multiplier_bound: u64,
    /// `start:stop:step` (inclusive) or a comma-separated list.
    #[arg(long)]
    magnitudes: Option<String>,
    #[arg(long, default_value_t = 100)]
    shots: usize,
    #[arg(long, value_enum, default_value = "auto")]
    method: SpectrumMethod,
    /// Peak height floor as a fraction of the maximum.
    #[arg(long, default_value_t = DEFAULT_PEAK_FLOOR)]
    peak_floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    Circuit,
    Ensemble,
    Sweep,
    Factor,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Circuit => "circuit",
            Command::Ensemble => "ensemble",
            Command::Sweep => "sweep",
            Command::Factor => "factor",
        }
    }
}

/// Fully validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub instance: ShorInstance,
    pub model: ErrorModel64,
    pub seed: u64,
    pub realizations: usize,
    pub normalize: bool,
    pub out: Option<PathBuf>,
    pub eta: f64,
    pub multiplier_bound: u64,
    pub magnitudes: Vec<f64>,
    pub shots: usize,
    pub method: SpectrumMethod,
    pub peak_floor: f64,
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed '{s}': {e}"))
}

/// Parses `start:stop:step` or `a,b,c`.
pub fn parse_magnitudes(s: &str) -> Result<Vec<f64>, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad magnitude '{t}'"));
    let values = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range '{s}' must be start:stop:step"));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(format!("range '{s}' needs step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // Snap to 12 decimals so 0.005 * 3 prints as 0.015.
        (0..count)
            .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
            .collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if values.is_empty() {
        return Err("empty magnitude grid".into());
    }
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err("magnitudes must be finite and nonnegative".into());
    }
    if values.windows(2).any(|w| w[1] < w[0]) {
        return Err("magnitudes must be ascending".into());
    }
    Ok(values)
}

fn build_instance(f: &Flags) -> Result<ShorInstance, ConfigError> {
    let inst = match (f.n, f.y) {
        (Some(n), Some(y)) => {
            if f.r.is_some() {
                return Err(invalid("--r conflicts with --N/--y (the order is derived)"));
            }
            match f.l_bits {
                Some(bits) => ShorInstance::with_register_bits(n, y, bits),
                None => ShorInstance::from_factoring(n, y),
            }
            .map_err(|e| invalid(e.to_string()))?
        }
        (Some(_), None) | (None, Some(_)) => return Err(invalid("--N and --y must be given together")),
        (None, None) => {
            let (Some(bits), Some(r)) = (f.l_bits, f.r) else {
                return Err(invalid("give either --N and --y, or --L and --r"));
            };
            ShorInstance::synthetic(bits, r, 0).map_err(|e| invalid(e.to_string()))?
        }
    };
    inst.with_offset(f.offset).map_err(|e| invalid(e.to_string()))
}

fn build_model(f: &Flags) -> Result<ErrorModel64, ConfigError> {
    let model = ErrorModel64 {
        mode: f.model.into(),
        delta0: f.delta0,
        s_max: f.s_max,
        sigma0: f.sigma,
        include_amplitude_errors: f.amplitude_errors,
        init_delta: f.init_delta,
    };
    model.validate().map_err(|e| invalid(e.to_string()))?;
    Ok(model)
}

/// Parses a full argument vector (program name first).
pub fn parse_config<I, S>(argv: I) -> Result<RunConfig, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let (command, f) = match cli.command {
        CommandArgs::Spectrum(f) => (Command::Spectrum, f),
        CommandArgs::Circuit(f) => (Command::Circuit, f),
        CommandArgs::Ensemble(f) => (Command::Ensemble, f),
        CommandArgs::Sweep(f) => (Command::Sweep, f),
        CommandArgs::Factor(f) => (Command::Factor, f),
    };
    let instance = build_instance(&f)?;
    let model = build_model(&f)?;

    if f.realizations == 0 {
        return Err(invalid("--realizations must be positive"));
    }
    if f.multiplier_bound == 0 {
        return Err(invalid("--multiplier-bound must be positive"));
    }
    if !(f.eta > 0.0 && f.eta <= 1.0) {
        return Err(invalid("--eta must lie in (0, 1]"));
    }
    if !(f.peak_floor > 0.0 && f.peak_floor <= 1.0) {
        return Err(invalid("--peak-floor must lie in (0, 1]"));
    }
    let needs_target = matches!(command, Command::Sweep | Command::Factor);
    if needs_target && instance.target().is_none() {
        return Err(invalid(format!("{} needs --N and --y", command.as_str())));
    }
    if matches!(command, Command::Circuit | Command::Factor) && instance.register_bits() > MAX_QUBITS {
        return Err(invalid(format!("circuit simulation is capped at {MAX_QUBITS} qubits")));
    }
    if command == Command::Spectrum && f.method == SpectrumMethod::Closed && model.mode != ErrorMode::Systematic {
        return Err(invalid("--method closed needs --model systematic"));
    }
    if command == Command::Factor && f.shots == 0 {
        return Err(invalid("--shots must be positive"));
    }
    let magnitudes = match (&f.magnitudes, command) {
        (Some(s), _) => parse_magnitudes(s).map_err(invalid)?,
        (None, Command::Sweep) => return Err(invalid("sweep needs --magnitudes")),
        (None, _) => Vec::new(),
    };
    if command == Command::Sweep && model.mode == ErrorMode::None {
        return Err(invalid("sweep needs --model systematic, uniform or gaussian"));
    }

    Ok(RunConfig {
        command,
        instance,
        model,
        seed: f.seed,
        realizations: f.realizations,
        normalize: f.normalize,
        out: f.out,
        eta: f.eta,
        multiplier_bound: f.multiplier_bound,
        magnitudes,
        shots: f.shots,
        method: f.method,
        peak_floor: f.peak_floor,
    })
}
