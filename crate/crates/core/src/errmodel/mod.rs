//! Gate-error models and their seeded samplers.

mod rng;

pub use rng::{derive_seed, RngState, ZERO_SEED_REPLACEMENT};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Stream labels mixed into the caller's seed so phase and amplitude draws
/// never share a stream.
pub const PHASE_STREAM: u64 = 0x5048_4153_455f_4552; // "PHASE_ER"
pub const AMPLITUDE_STREAM: u64 = 0x414d_504c_5f45_5252; // "AMPL_ERR"

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorMode {
    None,
    Systematic,
    Uniform,
    Gaussian,
}

impl ErrorMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorMode::None => "none",
            ErrorMode::Systematic => "systematic",
            ErrorMode::Uniform => "uniform",
            ErrorMode::Gaussian => "gaussian",
        }
    }

    /// Whether two draws from the model can differ.
    pub fn is_random(&self) -> bool {
        matches!(self, ErrorMode::Uniform | ErrorMode::Gaussian)
    }
}

impl fmt::Display for ErrorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ErrorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(ErrorMode::None),
            "systematic" => Ok(ErrorMode::Systematic),
            "uniform" => Ok(ErrorMode::Uniform),
            "gaussian" => Ok(ErrorMode::Gaussian),
            other => Err(Error::InvalidModel(format!("unknown error mode '{other}'"))),
        }
    }
}

/// Gate-error model. All magnitudes are in radians.
///
/// A random mode with a nonzero `delta0` is the combined systematic plus
/// random case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel<T> {
    pub mode: ErrorMode,
    /// Systematic offset every sample is centred on.
    pub delta0: T,
    /// Half-width of the uniform spread.
    pub s_max: T,
    /// Standard deviation of the Gaussian spread.
    pub sigma0: T,
    /// Generate the `(1 + delta_j)` amplitude factors as well as phase errors.
    pub include_amplitude_errors: bool,
    /// Preparation rotation error feeding the `1 + delta (2s - n)` weights; zero disables.
    pub init_delta: T,
}

impl<T: Real> Default for ErrorModel<T> {
    fn default() -> Self {
        Self::none()
    }
}

impl<T: Real> ErrorModel<T> {
    pub fn none() -> Self {
        Self {
            mode: ErrorMode::None,
            delta0: T::zero(),
            s_max: T::zero(),
            sigma0: T::zero(),
            include_amplitude_errors: false,
            init_delta: T::zero(),
        }
    }

    pub fn systematic(delta0: T) -> Self {
        Self {
            mode: ErrorMode::Systematic,
            delta0,
            ..Self::none()
        }
    }

    pub fn uniform(delta0: T, s_max: T) -> Self {
        Self {
            mode: ErrorMode::Uniform,
            delta0,
            s_max,
            ..Self::none()
        }
    }

    pub fn gaussian(delta0: T, sigma0: T) -> Self {
        Self {
            mode: ErrorMode::Gaussian,
            delta0,
            sigma0,
            ..Self::none()
        }
    }

    pub fn with_amplitude_errors(mut self, on: bool) -> Self {
        self.include_amplitude_errors = on;
        self
    }

    pub fn with_init_delta(mut self, init_delta: T) -> Self {
        self.init_delta = init_delta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("delta0", self.delta0),
            ("s_max", self.s_max),
            ("sigma0", self.sigma0),
            ("init_delta", self.init_delta),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidModel(format!("{name} must be finite")));
            }
        }
        if self.s_max < T::zero() {
            return Err(Error::InvalidModel("s_max must be nonnegative".into()));
        }
        if self.sigma0 < T::zero() {
            return Err(Error::InvalidModel("sigma0 must be nonnegative".into()));
        }
        Ok(())
    }

    /// Copy of the model with its mode's characteristic magnitude set to `m`:
    /// `delta0` for systematic, `s_max` for uniform, `sigma0` for Gaussian.
    pub fn with_magnitude(&self, m: T) -> Self {
        let mut out = *self;
        match self.mode {
            ErrorMode::None => {}
            ErrorMode::Systematic => out.delta0 = m,
            ErrorMode::Uniform => out.s_max = m,
            ErrorMode::Gaussian => out.sigma0 = m,
        }
        out
    }

    /// Compact `key=value` description used in metadata sidecars.
    pub fn describe(&self) -> String {
        format!(
            "{} delta0={} s_max={} sigma0={} amplitude_errors={} init_delta={}",
            self.mode, self.delta0, self.s_max, self.sigma0, self.include_amplitude_errors, self.init_delta
        )
    }

    fn draw(&self, count: usize, stream_seed: u64) -> Result<Vec<T>> {
        if count == 0 {
            return Err(Error::InvalidArgument("sample count must be positive".into()));
        }
        self.validate()?;
        let mut rng = RngState::from_seed(stream_seed);
        let out = match self.mode {
            ErrorMode::None => vec![T::zero(); count],
            ErrorMode::Systematic => vec![self.delta0; count],
            ErrorMode::Uniform => (0..count)
                .map(|_| self.delta0 + T::of(2.0 * rng.uniform_01() - 1.0) * self.s_max)
                .collect(),
            ErrorMode::Gaussian => (0..count)
                .map(|_| self.delta0 + self.sigma0 * T::of(rng.gaussian()))
                .collect(),
        };
        Ok(out)
    }
}

/// Phase errors `delta'_j`, one per term, drawn on the phase stream of `seed`.
pub fn sample_phase_errors<T: Real>(model: &ErrorModel<T>, count: usize, seed: u64) -> Result<Vec<T>> {
    model.draw(count, derive_seed(seed, PHASE_STREAM))
}

/// Amplitude errors `delta_j`; all zero unless the model enables them.
pub fn sample_amplitude_errors<T: Real>(model: &ErrorModel<T>, count: usize, seed: u64) -> Result<Vec<T>> {
    if !model.include_amplitude_errors {
        if count == 0 {
            return Err(Error::InvalidArgument("sample count must be positive".into()));
        }
        return Ok(vec![T::zero(); count]);
    }
    model.draw(count, derive_seed(seed, AMPLITUDE_STREAM))
}
