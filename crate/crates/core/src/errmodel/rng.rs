//! xorshift64* generator with Box-Muller normals.
//!
//! The stream is fully specified so that seeded runs reproduce bit for bit on
//! any platform and in any other implementation of the same recurrence.

use crate::error::{Error, Result};

const MULTIPLIER: u64 = 0x2545_F491_4F6C_DD1D;

/// Replacement for a zero seed, which would lock xorshift at zero forever.
pub const ZERO_SEED_REPLACEMENT: u64 = 0x9E37_79B9_7F4A_7C15;

/// Generator state. `Copy`, so a snapshot is just an assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngState(u64);

impl RngState {
    /// Rejects the zero state.
    pub fn new(state: u64) -> Result<Self> {
        if state == 0 {
            return Err(Error::InvalidArgument("xorshift64* state must be nonzero".into()));
        }
        Ok(Self(state))
    }

    /// Accepts any seed; zero is remapped to [`ZERO_SEED_REPLACEMENT`].
    pub fn from_seed(seed: u64) -> Self {
        Self(if seed == 0 { ZERO_SEED_REPLACEMENT } else { seed })
    }

    pub fn state(&self) -> u64 {
        self.0
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(MULTIPLIER)
    }

    /// 53-bit uniform in `[0, 1)`.
    #[inline]
    pub fn uniform_01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal from two uniforms; the sine branch is discarded.
    pub fn gaussian(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform_01();
        let u2 = self.uniform_01();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform integer in `[0, bound)` by multiply-shift.
    pub fn below(&mut self, bound: u64) -> u64 {
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }
}

/// Derives an independent seed from `seed` and a stream label: the two are
/// XORed and pushed through one generator step.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    RngState::from_seed(seed ^ stream).next_u64()
}
