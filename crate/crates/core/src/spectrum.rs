//! Outcome distributions `P_c` after the (noisy) Fourier transform.
//!
//! Everything here evaluates
//!
//! ```text
//! P_c = (r / q^2) * | sum_j w_a (1 + d_j) exp(i (2 pi c / q + d'_j) a) |^2,   a = j r + l
//! ```
//!
//! over the `M` support values of the first register, either term by term or,
//! for a constant phase error, through the geometric-series closed form.
//! Values are left unnormalized unless [`Spectrum::normalized`] is called.

use std::fmt;

use num_complex::Complex;
use rayon::prelude::*;

use crate::errmodel::{sample_amplitude_errors, sample_phase_errors, ErrorModel};
use crate::error::{Error, Result};
use crate::numth::{popcount, ShorInstance};
use crate::scalar::Real;

/// Below this `|sin|` the closed-form denominator is treated as singular.
pub const SINGULAR_SINE_TOL: f64 = 1e-9;

/// Cap on the register width for dense per-`a` weight tables.
pub const MAX_WEIGHT_BITS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Noiseless,
    DirectSum,
    ClosedForm,
    Circuit,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Noiseless => "noiseless",
            Method::DirectSum => "direct",
            Method::ClosedForm => "closed_form",
            Method::Circuit => "circuit",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Relative outcome probabilities over `c in 0..q`, with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub values: Vec<T>,
    pub method: Method,
    pub normalized: bool,
    pub instance: ShorInstance,
    pub model: Option<ErrorModel<T>>,
    pub realization_seed: Option<u64>,
    /// Outcomes where the closed form hit a near-zero denominator and was
    /// evaluated by direct summation instead.
    pub singular_fallbacks: Vec<usize>,
}

impl<T: Real> Spectrum<T> {
    fn new(instance: &ShorInstance, values: Vec<T>, method: Method) -> Self {
        Self {
            values,
            method,
            normalized: false,
            instance: instance.clone(),
            model: None,
            realization_seed: None,
            singular_fallbacks: Vec::new(),
        }
    }

    pub fn q(&self) -> usize {
        self.values.len()
    }

    pub fn total(&self) -> T {
        self.values.iter().copied().sum()
    }

    /// Rescaled to unit sum. A zero spectrum is returned unchanged.
    pub fn normalized(mut self) -> Self {
        let total = self.total();
        if total > T::zero() {
            for v in &mut self.values {
                *v = *v / total;
            }
            self.normalized = true;
        }
        self
    }

    pub fn argmax(&self) -> usize {
        self.values
            .iter()
            .enumerate()
            .fold(
                (0, T::neg_infinity()),
                |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) },
            )
            .0
    }

    /// Total-variation distance between the two spectra after normalizing each.
    pub fn total_variation(&self, other: &Spectrum<T>) -> Result<T> {
        if self.q() != other.q() {
            return Err(Error::LengthMismatch {
                what: "spectrum",
                expected: self.q(),
                got: other.q(),
            });
        }
        Ok(total_variation(&self.values, &other.values))
    }
}

/// `0.5 * sum |p_c - q_c|` of the normalized inputs.
pub fn total_variation<T: Real>(p: &[T], q: &[T]) -> T {
    let sp: T = p.iter().copied().sum();
    let sq: T = q.iter().copied().sum();
    let half = T::of(0.5);
    half * p.iter().zip(q).map(|(&a, &b)| (a / sp - b / sq).abs()).sum::<T>()
}

/// `2 pi (c a mod q) / q`, reduced in integers before going to floating point.
#[inline]
fn dft_angle<T: Real>(c: u64, a: u64, q: u64) -> T {
    let k = ((c as u128 * a as u128) % q as u128) as u64;
    T::TAU() * T::of_u64(k) / T::of_u64(q)
}

struct Term<T> {
    a: u64,
    weight: T,
    phase_error: T,
}

fn intensity<T: Real>(c: u64, q: u64, terms: &[Term<T>]) -> T {
    let sum: Complex<T> = terms
        .iter()
        .map(|t| Complex::from_polar(t.weight, dft_angle::<T>(c, t.a, q) + t.phase_error * T::of_u64(t.a)))
        .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z);
    sum.norm_sqr()
}

fn prefactor<T: Real>(inst: &ShorInstance) -> T {
    let q = T::of_u64(inst.q());
    T::of_u64(inst.order()) / (q * q)
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::LengthMismatch { what, expected, got });
    }
    Ok(())
}

/// Error-free distribution: `1/r` at `c = k q / r` and zero elsewhere when `r | q`.
pub fn noiseless_spectrum<T: Real>(inst: &ShorInstance) -> Spectrum<T> {
    let m = inst.support_count() as usize;
    let zeros = vec![T::zero(); m];
    let mut spec = direct_spectrum(inst, &zeros, &zeros, None).expect("lengths match by construction");
    spec.method = Method::Noiseless;
    spec
}

/// Term-by-term evaluation with per-term phase errors `d'_j`, amplitude
/// errors `d_j` and optional preparation weights indexed by `a` (length `q`).
pub fn direct_spectrum<T: Real>(
    inst: &ShorInstance,
    phase_errors: &[T],
    amp_errors: &[T],
    init_weights: Option<&[T]>,
) -> Result<Spectrum<T>> {
    let m = inst.support_count() as usize;
    check_len("phase errors", m, phase_errors.len())?;
    check_len("amplitude errors", m, amp_errors.len())?;
    if let Some(w) = init_weights {
        check_len("initialization weights", inst.q() as usize, w.len())?;
    }
    let terms: Vec<Term<T>> = inst
        .support()
        .zip(phase_errors.iter().zip(amp_errors))
        .map(|(a, (&pe, &ae))| {
            let w = init_weights.map_or(T::one(), |w| w[a as usize]);
            Term {
                a,
                weight: w * (T::one() + ae),
                phase_error: pe,
            }
        })
        .collect();
    let q = inst.q();
    let scale = prefactor::<T>(inst);
    let values: Vec<T> = (0..q)
        .into_par_iter()
        .map(|c| scale * intensity(c, q, &terms))
        .collect();
    Ok(Spectrum::new(inst, values, Method::DirectSum))
}

/// Constant phase error `delta` on every term, summed in closed form:
///
/// `P_c = (r/q^2) sin^2(M x) / sin^2(x)`, `x = pi c r / q + delta r / 2`,
///
/// which is `(r/q^2) sin^2(delta q / 2) / sin^2(x)` when `M = q / r`.
/// Outcomes with `|sin x| < 1e-9` fall back to direct summation and are
/// listed in [`Spectrum::singular_fallbacks`].
pub fn systematic_spectrum_closed_form<T: Real>(inst: &ShorInstance, delta: T) -> Spectrum<T> {
    let q = inst.q();
    let r = inst.order();
    let m = inst.support_count();
    let scale = prefactor::<T>(inst);
    let half_shift = delta * T::of_u64(r) / T::of(2.0);
    let tol = T::of(SINGULAR_SINE_TOL);
    let fallback_terms: Vec<Term<T>> = inst
        .support()
        .map(|a| Term {
            a,
            weight: T::one(),
            phase_error: delta,
        })
        .collect();

    let evaluated: Vec<(T, bool)> = (0..q)
        .into_par_iter()
        .map(|c| {
            // sin^2 has period pi, so both angles are reduced mod q in integers.
            let cr = ((c as u128 * r as u128) % q as u128) as u64;
            let x = T::PI() * T::of_u64(cr) / T::of_u64(q) + half_shift;
            let den = x.sin();
            if den.abs() < tol {
                return (scale * intensity(c, q, &fallback_terms), true);
            }
            let mcr = ((m as u128 * cr as u128) % q as u128) as u64;
            let mx = T::PI() * T::of_u64(mcr) / T::of_u64(q) + T::of_u64(m) * half_shift;
            let num = mx.sin();
            (scale * (num * num) / (den * den), false)
        })
        .collect();

    let singular_fallbacks = evaluated
        .iter()
        .enumerate()
        .filter_map(|(c, &(_, fell_back))| fell_back.then_some(c))
        .collect();
    let mut spec = Spectrum::new(
        inst,
        evaluated.into_iter().map(|(v, _)| v).collect(),
        Method::ClosedForm,
    );
    spec.model = Some(ErrorModel::systematic(delta));
    spec.singular_fallbacks = singular_fallbacks;
    spec
}

/// Preparation weights `1 + delta (2 popcount(a) - n)` for `a in 0..2^n`.
pub fn init_error_weights<T: Real>(n_qubits: u32, delta: T) -> Result<Vec<T>> {
    if n_qubits == 0 || n_qubits > MAX_WEIGHT_BITS {
        return Err(Error::InvalidArgument(format!(
            "weight tables support 1..={MAX_WEIGHT_BITS} qubits, got {n_qubits}"
        )));
    }
    let n = n_qubits as i64;
    Ok((0..1u64 << n_qubits)
        .map(|a| T::one() + delta * T::of((2 * popcount(a) as i64 - n) as f64))
        .collect())
}

/// One quenched realization of `model`: samples phase and amplitude errors
/// (and preparation weights when `init_delta != 0`) and sums directly.
pub fn combined_spectrum<T: Real>(inst: &ShorInstance, model: &ErrorModel<T>, seed: u64) -> Result<Spectrum<T>> {
    model.validate()?;
    let m = inst.support_count() as usize;
    let phase = sample_phase_errors(model, m, seed)?;
    let amp = sample_amplitude_errors(model, m, seed)?;
    let weights = if model.init_delta != T::zero() {
        Some(init_error_weights(inst.register_bits(), model.init_delta)?)
    } else {
        None
    };
    let mut spec = direct_spectrum(inst, &phase, &amp, weights.as_deref())?;
    spec.model = Some(*model);
    spec.realization_seed = Some(seed);
    Ok(spec)
}
