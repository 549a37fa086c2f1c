//! Monte Carlo ensembles, peak bookkeeping and error-threshold sweeps.

use rayon::prelude::*;

use crate::errmodel::{derive_seed, ErrorMode, ErrorModel};
use crate::error::{Error, Result};
use crate::numth::{recover_order, ShorInstance};
use crate::scalar::Real;
use crate::spectrum::{combined_spectrum, noiseless_spectrum, Spectrum};

/// Default fraction of the global maximum a local maximum must reach to count as a peak.
pub const DEFAULT_PEAK_FLOOR: f64 = 0.1;

/// Default success fraction defining the threshold.
pub const DEFAULT_ETA: f64 = 0.5;

const REALIZATION_STREAM: u64 = 0x5245_414c_495a_4154; // "REALIZAT"
const SWEEP_STREAM: u64 = 0x5357_4545_505f_4d41; // "SWEEP_MA"

/// Realizations are evaluated in parallel in blocks of this size and folded
/// into the running moments in index order.
const REALIZATION_BLOCK: usize = 64;

/// Seed of realization `index` under `master_seed`.
pub fn realization_seed(master_seed: u64, index: u64) -> u64 {
    derive_seed(master_seed, REALIZATION_STREAM.wrapping_add(index))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble<T> {
    pub mean: Spectrum<T>,
    /// Population standard deviation per outcome.
    pub std_dev: Vec<T>,
    pub requested_realizations: usize,
    /// Deterministic models are evaluated once regardless of the request.
    pub realizations: usize,
}

/// Mean and spread of `combined_spectrum` over independent quenched error draws.
pub fn ensemble_spectrum<T: Real>(
    inst: &ShorInstance,
    model: &ErrorModel<T>,
    n_realizations: usize,
    master_seed: u64,
) -> Result<Ensemble<T>> {
    if n_realizations == 0 {
        return Err(Error::InvalidArgument("need at least one realization".into()));
    }
    model.validate()?;
    let effective = if model.mode.is_random() { n_realizations } else { 1 };
    let q = inst.q() as usize;
    let mut mean = vec![T::zero(); q];
    let mut m2 = vec![T::zero(); q];
    let mut seen = 0usize;

    for block_start in (0..effective).step_by(REALIZATION_BLOCK) {
        let block_end = (block_start + REALIZATION_BLOCK).min(effective);
        let spectra: Vec<Spectrum<T>> = (block_start..block_end)
            .into_par_iter()
            .map(|i| combined_spectrum(inst, model, realization_seed(master_seed, i as u64)))
            .collect::<Result<_>>()?;
        // Welford, strictly in realization order.
        for s in spectra {
            seen += 1;
            let k = T::of_u64(seen as u64);
            for ((mu, acc), &x) in mean.iter_mut().zip(m2.iter_mut()).zip(&s.values) {
                let d = x - *mu;
                *mu = *mu + d / k;
                *acc = *acc + d * (x - *mu);
            }
        }
    }

    let n = T::of_u64(seen as u64);
    let std_dev = m2.iter().map(|&v| (v / n).max(T::zero()).sqrt()).collect();
    let mut mean_spec = combined_spectrum(inst, &ErrorModel::none(), master_seed)?;
    mean_spec.values = mean;
    mean_spec.model = Some(*model);
    mean_spec.realization_seed = Some(master_seed);
    Ok(Ensemble {
        mean: mean_spec,
        std_dev,
        requested_realizations: n_realizations,
        realizations: effective,
    })
}

/// Indices `c` with `v[c-1] < v[c] >= v[c+1]`, cyclically.
pub fn local_maxima<T: Real>(values: &[T]) -> Vec<usize> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![0];
    }
    (0..n)
        .filter(|&c| {
            let prev = values[(c + n - 1) % n];
            let next = values[(c + 1) % n];
            values[c] > prev && values[c] >= next
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak<T> {
    pub position: usize,
    pub height: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakReport<T> {
    pub peaks: Vec<Peak<T>>,
    /// `k q / r` for `k in 0..r`.
    pub reference_positions: Vec<f64>,
    /// Per peak: signed offset from the nearest reference, wrapped into `(-q/2, q/2]`.
    pub shifts: Vec<i64>,
}

impl<T> PeakReport<T> {
    pub fn positions(&self) -> Vec<usize> {
        self.peaks.iter().map(|p| p.position).collect()
    }
}

fn wrapped_offset(position: f64, reference: f64, q: f64) -> f64 {
    let d = (position - reference).rem_euclid(q);
    if d > q / 2.0 {
        d - q
    } else {
        d
    }
}

/// Local maxima at or above `height_floor_fraction * max P`, each matched to
/// its nearest ideal position.
pub fn peak_report<T: Real>(spec: &Spectrum<T>, height_floor_fraction: f64) -> Result<PeakReport<T>> {
    if !(height_floor_fraction > 0.0 && height_floor_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "peak floor fraction must lie in (0, 1], got {height_floor_fraction}"
        )));
    }
    let q = spec.q() as f64;
    let max = spec.values.iter().copied().fold(T::zero(), T::max);
    let floor = max * T::of(height_floor_fraction);
    let reference_positions = spec.instance.reference_positions();
    let peaks: Vec<Peak<T>> = local_maxima(&spec.values)
        .into_iter()
        .filter(|&c| max > T::zero() && spec.values[c] >= floor)
        .map(|c| Peak {
            position: c,
            height: spec.values[c],
        })
        .collect();
    let shifts = peaks
        .iter()
        .map(|p| {
            reference_positions
                .iter()
                .map(|&r| wrapped_offset(p.position as f64, r, q))
                .min_by(|a, b| a.abs().total_cmp(&b.abs()))
                .map_or(0, |d| d.round() as i64)
        })
        .collect();
    Ok(PeakReport {
        peaks,
        reference_positions,
        shifts,
    })
}

/// Which outcomes `c` recover the true order through [`recover_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryTable {
    hits: Vec<bool>,
    multiplier_bound: u64,
}

impl RecoveryTable {
    pub fn new(inst: &ShorInstance, multiplier_bound: u64) -> Result<Self> {
        let (n, y) = inst.target().ok_or(Error::NoFactoringTarget)?;
        let (q, r) = (inst.q(), inst.order());
        let hits = (0..q)
            .into_par_iter()
            .map(|c| recover_order(c, q, n, y, multiplier_bound).map(|found| found == Some(r)))
            .collect::<Result<_>>()?;
        Ok(Self { hits, multiplier_bound })
    }

    pub fn hits(&self) -> &[bool] {
        &self.hits
    }

    pub fn multiplier_bound(&self) -> u64 {
        self.multiplier_bound
    }

    /// Probability mass on recovering outcomes, after normalizing `spec`.
    pub fn success<T: Real>(&self, spec: &Spectrum<T>) -> Result<T> {
        if spec.q() != self.hits.len() {
            return Err(Error::LengthMismatch {
                what: "spectrum",
                expected: self.hits.len(),
                got: spec.q(),
            });
        }
        let total = spec.total();
        if total <= T::zero() {
            return Ok(T::zero());
        }
        let hit: T = spec
            .values
            .iter()
            .zip(&self.hits)
            .filter_map(|(&p, &h)| h.then_some(p))
            .sum();
        Ok((hit / total).min(T::one()))
    }
}

/// Chance that one measurement of `spec` leads back to the exact order.
pub fn success_probability<T: Real>(spec: &Spectrum<T>, inst: &ShorInstance, multiplier_bound: u64) -> Result<T> {
    RecoveryTable::new(inst, multiplier_bound)?.success(spec)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T> {
    pub mode: ErrorMode,
    pub magnitudes: Vec<T>,
    pub success_probs: Vec<T>,
    /// Success of the error-free spectrum.
    pub baseline: T,
    /// Largest magnitude such that it and every smaller grid point keep
    /// success `>= eta * baseline`.
    pub threshold: Option<T>,
    pub eta: T,
    pub requested_realizations: usize,
    pub realizations: usize,
}

/// Mean order-recovery success over a grid of error magnitudes.
///
/// The swept quantity follows `template.mode` (see
/// [`ErrorModel::with_magnitude`]); every other field of `template` is kept.
pub fn threshold_sweep<T: Real>(
    inst: &ShorInstance,
    template: &ErrorModel<T>,
    magnitudes: &[T],
    n_realizations: usize,
    eta: T,
    master_seed: u64,
    multiplier_bound: u64,
) -> Result<SweepResult<T>> {
    if magnitudes.is_empty() {
        return Err(Error::InvalidArgument("magnitude grid is empty".into()));
    }
    if magnitudes.iter().any(|m| !m.is_finite() || *m < T::zero()) {
        return Err(Error::InvalidArgument(
            "magnitudes must be finite and nonnegative".into(),
        ));
    }
    if magnitudes.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument("magnitudes must be ascending".into()));
    }
    if !(eta > T::zero() && eta <= T::one()) {
        return Err(Error::InvalidArgument("eta must lie in (0, 1]".into()));
    }
    if n_realizations == 0 {
        return Err(Error::InvalidArgument("need at least one realization".into()));
    }
    template.validate()?;

    let table = RecoveryTable::new(inst, multiplier_bound)?;
    let baseline = table.success(&noiseless_spectrum::<T>(inst))?;
    let effective = if template.mode.is_random() { n_realizations } else { 1 };

    let mut success_probs = Vec::with_capacity(magnitudes.len());
    for (i, &m) in magnitudes.iter().enumerate() {
        let model = template.with_magnitude(m);
        let sweep_seed = derive_seed(master_seed, SWEEP_STREAM.wrapping_add(i as u64));
        let per_run: Vec<T> = (0..effective)
            .into_par_iter()
            .map(|k| {
                let spec = combined_spectrum(inst, &model, realization_seed(sweep_seed, k as u64))?;
                table.success(&spec)
            })
            .collect::<Result<_>>()?;
        let mean = per_run.iter().copied().sum::<T>() / T::of_u64(effective as u64);
        success_probs.push(mean);
    }

    let threshold = if baseline > T::zero() {
        let cut = eta * baseline;
        magnitudes
            .iter()
            .zip(&success_probs)
            .take_while(|(_, &s)| s >= cut)
            .last()
            .map(|(&m, _)| m)
    } else {
        None
    };

    Ok(SweepResult {
        mode: template.mode,
        magnitudes: magnitudes.to_vec(),
        success_probs,
        baseline,
        threshold,
        eta,
        requested_realizations: n_realizations,
        realizations: effective,
    })
}
