//! Gate-level state-vector simulation of the noisy Fourier transform.
//!
//! Qubit `j` is bit `L - 1 - j` of the basis index, so qubit 0 is the most
//! significant bit of the register value `a`. With that convention the
//! sequence `A_0, B_01 .. B_0(L-1), A_1, B_12, .., A_(L-1)` followed by a
//! bit reversal is exactly the DFT `F[c, a] = q^(-1/2) exp(2 pi i c a / q)`.

use num_complex::Complex;
use rayon::prelude::*;

use crate::errmodel::{derive_seed, sample_phase_errors, ErrorModel, RngState};
use crate::error::{Error, Result};
use crate::numth::ShorInstance;
use crate::scalar::Real;
use crate::spectrum::{init_error_weights, Method, Spectrum};

/// Largest register the simulator will allocate (2^24 amplitudes).
pub const MAX_QUBITS: u32 = 24;

/// Allowed `| |psi|^2 - 1 |` before measurement refuses a state.
pub const MEASURE_NORM_TOL: f64 = 1e-6;

const PAR_THRESHOLD: usize = 1 << 14;

const HADAMARD_STREAM: u64 = 0x4841_4441_4d41_5244; // "HADAMARD"
const CPHASE_STREAM: u64 = 0x4350_4841_5345_5f5f; // "CPHASE__"

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: u32,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0...0>`.
    pub fn zero(n_qubits: u32) -> Result<Self> {
        Self::check_width(n_qubits)?;
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); 1 << n_qubits];
        amplitudes[0] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn basis(n_qubits: u32, index: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        if index >= s.amplitudes.len() {
            return Err(Error::InvalidArgument(format!("basis index {index} out of range")));
        }
        s.amplitudes[0] = Complex::new(T::zero(), T::zero());
        s.amplitudes[index] = Complex::new(T::one(), T::zero());
        Ok(s)
    }

    /// Wraps raw amplitudes; the length must be a power of two. No
    /// normalization is applied.
    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        let n_qubits = len.trailing_zeros();
        Self::check_width(n_qubits)?;
        Ok(Self { n_qubits, amplitudes })
    }

    fn check_width(n_qubits: u32) -> Result<()> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex<T>> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    fn bit_of(&self, qubit: usize) -> Result<usize> {
        let n = self.n_qubits as usize;
        if qubit >= n {
            return Err(Error::QubitOutOfRange { qubit, n_qubits: n });
        }
        Ok(n - 1 - qubit)
    }

    /// Walsh-Hadamard gate miscalibrated by `delta`.
    ///
    /// Applies `A(delta) Z` where `A(delta)` is the y-rotation by `pi/2 + 2 delta`,
    /// `(1/sqrt 2) [[cos d - sin d, -(sin d + cos d)], [sin d + cos d, cos d - sin d]]`.
    /// At `delta = 0` this is exactly `H`; on `|0>` it acts as `A(delta)`.
    pub fn apply_hadamard_noisy(&mut self, qubit: usize, delta: T) -> Result<()> {
        let bit = self.bit_of(qubit)?;
        let inv_sqrt2 = T::FRAC_1_SQRT_2();
        let (s, c) = delta.sin_cos();
        let diag = (c - s) * inv_sqrt2;
        let off = (s + c) * inv_sqrt2;
        let stride = 1usize << bit;
        let kernel = |block: &mut [Complex<T>]| {
            let (lo, hi) = block.split_at_mut(stride);
            for (x0, x1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a0, a1) = (*x0, *x1);
                *x0 = a0 * diag + a1 * off;
                *x1 = a0 * off - a1 * diag;
            }
        };
        if self.amplitudes.len() >= PAR_THRESHOLD {
            self.amplitudes.par_chunks_exact_mut(2 * stride).for_each(kernel);
        } else {
            self.amplitudes.chunks_exact_mut(2 * stride).for_each(kernel);
        }
        Ok(())
    }

    /// Controlled rotation: multiplies `|..1..1..>` components by `exp(i (theta + delta))`.
    pub fn apply_controlled_phase_noisy(&mut self, control: usize, target: usize, theta: T, delta: T) -> Result<()> {
        if control == target {
            return Err(Error::InvalidArgument(format!(
                "control and target are both qubit {control}"
            )));
        }
        let mask = (1usize << self.bit_of(control)?) | (1usize << self.bit_of(target)?);
        let phase = Complex::from_polar(T::one(), theta + delta);
        let kernel = |(i, z): (usize, &mut Complex<T>)| {
            if i & mask == mask {
                *z = *z * phase;
            }
        };
        if self.amplitudes.len() >= PAR_THRESHOLD {
            self.amplitudes.par_iter_mut().enumerate().for_each(kernel);
        } else {
            self.amplitudes.iter_mut().enumerate().for_each(kernel);
        }
        Ok(())
    }

    pub fn reverse_bits(&mut self) {
        let n = self.n_qubits;
        for i in 0..self.amplitudes.len() {
            let j = i.reverse_bits() >> (usize::BITS - n);
            if i < j {
                self.amplitudes.swap(i, j);
            }
        }
    }

    /// Samples an outcome by inverse CDF over one uniform draw.
    pub fn measure_all(&self, rng: &mut RngState) -> Result<usize> {
        let u = rng.uniform_01();
        self.measure_with_uniform(u)
    }

    /// Inverse-CDF lookup for a given `u in [0, 1)`.
    pub fn measure_with_uniform(&self, u: f64) -> Result<usize> {
        let norm = self.norm_sqr().as_f64();
        if (norm - 1.0).abs() > MEASURE_NORM_TOL {
            return Err(Error::Unnormalized(norm));
        }
        let target = u * norm;
        let mut cumulative = 0.0;
        let mut last_nonzero = 0;
        for (c, z) in self.amplitudes.iter().enumerate() {
            let p = z.norm_sqr().as_f64();
            if p > 0.0 {
                last_nonzero = c;
            }
            cumulative += p;
            if target < cumulative {
                return Ok(c);
            }
        }
        Ok(last_nonzero)
    }
}

/// Per-gate errors for one Fourier transform.
#[derive(Debug, Clone, PartialEq)]
pub struct GateErrorPlan<T> {
    /// One entry per qubit, for `A_j`.
    pub hadamard_deltas: Vec<T>,
    /// One entry per pair `j < k` in lexicographic order, for `B_jk`.
    pub phase_deltas: Vec<T>,
    pub seed: u64,
}

impl<T: Real> GateErrorPlan<T> {
    pub fn ideal(n_qubits: u32) -> Self {
        let n = n_qubits as usize;
        Self {
            hadamard_deltas: vec![T::zero(); n],
            phase_deltas: vec![T::zero(); n * n.saturating_sub(1) / 2],
            seed: 0,
        }
    }

    /// Every gate carries the same error `delta`.
    pub fn uniform_delta(n_qubits: u32, delta: T) -> Self {
        let mut plan = Self::ideal(n_qubits);
        plan.hadamard_deltas.iter_mut().for_each(|d| *d = delta);
        plan.phase_deltas.iter_mut().for_each(|d| *d = delta);
        plan
    }

    /// One draw per gate from `model`, on streams derived from `seed`.
    pub fn sample(model: &ErrorModel<T>, n_qubits: u32, seed: u64) -> Result<Self> {
        let n = n_qubits as usize;
        let pairs = n * n.saturating_sub(1) / 2;
        let hadamard_deltas = sample_phase_errors(model, n, derive_seed(seed, HADAMARD_STREAM))?;
        let phase_deltas = if pairs == 0 {
            Vec::new()
        } else {
            sample_phase_errors(model, pairs, derive_seed(seed, CPHASE_STREAM))?
        };
        Ok(Self {
            hadamard_deltas,
            phase_deltas,
            seed,
        })
    }

    fn check(&self, n_qubits: u32) -> Result<()> {
        let n = n_qubits as usize;
        if self.hadamard_deltas.len() != n {
            return Err(Error::LengthMismatch {
                what: "hadamard deltas",
                expected: n,
                got: self.hadamard_deltas.len(),
            });
        }
        let pairs = n * (n - 1) / 2;
        if self.phase_deltas.len() != pairs {
            return Err(Error::LengthMismatch {
                what: "controlled-phase deltas",
                expected: pairs,
                got: self.phase_deltas.len(),
            });
        }
        Ok(())
    }
}

/// Gates applied by one [`qft_noisy`] call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GateTally {
    pub hadamards: usize,
    pub controlled_phases: usize,
}

/// Noisy QFT: `A_j` then `B_jk` (`theta = pi / 2^(k-j)`) for `k > j`, qubit by
/// qubit, then bit reversal.
pub fn qft_noisy<T: Real>(state: &mut StateVector<T>, plan: &GateErrorPlan<T>) -> Result<GateTally> {
    let n = state.n_qubits() as usize;
    plan.check(state.n_qubits())?;
    let mut tally = GateTally::default();
    let mut pair = 0;
    for j in 0..n {
        state.apply_hadamard_noisy(j, plan.hadamard_deltas[j])?;
        tally.hadamards += 1;
        for k in j + 1..n {
            let theta = T::PI() / T::of((1u64 << (k - j)) as f64);
            state.apply_controlled_phase_noisy(j, k, theta, plan.phase_deltas[pair])?;
            pair += 1;
            tally.controlled_phases += 1;
        }
    }
    state.reverse_bits();
    Ok(tally)
}

/// First register after the second-register measurement has fixed `l`:
/// amplitudes proportional to `w_a` on `a = j r + l`, normalized.
pub fn prepare_period_state<T: Real>(inst: &ShorInstance, init_delta: T) -> Result<StateVector<T>> {
    let bits = inst.register_bits();
    if bits > MAX_QUBITS {
        return Err(Error::TooManyQubits(bits));
    }
    let mut state = StateVector::zero(bits)?;
    state.amplitudes[0] = Complex::new(T::zero(), T::zero());
    let weights = if init_delta != T::zero() {
        Some(init_error_weights(bits, init_delta)?)
    } else {
        None
    };
    for a in inst.support() {
        let w = weights.as_ref().map_or(T::one(), |w| w[a as usize]);
        state.amplitudes[a as usize] = Complex::new(w, T::zero());
    }
    let norm = state.norm_sqr().sqrt();
    if norm == T::zero() {
        return Err(Error::InvalidArgument(
            "preparation weights vanish on the support".into(),
        ));
    }
    for z in &mut state.amplitudes {
        *z = *z / norm;
    }
    Ok(state)
}

/// Outcome distribution of the full gate-level pipeline for one error draw.
pub fn circuit_spectrum<T: Real>(inst: &ShorInstance, model: &ErrorModel<T>, seed: u64) -> Result<Spectrum<T>> {
    model.validate()?;
    let mut state = prepare_period_state(inst, model.init_delta)?;
    let plan = GateErrorPlan::sample(model, inst.register_bits(), seed)?;
    qft_noisy(&mut state, &plan)?;
    Ok(Spectrum {
        values: state.probabilities(),
        method: Method::Circuit,
        normalized: true,
        instance: inst.clone(),
        model: Some(*model),
        realization_seed: Some(seed),
        singular_fallbacks: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    type C = Complex<f64>;

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn hadamard_examples() {
        let mut s = StateVector::<f64>::zero(1).unwrap();
        s.apply_hadamard_noisy(0, 0.0).unwrap();
        assert!(close(s.amplitudes()[0], C::new(FRAC_1_SQRT_2, 0.0), 1e-15));
        assert!(close(s.amplitudes()[1], C::new(FRAC_1_SQRT_2, 0.0), 1e-15));

        let mut s = StateVector::<f64>::zero(1).unwrap();
        s.apply_hadamard_noisy(0, PI / 4.0).unwrap();
        assert!(close(s.amplitudes()[0], C::new(0.0, 0.0), 1e-15));
        assert!(close(s.amplitudes()[1], C::new(1.0, 0.0), 1e-15));

        // Exactly H at zero error, including on |1>.
        let mut s = StateVector::<f64>::basis(1, 1).unwrap();
        s.apply_hadamard_noisy(0, 0.0).unwrap();
        assert!(close(s.amplitudes()[1], C::new(-FRAC_1_SQRT_2, 0.0), 1e-15));

        assert!(matches!(
            s.apply_hadamard_noisy(1, 0.0),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn hadamard_on_zero_matches_rotation_column() {
        let d = 0.173;
        let mut s = StateVector::<f64>::zero(1).unwrap();
        s.apply_hadamard_noisy(0, d).unwrap();
        assert!(close(
            s.amplitudes()[0],
            C::new((d.cos() - d.sin()) * FRAC_1_SQRT_2, 0.0),
            1e-15
        ));
        assert!(close(
            s.amplitudes()[1],
            C::new((d.sin() + d.cos()) * FRAC_1_SQRT_2, 0.0),
            1e-15
        ));
    }

    #[test]
    fn controlled_phase_examples() {
        let mut s = StateVector::<f64>::basis(2, 3).unwrap();
        s.apply_controlled_phase_noisy(0, 1, PI, 0.0).unwrap();
        assert!(close(s.amplitudes()[3], C::new(-1.0, 0.0), 1e-15));

        let mut s = StateVector::<f64>::zero(2).unwrap();
        s.apply_controlled_phase_noisy(0, 1, 0.7, 0.3).unwrap();
        assert_eq!(s.amplitudes()[0], C::new(1.0, 0.0));

        let mut s = StateVector::<f64>::basis(2, 3).unwrap();
        s.apply_controlled_phase_noisy(1, 0, PI / 2.0, 0.1).unwrap();
        let expect = C::from_polar(1.0, 1.670_796_326_794_896_6);
        assert!(close(s.amplitudes()[3], expect, 1e-15));

        assert!(s.apply_controlled_phase_noisy(1, 1, 0.0, 0.0).is_err());
    }

    fn dft(input: &[C]) -> Vec<C> {
        let q = input.len();
        let scale = 1.0 / (q as f64).sqrt();
        (0..q)
            .map(|c| {
                input
                    .iter()
                    .enumerate()
                    .map(|(a, &x)| x * C::from_polar(scale, 2.0 * PI * ((c * a) % q) as f64 / q as f64))
                    .sum()
            })
            .collect()
    }

    fn random_state(bits: u32, rng: &mut RngState) -> StateVector<f64> {
        let amps: Vec<C> = (0..1usize << bits)
            .map(|_| C::new(rng.gaussian(), rng.gaussian()))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        StateVector::from_amplitudes(amps.into_iter().map(|z| z / norm).collect()).unwrap()
    }

    #[test]
    fn qft_of_constant_and_pure_frequency() {
        let mut s = StateVector::<f64>::zero(3).unwrap();
        for q in 0..3 {
            s.apply_hadamard_noisy(q, 0.0).unwrap();
        }
        qft_noisy(&mut s, &GateErrorPlan::ideal(3)).unwrap();
        assert!(close(s.amplitudes()[0], C::new(1.0, 0.0), 1e-12));

        let amps: Vec<C> = (0..8)
            .map(|a| C::from_polar(1.0 / 8f64.sqrt(), -2.0 * PI * (a * 5) as f64 / 8.0))
            .collect();
        let mut s = StateVector::from_amplitudes(amps).unwrap();
        qft_noisy(&mut s, &GateErrorPlan::ideal(3)).unwrap();
        // F[c, a] carries exp(+2 pi i c a / q): exp(-2 pi i 5 a / 8) lands on |5>.
        assert!(close(s.amplitudes()[5], C::new(1.0, 0.0), 1e-12));

        let amps: Vec<C> = (0..8)
            .map(|a| C::from_polar(1.0 / 8f64.sqrt(), 2.0 * PI * (a * 5) as f64 / 8.0))
            .collect();
        let mut s = StateVector::from_amplitudes(amps.clone()).unwrap();
        qft_noisy(&mut s, &GateErrorPlan::ideal(3)).unwrap();
        assert!(close(s.amplitudes()[3], C::new(1.0, 0.0), 1e-12));
        let oracle = dft(&amps);
        for (a, b) in s.amplitudes().iter().zip(&oracle) {
            assert!(close(*a, *b, 1e-12));
        }
    }

    #[test]
    fn ideal_qft_is_dft_on_basis_states() {
        for bits in 1..=7u32 {
            let q = 1usize << bits;
            for a in 0..q {
                let mut s = StateVector::<f64>::basis(bits, a).unwrap();
                qft_noisy(&mut s, &GateErrorPlan::ideal(bits)).unwrap();
                for (c, z) in s.amplitudes().iter().enumerate() {
                    let expect = C::from_polar(1.0 / (q as f64).sqrt(), 2.0 * PI * ((c * a) % q) as f64 / q as f64);
                    assert!(close(*z, expect, 1e-12), "bits={bits} a={a} c={c}");
                }
            }
        }
    }

    #[test]
    fn ideal_qft_is_dft_on_random_states() {
        let mut rng = RngState::from_seed(77);
        for bits in [8u32, 10, 12] {
            let s0 = random_state(bits, &mut rng);
            let oracle = dft(s0.amplitudes());
            let mut s = s0.clone();
            qft_noisy(&mut s, &GateErrorPlan::ideal(bits)).unwrap();
            let err = s
                .amplitudes()
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10, "bits={bits} err={err}");
        }
    }

    #[test]
    fn gate_counts() {
        for bits in 1..=9u32 {
            let mut s = StateVector::<f64>::zero(bits).unwrap();
            let t = qft_noisy(&mut s, &GateErrorPlan::ideal(bits)).unwrap();
            assert_eq!(t.hadamards, bits as usize);
            assert_eq!(t.controlled_phases, (bits * (bits - 1) / 2) as usize);
        }
    }

    #[test]
    fn malformed_plan_rejected() {
        let mut s = StateVector::<f64>::zero(3).unwrap();
        let mut plan = GateErrorPlan::ideal(3);
        plan.phase_deltas.pop();
        assert!(qft_noisy(&mut s, &plan).is_err());
        let plan = GateErrorPlan::<f64>::ideal(4);
        assert!(qft_noisy(&mut s, &plan).is_err());
    }

    #[test]
    fn plan_sampling() {
        let plan = GateErrorPlan::sample(&ErrorModel::<f64>::systematic(0.01), 5, 1).unwrap();
        assert_eq!(plan.hadamard_deltas, vec![0.01; 5]);
        assert_eq!(plan.phase_deltas, vec![0.01; 10]);
        let plan = GateErrorPlan::sample(&ErrorModel::<f64>::gaussian(0.0, 0.1), 1, 1).unwrap();
        assert_eq!(plan.hadamard_deltas.len(), 1);
        assert!(plan.phase_deltas.is_empty());
        let a = GateErrorPlan::sample(&ErrorModel::<f64>::uniform(0.0, 0.1), 6, 9).unwrap();
        let b = GateErrorPlan::sample(&ErrorModel::<f64>::uniform(0.0, 0.1), 6, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn period_state_examples() {
        let s = prepare_period_state::<f64>(&ShorInstance::synthetic(3, 2, 1).unwrap(), 0.0).unwrap();
        for (a, z) in s.amplitudes().iter().enumerate() {
            let expect = if a % 2 == 1 { 0.5 } else { 0.0 };
            assert!(close(*z, C::new(expect, 0.0), 1e-15));
        }

        let s = prepare_period_state::<f64>(&ShorInstance::synthetic(7, 4, 0).unwrap(), 0.0).unwrap();
        let amp = 1.0 / 32f64.sqrt();
        for (a, z) in s.amplitudes().iter().enumerate() {
            let expect = if a % 4 == 0 { amp } else { 0.0 };
            assert!(close(*z, C::new(expect, 0.0), 1e-15));
        }

        let s = prepare_period_state::<f64>(&ShorInstance::synthetic(3, 2, 1).unwrap(), 0.1).unwrap();
        let raw: Vec<f64> = [1u32, 3, 5, 7]
            .iter()
            .map(|&a| 1.0 + 0.1 * (2.0 * a.count_ones() as f64 - 3.0))
            .collect();
        let norm = raw.iter().map(|w| w * w).sum::<f64>().sqrt();
        for (i, a) in [1usize, 3, 5, 7].into_iter().enumerate() {
            assert!(close(s.amplitudes()[a], C::new(raw[i] / norm, 0.0), 1e-15));
        }
    }

    #[test]
    fn measurement() {
        let s = StateVector::<f64>::basis(3, 5).unwrap();
        let mut rng = RngState::from_seed(1);
        for _ in 0..20 {
            assert_eq!(s.measure_all(&mut rng).unwrap(), 5);
        }
        let amps = vec![C::new(0.5, 0.0); 4];
        let s = StateVector::from_amplitudes(amps).unwrap();
        assert_eq!(s.measure_with_uniform(0.3).unwrap(), 1);
        assert_eq!(s.measure_with_uniform(0.0).unwrap(), 0);
        assert_eq!(s.measure_with_uniform(0.999_999).unwrap(), 3);

        let bad = StateVector::from_amplitudes(vec![C::new(1.0, 0.0); 4]).unwrap();
        assert!(matches!(bad.measure_with_uniform(0.5), Err(Error::Unnormalized(_))));
    }

    #[test]
    fn measurement_frequencies() {
        let mut rng = RngState::from_seed(5);
        let s = random_state(3, &mut rng);
        let probs = s.probabilities();
        let shots = 100_000;
        let mut counts = [0usize; 8];
        for _ in 0..shots {
            counts[s.measure_all(&mut rng).unwrap()] += 1;
        }
        for (c, &n) in counts.iter().enumerate() {
            let p = probs[c];
            let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
            assert!((n as f64 - shots as f64 * p).abs() <= 3.0 * sigma + 1.0, "c={c}");
        }
    }

    #[test]
    fn circuit_noiseless_matches_direct() {
        let inst = ShorInstance::synthetic(7, 4, 0).unwrap();
        let s = circuit_spectrum(&inst, &ErrorModel::<f64>::none(), 1).unwrap();
        let n = crate::spectrum::noiseless_spectrum::<f64>(&inst);
        for (a, b) in s.values.iter().zip(&n.values) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn circuit_is_normalized_under_noise() {
        let inst = ShorInstance::synthetic(7, 4, 2).unwrap();
        for model in [
            ErrorModel::<f64>::systematic(0.2),
            ErrorModel::uniform(0.1, 0.3),
            ErrorModel::gaussian(0.0, 0.5).with_init_delta(0.05),
        ] {
            let s = circuit_spectrum(&inst, &model, 3).unwrap();
            assert!((s.total() - 1.0).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn gates_are_unitary(seed in any::<u64>(), delta in -1.0f64..1.0, theta in -4.0f64..4.0, q0 in 0usize..4, q1 in 0usize..4) {
            let mut rng = RngState::from_seed(seed);
            let mut s = random_state(4, &mut rng);
            s.apply_hadamard_noisy(q0, delta).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            if q0 != q1 {
                s.apply_controlled_phase_noisy(q0, q1, theta, delta).unwrap();
                prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            }
        }
    }
}
