//! Integer side of the pipeline: modular arithmetic, order finding and the
//! continued-fraction step that turns a measured `c` back into a period.

use crate::error::{Error, Result};

/// Default cap on `N` for the brute-force order search.
pub const ORDER_SEARCH_LIMIT: u64 = 1 << 20;

/// Largest supported register width. Keeps `q = 2^L` and `c * a mod q` in `u128`.
pub const MAX_REGISTER_BITS: u32 = 41;

/// Default multiplier bound used by [`recover_order`] callers.
pub const DEFAULT_MULTIPLIER_BOUND: u64 = 64;

/// `base^exp mod modulus` by square-and-multiply.
pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::ModulusTooSmall(modulus));
    }
    let m = modulus as u128;
    let mut result: u128 = 1;
    let mut b = base as u128 % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    Ok(result as u64)
}

pub fn gcd(a: u64, b: u64) -> Result<u64> {
    if a == 0 && b == 0 {
        return Err(Error::GcdOfZeros);
    }
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    Ok(a)
}

/// Smallest `r >= 1` with `y^r = 1 (mod n)`, found by stepping through powers.
pub fn find_order(y: u64, n: u64) -> Result<u64> {
    find_order_bounded(y, n, ORDER_SEARCH_LIMIT)
}

pub fn find_order_bounded(y: u64, n: u64, max_modulus: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::ModulusTooSmall(n));
    }
    if n > max_modulus {
        return Err(Error::ModulusTooLarge { n, bound: max_modulus });
    }
    if y == 0 || y >= n {
        return Err(Error::InvalidArgument(format!("base {y} must lie in [1, {}]", n - 1)));
    }
    let g = gcd(y, n)?;
    if g != 1 {
        return Err(Error::NotCoprime { y, n, gcd: g });
    }
    let (y, n) = (y as u128, n as u128);
    let mut x = y % n;
    let mut r = 1u64;
    // Euler's theorem bounds r by n - 1, so the loop terminates.
    while x != 1 {
        x = x * y % n;
        r += 1;
    }
    Ok(r)
}

/// Continued-fraction convergents `(numerator, denominator)` of `c / q`.
///
/// Ordered by (non-decreasing) denominator; the last entry is `c / q` in
/// lowest terms.
pub fn convergents(c: u64, q: u64) -> Result<Vec<(u64, u64)>> {
    if q == 0 || c >= q {
        return Err(Error::InvalidArgument(format!("need 0 <= c < q, got c={c}, q={q}")));
    }
    let mut out = Vec::new();
    let (mut num, mut den) = (c, q);
    // h_{-1}/k_{-1} = 1/0, h_{-2}/k_{-2} = 0/1
    let (mut h_prev, mut h_prev2) = (1u64, 0u64);
    let (mut k_prev, mut k_prev2) = (0u64, 1u64);
    loop {
        let a = num / den;
        let h = a * h_prev + h_prev2;
        let k = a * k_prev + k_prev2;
        out.push((h, k));
        (h_prev2, h_prev) = (h_prev, h);
        (k_prev2, k_prev) = (k_prev, k);
        (num, den) = (den, num - a * den);
        if den == 0 {
            break;
        }
    }
    Ok(out)
}

/// Tries to read the order of `y` mod `n` off a measured value `c`.
///
/// Every convergent denominator `d < n` of `c / q` is expanded into the
/// candidates `lambda * d` for `lambda` in `1..=multiplier_bound`; the least
/// candidate `x` with `y^x = 1 (mod n)` is returned.
pub fn recover_order(c: u64, q: u64, n: u64, y: u64, multiplier_bound: u64) -> Result<Option<u64>> {
    if multiplier_bound == 0 {
        return Err(Error::InvalidArgument("multiplier bound must be positive".into()));
    }
    let mut candidates: Vec<u64> = convergents(c, q)?
        .into_iter()
        .map(|(_, d)| d)
        .filter(|&d| d >= 1 && d < n)
        .flat_map(|d| (1..=multiplier_bound).map(move |lambda| lambda * d))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    for x in candidates {
        if mod_pow(y, x, n)? == 1 {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

#[inline]
pub fn popcount(a: u64) -> u32 {
    a.count_ones()
}

/// Classical tail of Shor's algorithm given a candidate order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorOutcome {
    Factors(u64, u64),
    /// Odd order, `y^(r/2) = -1 (mod n)`, or only trivial divisors: pick another base.
    Retry,
}

/// `gcd(y^(r/2) +- 1, n)`.
pub fn factors_from_order(n: u64, y: u64, r: u64) -> Result<FactorOutcome> {
    if r % 2 == 1 {
        return Ok(FactorOutcome::Retry);
    }
    let half = mod_pow(y, r / 2, n)?;
    if half == n - 1 {
        return Ok(FactorOutcome::Retry);
    }
    let lo = gcd(half + n - 1, n)?;
    let hi = gcd(half + 1, n)?;
    for f in [lo, hi] {
        if f > 1 && f < n {
            let (a, b) = (f.min(n / f), f.max(n / f));
            return Ok(FactorOutcome::Factors(a, b));
        }
    }
    Ok(FactorOutcome::Retry)
}

/// Problem parameters for one order-finding run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShorInstance {
    /// `(N, y)` when the instance comes from a factoring problem.
    target: Option<(u64, u64)>,
    register_bits: u32,
    order: u64,
    offset: u64,
    support_count: u64,
    synthetic: bool,
}

impl ShorInstance {
    /// Instance for factoring `n` with base `y`, with the smallest register
    /// satisfying `N^2 <= q` (which also gives `q <= 2 N^2`).
    pub fn from_factoring(n: u64, y: u64) -> Result<Self> {
        Self::check_target(n, y)?;
        let n_sq = (n as u128) * (n as u128);
        let mut bits = 0u32;
        while (1u128 << bits) < n_sq {
            bits += 1;
        }
        Self::with_register_bits(n, y, bits)
    }

    /// Like [`from_factoring`](Self::from_factoring) but with an explicit
    /// register width. Widths outside `N^2 <= q <= 2 N^2` are accepted and
    /// the instance is flagged synthetic.
    pub fn with_register_bits(n: u64, y: u64, register_bits: u32) -> Result<Self> {
        Self::check_target(n, y)?;
        let order = find_order(y, n)?;
        let mut inst = Self::build(register_bits, order, 0)?;
        let n_sq = (n as u128) * (n as u128);
        inst.synthetic = !(n_sq <= inst.q() as u128 && inst.q() as u128 <= 2 * n_sq);
        inst.target = Some((n, y));
        Ok(inst)
    }

    /// Bare `(L, r, l)` instance with no factoring problem attached.
    pub fn synthetic(register_bits: u32, order: u64, offset: u64) -> Result<Self> {
        let mut inst = Self::build(register_bits, order, offset)?;
        inst.synthetic = true;
        Ok(inst)
    }

    /// Same instance with the second-register measurement fixed to `offset`.
    pub fn with_offset(&self, offset: u64) -> Result<Self> {
        let fresh = Self::build(self.register_bits, self.order, offset)?;
        Ok(Self {
            offset,
            support_count: fresh.support_count,
            ..self.clone()
        })
    }

    fn check_target(n: u64, y: u64) -> Result<()> {
        if n < 3 {
            return Err(Error::InvalidInstance(format!("N must be at least 3, got {n}")));
        }
        if y < 2 || y >= n {
            return Err(Error::InvalidInstance(format!("y must lie in [2, {}], got {y}", n - 1)));
        }
        let g = gcd(y, n)?;
        if g != 1 {
            return Err(Error::NotCoprime { y, n, gcd: g });
        }
        Ok(())
    }

    fn build(register_bits: u32, order: u64, offset: u64) -> Result<Self> {
        if register_bits == 0 || register_bits > MAX_REGISTER_BITS {
            return Err(Error::InvalidInstance(format!(
                "register width must lie in [1, {MAX_REGISTER_BITS}], got {register_bits}"
            )));
        }
        if order == 0 {
            return Err(Error::InvalidInstance("order must be positive".into()));
        }
        if offset >= order {
            return Err(Error::InvalidInstance(format!(
                "offset {offset} must be below the order {order}"
            )));
        }
        let q = 1u64 << register_bits;
        if offset >= q {
            return Err(Error::InvalidInstance(format!("offset {offset} must be below q = {q}")));
        }
        let support_count = (q - 1 - offset) / order + 1;
        Ok(Self {
            target: None,
            register_bits,
            order,
            offset,
            support_count,
            synthetic: true,
        })
    }

    /// `N`, if a factoring target is attached.
    pub fn modulus(&self) -> Option<u64> {
        self.target.map(|(n, _)| n)
    }

    /// `y`, if a factoring target is attached.
    pub fn base(&self) -> Option<u64> {
        self.target.map(|(_, y)| y)
    }

    pub fn target(&self) -> Option<(u64, u64)> {
        self.target
    }

    /// Number of qubits `L` in the first register.
    pub fn register_bits(&self) -> u32 {
        self.register_bits
    }

    /// `q = 2^L`.
    pub fn q(&self) -> u64 {
        1u64 << self.register_bits
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// `M`, the number of `a < q` with `a = l (mod r)`.
    pub fn support_count(&self) -> u64 {
        self.support_count
    }

    /// Whether the register width departs from `N^2 <= q <= 2 N^2` or no
    /// factoring target is attached.
    pub fn is_synthetic(&self) -> bool {
        self.synthetic
    }

    pub fn order_divides_q(&self) -> bool {
        self.q().is_multiple_of(self.order)
    }

    /// Whether `M` equals `q / r` exactly.
    pub fn support_is_q_over_r(&self) -> bool {
        self.order_divides_q() && self.support_count == self.q() / self.order
    }

    /// First-register values `a = j r + l` carrying amplitude.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.support_count).map(move |j| j * self.order + self.offset)
    }

    /// Ideal peak positions `k q / r` for `k` in `0..r`.
    pub fn reference_positions(&self) -> Vec<f64> {
        let q = self.q() as f64;
        let r = self.order as f64;
        (0..self.order).map(|k| k as f64 * q / r).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(7, 4, 15).unwrap(), 1);
        assert_eq!(mod_pow(11, 0, 15).unwrap(), 1);
        assert_eq!(mod_pow(2, 10, 1000).unwrap(), 24);
        assert_eq!(mod_pow(3, 5, 1), Err(Error::ModulusTooSmall(1)));
    }

    #[test]
    fn mod_pow_large_modulus_does_not_overflow() {
        let n = (1u64 << 41) - 1;
        let naive = (0..1000).fold(1u128, |acc, _| acc * (n as u128 - 2) % n as u128);
        assert_eq!(mod_pow(n - 2, 1000, n).unwrap() as u128, naive);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(12, 8).unwrap(), 4);
        assert_eq!(gcd(7, 15).unwrap(), 1);
        assert_eq!(gcd(0, 5).unwrap(), 5);
        assert_eq!(gcd(5, 0).unwrap(), 5);
        assert_eq!(gcd(0, 0), Err(Error::GcdOfZeros));
    }

    #[test]
    fn order_examples() {
        assert_eq!(find_order(7, 15).unwrap(), 4);
        assert_eq!(find_order(1, 15).unwrap(), 1);
        assert_eq!(find_order(4, 15).unwrap(), 2);
        assert_eq!(find_order(6, 15), Err(Error::NotCoprime { y: 6, n: 15, gcd: 3 }));
        assert!(matches!(
            find_order_bounded(2, 101, 100),
            Err(Error::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn order_is_minimal_for_small_moduli() {
        for n in 2..=100u64 {
            for y in 1..n {
                if gcd(y, n).unwrap() != 1 {
                    continue;
                }
                let r = find_order(y, n).unwrap();
                assert_eq!(mod_pow(y, r, n).unwrap(), 1, "y={y} n={n}");
                for d in 1..r {
                    assert_ne!(mod_pow(y, d, n).unwrap(), 1, "y={y} n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn convergent_examples() {
        assert_eq!(convergents(32, 128).unwrap(), vec![(0, 1), (1, 4)]);
        assert_eq!(convergents(0, 128).unwrap(), vec![(0, 1)]);
        assert_eq!(convergents(96, 128).unwrap(), vec![(0, 1), (1, 1), (3, 4)]);
        assert!(convergents(128, 128).is_err());
    }

    #[test]
    fn recover_order_examples() {
        assert_eq!(recover_order(64, 256, 15, 7, 4).unwrap(), Some(4));
        // 0/256 has the single convergent 0/1; multiples 1..=4 reach 4.
        assert_eq!(recover_order(0, 256, 15, 7, 4).unwrap(), Some(4));
        assert_eq!(recover_order(0, 256, 15, 7, 3).unwrap(), None);
        assert_eq!(recover_order(128, 256, 15, 7, 2).unwrap(), Some(4));
        assert_eq!(recover_order(128, 256, 15, 7, 1).unwrap(), None);
    }

    #[test]
    fn recover_order_on_coprime_peaks() {
        let (q, n, y) = (256u64, 15u64, 7u64);
        let r = find_order(y, n).unwrap();
        for k in 0..r {
            let c = k * q / r;
            if gcd(k, r).unwrap() == 1 {
                for bound in [1, 2, 64] {
                    assert_eq!(recover_order(c, q, n, y, bound).unwrap(), Some(r), "k={k}");
                }
            }
        }
    }

    #[test]
    fn popcount_examples() {
        assert_eq!(popcount(0), 0);
        assert_eq!(popcount(7), 3);
        assert_eq!(popcount(128), 1);
    }

    #[test]
    fn factors_of_fifteen() {
        assert_eq!(factors_from_order(15, 7, 4).unwrap(), FactorOutcome::Factors(3, 5));
        assert_eq!(factors_from_order(15, 7, 3).unwrap(), FactorOutcome::Retry);
        // 14 = -1 mod 15 has order 2 and 14^1 = -1.
        assert_eq!(factors_from_order(15, 14, 2).unwrap(), FactorOutcome::Retry);
    }

    #[test]
    fn instance_from_factoring() {
        let inst = ShorInstance::from_factoring(15, 7).unwrap();
        assert_eq!(inst.register_bits(), 8);
        assert_eq!(inst.q(), 256);
        assert_eq!(inst.order(), 4);
        assert_eq!(inst.offset(), 0);
        assert_eq!(inst.support_count(), 64);
        assert!(!inst.is_synthetic());
        assert!(ShorInstance::from_factoring(15, 6).is_err());
        assert!(ShorInstance::with_register_bits(15, 7, 7).unwrap().is_synthetic());
    }

    #[test]
    fn instance_support_bounds() {
        let inst = ShorInstance::synthetic(3, 3, 2).unwrap();
        // a in {2, 5}
        assert_eq!(inst.support().collect::<Vec<_>>(), vec![2, 5]);
        assert!(!inst.support_is_q_over_r());
        assert!(ShorInstance::synthetic(7, 4, 4).is_err());
        assert!(ShorInstance::synthetic(0, 1, 0).is_err());
        assert!(ShorInstance::synthetic(7, 0, 0).is_err());
    }

    proptest! {
        #[test]
        fn final_convergent_is_reduced_fraction(q_bits in 1u32..20, c_seed in any::<u64>()) {
            let q = 1u64 << q_bits;
            let c = c_seed % q;
            let conv = convergents(c, q).unwrap();
            let g = gcd(c, q).unwrap();
            prop_assert_eq!(*conv.last().unwrap(), (c / g, q / g));
            prop_assert!(conv.windows(2).all(|w| w[0].1 <= w[1].1));
        }

        #[test]
        fn popcount_complement(n in 1u32..64, a_seed in any::<u64>()) {
            let mask = (1u64 << n) - 1;
            let a = a_seed & mask;
            prop_assert_eq!(popcount(a) + popcount(a ^ mask), n);
        }

        #[test]
        fn support_brackets_register(bits in 1u32..16, order in 1u64..50, off in 0u64..50) {
            prop_assume!(off < order && off < (1u64 << bits));
            let inst = ShorInstance::synthetic(bits, order, off).unwrap();
            let (q, m) = (inst.q(), inst.support_count());
            prop_assert!(m >= 1);
            prop_assert!(off + (m - 1) * order < q);
            prop_assert!(q - 1 < off + m * order);
        }
    }
}
