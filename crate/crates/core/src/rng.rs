//! Seedable randomness for trials.
//!
//! [`SeededRng`] is a 32-bit Mersenne Twister (MT19937) with the samplers the
//! graph generators need: unbiased bounded integers, uniform reals, a polar
//! method standard normal, and a normal approximation of the binomial
//! distribution. Every stream is a pure function of its `u32` seed.

use crate::error::{Error, Result};

const STATE_LEN: usize = 624;
const SHIFT: usize = 397;
const MATRIX_A: u32 = 0x9908_b0df;
const UPPER_MASK: u32 = 0x8000_0000;
const LOWER_MASK: u32 = 0x7fff_ffff;

/// Plain MT19937 generator, bit-compatible with the reference `genrand_int32`.
#[derive(Clone)]
pub struct Mt19937 {
    state: Box<[u32; STATE_LEN]>,
    index: usize,
}

impl Mt19937 {
    pub fn new(seed: u32) -> Self {
        let mut state = Box::new([0u32; STATE_LEN]);
        state[0] = seed;
        for i in 1..STATE_LEN {
            let prev = state[i - 1];
            state[i] = 1_812_433_253u32
                .wrapping_mul(prev ^ (prev >> 30))
                .wrapping_add(i as u32);
        }
        Mt19937 {
            state,
            index: STATE_LEN,
        }
    }

    fn twist(&mut self) {
        let mt = &mut *self.state;
        for i in 0..STATE_LEN {
            let y = (mt[i] & UPPER_MASK) | (mt[(i + 1) % STATE_LEN] & LOWER_MASK);
            let mut next = mt[(i + SHIFT) % STATE_LEN] ^ (y >> 1);
            if y & 1 != 0 {
                next ^= MATRIX_A;
            }
            mt[i] = next;
        }
        self.index = 0;
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        if self.index >= STATE_LEN {
            self.twist();
        }
        let mut y = self.state[self.index];
        self.index += 1;
        y ^= y >> 11;
        y ^= (y << 7) & 0x9d2c_5680;
        y ^= (y << 15) & 0xefc6_0000;
        y ^ (y >> 18)
    }
}

impl std::fmt::Debug for Mt19937 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Mt19937").field("index", &self.index).finish()
    }
}

/// Per-trial random source. Never shared between trials.
#[derive(Clone, Debug)]
pub struct SeededRng {
    mt: Mt19937,
    seed: u32,
    cached_normal: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u32) -> Self {
        SeededRng {
            mt: Mt19937::new(seed),
            seed,
            cached_normal: None,
        }
    }

    pub fn seed(&self) -> u32 {
        self.seed
    }

    #[inline]
    pub fn next_u32(&mut self) -> u32 {
        self.mt.next_u32()
    }

    /// Uniform real in `[0, 1)` with 32 bits of resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        self.next_u32() as f64 * (1.0 / 4_294_967_296.0)
    }

    /// Unbiased uniform integer in `[0, k)`.
    pub fn uniform_below(&mut self, k: u32) -> Result<u32> {
        if k == 0 {
            return Err(Error::Usage("uniform_below called with k = 0".into()));
        }
        Ok(self.below(k))
    }

    /// Like [`uniform_below`](Self::uniform_below) for callers that already
    /// guarantee `k >= 1`.
    #[inline]
    pub(crate) fn below(&mut self, k: u32) -> u32 {
        debug_assert!(k > 0);
        // Largest multiple of k that fits in 2^32; draws at or above it are rejected.
        let limit = (1u64 << 32) - (1u64 << 32) % k as u64;
        loop {
            let x = self.next_u32() as u64;
            if x < limit {
                return (x % k as u64) as u32;
            }
        }
    }

    /// Unbiased uniform integer in `[0, k)` for 64-bit ranges.
    pub fn uniform_below_u64(&mut self, k: u64) -> Result<u64> {
        if k == 0 {
            return Err(Error::Usage("uniform_below_u64 called with k = 0".into()));
        }
        if k <= u32::MAX as u64 {
            return Ok(self.below(k as u32) as u64);
        }
        let limit = u64::MAX - (u64::MAX % k + 1) % k;
        loop {
            let x = ((self.next_u32() as u64) << 32) | self.next_u32() as u64;
            if x <= limit {
                return Ok(x % k);
            }
        }
    }

    /// Uniformly random element of a non-empty slice.
    #[inline]
    pub fn choose<T: Copy>(&mut self, items: &[T]) -> Option<T> {
        if items.is_empty() {
            None
        } else {
            Some(items[self.below(items.len() as u32) as usize])
        }
    }

    /// Standard normal deviate via the Marsaglia polar method. The second
    /// deviate of each accepted pair is cached for the next call.
    pub fn standard_normal(&mut self) -> f64 {
        if let Some(y) = self.cached_normal.take() {
            return y;
        }
        loop {
            let a = 2.0 * self.next_f64() - 1.0;
            let b = 2.0 * self.next_f64() - 1.0;
            let s = a * a + b * b;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.cached_normal = Some(b * factor);
                return a * factor;
            }
        }
    }

    /// Approximate `Bin(trials, p)` draw: rounds `y * sd + mean` for fresh
    /// standard normals `y` until the result lies in `[0, trials]`.
    pub fn binomial_via_normal(&mut self, trials: u64, p: f64) -> Result<u64> {
        if trials == 0 || !(p > 0.0 && p < 1.0) {
            return Err(Error::Usage(format!(
                "binomial_via_normal needs trials >= 1 and 0 < p < 1 (got {trials}, {p})"
            )));
        }
        loop {
            let y = self.standard_normal();
            if let Some(x) = binomial_from_normal(y, trials, p) {
                return Ok(x);
            }
        }
    }
}

/// `round(y * sqrt(N p (1 - p)) + N p)`, or `None` when outside `[0, N]`.
pub fn binomial_from_normal(y: f64, trials: u64, p: f64) -> Option<u64> {
    let n = trials as f64;
    let x = (y * (n * p * (1.0 - p)).sqrt() + n * p).round();
    if x >= 0.0 && x <= n {
        Some(x as u64)
    } else {
        None
    }
}
