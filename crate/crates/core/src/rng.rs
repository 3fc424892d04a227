//! Seedable random streams and the scalar samplers built on them.
//!
//! Every stochastic routine in the crate draws through a [`RandomStream`], so
//! a whole pipeline (prior draw, model parameters, failure times) is a pure
//! function of its seed. Independent sub-streams are obtained with
//! [`RandomStream::split`] rather than by sharing one stream across threads.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_distr::{Beta, Distribution, Gamma, StandardNormal};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{domain, Result};

/// A deterministic source of uniform variates.
///
/// Backed by xoshiro256++ (period 2^256 - 1). Streams are single-owner; use
/// [`split`](Self::split) to derive independent streams for parallel work.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: Xoshiro256PlusPlus,
}

// SplitMix64 finalizer, used to decorrelate (seed, id) pairs.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// The seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derive an independent child stream identified by `id`.
    ///
    /// The child depends only on this stream's seed and `id`, not on how many
    /// variates have already been consumed.
    pub fn split(&self, id: u64) -> RandomStream {
        let child = mix64(mix64(self.seed ^ 0x9e37_79b9_7f4a_7c15).wrapping_add(mix64(id.wrapping_add(1))));
        RandomStream::new(child)
    }

    /// Uniform draw strictly inside (0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.sample(Open01)
    }

    pub fn gamma(&mut self, shape: f64, rate: f64) -> Result<f64> {
        if !(shape > 0.0 && shape.is_finite()) {
            return domain(format!("gamma shape must be positive, got {shape}"));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return domain(format!("gamma rate must be positive, got {rate}"));
        }
        let dist = Gamma::new(shape, 1.0 / rate)
            .map_err(|e| crate::Error::Domain(format!("gamma({shape}, {rate}): {e}")))?;
        // Tiny shapes can underflow to zero; keep the draw in the open support.
        Ok(dist.sample(&mut self.rng).max(f64::MIN_POSITIVE))
    }

    pub fn beta(&mut self, a: f64, b: f64) -> Result<f64> {
        if !(a > 0.0 && a.is_finite() && b > 0.0 && b.is_finite()) {
            return domain(format!("beta parameters must be positive, got ({a}, {b})"));
        }
        let dist = Beta::new(a, b)
            .map_err(|e| crate::Error::Domain(format!("beta({a}, {b}): {e}")))?;
        let v: f64 = dist.sample(&mut self.rng);
        Ok(v.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0))
    }

    /// Exponential draw by inversion of the open uniform.
    pub fn exponential(&mut self, rate: f64) -> Result<f64> {
        if !(rate > 0.0 && rate.is_finite()) {
            return domain(format!("exponential rate must be positive, got {rate}"));
        }
        Ok(-self.uniform().ln() / rate)
    }

    pub fn normal(&mut self, mean: f64, sd: f64) -> Result<f64> {
        if !(sd >= 0.0 && sd.is_finite()) || !mean.is_finite() {
            return domain(format!("normal needs finite mean and sd >= 0, got ({mean}, {sd})"));
        }
        if sd == 0.0 {
            return Ok(mean);
        }
        let z: f64 = StandardNormal.sample(&mut self.rng);
        Ok(mean + sd * z)
    }

    /// Index `k` with probability `weights[k] / sum(weights)`.
    pub fn categorical(&mut self, weights: &[f64]) -> Result<usize> {
        if weights.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
            return domain("categorical weights must be finite and non-negative");
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return domain("categorical weights must have a positive sum");
        }
        let target = self.uniform() * total;
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (k, &w) in weights.iter().enumerate() {
            if w > 0.0 {
                acc += w;
                last_positive = k;
                if target < acc {
                    return Ok(k);
                }
            }
        }
        Ok(last_positive)
    }
}
