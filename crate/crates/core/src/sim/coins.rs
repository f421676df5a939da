use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// Shared public randomness, addressed by `(stream, key)` rather than drawn sequentially.
///
/// Every node evaluating `unit(stream, key)` gets the same value, which is what
/// lets both endpoints of an edge agree on sampling decisions without talking.
/// Each evaluation is counted so callers can prove a code path is coin-free.
#[derive(Clone, Debug)]
pub struct Coins {
    seed: u64,
    draws: Arc<AtomicU64>,
}

/// SplitMix64 finalizer.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Coins {
    pub fn new(seed: u64) -> Self {
        Self { seed, draws: Arc::new(AtomicU64::new(0)) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of coin evaluations so far (shared by all clones).
    pub fn draws(&self) -> u64 {
        self.draws.load(Ordering::Relaxed)
    }

    /// 64 uniform bits for `(stream, key)`.
    pub fn bits(&self, stream: u64, key: u64) -> u64 {
        self.draws.fetch_add(1, Ordering::Relaxed);
        mix64(mix64(self.seed ^ mix64(stream)) ^ key)
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&self, stream: u64, key: u64) -> f64 {
        (self.bits(stream, key) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&self, stream: u64, key: u64, p: f64) -> bool {
        self.unit(stream, key) < p
    }

    /// Exponential with rate `beta`.
    pub fn exp(&self, stream: u64, key: u64, beta: f64) -> f64 {
        -(1.0 - self.unit(stream, key)).ln() / beta
    }

    /// Uniform in `0..n` (`n > 0`).
    pub fn below(&self, stream: u64, key: u64, n: u64) -> u64 {
        ((self.bits(stream, key) as u128 * n as u128) >> 64) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addressed_and_counted() {
        let c = Coins::new(9);
        let d = c.clone();
        assert_eq!(c.bits(1, 2), d.bits(1, 2));
        assert_ne!(c.bits(1, 2), c.bits(2, 1));
        assert_eq!(c.draws(), 4);
        assert_ne!(Coins::new(10).bits(1, 2), c.bits(1, 2));
    }

    #[test]
    fn bernoulli_frequency() {
        let c = Coins::new(3);
        let hits = (0..20_000).filter(|&k| c.bernoulli(0, k, 0.3)).count();
        assert!((5_600..6_400).contains(&hits), "{hits}");
        assert!((0..1000).all(|k| c.below(5, k, 7) < 7));
    }
}
