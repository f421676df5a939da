//! Bit-linear hash functions whose coefficients come from a small-bias space.
//!
//! A seed `(x, y)` of two field elements expands to the string whose bit `i`
//! is the parity of `x^i AND y` (the powering construction). The first
//! `alpha * beta` bits form the matrix rows, the last `beta` bits the offset.

use super::gf2::Field;
use crate::error::{Error, Result};
use crate::util::ceil_log2;

/// Powering-generator string of `len` bits for seed `(x, y)`.
pub fn powering_bits(field: &Field, x: u64, y: u64, len: usize) -> Vec<bool> {
    let mut cur = 1u64;
    (0..len)
        .map(|_| {
            let bit = (cur & y).count_ones() & 1 == 1;
            cur = field.mul(cur, x);
            bit
        })
        .collect()
}

/// `h(v) = M v + c` over GF(2) with `M` a `beta x alpha` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitLinear {
    pub rows: Vec<u64>,
    pub offset: u64,
}

impl BitLinear {
    pub fn eval(&self, v: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(self.offset, |acc, (r, row)| acc ^ ((((row & v).count_ones() & 1) as u64) << r))
    }
}

/// The family of all bit-linear maps `{0,1}^alpha -> {0,1}^beta` seeded by the generator.
#[derive(Clone, Debug, PartialEq)]
pub struct HashFamily {
    pub alpha: u32,
    pub beta: u32,
    pub eps: f64,
    /// Field degree of the generator seed.
    pub l0: u32,
    field: Option<Field>,
}

impl HashFamily {
    pub fn new(alpha: u32, beta: u32, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
        }
        if alpha > 64 || beta > 64 {
            return Err(Error::InvalidArgument("alpha and beta must be at most 64".into()));
        }
        if beta == 0 {
            return Ok(Self { alpha, beta, eps, l0: 0, field: None });
        }
        let ratio = (alpha.max(1) as f64 * beta as f64 / eps).ceil() as u64;
        let l0 = ceil_log2(ratio) + 2;
        let field = Field::new(l0)?;
        Ok(Self { alpha, beta, eps, l0, field: Some(field) })
    }

    /// `2^(2 l0)`, or 1 for the constant family.
    pub fn len(&self) -> u128 {
        if self.field.is_none() {
            1
        } else {
            1u128 << (2 * self.l0)
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Seed of member `j`; skips the all-zero seeds first so early members are non-degenerate.
    pub fn seed_of(&self, j: u128) -> (u64, u64) {
        let q = 1u128 << self.l0;
        let x = ((j / q + 2) % q) as u64;
        let y = ((j % q + 1) % q) as u64;
        (x, y)
    }

    pub fn member(&self, j: u128) -> BitLinear {
        let Some(field) = &self.field else {
            return BitLinear { rows: Vec::new(), offset: 0 };
        };
        let (a, b) = (self.alpha as usize, self.beta as usize);
        let (x, y) = self.seed_of(j);
        let bits = powering_bits(field, x, y, a * b + b);
        let rows = (0..b)
            .map(|r| (0..a).filter(|&c| bits[r * a + c]).fold(0u64, |acc, c| acc | 1 << c))
            .collect();
        let offset = (0..b).filter(|&r| bits[a * b + r]).fold(0u64, |acc, r| acc | 1 << r);
        BitLinear { rows, offset }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_totality() {
        let fam = HashFamily::new(3, 3, 0.1).unwrap();
        assert_eq!(fam.l0, 9);
        assert_eq!(fam.len(), 1 << 18);
        for j in (0..fam.len()).step_by(997) {
            let h = fam.member(j);
            assert!((0..8).all(|x| h.eval(x) < 8));
        }
    }

    #[test]
    fn beta_zero_is_constant() {
        let fam = HashFamily::new(4, 0, 0.1).unwrap();
        assert_eq!(fam.len(), 1);
        assert!((0..16).all(|x| fam.member(0).eval(x) == 0));
    }

    #[test]
    fn bias_of_linear_tests() {
        // every nonzero parity test over the 12-bit string is nearly balanced across all seeds
        let field = Field::new(6).unwrap();
        let strings: Vec<u64> = (0..64u64)
            .flat_map(|x| (0..64u64).map(move |y| (x, y)))
            .map(|(x, y)| powering_bits(&field, x, y, 12).iter().enumerate().fold(0, |a, (i, &b)| a | ((b as u64) << i)))
            .collect();
        for test in 1u64..(1 << 12) {
            let ones = strings.iter().filter(|s| (*s & test).count_ones() & 1 == 1).count() as f64;
            let bias = (2.0 * ones / strings.len() as f64 - 1.0).abs();
            // powering bias bound: (len - 1) / 2^l0
            assert!(bias <= 11.0 / 64.0 + 1e-9, "test {test:b}: {bias}");
        }
    }
}
