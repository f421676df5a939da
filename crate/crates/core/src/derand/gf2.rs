//! Arithmetic in GF(2^d) for d <= 63, with the modulus found at runtime.

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 63;

fn degree(p: u128) -> i32 {
    127 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u128, f: u128) -> u128 {
    let df = degree(f);
    while a != 0 && degree(a) >= df {
        a ^= f << (degree(a) - df);
    }
    a
}

fn poly_mulmod(a: u128, b: u128, f: u128) -> u128 {
    let mut acc = 0u128;
    let mut a = a;
    let mut b = b;
    let top = 1u128 << degree(f);
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= f;
        }
    }
    acc
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

/// Ben-Or: `f` of degree `d` is irreducible iff `gcd(x^(2^i) - x, f) = 1` for `i = 1..=d/2`.
pub fn is_irreducible(f: u128) -> bool {
    let d = degree(f);
    if d < 1 {
        return false;
    }
    let mut xp = 0b10u128; // x
    for _ in 1..=d / 2 {
        xp = poly_mulmod(xp, xp, f);
        if poly_gcd(f, xp ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

/// The lexicographically smallest irreducible polynomial of degree `d`.
pub fn irreducible(d: u32) -> Result<u128> {
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::FieldOverflow(d, MAX_DEGREE));
    }
    let base = 1u128 << d;
    (0..base)
        .map(|low| base | low)
        .filter(|f| f & 1 == 1 || d == 1)
        .find(|&f| is_irreducible(f))
        .ok_or(Error::FieldOverflow(d, MAX_DEGREE))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    pub degree: u32,
    pub modulus: u128,
}

impl Field {
    pub fn new(degree: u32) -> Result<Self> {
        Ok(Self { degree, modulus: irreducible(degree)? })
    }

    pub fn order(&self) -> u128 {
        1u128 << self.degree
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        poly_mulmod(a as u128, b as u128, self.modulus) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_small_irreducibles() {
        assert_eq!(irreducible(2).unwrap(), 0b111);
        assert_eq!(irreducible(3).unwrap(), 0b1011);
        assert_eq!(irreducible(8).unwrap(), 0x11b);
        assert!(!is_irreducible(0b101)); // (x+1)^2
        assert!(irreducible(64).is_err());
        assert!(irreducible(63).is_ok());
    }

    #[test]
    fn multiplicative_group_is_cyclic_of_full_order() {
        // every nonzero element satisfies a^(2^d - 1) = 1
        let f = Field::new(7).unwrap();
        for a in 1u64..128 {
            let mut acc = 1;
            for _ in 0..127 {
                acc = f.mul(acc, a);
            }
            assert_eq!(acc, 1, "{a}");
        }
    }
}
