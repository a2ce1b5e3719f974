//! Prime level sizes.
//!
//! Level sizes come from a ladder whose entry `k` is the smallest prime
//! `>= 3 * 2^k`. Successive entries are almost exactly a factor of two apart,
//! so walking the ladder downwards halves the level size at every step while
//! keeping every size prime.

use crate::error::{CascadeError, ConfigError};

// Deterministic for every n < 3.3 * 10^24.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Exact primality for any `u64`, by Miller-Rabin over a witness set that is
/// deterministic for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The least prime `>= n`.
pub fn smallest_prime_at_least(n: u64) -> Result<u64, CascadeError> {
    let mut candidate = n.max(2);
    loop {
        if is_prime(candidate) {
            return Ok(candidate);
        }
        candidate = candidate.checked_add(1).ok_or(CascadeError::CapacityOverflow)?;
    }
}

/// Ladder entry `k`: the smallest prime `>= 3 * 2^k`.
pub fn ladder_entry(exponent: u32) -> Result<u64, CascadeError> {
    if exponent > 61 {
        return Err(CascadeError::CapacityOverflow);
    }
    smallest_prime_at_least(3u64 << exponent)
}

/// Sizes of `levels` cascaded tables whose largest level is ladder entry
/// `base_exponent`, largest first.
pub fn ladder_sizes(base_exponent: u32, levels: usize) -> Result<Vec<u64>, CascadeError> {
    if levels == 0 {
        return Err(ConfigError::NoLevels.into());
    }
    if (base_exponent as usize) + 1 < levels {
        return Err(ConfigError::ExponentTooSmall { base_exponent, levels }.into());
    }
    (0..levels as u32)
        .map(|i| ladder_entry(base_exponent - i))
        .collect()
}
