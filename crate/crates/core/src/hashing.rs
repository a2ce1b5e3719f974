//! Bit-exact seeded hashing and the per-level double-hashing pair.
//!
//! Everything here is a pure function of its inputs, so probe sequences are
//! identical across runs and platforms.

use crate::error::CascadeError;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes a non-empty key under `seed`.
///
/// The key is consumed in little-endian 8-byte chunks (the last one
/// zero-padded), each folded in with `state = mix64(state ^ chunk)`. The byte
/// length is folded in with one final mix.
pub fn hash_bytes(key: &[u8], seed: u64) -> Result<u64, CascadeError> {
    if key.is_empty() {
        return Err(CascadeError::EmptyKey);
    }
    Ok(hash_nonempty(key, seed))
}

#[inline]
pub(crate) fn hash_nonempty(key: &[u8], seed: u64) -> u64 {
    let mut state = seed;
    let mut chunks = key.chunks_exact(8);
    for chunk in &mut chunks {
        state = mix64(state ^ u64::from_le_bytes(chunk.try_into().unwrap()));
    }
    let rest = chunks.remainder();
    if !rest.is_empty() {
        let mut buf = [0u8; 8];
        buf[..rest.len()].copy_from_slice(rest);
        state = mix64(state ^ u64::from_le_bytes(buf));
    }
    mix64(state ^ key.len() as u64)
}

/// Start index and stride of a key's probe sequence within one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashPair {
    /// First probed slot, in `[0, size)`.
    pub start: usize,
    /// Distance between probes, in `[1, size)`.
    pub stride: usize,
}

impl HashPair {
    /// The first `count` slots of the sequence `(start + j * stride) mod size`.
    pub fn probes(self, size: usize, count: usize) -> Probes {
        Probes {
            next: self.start,
            stride: self.stride,
            size,
            remaining: count,
        }
    }
}

/// Iterator over a double-hashing probe sequence.
#[derive(Debug, Clone)]
pub struct Probes {
    next: usize,
    stride: usize,
    size: usize,
    remaining: usize,
}

impl Iterator for Probes {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let current = self.next;
        // start < size and stride < size, so one subtraction suffices
        self.next += self.stride;
        if self.next >= self.size {
            self.next -= self.size;
        }
        Some(current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for Probes {}

/// Derives the probe start and stride for `key` in a level of `size` slots
/// seeded with `seeds`.
///
/// `size` must be at least 2. The stride is never zero, so for a prime size
/// the sequence visits every slot before repeating.
#[inline]
pub fn derive_pair(key: &[u8], seeds: (u64, u64), size: usize) -> HashPair {
    debug_assert!(size >= 2);
    let size = size as u64;
    let start = hash_nonempty(key, seeds.0) % size;
    let stride = 1 + hash_nonempty(key, seeds.1) % (size - 1);
    HashPair {
        start: start as usize,
        stride: stride as usize,
    }
}

/// Seeds for the two hash functions of level `level_index` (1-based) in
/// growth generation `generation`.
pub fn level_seeds(root_seed: u64, level_index: usize, generation: u64) -> (u64, u64) {
    let base = (2 * level_index as u64).wrapping_add(131u64.wrapping_mul(generation));
    (mix64(root_seed ^ base), mix64(root_seed ^ base.wrapping_add(1)))
}
