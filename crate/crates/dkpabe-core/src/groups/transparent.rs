//! Small-prime modular arithmetic for the transparent oracle backend.

use sha2::{Digest, Sha512};

/// 2^31 - 1, a Mersenne prime.
pub const DEFAULT_MODULUS: u64 = 2_147_483_647;

pub fn add(a: u64, b: u64, p: u64) -> u64 {
    debug_assert!(a < p && b < p);
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    debug_assert!(a < p && b < p);
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    debug_assert!(a < p && b < p);
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn neg(a: u64, p: u64) -> u64 {
    debug_assert!(a < p);
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// Multiplicative inverse via the extended Euclidean algorithm; `None` for 0.
pub fn inv(a: u64, p: u64) -> Option<u64> {
    debug_assert!(a < p);
    if a == 0 {
        return None;
    }
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "modulus must be prime");
    Some(old_s.rem_euclid(p as i128) as u64)
}

/// Interprets `bytes` as a big-endian integer and reduces it mod `p`. With
/// 64 input bytes the bias relative to uniform is at most `p / 2^512`.
pub fn reduce_wide(bytes: &[u8], p: u64) -> u64 {
    let mut acc: u128 = 0;
    for &b in bytes {
        acc = ((acc << 8) | b as u128) % p as u128;
    }
    acc as u64
}

/// Trial division; the modulus cap of 2^32 keeps this instant.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Deterministically derives a generator discrete log from a label,
/// re-hashing with a counter until the value avoids `exclude`.
pub fn derive_log(p: u64, label: &[u8], exclude: &[u64]) -> u64 {
    for counter in 0u32.. {
        let mut hasher = Sha512::new();
        hasher.update(label);
        hasher.update(counter.to_be_bytes());
        let candidate = reduce_wide(&hasher.finalize(), p);
        if !exclude.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        let p = 101;
        for a in 1..p {
            let ai = inv(a, p).unwrap();
            assert_eq!(mul(a, ai, p), 1);
        }
        assert_eq!(inv(0, p), None);
    }

    #[test]
    fn default_modulus_is_prime() {
        assert!(is_prime(DEFAULT_MODULUS));
        assert!(is_prime(101));
        assert!(!is_prime(1001));
    }

    #[test]
    fn wide_reduction_matches_direct() {
        // 0x0102 = 258 = 56 mod 101
        assert_eq!(reduce_wide(&[1, 2], 101), 56);
    }
}
