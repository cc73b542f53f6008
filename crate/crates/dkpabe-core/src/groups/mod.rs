//! Bilinear-group abstraction with two interchangeable backends.
//!
//! The schemes in this crate are written against a symmetric pairing
//! `ê: G × G → G_T` with three public generators `g`, `h`, `h₁`. Production
//! curves are asymmetric, so a [`SourceElement`] is stored as a mirrored pair
//! of encodings, one per source group, updated in lockstep; `pair(a, b)`
//! consumes `a`'s first-group half and `b`'s second-group half. Two backends
//! implement the representation:
//!
//! * **Curve** — BLS12-381. `h` and `h₁` are hashed to each source group
//!   from fixed domain-separation strings, so nobody knows their discrete
//!   logs relative to `g`.
//! * **Transparent** — elements carry their discrete logs over a small prime
//!   and the pairing multiplies exponents. Insecure by construction; it
//!   exists as a brute-force oracle for tests.
//!
//! All element operations are pure; the only mutable state is the operation
//! counter inside [`GroupContext`], which tallies group multiplications,
//! exponentiations and pairings for the benchmark harness.

mod element;
mod scalar;
mod transparent;

pub use element::{SourceElement, TargetElement};
pub use scalar::Scalar;

use alloc::{vec, vec::Vec};
use core::sync::atomic::{AtomicU64, Ordering};

use ark_bls12_381::{Bls12_381, G1Projective, G2Projective};
use ark_ec::pairing::Pairing;
use ark_ec::PrimeGroup;
use rand_core::RngCore;
use sha2::{Digest, Sha512};

/// Backend discriminant. Also used as the tag byte prefixed to every
/// serialized element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Curve,
    Transparent,
}

impl Backend {
    pub fn tag(self) -> u8 {
        match self {
            Backend::Curve => 1,
            Backend::Transparent => 2,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Backend> {
        match tag {
            1 => Some(Backend::Curve),
            2 => Some(Backend::Transparent),
            _ => None,
        }
    }
}

/// Requested parameter set for [`GlobalParams::generate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendConfig {
    /// BLS12-381 at the 128-bit security level.
    Curve,
    /// Discrete-log oracle over the given prime modulus.
    Transparent { modulus: u64 },
}

impl BackendConfig {
    /// Transparent backend with the default 31-bit prime modulus.
    pub const TRANSPARENT_DEFAULT: BackendConfig = BackendConfig::Transparent {
        modulus: transparent::DEFAULT_MODULUS,
    };
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("transparent modulus {0} is not prime")]
    NotPrime(u64),
    #[error("transparent modulus {0} out of range (need 5 <= p < 2^32)")]
    ModulusOutOfRange(u64),
    #[error("unknown backend tag {0}")]
    UnknownBackendTag(u8),
    #[error("element encoded for a different backend or parameter set")]
    BackendMismatch,
    #[error("malformed element encoding")]
    BadEncoding,
    #[error("truncated input")]
    Truncated,
}

/// Public group parameters: the backend, the three generators and the cached
/// pairing of `g` with itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalParams {
    backend: Backend,
    transparent_modulus: Option<u64>,
    g: SourceElement,
    h: SourceElement,
    h1: SourceElement,
    pairing_gg: TargetElement,
}

const GEN_H_LABEL: &[u8] = b"generator-h";
const GEN_H1_LABEL: &[u8] = b"generator-h1";
const DST_G1: &[u8] = b"DKPABE-V01-BLS12381G1_XMD:SHA-256_SSWU_RO_";
const DST_G2: &[u8] = b"DKPABE-V01-BLS12381G2_XMD:SHA-256_SSWU_RO_";

impl GlobalParams {
    /// Derives the group parameters for the requested backend. Deterministic:
    /// two invocations with the same config yield identical parameters.
    pub fn generate(config: BackendConfig) -> Result<GlobalParams, GroupError> {
        match config {
            BackendConfig::Curve => Ok(Self::curve()),
            BackendConfig::Transparent { modulus } => Self::transparent(modulus),
        }
    }

    fn curve() -> GlobalParams {
        let g = SourceElement::curve(G1Projective::generator(), G2Projective::generator());
        // h and h1 are hashed independently into each source group, so their
        // discrete logs relative to g are unknown in both halves.
        let h = SourceElement::curve(
            element::hash_to_g1(DST_G1, GEN_H_LABEL),
            element::hash_to_g2(DST_G2, GEN_H_LABEL),
        );
        let h1 = SourceElement::curve(
            element::hash_to_g1(DST_G1, GEN_H1_LABEL),
            element::hash_to_g2(DST_G2, GEN_H1_LABEL),
        );
        let pairing_gg = TargetElement::curve(Bls12_381::pairing(
            G1Projective::generator(),
            G2Projective::generator(),
        ));
        GlobalParams {
            backend: Backend::Curve,
            transparent_modulus: None,
            g,
            h,
            h1,
            pairing_gg,
        }
    }

    fn transparent(modulus: u64) -> Result<GlobalParams, GroupError> {
        if !(5..=u32::MAX as u64).contains(&modulus) {
            return Err(GroupError::ModulusOutOfRange(modulus));
        }
        if !transparent::is_prime(modulus) {
            return Err(GroupError::NotPrime(modulus));
        }
        // g is the base (discrete log 1); h and h1 get hash-derived logs,
        // re-rolled with a counter until the three are distinct and nonzero.
        let g_log = 1u64;
        let h_log = transparent::derive_log(modulus, GEN_H_LABEL, &[0, g_log]);
        let h1_log = transparent::derive_log(modulus, GEN_H1_LABEL, &[0, g_log, h_log]);
        Ok(GlobalParams {
            backend: Backend::Transparent,
            transparent_modulus: Some(modulus),
            g: SourceElement::transparent(g_log, g_log, modulus),
            h: SourceElement::transparent(h_log, h_log, modulus),
            h1: SourceElement::transparent(h1_log, h1_log, modulus),
            pairing_gg: TargetElement::transparent(1, modulus),
        })
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Modulus of the transparent backend; `None` on the curve backend.
    pub fn transparent_modulus(&self) -> Option<u64> {
        self.transparent_modulus
    }

    pub fn g(&self) -> &SourceElement {
        &self.g
    }

    pub fn h(&self) -> &SourceElement {
        &self.h
    }

    pub fn h1(&self) -> &SourceElement {
        &self.h1
    }

    /// `ê(g, g)`, cached at setup so later algorithms pay only an
    /// exponentiation for target-group values derived from it.
    pub fn pairing_gg(&self) -> &TargetElement {
        &self.pairing_gg
    }
}

/// Snapshot of the per-context operation tallies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub multiplications: u64,
    pub exponentiations: u64,
    pub pairings: u64,
}

#[derive(Default)]
struct Counters {
    mul: AtomicU64,
    exp: AtomicU64,
    pair: AtomicU64,
}

/// Handle through which all counted group operations run.
///
/// Element values themselves are immutable and freely shareable; the context
/// carries the parameters plus the operation counters. Counters are atomic,
/// monotone between explicit resets, and shared by everything operating
/// through the same context.
pub struct GroupContext {
    params: GlobalParams,
    counters: Counters,
}

impl GroupContext {
    pub fn new(params: GlobalParams) -> GroupContext {
        GroupContext {
            params,
            counters: Counters::default(),
        }
    }

    pub fn params(&self) -> &GlobalParams {
        &self.params
    }

    pub fn backend(&self) -> Backend {
        self.params.backend
    }

    // ---- counted element operations ------------------------------------

    /// Source-group multiplication. Both mirrored halves are combined.
    pub fn mul(&self, a: &SourceElement, b: &SourceElement) -> SourceElement {
        self.counters.mul.fetch_add(1, Ordering::Relaxed);
        a.mul_raw(b)
    }

    pub fn mul_target(&self, a: &TargetElement, b: &TargetElement) -> TargetElement {
        self.counters.mul.fetch_add(1, Ordering::Relaxed);
        a.mul_raw(b)
    }

    /// Source-group exponentiation; both halves are raised consistently.
    pub fn exp(&self, base: &SourceElement, k: &Scalar) -> SourceElement {
        self.counters.exp.fetch_add(1, Ordering::Relaxed);
        base.exp_raw(k)
    }

    pub fn exp_target(&self, base: &TargetElement, k: &Scalar) -> TargetElement {
        self.counters.exp.fetch_add(1, Ordering::Relaxed);
        base.exp_raw(k)
    }

    /// `ê(a, b)` from `a`'s first-group half and `b`'s second-group half.
    ///
    /// Panics if the operands live on different backends; untrusted inputs
    /// are rejected at decode time before they can reach here.
    pub fn pair(&self, a: &SourceElement, b: &SourceElement) -> TargetElement {
        self.counters.pair.fetch_add(1, Ordering::Relaxed);
        a.pair_raw(b)
    }

    /// `a / b` in the target group. Counted as one multiplication; the
    /// inversion itself is free in the cost model.
    pub fn div_target(&self, a: &TargetElement, b: &TargetElement) -> TargetElement {
        self.counters.mul.fetch_add(1, Ordering::Relaxed);
        a.mul_raw(&b.inv_raw())
    }

    // ---- identities ------------------------------------------------------

    pub fn source_identity(&self) -> SourceElement {
        match self.params.backend {
            Backend::Curve => SourceElement::curve_identity(),
            Backend::Transparent => {
                SourceElement::transparent(0, 0, self.params.transparent_modulus.unwrap())
            }
        }
    }

    pub fn target_identity(&self) -> TargetElement {
        match self.params.backend {
            Backend::Curve => TargetElement::curve_identity(),
            Backend::Transparent => {
                TargetElement::transparent(0, self.params.transparent_modulus.unwrap())
            }
        }
    }

    // ---- scalars -----------------------------------------------------------

    pub fn scalar_from_u64(&self, v: u64) -> Scalar {
        match self.params.backend {
            Backend::Curve => Scalar::curve_from_u64(v),
            Backend::Transparent => {
                Scalar::transparent(v, self.params.transparent_modulus.unwrap())
            }
        }
    }

    pub fn scalar_zero(&self) -> Scalar {
        self.scalar_from_u64(0)
    }

    pub fn scalar_one(&self) -> Scalar {
        self.scalar_from_u64(1)
    }

    /// Deterministic hash of arbitrary bytes into the scalar field. SHA-512
    /// output is reduced wide, so the bias relative to uniform is negligible
    /// even for the transparent backend's small moduli.
    pub fn hash_to_scalar(&self, bytes: &[u8]) -> Scalar {
        let digest = Sha512::digest(bytes);
        self.scalar_from_wide_bytes(digest.as_slice())
    }

    /// Uniform scalar in `[0, p)`.
    pub fn rand_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        let mut buf = [0u8; 64];
        rng.fill_bytes(&mut buf);
        self.scalar_from_wide_bytes(&buf)
    }

    /// Uniform scalar in `[1, p)`.
    pub fn rand_nonzero_scalar<R: RngCore + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.rand_scalar(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    fn scalar_from_wide_bytes(&self, bytes: &[u8]) -> Scalar {
        match self.params.backend {
            Backend::Curve => Scalar::curve_from_wide_bytes(bytes),
            Backend::Transparent => {
                let p = self.params.transparent_modulus.unwrap();
                Scalar::transparent(transparent::reduce_wide(bytes, p), p)
            }
        }
    }

    // ---- counters ------------------------------------------------------------

    pub fn counters(&self) -> OpCounts {
        OpCounts {
            multiplications: self.counters.mul.load(Ordering::Relaxed),
            exponentiations: self.counters.exp.load(Ordering::Relaxed),
            pairings: self.counters.pair.load(Ordering::Relaxed),
        }
    }

    pub fn reset_counters(&self) {
        self.counters.mul.store(0, Ordering::Relaxed);
        self.counters.exp.store(0, Ordering::Relaxed);
        self.counters.pair.store(0, Ordering::Relaxed);
    }
}

/// Concatenates byte strings with a length prefix each, for unambiguous
/// hashing of composite values.
pub(crate) fn length_prefixed(parts: &[&[u8]]) -> Vec<u8> {
    let mut out = vec![];
    for part in parts {
        out.extend_from_slice(&(part.len() as u32).to_be_bytes());
        out.extend_from_slice(part);
    }
    out
}
