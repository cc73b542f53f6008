//! Group element representations for both backends.

use alloc::vec::Vec;

use ark_bls12_381::{g1, g2, Bls12_381, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::hashing::curve_maps::wb::WBMap;
use ark_ec::hashing::map_to_curve_hasher::MapToCurveBasedHasher;
use ark_ec::hashing::HashToCurve;
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::CurveGroup;
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use sha2::Sha256;

use super::{transparent, Backend, GlobalParams, GroupError, Scalar};

pub(crate) fn hash_to_g1(dst: &[u8], msg: &[u8]) -> G1Projective {
    let hasher = MapToCurveBasedHasher::<
        G1Projective,
        ark_ff::field_hashers::DefaultFieldHasher<Sha256, 128>,
        WBMap<g1::Config>,
    >::new(dst)
    .expect("hash-to-curve setup");
    hasher.hash(msg).expect("hash-to-curve").into()
}

pub(crate) fn hash_to_g2(dst: &[u8], msg: &[u8]) -> G2Projective {
    let hasher = MapToCurveBasedHasher::<
        G2Projective,
        ark_ff::field_hashers::DefaultFieldHasher<Sha256, 128>,
        WBMap<g2::Config>,
    >::new(dst)
    .expect("hash-to-curve setup");
    hasher.hash(msg).expect("hash-to-curve").into()
}

/// An element of the (emulated) symmetric source group: a mirrored pair with
/// one encoding in each source group of the underlying pairing, always
/// transformed in lockstep. On the transparent backend both halves carry
/// their discrete logs, which stay equal under every operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceElement {
    Curve {
        g1: G1Projective,
        g2: G2Projective,
    },
    Transparent {
        log1: u64,
        log2: u64,
        modulus: u64,
    },
}

impl SourceElement {
    pub(crate) fn curve(g1: G1Projective, g2: G2Projective) -> SourceElement {
        SourceElement::Curve { g1, g2 }
    }

    pub(crate) fn curve_identity() -> SourceElement {
        use ark_std::Zero;
        SourceElement::Curve {
            g1: G1Projective::zero(),
            g2: G2Projective::zero(),
        }
    }

    pub(crate) fn transparent(log1: u64, log2: u64, modulus: u64) -> SourceElement {
        SourceElement::Transparent {
            log1,
            log2,
            modulus,
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            SourceElement::Curve { .. } => Backend::Curve,
            SourceElement::Transparent { .. } => Backend::Transparent,
        }
    }

    pub fn is_identity(&self) -> bool {
        use ark_std::Zero;
        match self {
            SourceElement::Curve { g1, g2 } => g1.is_zero() && g2.is_zero(),
            SourceElement::Transparent { log1, log2, .. } => *log1 == 0 && *log2 == 0,
        }
    }

    /// Discrete logs of the two halves relative to `(g₁, g₂)`. Oracle access
    /// for the transparent backend only.
    pub fn transparent_logs(&self) -> Option<(u64, u64)> {
        match self {
            SourceElement::Transparent { log1, log2, .. } => Some((*log1, *log2)),
            SourceElement::Curve { .. } => None,
        }
    }

    pub(crate) fn mul_raw(&self, other: &SourceElement) -> SourceElement {
        match (self, other) {
            (
                SourceElement::Curve { g1: a1, g2: a2 },
                SourceElement::Curve { g1: b1, g2: b2 },
            ) => SourceElement::Curve {
                g1: *a1 + *b1,
                g2: *a2 + *b2,
            },
            (
                SourceElement::Transparent {
                    log1: a1,
                    log2: a2,
                    modulus: p,
                },
                SourceElement::Transparent {
                    log1: b1,
                    log2: b2,
                    modulus: q,
                },
            ) => {
                assert_eq!(p, q, "elements from different transparent moduli");
                SourceElement::Transparent {
                    log1: transparent::add(*a1, *b1, *p),
                    log2: transparent::add(*a2, *b2, *p),
                    modulus: *p,
                }
            }
            _ => panic!("source elements from different backends"),
        }
    }

    pub(crate) fn exp_raw(&self, k: &Scalar) -> SourceElement {
        match (self, k) {
            (SourceElement::Curve { g1, g2 }, Scalar::Curve(k)) => SourceElement::Curve {
                g1: *g1 * k,
                g2: *g2 * k,
            },
            (
                SourceElement::Transparent {
                    log1,
                    log2,
                    modulus: p,
                },
                Scalar::Transparent { value, modulus: q },
            ) => {
                assert_eq!(p, q, "scalar and element from different moduli");
                SourceElement::Transparent {
                    log1: transparent::mul(*log1, *value, *p),
                    log2: transparent::mul(*log2, *value, *p),
                    modulus: *p,
                }
            }
            _ => panic!("scalar and element from different backends"),
        }
    }

    pub(crate) fn pair_raw(&self, other: &SourceElement) -> TargetElement {
        match (self, other) {
            (SourceElement::Curve { g1: a1, .. }, SourceElement::Curve { g2: b2, .. }) => {
                TargetElement::Curve(Bls12_381::pairing(*a1, *b2))
            }
            (
                SourceElement::Transparent {
                    log1: a1,
                    modulus: p,
                    ..
                },
                SourceElement::Transparent {
                    log2: b2,
                    modulus: q,
                    ..
                },
            ) => {
                assert_eq!(p, q, "elements from different transparent moduli");
                TargetElement::Transparent {
                    log: transparent::mul(*a1, *b2, *p),
                    modulus: *p,
                }
            }
            _ => panic!("source elements from different backends"),
        }
    }

    /// Canonical encoding: backend tag, then compressed points (curve) or
    /// fixed-width big-endian logs plus modulus (transparent).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            SourceElement::Curve { g1, g2 } => {
                out.push(Backend::Curve.tag());
                g1.into_affine()
                    .serialize_compressed(&mut out)
                    .expect("vec write");
                g2.into_affine()
                    .serialize_compressed(&mut out)
                    .expect("vec write");
            }
            SourceElement::Transparent {
                log1,
                log2,
                modulus,
            } => {
                out.push(Backend::Transparent.tag());
                out.extend_from_slice(&log1.to_be_bytes());
                out.extend_from_slice(&log2.to_be_bytes());
                out.extend_from_slice(&modulus.to_be_bytes());
            }
        }
        out
    }

    /// Size of [`SourceElement::to_bytes`] for the given backend.
    pub fn encoded_len(backend: Backend) -> usize {
        match backend {
            Backend::Curve => 1 + 48 + 96,
            Backend::Transparent => 1 + 24,
        }
    }

    pub fn from_bytes(bytes: &[u8], params: &GlobalParams) -> Result<SourceElement, GroupError> {
        if bytes.is_empty() {
            return Err(GroupError::Truncated);
        }
        let backend = Backend::from_tag(bytes[0]).ok_or(GroupError::UnknownBackendTag(bytes[0]))?;
        if backend != params.backend() {
            return Err(GroupError::BackendMismatch);
        }
        let body = &bytes[1..];
        match backend {
            Backend::Curve => {
                if body.len() != 48 + 96 {
                    return Err(GroupError::Truncated);
                }
                // Deserialization validates curve membership and the prime
                // order subgroup for each half.
                let g1 = G1Affine::deserialize_compressed(&body[..48])
                    .map_err(|_| GroupError::BadEncoding)?;
                let g2 = G2Affine::deserialize_compressed(&body[48..])
                    .map_err(|_| GroupError::BadEncoding)?;
                Ok(SourceElement::Curve {
                    g1: g1.into(),
                    g2: g2.into(),
                })
            }
            Backend::Transparent => {
                if body.len() != 24 {
                    return Err(GroupError::Truncated);
                }
                let log1 = u64::from_be_bytes(body[..8].try_into().unwrap());
                let log2 = u64::from_be_bytes(body[8..16].try_into().unwrap());
                let modulus = u64::from_be_bytes(body[16..].try_into().unwrap());
                if Some(modulus) != params.transparent_modulus() {
                    return Err(GroupError::BackendMismatch);
                }
                if log1 >= modulus || log2 >= modulus {
                    return Err(GroupError::BadEncoding);
                }
                Ok(SourceElement::Transparent {
                    log1,
                    log2,
                    modulus,
                })
            }
        }
    }
}

/// An element of the pairing target group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetElement {
    Curve(PairingOutput<Bls12_381>),
    Transparent { log: u64, modulus: u64 },
}

impl TargetElement {
    pub(crate) fn curve(v: PairingOutput<Bls12_381>) -> TargetElement {
        TargetElement::Curve(v)
    }

    pub(crate) fn curve_identity() -> TargetElement {
        use ark_std::Zero;
        TargetElement::Curve(PairingOutput::zero())
    }

    pub(crate) fn transparent(log: u64, modulus: u64) -> TargetElement {
        TargetElement::Transparent { log, modulus }
    }

    pub fn backend(&self) -> Backend {
        match self {
            TargetElement::Curve(_) => Backend::Curve,
            TargetElement::Transparent { .. } => Backend::Transparent,
        }
    }

    pub fn is_identity(&self) -> bool {
        use ark_std::Zero;
        match self {
            TargetElement::Curve(v) => v.is_zero(),
            TargetElement::Transparent { log, .. } => *log == 0,
        }
    }

    /// Discrete log relative to `ê(g, g)`. Oracle access for the transparent
    /// backend only.
    pub fn transparent_log(&self) -> Option<u64> {
        match self {
            TargetElement::Transparent { log, .. } => Some(*log),
            TargetElement::Curve(_) => None,
        }
    }

    pub(crate) fn mul_raw(&self, other: &TargetElement) -> TargetElement {
        match (self, other) {
            (TargetElement::Curve(a), TargetElement::Curve(b)) => TargetElement::Curve(*a + *b),
            (
                TargetElement::Transparent { log: a, modulus: p },
                TargetElement::Transparent { log: b, modulus: q },
            ) => {
                assert_eq!(p, q, "elements from different transparent moduli");
                TargetElement::Transparent {
                    log: transparent::add(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => panic!("target elements from different backends"),
        }
    }

    pub(crate) fn exp_raw(&self, k: &Scalar) -> TargetElement {
        match (self, k) {
            (TargetElement::Curve(v), Scalar::Curve(k)) => TargetElement::Curve(*v * *k),
            (
                TargetElement::Transparent { log, modulus: p },
                Scalar::Transparent { value, modulus: q },
            ) => {
                assert_eq!(p, q, "scalar and element from different moduli");
                TargetElement::Transparent {
                    log: transparent::mul(*log, *value, *p),
                    modulus: *p,
                }
            }
            _ => panic!("scalar and element from different backends"),
        }
    }

    pub(crate) fn inv_raw(&self) -> TargetElement {
        match self {
            TargetElement::Curve(v) => TargetElement::Curve(-*v),
            TargetElement::Transparent { log, modulus } => TargetElement::Transparent {
                log: transparent::neg(*log, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            TargetElement::Curve(v) => {
                out.push(Backend::Curve.tag());
                v.serialize_compressed(&mut out).expect("vec write");
            }
            TargetElement::Transparent { log, modulus } => {
                out.push(Backend::Transparent.tag());
                out.extend_from_slice(&log.to_be_bytes());
                out.extend_from_slice(&modulus.to_be_bytes());
            }
        }
        out
    }

    /// Size of [`TargetElement::to_bytes`] for the given backend.
    pub fn encoded_len(backend: Backend) -> usize {
        match backend {
            Backend::Curve => 1 + 576,
            Backend::Transparent => 1 + 16,
        }
    }

    pub fn from_bytes(bytes: &[u8], params: &GlobalParams) -> Result<TargetElement, GroupError> {
        if bytes.is_empty() {
            return Err(GroupError::Truncated);
        }
        let backend = Backend::from_tag(bytes[0]).ok_or(GroupError::UnknownBackendTag(bytes[0]))?;
        if backend != params.backend() {
            return Err(GroupError::BackendMismatch);
        }
        let body = &bytes[1..];
        match backend {
            Backend::Curve => {
                if body.len() != 576 {
                    return Err(GroupError::Truncated);
                }
                let v = PairingOutput::<Bls12_381>::deserialize_compressed(body)
                    .map_err(|_| GroupError::BadEncoding)?;
                Ok(TargetElement::Curve(v))
            }
            Backend::Transparent => {
                if body.len() != 16 {
                    return Err(GroupError::Truncated);
                }
                let log = u64::from_be_bytes(body[..8].try_into().unwrap());
                let modulus = u64::from_be_bytes(body[8..].try_into().unwrap());
                if Some(modulus) != params.transparent_modulus() {
                    return Err(GroupError::BackendMismatch);
                }
                if log >= modulus {
                    return Err(GroupError::BadEncoding);
                }
                Ok(TargetElement::Transparent { log, modulus })
            }
        }
    }
}
