//! Scalars modulo the group order, on either backend.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use ark_bls12_381::Fr;
use ark_ff::{Field, PrimeField};
use ark_std::Zero;
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};

use super::{transparent, Backend, GlobalParams, GroupError};

/// An element of `Z_p` for the active backend's `p`. Transparent scalars
/// carry their modulus so arithmetic stays closed without a context handle.
///
/// Mixing scalars from different backends (or different transparent moduli)
/// is a programming error and panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scalar {
    Curve(Fr),
    Transparent { value: u64, modulus: u64 },
}

impl Scalar {
    pub(crate) fn curve_from_u64(v: u64) -> Scalar {
        Scalar::Curve(Fr::from(v))
    }

    pub(crate) fn curve_from_wide_bytes(bytes: &[u8]) -> Scalar {
        Scalar::Curve(Fr::from_le_bytes_mod_order(bytes))
    }

    pub(crate) fn transparent(value: u64, modulus: u64) -> Scalar {
        debug_assert!(value < modulus);
        Scalar::Transparent { value, modulus }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Curve(_) => Backend::Curve,
            Scalar::Transparent { .. } => Backend::Transparent,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Curve(v) => v.is_zero(),
            Scalar::Transparent { value, .. } => *value == 0,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Curve(v) => v.inverse().map(Scalar::Curve),
            Scalar::Transparent { value, modulus } => {
                transparent::inv(*value, *modulus).map(|v| Scalar::transparent(v, *modulus))
            }
        }
    }

    /// The transparent backend's raw residue. Test-oracle access.
    pub fn transparent_value(&self) -> Option<u64> {
        match self {
            Scalar::Transparent { value, .. } => Some(*value),
            Scalar::Curve(_) => None,
        }
    }

    /// Canonical encoding: backend tag, then a fixed-width big-endian
    /// integer (32 bytes on the curve backend, value plus modulus at 8 bytes
    /// each on the transparent backend).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        match self {
            Scalar::Curve(v) => {
                out.push(Backend::Curve.tag());
                let mut le = Vec::new();
                v.serialize_compressed(&mut le).expect("vec write");
                le.reverse();
                out.extend_from_slice(&le);
            }
            Scalar::Transparent { value, modulus } => {
                out.push(Backend::Transparent.tag());
                out.extend_from_slice(&value.to_be_bytes());
                out.extend_from_slice(&modulus.to_be_bytes());
            }
        }
        out
    }

    /// Size of [`Scalar::to_bytes`] for the given backend.
    pub fn encoded_len(backend: Backend) -> usize {
        match backend {
            Backend::Curve => 1 + 32,
            Backend::Transparent => 1 + 16,
        }
    }

    pub fn from_bytes(bytes: &[u8], params: &GlobalParams) -> Result<Scalar, GroupError> {
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
                if body.len() != 32 {
                    return Err(GroupError::Truncated);
                }
                let mut le = body.to_vec();
                le.reverse();
                let v = Fr::deserialize_compressed(le.as_slice())
                    .map_err(|_| GroupError::BadEncoding)?;
                Ok(Scalar::Curve(v))
            }
            Backend::Transparent => {
                if body.len() != 16 {
                    return Err(GroupError::Truncated);
                }
                let value = u64::from_be_bytes(body[..8].try_into().unwrap());
                let modulus = u64::from_be_bytes(body[8..].try_into().unwrap());
                if Some(modulus) != params.transparent_modulus() {
                    return Err(GroupError::BackendMismatch);
                }
                if value >= modulus {
                    return Err(GroupError::BadEncoding);
                }
                Ok(Scalar::transparent(value, modulus))
            }
        }
    }

    fn zip(a: &Scalar, b: &Scalar) -> ZippedScalars {
        match (a, b) {
            (Scalar::Curve(x), Scalar::Curve(y)) => ZippedScalars::Curve(*x, *y),
            (
                Scalar::Transparent { value: x, modulus: p },
                Scalar::Transparent { value: y, modulus: q },
            ) => {
                assert_eq!(p, q, "scalars from different transparent moduli");
                ZippedScalars::Transparent(*x, *y, *p)
            }
            _ => panic!("scalars from different backends"),
        }
    }
}

enum ZippedScalars {
    Curve(Fr, Fr),
    Transparent(u64, u64, u64),
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match Scalar::zip(self, rhs) {
            ZippedScalars::Curve(x, y) => Scalar::Curve(x + y),
            ZippedScalars::Transparent(x, y, p) => {
                Scalar::transparent(transparent::add(x, y, p), p)
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match Scalar::zip(self, rhs) {
            ZippedScalars::Curve(x, y) => Scalar::Curve(x - y),
            ZippedScalars::Transparent(x, y, p) => {
                Scalar::transparent(transparent::sub(x, y, p), p)
            }
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match Scalar::zip(self, rhs) {
            ZippedScalars::Curve(x, y) => Scalar::Curve(x * y),
            ZippedScalars::Transparent(x, y, p) => {
                Scalar::transparent(transparent::mul(x, y, p), p)
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Curve(v) => Scalar::Curve(-*v),
            Scalar::Transparent { value, modulus } => {
                Scalar::transparent(transparent::neg(*value, *modulus), *modulus)
            }
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
