//! Decentralized key-policy attribute-based encryption with anonymous key
//! issuing.
//!
//! Any number of independent attribute authorities hand out decryption keys
//! for threshold access trees; data owners encrypt under attribute sets that
//! may span several authorities; a user decrypts iff every involved
//! authority's tree is satisfied. Key issuing can run blindly: the authority
//! computes key material on blinded bases and never learns the user
//! identifier that ties the user's shares together.
//!
//! The crate is `no_std` (alloc required). IO, file formats and the network
//! service live in the companion `dkpabe` crate.
//!
//! Module map:
//!
//! * [`groups`] — bilinear-group abstraction with a production pairing
//!   backend (BLS12-381) and a transparent discrete-log test oracle, plus
//!   per-context operation counters.
//! * [`access`] — threshold access trees, secret sharing over trees and
//!   Lagrange reconstruction.
//! * [`kpabe`] — global setup, authority setup, key generation, encryption
//!   and decryption.
//! * [`zkp`] — Pedersen commitments and the two sigma-protocol proof systems
//!   used during issuing.
//! * [`twopc`] — the two-party blinded-sum functionality (`x = (v+u)·ρ`).
//! * [`issuing`] — the anonymous key-issuing protocol as a pair of session
//!   state machines.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod access;
pub mod groups;
pub mod issuing;
pub mod kpabe;
pub mod twopc;
pub mod zkp;

pub use groups::{
    Backend, BackendConfig, GlobalParams, GroupContext, GroupError, OpCounts, Scalar,
    SourceElement, TargetElement,
};
