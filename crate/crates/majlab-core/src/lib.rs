//! Core library for majority-dynamics experiments on G(n,p) random graphs:
//! deterministic graph sampling, synchronous k-state majority updates with
//! keyed tie resolution, initial-configuration statistics, exact combinatorial
//! oracles for neighbor-profile probabilities, and Monte Carlo claim
//! verifiers.
//!
//! The crate is no_std + alloc; all floating-point special functions come
//! from `libm`. File formats, CLI, and parallel trial execution live in the
//! companion `majlab` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dynamics;
pub mod graph;
pub mod init;
pub mod oracle;
pub mod rng;
pub mod verify;

use alloc::string::String;

/// Errors shared across the library. Precondition violations map to
/// `InvalidArgument`, oversized exact-enumeration requests to `SizeLimit`,
/// and the dense-adjacency memory cap to `MemoryGuard`.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidArgument(String),
    SizeLimit(String),
    MemoryGuard { required_bytes: u64 },
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::SizeLimit(msg) => write!(f, "size limit exceeded: {msg}"),
            Error::MemoryGuard { required_bytes } => write!(
                f,
                "dense adjacency would need {required_bytes} bytes; refusing (guard at n <= {})",
                graph::DENSE_MAX_N
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
