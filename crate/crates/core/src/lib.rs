//! Empirical cryptanalysis by neural mutual-information estimation.
//!
//! Build plaintext/ciphertext pairs for a cipher ([`ciphers`], [`huncc`]) from
//! a plaintext source ([`sources`]), then train a statistic network on them
//! ([`mine`]) to lower-bound `I(X;Y)` in nats. [`oracle`] computes exact MI on
//! small alphabets for validation and [`harness`] runs named experiments,
//! sweeps and reports.

pub mod ciphers;
pub mod error;
pub mod gf256;
pub mod harness;
pub mod huncc;
pub mod mine;
pub mod oracle;
pub mod seed;
pub mod sources;

pub use error::{Error, Result};
