//! Secrecy rates for wiretap channels with feedback.
//!
//! * [`info_theory`]: exact entropies and mutual informations on finite tables.
//! * [`region`]: achievable rate of a discrete system whose backward channel
//!   supplies a one-time-pad key.
//! * [`bsc`]: the binary symmetric scheme combining key generation with
//!   modulo-added feedback, its optimal time-share and rate surfaces.
//! * [`gaussian`]: Schalkwijk-Kailath coding over a correlated-noise
//!   Gaussian wiretap channel and its leakage analysis.
//! * [`cli`]: the command implementations behind the `feedsec` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bsc;
pub mod cli;
pub mod error;
pub mod fmt;
pub mod gaussian;
pub mod info_theory;
pub mod region;

pub use error::{Error, Result};
