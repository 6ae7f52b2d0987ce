//! Jammer-resilient joint channel estimation and data detection for the
//! massive MU-MIMO uplink.
//!
//! - [`linalg`]: the small dense complex linear algebra layer.
//! - [`channel`]: frame synthesis (Rayleigh channels, Hadamard pilots, QPSK,
//!   jammers J1-J4 and pilot impersonation).
//! - [`maed`]: the joint detector.
//! - [`baselines`]: LMMSE, genie-aided projection and the jammerless bound.
//! - [`harness`]: Monte-Carlo BER sweeps, CSV output and figure presets.

pub mod baselines;
pub mod channel;
pub mod cli;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod maed;
pub mod qpsk;
pub mod rng;
pub mod selftest;

pub use error::{Error, Result};
