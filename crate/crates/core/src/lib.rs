//! Simulation and analytics for the (N-1, N-1)-threshold quantum secret
//! sharing protocol on GHZ-diagonal states.
//!
//! The crate is organised bottom-up:
//!
//! * [`quantum`] - dense state vectors and density matrices, the GHZ basis,
//!   the Mermin operator, X/Y measurement statistics, purification and
//!   entropies.
//! * [`depolarization`] - the twirl onto GHZ-diagonal form.
//! * [`analytics`] - closed-form mutual information, Holevo quantities,
//!   Devetak-Winter rates and bounds.
//! * [`adversary`] - Eve's flag measurement and dishonest-player strategies.
//! * [`protocol`] - the dealer/player state machine with its security check.
//! * [`postprocessing`] - Cascade reconciliation and Toeplitz hashing.
//! * [`verify`] - self-check suites used by the command-line tool.
//!
//! Player `A_1` (the dealer) is always the most significant bit of a
//! computational-basis index, and all logarithms are base 2.

pub mod adversary;
pub mod analytics;
pub mod depolarization;
pub mod error;
pub mod postprocessing;
pub mod protocol;
pub mod quantum;
pub mod random;
pub mod rng;
pub mod verify;

pub use error::{Error, Result};
