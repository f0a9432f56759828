//! Classical post-processing: Cascade-style reconciliation, a verification
//! hash, and Toeplitz privacy amplification.

mod amplify;
mod cascade;
mod hash;

pub use amplify::{key_length, privacy_amplify, AmplifiedKey};
pub use cascade::{reconcile, reconcile_with, HashCheck, ParityExchange, ReconcileConfig, ReconciliationResult};
pub use hash::{gf64_mul, verification_hash, HASH_BITS};

pub(crate) fn parity_of(bits: &[bool], indices: &[usize]) -> bool {
    indices.iter().fold(false, |acc, &i| acc ^ bits[i])
}
