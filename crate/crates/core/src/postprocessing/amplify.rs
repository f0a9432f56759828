use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::analytics::tau_tilde;
use crate::rng::stream;
use crate::{Error, Result};

/// Output of privacy amplification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmplifiedKey {
    pub bits: Vec<bool>,
    pub input_length: usize,
    pub output_length: usize,
    pub hash_seed: u64,
}

/// Secret-key length after subtracting reconciliation leakage and a safety
/// margin from the lower-bound rate.
pub fn key_length(n: usize, p_est: f64, leakage: usize, safety: f64) -> Result<usize> {
    if !(0.0..1.0).contains(&safety) {
        return Err(Error::Domain(format!("safety margin {safety} outside [0, 1)")));
    }
    if p_est.is_nan() || p_est > 1.0 {
        return Err(Error::Domain(format!("estimated p = {p_est} exceeds 1")));
    }
    if p_est <= crate::protocol::solve_q() {
        return Ok(0);
    }
    let raw = n as f64 * tau_tilde(p_est).max(0.0) - leakage as f64 - safety * n as f64;
    Ok(raw.floor().max(0.0) as usize)
}

/// `T * bits` over GF(2) with a seeded random Toeplitz matrix `T`.
pub fn privacy_amplify(bits: &[bool], out_len: usize, hash_seed: u64) -> Result<AmplifiedKey> {
    let n = bits.len();
    if out_len > n {
        return Err(Error::Domain(format!("cannot extract {out_len} bits from {n}")));
    }
    let mut rng = stream(hash_seed, 0);
    let diagonals: Vec<bool> = (0..(n + out_len).saturating_sub(1)).map(|_| rng.random()).collect();
    let out = (0..out_len)
        .map(|i| {
            bits.iter()
                .enumerate()
                .fold(false, |acc, (j, &b)| acc ^ (b & diagonals[i + n - 1 - j]))
        })
        .collect();
    Ok(AmplifiedKey { bits: out, input_length: n, output_length: out_len, hash_seed })
}
