//! Dense complex linear algebra for small multi-qubit systems.

mod ghz;
pub mod holevo;
mod measurement;
mod mermin;
mod state;

pub use ghz::{ghz_basis_vector, ghz_diagonal_density, purify, GhzSpectrum, Sign};
pub use measurement::{
    dense_outcome_distribution, joint_outcome_distribution, local_outcome_distribution,
    sample_round, sample_round_with_bases, component_outcome_distribution, Basis, BasisChoice,
    LocalBasis, OutcomeSampler, RoundRecord,
};
pub(crate) use measurement::{draw_index, outcome_bits};
pub use mermin::{mermin_expectation, mermin_operator};
pub use state::{partial_trace, von_neumann_entropy, DensityMatrix, StateVector};

pub use num_complex::Complex64 as C64;

/// Largest player count handled by the dense routines (4096 x 4096 matrices).
pub const MAX_PLAYERS: usize = 12;

/// Squared-norm / trace / Hermiticity tolerance for states.
pub const STATE_TOL: f64 = 1e-12;

/// Eigenvalues in `[-PSD_TOL, 0)` are treated as numerical noise and clipped.
pub const PSD_TOL: f64 = 1e-10;

/// Reject player counts outside `[3, MAX_PLAYERS]`.
pub fn check_players(n_players: usize) -> crate::Result<()> {
    if n_players < 3 {
        return Err(crate::Error::TooFewPlayers(n_players));
    }
    if n_players > MAX_PLAYERS {
        return Err(crate::Error::DimensionCap { n_players, cap: MAX_PLAYERS });
    }
    Ok(())
}

/// Shannon entropy in bits of a (not necessarily normalised) weight list,
/// using `0 log 0 = 0`.
pub fn shannon_entropy(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum()
}
