//! Holevo quantities of classical-quantum states built from a purification.
//!
//! The adversary holds the purifying environment `E` plus the outcomes of
//! whichever players collude with it. Everything here is computed from dense
//! matrices, so it serves as the reference against which closed-form
//! expressions are checked.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use super::state::{entropy_of_spectrum, hermitian_eigenvalues};
use super::{LocalBasis, StateVector, C64};
use crate::{Error, Result};

/// Environment state (unnormalised) for one outcome string of the measured
/// players; unmeasured players are traced out.
#[derive(Clone, Debug)]
pub struct Branch {
    /// `Some(bit)` for measured players, `None` for traced ones.
    pub outcomes: Vec<Option<bool>>,
    pub env: DMatrix<C64>,
}

impl Branch {
    pub fn probability(&self) -> f64 {
        self.env.trace().re
    }

    pub fn bit(&self, player: usize) -> bool {
        self.outcomes[player].expect("player was measured")
    }
}

/// Condition a purification `|Psi>_{A_1..A_N E}` on local measurements.
///
/// `bases[i]` is the basis of player `i`, or `None` to trace the player out.
pub fn conditional_environment(
    purified: &StateVector,
    n_players: usize,
    bases: &[Option<LocalBasis>],
) -> Result<Vec<Branch>> {
    if bases.len() != n_players {
        return Err(Error::DimensionMismatch { expected: n_players, found: bases.len() });
    }
    let player_dim = 1usize << n_players;
    if purified.dim() % player_dim != 0 || purified.dim() / player_dim != player_dim {
        return Err(Error::Layout(format!(
            "state of dimension {} is not a {n_players}-player purification",
            purified.dim()
        )));
    }
    let env_dim = purified.dim() / player_dim;
    let measured: Vec<usize> = (0..n_players).filter(|&i| bases[i].is_some()).collect();
    let traced: Vec<usize> = (0..n_players).filter(|&i| bases[i].is_none()).collect();
    let psi = purified.amplitudes();

    let n_out = 1usize << measured.len();
    let n_traced = 1usize << traced.len();
    // vectors[o][u] is the environment vector for outcome o and traced config u
    let mut vectors = vec![vec![DVector::<C64>::zeros(env_dim); n_traced]; n_out];
    let bit = |a: usize, player: usize| (a >> (n_players - 1 - player)) & 1;
    for a in 0..player_dim {
        let u = traced.iter().fold(0, |acc, &p| (acc << 1) | bit(a, p));
        let row = psi.rows(a * env_dim, env_dim);
        for (o, per_outcome) in vectors.iter_mut().enumerate() {
            let mut coeff = C64::new(1.0, 0.0);
            for (k, &p) in measured.iter().enumerate() {
                let ok = (o >> (measured.len() - 1 - k)) & 1;
                coeff *= bases[p].expect("measured").bra(ok, bit(a, p));
            }
            if coeff.norm_sqr() > 0.0 {
                per_outcome[u] += row * coeff;
            }
        }
    }

    Ok(vectors
        .into_iter()
        .enumerate()
        .map(|(o, vs)| {
            let mut env = DMatrix::<C64>::zeros(env_dim, env_dim);
            for v in &vs {
                env += v * v.adjoint();
            }
            let mut outcomes = vec![None; n_players];
            for (k, &p) in measured.iter().enumerate() {
                outcomes[p] = Some((o >> (measured.len() - 1 - k)) & 1 == 1);
            }
            Branch { outcomes, env }
        })
        .collect())
}

/// `sum_{k,s} |k><k| ⊗ |s><s| ⊗ sigma_{k,s}` with unnormalised blocks: `k`
/// is the secret variable, `s` the adversary's classical side information.
#[derive(Clone, Debug, Default)]
pub struct CqState {
    blocks: BTreeMap<(usize, usize), DMatrix<C64>>,
}

impl CqState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: usize, side: usize, block: &DMatrix<C64>, weight: f64) {
        let scaled = block * C64::from(weight);
        self.blocks
            .entry((key, side))
            .and_modify(|b| *b += &scaled)
            .or_insert(scaled);
    }

    pub fn total(&self) -> f64 {
        self.blocks.values().map(|b| b.trace().re).sum()
    }

    /// `chi(K : S E) = S(rho_SE) - sum_k p(k) S(rho_SE | k)`.
    pub fn holevo(&self) -> Result<f64> {
        let total = self.total();
        let mut by_side: BTreeMap<usize, DMatrix<C64>> = BTreeMap::new();
        let mut by_key: BTreeMap<usize, Vec<&DMatrix<C64>>> = BTreeMap::new();
        for (&(k, s), b) in &self.blocks {
            by_side.entry(s).and_modify(|m| *m += b).or_insert_with(|| b.clone());
            by_key.entry(k).or_default().push(b);
        }
        let joint = block_entropy(by_side.values(), total)?;
        let mut conditional = 0.0;
        for blocks in by_key.values() {
            let pk: f64 = blocks.iter().map(|b| b.trace().re).sum();
            if pk <= 0.0 {
                continue;
            }
            conditional += (pk / total) * block_entropy(blocks.iter().copied(), pk)?;
        }
        Ok(joint - conditional)
    }
}

/// Entropy of a block-diagonal operator with blocks summing to trace `total`.
fn block_entropy<'a>(blocks: impl Iterator<Item = &'a DMatrix<C64>>, total: f64) -> Result<f64> {
    let mut eigs = Vec::new();
    for b in blocks {
        eigs.extend(hermitian_eigenvalues(b));
    }
    entropy_of_spectrum(&eigs, total)
}
