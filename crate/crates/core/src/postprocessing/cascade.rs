use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::hash::{verification_hash, HASH_BITS};
use super::parity_of;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconcileConfig {
    /// Expected bit-error rate; sets the first-pass block size `0.73 / e`.
    pub error_rate: f64,
    pub max_passes: usize,
    /// Overrides the block size derived from `error_rate`.
    pub initial_block: Option<usize>,
}

impl Default for ReconcileConfig {
    fn default() -> Self {
        Self { error_rate: 0.05, max_passes: 4, initial_block: None }
    }
}

impl ReconcileConfig {
    pub fn for_error_rate(error_rate: f64) -> Self {
        Self { error_rate, ..Self::default() }
    }

    fn first_block(&self, n: usize) -> usize {
        let k = self
            .initial_block
            .unwrap_or_else(|| (0.73 / self.error_rate.max(1e-6)).ceil() as usize);
        k.clamp(1, n.div_ceil(2).max(1))
    }
}

/// One public parity disclosure by the combined side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityExchange {
    pub pass: usize,
    pub indices: Vec<usize>,
    pub parity: bool,
}

/// One public verification-hash comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HashCheck {
    pub pass: usize,
    pub seed: u64,
    pub value: u64,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconciliationResult {
    pub corrected_dealer_view: Vec<bool>,
    pub parity_bits_leaked: usize,
    pub hash_bits_leaked: usize,
    pub rounds: usize,
    pub converged: bool,
    /// Positions flipped in the dealer's string, in order.
    pub corrections: Vec<usize>,
    pub exchanges: Vec<ParityExchange>,
    pub hash_checks: Vec<HashCheck>,
}

impl ReconciliationResult {
    pub fn total_leakage(&self) -> usize {
        self.parity_bits_leaked + self.hash_bits_leaked
    }
}

/// [`reconcile_with`] under the default configuration.
pub fn reconcile<R: Rng + ?Sized>(dealer_bits: &[bool], combined_bits: &[bool], rng: &mut R) -> Result<ReconciliationResult> {
    reconcile_with(dealer_bits, combined_bits, &ReconcileConfig::default(), rng)
}

struct Pass {
    order: Vec<usize>,
    position: Vec<usize>,
    block: usize,
}

impl Pass {
    fn block_of(&self, bit: usize) -> usize {
        self.position[bit] / self.block
    }

    fn members(&self, b: usize) -> &[usize] {
        let end = ((b + 1) * self.block).min(self.order.len());
        &self.order[b * self.block..end]
    }

    fn n_blocks(&self) -> usize {
        self.order.len().div_ceil(self.block)
    }
}

struct Session<'a> {
    combined: &'a [bool],
    dealer: Vec<bool>,
    passes: Vec<Pass>,
    known: HashMap<(usize, usize), bool>,
    exchanges: Vec<ParityExchange>,
    corrections: Vec<usize>,
}

impl Session<'_> {
    fn disclose(&mut self, pass: usize, indices: &[usize]) -> bool {
        let parity = parity_of(self.combined, indices);
        self.exchanges.push(ParityExchange { pass, indices: indices.to_vec(), parity });
        parity
    }

    /// Locate one error in a block whose parities disagree.
    fn bisect(&mut self, pass: usize, indices: Vec<usize>) -> usize {
        let mut span = indices;
        while span.len() > 1 {
            let right = span.split_off(span.len() / 2);
            let revealed = self.disclose(pass, &span);
            if parity_of(&self.dealer, &span) == revealed {
                span = right;
            }
        }
        span[0]
    }

    fn correct(&mut self, pass: usize, block: usize) {
        let mut pending = vec![(pass, block)];
        while let Some((p, b)) = pending.pop() {
            let members = self.passes[p].members(b).to_vec();
            if parity_of(&self.dealer, &members) == self.known[&(p, b)] {
                continue;
            }
            let bit = self.bisect(p, members);
            self.dealer[bit] = !self.dealer[bit];
            self.corrections.push(bit);
            for (other, pass) in self.passes.iter().enumerate() {
                let ob = pass.block_of(bit);
                if let Some(&parity) = self.known.get(&(other, ob)) {
                    if parity_of(&self.dealer, pass.members(ob)) != parity {
                        pending.push((other, ob));
                    }
                }
            }
        }
    }
}

/// Bring the dealer's string into agreement with the XOR of the other
/// players' strings by public parity exchange over randomly permuted
/// blocks, checking a verification hash after every pass.
pub fn reconcile_with<R: Rng + ?Sized>(
    dealer_bits: &[bool],
    combined_bits: &[bool],
    config: &ReconcileConfig,
    rng: &mut R,
) -> Result<ReconciliationResult> {
    if dealer_bits.len() != combined_bits.len() {
        return Err(Error::DimensionMismatch { expected: dealer_bits.len(), found: combined_bits.len() });
    }
    let n = dealer_bits.len();
    let mut s = Session {
        combined: combined_bits,
        dealer: dealer_bits.to_vec(),
        passes: Vec::new(),
        known: HashMap::new(),
        exchanges: Vec::new(),
        corrections: Vec::new(),
    };
    let mut hash_checks = Vec::new();
    let mut converged = n == 0;
    let mut rounds = 0;
    let first = config.first_block(n);

    while !converged && rounds < config.max_passes {
        let pass = rounds;
        let block = first.saturating_mul(1 << pass.min(30)).min(n.div_ceil(2)).max(1);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut position = vec![0; n];
        for (slot, &bit) in order.iter().enumerate() {
            position[bit] = slot;
        }
        s.passes.push(Pass { order, position, block });
        for b in 0..s.passes[pass].n_blocks() {
            let members = s.passes[pass].members(b).to_vec();
            let parity = s.disclose(pass, &members);
            s.known.insert((pass, b), parity);
            if parity_of(&s.dealer, &members) != parity {
                s.correct(pass, b);
            }
        }
        rounds += 1;
        let seed: u64 = rng.random();
        let value = verification_hash(combined_bits, seed);
        let matched = verification_hash(&s.dealer, seed) == value;
        hash_checks.push(HashCheck { pass, seed, value, matched });
        converged = matched;
    }

    Ok(ReconciliationResult {
        parity_bits_leaked: s.exchanges.len(),
        hash_bits_leaked: HASH_BITS * hash_checks.len(),
        corrected_dealer_view: s.dealer,
        rounds,
        converged,
        corrections: s.corrections,
        exchanges: s.exchanges,
        hash_checks,
    })
}
