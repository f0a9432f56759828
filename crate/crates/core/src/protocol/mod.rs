//! The dealer/player protocol over a simulated authenticated broadcast
//! channel: depolarization, measurement, two sifting steps, the security
//! check, reconciliation and privacy amplification.

mod security;
mod source;
mod transcript;

pub use security::{compute_sn, eq1_satisfied, sampling_fluctuation_probe, solve_q, threshold_residual, SecurityCheckReport};
pub use source::{IidDenseSource, IidSpectrumSource, SequenceSource, SourceState, StateSource};
pub use transcript::{speaker, Transcript, TranscriptRecord};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::adversary::{apply_strategy, honest_parity_inference, AdversaryAssignment, Announcement, Phase, Strategy};
use crate::depolarization::ghz_project;
use crate::postprocessing::{key_length, privacy_amplify, reconcile_with, ReconcileConfig};
use crate::quantum::{
    component_outcome_distribution, draw_index, outcome_bits, Basis, BasisChoice, GhzSpectrum, LocalBasis,
    OutcomeSampler, RoundRecord, Sign,
};
use crate::rng::{stream, StreamRng};
use crate::{Error, Result};

/// When Eve reads her flag register.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EveTiming {
    /// Every round, right after the players measure.
    AfterMeasurement,
    /// Only the key rounds, once Sifting 2 is public.
    #[default]
    AfterSifting2,
}

fn default_epsilon() -> f64 {
    0.4
}
fn default_epsilon_prime() -> f64 {
    0.2
}
fn default_q() -> f64 {
    solve_q()
}
fn default_true() -> bool {
    true
}
fn default_safety() -> f64 {
    0.05
}
fn default_passes() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolConfig {
    pub n_players: usize,
    /// Number of key rounds (and of security-check rounds).
    pub n: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_epsilon_prime")]
    pub epsilon_prime: f64,
    #[serde(default = "default_q")]
    pub q_threshold: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub adversary: AdversaryAssignment,
    /// Fresh random announcement order per Sifting-1 round.
    #[serde(default = "default_true")]
    pub randomize_order: bool,
    #[serde(default)]
    pub eve_timing: EveTiming,
    /// Finite-size margin subtracted from the key length, as a fraction of `n`.
    #[serde(default = "default_safety")]
    pub safety: f64,
    #[serde(default = "default_passes")]
    pub max_passes: usize,
}

impl ProtocolConfig {
    pub fn new(n_players: usize, n: usize, seed: u64) -> Self {
        Self {
            n_players,
            n,
            epsilon: default_epsilon(),
            epsilon_prime: default_epsilon_prime(),
            q_threshold: default_q(),
            seed,
            adversary: AdversaryAssignment::none(),
            randomize_order: true,
            eve_timing: EveTiming::default(),
            safety: default_safety(),
            max_passes: default_passes(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        crate::quantum::check_players(self.n_players)?;
        if self.n == 0 {
            return Err(Error::Config("block size n must be positive".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon_prime > 0.0 && self.epsilon_prime < self.epsilon) {
            return Err(Error::Config(format!(
                "need 0 < epsilon_prime < epsilon, got {} and {}",
                self.epsilon_prime, self.epsilon
            )));
        }
        if !(0.5..=1.0).contains(&self.q_threshold) {
            return Err(Error::Config(format!("threshold {} outside [0.5, 1]", self.q_threshold)));
        }
        if !(0.0..1.0).contains(&self.safety) {
            return Err(Error::Config(format!("safety {} outside [0, 1)", self.safety)));
        }
        self.adversary.validate(self.n_players)
    }

    /// `ceil((4 + epsilon) n)`.
    pub fn total_rounds(&self) -> usize {
        ((4.0 + self.epsilon) * self.n as f64).ceil() as usize
    }

    /// `ceil((2 + epsilon') n)`.
    pub fn sifting1_rounds(&self) -> usize {
        ((2.0 + self.epsilon_prime) * self.n as f64).ceil() as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProtocolStatus {
    Completed,
    AbortedSifting1,
    AbortedSecurityCheck,
    AbortedSifting2,
    /// Reconciliation did not reach agreement within the pass budget.
    AbortedPostProcessing,
}

/// What Eve and her colluders inferred on the key rounds.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EveReport {
    pub timing: EveTiming,
    pub rounds_measured: usize,
    /// Key rounds on which the XOR of the honest players' outcomes was predicted.
    pub predictions: usize,
    pub correct_predictions: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rounds_generated: usize,
    pub sifting1_opened: usize,
    pub sifting1_retained: usize,
    pub sifting2_candidates: usize,
    pub sifting2_retained: usize,
    /// `S~_n` on the key rounds, known only to the simulator.
    pub key_block_sn: Option<i64>,
    pub parity_bits_leaked: usize,
    pub hash_bits_leaked: usize,
    pub reconciliation_passes: usize,
    pub corrections: usize,
    pub key_length: usize,
    pub eve: Option<EveReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolOutcome {
    pub status: ProtocolStatus,
    pub dealer_key: Vec<bool>,
    /// Final keys of players `A_2 .. A_N`, in order.
    pub player_keys: Vec<Vec<bool>>,
    pub transcript: Transcript,
    /// Absent when the run aborts before the security check.
    pub report: Option<SecurityCheckReport>,
    pub diagnostics: Diagnostics,
}

impl ProtocolOutcome {
    /// Bitwise XOR of the non-dealer keys.
    pub fn combined_player_key(&self) -> Vec<bool> {
        let len = self.dealer_key.len();
        self.player_keys.iter().fold(vec![false; len], |acc, k| {
            acc.iter().zip(k).map(|(a, b)| a ^ b).collect()
        })
    }
}

/// Stream identifiers derived from the protocol seed.
mod streams {
    pub const MEASUREMENT: u64 = 0;
    pub const DEALER: u64 = 1;
    pub const ORDER: u64 = 2;
    pub const STRATEGY: u64 = 3;
    pub const RECONCILE: u64 = 4;
    pub const AMPLIFY: u64 = 5;
    pub const EVE: u64 = 6;
}

struct Round {
    spectrum: GhzSpectrum,
    actual: Vec<LocalBasis>,
    record: RoundRecord,
    flag: Option<(usize, Sign)>,
}

struct Run<'a> {
    config: &'a ProtocolConfig,
    strategies: Vec<Strategy>,
    transcript: Transcript,
    diagnostics: Diagnostics,
    dealer_rng: StreamRng,
    order_rng: StreamRng,
    strategy_rng: StreamRng,
    eve_rng: StreamRng,
}

impl Run<'_> {
    fn announcers(&mut self) -> Vec<usize> {
        let mut order: Vec<usize> = (1..self.config.n_players).collect();
        if self.config.randomize_order {
            order.shuffle(&mut self.order_rng);
        }
        order
    }

    fn dealer_says(&mut self, round: Option<usize>, kind: &str, payload: serde_json::Value) {
        self.transcript.push(round, speaker(0), kind, payload);
    }

    fn abort(mut self, status: ProtocolStatus, stage: &str, report: Option<SecurityCheckReport>) -> ProtocolOutcome {
        self.dealer_says(None, "abort", json!({ "stage": stage }));
        ProtocolOutcome {
            status,
            dealer_key: Vec::new(),
            player_keys: vec![Vec::new(); self.config.n_players - 1],
            transcript: self.transcript,
            report,
            diagnostics: self.diagnostics,
        }
    }

    /// Eve's flag drawn from its posterior given the measured outcomes.
    fn eve_flag(&mut self, round: &Round) -> (usize, Sign) {
        let n = self.config.n_players;
        let m = round.record.outcomes.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        let weights: Vec<(usize, Sign, f64)> = round
            .spectrum
            .components()
            .map(|(j, s, w)| (j, s, w * component_outcome_distribution(n, j, s, &round.actual)[m]))
            .collect();
        let probs: Vec<f64> = weights.iter().map(|w| w.2).collect();
        let (j, s, _) = weights[draw_index(&probs, &mut self.eve_rng)];
        (j, s)
    }
}

fn measure(
    config: &ProtocolConfig,
    strategies: &[Strategy],
    spectrum: GhzSpectrum,
    sampler: &mut Option<OutcomeSampler>,
    rng: &mut StreamRng,
    eve_rng: &mut StreamRng,
) -> Result<Round> {
    let n = config.n_players;
    let (labels, actual): (Vec<Basis>, Vec<LocalBasis>) =
        strategies.iter().map(|s| s.choose_measurement(rng)).unzip();
    let eve_first = config.adversary.eve_colludes && config.eve_timing == EveTiming::AfterMeasurement;
    let (outcomes, flag) = if eve_first {
        let probs: Vec<f64> = spectrum.components().map(|c| c.2).collect();
        let idx = draw_index(&probs, eve_rng);
        let (j, s, _) = spectrum.components().nth(idx).expect("index in range");
        let dist = component_outcome_distribution(n, j, s, &actual);
        (outcome_bits(n, draw_index(&dist, rng)), Some((j, s)))
    } else {
        if sampler.as_ref().is_none_or(|s| s.spectrum() != &spectrum) {
            *sampler = Some(OutcomeSampler::new(spectrum.clone()));
        }
        (sampler.as_mut().expect("initialised").sample(&actual, rng)?, None)
    };
    let record = RoundRecord::new(BasisChoice(labels), outcomes)?;
    Ok(Round { spectrum, actual, record, flag })
}

/// Execute the full protocol on states drawn from `source`.
///
/// `strategies` holds one entry per player (empty means everyone is
/// honest); non-honest strategies are only allowed for players listed as
/// dishonest in the configuration.
pub fn run_protocol(config: &ProtocolConfig, source: &mut dyn StateSource, strategies: &[Strategy]) -> Result<ProtocolOutcome> {
    config.validate()?;
    let n_players = config.n_players;
    if source.n_players() != n_players {
        return Err(Error::DimensionMismatch { expected: n_players, found: source.n_players() });
    }
    let strategies: Vec<Strategy> = if strategies.is_empty() {
        vec![Strategy::Honest; n_players]
    } else if strategies.len() == n_players {
        strategies.to_vec()
    } else {
        return Err(Error::DimensionMismatch { expected: n_players, found: strategies.len() });
    };
    for (i, s) in strategies.iter().enumerate() {
        s.validate()?;
        if !s.is_honest() && !config.adversary.dishonest.contains(&i) {
            return Err(Error::Config(format!("player {} has a strategy but is not dishonest", i + 1)));
        }
    }

    let seed = config.seed;
    let mut measure_rng = stream(seed, streams::MEASUREMENT);
    let mut run = Run {
        config,
        strategies,
        transcript: Transcript::default(),
        diagnostics: Diagnostics::default(),
        dealer_rng: stream(seed, streams::DEALER),
        order_rng: stream(seed, streams::ORDER),
        strategy_rng: stream(seed, streams::STRATEGY),
        eve_rng: stream(seed, streams::EVE),
    };

    // Depolarization and measurement.
    let total = config.total_rounds();
    let mut sampler = None;
    let mut rounds = Vec::with_capacity(total);
    for i in 0..total {
        let state = source.next_state().ok_or(Error::SourceExhausted(i))?;
        let spectrum = match state {
            SourceState::Spectrum(s) => {
                if s.n_players() != n_players {
                    return Err(Error::DimensionMismatch { expected: n_players, found: s.n_players() });
                }
                s
            }
            SourceState::Dense(rho) => ghz_project(&rho, n_players)?,
        };
        rounds.push(measure(config, &run.strategies, spectrum, &mut sampler, &mut measure_rng, &mut run.eve_rng)?);
    }
    run.diagnostics.rounds_generated = total;

    // Sifting 1.
    let mut order: Vec<usize> = (0..total).collect();
    order.shuffle(&mut run.dealer_rng);
    let mut opened: Vec<usize> = order[..config.sifting1_rounds().min(total)].to_vec();
    opened.sort_unstable();
    run.dealer_says(None, "sifting1_select", json!({ "rounds": opened }));
    let mut retained = Vec::new();
    for &r in &opened {
        let mut announced = rounds[r].record.clone();
        for player in run.announcers() {
            let a = apply_strategy(&run.strategies[player], &rounds[r].record, player, Phase::Sifting1, &mut run.strategy_rng);
            if let Announcement::BasisOutcome { basis, outcome } = a {
                announced.bases.0[player] = basis;
                announced.outcomes[player] = outcome;
            }
            run.transcript.push(Some(r), speaker(player), "sifting1_announce", serde_json::to_value(a).expect("serialisable"));
        }
        if announced.bases.y_count() % 2 == 0 {
            retained.push(announced);
        }
    }
    run.diagnostics.sifting1_opened = opened.len();
    run.diagnostics.sifting1_retained = retained.len();
    if retained.len() < config.n {
        return Ok(run.abort(ProtocolStatus::AbortedSifting1, "sifting1", None));
    }

    // Security check.
    retained.shuffle(&mut run.dealer_rng);
    let report = compute_sn(&retained[..config.n], config.q_threshold)?;
    run.dealer_says(
        None,
        "security_check",
        json!({ "s_n": report.s_n, "n": report.n, "ratio": report.ratio, "passed": report.passed }),
    );
    if !report.passed {
        return Ok(run.abort(ProtocolStatus::AbortedSecurityCheck, "security_check", Some(report)));
    }

    // Sifting 2.
    let mut is_opened = vec![false; total];
    opened.iter().for_each(|&r| is_opened[r] = true);
    let candidates: Vec<usize> = (0..total).filter(|&r| !is_opened[r]).collect();
    run.diagnostics.sifting2_candidates = candidates.len();
    let mut even = Vec::new();
    for &r in &candidates {
        let dealer_basis = rounds[r].record.bases.0[0];
        run.dealer_says(Some(r), "sifting2_announce", json!({ "kind": "basis", "basis": dealer_basis }));
        for player in run.announcers() {
            let a = apply_strategy(&run.strategies[player], &rounds[r].record, player, Phase::Sifting2, &mut run.strategy_rng);
            run.transcript.push(Some(r), speaker(player), "sifting2_announce", serde_json::to_value(a).expect("serialisable"));
            if a == Announcement::Withheld {
                return Ok(run.abort(ProtocolStatus::AbortedSifting2, "sifting2", Some(report)));
            }
        }
        if rounds[r].record.bases.y_count() % 2 == 0 {
            even.push(r);
        }
    }
    run.diagnostics.sifting2_retained = even.len();
    if even.len() < config.n {
        return Ok(run.abort(ProtocolStatus::AbortedSifting2, "sifting2", Some(report)));
    }
    even.shuffle(&mut run.dealer_rng);
    let mut key_rounds = even[..config.n].to_vec();
    key_rounds.sort_unstable();
    run.dealer_says(None, "sifting2_select", json!({ "rounds": key_rounds }));

    // Raw key bits.
    let mut dealer_bits = Vec::with_capacity(config.n);
    let mut player_bits = vec![Vec::with_capacity(config.n); n_players - 1];
    for &r in &key_rounds {
        let rec = &rounds[r].record;
        dealer_bits.push(rec.outcomes[0] ^ (rec.bases.y_count() % 4 == 2));
        for (p, bits) in player_bits.iter_mut().enumerate() {
            bits.push(rec.outcomes[p + 1]);
        }
    }
    let combined: Vec<bool> = (0..config.n).map(|i| player_bits.iter().fold(false, |a, b| a ^ b[i])).collect();
    let agree = dealer_bits.iter().zip(&combined).filter(|(a, b)| a == b).count() as i64;
    run.diagnostics.key_block_sn = Some(2 * agree - config.n as i64);

    if config.adversary.eve_colludes {
        let mut eve = EveReport { timing: config.eve_timing, ..EveReport::default() };
        eve.rounds_measured = match config.eve_timing {
            EveTiming::AfterMeasurement => total,
            EveTiming::AfterSifting2 => key_rounds.len(),
        };
        for &r in &key_rounds {
            let flag = match rounds[r].flag {
                Some(f) => f,
                None => run.eve_flag(&rounds[r]),
            };
            let rec = &rounds[r].record;
            let known: Vec<(usize, bool)> = config.adversary.dishonest.iter().map(|&i| (i, rec.outcomes[i])).collect();
            let predicted = honest_parity_inference(flag.0, flag.1, &rec.bases, &known)?;
            let actual = (0..n_players)
                .filter(|i| !config.adversary.dishonest.contains(i))
                .fold(false, |acc, i| acc ^ rec.outcomes[i]);
            eve.predictions += 1;
            eve.correct_predictions += usize::from(predicted == actual);
        }
        run.diagnostics.eve = Some(eve);
    }

    // Reconciliation.
    // Two-sigma upper estimate of the error rate from the check block.
    let e_est = 0.5 * (1.0 - report.ratio);
    let hint = (e_est + 2.0 * (e_est.max(1.0 / report.n as f64) / report.n as f64).sqrt()).clamp(1e-3, 0.5);
    let rec_cfg = ReconcileConfig { max_passes: config.max_passes, ..ReconcileConfig::for_error_rate(hint) };
    let result = reconcile_with(&dealer_bits, &combined, &rec_cfg, &mut stream(seed, streams::RECONCILE))?;
    for e in &result.exchanges {
        run.transcript.push(None, "players", "parity", json!({ "pass": e.pass, "indices": e.indices, "parity": e.parity }));
    }
    for h in &result.hash_checks {
        run.transcript.push(None, "players", "verification_hash", json!({ "pass": h.pass, "seed": h.seed, "value": h.value }));
        run.dealer_says(None, "verification_result", json!({ "pass": h.pass, "matched": h.matched }));
    }
    run.diagnostics.parity_bits_leaked = result.parity_bits_leaked;
    run.diagnostics.hash_bits_leaked = result.hash_bits_leaked;
    run.diagnostics.reconciliation_passes = result.rounds;
    run.diagnostics.corrections = result.corrections.len();
    if !result.converged {
        return Ok(run.abort(ProtocolStatus::AbortedPostProcessing, "reconciliation", Some(report)));
    }

    // Privacy amplification.
    let length = key_length(config.n, report.ratio, result.total_leakage(), config.safety)?;
    let hash_seed: u64 = stream(seed, streams::AMPLIFY).random();
    run.dealer_says(None, "privacy_amplification", json!({ "seed": hash_seed, "output_length": length }));
    run.diagnostics.key_length = length;
    let dealer_key = privacy_amplify(&result.corrected_dealer_view, length, hash_seed)?.bits;
    let player_keys = player_bits
        .iter()
        .map(|bits| privacy_amplify(bits, length, hash_seed).map(|k| k.bits))
        .collect::<Result<Vec<_>>>()?;

    Ok(ProtocolOutcome {
        status: ProtocolStatus::Completed,
        dealer_key,
        player_keys,
        transcript: run.transcript,
        report: Some(report),
        diagnostics: run.diagnostics,
    })
}
