//! Eve's purification-based side information and dishonest-player behaviour.

use std::collections::BTreeSet;

use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::quantum::holevo::{conditional_environment, CqState};
use crate::quantum::{draw_index, purify, Basis, BasisChoice, GhzSpectrum, LocalBasis, RoundRecord, Sign, StateVector, C64};
use crate::{Error, Result};

/// Behaviour of one player.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Honest,
    /// Announce a coin with `P(1) = bias` instead of the Sifting-1 outcome.
    FabricateOutcomes { bias: f64 },
    /// Measure in `{mu|0> + nu|1>, nu|0> - mu|1>}` and announce a random label.
    AlternateBasis { mu_sq: f64 },
    /// Refuse to announce bases in Sifting 2.
    WithholdSifting2,
}

impl Strategy {
    pub fn validate(&self) -> Result<()> {
        let param = match *self {
            Strategy::FabricateOutcomes { bias } => bias,
            Strategy::AlternateBasis { mu_sq } => mu_sq,
            _ => return Ok(()),
        };
        if (0.0..=1.0).contains(&param) {
            Ok(())
        } else {
            Err(Error::Config(format!("strategy parameter {param} outside [0, 1]")))
        }
    }

    pub fn is_honest(&self) -> bool {
        matches!(self, Strategy::Honest)
    }

    /// The basis label the player will announce and the basis actually measured.
    pub fn choose_measurement<R: Rng + ?Sized>(&self, rng: &mut R) -> (Basis, LocalBasis) {
        let label = Basis::random(rng);
        match *self {
            Strategy::AlternateBasis { mu_sq } => (label, LocalBasis::from_mu_sq(mu_sq).expect("validated")),
            _ => (label, label.into()),
        }
    }

    /// Basis used when this player colludes with the adversary.
    pub fn physical_basis(&self, label: Basis) -> LocalBasis {
        match *self {
            Strategy::AlternateBasis { mu_sq } => LocalBasis::from_mu_sq(mu_sq).expect("validated"),
            _ => label.into(),
        }
    }
}

/// Which players cheat and whether Eve shares their information.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AdversaryAssignment {
    /// Zero-based player indices; the dealer (0) is never dishonest.
    #[serde(default)]
    pub dishonest: BTreeSet<usize>,
    #[serde(default)]
    pub eve_colludes: bool,
}

impl AdversaryAssignment {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(n_players: usize, dishonest: impl IntoIterator<Item = usize>, eve_colludes: bool) -> Result<Self> {
        let a = Self { dishonest: dishonest.into_iter().collect(), eve_colludes };
        a.validate(n_players)?;
        Ok(a)
    }

    pub fn validate(&self, n_players: usize) -> Result<()> {
        if self.dishonest.contains(&0) {
            return Err(Error::Config("the dealer cannot be dishonest".into()));
        }
        if let Some(&bad) = self.dishonest.iter().find(|&&i| i >= n_players) {
            return Err(Error::Config(format!("player {bad} does not exist")));
        }
        if self.dishonest.len() > n_players - 2 {
            return Err(Error::Config(format!(
                "{} dishonest players exceed the limit {}",
                self.dishonest.len(),
                n_players - 2
            )));
        }
        Ok(())
    }
}

/// Which Sifting step an announcement belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Sifting1,
    Sifting2,
}

/// What a player puts on the public channel for one round.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Announcement {
    BasisOutcome { basis: Basis, outcome: bool },
    Basis { basis: Basis },
    Withheld,
}

/// Announcement of `player` for a round it measured as `true_record`.
pub fn apply_strategy<R: Rng + ?Sized>(
    strategy: &Strategy,
    true_record: &RoundRecord,
    player: usize,
    phase: Phase,
    rng: &mut R,
) -> Announcement {
    let basis = true_record.bases.0[player];
    match (phase, strategy) {
        (Phase::Sifting1, Strategy::FabricateOutcomes { bias }) => {
            Announcement::BasisOutcome { basis, outcome: rng.random_bool(*bias) }
        }
        (Phase::Sifting1, _) => Announcement::BasisOutcome { basis, outcome: true_record.outcomes[player] },
        (Phase::Sifting2, Strategy::WithholdSifting2) => Announcement::Withheld,
        (Phase::Sifting2, _) => Announcement::Basis { basis },
    }
}

/// Result of Eve measuring her flag register.
#[derive(Clone, Debug)]
pub struct EveOutcome {
    pub j: usize,
    pub sign: Sign,
    pub state: StateVector,
}

fn check_purification(purified: &StateVector, n_players: usize) -> Result<usize> {
    crate::quantum::check_players(n_players)?;
    let dim = 1usize << n_players;
    if purified.dim() != dim * dim {
        return Err(Error::Layout(format!(
            "purification of {n_players} players needs dimension {}, got {}",
            dim * dim,
            purified.dim()
        )));
    }
    Ok(dim)
}

/// Probability of each flag `e` (index `2j` for `+`, `2j + 1` for `-`).
pub fn flag_probabilities(purified: &StateVector, n_players: usize) -> Result<Vec<f64>> {
    let dim = check_purification(purified, n_players)?;
    let psi = purified.amplitudes();
    Ok((0..dim).map(|e| (0..dim).map(|a| psi[a * dim + e].norm_sqr()).sum()).collect())
}

/// Projective measurement of Eve's flags; the players collapse to `|Psi_j^sign>`.
pub fn eve_block_measurement<R: Rng + ?Sized>(purified: &StateVector, n_players: usize, rng: &mut R) -> Result<EveOutcome> {
    let dim = check_purification(purified, n_players)?;
    let probs = flag_probabilities(purified, n_players)?;
    let e = draw_index(&probs, rng);
    let psi = purified.amplitudes();
    let column = DVector::<C64>::from_fn(dim, |a, _| psi[a * dim + e]);
    let sign = if e % 2 == 0 { Sign::Plus } else { Sign::Minus };
    Ok(EveOutcome { j: e / 2, sign, state: StateVector::normalized(column)? })
}

/// Parity of all `N` outcomes on `|Psi_j^sign>` for an even-Y basis string.
pub fn component_parity(j: usize, sign: Sign, bases: &BasisChoice) -> Result<bool> {
    let n = bases.len();
    crate::quantum::check_players(n)?;
    if j >= 1 << (n - 1) {
        return Err(Error::IndexOutOfRange { index: j, limit: (1 << (n - 1)) - 1 });
    }
    let k = bases.y_count();
    if k % 2 == 1 {
        return Err(Error::OddYCount(k));
    }
    let flipped_y = bases
        .0
        .iter()
        .enumerate()
        .filter(|&(i, b)| *b == Basis::Y && (j >> (n - 1 - i)) & 1 == 1)
        .count();
    Ok(((k / 2 + flipped_y) % 2 == 1) ^ sign.is_minus())
}

/// XOR of the outcomes of every player not listed in `known`, given Eve's
/// flag and the colluders' own outcomes.
pub fn honest_parity_inference(j: usize, sign: Sign, bases: &BasisChoice, known: &[(usize, bool)]) -> Result<bool> {
    let total = component_parity(j, sign, bases)?;
    Ok(known.iter().fold(total, |acc, &(_, bit)| acc ^ bit))
}

/// Three players with Bob (player 1) colluding: the predicted `m_A ⊕ m_C`.
pub fn collusion_parity_inference(j: usize, sign: Sign, bob_outcome: bool, bases: &BasisChoice) -> Result<bool> {
    if bases.len() != 3 {
        return Err(Error::Domain(format!("three-player inference given {} bases", bases.len())));
    }
    honest_parity_inference(j, sign, bases, &[(1, bob_outcome)])
}

/// `chi(m_1 : m_C E)` where the colluders `C` measure in the given bases and
/// every other player is traced out.
pub fn colluder_holevo(spectrum: &GhzSpectrum, dealer_basis: LocalBasis, colluders: &[(usize, LocalBasis)]) -> Result<f64> {
    let n = spectrum.n_players();
    let mut bases = vec![None; n];
    bases[0] = Some(dealer_basis);
    for &(i, b) in colluders {
        if i == 0 || i >= n {
            return Err(Error::Domain(format!("player {i} cannot collude")));
        }
        bases[i] = Some(b);
    }
    let mut cq = CqState::new();
    for branch in conditional_environment(&purify(spectrum), n, &bases)? {
        let side = colluders.iter().fold(0, |acc, &(i, _)| (acc << 1) | usize::from(branch.bit(i)));
        cq.add(usize::from(branch.bit(0)), side, &branch.env, 1.0);
    }
    cq.holevo()
}

/// Protocol-level leakage: colluders measure as their strategies dictate.
pub fn strategy_holevo(
    spectrum: &GhzSpectrum,
    assignment: &AdversaryAssignment,
    strategies: &[Strategy],
    dealer_basis: Basis,
) -> Result<f64> {
    let colluders: Vec<(usize, LocalBasis)> = assignment
        .dishonest
        .iter()
        .map(|&i| (i, strategies.get(i).copied().unwrap_or_default().physical_basis(Basis::X)))
        .collect();
    colluder_holevo(spectrum, dealer_basis.into(), &colluders)
}

/// Sifting-1 collusion on three players: Alice and Charlie both measure X or
/// both Y, Bob measures in `bob_basis` and shares his outcome with Eve. The
/// secret is the target parity bit `m_A ⊕ m_C ⊕ [both Y]`.
pub fn sifting1_attack_holevo(spectrum: &GhzSpectrum, bob_basis: LocalBasis) -> Result<f64> {
    if spectrum.n_players() != 3 {
        return Err(Error::Domain(format!("attack is defined for three players, got {}", spectrum.n_players())));
    }
    let psi = purify(spectrum);
    let mut cq = CqState::new();
    for (yy, shared) in [(false, LocalBasis::x()), (true, LocalBasis::y())] {
        for branch in conditional_environment(&psi, 3, &[Some(shared), Some(bob_basis), Some(shared)])? {
            let target = branch.bit(0) ^ branch.bit(2) ^ yy;
            cq.add(usize::from(target), usize::from(branch.bit(1)), &branch.env, 0.5);
        }
    }
    cq.holevo()
}

/// Dense counterpart of [`crate::analytics::basis_attack_holevo`].
pub fn basis_attack_holevo_dense(p: f64, bob_basis: LocalBasis, alice_basis: LocalBasis) -> Result<f64> {
    let rho_bar = crate::analytics::rho_bar_spectrum(p)?;
    colluder_holevo(&rho_bar, alice_basis, &[(1, bob_basis)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::{basis_attack_holevo, holevo_dishonest_exact, holevo_trusted_exact, regroup_for_dishonest, sifting1_attack_bound, werner_spectrum};
    use crate::quantum::{component_outcome_distribution, ghz_basis_vector};
    use crate::random::random_spectrum;
    use crate::rng::stream;

    #[test]
    fn pure_ghz_flag_is_deterministic() {
        let psi = purify(&GhzSpectrum::pure_ghz(3).unwrap());
        let mut rng = stream(71, 0);
        for _ in 0..20 {
            let out = eve_block_measurement(&psi, 3, &mut rng).unwrap();
            assert_eq!((out.j, out.sign), (0, Sign::Plus));
        }
    }

    #[test]
    fn collapse_is_the_flagged_component() {
        let s = random_spectrum(4, &mut stream(72, 0));
        let psi = purify(&s);
        let mut rng = stream(72, 1);
        for _ in 0..50 {
            let out = eve_block_measurement(&psi, 4, &mut rng).unwrap();
            let expected = ghz_basis_vector(4, out.j, out.sign).unwrap();
            assert!((out.state.inner(&expected).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn flag_frequencies_follow_werner_weights() {
        let psi = purify(&werner_spectrum(3, 0.9).unwrap());
        let mut rng = stream(73, 0);
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| {
                let o = eve_block_measurement(&psi, 3, &mut rng).unwrap();
                o.j == 0 && o.sign == Sign::Plus
            })
            .count();
        let p = 0.9 + 0.1 / 8.0;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        assert!((hits as f64 / n as f64 - p).abs() < 4.0 * sigma);
    }

    #[test]
    fn malformed_purification_is_rejected() {
        let psi = purify(&GhzSpectrum::pure_ghz(3).unwrap());
        assert!(eve_block_measurement(&psi, 4, &mut stream(0, 0)).is_err());
    }

    #[test]
    fn parity_inference_examples() {
        let xxx = BasisChoice::from_y_mask(3, 0);
        assert!(!collusion_parity_inference(0, Sign::Plus, false, &xxx).unwrap());
        assert!(collusion_parity_inference(0, Sign::Minus, false, &xxx).unwrap());
        assert!(collusion_parity_inference(0, Sign::Plus, false, &BasisChoice::from_y_mask(3, 1)).is_err());
    }

    #[test]
    fn parity_inference_is_exact_on_every_supported_outcome() {
        for n in 3..=5 {
            for mask in (0..1usize << n).filter(|m| m.count_ones() % 2 == 0) {
                let bases = BasisChoice::from_y_mask(n, mask);
                for j in 0..1usize << (n - 1) {
                    for sign in [Sign::Plus, Sign::Minus] {
                        let dist = component_outcome_distribution(n, j, sign, &bases.local());
                        for (m, &p) in dist.iter().enumerate() {
                            if p > 1e-12 {
                                let parity = m.count_ones() % 2 == 1;
                                assert_eq!(component_parity(j, sign, &bases).unwrap(), parity);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn colluder_holevo_matches_closed_forms() {
        let mut rng = stream(74, 0);
        for n in 3..=5 {
            let s = random_spectrum(n, &mut rng);
            let trusted = colluder_holevo(&s, LocalBasis::x(), &[]).unwrap();
            assert!((trusted - holevo_trusted_exact(&s)).abs() < 1e-9);
            for k in 1..=n - 2 {
                let colluders: Vec<_> = (1..=k).map(|i| (i, LocalBasis::y())).collect();
                let dense = colluder_holevo(&s, LocalBasis::y(), &colluders).unwrap();
                let closed = holevo_dishonest_exact(&regroup_for_dishonest(&s, k).unwrap());
                assert!((dense - closed).abs() < 1e-9, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn sifting1_attack_respects_bound_with_equality_for_x() {
        let mut rng = stream(75, 0);
        for _ in 0..20 {
            let s = random_spectrum(3, &mut rng);
            let bound = sifting1_attack_bound(&s).unwrap();
            let x = sifting1_attack_holevo(&s, LocalBasis::x()).unwrap();
            assert!((x - bound).abs() < 1e-9);
            assert!(sifting1_attack_holevo(&s, LocalBasis::from_mu_sq(0.3).unwrap()).unwrap() <= bound + 1e-9);
        }
    }

    #[test]
    fn basis_attack_dense_matches_formula() {
        for &p in &[0.6, 0.8, 0.95] {
            for &mu in &[0.0, 0.2, 0.5, 0.9, 1.0] {
                let dense = basis_attack_holevo_dense(p, LocalBasis::from_mu_sq(mu).unwrap(), LocalBasis::x()).unwrap();
                assert!((dense - basis_attack_holevo(p, mu).unwrap()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn strategies_announce_as_specified() {
        let mut rng = stream(76, 0);
        let record = RoundRecord::new(BasisChoice::from_y_mask(3, 0b011), vec![true, false, true]).unwrap();
        assert_eq!(
            apply_strategy(&Strategy::Honest, &record, 1, Phase::Sifting1, &mut rng),
            Announcement::BasisOutcome { basis: Basis::Y, outcome: false }
        );
        assert_eq!(
            apply_strategy(&Strategy::FabricateOutcomes { bias: 1.0 }, &record, 1, Phase::Sifting1, &mut rng),
            Announcement::BasisOutcome { basis: Basis::Y, outcome: true }
        );
        assert_eq!(
            apply_strategy(&Strategy::WithholdSifting2, &record, 2, Phase::Sifting2, &mut rng),
            Announcement::Withheld
        );
        assert_eq!(
            apply_strategy(&Strategy::WithholdSifting2, &record, 2, Phase::Sifting1, &mut rng),
            Announcement::BasisOutcome { basis: Basis::Y, outcome: true }
        );
    }

    #[test]
    fn assignment_validation() {
        assert!(AdversaryAssignment::new(3, [1], true).is_ok());
        assert!(AdversaryAssignment::new(3, [0], false).is_err());
        assert!(AdversaryAssignment::new(3, [1, 2], false).is_err());
        assert!(AdversaryAssignment::new(4, [5], false).is_err());
        assert!(Strategy::FabricateOutcomes { bias: 1.5 }.validate().is_err());
    }
}
