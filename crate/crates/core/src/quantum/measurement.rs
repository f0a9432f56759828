use std::collections::HashMap;

use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_players, DensityMatrix, GhzSpectrum, Sign, C64};
use crate::{Error, Result};

/// One of the two announced measurement settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Basis {
    X,
    Y,
}

impl Basis {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        if rng.random::<bool>() {
            Basis::Y
        } else {
            Basis::X
        }
    }
}

/// An orthonormal single-qubit basis; `vectors[b]` is the eigenstate
/// reported as outcome bit `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalBasis {
    vectors: [[C64; 2]; 2],
}

impl LocalBasis {
    /// Outcome `b` is `(|0> + (-1)^b |1>)/sqrt(2)`.
    pub fn x() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { vectors: [[s.into(), s.into()], [s.into(), (-s).into()]] }
    }

    /// Outcome `b` is `(|0> + i (-1)^b |1>)/sqrt(2)`.
    pub fn y() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { vectors: [[s.into(), C64::new(0.0, s)], [s.into(), C64::new(0.0, -s)]] }
    }

    pub fn z() -> Self {
        Self { vectors: [[1.0.into(), 0.0.into()], [0.0.into(), 1.0.into()]] }
    }

    /// `{mu|0> + nu|1>, conj(nu)|0> - conj(mu)|1>}` with `|mu|^2 + |nu|^2 = 1`.
    pub fn from_mu_nu(mu: C64, nu: C64) -> Result<Self> {
        let norm = mu.norm_sqr() + nu.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("|mu|^2 + |nu|^2 = {norm}, expected 1")));
        }
        Ok(Self { vectors: [[mu, nu], [nu.conj(), -mu.conj()]] })
    }

    /// Real `mu = sqrt(mu_sq)`, `nu = sqrt(1 - mu_sq)`.
    pub fn from_mu_sq(mu_sq: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&mu_sq) {
            return Err(Error::Domain(format!("mu^2 = {mu_sq} outside [0, 1]")));
        }
        Self::from_mu_nu(mu_sq.sqrt().into(), (1.0 - mu_sq).sqrt().into())
    }

    /// Ket of the outcome-`b` eigenstate.
    pub fn vector(&self, outcome: usize) -> [C64; 2] {
        self.vectors[outcome]
    }

    /// `<phi_outcome | bit>`.
    pub fn bra(&self, outcome: usize, bit: usize) -> C64 {
        self.vectors[outcome][bit].conj()
    }

    fn key(&self) -> [u64; 8] {
        let v = &self.vectors;
        let f = [v[0][0], v[0][1], v[1][0], v[1][1]];
        let mut k = [0u64; 8];
        for (i, z) in f.iter().enumerate() {
            k[2 * i] = z.re.to_bits();
            k[2 * i + 1] = z.im.to_bits();
        }
        k
    }
}

impl From<Basis> for LocalBasis {
    fn from(b: Basis) -> Self {
        match b {
            Basis::X => LocalBasis::x(),
            Basis::Y => LocalBasis::y(),
        }
    }
}

/// Per-player X/Y settings for one round.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasisChoice(pub Vec<Basis>);

impl BasisChoice {
    pub fn random<R: Rng + ?Sized>(n_players: usize, rng: &mut R) -> Self {
        Self((0..n_players).map(|_| Basis::random(rng)).collect())
    }

    /// Bit `i` of `y_mask` (player 1 = most significant) selects Y.
    pub fn from_y_mask(n_players: usize, y_mask: usize) -> Self {
        Self(
            (0..n_players)
                .map(|i| if (y_mask >> (n_players - 1 - i)) & 1 == 1 { Basis::Y } else { Basis::X })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn y_count(&self) -> usize {
        self.0.iter().filter(|&&b| b == Basis::Y).count()
    }

    pub fn local(&self) -> Vec<LocalBasis> {
        self.0.iter().map(|&b| b.into()).collect()
    }
}

/// Bases and outcome bits of all players for one measured state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub bases: BasisChoice,
    pub outcomes: Vec<bool>,
}

impl RoundRecord {
    pub fn new(bases: BasisChoice, outcomes: Vec<bool>) -> Result<Self> {
        if bases.len() != outcomes.len() {
            return Err(Error::DimensionMismatch { expected: bases.len(), found: outcomes.len() });
        }
        Ok(Self { bases, outcomes })
    }

    pub fn n_players(&self) -> usize {
        self.outcomes.len()
    }

    /// XOR of all outcome bits.
    pub fn parity(&self) -> bool {
        self.outcomes.iter().fold(false, |acc, &b| acc ^ b)
    }
}

pub(crate) fn outcome_bits(n_players: usize, index: usize) -> Vec<bool> {
    (0..n_players).map(|i| (index >> (n_players - 1 - i)) & 1 == 1).collect()
}

/// Exact outcome distribution of a GHZ-diagonal state when each player
/// measures in the given X/Y basis.
///
/// Entry `m` is the probability of the outcome string whose bit for player
/// `i` is bit `N - 1 - i` of `m`.
pub fn joint_outcome_distribution(spectrum: &GhzSpectrum, bases: &BasisChoice) -> Result<Vec<f64>> {
    local_outcome_distribution(spectrum, &bases.local())
}

/// As [`joint_outcome_distribution`] for arbitrary single-qubit bases.
pub fn local_outcome_distribution(spectrum: &GhzSpectrum, bases: &[LocalBasis]) -> Result<Vec<f64>> {
    let n = spectrum.n_players();
    if bases.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: bases.len() });
    }
    let dim = 1usize << n;
    let mut probs = vec![0.0; dim];
    for (m, p) in probs.iter_mut().enumerate() {
        for j in 0..dim / 2 {
            let (a, b) = component_amplitudes(bases, n, m, j);
            let plus = spectrum.weight(j, Sign::Plus);
            let minus = spectrum.weight(j, Sign::Minus);
            *p += 0.5 * (plus * (a + b).norm_sqr() + minus * (a - b).norm_sqr());
        }
    }
    Ok(probs)
}

/// Outcome distribution of the single component `|Psi_j^sign>`.
pub fn component_outcome_distribution(n: usize, j: usize, sign: Sign, bases: &[LocalBasis]) -> Vec<f64> {
    let dim = 1usize << n;
    (0..dim)
        .map(|m| {
            let (a, b) = component_amplitudes(bases, n, m, j);
            0.5 * (a + b * sign.factor()).norm_sqr()
        })
        .collect()
}

/// `(<m|j>, <m|2^N-1-j>)` for the product measurement state `|m>`.
fn component_amplitudes(bases: &[LocalBasis], n: usize, m: usize, j: usize) -> (C64, C64) {
    let mut a = C64::new(1.0, 0.0);
    let mut b = C64::new(1.0, 0.0);
    for (i, basis) in bases.iter().enumerate() {
        let shift = n - 1 - i;
        let mi = (m >> shift) & 1;
        let xi = (j >> shift) & 1;
        a *= basis.bra(mi, xi);
        b *= basis.bra(mi, 1 - xi);
    }
    (a, b)
}

/// `<m| rho |m>` for every product outcome state, for arbitrary `rho`.
pub fn dense_outcome_distribution(rho: &DensityMatrix, bases: &[LocalBasis]) -> Result<Vec<f64>> {
    let dim = rho.dim();
    if 1usize << bases.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: 1 << bases.len() });
    }
    let n = bases.len();
    Ok((0..dim)
        .map(|m| {
            let v = DVector::<C64>::from_fn(dim, |x, _| {
                bases.iter().enumerate().fold(C64::new(1.0, 0.0), |acc, (i, basis)| {
                    let shift = n - 1 - i;
                    acc * basis.vector((m >> shift) & 1)[(x >> shift) & 1]
                })
            });
            rho.sandwich(&v).max(0.0)
        })
        .collect())
}

/// Inverse-CDF draw from a probability table.
pub(crate) fn draw_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random::<f64>() * probs.iter().sum::<f64>();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_positive = i;
            acc += p;
            if u < acc {
                return i;
            }
        }
    }
    last_positive
}

/// Caches exact outcome tables per basis configuration for one spectrum.
#[derive(Clone, Debug)]
pub struct OutcomeSampler {
    spectrum: GhzSpectrum,
    tables: HashMap<Vec<[u64; 8]>, Vec<f64>>,
}

impl OutcomeSampler {
    pub fn new(spectrum: GhzSpectrum) -> Self {
        Self { spectrum, tables: HashMap::new() }
    }

    pub fn spectrum(&self) -> &GhzSpectrum {
        &self.spectrum
    }

    pub fn table(&mut self, bases: &[LocalBasis]) -> Result<&[f64]> {
        let key: Vec<[u64; 8]> = bases.iter().map(LocalBasis::key).collect();
        if !self.tables.contains_key(&key) {
            let t = local_outcome_distribution(&self.spectrum, bases)?;
            self.tables.insert(key.clone(), t);
        }
        Ok(&self.tables[&key])
    }

    /// Outcome bits for the given bases.
    pub fn sample<R: Rng + ?Sized>(&mut self, bases: &[LocalBasis], rng: &mut R) -> Result<Vec<bool>> {
        let n = self.spectrum.n_players();
        let idx = draw_index(self.table(bases)?, rng);
        Ok(outcome_bits(n, idx))
    }

    /// Uniform X/Y bases for every player, then an outcome draw.
    pub fn sample_round<R: Rng + ?Sized>(&mut self, rng: &mut R) -> RoundRecord {
        let bases = BasisChoice::random(self.spectrum.n_players(), rng);
        let outcomes = self.sample(&bases.local(), rng).expect("lengths match");
        RoundRecord { bases, outcomes }
    }
}

/// One round: independent uniform X/Y bases and an exact outcome draw.
pub fn sample_round<R: Rng + ?Sized>(spectrum: &GhzSpectrum, rng: &mut R) -> RoundRecord {
    let bases = BasisChoice::random(spectrum.n_players(), rng);
    sample_round_with_bases(spectrum, bases, rng).expect("lengths match")
}

/// Outcome draw for caller-chosen bases.
pub fn sample_round_with_bases<R: Rng + ?Sized>(
    spectrum: &GhzSpectrum,
    bases: BasisChoice,
    rng: &mut R,
) -> Result<RoundRecord> {
    check_players(spectrum.n_players())?;
    let table = joint_outcome_distribution(spectrum, &bases)?;
    let outcomes = outcome_bits(spectrum.n_players(), draw_index(&table, rng));
    RoundRecord::new(bases, outcomes)
}
