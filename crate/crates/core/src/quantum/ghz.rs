use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{check_players, DensityMatrix, StateVector, C64};
use crate::{Error, Result};

/// Relative sign in `|Psi_j^±> = (|j> ± |2^N - 1 - j>)/sqrt(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }
}

/// `|Psi_j^sign>` for `0 <= j < 2^(N-1)`.
pub fn ghz_basis_vector(n_players: usize, j: usize, sign: Sign) -> Result<StateVector> {
    check_players(n_players)?;
    let dim = 1usize << n_players;
    if j >= dim / 2 {
        return Err(Error::IndexOutOfRange { index: j, limit: dim / 2 - 1 });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DVector::<C64>::zeros(dim);
    v[j] = C64::from(s);
    v[dim - 1 - j] = C64::from(sign.factor() * s);
    StateVector::new(v)
}

/// Diagonal coefficients of a GHZ-diagonal state.
///
/// `lambda[j - 1]` is the common weight of `|Psi_j^+>` and `|Psi_j^->` for
/// `1 <= j < 2^(N-1)`; the `j = 0` pair carries separate weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum")]
pub struct GhzSpectrum {
    n_players: usize,
    lambda0_plus: f64,
    lambda0_minus: f64,
    lambda: Vec<f64>,
}

#[derive(Deserialize)]
struct RawSpectrum {
    n_players: usize,
    lambda0_plus: f64,
    lambda0_minus: f64,
    lambda: Vec<f64>,
}

impl TryFrom<RawSpectrum> for GhzSpectrum {
    type Error = Error;

    fn try_from(raw: RawSpectrum) -> Result<Self> {
        GhzSpectrum::new(raw.n_players, raw.lambda0_plus, raw.lambda0_minus, raw.lambda)
    }
}

impl GhzSpectrum {
    pub const NORMALIZATION_TOL: f64 = 1e-12;

    pub fn new(n_players: usize, lambda0_plus: f64, lambda0_minus: f64, lambda: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(n_players, lambda0_plus, lambda0_minus, lambda, Self::NORMALIZATION_TOL)
    }

    /// Accept a normalisation error up to `tol`, then renormalise exactly.
    pub fn with_tolerance(
        n_players: usize,
        lambda0_plus: f64,
        lambda0_minus: f64,
        lambda: Vec<f64>,
        tol: f64,
    ) -> Result<Self> {
        check_players(n_players)?;
        let expected = (1usize << (n_players - 1)) - 1;
        if lambda.len() != expected {
            return Err(Error::InvalidSpectrum(format!(
                "expected {expected} paired weights for {n_players} players, got {}",
                lambda.len()
            )));
        }
        let all = [lambda0_plus, lambda0_minus].into_iter().chain(lambda.iter().copied());
        if let Some(bad) = all.clone().find(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidSpectrum(format!("negative or non-finite weight {bad}")));
        }
        let total = lambda0_plus + lambda0_minus + 2.0 * lambda.iter().sum::<f64>();
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidSpectrum(format!("weights sum to {total}, not 1")));
        }
        let mut s = Self { n_players, lambda0_plus, lambda0_minus, lambda };
        if total != 1.0 {
            s.lambda0_plus /= total;
            s.lambda0_minus /= total;
            s.lambda.iter_mut().for_each(|w| *w /= total);
        }
        Ok(s)
    }

    /// The pure GHZ state `|Psi_0^+>`.
    pub fn pure_ghz(n_players: usize) -> Result<Self> {
        check_players(n_players)?;
        Self::new(n_players, 1.0, 0.0, vec![0.0; (1 << (n_players - 1)) - 1])
    }

    /// The maximally mixed state.
    pub fn uniform(n_players: usize) -> Result<Self> {
        check_players(n_players)?;
        let w = 1.0 / (1u64 << n_players) as f64;
        Self::new(n_players, w, w, vec![w; (1 << (n_players - 1)) - 1])
    }

    pub fn n_players(&self) -> usize {
        self.n_players
    }

    pub fn dim(&self) -> usize {
        1 << self.n_players
    }

    pub fn lambda0_plus(&self) -> f64 {
        self.lambda0_plus
    }

    pub fn lambda0_minus(&self) -> f64 {
        self.lambda0_minus
    }

    /// Paired weights `lambda_1 .. lambda_{2^(N-1)-1}` (slice index `j - 1`).
    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    /// `lambda_j` for `j >= 1`.
    pub fn lambda_j(&self, j: usize) -> f64 {
        self.lambda[j - 1]
    }

    /// Weight of `|Psi_j^sign>` in the mixture.
    pub fn weight(&self, j: usize, sign: Sign) -> f64 {
        match (j, sign) {
            (0, Sign::Plus) => self.lambda0_plus,
            (0, Sign::Minus) => self.lambda0_minus,
            (j, _) => self.lambda[j - 1],
        }
    }

    /// `lambda0_plus - lambda0_minus`, the Mermin statistic's expectation.
    pub fn delta(&self) -> f64 {
        self.lambda0_plus - self.lambda0_minus
    }

    /// All `2^N` mixture components `(j, sign, weight)`.
    pub fn components(&self) -> impl Iterator<Item = (usize, Sign, f64)> + '_ {
        (0..self.dim() / 2)
            .flat_map(|j| [Sign::Plus, Sign::Minus].into_iter().map(move |s| (j, s)))
            .map(|(j, s)| (j, s, self.weight(j, s)))
    }
}

/// `rho = sum_j sum_± w(j, ±) |Psi_j^±><Psi_j^±|`.
pub fn ghz_diagonal_density(spectrum: &GhzSpectrum) -> DensityMatrix {
    let dim = spectrum.dim();
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for j in 0..dim / 2 {
        let plus = spectrum.weight(j, Sign::Plus);
        let minus = spectrum.weight(j, Sign::Minus);
        let jbar = dim - 1 - j;
        let diag = C64::from(0.5 * (plus + minus));
        let off = C64::from(0.5 * (plus - minus));
        m[(j, j)] = diag;
        m[(jbar, jbar)] = diag;
        m[(j, jbar)] = off;
        m[(jbar, j)] = off;
    }
    DensityMatrix::from_trusted(m)
}

/// Purification on `A_1 .. A_N ⊗ E` with one orthonormal flag per component.
///
/// The environment has dimension `2^N`; flag `e_j^+` is index `2j` and
/// `e_j^-` is index `2j + 1`. The player register is the more significant
/// factor, so amplitude `(a, e)` lives at `a * 2^N + e`.
pub fn purify(spectrum: &GhzSpectrum) -> StateVector {
    let dim = spectrum.dim();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = DVector::<C64>::zeros(dim * dim);
    for (j, sign, w) in spectrum.components() {
        let amp = w.sqrt() * s;
        let flag = 2 * j + usize::from(sign.is_minus());
        v[j * dim + flag] += C64::from(amp);
        v[(dim - 1 - j) * dim + flag] += C64::from(sign.factor() * amp);
    }
    StateVector::new(v).expect("purification of a normalised spectrum is normalised")
}
