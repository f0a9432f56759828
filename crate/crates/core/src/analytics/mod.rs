//! Closed-form information quantities and key rates.

mod attacks;
mod bounds;
mod dishonest;
mod werner;

pub use attacks::{basis_attack_holevo, rho_bar_spectrum, rho_tilde, rho_tilde_mutual_info, sifting1_attack_bound};
pub use bounds::{
    dw_lower_bound, holevo_trusted_exact, holevo_upper_bound, mutual_info_key, tau, tau_grid_max, tau_maximizer,
    tau_partials, tau_tilde, TauMaximum,
};
pub use dishonest::{holevo_dishonest_exact, regroup_for_dishonest, ZetaProfile};
pub use werner::{werner_dw_rate, werner_limit_rate, werner_spectrum};

use serde::{Deserialize, Serialize};

use crate::quantum::GhzSpectrum;
use crate::{Error, Result};

/// `x log2 x` with `0 log 0 = 0`.
pub(crate) fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Binary entropy in bits without the domain check.
pub(crate) fn h(x: f64) -> f64 {
    -xlogx(x) - xlogx(1.0 - x)
}

/// `h(x) = -x log x - (1 - x) log(1 - x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("binary entropy argument {x} outside [0, 1]")));
    }
    Ok(h(x))
}

/// Mutual information in bits of a joint probability table `table[a][b]`.
pub fn mutual_information(table: &[Vec<f64>]) -> f64 {
    let total: f64 = table.iter().flatten().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum::<f64>() / total).collect();
    let width = table.iter().map(Vec::len).max().unwrap_or(0);
    let cols: Vec<f64> = (0..width)
        .map(|c| table.iter().map(|r| r.get(c).copied().unwrap_or(0.0)).sum::<f64>() / total)
        .collect();
    let mut mi = 0.0;
    for (a, row) in table.iter().enumerate() {
        for (b, &w) in row.iter().enumerate() {
            let p = w / total;
            if p > 0.0 {
                mi += p * (p / (rows[a] * cols[b])).log2();
            }
        }
    }
    mi.max(0.0)
}

/// `I(m_target : XOR_{i in subset} m_i)` from an outcome table indexed as in
/// [`crate::quantum::joint_outcome_distribution`].
pub fn parity_information(dist: &[f64], n_players: usize, target: usize, subset: &[usize]) -> f64 {
    let mut table = vec![vec![0.0; 2]; 2];
    let bit = |m: usize, i: usize| (m >> (n_players - 1 - i)) & 1;
    for (m, &p) in dist.iter().enumerate() {
        let x = subset.iter().fold(0, |acc, &i| acc ^ bit(m, i));
        table[bit(m, target)][x] += p;
    }
    mutual_information(&table)
}

/// Key-rate summary for one GHZ-diagonal spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyRateReport {
    pub p: f64,
    pub alpha: f64,
    pub beta: f64,
    /// Number of dishonest players colluding with the adversary.
    pub k_dishonest: usize,
    pub mutual_info: f64,
    pub holevo_exact: f64,
    /// Only defined for `p > q`.
    pub holevo_bound: Option<f64>,
    pub dw_exact: f64,
    /// Only reported for `p > q`.
    pub dw_lower: Option<f64>,
}

impl KeyRateReport {
    /// All players trusted.
    pub fn trusted(spectrum: &GhzSpectrum) -> Self {
        Self::build(spectrum, 0, holevo_trusted_exact(spectrum))
    }

    /// Players `2..=k+1` collude with the adversary.
    pub fn with_dishonest(spectrum: &GhzSpectrum, k: usize) -> Result<Self> {
        if k == 0 {
            return Ok(Self::trusted(spectrum));
        }
        let chi = holevo_dishonest_exact(&regroup_for_dishonest(spectrum, k)?);
        Ok(Self::build(spectrum, k, chi))
    }

    fn build(spectrum: &GhzSpectrum, k: usize, holevo_exact: f64) -> Self {
        let p = spectrum.delta();
        let mutual_info = mutual_info_key(p);
        let secure = p > crate::protocol::solve_q();
        Self {
            p,
            alpha: 0.5 * (1.0 - p),
            beta: 0.5 * (1.0 + p),
            k_dishonest: k,
            mutual_info,
            holevo_exact,
            holevo_bound: secure.then(|| holevo_upper_bound(p).expect("p > q")),
            dw_exact: mutual_info - holevo_exact,
            dw_lower: secure.then(|| tau_tilde(p)),
        }
    }
}
