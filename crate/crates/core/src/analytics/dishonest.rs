use serde::{Deserialize, Serialize};

use super::bounds::paired_holevo;
use crate::quantum::GhzSpectrum;
use crate::{Error, Result};

/// Spectrum regrouped for `k` dishonest players `A_2 .. A_{k+1}`.
///
/// With `j = t * 2^(N-k-1) + s`, the dishonest block index is `t` and the
/// honest remainder is `s`; `zeta[s - 1]` sums `lambda_{t,s}` over `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaProfile {
    pub k_dishonest: usize,
    pub zeta0_plus: f64,
    pub zeta0_minus: f64,
    pub zeta: Vec<f64>,
}

impl ZetaProfile {
    pub fn total(&self) -> f64 {
        self.zeta0_plus + self.zeta0_minus + 2.0 * self.zeta.iter().sum::<f64>()
    }
}

pub fn regroup_for_dishonest(spectrum: &GhzSpectrum, k: usize) -> Result<ZetaProfile> {
    let n = spectrum.n_players();
    if k == 0 || k > n - 2 {
        return Err(Error::Domain(format!("k = {k} dishonest players outside [1, {}]", n - 2)));
    }
    let s_range = 1usize << (n - k - 1);
    let t_range = 1usize << k;
    let lambda = |t: usize, s: usize| spectrum.lambda_j(t * s_range + s);
    let shared: f64 = (1..t_range).map(|t| lambda(t, 0)).sum();
    let zeta = (1..s_range)
        .map(|s| (0..t_range).map(|t| lambda(t, s)).sum())
        .collect();
    Ok(ZetaProfile {
        k_dishonest: k,
        zeta0_plus: spectrum.lambda0_plus() + shared,
        zeta0_minus: spectrum.lambda0_minus() + shared,
        zeta,
    })
}

/// Exact `chi(m_1 : m_2 ... m_{k+1} E)`.
pub fn holevo_dishonest_exact(profile: &ZetaProfile) -> f64 {
    paired_holevo(profile.zeta0_plus, profile.zeta0_minus, &profile.zeta)
}
