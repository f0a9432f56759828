use super::h;
use crate::quantum::GhzSpectrum;
use crate::{Error, Result};

/// `p |Psi_0^+><Psi_0^+| + (1 - p) I / 2^N` as a spectrum.
pub fn werner_spectrum(n_players: usize, p: f64) -> Result<GhzSpectrum> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("werner visibility {p} outside [0, 1]")));
    }
    crate::quantum::check_players(n_players)?;
    let c = (1.0 - p) / (1u64 << n_players) as f64;
    GhzSpectrum::with_tolerance(n_players, p + c, c, vec![c; (1 << (n_players - 1)) - 1], 1e-12)
}

fn t_j(p: f64, j: u32) -> f64 {
    let scale = 2f64.powi(j as i32);
    (1.0 + (scale - 1.0) * p) / scale
}

/// `(1 - T_j) log2(2^j - 1)`, zero at `j = 1`.
fn tail(p: f64, j: u32) -> f64 {
    let width = 2f64.powi(j as i32) - 1.0;
    (1.0 - t_j(p, j)) * width.log2()
}

/// Key rate for a Werner state with `m` trusted players.
pub fn werner_dw_rate(p: f64, m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("need at least two trusted players, got {m}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("werner visibility {p} outside [0, 1]")));
    }
    let (tm, tm1) = (t_j(p, m), t_j(p, m - 1));
    Ok(1.0 - h(0.5 * (1.0 - p)) - h(tm) - tail(p, m) + h(tm1) + tail(p, m - 1))
}

/// Limit of [`werner_dw_rate`] as the number of trusted players grows.
pub fn werner_limit_rate(p: f64) -> f64 {
    1.0 - h(0.5 * (1.0 - p)) - (1.0 - p)
}
