use super::{h, xlogx};
use crate::quantum::GhzSpectrum;
use crate::{Error, Result};

/// `I(m_1 : m_2 ⊕ ... ⊕ m_N) = 1 - h((1 - p)/2)`.
pub fn mutual_info_key(p: f64) -> f64 {
    debug_assert!((-1.0..=1.0).contains(&p));
    1.0 - h((0.5 * (1.0 - p)).clamp(0.0, 1.0))
}

/// Holevo quantity of a GHZ-diagonal-like weight list: `plus`/`minus` for
/// the `j = 0` pair and paired weights `pairs[i - 1]` for `1 <= i < M`.
pub(crate) fn paired_holevo(plus: f64, minus: f64, pairs: &[f64]) -> f64 {
    let m = pairs.len() + 1;
    let last = pairs[m - 2];
    let mut v = -xlogx(plus) - xlogx(minus) - 2.0 * pairs.iter().map(|&x| xlogx(x)).sum::<f64>();
    v += xlogx(plus + last) + xlogx(minus + last);
    for i in 1..m / 2 {
        v += 2.0 * xlogx(pairs[i - 1] + pairs[m - 1 - i - 1]);
    }
    v.max(0.0)
}

/// Exact `chi(m_1 : E)` against a purifying adversary, all players trusted.
pub fn holevo_trusted_exact(spectrum: &GhzSpectrum) -> f64 {
    paired_holevo(spectrum.lambda0_plus(), spectrum.lambda0_minus(), spectrum.lambda())
}

fn alpha_beta(p: f64) -> (f64, f64) {
    (0.5 * (1.0 - p), 0.5 * (1.0 + p))
}

/// Upper bound on the adversary's Holevo information given only `p > q`.
pub fn holevo_upper_bound(p: f64) -> Result<f64> {
    let q = crate::protocol::solve_q();
    if !(p > q && p <= 1.0) {
        return Err(Error::Domain(format!("holevo bound requires q < p <= 1, got p = {p}")));
    }
    let (a, b) = alpha_beta(p);
    Ok(-xlogx(a * a) - xlogx(b * b) - 2.0 * xlogx(a * b) - h(a))
}

/// `tau~(p) = 1 + a^2 log a^2 + b^2 log b^2 + 2ab log ab` without a domain check.
pub fn tau_tilde(p: f64) -> f64 {
    let (a, b) = alpha_beta(p);
    1.0 + xlogx(a * a) + xlogx(b * b) + 2.0 * xlogx(a * b)
}

/// Devetak-Winter lower bound `tau~(p)` on `[0.5, 1]`.
pub fn dw_lower_bound(p: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&p) {
        return Err(Error::Domain(format!("dw lower bound requires p in [0.5, 1], got {p}")));
    }
    Ok(tau_tilde(p))
}

const REGION_TOL: f64 = 1e-12;

/// The auxiliary function maximised over
/// `C = {x >= 0, y >= 0, x + y <= (1 - p)/2}`.
pub fn tau(x: f64, y: f64, p: f64) -> Result<f64> {
    let (a, _) = alpha_beta(p);
    if x < -REGION_TOL || y < -REGION_TOL || x + y > a + REGION_TOL {
        return Err(Error::Domain(format!("({x}, {y}) lies outside the region for p = {p}")));
    }
    let (x, y) = (x.max(0.0), y.max(0.0));
    Ok(-xlogx(p + x) - xlogx(x) - 2.0 * xlogx(y) + xlogx(p + x + y) + xlogx(x + y) + (1.0 - p) - 2.0 * (x + y))
}

/// Analytic gradient of [`tau`] at an interior point.
pub fn tau_partials(x: f64, y: f64, p: f64) -> (f64, f64) {
    let num = (x + y) * (p + x + y);
    ((num / (4.0 * x * (p + x))).log2(), (num / (4.0 * y * y)).log2())
}

/// The boundary point `(a^2, a - a^2)` where the maximum sits for `p > q`.
pub fn tau_maximizer(p: f64) -> (f64, f64) {
    let (a, _) = alpha_beta(p);
    (a * a, a - a * a)
}

/// Result of a numerical search over the region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TauMaximum {
    pub value: f64,
    pub x: f64,
    pub y: f64,
}

/// Grid search of [`tau`] at spacing `resolution` over the whole region,
/// followed by successive 10x zooms around the incumbent.
pub fn tau_grid_max(p: f64, resolution: f64) -> Result<TauMaximum> {
    if !(0.0..1.0).contains(&p) || resolution <= 0.0 {
        return Err(Error::Domain(format!("grid search needs p in [0, 1) and positive resolution, got {p}, {resolution}")));
    }
    let (a, _) = alpha_beta(p);
    let k = (a / resolution).ceil() as usize;
    let step = a / k as f64;
    let mut best = TauMaximum { value: f64::NEG_INFINITY, x: 0.0, y: 0.0 };
    let consider = |x: f64, y: f64, best: &mut TauMaximum| {
        if let Ok(v) = tau(x, y, p) {
            if v > best.value {
                *best = TauMaximum { value: v, x, y };
            }
        }
    };
    for i in 0..=k {
        for j in 0..=k - i {
            consider(i as f64 * step, j as f64 * step, &mut best);
        }
    }
    let mut width = step;
    while width > 1e-15 {
        let (cx, cy) = (best.x, best.y);
        let fine = width / 10.0;
        for i in -20i32..=20 {
            let x = (cx + f64::from(i) * fine).clamp(0.0, a);
            for j in -20i32..=20 {
                let y = (cy + f64::from(j) * fine).clamp(0.0, (a - x).max(0.0));
                consider(x, y, &mut best);
            }
            consider(x, (a - x).max(0.0), &mut best);
        }
        width = fine;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::solve_q;

    #[test]
    fn closed_form_endpoints() {
        assert_eq!(mutual_info_key(1.0), 1.0);
        assert!(mutual_info_key(0.0).abs() < 1e-15);
        assert!(holevo_upper_bound(1.0).unwrap().abs() < 1e-15);
        assert!((dw_lower_bound(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(dw_lower_bound(solve_q()).unwrap().abs() < 1e-9);
        assert!(holevo_upper_bound(solve_q()).is_err());
        assert!(dw_lower_bound(0.4).is_err());
    }

    #[test]
    fn pure_ghz_has_no_leakage_and_even_mix_none_either() {
        assert_eq!(holevo_trusted_exact(&GhzSpectrum::pure_ghz(4).unwrap()), 0.0);
        let half = GhzSpectrum::new(3, 0.5, 0.5, vec![0.0; 3]).unwrap();
        assert!(holevo_trusted_exact(&half).abs() < 1e-15);
    }

    #[test]
    fn maximiser_attains_bound() {
        for &p in &[0.8, 0.85, 0.9, 0.95, 0.99] {
            let (x, y) = tau_maximizer(p);
            assert!((tau(x, y, p).unwrap() - holevo_upper_bound(p).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_plus_key_information_is_consistent() {
        for &p in &[0.8, 0.9, 0.97] {
            let lhs = mutual_info_key(p) - holevo_upper_bound(p).unwrap();
            assert!((lhs - tau_tilde(p)).abs() < 1e-12);
        }
    }

    #[test]
    fn partials_match_finite_differences() {
        let p = 0.85;
        for &(x, y) in &[(0.01, 0.02), (0.03, 0.04), (0.005, 0.06), (0.04, 0.001)] {
            let (dx, dy) = tau_partials(x, y, p);
            let e = 1e-7;
            let fx = (tau(x + e, y, p).unwrap() - tau(x - e, y, p).unwrap()) / (2.0 * e);
            let fy = (tau(x, y + e, p).unwrap() - tau(x, y - e, p).unwrap()) / (2.0 * e);
            assert!((dx - fx).abs() < 1e-6 && (dy - fy).abs() < 1e-6);
        }
    }

    #[test]
    fn outside_region_is_rejected() {
        assert!(tau(-0.1, 0.0, 0.9).is_err());
        assert!(tau(0.04, 0.04, 0.9).is_err());
    }
}
