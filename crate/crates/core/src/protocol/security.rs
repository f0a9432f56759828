use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::quantum::{draw_index, joint_outcome_distribution, outcome_bits, BasisChoice, GhzSpectrum, RoundRecord};
use crate::{Error, Result};

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Left-hand side minus right-hand side of the threshold equation.
pub fn threshold_residual(q: f64) -> f64 {
    let s = (1.0 - q) * (1.0 - q);
    let t = (1.0 + q) * (1.0 + q);
    let u = 1.0 - q * q;
    // (1-q)^2 log(1-q) = xlogx((1-q)^2)/2 and likewise for the other terms
    0.5 * xlogx(s) + 0.5 * xlogx(t) + xlogx(u) - 2.0
}

fn bisect_threshold() -> f64 {
    let (mut lo, mut hi) = (0.5, 1.0);
    assert!(
        threshold_residual(lo) < 0.0 && threshold_residual(hi) > 0.0,
        "threshold equation has no sign change on [0.5, 1]"
    );
    while hi - lo > f64::EPSILON {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if threshold_residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if threshold_residual(lo).abs() <= threshold_residual(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Security-check threshold `q`, the root of the threshold equation on
/// `[0.5, 1]`.
pub fn solve_q() -> f64 {
    static Q: OnceLock<f64> = OnceLock::new();
    *Q.get_or_init(bisect_threshold)
}

/// Whether the outcome parity matches the target parity for this round's Y-count.
pub fn eq1_satisfied(record: &RoundRecord) -> Result<bool> {
    let k = record.bases.y_count();
    if k % 2 == 1 {
        return Err(Error::OddYCount(k));
    }
    Ok(record.parity() == (k % 4 == 2))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecurityCheckReport {
    pub s_n: i64,
    pub n: usize,
    pub ratio: f64,
    /// Rounds violating the target parity.
    pub xi: usize,
    pub passed: bool,
}

/// `S_n = sum_i a_i` with `a_i = +1` exactly when round `i` has the target parity.
pub fn compute_sn(records: &[RoundRecord], q: f64) -> Result<SecurityCheckReport> {
    let mut xi = 0;
    for r in records {
        if !eq1_satisfied(r)? {
            xi += 1;
        }
    }
    let n = records.len();
    let s_n = n as i64 - 2 * xi as i64;
    let ratio = if n == 0 { 0.0 } else { s_n as f64 / n as f64 };
    Ok(SecurityCheckReport { s_n, n, ratio, xi, passed: n > 0 && ratio > q })
}

/// Frequency of `S_n > (1 - 2 delta) n` together with
/// `S~_n < (1 - 2 delta - eps) n`, where `S_n` and `S~_n` are computed on
/// the two halves of `2n` even-Y rounds. Rounds are i.i.d., so the fixed
/// split is a uniformly random one in distribution.
pub fn sampling_fluctuation_probe<R: Rng + ?Sized>(
    spectrum: &GhzSpectrum,
    n: usize,
    delta: f64,
    eps: f64,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    if n == 0 || trials == 0 {
        return Err(Error::Domain("probe needs positive n and trial count".into()));
    }
    let players = spectrum.n_players();
    let masks: Vec<usize> = (0..1usize << players).filter(|m| m.count_ones() % 2 == 0).collect();
    let tables = masks
        .iter()
        .map(|&m| {
            let bases = BasisChoice::from_y_mask(players, m);
            Ok((bases.clone(), joint_outcome_distribution(spectrum, &bases)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let sample_a = |rng: &mut R| -> i64 {
        let (bases, table) = &tables[rng.random_range(0..tables.len())];
        let outcomes = outcome_bits(players, draw_index(table, rng));
        let record = RoundRecord { bases: bases.clone(), outcomes };
        if eq1_satisfied(&record).expect("even Y") {
            1
        } else {
            -1
        }
    };
    let check_threshold = (1.0 - 2.0 * delta) * n as f64;
    let key_threshold = (1.0 - 2.0 * delta - eps) * n as f64;
    let mut hits = 0usize;
    for _ in 0..trials {
        let s_check: i64 = (0..n).map(|_| sample_a(rng)).sum();
        let s_key: i64 = (0..n).map(|_| sample_a(rng)).sum();
        if (s_check as f64) > check_threshold && (s_key as f64) < key_threshold {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}
