use nalgebra::DMatrix;

use super::{check_players, GhzSpectrum, C64};
use crate::Result;

/// The Mermin operator `B_M = sum (-1)^(l/2) P_1 ⊗ ... ⊗ P_N`, summed over
/// all X/Y strings with an even number `l` of Y factors.
///
/// Every such string maps `|a>` to a multiple of `|a XOR 1..1>`, so the
/// matrix is built entry by entry instead of through Kronecker products.
pub fn mermin_operator(n_players: usize) -> Result<DMatrix<C64>> {
    check_players(n_players)?;
    let dim = 1usize << n_players;
    let all = dim - 1;
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    // y_mask bit i (MSB = player 1) set when player i measures Y
    for y_mask in 0..dim {
        let l = y_mask.count_ones();
        if l % 2 == 1 {
            continue;
        }
        let sign = if (l / 2) % 2 == 0 { 1.0 } else { -1.0 };
        for row in 0..dim {
            // <row| P |row ^ all>: X contributes 1; Y contributes -i for a
            // row bit 0 and +i for a row bit 1
            let ys_on_zero = (y_mask & !row & all).count_ones();
            let ys_on_one = (y_mask & row).count_ones();
            let phase = C64::new(0.0, -1.0).powu(ys_on_zero) * C64::new(0.0, 1.0).powu(ys_on_one);
            m[(row, row ^ all)] += phase * sign;
        }
    }
    Ok(m)
}

/// `lambda0_plus - lambda0_minus`, equal to `tr(rho B_M) / 2^(N-1)`.
pub fn mermin_expectation(spectrum: &GhzSpectrum) -> f64 {
    spectrum.delta()
}
