//! Random spectra and states for property checks and sweeps.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::quantum::{DensityMatrix, GhzSpectrum, C64};

/// Symmetric Dirichlet(`concentration`) over the `2^(N-1) + 1` free weights
/// `(lambda0_plus, lambda0_minus, 2 lambda_1, ..., 2 lambda_{2^(N-1)-1})`.
pub fn random_spectrum_dirichlet<R: Rng + ?Sized>(n_players: usize, concentration: f64, rng: &mut R) -> GhzSpectrum {
    let free = (1usize << (n_players - 1)) + 1;
    let gamma = Gamma::new(concentration, 1.0).expect("positive concentration");
    let mut w: Vec<f64> = (0..free).map(|_| gamma.sample(rng)).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    let lambda = w[2..].iter().map(|x| x / 2.0).collect();
    GhzSpectrum::with_tolerance(n_players, w[0], w[1], lambda, 1e-9).expect("dirichlet weights are normalised")
}

pub fn random_spectrum<R: Rng + ?Sized>(n_players: usize, rng: &mut R) -> GhzSpectrum {
    random_spectrum_dirichlet(n_players, 1.0, rng)
}

/// Convex mixture `t * a + (1 - t) * b` of two spectra.
pub fn mix(a: &GhzSpectrum, b: &GhzSpectrum, t: f64) -> GhzSpectrum {
    let lambda = a.lambda().iter().zip(b.lambda()).map(|(x, y)| t * x + (1.0 - t) * y).collect();
    GhzSpectrum::with_tolerance(
        a.n_players(),
        t * a.lambda0_plus() + (1.0 - t) * b.lambda0_plus(),
        t * a.lambda0_minus() + (1.0 - t) * b.lambda0_minus(),
        lambda,
        1e-9,
    )
    .expect("mixture of normalised spectra")
}

/// Move `spectrum` to `lambda0_plus - lambda0_minus = delta` by mixing with
/// `|Psi_0^+>` (raising) or `|Psi_0^->` (lowering).
pub fn with_delta(spectrum: &GhzSpectrum, delta: f64) -> GhzSpectrum {
    let n = spectrum.n_players();
    let current = spectrum.delta();
    if current < delta {
        let t = (delta - current) / (1.0 - current);
        mix(&GhzSpectrum::pure_ghz(n).expect("valid n"), spectrum, t)
    } else {
        let t = (current - delta) / (1.0 + current);
        let lambda = vec![0.0; spectrum.lambda().len()];
        let minus = GhzSpectrum::new(n, 0.0, 1.0, lambda).expect("valid n");
        mix(&minus, spectrum, t)
    }
}

/// Random spectrum with a prescribed `delta`.
pub fn random_spectrum_with_delta<R: Rng + ?Sized>(n_players: usize, delta: f64, rng: &mut R) -> GhzSpectrum {
    with_delta(&random_spectrum(n_players, rng), delta)
}

/// Ginibre-distributed mixed state `G G^† / tr(G G^†)`.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let m = &g * g.adjoint();
    let tr = m.trace();
    let m = m / tr;
    // force exact Hermiticity
    let m = (&m + m.adjoint()) * C64::from(0.5);
    DensityMatrix::new(m).expect("Ginibre states are valid")
}
