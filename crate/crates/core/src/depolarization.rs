//! Twirling an arbitrary N-qubit state into GHZ-diagonal form.
//!
//! The channel dephases in the GHZ basis and then averages the `+` and `-`
//! weights of every pair `j >= 1`, leaving `lambda0_plus` and
//! `lambda0_minus` untouched.

use crate::quantum::{ghz_basis_vector, ghz_diagonal_density, DensityMatrix, GhzSpectrum, Sign};
use crate::{Error, Result};

fn check_dim(state: &DensityMatrix, n_players: usize) -> Result<()> {
    crate::quantum::check_players(n_players)?;
    let expected = 1usize << n_players;
    if state.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: state.dim() });
    }
    Ok(())
}

/// GHZ-basis weights of `state` after the twirl.
pub fn ghz_project(state: &DensityMatrix, n_players: usize) -> Result<GhzSpectrum> {
    check_dim(state, n_players)?;
    let weight = |j: usize, sign: Sign| -> Result<f64> {
        let v = ghz_basis_vector(n_players, j, sign)?;
        Ok(state.sandwich(v.amplitudes()).max(0.0))
    };
    let plus = weight(0, Sign::Plus)?;
    let minus = weight(0, Sign::Minus)?;
    let lambda = (1..1usize << (n_players - 1))
        .map(|j| Ok(0.5 * (weight(j, Sign::Plus)? + weight(j, Sign::Minus)?)))
        .collect::<Result<Vec<_>>>()?;
    // absorbs round-off from the eigenvalue clamp
    GhzSpectrum::with_tolerance(n_players, plus, minus, lambda, 1e-9)
}

/// The depolarization channel as a map on density matrices.
pub fn depolarize_channel(state: &DensityMatrix, n_players: usize) -> Result<DensityMatrix> {
    Ok(ghz_diagonal_density(&ghz_project(state, n_players)?))
}

/// `tr(rho (|Psi_0^+><Psi_0^+| - |Psi_0^-><Psi_0^-|))`.
pub fn ghz_delta(state: &DensityMatrix, n_players: usize) -> Result<f64> {
    check_dim(state, n_players)?;
    let plus = ghz_basis_vector(n_players, 0, Sign::Plus)?;
    let minus = ghz_basis_vector(n_players, 0, Sign::Minus)?;
    Ok(state.sandwich(plus.amplitudes()) - state.sandwich(minus.amplitudes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{ghz_basis_vector, C64};
    use crate::random::{random_density, random_spectrum};
    use crate::rng::stream;
    use nalgebra::DMatrix;

    fn rho_tilde() -> DensityMatrix {
        let a = ghz_basis_vector(3, 0, Sign::Plus).unwrap();
        let b = ghz_basis_vector(3, 2, Sign::Plus).unwrap();
        let (a, b) = (a.amplitudes(), b.amplitudes());
        let m = a * a.adjoint() * C64::from(0.9)
            + b * b.adjoint() * C64::from(0.1)
            + (a * b.adjoint() + b * a.adjoint()) * C64::from(0.3);
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn rho_tilde_projects_onto_two_pairs() {
        let s = ghz_project(&rho_tilde(), 3).unwrap();
        assert!((s.lambda0_plus() - 0.9).abs() < 1e-12);
        assert!(s.lambda0_minus().abs() < 1e-12);
        assert!((s.lambda_j(2) - 0.05).abs() < 1e-12);
        assert!(s.lambda_j(1).abs() < 1e-12 && s.lambda_j(3).abs() < 1e-12);
    }

    #[test]
    fn diagonal_input_is_a_fixed_point() {
        let mut rng = stream(41, 0);
        for n in 3..=5 {
            let s = random_spectrum(n, &mut rng);
            let back = ghz_project(&ghz_diagonal_density(&s), n).unwrap();
            assert!((back.lambda0_plus() - s.lambda0_plus()).abs() < 1e-12);
            assert!((back.lambda0_minus() - s.lambda0_minus()).abs() < 1e-12);
            for (x, y) in back.lambda().iter().zip(s.lambda()) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn channel_is_idempotent_and_preserves_delta() {
        let mut rng = stream(42, 0);
        for _ in 0..100 {
            let rho = random_density(8, &mut rng);
            let once = depolarize_channel(&rho, 3).unwrap();
            let twice = depolarize_channel(&once, 3).unwrap();
            assert!((once.entries() - twice.entries()).camax() < 1e-12);
            assert!((once.trace().re - 1.0).abs() < 1e-12);
            assert!((ghz_delta(&rho, 3).unwrap() - ghz_delta(&once, 3).unwrap()).abs() < 1e-12);
            assert!((once.entries() - once.entries().adjoint()).camax() < 1e-14);
        }
    }

    #[test]
    fn output_has_no_ghz_coherences() {
        let mut rng = stream(43, 0);
        let rho = random_density(16, &mut rng);
        let out = depolarize_channel(&rho, 4).unwrap();
        let basis: Vec<_> = (0..8)
            .flat_map(|j| [Sign::Plus, Sign::Minus].map(|s| ghz_basis_vector(4, j, s).unwrap()))
            .collect();
        let u = DMatrix::from_columns(&basis.iter().map(|v| v.amplitudes().clone()).collect::<Vec<_>>());
        let in_ghz = u.adjoint() * out.entries() * &u;
        for r in 0..16 {
            for c in 0..16 {
                if r != c {
                    assert!(in_ghz[(r, c)].norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rho = DensityMatrix::maximally_mixed(8);
        assert!(matches!(ghz_project(&rho, 4), Err(Error::DimensionMismatch { .. })));
    }
}
