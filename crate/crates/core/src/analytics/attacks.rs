use super::{h, xlogx};
use crate::quantum::{ghz_basis_vector, DensityMatrix, GhzSpectrum, Sign, C64};
use crate::{Error, Result};

fn check_unit(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} = {p} outside [0, 1]")))
    }
}

/// Coherent superposition of `|Psi_0^+>` and `|Psi_2^+>` on three qubits.
pub fn rho_tilde(p: f64) -> Result<DensityMatrix> {
    check_unit(p, "p")?;
    let a = ghz_basis_vector(3, 0, Sign::Plus)?;
    let b = ghz_basis_vector(3, 2, Sign::Plus)?;
    let v = a.amplitudes() * C64::from(p.sqrt()) + b.amplitudes() * C64::from((1.0 - p).sqrt());
    DensityMatrix::new(&v * v.adjoint())
}

/// `I(m_A : m_C)` on [`rho_tilde`], averaged over independent uniform X/Y
/// choices of Alice and Charlie.
pub fn rho_tilde_mutual_info(p: f64) -> Result<f64> {
    check_unit(p, "p")?;
    let arg = (0.5 + (p * (1.0 - p)).sqrt()).min(1.0);
    Ok(0.5 - 0.5 * h(arg))
}

/// `p |Psi_0^+><Psi_0^+| + (1 - p)/2 (|Psi_1^+><Psi_1^+| + |Psi_1^-><Psi_1^-|)`.
pub fn rho_bar_spectrum(p: f64) -> Result<GhzSpectrum> {
    check_unit(p, "p")?;
    GhzSpectrum::new(3, p, 0.0, vec![0.5 * (1.0 - p), 0.0, 0.0])
}

/// Bound on what a colluding Bob and the adversary learn in Sifting 1.
pub fn sifting1_attack_bound(spectrum: &GhzSpectrum) -> Result<f64> {
    if spectrum.n_players() != 3 {
        return Err(Error::Domain(format!("attack is defined for three players, got {}", spectrum.n_players())));
    }
    Ok(spectrum.lambda0_plus() + spectrum.lambda0_minus() + 2.0 * spectrum.lambda_j(2))
}

/// `chi(m_A : m_B E)` on [`rho_bar_spectrum`] when Bob measures in
/// `{mu|0> + nu|1>, nu*|0> - mu*|1>}` with `|mu|^2 = mu_sq`.
pub fn basis_attack_holevo(p: f64, mu_sq: f64) -> Result<f64> {
    check_unit(p, "p")?;
    check_unit(mu_sq, "mu_sq")?;
    let nu_sq = 1.0 - mu_sq;
    let t = 1.0 - 4.0 * (1.0 - p) * (p + (1.0 - 3.0 * p) * mu_sq * nu_sq);
    if t < -1e-12 {
        return Err(Error::Domain(format!("negative discriminant {t}")));
    }
    let root = t.max(0.0).sqrt();
    Ok(-xlogx(p) - xlogx((1.0 - p) * mu_sq) - xlogx((1.0 - p) * nu_sq) - h(0.5 * (1.0 + root)))
}
