//! Brute-force dense oracles shared by the integration tests.
//!
//! Everything here works on explicit state vectors and matrices and never
//! calls the library's closed forms.

#![allow(dead_code)]

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;
use qss_core::quantum::GhzSpectrum;
use rand::Rng;
use rand_distr::{Distribution, Exp1};

pub type Basis2 = [[C; 2]; 2];

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn xlog(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

pub fn h2(x: f64) -> f64 {
    -xlog(x) - xlog(1.0 - x)
}

pub fn shannon(ws: impl IntoIterator<Item = f64>) -> f64 {
    ws.into_iter().map(|w| -xlog(w)).sum()
}

/// `(|j> + s|2^n - 1 - j>)/sqrt 2`, qubit 0 most significant.
pub fn ghz(n: usize, j: usize, minus: bool) -> DVector<C> {
    let dim = 1 << n;
    let mut v = DVector::from_element(dim, c(0.0));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    v[j] += c(r);
    v[dim - 1 - j] += c(if minus { -r } else { r });
    v
}

pub fn x_basis() -> Basis2 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [[c(r), c(r)], [c(r), c(-r)]]
}

pub fn y_basis() -> Basis2 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    [[c(r), C::new(0.0, r)], [c(r), C::new(0.0, -r)]]
}

/// `{mu|0> + nu|1>, nu*|0> - mu*|1>}` with real `mu, nu >= 0`.
pub fn mu_basis(mu_sq: f64) -> Basis2 {
    let (mu, nu) = (mu_sq.sqrt(), (1.0 - mu_sq).sqrt());
    [[c(mu), c(nu)], [c(nu), c(-mu)]]
}

pub fn xy(y: bool) -> Basis2 {
    if y {
        y_basis()
    } else {
        x_basis()
    }
}

pub fn bit(n: usize, m: usize, player: usize) -> usize {
    (m >> (n - 1 - player)) & 1
}

/// Product measurement vector `|m>` in the given local bases.
pub fn outcome_vector(bases: &[Basis2], m: usize) -> DVector<C> {
    let n = bases.len();
    DVector::from_fn(1 << n, |x, _| {
        (0..n).map(|i| bases[i][bit(n, m, i)][bit(n, x, i)]).product::<C>()
    })
}

/// `<m|psi>` for every outcome `m`.
pub fn amplitudes(bases: &[Basis2], psi: &DVector<C>) -> Vec<C> {
    (0..1 << bases.len()).map(|m| outcome_vector(bases, m).dotc(psi)).collect()
}

pub fn distribution(rho: &DMatrix<C>, bases: &[Basis2]) -> Vec<f64> {
    (0..1 << bases.len())
        .map(|m| {
            let v = outcome_vector(bases, m);
            (v.adjoint() * rho * &v)[(0, 0)].re
        })
        .collect()
}

pub fn components(s: &GhzSpectrum) -> Vec<(DVector<C>, f64)> {
    let n = s.n_players();
    let mut out = vec![(ghz(n, 0, false), s.lambda0_plus()), (ghz(n, 0, true), s.lambda0_minus())];
    for (i, &w) in s.lambda().iter().enumerate() {
        out.push((ghz(n, i + 1, false), w));
        out.push((ghz(n, i + 1, true), w));
    }
    out
}

pub fn density(comps: &[(DVector<C>, f64)]) -> DMatrix<C> {
    let dim = comps[0].0.len();
    comps.iter().fold(DMatrix::zeros(dim, dim), |acc, (v, w)| acc + v * v.adjoint() * c(*w))
}

fn pauli(k: usize) -> DMatrix<C> {
    let i = C::new(0.0, 1.0);
    match k {
        0 => DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]),
        _ => DMatrix::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]),
    }
}

/// Sum over X/Y strings with an even number `l` of Y's, signed `(-1)^(l/2)`.
pub fn mermin(n: usize) -> DMatrix<C> {
    let dim = 1 << n;
    let mut acc = DMatrix::zeros(dim, dim);
    for mask in 0..dim {
        let l = (mask as u32).count_ones();
        if l % 2 == 1 {
            continue;
        }
        let term = (0..n).fold(DMatrix::from_element(1, 1, c(1.0)), |t, i| t.kronecker(&pauli(bit(n, mask, i))));
        acc += term * c(if (l / 2) % 2 == 0 { 1.0 } else { -1.0 });
    }
    acc
}

pub fn eigenvalues(m: &DMatrix<C>) -> Vec<f64> {
    m.clone().symmetric_eigenvalues().iter().copied().collect()
}

/// `chi(key : side, E)` where E holds a purification of `sum_c w_c |psi_c><psi_c|`
/// and the players measure in `bases`. Outcomes enter through `key(m)` and
/// the classical side information `side(m)`; all other outcomes are traced out.
pub fn holevo(
    comps: &[(DVector<C>, f64)],
    bases: &[Basis2],
    key: impl Fn(usize) -> usize,
    side: impl Fn(usize) -> usize,
) -> f64 {
    holevo_mixture(comps, &[(bases.to_vec(), 1.0)], |_, m| key(m), |_, m| side(m))
}

/// As [`holevo`], with the measurement setting drawn from `settings` and
/// hidden from the adversary. `key` and `side` see the setting index.
pub fn holevo_mixture(
    comps: &[(DVector<C>, f64)],
    settings: &[(Vec<Basis2>, f64)],
    key: impl Fn(usize, usize) -> usize,
    side: impl Fn(usize, usize) -> usize,
) -> f64 {
    let e = comps.len();
    let mut blocks: BTreeMap<(usize, usize), DMatrix<C>> = BTreeMap::new();
    for (t, (bases, weight)) in settings.iter().enumerate() {
        let amps: Vec<Vec<C>> = comps.iter().map(|(v, _)| amplitudes(bases, v)).collect();
        for m in 0..1 << bases.len() {
            let v = DVector::from_fn(e, |k, _| amps[k][m] * (comps[k].1 * weight).sqrt());
            let b = blocks.entry((key(t, m), side(t, m))).or_insert_with(|| DMatrix::zeros(e, e));
            *b += &v * v.adjoint();
        }
    }
    let mut by_side: BTreeMap<usize, DMatrix<C>> = BTreeMap::new();
    let mut by_key: BTreeMap<usize, f64> = BTreeMap::new();
    for ((k, s), b) in &blocks {
        *by_side.entry(*s).or_insert_with(|| DMatrix::zeros(e, e)) += b;
        *by_key.entry(*k).or_insert(0.0) += b.trace().re;
    }
    let s_total = shannon(by_side.values().flat_map(eigenvalues).map(|x| x.max(0.0)));
    let s_cond: f64 = blocks
        .iter()
        .map(|((k, _), b)| {
            let pk = by_key[k];
            pk * shannon(eigenvalues(b).into_iter().map(|x| (x / pk).max(0.0)))
        })
        .sum();
    s_total - s_cond
}

/// `I(A : B)` for a joint table indexed `[a][b]`.
pub fn mutual_information(joint: &[Vec<f64>]) -> f64 {
    let total: f64 = joint.iter().flatten().sum();
    let pa: Vec<f64> = joint.iter().map(|r| r.iter().sum::<f64>() / total).collect();
    let pb: Vec<f64> = (0..joint[0].len()).map(|j| joint.iter().map(|r| r[j]).sum::<f64>() / total).collect();
    let mut acc = 0.0;
    for (a, row) in joint.iter().enumerate() {
        for (b, &w) in row.iter().enumerate() {
            let p = w / total;
            if p > 0.0 {
                acc += p * (p / (pa[a] * pb[b])).log2();
            }
        }
    }
    acc
}

/// Random weights with exponential marginals, shaped as a spectrum.
pub fn random_spectrum<R: Rng>(n: usize, rng: &mut R) -> GhzSpectrum {
    let pairs = (1 << (n - 1)) - 1;
    let raw: Vec<f64> = (0..pairs + 2).map(|_| Exp1.sample(rng)).collect();
    let total = raw[0] + raw[1] + 2.0 * raw[2..].iter().sum::<f64>();
    let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    GhzSpectrum::with_tolerance(n, w[0], w[1], w[2..].to_vec(), 1e-9).unwrap()
}

/// A random spectrum mixed toward `|Psi_0^+>` until `delta > threshold`.
pub fn random_spectrum_above<R: Rng>(n: usize, threshold: f64, rng: &mut R) -> GhzSpectrum {
    loop {
        let base = random_spectrum(n, rng);
        let t: f64 = rng.random_range(0.6..1.0);
        let s = GhzSpectrum::with_tolerance(
            n,
            t + (1.0 - t) * base.lambda0_plus(),
            (1.0 - t) * base.lambda0_minus(),
            base.lambda().iter().map(|w| (1.0 - t) * w).collect(),
            1e-9,
        )
        .unwrap();
        if s.delta() > threshold {
            return s;
        }
    }
}

/// `G G^dag / tr` for a complex Gaussian `G`.
pub fn random_density<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<C> {
    use rand_distr::StandardNormal;
    let g = DMatrix::from_fn(dim, dim, |_, _| C::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let rho = &g * g.adjoint();
    let tr = rho.trace();
    rho / tr
}
