//! Self-check suites run by the command-line tool.

use serde::Serialize;

use crate::analytics::{
    holevo_dishonest_exact, holevo_trusted_exact, holevo_upper_bound, mutual_info_key, regroup_for_dishonest, tau,
    tau_grid_max, tau_maximizer, tau_partials, tau_tilde, werner_spectrum,
};
use crate::depolarization::{depolarize_channel, ghz_delta};
use crate::protocol::{compute_sn, sampling_fluctuation_probe, solve_q};
use crate::quantum::{ghz_diagonal_density, mermin_operator, OutcomeSampler};
use crate::random::{random_density, random_spectrum, random_spectrum_with_delta};
use crate::rng::stream;
use crate::{Error, Result};

pub const SUITES: &[&str] = &["prop1", "bounds", "tau", "delta", "prop2", "all"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(suite: &'static str, name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self { suite, name: name.into(), passed, detail }
    }
}

pub fn run_suite(name: &str, seed: u64) -> Result<Vec<CheckResult>> {
    match name {
        "prop1" => prop1(seed),
        "bounds" => bounds(seed),
        "tau" => tau_suite(),
        "delta" => delta(seed),
        "prop2" => prop2(seed),
        "all" => {
            let mut out = Vec::new();
            for s in &SUITES[..SUITES.len() - 1] {
                out.extend(run_suite(s, seed)?);
            }
            Ok(out)
        }
        other => Err(Error::Config(format!("unknown suite `{other}`; expected one of {}", SUITES.join(", ")))),
    }
}

fn prop1(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = stream(seed, 100);
    let mut out = Vec::new();
    for n in 3..=5 {
        let b = mermin_operator(n)?;
        let scale = (1u64 << (n - 1)) as f64;
        let worst = (0..100)
            .map(|_| {
                let s = random_spectrum(n, &mut rng);
                (ghz_diagonal_density(&s).expectation(&b).re / scale - s.delta()).abs()
            })
            .fold(0.0, f64::max);
        out.push(CheckResult::new("prop1", format!("mermin identity N={n}"), worst < 1e-10, format!("max deviation {worst:.3e}")));
    }
    let s = random_spectrum(3, &mut rng);
    let mut sampler = OutcomeSampler::new(s.clone());
    let rounds = 100_000;
    let mut records = Vec::with_capacity(rounds);
    while records.len() < rounds {
        let r = sampler.sample_round(&mut rng);
        if r.bases.y_count() % 2 == 0 {
            records.push(r);
        }
    }
    let rep = compute_sn(&records, solve_q())?;
    let d = s.delta();
    let tol = 4.0 * ((1.0 - d * d) / rounds as f64).sqrt();
    out.push(CheckResult::new(
        "prop1",
        "monte carlo S_n/n",
        (rep.ratio - d).abs() < tol,
        format!("S_n/n = {:.5}, delta = {d:.5}, 4 sigma = {tol:.5}", rep.ratio),
    ));
    Ok(out)
}

fn bounds(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = stream(seed, 200);
    let q = solve_q();
    let mut out = Vec::new();
    for n in 3..=5 {
        let mut worst = f64::NEG_INFINITY;
        let mut worst_dw = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let p = q + (1.0 - q) * rand::Rng::random::<f64>(&mut rng).max(1e-9);
            let s = random_spectrum_with_delta(n, p, &mut rng);
            let bound = holevo_upper_bound(s.delta())?;
            let chi = holevo_trusted_exact(&s);
            worst = worst.max(chi - bound);
            worst_dw = worst_dw.max(tau_tilde(s.delta()) - (mutual_info_key(s.delta()) - chi));
            for k in 1..=n - 2 {
                worst = worst.max(holevo_dishonest_exact(&regroup_for_dishonest(&s, k)?) - bound);
            }
        }
        out.push(CheckResult::new("bounds", format!("holevo dominance N={n}"), worst <= 1e-9, format!("max excess {worst:.3e}")));
        out.push(CheckResult::new("bounds", format!("dw consistency N={n}"), worst_dw <= 1e-9, format!("max shortfall {worst_dw:.3e}")));
    }
    Ok(out)
}

fn tau_suite() -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &p in &[0.8, 0.85, 0.95] {
        let best = tau_grid_max(p, 1e-3)?;
        let bound = holevo_upper_bound(p)?;
        let (x, y) = tau_maximizer(p);
        let at = tau(x, y, p)?;
        let ok = (best.value - bound).abs() < 1e-6 && (at - bound).abs() < 1e-12;
        out.push(CheckResult::new(
            "tau",
            format!("maximum p={p}"),
            ok,
            format!("grid {:.12}, bound {bound:.12}, argmax ({:.6}, {:.6})", best.value, best.x, best.y),
        ));
        let mut worst = 0.0f64;
        for &(x, y) in &[(0.2, 0.3), (0.1, 0.6), (0.5, 0.2)] {
            let a = 0.5 * (1.0 - p);
            let (x, y) = (x * a, y * a);
            let (dx, dy) = tau_partials(x, y, p);
            let e = 1e-7;
            let fx = (tau(x + e, y, p)? - tau(x - e, y, p)?) / (2.0 * e);
            let fy = (tau(x, y + e, p)? - tau(x, y - e, p)?) / (2.0 * e);
            worst = worst.max((dx - fx).abs()).max((dy - fy).abs());
        }
        out.push(CheckResult::new("tau", format!("partials p={p}"), worst < 1e-6, format!("max deviation {worst:.3e}")));
    }
    let q = solve_q();
    out.push(CheckResult::new("tau", "tau~(q) = 0", tau_tilde(q).abs() < 1e-9, format!("tau~(q) = {:.3e}", tau_tilde(q))));
    let grid: Vec<f64> = (0..1000).map(|i| 0.5 + 0.5 * f64::from(i) / 999.0).collect();
    let increasing = grid.windows(2).all(|w| tau_tilde(w[1]) > tau_tilde(w[0]));
    out.push(CheckResult::new("tau", "tau~ strictly increasing", increasing, "1000-point grid on [0.5, 1]".into()));
    Ok(out)
}

fn delta(seed: u64) -> Result<Vec<CheckResult>> {
    let mut rng = stream(seed, 300);
    let mut worst_delta = 0.0f64;
    let mut worst_idem = 0.0f64;
    for _ in 0..100 {
        let rho = random_density(8, &mut rng);
        let once = depolarize_channel(&rho, 3)?;
        let twice = depolarize_channel(&once, 3)?;
        worst_delta = worst_delta.max((ghz_delta(&rho, 3)? - ghz_delta(&once, 3)?).abs());
        worst_idem = worst_idem.max((once.entries() - twice.entries()).camax());
    }
    Ok(vec![
        CheckResult::new("delta", "delta invariance", worst_delta < 1e-12, format!("max deviation {worst_delta:.3e}")),
        CheckResult::new("delta", "idempotence", worst_idem < 1e-12, format!("max deviation {worst_idem:.3e}")),
    ])
}

fn prop2(seed: u64) -> Result<Vec<CheckResult>> {
    let s = werner_spectrum(3, 0.8)?;
    let small = sampling_fluctuation_probe(&s, 250, 0.15, 0.1, 2000, &mut stream(seed, 400))?;
    let large = sampling_fluctuation_probe(&s, 1000, 0.15, 0.1, 2000, &mut stream(seed, 401))?;
    Ok(vec![CheckResult::new(
        "prop2",
        "fluctuation decays with n",
        large <= small,
        format!("frequency {small:.4} at n=250, {large:.4} at n=1000"),
    )])
}
