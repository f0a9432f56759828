//! `qss mermin`: exact Mermin value and its sampled estimate.

use std::fs;
use std::path::Path;

use qss_core::analytics::werner_spectrum;
use qss_core::protocol::{compute_sn, solve_q};
use qss_core::quantum::{mermin_expectation, BasisChoice, GhzSpectrum, OutcomeSampler, RoundRecord};
use qss_core::rng::stream;
use rand::Rng;

use crate::simulate::SpectrumSpec;
use crate::{io_error, resolve_seed, CliError, CliResult};

fn load_spectrum(path: &Path) -> CliResult<GhzSpectrum> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let spec: SpectrumSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    spec.build()
}

/// `rounds` samples with uniformly random even-Y basis patterns.
pub fn sample_records(spectrum: &GhzSpectrum, rounds: usize, seed: u64) -> Vec<RoundRecord> {
    let n = spectrum.n_players();
    let mut rng = stream(seed, 0);
    let mut sampler = OutcomeSampler::new(spectrum.clone());
    (0..rounds)
        .map(|_| {
            let head: usize = rng.random_range(0..1usize << (n - 1));
            let mask = (head << 1) | (head.count_ones() as usize & 1);
            let bases = BasisChoice::from_y_mask(n, mask);
            let outcomes = sampler.sample(&bases.local(), &mut rng).expect("basis count matches");
            RoundRecord::new(bases, outcomes).expect("lengths match")
        })
        .collect()
}

pub fn run(
    n_players: Option<usize>,
    spectrum: Option<&Path>,
    werner: Option<f64>,
    rounds: usize,
    seed: Option<u64>,
) -> CliResult<()> {
    let state = match (spectrum, werner) {
        (Some(path), _) => {
            let s = load_spectrum(path)?;
            if let Some(n) = n_players.filter(|&n| n != s.n_players()) {
                return Err(CliError::Usage(format!("--n-players {n} but the spectrum has {}", s.n_players())));
            }
            s
        }
        (None, Some(p)) => {
            let n = n_players.ok_or_else(|| CliError::Usage("--werner needs --n-players".into()))?;
            werner_spectrum(n, p)?
        }
        (None, None) => return Err(CliError::Usage("give --spectrum or --werner".into())),
    };
    if rounds == 0 {
        return Err(CliError::Usage("--rounds must be positive".into()));
    }
    let seed = resolve_seed(seed, None)?;
    let delta = mermin_expectation(&state);
    let q = solve_q();
    let report = compute_sn(&sample_records(&state, rounds, seed), q)?;
    let sigma = ((1.0 - delta * delta).max(0.0) / rounds as f64).sqrt();

    println!("players   {}", state.n_players());
    println!("delta     {delta:.12}");
    println!("rounds    {}", report.n);
    println!("seed      {seed}");
    println!("S_n       {}", report.s_n);
    println!("S_n/n     {:.12}", report.ratio);
    println!("sigma     {sigma:.12}");
    println!("q         {q:.12}");
    println!("check     {}", if report.passed { "pass" } else { "fail" });
    Ok(())
}
