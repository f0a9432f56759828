//! `qss simulate`: one protocol run from a JSON config.

use std::fs;
use std::path::Path;

use qss_core::adversary::Strategy;
use qss_core::analytics::werner_spectrum;
use qss_core::protocol::{run_protocol, IidSpectrumSource, ProtocolConfig, ProtocolOutcome, ProtocolStatus};
use qss_core::quantum::GhzSpectrum;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::manifest::RunManifest;
use crate::{io_error, resolve_seed, CliError, CliResult};

/// Normalisation slack accepted in user-supplied spectra.
pub const SPECTRUM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub n_players: usize,
    pub lambda0_plus: f64,
    pub lambda0_minus: f64,
    pub lambda: Vec<f64>,
}

impl SpectrumSpec {
    pub fn build(&self) -> CliResult<GhzSpectrum> {
        Ok(GhzSpectrum::with_tolerance(
            self.n_players,
            self.lambda0_plus,
            self.lambda0_minus,
            self.lambda.clone(),
            SPECTRUM_TOL,
        )?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    /// Werner visibility `p`.
    Werner(f64),
    Spectrum(SpectrumSpec),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SimulationFile {
    #[serde(flatten)]
    pub protocol: ProtocolConfig,
    pub source: SourceSpec,
    #[serde(default)]
    pub strategies: Vec<Strategy>,
}

fn parse_error(path: &Path, e: &serde_json::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

/// Top-level keys the config accepts.
fn known_keys() -> Vec<String> {
    let defaults = serde_json::to_value(ProtocolConfig::new(3, 1, 0)).expect("config serialises");
    let mut keys: Vec<String> = defaults.as_object().expect("struct").keys().cloned().collect();
    keys.extend(["source".to_string(), "strategies".to_string()]);
    keys
}

/// 1-based line of the first occurrence of `"key"` as an object key.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map(|i| i + 1)
}

/// Parse and resolve a config file; `seed` overrides the file.
pub fn load(path: &Path, seed: Option<u64>) -> CliResult<SimulationFile> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let raw: Value = serde_json::from_str(&text).map_err(|e| parse_error(path, &e))?;
    let Some(obj) = raw.as_object() else {
        return Err(CliError::Usage(format!("{}: top level must be a JSON object", path.display())));
    };
    let known = known_keys();
    if let Some(bad) = obj.keys().find(|k| !known.contains(k)) {
        let at = key_line(&text, bad).map(|l| format!(" at line {l}")).unwrap_or_default();
        return Err(CliError::Usage(format!(
            "{}: unknown field `{bad}`{at}; expected one of {}",
            path.display(),
            known.join(", ")
        )));
    }
    let file_seed = match obj.get("seed") {
        None => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| CliError::Usage(format!("{}: seed must be an unsigned integer", path.display())))?,
        ),
    };
    let mut file: SimulationFile = serde_json::from_str(&text).map_err(|e| parse_error(path, &e))?;
    file.protocol.seed = resolve_seed(seed, file_seed)?;
    file.protocol.validate()?;
    Ok(file)
}

fn summary(outcome: &ProtocolOutcome, seed: u64) -> Value {
    let d = &outcome.diagnostics;
    let report = outcome.report.as_ref();
    json!({
        "status": outcome.status,
        "seed": seed,
        "s_n": report.map(|r| r.s_n),
        "checked_rounds": report.map(|r| r.n),
        "ratio": report.map(|r| r.ratio),
        "violations": report.map(|r| r.xi),
        "key_length": outcome.dealer_key.len(),
        "keys_agree": outcome.status == ProtocolStatus::Completed
            && outcome.dealer_key == outcome.combined_player_key(),
        "leakage": {
            "parity_bits": d.parity_bits_leaked,
            "hash_bits": d.hash_bits_leaked,
            "total": d.parity_bits_leaked + d.hash_bits_leaked,
        },
        "diagnostics": d,
    })
}

pub fn run(config: &Path, out_dir: &Path, seed: Option<u64>) -> CliResult<()> {
    let file = load(config, seed)?;
    let spectrum = match &file.source {
        SourceSpec::Werner(p) => werner_spectrum(file.protocol.n_players, *p)?,
        SourceSpec::Spectrum(s) => s.build()?,
    };
    if spectrum.n_players() != file.protocol.n_players {
        return Err(CliError::Usage(format!(
            "source describes {} players but n_players is {}",
            spectrum.n_players(),
            file.protocol.n_players
        )));
    }
    let mut source = IidSpectrumSource::new(spectrum);
    let outcome = run_protocol(&file.protocol, &mut source, &file.strategies)?;

    fs::create_dir_all(out_dir).map_err(|e| io_error(out_dir, e))?;
    let echo = serde_json::to_value(&file).expect("config serialises");
    let mut manifest = RunManifest::new("simulate", echo, Some(file.protocol.seed));
    let summary = summary(&outcome, file.protocol.seed);
    let mut summary_text = serde_json::to_string_pretty(&summary).expect("summary serialises");
    summary_text.push('\n');
    manifest.emit(&out_dir.join("summary.json"), &summary_text)?;
    manifest.emit(&out_dir.join("transcript.jsonl"), &outcome.transcript.to_jsonl())?;
    manifest.write(&out_dir.join("manifest.json"))?;

    let report = outcome.report.as_ref();
    println!("status: {:?}", outcome.status);
    if let Some(r) = report {
        println!("S_n = {} over {} rounds (ratio {:.6})", r.s_n, r.n, r.ratio);
    }
    println!(
        "key length: {}, leakage: {} bits",
        outcome.dealer_key.len(),
        outcome.diagnostics.parity_bits_leaked + outcome.diagnostics.hash_bits_leaked
    );
    println!("wrote {}", out_dir.display());
    Ok(())
}
