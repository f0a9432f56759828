//! `qss keyrate`: Werner-state rate curves.

use std::path::{Path, PathBuf};

use qss_core::analytics::{tau_tilde, werner_dw_rate, werner_limit_rate};
use serde_json::json;

use crate::format::sig;
use crate::manifest::RunManifest;
use crate::{CliError, CliResult};

/// Parse `start:stop:step` into an inclusive grid.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Usage(format!("bad grid `{spec}`: {why}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(bad("expected start:stop:step"));
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("`{s}` is not a number")));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if ![start, stop, step].iter().all(|v| v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    if !(0.0..=1.0).contains(&start) || !(0.0..=1.0).contains(&stop) {
        return Err(bad("p must lie in [0, 1]"));
    }
    if stop < start {
        return Err(bad("stop precedes start"));
    }
    if start == stop {
        return Ok(vec![start]);
    }
    if step <= 0.0 {
        return Err(bad("step must be positive"));
    }
    let intervals = ((stop - start) / step).round();
    if (start + intervals * step - stop).abs() > 1e-9 * step.max(1e-12) {
        return Err(bad("step does not divide the range"));
    }
    let count = intervals as usize;
    Ok((0..=count).map(|i| if i == count { stop } else { start + i as f64 * step }).collect())
}

pub fn header(ms: &[u32]) -> String {
    let mut cols = vec!["p".to_string(), "dw_lower".to_string()];
    cols.extend(ms.iter().map(|m| format!("m{m}")));
    cols.push("m_inf".into());
    cols.join(",")
}

pub fn render(grid: &[f64], ms: &[u32]) -> CliResult<String> {
    let mut out = header(ms);
    out.push('\n');
    for &p in grid {
        let mut row = vec![sig(p), sig(tau_tilde(p))];
        for &m in ms {
            row.push(sig(werner_dw_rate(p, m)?));
        }
        row.push(sig(werner_limit_rate(p)));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn run(n_players: usize, ms: &[u32], grid_spec: &str, out: &Path, manifest: Option<&Path>) -> CliResult<()> {
    qss_core::quantum::check_players(n_players)?;
    if ms.is_empty() {
        return Err(CliError::Usage("--m-trusted needs at least one entry".into()));
    }
    if let Some(m) = ms.iter().find(|&&m| m < 2 || m as usize > n_players) {
        return Err(CliError::Usage(format!("trusted count {m} outside [2, {n_players}]")));
    }
    let grid = parse_grid(grid_spec)?;
    let csv = render(&grid, ms)?;

    let config = json!({ "n_players": n_players, "m_trusted": ms, "p_grid": grid_spec });
    let mut record = RunManifest::new("keyrate", config, None);
    record.emit(out, &csv)?;
    let manifest_path = manifest.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut s = out.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    });
    record.write(&manifest_path)?;
    println!("wrote {} rows to {}", grid.len(), out.display());
    Ok(())
}
