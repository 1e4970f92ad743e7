use crate::grid::GridState;
use crate::FdError;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub times: Vec<f64>,
    pub files: Vec<String>,
}

/// Full-precision decimal with a '.' separator.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn snapshot_csv(state: &GridState) -> String {
    let mut s = String::from("x,u\n");
    for (x, u) in state.x.iter().zip(&state.u) {
        let _ = writeln!(s, "{},{}", fmt_f64(*x), fmt_f64(*u));
    }
    s
}

/// Writes `snapshot_NNNN.csv` per state and `manifest.json` into `dir`.
pub fn write_trajectory(dir: &Path, states: &[GridState]) -> Result<Manifest, FdError> {
    fs::create_dir_all(dir)?;
    let mut m = Manifest {
        times: Vec::with_capacity(states.len()),
        files: Vec::with_capacity(states.len()),
    };
    for (k, s) in states.iter().enumerate() {
        let name = format!("snapshot_{k:04}.csv");
        fs::write(dir.join(&name), snapshot_csv(s))?;
        m.times.push(s.t);
        m.files.push(name);
    }
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&m)?)?;
    Ok(m)
}
