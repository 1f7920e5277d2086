//! File formats: two-column profiles, trajectory and distance CSV, and
//! versioned JSON documents.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use radhj::{RadialField, RadialGrid, Trajectory};
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Version of every JSON document written by the CLI.
pub const SCHEMA: u32 = 1;

/// Reads `r u` pairs, one per line; blank lines and `#` comments are
/// skipped, commas are accepted as separators.
pub fn read_profile(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_profile(&text).map_err(|(line, msg)| CliError::ProfileFile {
        path: path.to_path_buf(),
        line,
        msg,
    })
}

pub fn parse_profile(text: &str) -> Result<Vec<(f64, f64)>, (usize, String)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err((i + 1, format!("expected two columns, found {}", cols.len())));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| (i + 1, format!("bad number {s:?}: {e}")))
        };
        out.push((parse(cols[0])?, parse(cols[1])?));
    }
    if out.is_empty() {
        return Err((0, "no samples".into()));
    }
    Ok(out)
}

pub fn profile_from_file(path: &Path, grid: RadialGrid) -> CliResult<RadialField> {
    let samples = read_profile(path)?;
    Ok(RadialField::from_samples(grid, &samples)?)
}

pub fn write_profile(path: &Path, field: &RadialField) -> CliResult<()> {
    let mut s = String::new();
    for (r, u) in field.grid().nodes().iter().zip(field.values()) {
        let _ = writeln!(s, "{r} {u}");
    }
    write_text(path, &s)
}

/// `time,r,u` rows for every `stride`-th recorded state (the final state
/// is always included).
pub fn trajectory_csv(traj: &Trajectory, stride: usize) -> String {
    let mut s = String::from("time,r,u\n");
    let last = traj.len().saturating_sub(1);
    for (k, (t, state)) in traj.times.iter().zip(&traj.states).enumerate() {
        if k % stride != 0 && k != last {
            continue;
        }
        for (r, u) in state.grid().nodes().iter().zip(state.values()) {
            let _ = writeln!(s, "{t},{r},{u}");
        }
    }
    s
}

/// Reads a trajectory CSV back; rows must be grouped by time.
pub fn parse_trajectory_csv(text: &str) -> Result<Trajectory, String> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("time,r,u") {
        return Err("missing header time,r,u".into());
    }
    let mut times: Vec<f64> = Vec::new();
    let mut columns: Vec<Vec<(f64, f64)>> = Vec::new();
    for (i, line) in lines.enumerate() {
        let cols: Vec<f64> = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("line {}: {e}", i + 2))?;
        if cols.len() != 3 {
            return Err(format!("line {}: expected 3 columns", i + 2));
        }
        if times.last() != Some(&cols[0]) {
            times.push(cols[0]);
            columns.push(Vec::new());
        }
        columns.last_mut().expect("pushed").push((cols[1], cols[2]));
    }
    let cells = columns.first().map_or(0, Vec::len).saturating_sub(1);
    let grid = RadialGrid::new(cells).map_err(|e| e.to_string())?;
    let states = columns
        .into_iter()
        .map(|c| RadialField::new(grid, c.into_iter().map(|(_, u)| u).collect()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Trajectory::from_states(times, states).map_err(|e| e.to_string())
}

pub fn distance_csv(times: &[f64], distances: &[f64]) -> String {
    let mut s = String::from("time,distance\n");
    for (t, d) in times.iter().zip(distances) {
        let _ = writeln!(s, "{t},{d}");
    }
    s
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    write_text(path, &to_json(value)?)
}
