//! Text cache for ground states.
//!
//! ```text
//! kgdamp-ground-state 1
//! r_max 20
//! n 2001
//! tol 1e-10
//! matching_radius 11.04
//! r q
//! 0 4.33738767994
//! 0.01 4.3373...
//! ```
//!
//! One node per line after the `r q` header, values in shortest round-trip
//! form, so a load reproduces the samples exactly. A cache directory holds
//! one such file per grid.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use kgdamp::{shoot_ground_state, verify_ground_state, GroundState, RadialGrid};

use crate::error::{io, CliError, Result};

pub const MAGIC: &str = "kgdamp-ground-state";
pub const VERSION: u32 = 1;

pub fn render(gs: &GroundState) -> String {
    let mut out = String::new();
    let g = &gs.grid;
    writeln!(out, "{MAGIC} {VERSION}").unwrap();
    writeln!(out, "r_max {}", g.r_max()).unwrap();
    writeln!(out, "n {}", g.len()).unwrap();
    writeln!(out, "tol {}", gs.tol).unwrap();
    writeln!(out, "matching_radius {}", gs.matching_radius).unwrap();
    writeln!(out, "r q").unwrap();
    for (i, q) in gs.q.iter().enumerate() {
        writeln!(out, "{} {}", g.r(i), q).unwrap();
    }
    out
}

fn field<'a>(lines: &mut impl Iterator<Item = &'a str>, name: &str) -> std::result::Result<&'a str, String> {
    let line = lines.next().ok_or_else(|| format!("missing {name}"))?;
    match line.split_once(' ') {
        Some((key, value)) if key == name => Ok(value.trim()),
        _ => Err(format!("expected `{name} <value>`, got {line:?}")),
    }
}

fn number<T: std::str::FromStr>(text: &str, name: &str) -> std::result::Result<T, String> {
    text.parse().map_err(|_| format!("{name}: cannot parse {text:?}"))
}

pub fn parse(text: &str) -> std::result::Result<GroundState, String> {
    let mut lines = text.lines();
    let version: u32 = number(field(&mut lines, MAGIC)?, "version")?;
    if version != VERSION {
        return Err(format!("version {version} is not supported (expected {VERSION})"));
    }
    let r_max: f64 = number(field(&mut lines, "r_max")?, "r_max")?;
    let n: usize = number(field(&mut lines, "n")?, "n")?;
    let tol: f64 = number(field(&mut lines, "tol")?, "tol")?;
    let matching: f64 = number(field(&mut lines, "matching_radius")?, "matching_radius")?;
    if lines.next() != Some("r q") {
        return Err("missing `r q` header".into());
    }
    let grid = RadialGrid::new(r_max, n).map_err(|e| e.to_string())?;
    let mut q = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let (r, value) = line
            .split_once(' ')
            .ok_or_else(|| format!("node {i}: expected `r q`"))?;
        let r: f64 = number(r, "r")?;
        if i >= n || (r - grid.r(i)).abs() > 1e-9 * r_max {
            return Err(format!("node {i} at r = {r} does not match the grid"));
        }
        q.push(number(value, "q")?);
    }
    if q.len() != n {
        return Err(format!("expected {n} nodes, found {}", q.len()));
    }
    GroundState::from_samples(grid, q, tol, matching).map_err(|e| e.to_string())
}

pub fn load(path: &Path) -> Result<GroundState> {
    let text = std::fs::read_to_string(path).map_err(io(path))?;
    let gs = parse(&text).map_err(|message| CliError::Cache {
        path: path.to_path_buf(),
        message,
    })?;
    if !verify_ground_state(&gs).stationary {
        return Err(CliError::Cache {
            path: path.to_path_buf(),
            message: "cached profile fails the stationarity check".into(),
        });
    }
    Ok(gs)
}

pub fn store(gs: &GroundState, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io(dir))?;
    }
    std::fs::write(path, render(gs)).map_err(io(path))
}

/// File in the cache directory holding `Q` for `grid`.
pub fn file_for(dir: &Path, grid: &RadialGrid) -> PathBuf {
    dir.join(format!("ground_state_r{}_n{}.txt", grid.r_max(), grid.len()))
}

/// Loads `Q` on `grid` from the cache directory when it holds a profile with
/// no looser tolerance; otherwise shoots and refreshes the cache.
pub fn obtain(grid: &RadialGrid, tol: f64, cache: Option<&Path>) -> Result<GroundState> {
    let file = cache.map(|dir| file_for(dir, grid));
    if let Some(path) = file.as_deref().filter(|p| p.exists()) {
        let gs = load(path)?;
        if gs.grid == *grid && gs.tol <= tol {
            return Ok(gs);
        }
    }
    let gs = shoot_ground_state(grid, tol)?;
    if let Some(path) = file {
        store(&gs, &path)?;
    }
    Ok(gs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground() -> GroundState {
        shoot_ground_state(&RadialGrid::new(20.0, 2001).unwrap(), 1e-10).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let gs = ground();
        let back = parse(&render(&gs)).unwrap();
        assert_eq!(back, gs);
    }

    #[test]
    fn rejects_damaged_files() {
        let text = render(&ground());
        assert!(parse(&text.replacen("ground-state 1", "ground-state 2", 1)).unwrap_err().contains("version"));
        let truncated: String = text.lines().take(100).map(|l| format!("{l}\n")).collect();
        assert!(parse(&truncated).unwrap_err().contains("expected 2001 nodes"));
        assert!(parse("nonsense").is_err());
    }

    #[test]
    fn obtain_reuses_the_cached_file() {
        let dir = tempfile::tempdir().unwrap();
        let grid = RadialGrid::new(20.0, 2001).unwrap();
        let first = obtain(&grid, 1e-9, Some(dir.path())).unwrap();
        let path = file_for(dir.path(), &grid);
        assert!(path.exists());
        let second = obtain(&grid, 1e-9, Some(dir.path())).unwrap();
        assert_eq!(first, second);
        // a tighter request than the cached tolerance shoots again
        let tighter = obtain(&grid, 1e-10, Some(dir.path())).unwrap();
        assert_eq!(tighter.tol, 1e-10);
        assert_eq!(load(&path).unwrap().tol, 1e-10);
    }
}
