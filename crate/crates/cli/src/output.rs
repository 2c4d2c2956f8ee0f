//! CSV and JSON artifacts. Floats are written in shortest round-trip form so
//! identical runs give identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use kgdamp::functionals::{Ball, Shell};
use kgdamp::RunSeries;
use serde::Serialize;

use crate::error::{io, Result};

pub fn series_header() -> String {
    let mut cols: Vec<String> = [
        "t", "E", "E_L", "K", "J", "L4", "A_cum", "L2", "grad2", "kinetic", "damping_density", "sup_u",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for b in Ball::ALL {
        let l = b.label();
        for q in ["u2_in", "grad2_in", "u4_in", "u2_out", "grad2_out", "u4_out"] {
            cols.push(format!("{q}_{l}"));
        }
    }
    for s in Shell::ALL {
        let l = s.label();
        cols.push(format!("u2_{l}"));
        cols.push(format!("grad2_{l}"));
    }
    cols.join(",")
}

pub fn series_csv(series: &RunSeries) -> String {
    let mut out = series_header();
    out.push('\n');
    for (r, a) in series.records.iter().zip(&series.decrement) {
        let mut row = vec![
            r.t, r.energy, r.linear_energy, r.nehari, r.action, r.l4, *a, r.l2, r.grad2, r.kinetic,
            r.damping_density, r.sup_u,
        ];
        for b in &r.balls {
            row.extend([b.u2_inside, b.grad2_inside, b.u4_inside, b.u2_outside, b.grad2_outside, b.u4_outside]);
        }
        for s in &r.shells {
            row.extend([s.u2, s.grad2]);
        }
        let line: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}", line.join(",")).unwrap();
    }
    out
}

/// Empty cell for `None`.
pub fn cell(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io(dir))?;
    }
    std::fs::write(path, text).map_err(io(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}
