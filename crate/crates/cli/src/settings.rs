//! Flat `key = value` configuration with dotted namespaces.
//!
//! Blank lines and lines starting with `#` are ignored. Lists are comma
//! separated. Unknown and repeated keys are errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use kgdamp::config::GridSpec;
use kgdamp::damping::DampingShape;
use kgdamp::{AuditRadii, DataFamily, DampingSpec, RunConfig};

use crate::error::{io, CliError, Result};

pub const DEFAULT_MAX_RUNS: usize = 256;

const KEYS: &[&str] = &[
    "damping.shape",
    "damping.lambda0",
    "damping.lambda1",
    "damping.radius",
    "data.family",
    "data.amplitude",
    "data.sigma",
    "run.t_final",
    "run.dt",
    "run.blowup_threshold",
    "run.output_interval",
    "run.linear",
    "grid.r_max",
    "grid.n",
    "audit.radius",
    "audit.r1",
    "audit.r2",
    "audit.observation_times",
    "audit.decay_window_start",
    "ground_state.tol",
    "ground_state.cache",
    "sweep.amplitudes",
    "sweep.shapes",
    "sweep.lambda0",
    "sweep.lambda1",
    "sweep.radii",
    "sweep.max_runs",
];

/// Parameter lists whose Cartesian product a sweep runs; empty means "base value".
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepSpec {
    pub amplitudes: Vec<f64>,
    pub shapes: Vec<DampingShape>,
    pub lambda0: Vec<f64>,
    pub lambda1: Vec<f64>,
    pub radii: Vec<f64>,
    pub max_runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub run: RunConfig,
    /// audit radii set explicitly rather than following `damping.radius`
    pub explicit_radii: bool,
    /// grid set explicitly rather than sized from the data and `T`
    pub explicit_grid: bool,
    pub explicit_dt: bool,
    pub observation_times: Option<Vec<f64>>,
    pub decay_window_start: f64,
    pub ground_state_cache: Option<PathBuf>,
    pub sweep: SweepSpec,
}

struct Entry {
    line: usize,
    value: String,
}

struct Table<'a> {
    origin: &'a str,
    entries: BTreeMap<String, Entry>,
}

impl Table<'_> {
    fn err(&self, line: usize, message: String) -> CliError {
        CliError::Config {
            path: self.origin.to_string(),
            line,
            message,
        }
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse()
                .map(Some)
                .map_err(|err| self.err(e.line, format!("{key}: cannot parse {:?}: {err}", e.value))),
        }
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        let Some(e) = self.entries.get(key) else {
            return Ok(None);
        };
        e.value
            .split(',')
            .map(|item| {
                let item = item.trim();
                item.parse()
                    .map_err(|err| self.err(e.line, format!("{key}: cannot parse {item:?}: {err}")))
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }
}

fn parse_table<'a>(text: &str, origin: &'a str) -> Result<Table<'a>> {
    let mut table = Table {
        origin,
        entries: BTreeMap::new(),
    };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(table.err(line, format!("expected `key = value`, got {content:?}")));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(table.err(line, format!("unknown key {key:?}")));
        }
        if let Some(prev) = table.entries.get(key) {
            return Err(table.err(line, format!("{key} already set on line {}", prev.line)));
        }
        table.entries.insert(
            key.to_string(),
            Entry {
                line,
                value: value.to_string(),
            },
        );
    }
    Ok(table)
}

impl Settings {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let t = parse_table(text, origin)?;

        let damping = DampingSpec::new(
            t.get("damping.shape")?.unwrap_or(DampingShape::ExteriorPlateau),
            t.get("damping.lambda0")?.unwrap_or(0.5),
            t.get("damping.lambda1")?.unwrap_or(1.0),
            t.get("damping.radius")?.unwrap_or(2.0),
        );
        let amplitude: f64 = t.get("data.amplitude")?.unwrap_or(0.05);
        let sigma: f64 = t.get("data.sigma")?.unwrap_or(1.0);
        let family: String = t.get("data.family")?.unwrap_or_else(|| "gaussian".into());
        let data = match family.as_str() {
            "gaussian" => DataFamily::Gaussian { amplitude, sigma },
            "velocity_bump" => DataFamily::VelocityBump { amplitude, sigma },
            "scaled_ground_state" => DataFamily::ScaledGroundState { lambda: amplitude },
            other => {
                return Err(CliError::Settings(format!(
                    "data.family {other:?} is not one of gaussian, velocity_bump, scaled_ground_state"
                )))
            }
        };
        let t_final = t.get("run.t_final")?.unwrap_or(20.0);
        let mut run = RunConfig::new(damping, data, t_final);

        let r_max: Option<f64> = t.get("grid.r_max")?;
        let n: Option<usize> = t.get("grid.n")?;
        let explicit_grid = r_max.is_some() || n.is_some();
        run.grid = match (r_max, n) {
            (None, None) => run.grid,
            (Some(r_max), None) => GridSpec::covering(r_max, kgdamp::config::DEFAULT_DR),
            (Some(r_max), Some(n)) => GridSpec { r_max, n },
            (None, Some(_)) => return Err(CliError::Settings("grid.n needs grid.r_max".into())),
        };
        let dt: Option<f64> = t.get("run.dt")?;
        run.dt = dt.unwrap_or(0.5 * run.grid.dr());
        if let Some(m) = t.get("run.blowup_threshold")? {
            run.blowup_threshold = m;
        }
        if let Some(dt) = t.get("run.output_interval")? {
            run.output_interval = dt;
        }
        run.nonlinear = !t.get::<bool>("run.linear")?.unwrap_or(false);
        if let Some(tol) = t.get("ground_state.tol")? {
            run.ground_state_tol = tol;
        }

        let radius: Option<f64> = t.get("audit.radius")?;
        let r1: Option<f64> = t.get("audit.r1")?;
        let r2: Option<f64> = t.get("audit.r2")?;
        let explicit_radii = radius.is_some() || r1.is_some() || r2.is_some();
        let base = AuditRadii::from_radius(radius.unwrap_or(damping.radius));
        run.radii = AuditRadii {
            radius: base.radius,
            r1: r1.unwrap_or(base.r1),
            r2: r2.unwrap_or(base.r2),
        };

        let sweep = SweepSpec {
            amplitudes: t.list("sweep.amplitudes")?.unwrap_or_default(),
            shapes: t.list("sweep.shapes")?.unwrap_or_default(),
            lambda0: t.list("sweep.lambda0")?.unwrap_or_default(),
            lambda1: t.list("sweep.lambda1")?.unwrap_or_default(),
            radii: t.list("sweep.radii")?.unwrap_or_default(),
            max_runs: t.get("sweep.max_runs")?.unwrap_or(DEFAULT_MAX_RUNS),
        };

        Ok(Self {
            run,
            explicit_radii,
            explicit_grid,
            explicit_dt: dt.is_some(),
            observation_times: t.list("audit.observation_times")?,
            decay_window_start: t
                .get("audit.decay_window_start")?
                .unwrap_or(kgdamp::audit::DEFAULT_WINDOW_START),
            ground_state_cache: t.get::<String>("ground_state.cache")?.map(PathBuf::from),
            sweep,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io(path))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Defaults only.
    pub fn defaults() -> Self {
        Self::parse("", "<defaults>").expect("defaults parse")
    }

    /// Observation times: the configured ones, else `T/4, T/2, 3T/4, T`, all
    /// rounded to the output cadence.
    pub fn observation_times(&self) -> Vec<f64> {
        let run = &self.run;
        let cadence = run.output_stride() as f64 * run.dt;
        let snap = |t: f64| ((t / cadence).round() * cadence).min(run.t_final);
        match &self.observation_times {
            Some(ts) => ts.iter().map(|&t| snap(t)).collect(),
            None => (1..=4).map(|k| snap(0.25 * k as f64 * run.t_final)).collect(),
        }
    }

    /// Applies the command-line switches.
    pub fn with_flags(mut self, linear: bool, dense: bool) -> Self {
        if linear {
            self.run.nonlinear = false;
        }
        if dense {
            self.run.output_interval = self.run.dt;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let s = Settings::defaults();
        s.run.validate().unwrap();
        assert_eq!(s.run.damping.shape, DampingShape::ExteriorPlateau);
        assert_eq!(s.run.radii, AuditRadii::from_radius(2.0));
        assert_eq!(s.sweep.max_runs, DEFAULT_MAX_RUNS);
        assert_eq!(s.observation_times(), vec![5.0, 10.0, 15.0, 20.0]);
    }

    #[test]
    fn reads_values_and_lists() {
        let text = "# comment\n\ndamping.shape = constant\ndata.amplitude = 0.02\nsweep.amplitudes = 0.02, 0.04\nsweep.shapes = constant,exterior-band\ngrid.r_max = 30\ngrid.n = 3001\nrun.dt = 0.005\n";
        let s = Settings::parse(text, "t").unwrap();
        assert_eq!(s.run.damping.shape, DampingShape::Constant);
        assert_eq!(s.run.data.amplitude(), 0.02);
        assert_eq!(s.sweep.amplitudes, vec![0.02, 0.04]);
        assert_eq!(s.sweep.shapes, vec![DampingShape::Constant, DampingShape::ExteriorBand]);
        assert_eq!(s.run.grid, GridSpec { r_max: 30.0, n: 3001 });
        assert!(s.explicit_grid && s.explicit_dt);
    }

    #[test]
    fn reports_line_numbers() {
        let err = Settings::parse("data.sigma = 1\nbogus.key = 3\n", "f.cfg").unwrap_err();
        assert_eq!(err.to_string(), "f.cfg:2: unknown key \"bogus.key\"");
        let err = Settings::parse("data.sigma = x\n", "f.cfg").unwrap_err();
        assert!(err.to_string().starts_with("f.cfg:1: data.sigma"));
        let err = Settings::parse("data.sigma = 1\ndata.sigma = 2\n", "f.cfg").unwrap_err();
        assert!(err.to_string().contains("already set on line 1"));
        assert!(Settings::parse("no equals sign\n", "f").is_err());
    }

    #[test]
    fn radii_follow_damping_unless_set() {
        let s = Settings::parse("damping.radius = 3\n", "t").unwrap();
        assert_eq!(s.run.radii, AuditRadii::from_radius(3.0));
        let s = Settings::parse("damping.radius = 3\naudit.r2 = 8\n", "t").unwrap();
        assert_eq!(s.run.radii.r2, 8.0);
        assert!(s.explicit_radii);
    }
}
