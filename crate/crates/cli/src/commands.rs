use std::path::{Path, PathBuf};

use kgdamp::audit::{
    energy_identity_residual, fit_decay, morawetz_report, observation_report, DecayFit,
    MorawetzReport, MultiplierAccumulator, MultiplierLedger, ObservationReport, PsiAccumulator,
};
use kgdamp::evolution::run_observed;
use kgdamp::functionals::{build_cutoff, CutoffKind};
use kgdamp::ground_state::GroundStateReport;
use kgdamp::{
    classify, run, verify_ground_state, Classification, GroundState, Outcome, RadialGrid,
    RunConfig, RunSeries,
};
use serde::Serialize;

use crate::cache;
use crate::error::Result;
use crate::output::{series_csv, write_json, write_text};
use crate::settings::Settings;

/// Grid on which `h₀` is computed for data that do not need `Q` themselves.
pub const REFERENCE_RADIUS: f64 = 20.0;

/// Shared state for one invocation.
#[derive(Debug, Clone)]
pub struct Context {
    pub settings: Settings,
    pub out: PathBuf,
    pub seed: Option<u64>,
}

impl Context {
    pub fn config(&self) -> &RunConfig {
        &self.settings.run
    }

    fn cache(&self) -> Option<&Path> {
        self.settings.ground_state_cache.as_deref()
    }

    /// `Q` on the run grid, when the data need it.
    pub fn ground_for(&self, config: &RunConfig) -> Result<Option<GroundState>> {
        if !config.data.needs_ground_state() {
            return Ok(None);
        }
        let grid = config.grid.build()?;
        Ok(Some(cache::obtain(&grid, config.ground_state_tol, self.cache())?))
    }

    /// `Q` for the threshold `h₀`: the run's own when it has one, else on a
    /// reference grid with the run's spacing.
    pub fn threshold(&self, config: &RunConfig, own: Option<&GroundState>) -> Result<GroundState> {
        if let Some(gs) = own {
            return Ok(gs.clone());
        }
        let grid = RadialGrid::with_spacing(REFERENCE_RADIUS, config.grid.dr())?;
        cache::obtain(&grid, config.ground_state_tol, self.cache())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroundStateSummary {
    pub r_max: f64,
    pub n: usize,
    pub q0: f64,
    pub h0: f64,
    pub l2: f64,
    pub grad2: f64,
    pub l4: f64,
    pub matching_radius: f64,
    pub tol: f64,
    pub report: GroundStateReport,
}

pub fn cmd_ground_state(ctx: &Context) -> Result<GroundStateSummary> {
    let config = ctx.config();
    let grid = if ctx.settings.explicit_grid {
        config.grid.build()?
    } else {
        RadialGrid::with_spacing(REFERENCE_RADIUS, config.grid.dr())?
    };
    let gs = cache::obtain(&grid, config.ground_state_tol, ctx.cache())?;
    cache::store(&gs, &ctx.out.join("ground_state.txt"))?;
    let summary = GroundStateSummary {
        r_max: grid.r_max(),
        n: grid.len(),
        q0: gs.q0,
        h0: gs.h0,
        l2: gs.l2,
        grad2: gs.grad2,
        l4: gs.l4,
        matching_radius: gs.matching_radius,
        tol: gs.tol,
        report: verify_ground_state(&gs),
    };
    write_json(&ctx.out.join("ground_state.json"), &summary)?;
    Ok(summary)
}

pub fn cmd_classify(ctx: &Context) -> Result<Classification> {
    let config = ctx.config();
    let own = ctx.ground_for(config)?;
    let threshold = ctx.threshold(config, own.as_ref())?;
    let grid = config.grid.build()?;
    let state = kgdamp::evolution::init_state(&config.data, &grid, own.as_ref())?;
    let c = classify(&state, threshold.h0, &grid)?;
    write_json(&ctx.out.join("classification.json"), &c)?;
    Ok(c)
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub config: RunConfig,
    pub seed: Option<u64>,
    pub outcome: Outcome,
    pub samples: usize,
    pub initial: Classification,
    pub energy_initial: f64,
    pub linear_energy_initial: f64,
    pub energy_final: f64,
    pub decrement_final: f64,
    /// `max |E(t) − E(0) + A[0,t]| / E(0)`
    pub energy_residual: f64,
    pub decay: Option<DecayFit>,
    pub decay_note: Option<String>,
    pub observation: Option<ObservationReport>,
}

pub(crate) fn summarize(
    ctx: &Context,
    config: &RunConfig,
    series: &RunSeries,
    initial: Classification,
) -> RunSummary {
    let first = &series.records[0];
    let last = series.records.last().unwrap_or(first);
    let (decay, decay_note) = if !series.outcome.is_global() {
        (None, Some("run blew up".to_string()))
    } else {
        match fit_decay(series, ctx.settings.decay_window_start) {
            Ok(fit) => (Some(fit), None),
            Err(e) => (None, Some(e.to_string())),
        }
    };
    let mut settings = ctx.settings.clone();
    settings.run = config.clone();
    let observation = series
        .outcome
        .is_global()
        .then(|| observation_report(series, &settings.observation_times()).ok())
        .flatten();
    RunSummary {
        config: config.clone(),
        seed: ctx.seed,
        outcome: series.outcome,
        samples: series.len(),
        initial,
        energy_initial: first.energy,
        linear_energy_initial: first.linear_energy,
        energy_final: last.energy,
        decrement_final: series.decrement.last().copied().unwrap_or(0.0),
        energy_residual: energy_identity_residual(series).max_relative,
        decay,
        decay_note,
        observation,
    }
}

/// Runs one configuration and writes its series and summary under `dir`.
pub(crate) fn simulate_into(ctx: &Context, config: &RunConfig, dir: &Path) -> Result<RunSummary> {
    let own = ctx.ground_for(config)?;
    let threshold = ctx.threshold(config, own.as_ref())?;
    let grid = config.grid.build()?;
    let initial = kgdamp::evolution::init_state(&config.data, &grid, own.as_ref())?;
    let initial = classify(&initial, threshold.h0, &grid)?;
    let series = run(config, own.as_ref())?;
    write_text(&dir.join("series.csv"), &series_csv(&series))?;
    let summary = summarize(ctx, config, &series, initial);
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}

pub fn cmd_simulate(ctx: &Context) -> Result<RunSummary> {
    simulate_into(ctx, ctx.config(), &ctx.out)
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditSummary {
    pub multiplier: MultiplierLedger,
    pub morawetz: Option<MorawetzReport>,
    pub morawetz_note: Option<String>,
    pub energy_residual: f64,
    pub energy_residual_partial: bool,
}

/// Runs with every step streamed through the multiplier accumulators.
pub fn cmd_audit(ctx: &Context) -> Result<(RunSummary, AuditSummary)> {
    let config = ctx.config();
    let own = ctx.ground_for(config)?;
    let threshold = ctx.threshold(config, own.as_ref())?;
    let grid = config.grid.build()?;
    let damping = config.damping_profile(&grid)?;
    let phi = build_cutoff(CutoffKind::Phi, config.radii, &grid)?;
    let psi = build_cutoff(CutoffKind::Psi, config.radii, &grid)?;
    let initial = kgdamp::evolution::init_state(&config.data, &grid, own.as_ref())?;
    let initial = classify(&initial, threshold.h0, &grid)?;

    let mut ledger = MultiplierAccumulator::new(&phi, damping.values(), &grid, config.dt)?;
    let mut psi_acc = PsiAccumulator::new(&psi, damping.values(), &grid, config.dt)?;
    let series = run_observed(config, own.as_ref(), |s| {
        ledger.push(s)?;
        psi_acc.push(s)
    })?;
    let mut multiplier = ledger.finish();
    let psi_res = psi_acc.finish();
    multiplier.psi_residual = Some(psi_res.residual);
    multiplier.psi_scale = Some(psi_res.scale);

    let (morawetz, morawetz_note) = match morawetz_report(&series) {
        Ok(m) => (Some(m), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let energy = energy_identity_residual(&series);
    let audit = AuditSummary {
        multiplier,
        morawetz,
        morawetz_note,
        energy_residual: energy.max_relative,
        energy_residual_partial: energy.partial,
    };
    write_text(&ctx.out.join("series.csv"), &series_csv(&series))?;
    let summary = summarize(ctx, config, &series, initial);
    write_json(&ctx.out.join("summary.json"), &summary)?;
    write_json(&ctx.out.join("audit.json"), &audit)?;
    Ok((summary, audit))
}
